"""Random diagrams for differential testing, plus the exit-scaling family."""
from __future__ import annotations

import random
from dataclasses import dataclass, asdict

from .errors import ValidationError
from .romdp import Diagram, Leaf, RoMdp, Seq, Sum, Trace, children


@dataclass
class Profile:
    leaves: int = 5             # leaf occurrences in the term
    vertices: int = 12          # upper bound on vertices per leaf
    max_arity: int = 3
    trace_bias: float = 0.45
    buchi_density: float = 0.25
    share: float = 0.2          # chance that a leaf occurrence reuses an existing leaf

    def check(self):
        if self.leaves < 1:
            raise ValidationError("profile needs at least one leaf")
        if self.max_arity < 0:
            raise ValidationError("max arity must be non-negative")
        if self.vertices < 2 * self.max_arity + 1:
            raise ValidationError(f"{self.vertices} vertices per leaf cannot hold {self.max_arity} "
                                  f"entrances, {self.max_arity} exits and a probabilistic vertex")
        for name in ("trace_bias", "buchi_density", "share"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")
        return self

    def as_dict(self):
        return asdict(self)


def random_leaf(rng: random.Random, m: int, n: int, max_vertices: int = 12, buchi_density: float = 0.25,
                max_out: int = 3) -> RoMdp:
    """An ``m -> n`` roMDP whose alternation and open ends hold by construction."""
    lo = m + n + 1
    if max_vertices < lo:
        raise ValidationError(f"cannot fit a {m}->{n} leaf into {max_vertices} vertices")
    total = rng.randint(min(lo + 1, max_vertices), max_vertices)
    inner = total - m - n
    n_prob = rng.randint(1, max(1, inner - (inner // 3)))
    n_mid = inner - n_prob
    ens = [f"i{k}" for k in range(1, m + 1)]
    exs = [f"o{k}" for k in range(1, n + 1)]
    mids = [f"u{k}" for k in range(1, n_mid + 1)]
    probs = [f"p{k}" for k in range(1, n_prob + 1)]
    edges = []
    for v in ens + mids:
        # entrances almost always move; inner vertices sometimes dead-end
        low = 1 if v in ens or rng.random() < 0.85 else 0
        for w in rng.sample(probs, rng.randint(low, min(max_out, n_prob))):
            edges.append((v, w))
    targets = mids + exs
    for p in probs:
        if not targets:
            break
        for w in rng.sample(targets, rng.randint(1, min(max_out, len(targets)))):
            edges.append((p, w))
    buchi = [p for p in probs if rng.random() < buchi_density]
    return RoMdp.from_labels(ens + exs + mids, probs, edges, ens, exs, buchi)


class _Builder:
    def __init__(self, rng, profile: Profile):
        self.rng = rng
        self.p = profile
        self.leaves = {}

    def arity_of(self, name):
        return self.leaves[name].arity

    def existing(self, pred):
        return [name for name in self.leaves if pred(self.arity_of(name))]

    def leaf(self, m, n):
        rng = self.rng
        same = self.existing(lambda a: a == (m, n))
        if same and rng.random() < self.p.share:
            return Leaf(rng.choice(same))
        name = f"L{len(self.leaves) + 1}"
        self.leaves[name] = random_leaf(rng, m, n, self.p.vertices, self.p.buchi_density)
        return Leaf(name)

    def can_trace(self, m, n):
        return m + 1 <= self.p.max_arity and n + 1 <= self.p.max_arity and self.p.trace_bias > 0

    def build(self, m, n, budget):
        rng, A = self.rng, self.p.max_arity
        if self.can_trace(m, n) and rng.random() < self.p.trace_bias:
            return Trace(self.build(m + 1, n + 1, budget))
        if budget == 1:
            return self.leaf(m, n)
        if rng.random() < self.p.share:
            dup = self.duplicate(m, n, budget)
            if dup is not None:
                return dup
        b1 = rng.randint(1, budget - 1)
        b2 = budget - b1
        if rng.random() < 0.5:
            l = rng.randint(0, A)
            if rng.random() < self.p.share:
                if b1 == 1:
                    fits = self.existing(lambda a: a[0] == m)
                    if fits:
                        l = self.arity_of(rng.choice(fits))[1]
                elif b2 == 1:
                    fits = self.existing(lambda a: a[1] == n)
                    if fits:
                        l = self.arity_of(rng.choice(fits))[0]
            return Seq(self.build(m, l, b1), self.build(l, n, b2))
        m1, n1 = rng.randint(0, m), rng.randint(0, n)
        if rng.random() < self.p.share and (b1 == 1 or b2 == 1):
            fits = self.existing(lambda a: a[0] <= m and a[1] <= n)
            if fits:
                a, b = self.arity_of(rng.choice(fits))
                m1, n1 = (a, b) if b1 == 1 else (m - a, n - b)
        return Sum(self.build(m1, n1, b1), self.build(m - m1, n - n1, b2))


    def duplicate(self, m, n, budget):
        """Reuse one subterm twice: ``sum(T, T)`` or ``seq(T, T)``, padded to ``budget`` leaves."""
        half = budget // 2
        if m % 2 == 0 and n % 2 == 0:
            t = self.build(m // 2, n // 2, half)
            core = Sum(t, t)
        elif m == n:
            t = self.build(m, m, half)
            core = Seq(t, t)
        elif budget >= 3:
            half = (budget - 1) // 2
            t = self.build(m, m, half)
            core = Seq(t, t)
        else:
            return None
        rest = budget - 2 * half
        if rest == 0:
            return core
        if m == n or m % 2 == 0 and n % 2 == 0:
            return Seq(core, self.build(n, n, rest))
        return Seq(core, self.build(m, n, rest))


def random_diagram(seed: int, profile: Profile | None = None) -> Diagram:
    """Deterministic in ``seed``; every leaf and every composite obeys the arity discipline."""
    p = (profile or Profile()).check()
    rng = random.Random(seed)
    b = _Builder(rng, p)
    budget = p.leaves
    m = rng.randint(1, p.max_arity) if p.max_arity else 0
    n = rng.randint(0, p.max_arity)
    term = b.build(m, n, budget)
    used = set()

    def names(t):
        if isinstance(t, Leaf):
            used.add(t.name)
        for c in children(t):
            names(c)

    names(term)
    return Diagram(term, {k: v for k, v in b.leaves.items() if k in used})


def count_nodes(term) -> dict:
    out = {"Leaf": 0, "Seq": 0, "Sum": 0, "Trace": 0}

    def walk(t):
        out[type(t).__name__] += 1
        for c in children(t):
            walk(c)

    walk(term)
    return out


def exitblow_leaf(k: int) -> RoMdp:
    """2 -> k leaf: from either entrance every nonempty exit subset is reachable, no Büchi vertex."""
    exits = [f"o{j}" for j in range(1, k + 1)]
    probs, edges = [], []
    for en in ("i", "e"):
        for j in range(1, k + 1):
            p = f"{en}p{j}"
            probs.append(p)
            edges += [(en, p), (p, f"o{j}")]
    return RoMdp.from_labels(["i", "e"] + exits, probs, edges, ["i", "e"], exits)


def exitblow_partner(k: int) -> RoMdp:
    """k -> 1 leaf funnelling every entrance through a Büchi vertex to its only exit."""
    ens = [f"f{j}" for j in range(1, k + 1)]
    probs = [f"q{j}" for j in range(1, k + 1)] + ["r"]
    edges = []
    for j in range(1, k + 1):
        edges += [(f"f{j}", f"q{j}"), (f"q{j}", "g")]
    edges += [("g", "r"), ("r", "x")]
    return RoMdp.from_labels(ens + ["g", "x"], probs, edges, ens, ["x"], ["r"])


def exitblow(k: int) -> Diagram:
    """``trace(seq(X_k, P_k))``: a 1 -> 0 diagram whose leaf solution has ``2^k - 1`` effects."""
    if k < 1:
        raise ValidationError("exitblow needs k >= 1")
    return Diagram(Trace(Seq(Leaf("X"), Leaf("P"))), {"X": exitblow_leaf(k), "P": exitblow_partner(k)})
