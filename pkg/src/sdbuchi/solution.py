"""No-lose strategies, effects, local solutions and maximum effects.

Exit sets are stored as bitmasks: bit ``k-1`` stands for exit ``k``.
"""
from __future__ import annotations

from itertools import product
from typing import NamedTuple

from .errors import ContractError, SizeGuardError, ValidationError
from .graph import _reach, check_strategy, safe_strategy, winning_region
from .romdp import RoMdp

DEFAULT_GUARD = 2 ** 20


class Effect(NamedTuple):
    mask: int
    buchi: bool

    @classmethod
    def of(cls, exits=(), buchi=False) -> "Effect":
        mask = 0
        for k in exits:
            if k < 1:
                raise ValidationError(f"exit index {k} must be >= 1")
            mask |= 1 << (k - 1)
        return cls(mask, bool(buchi))

    @property
    def exits(self) -> frozenset:
        return frozenset(mask_indices(self.mask))

    def __str__(self):
        ex = ",".join(map(str, mask_indices(self.mask)))
        return f"<{{{ex}}},{'T' if self.buchi else 'F'}>"


SENTINEL = Effect(0, False)
WIN = Effect(0, True)


def mask_indices(mask: int) -> list:
    out, k = [], 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def effect_join(e1: Effect, e2: Effect) -> Effect:
    return Effect(e1.mask | e2.mask, e1.buchi or e2.buchi)


def effect_leq(e1: Effect, e2: Effect) -> bool:
    """``T1 ⊂ T2  or  (T1 ⊆ T2 and b1 <= b2)``."""
    if e1.mask & ~e2.mask:
        return False
    return e1.mask != e2.mask or e1.buchi <= e2.buchi


def sort_key(e: Effect):
    return (bin(e.mask).count("1"), mask_indices(e.mask), e.buchi)


class Solution:
    """Per-entrance effect sets of an ``m -> n`` roMDP (or diagram)."""

    __slots__ = ("rows", "n_exits", "_fp")

    def __init__(self, rows, n_exits: int):
        self.rows = tuple(frozenset(r) for r in rows)
        self.n_exits = n_exits
        self._fp = None

    @property
    def arity(self):
        return len(self.rows), self.n_exits

    def row(self, i: int) -> frozenset:
        if not 1 <= i <= len(self.rows):
            raise ValidationError(f"entrance index {i} out of range 1..{len(self.rows)}")
        return self.rows[i - 1]

    def sizes(self) -> list:
        return [len(r) for r in self.rows]

    def fingerprint(self) -> str:
        if self._fp is None:
            parts = [f"{len(self.rows)}->{self.n_exits}"]
            for r in self.rows:
                parts.append(" ".join(str(e) for e in sorted(r, key=sort_key)))
            self._fp = "|".join(parts)
        return self._fp

    def check_invariants(self):
        """Raise AssertionError if a row holds the sentinel or is not join-closed."""
        limit = 1 << self.n_exits
        for k, r in enumerate(self.rows, 1):
            assert SENTINEL not in r, f"entrance {k}: sentinel stored"
            for e in r:
                assert e.mask < limit, f"entrance {k}: effect {e} has exit beyond {self.n_exits}"
            for e1 in r:
                for e2 in r:
                    assert effect_join(e1, e2) in r, f"entrance {k}: not join-closed"

    def __eq__(self, other):
        return isinstance(other, Solution) and self.n_exits == other.n_exits and self.rows == other.rows

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"Solution({self.fingerprint()})"


def _entrance(a: RoMdp, i) -> int:
    if not isinstance(i, int) or not 1 <= i <= len(a.entrances):
        raise ValidationError(f"{i!r} is not an entrance index (1..{len(a.entrances)})", item=i)
    return a.entrances[i - 1]


def _effect_from_reach(a: RoMdp, r) -> Effect:
    mask = 0
    for k, x in enumerate(a.exits):
        if x in r:
            mask |= 1 << k
    return Effect(mask, any(b in r for b in a.graph.buchi))


def _no_lose(a: RoMdp, v0: int, s: dict) -> bool:
    g = a.graph
    r = _reach(g, s, (v0,))
    for v, c in s.items():
        if c and v not in r:
            return False
    # backward closure of O ∪ B inside the strategy-induced graph
    good = {v for v in r if v in g.buchi}
    good.update(x for x in a.exits if x in r)
    stack = list(good)
    while stack:
        w = stack.pop()
        for u in g.pred[w]:
            if u in r and u not in good and (not g.is_player1(u) or w in s.get(u, ())):
                good.add(u)
                stack.append(u)
    return len(good) == len(r)


def is_no_lose(a: RoMdp, i: int, s) -> bool:
    """Is ``s`` local to entrance ``i`` with every reachable vertex able to reach an exit or B?"""
    v0 = _entrance(a, i)
    return _no_lose(a, v0, check_strategy(a.graph, s))


def effect_of(a: RoMdp, i: int, s) -> Effect:
    v0 = _entrance(a, i)
    s = check_strategy(a.graph, s)
    if not _no_lose(a, v0, s):
        raise ContractError(f"strategy is not no-lose from entrance {i}")
    return _effect_from_reach(a, _reach(a.graph, s, (v0,)))


def _mask_exits(a: RoMdp, mask: int) -> frozenset:
    return frozenset(x for k, x in enumerate(a.exits) if mask >> k & 1)


def _targets(a, mask, avoid_buchi=False):
    exits = _mask_exits(a, mask)
    return exits if avoid_buchi else exits | a.graph.buchi


def _max_effect_vertex(a: RoMdp, v0: int, allowed_mask: int, *, avoid_buchi=False, _w=None):
    g = a.graph
    forbidden = g.buchi if avoid_buchi else ()
    if _w is None:
        _w = winning_region(g, _targets(a, allowed_mask, avoid_buchi), forbidden=forbidden)
    if v0 not in _w:
        return SENTINEL
    s = safe_strategy(g, _w, forbidden=forbidden, target=g.buchi)
    return _effect_from_reach(a, _reach(g, s, (v0,)))


def max_effect(a: RoMdp, i: int, allowed) -> Effect:
    """⊑-greatest effect of entrance ``i`` whose exits lie in ``allowed`` (1-based).

    Returns ``⟨∅,⊥⟩`` when no such effect exists.
    """
    v0 = _entrance(a, i)
    mask = 0
    for k in allowed:
        if not 1 <= k <= len(a.exits):
            raise ValidationError(f"exit index {k} out of range 1..{len(a.exits)}", item=k)
        mask |= 1 << (k - 1)
    return _max_effect_vertex(a, v0, mask)


def max_effect_mask(a: RoMdp, i: int, allowed_mask: int) -> Effect:
    return _max_effect_vertex(a, _entrance(a, i), allowed_mask)


def local_solution(a: RoMdp, guard_effects: int = DEFAULT_GUARD) -> Solution:
    """Exact set of no-lose effects per entrance.

    For each exit mask T: ``⟨T,⊤⟩`` is achievable iff the maximum effect under
    allowed set T is exactly ``⟨T,⊤⟩``; ``⟨T,⊥⟩`` is achievable iff the maximum
    effect among Büchi-avoiding strategies under allowed set T has exit set T.
    The winning regions depend only on T, so they are shared by all entrances.
    """
    n = len(a.exits)
    if (1 << (n + 1)) > guard_effects:
        raise SizeGuardError(f"local solution of a roMDP with {n} exits exceeds the effect guard "
                             f"({1 << (n + 1)} > {guard_effects})")
    g = a.graph
    rows = [set() for _ in a.entrances]
    for mask in range(1 << n):
        w_top = winning_region(g, _targets(a, mask))
        w_bot = winning_region(g, _targets(a, mask, True), forbidden=g.buchi)
        for k, v0 in enumerate(a.entrances):
            if v0 in w_top:
                e = _max_effect_vertex(a, v0, mask, _w=w_top)
                if e == Effect(mask, True):
                    rows[k].add(e)
            if mask and v0 in w_bot:
                e = _max_effect_vertex(a, v0, mask, avoid_buchi=True, _w=w_bot)
                if e.mask == mask:
                    rows[k].add(Effect(mask, False))
    return Solution(rows, n)


def brute_force_solution(a: RoMdp, i: int, *, max_player1=12, max_strategies=10 ** 6) -> frozenset:
    """Effects of entrance ``i`` by enumerating every memoryless randomized strategy."""
    v0 = _entrance(a, i)
    g = a.graph
    movers = [v for v in g.player1 if g.succ[v]]
    if len(g.player1) > max_player1:
        raise SizeGuardError(f"{len(g.player1)} player-1 vertices exceed the brute-force guard {max_player1}")
    total = 1
    for v in movers:
        total *= 1 << len(g.succ[v])
    if total > max_strategies:
        raise SizeGuardError(f"{total} strategies exceed the brute-force guard {max_strategies}")
    options = []
    for v in movers:
        succ = g.succ[v]
        options.append([frozenset(w for k, w in enumerate(succ) if bits >> k & 1)
                        for bits in range(1 << len(succ))])
    out = set()
    for choice in product(*options):
        s = {v: c for v, c in zip(movers, choice) if c}
        if _no_lose(a, v0, s):
            out.add(_effect_from_reach(a, _reach(g, s, (v0,))))
    return frozenset(out)


def brute_force_local_solution(a: RoMdp, **kw) -> Solution:
    return Solution([brute_force_solution(a, k, **kw) for k in range(1, len(a.entrances) + 1)],
                    len(a.exits))
