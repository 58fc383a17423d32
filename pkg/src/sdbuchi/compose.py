"""Composition of local solutions and the one-shot bottom-up checker."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ArityError, SizeGuardError, ValidationError
from .romdp import Diagram, Leaf, Seq, Sum, Trace, path_str, wiring
from .solution import DEFAULT_GUARD, SENTINEL, WIN, Effect, Solution, local_solution


def _grow(acc: set, row, guard: int) -> set:
    if len(acc) * len(row) > guard:
        raise SizeGuardError(f"intermediate effect product {len(acc)}x{len(row)} exceeds guard {guard}")
    return {Effect(a.mask | y.mask, a.buchi or y.buchi) for a in acc for y in row}


def seq_solutions(s1: Solution, s2: Solution, guard: int = DEFAULT_GUARD) -> Solution:
    """Each effect ``⟨{x1..xN},b⟩`` of ``s1`` becomes ``⟨∅,b⟩ ⊔ Y1 ⊔ .. ⊔ YN`` for all ``Yk ∈ s2(xk)``."""
    if s1.n_exits != len(s2.rows):
        raise ArityError(f"sequential composition of solutions {s1.arity} and {s2.arity}")
    rows = []
    memo = {}
    for r in s1.rows:
        out = set()
        for e in r:
            got = memo.get(e)
            if got is None:
                acc = {Effect(0, e.buchi)}
                mask, k = e.mask, 0
                while mask and acc:
                    if mask & 1:
                        acc = _grow(acc, s2.rows[k], guard)
                    mask >>= 1
                    k += 1
                got = memo[e] = acc
            out |= got
            if len(out) > guard:
                raise SizeGuardError(f"effect set of size {len(out)} exceeds guard {guard}")
        rows.append(out)
    return Solution(rows, s2.n_exits)


def sum_solutions(s1: Solution, s2: Solution) -> Solution:
    shift = s1.n_exits
    rows = list(s1.rows)
    rows += [{Effect(e.mask << shift, e.buchi) for e in r} for r in s2.rows]
    return Solution(rows, s1.n_exits + s2.n_exits)


def trace_solution(s: Solution, guard: int = DEFAULT_GUARD) -> Solution:
    """Loop the last exit back to the last entrance."""
    m, n = len(s.rows) - 1, s.n_exits - 1
    if m < 0 or n < 0:
        raise ArityError(f"trace of a solution with arity {s.arity}")
    last = 1 << n
    loop = [e for e in s.rows[m] if e != Effect(last, False)]
    rows = []
    for r in s.rows[:m]:
        out = set()
        for e in r:
            if not e.mask & last:
                out.add(e)
                continue
            if len(out) + len(loop) > guard:
                raise SizeGuardError(f"effect set exceeds guard {guard}")
            for e2 in loop:
                out.add(Effect((e.mask | e2.mask) & ~last, e.buchi or e2.buchi))
        rows.append(out)
    return Solution(rows, n)


@dataclass
class BottomUpStats:
    leaf_computations: int = 0
    compositions: int = 0
    hits: int = 0
    leaf_hits: int = 0
    node_effects: dict = field(default_factory=dict)   # path string -> per-entrance sizes

    @property
    def max_effects(self) -> int:
        return max((max(v, default=0) for v in self.node_effects.values()), default=0)

    def as_dict(self):
        return {"leaf_computations": self.leaf_computations, "compositions": self.compositions,
                "hits": self.hits, "leaf_hits": self.leaf_hits, "max_effects": self.max_effects,
                "node_effects": dict(self.node_effects)}


@dataclass
class BottomUpResult:
    verdicts: dict          # ComponentEntrance (global entrance) -> bool
    solution: Solution
    nodes: dict             # path tuple -> Solution
    stats: BottomUpStats


SHARING_MODES = ("off", "term", "solution")


def _leaf_key(a):
    return ("leaf", a.graph, a.entrances, a.exits)


def bottom_up(d: Diagram, *, sharing: str = "solution", guard_effects: int = DEFAULT_GUARD) -> BottomUpResult:
    """Solutions of every subdiagram, leaves first; verdicts for the global entrances.

    ``sharing`` selects the reuse cache: ``"solution"`` keys composite nodes by
    the fingerprints of their child solutions (and leaves by structure),
    ``"term"`` keys by the subterm itself, ``"off"`` recomputes everything.
    """
    if sharing not in SHARING_MODES:
        raise ValidationError(f"unknown sharing mode {sharing!r}")
    stats = BottomUpStats()
    cache = {}
    nodes = {}

    def lookup(key, is_leaf):
        if sharing == "off" or key not in cache:
            return None
        stats.hits += 1
        if is_leaf:
            stats.leaf_hits += 1
        return cache[key]

    def walk(t, p):
        try:
            sol = _node(t, p)
        except SizeGuardError as err:
            if err.where is None:
                raise err.located(f"subtree {path_str(p)}") from None
            raise
        nodes[p] = sol
        stats.node_effects[path_str(p)] = sol.sizes()
        return sol

    def _node(t, p):
        if isinstance(t, Leaf):
            a = d.leaves[t.name]
            key = t if sharing == "term" else _leaf_key(a)
            sol = lookup(key, True)
            if sol is None:
                sol = local_solution(a, guard_effects)
                stats.leaf_computations += 1
                cache[key] = sol
            return sol
        kids = [walk(c, p + (k,)) for k, c in enumerate(_children(t))]
        if sharing == "term":
            key = t
        else:
            key = (type(t).__name__,) + tuple(s.fingerprint() for s in kids)
        sol = lookup(key, False)
        if sol is None:
            if isinstance(t, Seq):
                sol = seq_solutions(kids[0], kids[1], guard_effects)
            elif isinstance(t, Sum):
                sol = sum_solutions(kids[0], kids[1])
            else:
                sol = trace_solution(kids[0], guard_effects)
            stats.compositions += 1
            cache[key] = sol
        return sol

    root = walk(d.term, ())
    entrances = wiring(d).entrances
    verdicts = {ce: WIN in root.rows[k] for k, ce in enumerate(entrances)}
    return BottomUpResult(verdicts, root, nodes, stats)


def _children(t):
    if isinstance(t, Trace):
        return (t.child,)
    return (t.left, t.right)


def bottom_up_check(d: Diagram, j: int, **kw) -> bool:
    """Verdict for 1-based global entrance ``j``."""
    res = bottom_up(d, **kw)
    if not 1 <= j <= len(res.solution.rows):
        raise ValidationError(f"global entrance {j} out of range")
    return WIN in res.solution.rows[j - 1]


__all__ = ["seq_solutions", "sum_solutions", "trace_solution", "bottom_up", "bottom_up_check",
           "BottomUpResult", "BottomUpStats", "SHARING_MODES", "SENTINEL"]
