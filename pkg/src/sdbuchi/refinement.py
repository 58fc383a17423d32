"""Strategy refinement over configurations of maximum effects.

Only one effect per live component entrance is ever materialized; each
outer round asks every live entrance for its maximum effect restricted to
exits that lead back into the current live set.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .graph import MdpGraph, buchi_operator, can_reach
from .romdp import Diagram, cpi, exit_table
from .solution import SENTINEL, Effect, max_effect_mask

CACHE_MODES = ("off", "exact", "monotone")
INIT_MODES = ("repaired", "literal")


class MaxEffectCache:
    """Remembers maximum-effect queries per (leaf, entrance).

    ``exact`` answers repeated identical queries.  ``monotone`` also answers
    a query ``Y''`` from a record ``(Y, ⟨Y',b⟩)`` whenever ``Y' ⊆ Y'' ⊆ Y``.
    """

    def __init__(self, mode: str = "monotone"):
        if mode not in CACHE_MODES:
            raise ValidationError(f"unknown cache mode {mode!r}")
        self.mode = mode
        self.records = {}
        self.hits = 0
        self.misses = 0

    def lookup(self, key, allowed: int):
        recs = self.records.get(key)
        if not recs:
            return None
        if self.mode == "exact":
            return recs.get(allowed)
        for y, e in recs.items():
            if allowed & ~y == 0 and e.mask & ~allowed == 0:
                return e
        return None

    def get(self, key, allowed: int, compute):
        if self.mode != "off":
            e = self.lookup(key, allowed)
            if e is not None:
                self.hits += 1
                return e
        self.misses += 1
        e = compute()
        if self.mode != "off":
            self.records.setdefault(key, {})[allowed] = e
        return e

    def stats(self):
        return {"mode": self.mode, "hits": self.hits, "misses": self.misses,
                "records": sum(len(r) for r in self.records.values())}


class Refiner:
    """Per-diagram state shared by the refinement operator and the outer loop."""

    def __init__(self, d: Diagram, cache="monotone"):
        self.diagram = d
        self.entrances = cpi(d)
        self.index = {ce: k for k, ce in enumerate(self.entrances)}
        self.table = exit_table(d)
        occ = d.occurrences()
        self.leaf = {path: d.leaves[name] for path, name in occ.items()}
        self.cache = cache if isinstance(cache, MaxEffectCache) else MaxEffectCache(cache)
        self.calls = 0

    def connected_mask(self, path) -> int:
        mask = 0
        for k, t in enumerate(self.table[path]):
            if t is not None:
                mask |= 1 << k
        return mask

    def allowed_mask(self, path, live) -> int:
        """Exits glued to an entrance inside ``live``."""
        mask = 0
        for k, t in enumerate(self.table[path]):
            if t is not None and t in live:
                mask |= 1 << k
        return mask

    def targets(self, ce, e: Effect) -> set:
        glue = self.table[ce.path]
        out, mask, k = set(), e.mask, 0
        while mask:
            if mask & 1 and glue[k] is not None:
                out.add(glue[k])
            mask >>= 1
            k += 1
        return out

    def max_effect(self, ce, allowed: int) -> Effect:
        self.calls += 1
        a = self.leaf[ce.path]
        key = (a.graph, a.entrances, a.exits, ce.index)
        return self.cache.get(key, allowed, lambda: max_effect_mask(a, ce.index, allowed))

    def operator(self, x, y) -> frozenset:
        """The refinement Büchi operator ``F'(X, Y)`` on component entrances."""
        x, y = set(x), set(y)
        out = set()
        for ce in self.entrances:
            e = self.max_effect(ce, self.allowed_mask(ce.path, y))
            if e == SENTINEL:
                continue
            if e.buchi or self.targets(ce, e) & x:
                out.add(ce)
        return frozenset(out)

    def configuration_graph(self, conf: dict) -> MdpGraph:
        """One effect vertex per live entrance; Büchi iff the effect's bit is set."""
        n = len(self.entrances)
        edges, buchi, prob = [], [], []
        for ce in self.entrances:
            e = conf.get(ce, SENTINEL)
            if e == SENTINEL:
                continue
            v = n + len(prob)
            prob.append(v)
            i = self.index[ce]
            edges.append((i, v))
            ts = self.targets(ce, e)
            if e.mask == 0:
                edges.append((v, i))
            edges.extend((v, self.index[t]) for t in ts)
            if e.buchi:
                buchi.append(v)
        return MdpGraph(range(n), prob, edges, buchi)


@dataclass
class RefinementResult:
    live: frozenset
    configuration: dict
    iterations: int
    max_effect_calls: int
    events: list = field(default_factory=list)
    cache: dict = field(default_factory=dict)

    def verdict(self, ce) -> bool:
        return ce in self.live


def strat_ref(d: Diagram, *, cache="monotone", init: str = "repaired") -> RefinementResult:
    """Iterate configurations until they stop changing; the live set is the winning set.

    ``init="repaired"`` starts from exits that are glued somewhere;
    ``init="literal"`` starts from all exits of each leaf.
    """
    if init not in INIT_MODES:
        raise ValidationError(f"unknown init mode {init!r}")
    r = Refiner(d, cache)
    nxt = {}
    for ce in r.entrances:
        path = ce.path
        allowed = r.connected_mask(path) if init == "repaired" else (1 << len(r.table[path])) - 1
        nxt[ce] = r.max_effect(ce, allowed)
    events = []
    iterations = 0
    prev_live = frozenset(r.entrances)
    while True:
        conf = nxt
        iterations += 1
        g = r.configuration_graph(conf)
        reached = can_reach(g, g.buchi)
        live = frozenset(ce for ce in r.entrances if r.index[ce] in reached)
        nxt = {}
        for ce in r.entrances:
            nxt[ce] = r.max_effect(ce, r.allowed_mask(ce.path, live)) if ce in live else SENTINEL
        events.append({
            "iteration": iterations,
            "live": [str(ce) for ce in r.entrances if ce in live],
            "pruned": [str(ce) for ce in r.entrances if ce in prev_live and ce not in live],
            "configuration": {str(ce): str(conf[ce]) for ce in r.entrances},
            "next": {str(ce): str(nxt[ce]) for ce in r.entrances},
            "max_effect_calls": r.calls,
            "cache": r.cache.stats(),
        })
        if nxt == conf:
            break
        prev_live = live
    return RefinementResult(live, conf, iterations, r.calls, events, r.cache.stats())


def refine_verdicts(d: Diagram, entrances=None, **kw) -> dict:
    res = strat_ref(d, **kw)
    if entrances is None:
        entrances = cpi(d)
    return {ce: ce in res.live for ce in entrances}


def nested_iterates(op, universe) -> list:
    """Kleene iterates of ``νY. μX. op(X, Y)`` as a list of ``(X, Y, op(X, Y))``."""
    steps = []
    y = frozenset(universe)
    while True:
        x = frozenset()
        while True:
            nx = frozenset(op(x, y))
            steps.append((x, y, nx))
            if nx == x:
                break
            x = nx
        if x == y:
            return steps
        y = x


def operator_iterates(d: Diagram, shortcut_graph, cache="monotone"):
    """Iterates of the refinement operator and of the plain Büchi operator on the shortcut graph.

    Both are expressed over component entrances so that they can be compared step by step.
    """
    r = Refiner(d, cache)
    sg = shortcut_graph
    pos = {ce: sg.vertex(ce) for ce in sg.entrances}
    back = {v: ce for ce, v in pos.items()}

    def plain(x, y):
        got = buchi_operator(sg.graph, {pos[c] for c in x}, {pos[c] for c in y})
        return {back[v] for v in got}

    return nested_iterates(r.operator, r.entrances), nested_iterates(plain, sg.entrances)
