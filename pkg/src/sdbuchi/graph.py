"""MDP graphs, memoryless randomized strategies and the almost-sure Büchi fixpoint.

An MDP graph is the probability-erased abstraction of an MDP: a bipartite
graph of player-1 vertices (where a strategy picks a nonempty or empty set
of successors) and probabilistic vertices (where every successor may
happen).  Vertices are dense integer ids ``0..n-1``; optional string labels
are carried along for printing and export only.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .errors import (
    AlternationError,
    BuchiPlacementError,
    PartitionError,
    StrategyError,
    UnknownVertexError,
)

Strategy = Mapping[int, Iterable[int]]


class MdpGraph:
    """Bipartite graph ``(V1, VP, E)`` with a Büchi set ``B ⊆ VP``.

    ``player1`` and ``prob`` keep the order in which they were given.
    Construction validates the partition, the alternation of the two kinds of
    vertices and the placement of the Büchi vertices.
    """

    __slots__ = ("player1", "prob", "buchi", "labels", "succ", "pred", "_kind", "_edges")

    def __init__(self, player1, prob, edges=(), buchi=(), labels=None):
        self.player1 = tuple(player1)
        self.prob = tuple(prob)
        n = len(self.player1) + len(self.prob)

        kind = [None] * n
        for owner, vertices in ((True, self.player1), (False, self.prob)):
            for v in vertices:
                if not isinstance(v, int) or not 0 <= v < n:
                    raise PartitionError(f"vertex id {v!r} is not in 0..{n - 1}", item=v)
                if kind[v] is not None:
                    raise PartitionError(f"vertex {v} declared twice", item=v)
                kind[v] = owner
        self._kind = tuple(kind)

        succ = [[] for _ in range(n)]
        pred = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            for w in (u, v):
                if not isinstance(w, int) or not 0 <= w < n:
                    raise UnknownVertexError(f"edge {u}->{v} uses undeclared vertex {w!r}", item=(u, v))
            if kind[u] == kind[v]:
                side = "player-1" if kind[u] else "probabilistic"
                raise AlternationError(f"edge {u}->{v} joins two {side} vertices", item=(u, v))
            if (u, v) in seen:
                continue
            seen.add((u, v))
            succ[u].append(v)
            pred[v].append(u)
        self._edges = frozenset(seen)
        self.succ = tuple(tuple(s) for s in succ)
        self.pred = tuple(tuple(p) for p in pred)

        for b in buchi:
            if not isinstance(b, int) or not 0 <= b < n:
                raise UnknownVertexError(f"Büchi vertex {b!r} is undeclared", item=b)
            if kind[b]:
                raise BuchiPlacementError(f"Büchi vertex {b} is a player-1 vertex", item=b)
        self.buchi = frozenset(buchi)

        if labels is None:
            labels = [str(v) for v in range(n)]
        self.labels = tuple(labels)
        if len(self.labels) != n:
            raise PartitionError(f"expected {n} labels, got {len(self.labels)}")

    @classmethod
    def from_labels(cls, player1, prob, edges=(), buchi=()):
        """Build a graph from string labels; ids follow declaration order."""
        names = list(player1) + list(prob)
        index = {}
        for name in names:
            if name in index:
                raise PartitionError(f"vertex {name!r} declared twice", item=name)
            index[name] = len(index)

        def lookup(name, what):
            try:
                return index[name]
            except KeyError:
                raise UnknownVertexError(f"{what} uses undeclared vertex {name!r}", item=name) from None

        ids = [(lookup(u, f"edge {u}->{v}"), lookup(v, f"edge {u}->{v}")) for u, v in edges]
        bs = [lookup(b, "Büchi set") for b in buchi]
        k = len(player1)
        return cls(range(k), range(k, len(names)), ids, bs, labels=names)

    @property
    def n(self) -> int:
        return len(self._kind)

    @property
    def edges(self) -> frozenset:
        return self._edges

    def is_player1(self, v: int) -> bool:
        return self._kind[v]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownVertexError(f"no vertex labelled {label!r}", item=label) from None

    def check_vertices(self, vertices, what="vertex set"):
        out = frozenset(vertices)
        for v in out:
            if not isinstance(v, int) or not 0 <= v < self.n:
                raise UnknownVertexError(f"{what} contains unknown vertex {v!r}", item=v)
        return out

    def _key(self):
        return (self.player1, self.prob, self._edges, self.buchi, self.labels)

    def __eq__(self, other):
        return isinstance(other, MdpGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"MdpGraph(|V1|={len(self.player1)}, |VP|={len(self.prob)}, "
                f"|E|={len(self._edges)}, |B|={len(self.buchi)})")


def post(g: MdpGraph, x) -> frozenset:
    x = g.check_vertices(x)
    return frozenset(w for v in x for w in g.succ[v])


def pre(g: MdpGraph, y) -> frozenset:
    y = g.check_vertices(y)
    return frozenset(w for v in y for w in g.pred[v])


def check_strategy(g: MdpGraph, strategy: Strategy) -> dict:
    """Validate ``strategy`` against ``g`` and return it as a dict of frozensets."""
    out = {}
    for v, choice in strategy.items():
        if not isinstance(v, int) or not 0 <= v < g.n or not g.is_player1(v):
            raise StrategyError(f"strategy is defined on non-player-1 vertex {v!r}", item=v)
        choice = frozenset(choice)
        if not choice <= set(g.succ[v]):
            raise StrategyError(f"strategy picks non-successors of {v}: {sorted(choice - set(g.succ[v]))}", item=v)
        out[v] = choice
    return out


def _reach(g: MdpGraph, strategy: Mapping, sources) -> set:
    seen = set(sources)
    stack = list(seen)
    kind = g._kind
    while stack:
        v = stack.pop()
        nxt = strategy.get(v, ()) if kind[v] else g.succ[v]
        for w in nxt:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def reach(g: MdpGraph, strategy: Strategy, x) -> frozenset:
    """Vertices reachable from ``x`` when player 1 follows ``strategy``.

    Player-1 vertices move to ``strategy[v]`` (missing keys mean no move),
    probabilistic vertices move to all successors.
    """
    x = g.check_vertices(x, "source set")
    return frozenset(_reach(g, check_strategy(g, strategy), x))


def localize(g: MdpGraph, strategy: Mapping, source: int) -> dict:
    """Restrict ``strategy`` to the vertices reachable from ``source``."""
    r = _reach(g, strategy, (source,))
    return {v: frozenset(c) for v, c in strategy.items() if v in r and c}


def buchi_operator(g: MdpGraph, x, y, target=None, *, forbidden=()) -> frozenset:
    """One application of the Büchi operator F(X, Y).

    Keeps each player-1 vertex with a probabilistic successor ``v'`` whose
    successors all lie in ``y`` and which is either a target or a predecessor
    of ``x``.  Player-1 members of ``target`` are always kept (they satisfy
    the objective by standing still).  ``forbidden`` probabilistic vertices
    may never be chosen.
    """
    target = g.buchi if target is None else g.check_vertices(target, "target")
    x = g.check_vertices(x)
    y = g.check_vertices(y)
    forbidden = frozenset(forbidden)
    result = {v for v in target if g.is_player1(v)}
    for v in g.player1:
        for vp in g.succ[v]:
            if vp in forbidden:
                continue
            if all(w in y for w in g.succ[vp]) and (vp in target or any(w in x for w in g.succ[vp])):
                result.add(v)
                break
    return frozenset(result)


def _naive_region(g, target, forbidden):
    y = frozenset(g.player1)
    while True:
        x = frozenset()
        while True:
            nx = buchi_operator(g, x, y, target, forbidden=forbidden)
            if nx == x:
                break
            x = nx
        if x == y:
            return y
        y = x


def winning_region(g: MdpGraph, target=None, *, forbidden=(), naive=False) -> frozenset:
    """Player-1 vertices that almost-surely visit ``target`` infinitely often.

    Computes ``νY. μX. F(X, Y)``.  ``target`` defaults to the Büchi set and may
    also contain player-1 vertices without successors (used for exits).  The
    default path is a worklist version of the inner least fixpoint;
    ``naive=True`` runs plain Kleene iteration of :func:`buchi_operator`.
    """
    target = g.buchi if target is None else g.check_vertices(target, "target")
    forbidden = frozenset(forbidden)
    if naive:
        return _naive_region(g, target, forbidden)

    kind = g._kind
    succ, pred = g.succ, g.pred
    p1_targets = {v for v in target if kind[v]}
    candidates = [v for v in g.prob if v not in forbidden]
    y = set(g.player1)
    while True:
        safe = {vp for vp in candidates if all(w in y for w in succ[vp])}
        x = set(p1_targets)
        stack = list(x)
        for vp in safe:
            if vp in target:
                for v in pred[vp]:
                    if v not in x:
                        x.add(v)
                        stack.append(v)
        while stack:
            w = stack.pop()
            for vp in pred[w]:
                if vp in safe:
                    for v in pred[vp]:
                        if v not in x:
                            x.add(v)
                            stack.append(v)
        if x == y:
            return frozenset(y)
        y = x


def buchi_winning_region(g: MdpGraph) -> frozenset:
    return winning_region(g, g.buchi)


def safe_strategy(g: MdpGraph, region, *, forbidden=(), target=None) -> dict:
    """The strategy that randomizes over every move staying inside ``region``.

    Probabilistic vertices without successors are only chosen when they are
    targets (default: Büchi vertices); otherwise play would stop there.
    """
    region = frozenset(region)
    forbidden = frozenset(forbidden)
    target = g.buchi if target is None else frozenset(target)
    out = {}
    for v in region:
        choice = frozenset(vp for vp in g.succ[v]
                           if vp not in forbidden and (g.succ[vp] or vp in target)
                           and all(w in region for w in g.succ[vp]))
        if choice:
            out[v] = choice
    return out


def can_reach(g: MdpGraph, targets) -> frozenset:
    """Backward reachability closure: every vertex with a path into ``targets``.

    The targets themselves are part of the result.
    """
    targets = g.check_vertices(targets, "target")
    seen = set(targets)
    stack = list(seen)
    while stack:
        w = stack.pop()
        for v in g.pred[w]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)
