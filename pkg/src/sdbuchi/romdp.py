"""Rightward-open MDPs, string diagrams over them and their flat semantics.

Entrance and exit indices are 1-based everywhere in the public surface,
matching the usual ``en_1 .. en_m`` / ``ex_1 .. ex_n`` notation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Union

from .errors import (
    ArityError,
    EntrancePredecessorError,
    ExitSuccessorError,
    OpenEndError,
    UnknownLeafError,
    ValidationError,
)
from .graph import MdpGraph, buchi_winning_region


class RoMdp:
    """An MDP graph with ordered entrance and exit lists."""

    __slots__ = ("graph", "entrances", "exits")

    def __init__(self, graph: MdpGraph, entrances, exits):
        self.graph = graph
        self.entrances = tuple(entrances)
        self.exits = tuple(exits)
        ends = self.entrances + self.exits
        if len(set(ends)) != len(ends):
            raise OpenEndError("entrances and exits must be distinct and disjoint")
        for v in ends:
            if not isinstance(v, int) or not 0 <= v < graph.n or not graph.is_player1(v):
                raise OpenEndError(f"open end {v!r} is not a player-1 vertex", item=v)
        for v in self.entrances:
            if graph.pred[v]:
                raise EntrancePredecessorError(
                    f"entrance {graph.labels[v]} has predecessors", item=v)
        for v in self.exits:
            if graph.succ[v]:
                raise ExitSuccessorError(f"exit {graph.labels[v]} has successors", item=v)

    @classmethod
    def from_labels(cls, player1, prob, edges=(), entrances=(), exits=(), buchi=()):
        g = MdpGraph.from_labels(player1, prob, edges, buchi)
        return cls(g, [g.index(e) for e in entrances], [g.index(x) for x in exits])

    @property
    def arity(self) -> tuple[int, int]:
        return len(self.entrances), len(self.exits)

    @property
    def buchi(self):
        return self.graph.buchi

    def entrance(self, i: int) -> int:
        """Vertex id of 1-based entrance ``i``."""
        if not 1 <= i <= len(self.entrances):
            raise ValidationError(f"entrance index {i} out of range 1..{len(self.entrances)}", item=i)
        return self.entrances[i - 1]

    def _key(self):
        return (self.graph, self.entrances, self.exits)

    def __eq__(self, other):
        return isinstance(other, RoMdp) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        m, n = self.arity
        return f"RoMdp({m}->{n}, {self.graph!r})"


def _rebuild(parts, extra_prob=0, extra_edges=(), extra_labels=()):
    """Assemble a new graph from ``(graph, id_map, dropped)`` parts."""
    player1, prob, edges, buchi, labels = [], [], set(), set(), {}
    for g, remap, dropped in parts:
        for v in g.player1:
            if v not in dropped:
                player1.append(remap[v])
        for v in g.prob:
            prob.append(remap[v])
        for u, v in g.edges:
            edges.add((remap[u], remap[v]))
        buchi.update(remap[b] for b in g.buchi)
        for v in range(g.n):
            if v not in dropped:
                labels[remap[v]] = g.labels[v]
    n = len(player1) + len(prob)
    for k, lab in enumerate(extra_labels):
        prob.append(n + k)
        labels[n + k] = lab
    edges.update(extra_edges)
    return MdpGraph(player1, prob, sorted(edges), sorted(buchi),
                    labels=[labels[v] for v in range(len(labels))])


def seq_compose(a: RoMdp, b: RoMdp, *, return_maps=False):
    """``a ; b``: every edge into exit ``k`` of ``a`` is redirected to entrance ``k`` of ``b``.

    With ``return_maps=True`` also returns the vertex maps of ``a`` and ``b``
    into the result (a deleted exit maps to the entrance it was glued to).
    """
    if len(a.exits) != len(b.entrances):
        raise ArityError(f"sequential composition of {a.arity[0]}->{a.arity[1]} "
                         f"with {b.arity[0]}->{b.arity[1]}")
    glued = {v: k for k, v in enumerate(a.exits)}
    map_a, nid = {}, 0
    for v in range(a.graph.n):
        if v not in glued:
            map_a[v] = nid
            nid += 1
    map_b = {v: nid + v for v in range(b.graph.n)}
    for v, k in glued.items():
        map_a[v] = map_b[b.entrances[k]]
    g = _rebuild([(a.graph, map_a, frozenset(glued)), (b.graph, map_b, frozenset())])
    out = RoMdp(g, [map_a[v] for v in a.entrances], [map_b[v] for v in b.exits])
    return (out, map_a, map_b) if return_maps else out


def sum_compose(a: RoMdp, b: RoMdp, *, return_maps=False):
    """``a ⊕ b``: disjoint union, entrances and exits of ``a`` first."""
    map_a = {v: v for v in range(a.graph.n)}
    map_b = {v: a.graph.n + v for v in range(b.graph.n)}
    g = _rebuild([(a.graph, map_a, frozenset()), (b.graph, map_b, frozenset())])
    out = RoMdp(g,
                [map_a[v] for v in a.entrances] + [map_b[v] for v in b.entrances],
                [map_a[v] for v in a.exits] + [map_b[v] for v in b.exits])
    return (out, map_a, map_b) if return_maps else out


def trace_compose(a: RoMdp, *, star_label="*", return_maps=False):
    """``tr(a)``: loop the last exit through a fresh probabilistic vertex to the last entrance."""
    m, n = a.arity
    if m == 0 or n == 0:
        raise ArityError(f"trace needs at least one entrance and one exit, got {m}->{n}")
    ident = {v: v for v in range(a.graph.n)}
    star = a.graph.n
    g = _rebuild([(a.graph, ident, frozenset())],
                 extra_edges=[(a.exits[-1], star), (star, a.entrances[-1])],
                 extra_labels=[star_label])
    out = RoMdp(g, a.entrances[:-1], a.exits[:-1])
    return (out, ident, star) if return_maps else out


# --- string diagrams -------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    name: str


@dataclass(frozen=True)
class Seq:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Sum:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Trace:
    child: "Term"


Term = Union[Leaf, Seq, Sum, Trace]
Path = tuple


def children(term: Term) -> tuple:
    if isinstance(term, Leaf):
        return ()
    if isinstance(term, Trace):
        return (term.child,)
    return (term.left, term.right)


def path_str(path: Path) -> str:
    return ".".join(["r", *map(str, path)])


def parse_path(text: str) -> Path:
    parts = text.split(".")
    if parts[0] != "r" or not all(p.isdigit() for p in parts[1:]):
        raise ValidationError(f"malformed tree path {text!r} (expected e.g. r.0.1)")
    return tuple(int(p) for p in parts[1:])


def term_str(term: Term) -> str:
    if isinstance(term, Leaf):
        return term.name
    if isinstance(term, Trace):
        return f"trace({term_str(term.child)})"
    op = "seq" if isinstance(term, Seq) else "sum"
    return f"{op}({term_str(term.left)}, {term_str(term.right)})"


class ComponentEntrance(NamedTuple):
    """Entrance ``index`` (1-based) of the leaf occurrence at tree ``path``."""

    path: Path
    index: int

    def __str__(self):
        return f"{path_str(self.path)}:{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ComponentEntrance":
        p, sep, idx = text.rpartition(":")
        if not sep or not idx.isdigit():
            raise ValidationError(f"malformed component entrance {text!r} (expected PATH:INDEX)")
        return cls(parse_path(p), int(idx))


class LeafExit(NamedTuple):
    path: Path
    index: int


@dataclass(frozen=True)
class Diagram:
    """A string-diagram term together with the table of leaf roMDPs it names."""

    term: Term
    leaves: Mapping[str, RoMdp] = field(hash=False)

    def __post_init__(self):
        _check(self.term, self.leaves, ())

    def leaf_at(self, path: Path) -> RoMdp:
        return self.leaves[self.occurrences()[path]]

    def occurrences(self) -> dict:
        """Leaf occurrences in leftmost-innermost order: ``path -> leaf name``."""
        out = {}

        def walk(t, p):
            if isinstance(t, Leaf):
                out[p] = t.name
            for k, c in enumerate(children(t)):
                walk(c, p + (k,))

        walk(self.term, ())
        return out

    @property
    def arity(self):
        return arity(self.term, self.leaves)

    def __eq__(self, other):
        return (isinstance(other, Diagram) and self.term == other.term
                and dict(self.leaves) == dict(other.leaves))

    def __hash__(self):
        return hash(self.term)


def arity(term: Term, leaves: Mapping[str, RoMdp]) -> tuple[int, int]:
    return _check(term, leaves, ())


def _check(term, leaves, path):
    if isinstance(term, Leaf):
        if term.name not in leaves:
            raise UnknownLeafError(f"diagram refers to unknown leaf {term.name!r}",
                                   where=path_str(path), item=term.name)
        return leaves[term.name].arity
    if isinstance(term, Trace):
        m, n = _check(term.child, leaves, path + (0,))
        if m == 0 or n == 0:
            raise ArityError(f"trace of a {m}->{n} diagram", where=path_str(path))
        return m - 1, n - 1
    m1, n1 = _check(term.left, leaves, path + (0,))
    m2, n2 = _check(term.right, leaves, path + (1,))
    if isinstance(term, Seq):
        if n1 != m2:
            raise ArityError(f"seq of {m1}->{n1} with {m2}->{n2}", where=path_str(path))
        return m1, n2
    if isinstance(term, Sum):
        return m1 + m2, n1 + n2
    raise TypeError(f"not a diagram term: {term!r}")


@dataclass
class Wiring:
    """Open ends of a (sub)diagram and the gluing performed inside it."""

    entrances: list          # ComponentEntrance per open entrance
    exits: list              # LeafExit per open exit
    glue: dict               # LeafExit -> ComponentEntrance


def wiring(d: Diagram) -> Wiring:
    def walk(t, p):
        if isinstance(t, Leaf):
            m, n = d.leaves[t.name].arity
            return Wiring([ComponentEntrance(p, k) for k in range(1, m + 1)],
                          [LeafExit(p, k) for k in range(1, n + 1)], {})
        if isinstance(t, Trace):
            w = walk(t.child, p + (0,))
            w.glue[w.exits[-1]] = w.entrances[-1]
            return Wiring(w.entrances[:-1], w.exits[:-1], w.glue)
        a = walk(t.left, p + (0,))
        b = walk(t.right, p + (1,))
        glue = {**a.glue, **b.glue}
        if isinstance(t, Seq):
            glue.update(zip(a.exits, b.entrances))
            return Wiring(a.entrances, b.exits, glue)
        return Wiring(a.entrances + b.entrances, a.exits + b.exits, glue)

    return walk(d.term, ())


def cpi(d: Diagram) -> list:
    """All component entrances, leftmost-innermost."""
    out = []
    for path, name in d.occurrences().items():
        m = d.leaves[name].arity[0]
        out.extend(ComponentEntrance(path, k) for k in range(1, m + 1))
    return out


def global_entrances(d: Diagram) -> list:
    return wiring(d).entrances


def connection_map(d: Diagram, path: Path, exits, _wiring: Wiring | None = None) -> frozenset:
    """Component entrances glued to the given (1-based) exits of the occurrence at ``path``.

    Exits left open in the whole diagram map to nothing.
    """
    occ = d.occurrences()
    if path not in occ:
        raise ValidationError(f"no leaf occurrence at {path_str(path)}")
    n = d.leaves[occ[path]].arity[1]
    w = _wiring or wiring(d)
    out = set()
    for k in exits:
        if not 1 <= k <= n:
            raise ValidationError(f"exit {k} out of range 1..{n} at {path_str(path)}")
        ce = w.glue.get(LeafExit(path, k))
        if ce is not None:
            out.add(ce)
    return frozenset(out)


def exit_table(d: Diagram) -> dict:
    """``path -> tuple`` giving, per 1-based exit, the glued entrance or ``None``."""
    w = wiring(d)
    out = {}
    for path, name in d.occurrences().items():
        n = d.leaves[name].arity[1]
        out[path] = tuple(w.glue.get(LeafExit(path, k)) for k in range(1, n + 1))
    return out


@dataclass
class Flattened:
    romdp: RoMdp
    entrance_vertex: dict    # ComponentEntrance -> vertex of the flat graph
    global_entrances: list   # ComponentEntrance, in the order of romdp.entrances
    stars: int


def flatten(d: Diagram, on_compose=None) -> Flattened:
    """Operational semantics with provenance of every component entrance.

    ``on_compose(path, romdp)`` is called after each composition step.
    """
    stars = 0

    def walk(t, p):
        # returns (romdp, {ComponentEntrance: vertex})
        nonlocal stars
        if isinstance(t, Leaf):
            a = d.leaves[t.name]
            prefix = f"{path_str(p)}/{t.name}."
            g = a.graph
            g2 = MdpGraph(g.player1, g.prob, sorted(g.edges), sorted(g.buchi),
                          labels=[prefix + lab for lab in g.labels])
            out = RoMdp(g2, a.entrances, a.exits)
            prov = {ComponentEntrance(p, k + 1): v for k, v in enumerate(a.entrances)}
            return out, prov
        if isinstance(t, Trace):
            a, prov = walk(t.child, p + (0,))
            out = trace_compose(a, star_label=f"*{path_str(p)}")
            stars += 1
        else:
            a, pa = walk(t.left, p + (0,))
            b, pb = walk(t.right, p + (1,))
            op = seq_compose if isinstance(t, Seq) else sum_compose
            out, ma, mb = op(a, b, return_maps=True)
            prov = {ce: ma[v] for ce, v in pa.items()}
            prov.update({ce: mb[v] for ce, v in pb.items()})
        if on_compose is not None:
            on_compose(p, out)
        return out, prov

    romdp, prov = walk(d.term, ())
    vertex_to_ce = {v: ce for ce, v in prov.items()}
    return Flattened(romdp, prov, [vertex_to_ce[v] for v in romdp.entrances], stars)


def monolithic_semantics(d: Diagram) -> RoMdp:
    return flatten(d).romdp


def monolithic_verdicts(d: Diagram, entrances=None, _flat: Flattened | None = None) -> dict:
    """Winning status of component entrances in the flat roMDP (all by default)."""
    flat = _flat or flatten(d)
    win = buchi_winning_region(flat.romdp.graph)
    if entrances is None:
        entrances = cpi(d)
    out = {}
    for ce in entrances:
        ce = _resolve(d, ce, flat)
        out[ce] = flat.entrance_vertex[ce] in win
    return out


def _resolve(d, ce, flat):
    if isinstance(ce, int):
        if not 1 <= ce <= len(flat.global_entrances):
            raise ValidationError(f"global entrance {ce} out of range")
        return flat.global_entrances[ce - 1]
    if ce not in flat.entrance_vertex:
        raise ValidationError(f"unknown component entrance {ce}")
    return ce


def monolithic_check(d: Diagram, entrance) -> bool:
    """Does ``entrance`` (a ComponentEntrance or 1-based global index) win in the flat roMDP?"""
    return next(iter(monolithic_verdicts(d, [entrance]).values()))


def leaf(a: RoMdp, name: str = "A") -> Diagram:
    return Diagram(Leaf(name), {name: a})
