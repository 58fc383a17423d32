"""Small hand-built roMDPs and diagrams used by the tests, the README and the CLI."""
from __future__ import annotations

from .romdp import Diagram, Leaf, RoMdp, Seq, Sum, Trace


def relay(buchi=False) -> RoMdp:
    """``i1 -> p -> o1``."""
    return RoMdp.from_labels(["i1", "o1"], ["p"], [("i1", "p"), ("p", "o1")],
                             ["i1"], ["o1"], ["p"] if buchi else [])


def fork() -> RoMdp:
    """One entrance, two exits; ``r`` reaches both exits at once."""
    return RoMdp.from_labels(
        ["i1", "o1", "o2"], ["p", "q", "r"],
        [("i1", "p"), ("i1", "q"), ("i1", "r"), ("p", "o1"), ("q", "o2"), ("r", "o1"), ("r", "o2")],
        ["i1"], ["o1", "o2"])


def loop_pair() -> RoMdp:
    """2->2: ``i1 -> p1 -> o2`` with ``p1`` Büchi, ``i2 -> p2 -> o1``."""
    return RoMdp.from_labels(
        ["i1", "i2", "o1", "o2"], ["p1", "p2"],
        [("i1", "p1"), ("p1", "o2"), ("i2", "p2"), ("p2", "o1")],
        ["i1", "i2"], ["o1", "o2"], ["p1"])


def deadend() -> RoMdp:
    """``i1 -> p -> {d, o1}`` where ``d`` has no successors."""
    return RoMdp.from_labels(["i1", "d", "o1"], ["p"], [("i1", "p"), ("p", "d"), ("p", "o1")],
                             ["i1"], ["o1"])


def cycle() -> RoMdp:
    """0->0 graph ``i1 -> p -> i1`` with ``p`` Büchi (no open ends)."""
    return RoMdp.from_labels(["i1"], ["p"], [("i1", "p"), ("p", "i1")], [], [], ["p"])


def relay2x() -> RoMdp:
    """Two parallel relays as a single 2->2 leaf."""
    return RoMdp.from_labels(
        ["i1", "i2", "o1", "o2"], ["p1", "p2"],
        [("i1", "p1"), ("p1", "o1"), ("i2", "p2"), ("p2", "o2")],
        ["i1", "i2"], ["o1", "o2"])


def example_a() -> RoMdp:
    """3->3 leaf whose no-lose strategies are the arrows of the worked refinement example.

    en1 reaches ex1 or ex2 (and both by randomizing), en2 reaches {ex2, ex3},
    en3 reaches ex3 through a Büchi vertex.
    """
    return RoMdp.from_labels(
        ["a1", "a2", "a3", "x1", "x2", "x3"], ["p11", "p12", "p2", "p3"],
        [("a1", "p11"), ("p11", "x1"), ("a1", "p12"), ("p12", "x2"),
         ("a2", "p2"), ("p2", "x2"), ("p2", "x3"),
         ("a3", "p3"), ("p3", "x3")],
        ["a1", "a2", "a3"], ["x1", "x2", "x3"], ["p3"])


def example_b() -> RoMdp:
    """3->3 partner leaf without Büchi vertices.

    en1 only reaches ex1; en2 may pick any of the three exits; en3 reaches ex3.
    """
    return RoMdp.from_labels(
        ["b1", "b2", "b3", "y1", "y2", "y3"], ["q1", "q21", "q22", "q23", "q3"],
        [("b1", "q1"), ("q1", "y1"),
         ("b2", "q21"), ("q21", "y1"), ("b2", "q22"), ("q22", "y2"), ("b2", "q23"), ("q23", "y3"),
         ("b3", "q3"), ("q3", "y3")],
        ["b1", "b2", "b3"], ["y1", "y2", "y3"])


def example_diagram() -> Diagram:
    """``trace(trace(seq(A, B)))``: B's exits 2 and 3 loop back to A's entrances 2 and 3."""
    return Diagram(Trace(Trace(Seq(Leaf("A"), Leaf("B")))), {"A": example_a(), "B": example_b()})


def sharing_diagram() -> Diagram:
    """``(A ⊕ B) ; (C ⊕ B)`` where A and C are different leaves with equal solutions."""
    a = relay(buchi=True)
    c = RoMdp.from_labels(["j", "k"], ["s", "t"], [("j", "s"), ("j", "t"), ("s", "k"), ("t", "k")],
                          ["j"], ["k"], ["s", "t"])
    b = relay()
    return Diagram(Seq(Sum(Leaf("A"), Leaf("B")), Sum(Leaf("C"), Leaf("B"))),
                   {"A": a, "B": b, "C": c})


def single(a: RoMdp, name="A") -> Diagram:
    return Diagram(Leaf(name), {name: a})
