"""Graphviz DOT text for flat roMDPs and shortcut graphs (no graphviz dependency)."""
from __future__ import annotations

from .graph import MdpGraph
from .romdp import Diagram, flatten
from .shortcut import build_shortcut_graph


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: MdpGraph, name="G", entrances=(), exits=()) -> str:
    """Player-1 vertices are circles, probabilistic ones boxes; Büchi vertices get a double border."""
    en = {v: k for k, v in enumerate(entrances, 1)}
    ex = {v: k for k, v in enumerate(exits, 1)}
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for v in range(g.n):
        attrs = [f"label={_q(g.labels[v])}",
                 "shape=circle" if g.is_player1(v) else "shape=box"]
        if v in g.buchi:
            attrs.append("peripheries=2")
        tags = []
        if v in en:
            tags.append(f"en{en[v]}")
        if v in ex:
            tags.append(f"ex{ex[v]}")
        if tags:
            attrs.append(f"xlabel={_q(' '.join(tags))}")
        lines.append(f"  v{v} [{', '.join(attrs)}];")
    for u, v in sorted(g.edges):
        lines.append(f"  v{u} -> v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_monolithic(d: Diagram, name="monolithic") -> str:
    a = flatten(d).romdp
    return graph_to_dot(a.graph, name, a.entrances, a.exits)


def export_shortcut(d: Diagram, name="shortcut", **kw) -> str:
    sg = build_shortcut_graph(d, **kw)
    return graph_to_dot(sg.graph, name)
