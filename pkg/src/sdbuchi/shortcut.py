"""The shortcut graph: component entrances wired together through their effects."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import SizeGuardError, ValidationError
from .graph import MdpGraph, buchi_winning_region
from .romdp import Diagram, cpi, exit_table, path_str
from .solution import DEFAULT_GUARD, mask_indices, local_solution, sort_key


@dataclass
class ShortcutGraph:
    graph: MdpGraph
    entrances: list        # ComponentEntrance per player-1 vertex id
    effects: list          # (ComponentEntrance, Effect) per probabilistic vertex, ids follow the entrances
    dropped: int           # effects removed because they touch an open exit

    def vertex(self, ce) -> int:
        try:
            return self.entrances.index(ce)
        except ValueError:
            raise ValidationError(f"unknown component entrance {ce}") from None


def leaf_solutions(d: Diagram, guard_effects: int = DEFAULT_GUARD) -> dict:
    """``path -> Solution`` for every leaf occurrence; repeated leaves are solved once."""
    memo, out = {}, {}
    for path, name in d.occurrences().items():
        if name not in memo:
            try:
                memo[name] = local_solution(d.leaves[name], guard_effects)
            except SizeGuardError as err:
                raise err.located(f"leaf {name} at {path_str(path)}") from None
        out[path] = memo[name]
    return out


def build_shortcut_graph(d: Diagram, *, strict: bool = False, guard_effects: int = DEFAULT_GUARD,
                         _solutions=None) -> ShortcutGraph:
    """Player-1 vertices are the component entrances, probabilistic ones their effects.

    An effect ``⟨X,b⟩`` of entrance ``i`` leads to the entrances glued to ``X``
    (back to ``i`` when ``X`` is empty) and is Büchi iff ``b``.  Unless
    ``strict`` is set, effects that use an exit left open in the whole
    diagram are dropped, because reaching such an exit loses.
    """
    entrances = cpi(d)
    index = {ce: k for k, ce in enumerate(entrances)}
    table = exit_table(d)
    sols = _solutions if _solutions is not None else leaf_solutions(d, guard_effects)
    effects, edges, buchi = [], [], []
    dropped = 0
    total = sum(len(sols[ce.path].row(ce.index)) for ce in entrances)
    if total > guard_effects:
        raise SizeGuardError(f"shortcut graph would have {total} effect vertices (guard {guard_effects})")
    nid = len(entrances)
    for ce in entrances:
        glue = table[ce.path]
        for e in sorted(sols[ce.path].row(ce.index), key=sort_key):
            ks = mask_indices(e.mask)
            targets = [glue[k - 1] for k in ks]
            if not strict and any(t is None for t in targets):
                dropped += 1
                continue
            v = nid
            nid += 1
            effects.append((ce, e))
            edges.append((index[ce], v))
            if ks:
                edges.extend((v, index[t]) for t in targets if t is not None)
            else:
                edges.append((v, index[ce]))
            if e.buchi:
                buchi.append(v)
    labels = [str(ce) for ce in entrances] + [f"{ce} {e}" for ce, e in effects]
    g = MdpGraph(range(len(entrances)), range(len(entrances), nid), edges, buchi, labels=labels)
    return ShortcutGraph(g, entrances, effects, dropped)


def shortcut_verdicts(d: Diagram, entrances=None, **kw) -> dict:
    sg = build_shortcut_graph(d, **kw)
    win = buchi_winning_region(sg.graph)
    if entrances is None:
        entrances = sg.entrances
    return {ce: sg.vertex(ce) in win for ce in entrances}


def shortcut_check(d: Diagram, ce, **kw) -> bool:
    return shortcut_verdicts(d, [ce], **kw)[ce]
