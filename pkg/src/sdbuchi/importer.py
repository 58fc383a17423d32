"""Import of explicit MDP listings by erasing probabilities.

Each state becomes a player-1 vertex and each enabled action ``(s, a)`` a
probabilistic vertex ``s.a`` with an edge to every successor of nonzero
probability.  A Büchi state marks all of its action vertices as Büchi,
since visiting the state infinitely often means choosing one of its actions
infinitely often.  An entrance state that has incoming transitions is
entered through a fresh ``s.start`` vertex with a single sure step into ``s``.

Accepted inputs are JSON::

    {"states": ["s0", ...],
     "transitions": [["s0", "a", "s1", 0.5], ...],
     "entrances": [...], "exits": [...], "buchi": [...]}

or a plain listing with one ``state action successor probability`` line per
transition and ``states``/``entrances``/``exits``/``buchi`` lines listing names.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict

from .errors import ParseError, ValidationError
from .romdp import Diagram, Leaf, RoMdp

DIRECTIVES = ("states", "entrances", "exits", "buchi")


def parse_listing(text: str, source: str = "") -> dict:
    doc = {k: [] for k in DIRECTIVES}
    doc["transitions"] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        where = f"{source}:{lineno}" if source else str(lineno)
        if parts[0] in DIRECTIVES:
            doc[parts[0]].extend(parts[1:])
            continue
        if len(parts) != 4:
            raise ParseError("expected 'state action successor probability'", where=where)
        try:
            p = float(parts[3])
        except ValueError:
            raise ParseError(f"bad probability {parts[3]!r}", where=where) from None
        doc["transitions"].append([parts[0], parts[1], parts[2], p])
    return doc


def mdp_to_romdp(doc: dict) -> RoMdp:
    states = list(doc.get("states") or [])
    known = set(states)
    acts = defaultdict(dict)
    for k, t in enumerate(doc.get("transitions", [])):
        if not (isinstance(t, (list, tuple)) and len(t) == 4):
            raise ParseError("transition must be [state, action, successor, probability]",
                             where=f"transitions[{k}]")
        s, a, s2, p = t
        for x in (s, s2):
            if x not in known:
                known.add(x)
                states.append(x)
        if not isinstance(p, (int, float)) or not 0 <= p <= 1 or math.isnan(p):
            raise ValidationError(f"probability {p!r} of {s} --{a}--> {s2} is not in [0, 1]",
                                  where=f"transitions[{k}]")
        acts[(s, a)][s2] = acts[(s, a)].get(s2, 0.0) + p
    for (s, a), dist in acts.items():
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-6:
            raise ValidationError(f"probabilities of {s} --{a}--> sum to {total}, not 1")
    for sec in ("entrances", "exits", "buchi"):
        for x in doc.get(sec, []):
            if x not in known:
                raise ValidationError(f"{sec} lists unknown state {x!r}")
    prob, edges = [], []
    buchi_states = set(doc.get("buchi", []))
    buchi = []
    for (s, a), dist in acts.items():
        v = f"{s}.{a}"
        prob.append(v)
        edges.append((s, v))
        edges.extend((v, s2) for s2, p in dist.items() if p > 0)
        if s in buchi_states:
            buchi.append(v)
    # an entrance state with incoming transitions gets a fresh start vertex and a sure step into it
    entered = {v for _, v in edges if v in known}
    starts, extra = [], []
    for s in doc.get("entrances", []):
        if s in entered:
            v, go = f"{s}.start", f"{s}.start.go"
            extra.append(v)
            prob.append(go)
            edges += [(v, go), (go, s)]
            starts.append(v)
        else:
            starts.append(s)
    return RoMdp.from_labels(states + extra, prob, edges, starts, doc.get("exits", []), buchi)


def import_mdp(text: str, fmt: str = "listing", name: str = "M", source: str = "") -> Diagram:
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise ParseError(err.msg, where=f"{source}:{err.lineno}:{err.colno}") from None
    else:
        doc = parse_listing(text, source)
    return Diagram(Leaf(name), {name: mdp_to_romdp(doc)})
