"""Run one or all decision methods on a diagram and collect a report."""
from __future__ import annotations

import time

from .compose import bottom_up
from .errors import InvariantViolation, ValidationError
from .refinement import strat_ref
from .romdp import cpi, flatten, global_entrances, monolithic_verdicts
from .shortcut import build_shortcut_graph
from .graph import buchi_winning_region
from .solution import DEFAULT_GUARD
from .validation import METHODS, check_method


def _monolithic(d, entrances, opts):
    flat = flatten(d)
    verdicts = monolithic_verdicts(d, entrances, _flat=flat)
    g = flat.romdp.graph
    return verdicts, {"vertices": g.n, "edges": len(g.edges), "stars": flat.stars}


def _bottomup(d, entrances, opts):
    glob = set(global_entrances(d))
    extra = [str(ce) for ce in entrances if ce not in glob]
    if extra:
        raise ValidationError("bottomup decides global entrances only; not global: " + ", ".join(extra))
    res = bottom_up(d, sharing=opts["sharing"], guard_effects=opts["guard_effects"])
    return {ce: res.verdicts[ce] for ce in entrances}, res.stats.as_dict()


def _shortcut(d, entrances, opts):
    sg = build_shortcut_graph(d, strict=opts["strict_shortcut"], guard_effects=opts["guard_effects"])
    win = buchi_winning_region(sg.graph)
    stats = {"entrance_vertices": len(sg.entrances), "effect_vertices": len(sg.effects),
             "dropped_effects": sg.dropped, "strict": opts["strict_shortcut"]}
    return {ce: sg.vertex(ce) in win for ce in entrances}, stats


def _refine(d, entrances, opts):
    res = strat_ref(d, cache=opts["cache"], init=opts["init"])
    stats = {"iterations": res.iterations, "max_effect_calls": res.max_effect_calls,
             "live": len(res.live), "cache": res.cache}
    if opts.get("events"):
        stats["events"] = res.events
    return {ce: ce in res.live for ce in entrances}, stats


RUNNERS = {"monolithic": _monolithic, "bottomup": _bottomup, "shortcut": _shortcut, "refine": _refine}

DEFAULTS = {"sharing": "solution", "cache": "monotone", "init": "repaired",
            "strict_shortcut": False, "guard_effects": DEFAULT_GUARD}


def decide(d, method="refine", entrances=None, **options) -> dict:
    """Verdicts for ``entrances`` (default: the global ones) plus statistics and timings.

    ``method="all"`` runs every method, checks that they agree, and reports
    the common verdicts; bottom-up only takes part on global entrances.
    """
    check_method(method, allow_all=True)
    unknown = set(options) - set(DEFAULTS) - {"events"}
    if unknown:
        raise ValidationError(f"unknown options: {', '.join(sorted(unknown))}")
    opts = {**DEFAULTS, **options}
    if entrances is None:
        entrances = global_entrances(d)
    entrances = list(entrances)
    methods = METHODS if method == "all" else (method,)
    per, stats, timings = {}, {}, {}
    glob = set(global_entrances(d))
    for m in methods:
        todo = entrances
        if m == "bottomup" and method == "all":
            todo = [ce for ce in entrances if ce in glob]
        t0 = time.perf_counter()
        per[m], stats[m] = RUNNERS[m](d, todo, opts)
        timings[m] = time.perf_counter() - t0
    verdicts = {}
    for ce in entrances:
        seen = {m: per[m][ce] for m in methods if ce in per[m]}
        if len(set(seen.values())) > 1:
            detail = ", ".join(f"{m}={v}" for m, v in seen.items())
            raise InvariantViolation(f"methods disagree on {ce}: {detail}")
        verdicts[ce] = next(iter(seen.values()))
    return {"method": method, "entrances": len(entrances), "cpi": len(cpi(d)),
            "verdicts": verdicts, "stats": stats, "timings": timings}
