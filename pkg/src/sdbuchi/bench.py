"""Side-by-side runs of the bottom-up and refinement checkers."""
from __future__ import annotations

import time

from .compose import bottom_up
from .errors import SizeGuardError, ValidationError
from .generate import Profile, exitblow, random_diagram
from .refinement import strat_ref
from .romdp import cpi, global_entrances
from .solution import DEFAULT_GUARD


def parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise ValidationError(f"bad range {text!r} (expected N or N..M)") from None
    if b < a:
        raise ValidationError(f"empty range {text!r}")
    return range(a, b + 1)


def family(text: str, profile: Profile | None = None) -> list:
    """``exitblow:2..8`` or ``gen:1..20`` into ``(name, diagram)`` pairs."""
    kind, _, rng = text.partition(":")
    if kind == "exitblow":
        return [(f"exitblow({k})", exitblow(k)) for k in parse_range(rng or "2..8")]
    if kind == "gen":
        return [(f"gen(seed={s})", random_diagram(s, profile)) for s in parse_range(rng or "1..10")]
    raise ValidationError(f"unknown family {text!r} (expected exitblow:K..K or gen:S..S)")


def bench_one(name, d, *, guard_effects=DEFAULT_GUARD, cache="monotone", sharing="solution") -> dict:
    row = {"name": name, "cpi": len(cpi(d)), "global": len(global_entrances(d)),
           "leaves": len(d.occurrences())}
    timings = {}
    t0 = time.perf_counter()
    try:
        bu = bottom_up(d, sharing=sharing, guard_effects=guard_effects)
        s = bu.stats
        row["bottomup"] = {"max_effects": s.max_effects, "leaf_computations": s.leaf_computations,
                           "compositions": s.compositions, "hits": s.hits,
                           "total_effects": sum(sum(v) for v in s.node_effects.values())}
        bu_verdicts = bu.verdicts
    except SizeGuardError as err:
        row["bottomup"] = {"error": err.code, "message": str(err)}
        bu_verdicts = None
    timings["bottomup"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    rf = strat_ref(d, cache=cache)
    timings["refine"] = time.perf_counter() - t0
    row["refine"] = {"max_effect_calls": rf.max_effect_calls, "iterations": rf.iterations,
                     "cache_hits": rf.cache["hits"], "fixpoint_runs": rf.cache["misses"]}
    if bu_verdicts is not None:
        row["agree"] = all(rf.verdict(ce) == v for ce, v in bu_verdicts.items())
    else:
        row["agree"] = None
    row["timings"] = timings
    return row


def run_bench(items, **kw) -> list:
    return [bench_one(name, d, **kw) for name, d in items]


def format_table(rows, with_timings=True) -> str:
    head = ["name", "cpi", "bu_max_eff", "bu_hits", "ref_calls", "ref_iters", "ref_hits", "agree"]
    if with_timings:
        head += ["bu_ms", "ref_ms"]
    out = [head]
    for r in rows:
        bu = r["bottomup"]
        line = [r["name"], str(r["cpi"]),
                bu.get("error", str(bu.get("max_effects"))), str(bu.get("hits", "-")),
                str(r["refine"]["max_effect_calls"]), str(r["refine"]["iterations"]),
                str(r["refine"]["cache_hits"]), {True: "yes", False: "NO", None: "-"}[r["agree"]]]
        if with_timings:
            line += [f"{1000 * r['timings']['bottomup']:.2f}", f"{1000 * r['timings']['refine']:.2f}"]
        out.append(line)
    widths = [max(len(row[k]) for row in out) for k in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in out) + "\n"
