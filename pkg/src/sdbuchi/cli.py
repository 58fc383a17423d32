"""Command line: ``sdbuchi {check,gen,bench,export,import}``.

Exit codes: 0 success (whatever the verdicts), 2 invalid input,
3 size guard exceeded, 4 internal invariant violated (e.g. methods disagree).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import family, format_table, run_bench
from .compose import SHARING_MODES
from .decide import decide
from .errors import SdBuchiError
from .export import export_monolithic, export_shortcut
from .fileformat import load, render
from .generate import Profile, exitblow, random_diagram
from .importer import import_mdp
from .refinement import CACHE_MODES, INIT_MODES
from .romdp import term_str
from .solution import DEFAULT_GUARD
from .validation import METHODS, resolve_entrances


def _common(p, guard=True):
    if guard:
        p.add_argument("--guard-effects", type=int, default=DEFAULT_GUARD, metavar="N",
                       help="ceiling on effect-set sizes (default 2^20)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="sdbuchi",
                                 description="Almost-sure Büchi checking for string diagrams of open MDPs.")
    sub = ap.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("check", help="decide entrances of a diagram file")
    c.add_argument("file")
    c.add_argument("--method", choices=METHODS + ("all",), default="refine")
    c.add_argument("--entrance", action="append", metavar="SEL",
                   help="global (default), all, global:K or PATH:INDEX such as r.0.1:2; repeatable")
    c.add_argument("--cache", choices=CACHE_MODES, default="monotone")
    c.add_argument("--sharing", choices=SHARING_MODES, default="solution")
    c.add_argument("--init", choices=INIT_MODES, default="repaired")
    c.add_argument("--strict-shortcut", action="store_true",
                   help="keep effects that use open exits in the shortcut graph")
    c.add_argument("--events", action="store_true", help="include per-iteration refinement events")
    c.add_argument("--no-timings", action="store_true")
    c.add_argument("--seed", type=int, default=0, help="accepted for uniformity; checking is deterministic")
    _common(c)

    g = sub.add_parser("gen", help="write a random diagram")
    g.add_argument("--seed", type=int, default=1)
    d = Profile()
    g.add_argument("--leaves", type=int, default=d.leaves)
    g.add_argument("--vertices", type=int, default=d.vertices)
    g.add_argument("--max-arity", type=int, default=d.max_arity)
    g.add_argument("--trace-bias", type=float, default=d.trace_bias)
    g.add_argument("--buchi-density", type=float, default=d.buchi_density)
    g.add_argument("--share", type=float, default=d.share, help="shared-leaf probability")
    g.add_argument("--profile", choices=("random", "exitblow"), default="random")
    g.add_argument("--k", type=int, default=4, help="exit count for the exitblow profile")
    _common(g, guard=False)

    b = sub.add_parser("bench", help="compare bottom-up and refinement")
    b.add_argument("files", nargs="*")
    b.add_argument("--family", action="append", metavar="SPEC",
                   help="exitblow:2..8 or gen:1..10 (repeatable)")
    b.add_argument("--cache", choices=CACHE_MODES, default="monotone")
    b.add_argument("--sharing", choices=SHARING_MODES, default="solution")
    b.add_argument("--no-timings", action="store_true")
    _common(b)

    e = sub.add_parser("export", help="DOT text of the flat roMDP or of the shortcut graph")
    e.add_argument("file")
    e.add_argument("--target", choices=("monolithic", "shortcut"), default="monolithic")
    e.add_argument("--strict-shortcut", action="store_true")
    e.add_argument("--guard-effects", type=int, default=DEFAULT_GUARD, metavar="N")
    e.add_argument("-o", "--output")

    i = sub.add_parser("import", help="convert an explicit MDP listing into a one-leaf diagram")
    i.add_argument("file")
    i.add_argument("--input-format", choices=("auto", "listing", "json"), default="auto")
    i.add_argument("--name", default="M")
    _common(i, guard=False)
    return ap


def _emit(text, output):
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _stat_line(stats):
    parts = []
    for k in sorted(stats):
        v = stats[k]
        if isinstance(v, dict):
            v = "{" + ", ".join(f"{a}={b}" for a, b in sorted(v.items())) + "}"
        parts.append(f"{k}={v}")
    return " ".join(parts)


def cmd_check(args):
    d = load(args.file)
    ents = resolve_entrances(d, args.entrance)
    rep = decide(d, args.method, ents, cache=args.cache, sharing=args.sharing, init=args.init,
                 strict_shortcut=args.strict_shortcut, guard_effects=args.guard_effects, events=args.events)
    if args.format == "json":
        doc = {"diagram": term_str(d.term), "method": rep["method"], "cpi": rep["cpi"],
               "verdicts": {str(ce): v for ce, v in rep["verdicts"].items()},
               "stats": _jsonable(rep["stats"])}
        if not args.no_timings:
            doc["timings"] = rep["timings"]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    out = [f"diagram: {term_str(d.term)}", f"method: {rep['method']}",
           f"entrances: {rep['entrances']} of {rep['cpi']} component entrances"]
    for ce, v in rep["verdicts"].items():
        out.append(f"  {ce}  {'win' if v else 'lose'}")
    out.append("stats:")
    for m, s in rep["stats"].items():
        s = {k: v for k, v in s.items() if k not in ("events", "node_effects")}
        out.append(f"  {m}: {_stat_line(s)}")
    if args.events:
        for ev in rep["stats"]["refine"].get("events", []) if "refine" in rep["stats"] else []:
            out.append(f"  event: {json.dumps(ev, sort_keys=True)}")
    if not args.no_timings:
        out.append("timings:")
        for m, t in rep["timings"].items():
            out.append(f"  {m}: {1000 * t:.3f} ms")
    return "\n".join(out) + "\n"


def cmd_gen(args):
    if args.profile == "exitblow":
        d = exitblow(args.k)
    else:
        prof = Profile(args.leaves, args.vertices, args.max_arity, args.trace_bias, args.buchi_density, args.share)
        d = random_diagram(args.seed, prof)
    return render(d, args.format)


def cmd_bench(args):
    items = []
    for f in args.files:
        items.append((f, load(f)))
    for fam in args.family or ([] if args.files else ["exitblow:2..8"]):
        items.extend(family(fam))
    rows = run_bench(items, guard_effects=args.guard_effects, cache=args.cache, sharing=args.sharing)
    if args.format == "json":
        if args.no_timings:
            rows = [{k: v for k, v in r.items() if k != "timings"} for r in rows]
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    return format_table(rows, with_timings=not args.no_timings)


def cmd_export(args):
    d = load(args.file)
    if args.target == "shortcut":
        return export_shortcut(d, strict=args.strict_shortcut, guard_effects=args.guard_effects)
    return export_monolithic(d)


def cmd_import(args):
    path = Path(args.file)
    fmt = args.input_format
    if fmt == "auto":
        fmt = "json" if path.suffix.lower() == ".json" else "listing"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        from .errors import ParseError
        raise ParseError(f"cannot read {path}: {err.strerror}") from None
    d = import_mdp(text, fmt, name=args.name, source=str(path))
    return render(d, args.format)


COMMANDS = {"check": cmd_check, "gen": cmd_gen, "bench": cmd_bench, "export": cmd_export, "import": cmd_import}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.verb](args)
        _emit(text, getattr(args, "output", None))
    except SdBuchiError as err:
        print(f"error[{err.code}]: {err}", file=sys.stderr)
        return err.exit_status
    return 0


if __name__ == "__main__":
    sys.exit(main())
