"""Input checking shared by the estimator and the command line."""
from __future__ import annotations

from pathlib import Path

from .errors import ValidationError
from .romdp import ComponentEntrance, Diagram, cpi, global_entrances

METHODS = ("monolithic", "bottomup", "shortcut", "refine")


def check_diagram(obj) -> Diagram:
    """Accept a Diagram, a path to a diagram file, or diagram source text."""
    if isinstance(obj, Diagram):
        return obj
    from .fileformat import load, parse_json, parse_text

    if isinstance(obj, Path):
        return load(obj)
    if isinstance(obj, str):
        s = obj.lstrip()
        if s.startswith("{"):
            return parse_json(obj)
        if "diagram" in obj and ("=" in obj or "\n" in obj):
            return parse_text(obj)
        return load(obj)
    raise ValidationError(f"expected a Diagram, a file path or diagram text, got {type(obj).__name__}")


def check_method(method: str, allow_all=False) -> str:
    ok = METHODS + (("all",) if allow_all else ())
    if method not in ok:
        raise ValidationError(f"unknown method {method!r} (expected one of {', '.join(ok)})")
    return method


def resolve_entrances(d: Diagram, selectors=None) -> list:
    """Turn entrance selectors into component entrances.

    A selector is ``"global"`` (every global entrance, the default), ``"all"``
    (every component entrance), ``"global:k"`` (1-based), ``"PATH:INDEX"``
    such as ``"r.0.1:2"``, a ComponentEntrance, or an int global index.
    """
    if selectors is None:
        selectors = ["global"]
    if isinstance(selectors, (str, int, ComponentEntrance)):
        selectors = [selectors]
    glob = global_entrances(d)
    every = cpi(d)
    known = set(every)
    out = []
    for sel in selectors:
        if isinstance(sel, ComponentEntrance):
            got = [sel]
        elif isinstance(sel, int) and not isinstance(sel, bool):
            got = [_global(glob, sel)]
        elif sel == "global":
            got = glob
        elif sel == "all":
            got = every
        elif isinstance(sel, str) and sel.startswith("global:"):
            k = sel.split(":", 1)[1]
            if not k.isdigit():
                raise ValidationError(f"malformed selector {sel!r}")
            got = [_global(glob, int(k))]
        elif isinstance(sel, str):
            got = [ComponentEntrance.parse(sel)]
        else:
            raise ValidationError(f"bad entrance selector {sel!r}")
        for ce in got:
            if ce not in known:
                raise ValidationError(f"no component entrance {ce} in this diagram")
            if ce not in out:
                out.append(ce)
    return out


def _global(glob, k):
    if not 1 <= k <= len(glob):
        raise ValidationError(f"global entrance {k} out of range 1..{len(glob)}")
    return glob[k - 1]


def check_positive(name, value):
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value!r}")
    return value
