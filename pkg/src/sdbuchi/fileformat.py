"""Reading and writing diagram files.

Text form (``.sdg``)::

    # comments run to the end of the line
    leaf A {
      players1 [i1, o1];
      prob [p];
      edges [i1 -> p, p -> o1];
      entrances [i1];
      exits [o1];
      buchi [p];
    }
    diagram = trace(seq(A, B));

JSON form (``.json``) carries the same schema::

    {"leaves": {"A": {"players1": [...], "prob": [...], "edges": [["i1", "p"], ...],
                      "entrances": [...], "exits": [...], "buchi": [...]}},
     "diagram": {"trace": {"seq": ["A", "B"]}}}

All validation failures are reported with a ``line:col`` (text) or a JSON
path (JSON) anchor.
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import (
    AlternationError,
    BuchiPlacementError,
    EntrancePredecessorError,
    ExitSuccessorError,
    OpenEndError,
    ParseError,
    PartitionError,
    SdBuchiError,
    UnknownLeafError,
    UnknownVertexError,
)
from .romdp import Diagram, Leaf, RoMdp, Seq, Sum, Trace, path_str

SECTIONS = ("players1", "prob", "edges", "entrances", "exits", "buchi")
ALIASES = {"player1": "players1", "probabilistic": "prob"}
OPERATORS = {"seq": 2, "sum": 2, "trace": 1}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->) | (?P<punct>[{}\[\](),;=])
  | (?P<name>[A-Za-z0-9_][A-Za-z0-9_.']*)
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    @property
    def pos(self):
        return f"{self.line}:{self.col}"


def _tokenize(text, source):
    toks, line, start, i = [], 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", where=_where(source, line, i - start + 1))
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            val = m.group()
            toks.append(_Tok(kind if kind != "punct" else val, val, line, m.start() - start + 1))
        i = m.end()
    toks.append(_Tok("eof", "", line, i - start + 1))
    return toks


def _where(source, line, col):
    return f"{source}:{line}:{col}" if source else f"{line}:{col}"


class _Parser:
    def __init__(self, text, source):
        self.source = source
        self.toks = _tokenize(text, source)
        self.k = 0

    def at(self, tok):
        return _where(self.source, tok.line, tok.col)

    def peek(self):
        return self.toks[self.k]

    def next(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def expect(self, kind, what=None):
        tok = self.next()
        if tok.kind != kind:
            got = tok.text or "end of input"
            raise ParseError(f"expected {what or kind!r}, found {got!r}", where=self.at(tok))
        return tok

    def parse(self):
        leaves, term, term_pos = {}, None, None
        while self.peek().kind != "eof":
            tok = self.expect("name", "'leaf' or 'diagram'")
            if tok.text == "leaf":
                name = self.expect("name", "leaf name")
                if name.text in OPERATORS or name.text in ("leaf", "diagram"):
                    raise ParseError(f"{name.text!r} is reserved", where=self.at(name))
                if name.text in leaves:
                    raise ParseError(f"leaf {name.text!r} defined twice", where=self.at(name))
                leaves[name.text] = self.leaf_block(name)
            elif tok.text == "diagram":
                if term is not None:
                    raise ParseError("diagram defined twice", where=self.at(tok))
                self.expect("=")
                term_pos = {}
                term = self.term((), term_pos)
                if self.peek().kind == ";":
                    self.next()
            else:
                raise ParseError(f"expected 'leaf' or 'diagram', found {tok.text!r}", where=self.at(tok))
        if term is None:
            raise ParseError("missing 'diagram = ...' statement", where=self.at(self.peek()))
        romdps = {name: _build_leaf(name, blk, self.at) for name, blk in leaves.items()}
        return _make_diagram(term, romdps, lambda p: self.at(term_pos[p]))

    def leaf_block(self, name_tok):
        self.expect("{")
        blk = {"_tok": name_tok}
        while self.peek().kind != "}":
            key = self.expect("name", "section name")
            sec = ALIASES.get(key.text, key.text)
            if sec not in SECTIONS:
                raise ParseError(f"unknown section {key.text!r} (expected one of {', '.join(SECTIONS)})",
                                 where=self.at(key))
            if sec in blk:
                raise ParseError(f"section {sec!r} given twice", where=self.at(key))
            self.expect("[")
            items = []
            while self.peek().kind != "]":
                a = self.expect("name", "vertex name")
                if sec == "edges":
                    self.expect("arrow", "->")
                    b = self.expect("name", "vertex name")
                    items.append((a, b))
                else:
                    items.append(a)
                if self.peek().kind == ",":
                    self.next()
                elif self.peek().kind != "]":
                    raise ParseError(f"expected ',' or ']', found {self.peek().text!r}", where=self.at(self.peek()))
            self.expect("]")
            if self.peek().kind == ";":
                self.next()
            blk[sec] = items
        self.expect("}")
        return blk

    def term(self, path, pos):
        tok = self.expect("name", "leaf name or operator")
        pos[path] = tok
        if tok.text in OPERATORS and self.peek().kind == "(":
            self.next()
            kids = [self.term(path + (0,), pos)]
            for k in range(1, OPERATORS[tok.text]):
                self.expect(",")
                kids.append(self.term(path + (k,), pos))
            self.expect(")")
            if tok.text == "trace":
                return Trace(kids[0])
            return (Seq if tok.text == "seq" else Sum)(*kids)
        if tok.text in OPERATORS:
            raise ParseError(f"operator {tok.text!r} needs arguments", where=self.at(tok))
        return Leaf(tok.text)


def _build_leaf(name, blk, at):
    """Validate one leaf with positions, then build it."""
    kinds, first = {}, {}
    for sec, is_p1 in (("players1", True), ("prob", False)):
        for tok in blk.get(sec, []):
            if tok.text in kinds:
                raise PartitionError(f"vertex {tok.text!r} declared twice in leaf {name}", where=at(tok))
            kinds[tok.text] = is_p1
            first[tok.text] = tok

    def known(tok, what):
        if tok.text not in kinds:
            raise UnknownVertexError(f"{what} uses undeclared vertex {tok.text!r} in leaf {name}", where=at(tok))
        return kinds[tok.text]

    has_pred, has_succ = set(), set()
    for a, b in blk.get("edges", []):
        ka, kb = known(a, "edge"), known(b, "edge")
        if ka == kb:
            side = "player-1" if ka else "probabilistic"
            raise AlternationError(f"edge {a.text} -> {b.text} joins two {side} vertices", where=at(a))
        has_succ.add(a.text)
        has_pred.add(b.text)
    for tok in blk.get("buchi", []):
        if known(tok, "Büchi set"):
            raise BuchiPlacementError(f"Büchi vertex {tok.text!r} is a player-1 vertex", where=at(tok))
    seen = {}
    for sec in ("entrances", "exits"):
        for tok in blk.get(sec, []):
            if not known(tok, sec[:-1]):
                raise OpenEndError(f"{sec[:-1]} {tok.text!r} is a probabilistic vertex", where=at(tok))
            if tok.text in seen:
                raise OpenEndError(f"{tok.text!r} listed twice among entrances/exits", where=at(tok))
            seen[tok.text] = sec
            if sec == "entrances" and tok.text in has_pred:
                raise EntrancePredecessorError(f"entrance {tok.text!r} has incoming edges", where=at(tok))
            if sec == "exits" and tok.text in has_succ:
                raise ExitSuccessorError(f"exit {tok.text!r} has outgoing edges", where=at(tok))

    def names(sec):
        return [t.text for t in blk.get(sec, [])]

    try:
        return RoMdp.from_labels(names("players1"), names("prob"),
                                 [(a.text, b.text) for a, b in blk.get("edges", [])],
                                 names("entrances"), names("exits"), names("buchi"))
    except SdBuchiError as err:
        raise err.located(at(blk["_tok"])) from None


def _make_diagram(term, leaves, where_of):
    def walk(t, p):
        if isinstance(t, Leaf):
            if t.name not in leaves:
                raise UnknownLeafError(f"unknown leaf {t.name!r}", where=where_of(p))
        for k, c in enumerate(_kids(t)):
            walk(c, p + (k,))

    walk(term, ())
    try:
        return Diagram(term, leaves)
    except SdBuchiError as err:
        path = err.where
        if path is not None and path.startswith("r"):
            p = tuple(int(x) for x in path.split(".")[1:])
            raise err.located(f"{where_of(p)} (node {path})") from None
        raise


def _kids(t):
    if isinstance(t, Leaf):
        return ()
    if isinstance(t, Trace):
        return (t.child,)
    return (t.left, t.right)


def parse_text(text: str, source: str | None = None) -> Diagram:
    return _Parser(text, source).parse()


# --- JSON ---------------------------------------------------------------

class _JsonTok:
    """Stand-in token carrying a JSON path instead of a line/column."""

    def __init__(self, text, path):
        if not isinstance(text, str):
            raise ParseError(f"expected a string, got {text!r}", where=path)
        self.text = text
        self.path = path


def parse_json(text: str, source: str | None = None) -> Diagram:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, where=_where(source, err.lineno, err.colno)) from None
    pre = f"{source}:" if source else ""
    return diagram_from_dict(doc, pre)


def diagram_from_dict(doc, pre="") -> Diagram:
    if not isinstance(doc, dict) or "diagram" not in doc:
        raise ParseError("expected an object with 'leaves' and 'diagram'", where=f"{pre}$")
    raw_leaves = doc.get("leaves", {})
    if not isinstance(raw_leaves, dict):
        raise ParseError("'leaves' must be an object", where=f"{pre}$.leaves")
    leaves = {}
    for name, body in raw_leaves.items():
        base = f"{pre}$.leaves.{name}"
        if not isinstance(body, dict):
            raise ParseError("leaf must be an object", where=base)
        blk = {"_tok": _JsonTok(name, base)}
        for key, items in body.items():
            sec = ALIASES.get(key, key)
            if sec not in SECTIONS:
                raise ParseError(f"unknown section {key!r}", where=f"{base}.{key}")
            if not isinstance(items, list):
                raise ParseError("section must be a list", where=f"{base}.{key}")
            if sec == "edges":
                edges = []
                for k, e in enumerate(items):
                    if not (isinstance(e, list) and len(e) == 2):
                        raise ParseError("edge must be a [source, target] pair", where=f"{base}.edges[{k}]")
                    edges.append((_JsonTok(e[0], f"{base}.edges[{k}]"), _JsonTok(e[1], f"{base}.edges[{k}]")))
                blk[sec] = edges
            else:
                blk[sec] = [_JsonTok(v, f"{base}.{key}[{k}]") for k, v in enumerate(items)]
        leaves[name] = _build_leaf(name, blk, lambda tok: tok.path)
    paths = {}
    term = _term_from_json(doc["diagram"], (), paths, f"{pre}$.diagram")
    return _make_diagram(term, leaves, lambda p: paths[p])


def _term_from_json(node, path, paths, where):
    paths[path] = where
    if isinstance(node, str):
        return Leaf(node)
    if isinstance(node, dict) and len(node) == 1:
        (op, arg), = node.items()
        if op == "trace":
            return Trace(_term_from_json(arg, path + (0,), paths, f"{where}.trace"))
        if op in ("seq", "sum") and isinstance(arg, list) and len(arg) == 2:
            kids = [_term_from_json(a, path + (k,), paths, f"{where}.{op}[{k}]") for k, a in enumerate(arg)]
            return (Seq if op == "seq" else Sum)(*kids)
    raise ParseError("expected a leaf name, {'trace': term}, {'seq': [l, r]} or {'sum': [l, r]}", where=where)


# --- printing -------------------------------------------------------------

def _leaf_dict(a: RoMdp) -> dict:
    g = a.graph
    lab = g.labels
    return {
        "players1": [lab[v] for v in g.player1],
        "prob": [lab[v] for v in g.prob],
        "edges": [[lab[u], lab[v]] for u, v in sorted(g.edges)],
        "entrances": [lab[v] for v in a.entrances],
        "exits": [lab[v] for v in a.exits],
        "buchi": [lab[v] for v in sorted(g.buchi)],
    }


def _term_json(t):
    if isinstance(t, Leaf):
        return t.name
    if isinstance(t, Trace):
        return {"trace": _term_json(t.child)}
    return {("seq" if isinstance(t, Seq) else "sum"): [_term_json(t.left), _term_json(t.right)]}


def _term_text(t):
    if isinstance(t, Leaf):
        return t.name
    if isinstance(t, Trace):
        return f"trace({_term_text(t.child)})"
    op = "seq" if isinstance(t, Seq) else "sum"
    return f"{op}({_term_text(t.left)}, {_term_text(t.right)})"


def diagram_to_dict(d: Diagram) -> dict:
    return {"leaves": {name: _leaf_dict(d.leaves[name]) for name in sorted(d.leaves)},
            "diagram": _term_json(d.term)}


def print_json(d: Diagram) -> str:
    return json.dumps(diagram_to_dict(d), indent=2) + "\n"


def print_text(d: Diagram) -> str:
    out = []
    for name in sorted(d.leaves):
        blk = _leaf_dict(d.leaves[name])
        out.append(f"leaf {name} {{")
        for sec in SECTIONS:
            if sec == "edges":
                body = ", ".join(f"{u} -> {v}" for u, v in blk[sec])
            else:
                body = ", ".join(blk[sec])
            out.append(f"  {sec} [{body}];")
        out.append("}")
        out.append("")
    out.append(f"diagram = {_term_text(d.term)};")
    return "\n".join(out) + "\n"


def load(path) -> Diagram:
    """Read a diagram file; ``.json`` selects the JSON reader, anything else the text reader."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err.strerror}") from None
    if path.suffix.lower() == ".json":
        return parse_json(text, str(path))
    return parse_text(text, str(path))


def dump(d: Diagram, path) -> None:
    path = Path(path)
    text = print_json(d) if path.suffix.lower() == ".json" else print_text(d)
    path.write_text(text, encoding="utf-8")


def render(d: Diagram, fmt: str = "text") -> str:
    return print_json(d) if fmt == "json" else print_text(d)


__all__ = ["parse_text", "parse_json", "print_text", "print_json", "load", "dump", "render",
           "diagram_from_dict", "diagram_to_dict", "path_str"]
