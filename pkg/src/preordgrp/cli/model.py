"""The textual model format: tokenizer, parser and printer.

A model file is a sequence of declarations, one per logical line (a newline
inside braces, brackets or parentheses does not end a declaration)::

    group S3 = table {order 6; id 0; row 0: 0 1 2 3 4 5; ...}
    group Z2 = block {rank 2; finite C2; relations [[2,0]]}
    group H = word {gens [[[1,1,0],[0,1,0],[0,0,1]]; [[1,0,0],[0,1,1],[0,0,1]]]; names x, y; alias z = [x,y]; bound 6}
    cone P on Z2 = {lattice [[0,1]]; pointed [[1,0]]; functional [1,0]; finite {0,1}}
    cone P0 on H = {gens {x, z}; exact heis-P0}
    pog X = (Z2, P)
    pog N = catalog NinZ
    morphism f : X -> Y = {matrix [[1,0]]; finite-map [0,0]}
    morphism q : HP -> Z = {images [[1,0],[0,1]]}
    check central f --bound 4

Names that are not plain identifiers are written in double quotes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ..algebra.finite import FiniteGroup
from ..algebra.lattice import Lattice
from ..carriers import (
    BlockGroup,
    BlockMorphism,
    BlockToWord,
    PreorderedGroup,
    WordCone,
    WordGroup,
    WordToBlock,
    make_cone,
)
from ..errors import ModelError

PREDICATES = (
    "star",
    "shs",
    "hse",
    "trivial-gc",
    "trivial-g",
    "trivial-grp",
    "normal-gc",
    "normal-g",
    "normal-grp",
    "gammac-normal",
    "central",
    "commutative",
    "abelian",
    "modular",
    "admissible",
)
OBJECT_PREDICATES = {"commutative", "abelian", "modular"}


class ParseError(ModelError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.line, self.col, self.msg = line, col, msg
        super().__init__(f"line {line}, column {col}: {msg}")


# ------------------------------------------------------------------ tokens


@dataclass
class Tok:
    kind: str  # name, int, str, opt, punct, nl, eof
    text: str
    line: int
    col: int


_NAME = r"(?:[A-Za-z_]|\d+[A-Za-z_])[A-Za-z0-9_./]*(?:-(?!>)[A-Za-z0-9_./]+)*"
_TOKEN = re.compile(
    rf"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<opt>--[A-Za-z][A-Za-z0-9-]*)"
    rf"|(?P<str>\"[^\"\n]*\")|(?P<name>{_NAME})|(?P<int>-?\d+)|(?P<punct>->|[=\{{\}}\[\]\(\);,:*^])"
)
_PLAIN = re.compile(rf"{_NAME}\Z")


def tokenize(text: str) -> list[Tok]:
    toks = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        col = pos - start + 1
        if kind == "nl":
            toks.append(Tok("nl", "\n", line, col))
            line += 1
            start = m.end()
        elif kind == "str":
            toks.append(Tok("str", m.group()[1:-1], line, col))
        elif kind not in ("ws", "comment"):
            toks.append(Tok(kind, m.group(), line, col))
        pos = m.end()
    toks.append(Tok("eof", "", line, pos - start + 1))
    return toks


def _statements(toks: list[Tok]) -> list[list[Tok]]:
    out, cur, stack = [], [], []
    pairs = {"}": "{", "]": "[", ")": "("}
    for t in toks:
        if t.kind == "punct" and t.text in "{[(":
            stack.append(t)
        elif t.kind == "punct" and t.text in "}])":
            if not stack:
                raise ParseError(f"unbalanced {t.text!r}", t.line, t.col)
            o = stack.pop()
            if pairs[t.text] != o.text:
                raise ParseError(f"{t.text!r} does not match {o.text!r} opened at {o.line}:{o.col}", t.line, t.col)
        if (t.kind == "nl" and not stack) or t.kind == "eof":
            if t.kind == "eof" and stack:
                o = stack[-1]
                raise ParseError(f"{o.text!r} is never closed", o.line, o.col)
            if cur:
                out.append(cur)
            cur = []
            continue
        if t.kind != "nl":
            cur.append(t)
    return out


class _Stream:
    def __init__(self, toks: list[Tok]):
        self.toks = toks
        self.i = 0
        last = toks[-1]
        self.end = Tok("eof", "", last.line, last.col + len(last.text))

    def peek(self, k: int = 0) -> Tok:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else self.end

    def next(self) -> Tok:
        t = self.peek()
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind in ("punct", "name") and t.text == text

    def expect(self, text: str) -> Tok:
        t = self.next()
        if t.text != text or t.kind not in ("punct", "name"):
            raise ParseError(f"expected {text!r}, found {t.text or 'end of line'!r}", t.line, t.col)
        return t

    def name(self) -> Tok:
        t = self.next()
        if t.kind not in ("name", "str"):
            raise ParseError(f"expected a name, found {t.text or 'end of line'!r}", t.line, t.col)
        return t

    def int(self) -> int:
        t = self.next()
        if t.kind != "int":
            raise ParseError(f"expected an integer, found {t.text or 'end of line'!r}", t.line, t.col)
        return int(t.text)

    def done(self) -> bool:
        return self.i >= len(self.toks)

    def expect_end(self):
        if not self.done():
            t = self.peek()
            raise ParseError(f"unexpected {t.text!r}", t.line, t.col)


def _int_list(s: _Stream) -> list[int]:
    s.expect("[")
    out = []
    while not s.at("]"):
        out.append(s.int())
        if not s.at("]"):
            s.expect(",")
    s.expect("]")
    return out


def _matrix(s: _Stream) -> list[list[int]]:
    s.expect("[")
    rows = []
    while not s.at("]"):
        rows.append(_int_list(s))
        if not s.at("]"):
            s.expect(",")
    s.expect("]")
    return rows


def _index_set(s: _Stream) -> list[int]:
    s.expect("{")
    out = []
    while not s.at("}"):
        out.append(s.int())
        if not s.at("}"):
            s.expect(",")
    s.expect("}")
    return out


def _fields(s: _Stream, parsers: dict) -> dict:
    """{key value; key value; ...} with a parser per key."""
    s.expect("{")
    out = {}
    while not s.at("}"):
        k = s.next()
        if k.kind != "name" or k.text not in parsers:
            raise ParseError(f"unknown field {k.text!r}; expected one of {sorted(parsers)}", k.line, k.col)
        if k.text in out and k.text not in ("row", "alias"):
            raise ParseError(f"duplicate field {k.text!r}", k.line, k.col)
        val = parsers[k.text](s)
        if k.text in ("row", "alias"):
            out.setdefault(k.text, []).append((k, val))
        else:
            out[k.text] = (k, val)
        if not s.at("}"):
            s.expect(";")
    s.expect("}")
    return out


# ---------------------------------------------------------- word expressions


def _word_expr(s: _Stream):
    """expr := atom ('*' atom)*; atom := (name | '[' expr ',' expr ']') ('^' int)?"""
    parts = [_word_atom(s)]
    while s.at("*"):
        s.next()
        parts.append(_word_atom(s))
    return ("prod", parts)


def _word_atom(s: _Stream):
    t = s.peek()
    if s.at("["):
        s.next()
        a = _word_expr(s)
        s.expect(",")
        b = _word_expr(s)
        s.expect("]")
        node = ("comm", a, b)
    elif t.kind in ("name", "str"):
        s.next()
        node = ("name", t)
    elif t.kind == "int" and t.text == "0":
        s.next()
        node = ("name", Tok("name", "identity", t.line, t.col))
    else:
        raise ParseError(f"expected a word element, found {t.text!r}", t.line, t.col)
    if s.at("^"):
        s.next()
        node = ("pow", node, s.int())
    return node


def _eval_word(g: WordGroup, node):
    kind = node[0]
    if kind == "prod":
        out = g.identity
        for p in node[1]:
            out = g.op(out, _eval_word(g, p))
        return out
    if kind == "comm":
        return g.commutator(_eval_word(g, node[1]), _eval_word(g, node[2]))
    if kind == "pow":
        x = _eval_word(g, node[1])
        base = x if node[2] >= 0 else g.neg(x)
        out = g.identity
        for _ in range(abs(node[2])):
            out = g.op(out, base)
        return out
    t = node[1]
    try:
        return g.parse_element(t.text)
    except ModelError as e:
        raise ParseError(str(e), t.line, t.col) from None


def _word_set(s: _Stream) -> list:
    s.expect("{")
    out = []
    while not s.at("}"):
        out.append(_word_expr(s))
        if not s.at("}"):
            s.expect(",")
    s.expect("}")
    return out


def _name_list(s: _Stream) -> list[str]:
    out = [s.name().text]
    while s.at(","):
        s.next()
        out.append(s.name().text)
    return out


def _alias(s: _Stream):
    n = s.name()
    s.expect("=")
    if s.at("[") and s.peek(1).kind == "punct" and s.peek(1).text == "[":
        return n.text, ("matrix", _matrix(s))
    return n.text, ("expr", _word_expr(s))


def _gens(s: _Stream) -> list:
    """[M; M; ...] with each M a matrix literal."""
    s.expect("[")
    out = []
    while not s.at("]"):
        out.append(_matrix(s))
        if not s.at("]"):
            s.expect(";")
    s.expect("]")
    return out


def _row(s: _Stream):
    i = s.int()
    s.expect(":")
    vals = []
    while s.peek().kind == "int":
        vals.append(s.int())
        if s.at(","):
            s.next()
    return i, vals


# ----------------------------------------------------------------- model


@dataclass
class Check:
    predicate: str
    target: str
    bound: Optional[int] = None
    base: Optional[str] = None
    tag: Optional[str] = None
    line: int = 0

    def text(self) -> str:
        out = f"check {self.predicate} {_q(self.target)}"
        if self.bound is not None:
            out += f" --bound {self.bound}"
        if self.base is not None:
            out += f" --base {_q(self.base)}"
        if self.tag is not None:
            out += f" --tag {self.tag}"
        return out


@dataclass
class ModelFile:
    groups: dict = field(default_factory=dict)
    cones: dict = field(default_factory=dict)  # name -> (group name, cone)
    pogs: dict = field(default_factory=dict)  # name -> PreorderedGroup
    pog_sources: dict = field(default_factory=dict)  # name -> (group name, cone name) or ("catalog", entry)
    morphisms: dict = field(default_factory=dict)
    morphism_sources: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    order: list = field(default_factory=list)  # (kind, name) in declaration order

    def is_empty(self) -> bool:
        return not self.order and not self.checks

    def resolve(self, name: str):
        if name in self.morphisms:
            return self.morphisms[name]
        if name in self.pogs:
            return self.pogs[name]
        raise ModelError(f"unknown object or morphism {name!r}")


def _q(name: str) -> str:
    return name if _PLAIN.match(name) and name not in ("catalog",) else f'"{name}"'


class _Parser:
    def __init__(self, catalog=None):
        self.m = ModelFile()
        self._catalog = catalog

    @property
    def catalog(self):
        if self._catalog is None:
            from ..corpus import builtin_catalog

            self._catalog = builtin_catalog()
        return self._catalog

    def _fresh(self, t: Tok, table: dict, kind: str):
        if t.text in table:
            raise ParseError(f"{kind} {t.text!r} is already defined", t.line, t.col)

    def _lookup(self, t: Tok, table: dict, kind: str):
        if t.text not in table:
            raise ParseError(f"undefined {kind} {t.text!r}", t.line, t.col)
        return table[t.text]

    def _finite_group(self, t: Tok) -> FiniteGroup:
        g = self.m.groups.get(t.text)
        if isinstance(g, FiniteGroup):
            return g
        if isinstance(g, BlockGroup) and g.rank == 0:
            return g.finite
        if g is None and t.text in self.catalog.groups:
            return self.catalog.groups[t.text]
        raise ParseError(f"undefined finite group {t.text!r}", t.line, t.col)

    def statement(self, toks: list[Tok]):
        s = _Stream(toks)
        head = s.next()
        if head.kind != "name":
            raise ParseError(f"expected a declaration keyword, found {head.text!r}", head.line, head.col)
        fn = getattr(self, "st_" + head.text, None)
        if fn is None:
            raise ParseError(f"unknown declaration {head.text!r}", head.line, head.col)
        fn(s, head)
        s.expect_end()

    # group ------------------------------------------------------------

    def st_group(self, s: _Stream, head: Tok):
        n = s.name()
        self._fresh(n, self.m.groups, "group")
        s.expect("=")
        kind = s.name()
        try:
            if kind.text == "table":
                f = _fields(s, {"order": _Stream.int, "id": _Stream.int, "row": _row})
                g = self._table_group(f, kind)
            elif kind.text == "block":
                f = _fields(s, {"rank": _Stream.int, "finite": _Stream.name, "relations": _matrix})
                rank = f["rank"][1] if "rank" in f else 0
                fin = self._finite_group(f["finite"][1]) if "finite" in f else None
                rel = Lattice(rank, [tuple(r) for r in f["relations"][1]]) if "relations" in f else None
                if rel is not None and any(len(r) != rank for r in f["relations"][1]):
                    k = f["relations"][0]
                    raise ParseError(f"relation vectors must have length {rank}", k.line, k.col)
                g = BlockGroup(rank, fin, rel)
            elif kind.text == "word":
                f = _fields(s, {"gens": _gens, "names": _name_list, "alias": _alias, "bound": _Stream.int})
                if "gens" not in f:
                    raise ParseError("word group needs gens", kind.line, kind.col)
                g = WordGroup(
                    f["gens"][1],
                    names=f["names"][1] if "names" in f else None,
                    bound=f["bound"][1] if "bound" in f else 6,
                )
                for k, (an, (ak, aval)) in f.get("alias", []):
                    g.aliases[an] = _eval_word(g, aval) if ak == "expr" else tuple(tuple(r) for r in aval)
            else:
                raise ParseError(f"unknown group kind {kind.text!r}; use table, block or word", kind.line, kind.col)
        except ParseError:
            raise
        except ModelError as e:
            raise ParseError(str(e), kind.line, kind.col) from None
        self.m.groups[n.text] = g
        self.m.order.append(("group", n.text))

    def _table_group(self, f: dict, kind: Tok) -> FiniteGroup:
        if "order" not in f:
            raise ParseError("table group needs an order", kind.line, kind.col)
        k, n = f["order"]
        if "id" in f and f["id"][1] != 0:
            t = f["id"][0]
            raise ParseError("the identity must be element 0", t.line, t.col)
        rows = {}
        for tok, (i, vals) in f.get("row", []):
            if i in rows or not 0 <= i < n:
                raise ParseError(f"bad or repeated row index {i}", tok.line, tok.col)
            if len(vals) != n:
                raise ParseError(f"row {i} has {len(vals)} entries, expected {n}", tok.line, tok.col)
            rows[i] = vals
        if len(rows) != n:
            raise ParseError(f"table needs {n} rows, found {len(rows)}", k.line, k.col)
        return FiniteGroup([rows[i] for i in range(n)])

    # cone -------------------------------------------------------------

    def st_cone(self, s: _Stream, head: Tok):
        n = s.name()
        self._fresh(n, self.m.cones, "cone")
        s.expect("on")
        gt = s.name()
        g = self._group_ref(gt)
        s.expect("=")
        if isinstance(g, WordGroup):
            f = _fields(s, {"gens": _word_set, "exact": _Stream.name})
            gens = [_eval_word(g, e) for e in f["gens"][1]] if "gens" in f else []
            exact = f["exact"][1].text if "exact" in f else None
            try:
                cone = WordCone(g, gens, exact)
            except ModelError as e:
                t = f["exact"][0]
                raise ParseError(str(e), t.line, t.col) from None
        else:
            start = s.peek()
            f = _fields(
                s,
                {"lattice": _matrix, "pointed": _matrix, "functional": _int_list, "finite": _index_set,
                 "gens": _word_set, "exact": _Stream.name},
            )
            for key in ("gens", "exact"):
                if key in f:
                    t = f[key][0]
                    raise ParseError(f"field {key!r} needs a word group, {gt.text!r} is a block group", t.line, t.col)
            try:
                cone = make_cone(
                    g,
                    [tuple(v) for v in f["lattice"][1]] if "lattice" in f else (),
                    [tuple(v) for v in f["pointed"][1]] if "pointed" in f else (),
                    tuple(f["functional"][1]) if "functional" in f else None,
                    f["finite"][1] if "finite" in f else (0,),
                )
            except ModelError as e:
                raise ParseError(str(e), start.line, start.col) from None
        self.m.cones[n.text] = (gt.text, cone)
        self.m.order.append(("cone", n.text))

    def _group_ref(self, t: Tok):
        g = self.m.groups.get(t.text)
        if g is None and t.text in self.catalog.groups:
            g = self.catalog.groups[t.text]
        if g is None:
            raise ParseError(f"undefined group {t.text!r}", t.line, t.col)
        return BlockGroup(0, g) if isinstance(g, FiniteGroup) else g

    # pog --------------------------------------------------------------

    def st_pog(self, s: _Stream, head: Tok):
        n = s.name()
        self._fresh(n, self.m.pogs, "pog")
        s.expect("=")
        if s.at("catalog"):
            s.next()
            t = s.name()
            obj = self._catalog_entry(t)
            if not isinstance(obj, PreorderedGroup):
                raise ParseError(f"catalog entry {t.text!r} is not an object", t.line, t.col)
            self.m.pog_sources[n.text] = ("catalog", t.text)
            p = PreorderedGroup(obj.group, obj.cone, n.text)
        else:
            s.expect("(")
            gt = s.name()
            g = self._group_ref(gt)
            s.expect(",")
            ct = s.name()
            gname, cone = self._lookup(ct, self.m.cones, "cone")
            s.expect(")")
            if gname != gt.text:
                raise ParseError(f"cone {ct.text!r} lives on {gname!r}, not {gt.text!r}", ct.line, ct.col)
            p = PreorderedGroup(g, cone, n.text)
            self.m.pog_sources[n.text] = (gt.text, ct.text)
        self.m.pogs[n.text] = p
        self.m.order.append(("pog", n.text))

    def _catalog_entry(self, t: Tok):
        try:
            return self.catalog[t.text]
        except KeyError:
            raise ParseError(f"no catalog entry named {t.text!r}", t.line, t.col) from None

    # morphism ---------------------------------------------------------

    def st_morphism(self, s: _Stream, head: Tok):
        n = s.name()
        self._fresh(n, self.m.morphisms, "morphism")
        if s.at("="):
            s.next()
            s.expect("catalog")
            t = s.name()
            m = self._catalog_entry(t)
            if isinstance(m, PreorderedGroup):
                raise ParseError(f"catalog entry {t.text!r} is not a morphism", t.line, t.col)
            self.m.morphisms[n.text] = m
            self.m.morphism_sources[n.text] = ("catalog", t.text)
            self.m.order.append(("morphism", n.text))
            return
        s.expect(":")
        at = s.name()
        a = self._lookup(at, self.m.pogs, "pog")
        s.expect("->")
        bt = s.name()
        b = self._lookup(bt, self.m.pogs, "pog")
        s.expect("=")
        start = s.peek()
        f = _fields(s, {"matrix": _matrix, "finite-map": _int_list, "images": _matrix, "word-images": _word_set})
        try:
            if a.is_block and b.is_block:
                for key in ("images", "word-images"):
                    if key in f:
                        t = f[key][0]
                        raise ParseError(f"field {key!r} is for word morphisms", t.line, t.col)
                mat = f["matrix"][1] if "matrix" in f else None
                if mat == [] and b.group.rank:
                    mat = None
                m = BlockMorphism(a, b, mat, f["finite-map"][1] if "finite-map" in f else None, name=n.text)
            elif not a.is_block and b.is_block:
                if "images" not in f:
                    raise ParseError("a word-to-block morphism needs images", start.line, start.col)
                m = WordToBlock(a, b, f["images"][1], name=n.text)
            elif a.is_block and not b.is_block:
                if "word-images" not in f:
                    raise ParseError("a block-to-word morphism needs word-images", start.line, start.col)
                m = BlockToWord(a, b, [_eval_word(b.group, e) for e in f["word-images"][1]], name=n.text)
            else:
                raise ParseError("morphisms between two word objects are not supported", at.line, at.col)
        except ParseError:
            raise
        except ModelError as e:
            raise ParseError(str(e), start.line, start.col) from None
        self.m.morphisms[n.text] = m
        self.m.morphism_sources[n.text] = None
        self.m.order.append(("morphism", n.text))

    # check ------------------------------------------------------------

    def st_check(self, s: _Stream, head: Tok):
        p = s.name()
        if p.text not in PREDICATES:
            raise ParseError(f"unknown predicate {p.text!r}; expected one of {', '.join(PREDICATES)}", p.line, p.col)
        t = s.name()
        if p.text in OBJECT_PREDICATES:
            self._lookup(t, self.m.pogs, "pog")
        else:
            self._lookup(t, self.m.morphisms, "morphism")
        c = Check(p.text, t.text, line=head.line)
        while not s.done():
            o = s.next()
            if o.kind != "opt":
                raise ParseError(f"unexpected {o.text!r}", o.line, o.col)
            if o.text == "--bound":
                c.bound = s.int()
                if c.bound < 1:
                    raise ParseError("bound must be positive", o.line, o.col)
            elif o.text == "--base":
                bt = s.name()
                self._lookup(bt, self.m.pogs, "pog")
                c.base = bt.text
            elif o.text == "--tag":
                tt = s.name()
                if tt.text not in ("gc", "g"):
                    raise ParseError("tag must be gc or g", tt.line, tt.col)
                c.tag = tt.text
            else:
                raise ParseError(f"unknown option {o.text!r}", o.line, o.col)
        if p.text == "admissible" and c.base is None:
            raise ParseError("admissible needs --base", head.line, head.col)
        self.m.checks.append(c)


def parse_model(text: str, catalog=None) -> ModelFile:
    p = _Parser(catalog)
    for st in _statements(tokenize(text)):
        p.statement(st)
    return p.m


# ------------------------------------------------------------------ printer


def _vec(v) -> str:
    return "[" + ",".join(str(int(x)) for x in v) + "]"


def _mat(rows) -> str:
    return "[" + ",".join(_vec(r) for r in rows) + "]"


def _print_group(name: str, g, finite_name: str = "") -> str:
    if isinstance(g, FiniteGroup):
        rows = "; ".join(f"row {i}: " + " ".join(str(int(x)) for x in r) for i, r in enumerate(g.table))
        return f"group {_q(name)} = table {{order {g.order}; id 0; {rows}}}"
    if isinstance(g, BlockGroup):
        parts = [f"rank {g.rank}"]
        if g.finite.order > 1:
            parts.append(f"finite {_q(finite_name)}")
        if g.relations.basis:
            parts.append(f"relations {_mat(g.relations.basis)}")
        return f"group {_q(name)} = block {{{'; '.join(parts)}}}"
    gens = "; ".join(_mat(m) for m in g.gens)
    parts = [f"gens [{gens}]", "names " + ", ".join(g.names)]
    for an, a in g.aliases.items():
        parts.append(f"alias {an} = {_mat(a)}")
    parts.append(f"bound {g.bound}")
    return f"group {_q(name)} = word {{{'; '.join(parts)}}}"


def _print_cone(name: str, gname: str, g, cone) -> str:
    if isinstance(cone, WordCone):
        parts = ["gens {" + ", ".join(g.format(x) for x in cone.gens) + "}"]
        if cone.exact:
            parts.append(f"exact {cone.exact}")
        return f"cone {_q(name)} on {_q(gname)} = {{{'; '.join(parts)}}}"
    parts = []
    fr = cone.free
    if fr.lattice.basis:
        parts.append(f"lattice {_mat(fr.lattice.basis)}")
    if fr.pointed:
        parts.append(f"pointed {_mat(fr.pointed)}")
    if fr.rank:
        parts.append(f"functional {_vec(fr.functional)}")
    parts.append("finite {" + ",".join(str(i) for i in cone.finite_elements) + "}")
    return f"cone {_q(name)} on {_q(gname)} = {{{'; '.join(parts)}}}"


def _print_morphism(name: str, m, a: str, b: str) -> str:
    if isinstance(m, BlockMorphism):
        body = f"matrix {_mat(m.matrix)}; finite-map {_vec(m.fmap)}"
    elif isinstance(m, WordToBlock):
        body = f"images {_mat(m.images)}"
    else:
        body = "word-images {" + ", ".join(m.codomain.group.format(x) for x in m.images) + "}"
    return f"morphism {_q(name)} : {_q(a)} -> {_q(b)} = {{{body}}}"


def print_model(m: ModelFile) -> str:
    out = []
    pog_names = {id(p): n for n, p in m.pogs.items()}
    for kind, name in m.order:
        if kind == "group":
            g = m.groups[name]
            fname = _finite_name(m, g.finite) if isinstance(g, BlockGroup) and g.finite.order > 1 else ""
            out.append(_print_group(name, g, fname))
        elif kind == "cone":
            gname, cone = m.cones[name]
            g = m.groups.get(gname)
            out.append(_print_cone(name, gname, g, cone))
        elif kind == "pog":
            src = m.pog_sources[name]
            if src[0] == "catalog":
                out.append(f"pog {_q(name)} = catalog {_q(src[1])}")
            else:
                out.append(f"pog {_q(name)} = ({_q(src[0])}, {_q(src[1])})")
        else:
            mm = m.morphisms[name]
            src = m.morphism_sources.get(name)
            if src:
                out.append(f"morphism {_q(name)} = catalog {_q(src[1])}")
            else:
                out.append(_print_morphism(name, mm, pog_names[id(mm.domain)], pog_names[id(mm.codomain)]))
    out.extend(c.text() for c in m.checks)
    return "\n".join(out) + ("\n" if out else "")


def _finite_name(m: ModelFile, f: FiniteGroup) -> str:
    for n, g in m.groups.items():
        if isinstance(g, FiniteGroup) and g == f:
            return n
    from ..corpus import builtin_catalog

    for n, g in builtin_catalog().groups.items():
        if g == f:
            return n
    raise ModelError("finite part of a block group has no name in this model")


# --------------------------------------------------------- catalog dump


def catalog_model() -> ModelFile:
    """The whole catalog as an explicit model (no catalog references)."""
    from ..corpus import builtin_catalog

    cat = builtin_catalog()
    m = ModelFile()
    finite_names = {}
    for gname, g in cat.groups.items():
        m.groups[gname] = g
        m.order.append(("group", gname))
        finite_names[g] = gname
    for oname, obj in cat.objects.items():
        g = obj.group
        if isinstance(g, BlockGroup) and g.rank == 0 and g.finite in finite_names:
            gname = finite_names[g.finite]
        else:
            gname = f"{oname}.grp"
            if isinstance(g, BlockGroup) and g.rank == 0:
                m.groups[gname] = g.finite
            else:
                m.groups[gname] = g
                if isinstance(g, BlockGroup) and g.finite.order > 1 and g.finite not in finite_names:
                    raise ModelError("catalog block group with an unnamed finite part")  # pragma: no cover
            m.order.append(("group", gname))
        cname = f"{oname}.cone"
        m.cones[cname] = (gname, obj.cone)
        m.order.append(("cone", cname))
        m.pogs[oname] = obj
        m.pog_sources[oname] = (gname, cname)
        m.order.append(("pog", oname))
    for mname, mm in cat.morphisms.items():
        m.morphisms[mname] = mm
        m.morphism_sources[mname] = None
        m.order.append(("morphism", mname))
    return m
