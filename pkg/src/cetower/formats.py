"""Text formats for groups, systems, towers, homomorphisms and NTQ systems.

All five share one block syntax::

    group F2 { generators: a, b; relators: ; }
    tower H { base: group F { generators: a, b; relators: ; }; level { letter: t; center_of: a; } }

A value is everything up to the next ``;`` outside brackets.  ``base`` and
``over`` take either an inline group block or a path, resolved relative to the
file that mentions it.  ``#`` starts a comment.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from pathlib import Path

from .embeddings import NtqLevel, NtqSystem
from .equations import EqSystem
from .errors import ParseError
from .presentation import Presentation
from .tower import GroupHom, Tower, tower_over
from .words import Word, format_word, parse_word

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_NAME_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
KINDS = ("group", "system", "tower", "hom", "ntq")


@dataclass
class _Value:
    text: str
    line: int
    column: int


@dataclass
class _Block:
    kind: str
    name: str | None
    line: int
    column: int
    items: dict = field(default_factory=dict)  # key -> _Value | _Block
    children: list = field(default_factory=list)  # nested level blocks
    key_pos: dict = field(default_factory=dict)  # key -> (line, column)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.newlines = [i for i, ch in enumerate(text) if ch == "\n"]

    def where(self, pos: int) -> tuple:
        line = bisect.bisect_left(self.newlines, pos)
        start = self.newlines[line - 1] + 1 if line else 0
        return line + 1, pos - start + 1

    def error(self, msg: str, pos: int | None = None):
        line, col = self.where(self.pos if pos is None else pos)
        raise ParseError(msg, line, col)

    def skip(self):
        t = self.text
        while self.pos < len(t):
            if t[self.pos].isspace():
                self.pos += 1
            elif t[self.pos] == "#":
                while self.pos < len(t) and t[self.pos] != "\n":
                    self.pos += 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def ident(self, what: str = "a name") -> str:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def starts_block(self) -> bool:
        self.skip()
        m = re.match(r"(group|tower|system|hom|ntq)\b[^;{}]*\{", self.text[self.pos :])
        return m is not None

    def block(self) -> _Block:
        self.skip()
        line, col = self.where(self.pos)
        kind = self.ident("a block kind")
        name = None
        if self.peek() != "{":
            name = self.ident("a block name")
        self.expect("{")
        b = _Block(kind, name, line, col)
        while True:
            ch = self.peek()
            if ch == "}":
                self.pos += 1
                return b
            if not ch:
                self.error(f"unterminated {kind} block")
            kpos = self.pos
            key = self.ident("a key")
            if key == "level" and self.peek() == "{":
                self.pos += 1
                lvl = _Block("level", None, *self.where(kpos))
                self._items(lvl)
                b.children.append(lvl)
                continue
            self._item(b, key, kpos)

    def _items(self, b: _Block):
        while True:
            ch = self.peek()
            if ch == "}":
                self.pos += 1
                return
            if not ch:
                self.error("unterminated level block")
            kpos = self.pos
            self._item(b, self.ident("a key"), kpos)

    def _item(self, b: _Block, key: str, kpos: int):
        if key in b.items:
            self.error(f"duplicate key {key!r}", kpos)
        b.key_pos[key] = self.where(kpos)
        self.expect(":")
        if self.starts_block():
            b.items[key] = self.block()
            if self.peek() == ";":
                self.pos += 1
            return
        self.skip()
        start = self.pos
        depth = 0
        t = self.text
        while self.pos < len(t):
            ch = t[self.pos]
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif depth <= 0 and ch == ";":
                break
            elif depth <= 0 and ch == "}":
                self.error(f"missing ';' after {key}")
            self.pos += 1
        else:
            self.error(f"missing ';' after {key}")
        raw = t[start : self.pos].rstrip()
        self.pos += 1
        b.items[key] = _Value(raw, *self.where(start))


def _split(v: _Value) -> list:
    """Split at top-level commas; returns ``_Value`` pieces with positions."""
    out = []
    depth, start = 0, 0
    text = v.text
    for i, ch in enumerate(text + ","):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth <= 0:
            piece = text[start:i]
            lead = len(piece) - len(piece.lstrip())
            off = start + lead
            before = text[:off]
            if "\n" in before:
                line = v.line + before.count("\n")
                col = off - before.rfind("\n")
            else:
                line, col = v.line, v.column + off
            if piece.strip():
                out.append(_Value(piece.strip(), line, col))
            elif text.strip():
                raise ParseError("empty list entry", line, col)
            start = i + 1
    return out


def _word(v: _Value) -> Word:
    return parse_word(v.text, line=v.line, column=v.column)


def _words(v: _Value) -> tuple:
    return tuple(_word(p) for p in _split(v))


def _idents(v: _Value) -> tuple:
    out = []
    for p in _split(v):
        if not _NAME_OK.match(p.text):
            raise ParseError(f"bad name {p.text!r}", p.line, p.column)
        out.append(p.text)
    return tuple(out)


def _flag(v: _Value) -> bool:
    t = v.text.strip().lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0", ""):
        return False
    raise ParseError(f"expected true or false, found {v.text!r}", v.line, v.column)


def _need(b: _Block, key: str):
    if key not in b.items:
        raise ParseError(f"{b.kind} block is missing '{key}'", b.line, b.column)
    return b.items[key]


def _value(b: _Block, key: str) -> _Value:
    v = _need(b, key)
    if isinstance(v, _Block):
        raise ParseError(f"'{key}' takes a plain value", v.line, v.column)
    return v


def _check_keys(b: _Block, allowed):
    for k, v in b.items.items():
        if k not in allowed:
            raise ParseError(f"unknown key {k!r} in {b.kind} block", *b.key_pos.get(k, (v.line, v.column)))


# ----------------------------------------------------------------------
# building objects
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class HomRecord:
    """A homomorphism file: generator images plus the names of its ends."""

    source: str
    target: str
    images: dict
    name: str | None = None

    def bind(self, source, target: Tower) -> GroupHom:
        return GroupHom(source, target, dict(self.images), name=self.name)


def _group(v, base_dir: Path | None):
    if isinstance(v, _Block):
        if v.kind != "group":
            raise ParseError(f"expected a group block, found {v.kind}", v.line, v.column)
        return _build(v, base_dir)
    path = Path(v.text.strip())
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    if not path.exists():
        raise ParseError(f"group file {v.text.strip()!r} not found", v.line, v.column)
    obj = load(path)
    if not isinstance(obj, Presentation):
        raise ParseError(f"{v.text.strip()!r} is not a group file", v.line, v.column)
    return obj


def _build(b: _Block, base_dir: Path | None):
    try:
        return _BUILDERS[b.kind](b, base_dir)
    except KeyError:
        raise ParseError(f"unknown block kind {b.kind!r}", b.line, b.column) from None
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), b.line, b.column) from None


def _build_group(b: _Block, base_dir) -> Presentation:
    _check_keys(b, ("generators", "relators", "unsafe"))
    gens = _idents(_value(b, "generators"))
    rels = _words(b.items["relators"]) if "relators" in b.items else ()
    unsafe = _flag(b.items["unsafe"]) if "unsafe" in b.items else False
    return Presentation(gens, rels, name=b.name, allow_unsafe=unsafe)


def _build_system(b: _Block, base_dir) -> EqSystem:
    _check_keys(b, ("over", "vars", "equations"))
    group = _group(_need(b, "over"), base_dir)
    vs = _idents(_value(b, "vars")) if "vars" in b.items else ()
    eqs = _words(b.items["equations"]) if "equations" in b.items else ()
    return EqSystem(vs, group, eqs, b.name)


def _build_tower(b: _Block, base_dir) -> Tower:
    _check_keys(b, ("base", "bound"))
    base = _group(_need(b, "base"), base_dir)
    bound = int(_value(b, "bound").text) if "bound" in b.items else 2
    level_pairs = []
    for lvl in b.children:
        _check_keys(lvl, ("letter", "center_of"))
        letter = _idents(_value(lvl, "letter"))
        if len(letter) != 1:
            raise ParseError("a level has exactly one letter", lvl.line, lvl.column)
        level_pairs.append((letter[0], _word(_value(lvl, "center_of"))))
    return tower_over(base, level_pairs, bound=bound, name=b.name)


def _build_hom(b: _Block, base_dir) -> HomRecord:
    _check_keys(b, ("source", "target", "map"))
    images = {}
    for p in _split(_value(b, "map")):
        if "->" not in p.text:
            raise ParseError("expected 'generator -> word'", p.line, p.column)
        lhs, rhs = p.text.split("->", 1)
        g = lhs.strip()
        if not _NAME_OK.match(g):
            raise ParseError(f"bad generator {g!r}", p.line, p.column)
        if g in images:
            raise ParseError(f"generator {g!r} mapped twice", p.line, p.column)
        off = p.text.index("->") + 2
        off += len(p.text[off:]) - len(p.text[off:].lstrip())
        images[g] = parse_word(rhs.strip(), line=p.line, column=p.column + off)
    return HomRecord(_value(b, "source").text.strip(), _value(b, "target").text.strip(), images, b.name)


def _build_ntq(b: _Block, base_dir) -> NtqSystem:
    _check_keys(b, ("base",))
    base = _group(_need(b, "base"), base_dir)
    levels = []
    for lvl in b.children:
        _check_keys(lvl, ("form", "vars", "equation", "center_of", "centralizer"))
        form = _value(lvl, "form").text.strip()
        vs = _idents(lvl.items["vars"]) if "vars" in lvl.items else ()
        eq = _word(lvl.items["equation"]) if "equation" in lvl.items else None
        cen = _word(lvl.items["center_of"]) if "center_of" in lvl.items else None
        cz = _words(lvl.items["centralizer"]) if "centralizer" in lvl.items else ()
        try:
            levels.append(NtqLevel(form, vs, eq, cen, cz))
        except ValueError as exc:
            raise ParseError(str(exc), lvl.line, lvl.column) from None
    return NtqSystem(base, tuple(levels), b.name)


_BUILDERS = {
    "group": _build_group,
    "system": _build_system,
    "tower": _build_tower,
    "hom": _build_hom,
    "ntq": _build_ntq,
}


def loads(text: str, base_dir: Path | str | None = None, kind: str | None = None):
    r = _Reader(text)
    b = r.block()
    if r.peek():
        r.error("unexpected text after the block")
    if kind is not None and b.kind != kind:
        raise ParseError(f"expected a {kind} block, found {b.kind}", b.line, b.column)
    return _build(b, Path(base_dir) if base_dir is not None else None)


def load(path, kind: str | None = None):
    path = Path(path)
    return loads(path.read_text(encoding="utf-8"), path.parent, kind)


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------


def _head(kind: str, name) -> str:
    return f"{kind} {name} {{" if name and _NAME_OK.match(name) else f"{kind} {{"


def _wl(words) -> str:
    return ", ".join(format_word(w) for w in words)


def dump_group(p: Presentation, indent: str = "") -> str:
    lines = [_head("group", p.name), f"{indent}  generators: {', '.join(p.generators)};"]
    lines.append(f"{indent}  relators: {_wl(p.relators)};")
    if p.allow_unsafe:
        lines.append(f"{indent}  unsafe: true;")
    lines.append(f"{indent}}}")
    return "\n".join(lines)


def dump_system(s: EqSystem) -> str:
    return "\n".join(
        [
            _head("system", s.name),
            f"  over: {dump_group(s.group, '  ')};",
            f"  vars: {', '.join(s.variables)};",
            f"  equations: {_wl(s.equations)};",
            "}",
        ]
    )


def dump_tower(t: Tower) -> str:
    lines = [_head("tower", t.name), f"  base: {dump_group(t.base, '  ')};"]
    if t.bound != 2:
        lines.append(f"  bound: {t.bound};")
    for lvl in t.levels:
        lines.append(f"  level {{ letter: {lvl.letter}; center_of: {format_word(lvl.center_of)}; }}")
    lines.append("}")
    return "\n".join(lines)


def dump_hom(h) -> str:
    if isinstance(h, GroupHom):
        src = getattr(h.source, "name", None) or "source"
        tgt = getattr(h.target, "name", None) or "target"
        h = HomRecord(src, tgt, h.images, h.name)
    maps = ", ".join(f"{g} -> {format_word(w)}" for g, w in h.images.items())
    return "\n".join([_head("hom", h.name), f"  source: {h.source};", f"  target: {h.target};", f"  map: {maps};", "}"])


def dump_ntq(n: NtqSystem) -> str:
    lines = [_head("ntq", n.name), f"  base: {dump_group(n.base, '  ')};"]
    for lvl in n.levels:
        parts = [f"form: {lvl.form};"]
        if lvl.variables:
            parts.append(f"vars: {', '.join(lvl.variables)};")
        if lvl.equation is not None:
            parts.append(f"equation: {format_word(lvl.equation)};")
        if lvl.center_of is not None:
            parts.append(f"center_of: {format_word(lvl.center_of)};")
        if lvl.centralizer:
            parts.append(f"centralizer: {_wl(lvl.centralizer)};")
        lines.append(f"  level {{ {' '.join(parts)} }}")
    lines.append("}")
    return "\n".join(lines)


def dumps(obj) -> str:
    if isinstance(obj, Presentation):
        return dump_group(obj)
    if isinstance(obj, EqSystem):
        return dump_system(obj)
    if isinstance(obj, Tower):
        return dump_tower(obj)
    if isinstance(obj, (GroupHom, HomRecord)):
        return dump_hom(obj)
    if isinstance(obj, NtqSystem):
        return dump_ntq(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
