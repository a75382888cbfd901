"""Words over a symbolic alphabet: free and cyclic reduction, parsing, printing.

A letter is a pair ``(symbol, sign)`` with ``sign`` in ``{+1, -1}``.  Whether a
symbol is a group constant or a variable is decided by the context that owns the
word (a presentation, a tower, an equation system), never by the word itself.

Words are immutable and always freely reduced.
"""

from __future__ import annotations

import re
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlphabetError, ParseError

Letter = tuple  # (symbol: str, sign: int)

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _free_reduce(letters: Iterable[Letter]) -> tuple:
    out: list = []
    for sym, sign in letters:
        if out and out[-1][0] == sym and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((sym, sign))
    return tuple(out)


class Word:
    """A freely reduced word.  The empty word is the identity."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[Letter] = (), *, reduced: bool = False):
        letters = tuple(letters)
        if not reduced:
            for sym, sign in letters:
                if sign not in (1, -1) or not sym:
                    raise ValueError(f"bad letter {(sym, sign)!r}")
            letters = _free_reduce(letters)
        self.letters = letters
        self._hash = None

    @classmethod
    def parse(cls, text: str) -> "Word":
        return parse_word(text)

    @classmethod
    def gen(cls, symbol: str, power: int = 1) -> "Word":
        sign = 1 if power >= 0 else -1
        return cls(((symbol, sign),) * abs(power), reduced=True)

    # -- basic protocol --------------------------------------------------
    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.letters[item], reduced=True)
        return self.letters[item]

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        if isinstance(other, Word):
            return self.letters == other.letters
        if isinstance(other, str):
            return self.letters == parse_word(other).letters
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.letters)
        return self._hash

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)

    # -- group operations ------------------------------------------------
    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return multiply(self, other)

    def __pow__(self, n: int) -> "Word":
        return power(self, n)

    def __invert__(self) -> "Word":
        return invert(self)

    def inverse(self) -> "Word":
        return invert(self)

    @property
    def symbols(self) -> frozenset:
        return frozenset(sym for sym, _ in self.letters)

    def shortlex_key(self, order: Mapping[Letter, int] | None = None):
        if order is None:
            return (len(self.letters), self.letters)
        return (len(self.letters), tuple(order[l] for l in self.letters))


def reduce(w: Word | Iterable[Letter]) -> Word:
    """Free reduction.  Words are reduced on construction, so this is mostly a cast."""
    if isinstance(w, Word):
        return w
    return Word(w)


def _check_alphabet(words: Sequence[Word], alphabet) -> None:
    if alphabet is None:
        return
    allowed = set(alphabet)
    for w in words:
        extra = w.symbols - allowed
        if extra:
            raise AlphabetError(f"letters {sorted(extra)} not in alphabet {sorted(allowed)}")


def multiply(u: Word, v: Word, alphabet=None) -> Word:
    _check_alphabet((u, v), alphabet)
    a, b = u.letters, v.letters
    # cancellation only happens at the seam
    i = 0
    n = min(len(a), len(b))
    while i < n and a[-1 - i][0] == b[i][0] and a[-1 - i][1] == -b[i][1]:
        i += 1
    return Word(a[: len(a) - i] + b[i:], reduced=True)


def product_of(words: Iterable[Word]) -> Word:
    out: list = []
    for w in words:
        for sym, sign in w.letters:
            if out and out[-1][0] == sym and out[-1][1] == -sign:
                out.pop()
            else:
                out.append((sym, sign))
    return Word(out, reduced=True)


def invert(w: Word) -> Word:
    return Word(tuple((sym, -sign) for sym, sign in reversed(w.letters)), reduced=True)


def power(w: Word, n: int) -> Word:
    if n < 0:
        w, n = invert(w), -n
    return product_of([w] * n)


def conjugate(u: Word, v: Word, alphabet=None) -> Word:
    """``v^-1 u v``."""
    _check_alphabet((u, v), alphabet)
    return product_of((invert(v), u, v))


def commutator(u: Word, v: Word, alphabet=None) -> Word:
    """``u^-1 v^-1 u v``."""
    _check_alphabet((u, v), alphabet)
    return product_of((invert(u), invert(v), u, v))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w = conjugator^-1 core conjugator``."""
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    core = Word(letters[i : j + 1], reduced=True)
    conj = Word(letters[len(letters) - i :], reduced=True) if i else Word()
    return core, conj


def is_cyclically_reduced(w: Word) -> bool:
    l = w.letters
    return len(l) < 2 or not (l[0][0] == l[-1][0] and l[0][1] == -l[-1][1])


def cyclic_permutations(w: Word) -> list[Word]:
    l = w.letters
    return [Word(l[i:] + l[:i], reduced=True) for i in range(len(l))] if l else [w]


def primitive_root(w: Word) -> tuple[Word, int]:
    """For a cyclically reduced word, the shortest ``p`` with ``w == p^n`` literally."""
    l = w.letters
    n = len(l)
    for p in range(1, n + 1):
        if n % p == 0 and l[:p] * (n // p) == l:
            return Word(l[:p], reduced=True), n // p
    return w, 1


def substitute(w: Word, mapping: Mapping[str, Word]) -> Word:
    """Replace each symbol in ``mapping`` by its image; other letters are kept."""
    parts = []
    for sym, sign in w.letters:
        img = mapping.get(sym)
        if img is None:
            parts.append(Word(((sym, sign),), reduced=True))
        else:
            parts.append(img if sign == 1 else invert(img))
    return product_of(parts)


def letters_of(alphabet: Sequence[str]) -> list[Letter]:
    """Letters in the order a1, a1^-1, a2, a2^-1, ... (the shortlex order we use)."""
    out = []
    for s in alphabet:
        out.append((s, 1))
        out.append((s, -1))
    return out


def enumerate_reduced_words(alphabet: Sequence[str], max_length: int) -> Iterator[Word]:
    """All freely reduced words of length <= max_length, in shortlex order."""
    letters = letters_of(alphabet)
    layer: list[tuple] = [()]
    yield Word()
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for l in letters:
                if w and w[-1][0] == l[0] and w[-1][1] == -l[1]:
                    continue
                nxt.append(w + (l,))
        for w in nxt:
            yield Word(w, reduced=True)
        layer = nxt


def ball_size(rank: int, radius: int) -> int:
    if rank == 0:
        return 1
    return 1 + sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, radius + 1))


def abelianization(w: Word, generators: Sequence[str]) -> tuple[int, ...]:
    index = {g: i for i, g in enumerate(generators)}
    vec = [0] * len(generators)
    for sym, sign in w.letters:
        if sym not in index:
            raise AlphabetError(f"letter {sym!r} not among generators")
        vec[index[sym]] += sign
    return tuple(vec)


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<int>-?\d+)|(?P<op>[\^\[\],()]))"
)


class _WordParser:
    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.text = text
        self.pos = 0
        self.line0 = line
        self.col0 = column
        self.tokens = self._tokenize()
        self.i = 0

    def _where(self, offset: int) -> tuple[int, int]:
        before = self.text[:offset]
        line = self.line0 + before.count("\n")
        if "\n" in before:
            col = offset - before.rfind("\n")
        else:
            col = self.col0 + offset
        return line, col

    def error(self, msg: str, offset: int | None = None):
        if offset is None:
            offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        line, col = self._where(offset)
        raise ParseError(msg, line, col)

    def _tokenize(self):
        toks = []
        pos = 0
        text = self.text
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                self.tokens = toks
                self.i = len(toks)
                line, col = self._where(pos)
                raise ParseError(f"unexpected character {text[pos]!r}", line, col)
            start = m.start(m.lastgroup)
            kind = m.lastgroup
            toks.append((kind, m.group(kind), start))
            pos = m.end()
        return toks

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None:
            self.error("unexpected end of word")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            self.error(f"expected {value or kind}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Word:
        w = self.word()
        if self.i != len(self.tokens):
            self.error(f"unexpected {self.peek()[1]!r}")
        return w

    def word(self) -> Word:
        parts = []
        while True:
            kind, val, _ = self.peek()
            if kind in ("ident",) or (kind == "int" and val == "1") or val in ("[", "("):
                parts.append(self.factor())
            else:
                break
        return product_of(parts)

    def factor(self) -> Word:
        base = self.atom()
        while self.peek()[1] == "^":
            self.take()
            kind, val, off = self.peek()
            if kind == "int":
                self.take()
                base = power(base, int(val))
            elif val == "(":
                self.take()
                conj = self.word()
                self.take(value=")")
                base = conjugate(base, conj)
            elif kind == "ident":
                self.take()
                base = conjugate(base, Word(((val, 1),), reduced=True))
            else:
                self.error("expected exponent after '^'", off)
        return base

    def atom(self) -> Word:
        kind, val, off = self.take()
        if kind == "ident":
            return Word(((val, 1),), reduced=True)
        if kind == "int":
            if val != "1":
                self.error(f"unexpected integer {val}", off)
            return Word()
        if val == "(":
            w = self.word()
            self.take(value=")")
            return w
        if val == "[":
            u = self.word()
            self.take(value=",")
            v = self.word()
            self.take(value="]")
            return commutator(u, v)
        self.error(f"unexpected {val!r}", off)


def parse_word(text: str, *, line: int = 1, column: int = 1) -> Word:
    """Parse the shared word syntax.

    >>> str(parse_word("[a,b] (c)^(d) g^-2"))
    'a^-1 b^-1 a b d^-1 c d g^-1 g^-1'
    """
    return _WordParser(text, line, column).parse()


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    return " ".join(sym if sign == 1 else f"{sym}^-1" for sym, sign in w.letters)


def W(text: str) -> Word:
    """Short alias used heavily in tests and examples."""
    return parse_word(text)
