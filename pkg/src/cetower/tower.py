"""Towers of centralizer extensions over a base presentation.

A tower ``H_n`` is built from the base ``H_0`` by successive HNN extensions
``H_k = <H_{k-1}, t_k | [C(u_k), t_k]>``.  Membership of ``v`` in ``C(u_k)`` is
decided by the commutator test ``[v, u_k] = 1`` in ``H_{k-1}``, which is sound
because every group in the tower is CSA.  Britton reduction then runs one stack
pass per stable letter, topmost first, recursing into the segments between
stable letters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import AlphabetError, UnsupportedPresentation
from .presentation import CentralizerResult, Presentation, centralizer_base
from .words import (
    Word,
    commutator,
    cyclic_reduce,
    enumerate_reduced_words,
    invert,
    primitive_root,
    product_of,
    substitute,
)


@dataclass(frozen=True)
class TowerLevel:
    letter: str
    center_of: Word
    center_generators: tuple
    exact: bool = True


@dataclass(frozen=True)
class RegistryEntry:
    """A maximal non-cyclic abelian subgroup, stored by a generating list."""

    representative: Word
    generators: tuple


@dataclass(frozen=True)
class TowerCentralizer:
    generators: tuple
    exact: bool
    note: str = ""
    registry_index: int | None = None
    conjugator: Word | None = None


def _fresh(prefix: str, taken) -> str:
    i = 1
    while f"{prefix}{i}" in taken:
        i += 1
    return f"{prefix}{i}"


class Tower:
    """Base presentation plus an ordered list of rank-1 centralizer extensions.

    Instances are treated as immutable; ``extend_centralizer`` returns a new
    tower that shares the lower levels.
    """

    def __init__(
        self,
        base: Presentation,
        levels: Sequence[TowerLevel] = (),
        registry: Sequence[RegistryEntry] = (),
        bound: int = 2,
        name: str | None = None,
    ):
        self.base = base
        self.levels = tuple(levels)
        self.registry = tuple(registry)
        self.bound = bound
        self.name = name
        self._level_of = {}
        for i, lvl in enumerate(self.levels, start=1):
            if lvl.letter in base.generators or lvl.letter in self._level_of:
                raise ValueError(f"stable letter {lvl.letter!r} is not fresh")
            self._level_of[lvl.letter] = i
        # (level, reduced word) -> does it commute with that level's u
        self._center_cache: dict = {}

    # ------------------------------------------------------------------
    def __repr__(self):
        lv = ", ".join(f"{l.letter}:C({l.center_of})" for l in self.levels)
        return f"Tower({list(self.base.generators)}; {lv})"

    def __eq__(self, other):
        return (
            isinstance(other, Tower)
            and self.base == other.base
            and self.levels == other.levels
            and self.name == other.name
        )

    def __hash__(self):
        return hash((self.base, self.levels))

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def stable_letters(self) -> tuple:
        return tuple(l.letter for l in self.levels)

    @property
    def generators(self) -> tuple:
        return self.base.generators + self.stable_letters

    alphabet = generators

    def level_of(self, symbol: str) -> int:
        return self._level_of.get(symbol, 0)

    def check_word(self, w: Word) -> None:
        extra = w.symbols - set(self.generators)
        if extra:
            raise AlphabetError(f"letters {sorted(extra)} are not in the tower alphabet")

    def truncate(self, k: int) -> "Tower":
        """The subtower ``H_k``."""
        keep = set(self.generators[: len(self.base.generators) + k])
        reg = tuple(
            e for e in self.registry if all(g.symbols <= keep for g in e.generators) and e.representative.symbols <= keep
        )
        return Tower(self.base, self.levels[:k], reg, self.bound)

    @property
    def relators(self) -> tuple:
        """Base relators followed by ``[c, t]`` for each listed center generator."""
        rels = list(self.base.relators)
        for lvl in self.levels:
            t = Word.gen(lvl.letter)
            for c in lvl.center_generators:
                rels.append(commutator(c, t))
        return tuple(rels)

    # ------------------------------------------------------------------
    # word problem
    # ------------------------------------------------------------------
    def _in_center(self, g: Word, k: int) -> bool:
        """Is the level-(k-1) word ``g`` in ``C(u_k)``?"""
        if not g:
            return True
        key = (k, g)
        hit = self._center_cache.get(key)
        if hit is None:
            u = self.levels[k - 1].center_of
            hit = not self._reduce(commutator(g, u), k - 1)
            self._center_cache[key] = hit
        return hit

    def _reduce(self, w: Word, k: int) -> Word:
        while k > 0 and self.levels[k - 1].letter not in w.symbols:
            k -= 1
        if k == 0:
            return self.base.dehn_reduce(w)
        t = self.levels[k - 1].letter
        segs: list = []
        signs: list = []
        cur = Word()
        run: list = []
        for letter in w.letters:
            if letter[0] != t:
                run.append(letter)
                continue
            if run:
                cur = cur * Word(run, reduced=True)
                run = []
            cur = self._reduce(cur, k - 1)
            e = letter[1]
            if signs and signs[-1] == -e and self._in_center(cur, k):
                signs.pop()
                cur = segs.pop() * cur
            else:
                segs.append(cur)
                signs.append(e)
                cur = Word()
        if run:
            cur = cur * Word(run, reduced=True)
        cur = self._reduce(cur, k - 1)
        parts = []
        for s, e in zip(segs, signs):
            parts.append(s)
            parts.append(Word(((t, e),), reduced=True))
        parts.append(cur)
        return product_of(parts)

    def britton_reduce(self, w: Word) -> Word:
        self.check_word(w)
        if not self.base.is_free:
            self.base._require_decidable()
        return self._reduce(w, self.height)

    def is_trivial(self, w: Word) -> bool:
        # Britton's lemma at each level, then the base word problem on what is left
        return not self.britton_reduce(w)

    def wp(self, w: Word) -> str:
        return "trivial" if self.is_trivial(w) else "nontrivial"

    def equal(self, u: Word, v: Word) -> bool:
        return self.is_trivial(u * invert(v))

    def commute(self, u: Word, v: Word) -> bool:
        return self.is_trivial(commutator(u, v))

    def find_pinch(self, w: Word):
        """Return ``(level, start, stop)`` of a removable pinch, or ``None``."""
        letters = w.letters
        for k in range(self.height, 0, -1):
            t = self.levels[k - 1].letter
            last = None
            for i, (sym, e) in enumerate(letters):
                if sym != t:
                    continue
                if last is not None and letters[last][1] == -e:
                    v = Word(letters[last + 1 : i], reduced=True)
                    if all(self.level_of(s) < k for s in v.symbols) and self._in_center(
                        self._reduce(v, k - 1), k
                    ):
                        return k, last, i + 1
                last = i
        return None

    def normal_form(self, w: Word):
        return None

    def ball(self, radius: int) -> Iterator[Word]:
        return enumerate_reduced_words(self.generators, radius)

    def abelianization(self, w: Word) -> tuple:
        from .words import abelianization

        return abelianization(w, self.generators)

    def relator_lattice_contains(self, vec) -> bool:
        nb = len(self.base.generators)
        if any(vec[nb:]):
            return False
        return self.base.relator_lattice_contains(vec[:nb])

    # ------------------------------------------------------------------
    # centralizers and extensions
    # ------------------------------------------------------------------
    def centralizer(self, g: Word, bound: int | None = None) -> TowerCentralizer:
        self.check_word(g)
        g = self.britton_reduce(g)
        if not g:
            raise ValueError("the centralizer of the identity is the whole group")
        bound = self.bound if bound is None else bound
        for idx, entry in enumerate(self.registry):
            for c in self.ball(bound):
                h = product_of((c, g, invert(c)))
                if all(self.commute(h, p) for p in entry.generators):
                    gens = tuple(self.britton_reduce(product_of((invert(c), p, c))) for p in entry.generators)
                    return TowerCentralizer(gens, False, f"registry entry {idx}", idx, c)
        if self.height == 0:
            r = centralizer_base(self.base, g)
            return TowerCentralizer(r.generators, r.exact, r.note)
        core, k = cyclic_reduce(g)
        root, _ = primitive_root(core)
        gen = product_of((invert(k), root, k))
        return TowerCentralizer((gen,), False, f"root extraction, registry searched to radius {bound}")

    def extend_centralizer(self, u: Word, rank: int = 1, letters: Sequence[str] | None = None) -> "Tower":
        """Adjoin ``rank`` pairwise commuting letters centralizing ``C(u)``."""
        if rank < 1:
            raise ValueError("rank must be positive")
        self.check_word(u)
        if self.is_trivial(u):
            raise ValueError("cannot extend the centralizer of the identity")
        if letters is None:
            taken = set(self.generators)
            letters = []
            for _ in range(rank):
                s = _fresh("t", taken)
                taken.add(s)
                letters.append(s)
        letters = list(letters)
        if len(letters) != rank:
            raise ValueError("need exactly one letter per rank")
        tower = self
        for s in letters:
            if s in tower.generators:
                raise ValueError(f"stable letter {s!r} is not fresh")
            c = tower.centralizer(u)
            lvl = TowerLevel(s, u, c.generators, c.exact)
            entry = RegistryEntry(u, c.generators + (Word.gen(s),))
            reg = list(tower.registry)
            if c.registry_index is not None:
                reg[c.registry_index] = entry
            else:
                reg.append(entry)
            tower = Tower(tower.base, tower.levels + (lvl,), reg, tower.bound, tower.name)
        return tower

    def with_levels(self, levels: Sequence[tuple]) -> "Tower":
        """Rebuild from ``(letter, center_of)`` pairs, recomputing centers and registry."""
        t = Tower(self.base, (), (), self.bound, self.name)
        for letter, u in levels:
            t = t.extend_centralizer(u, 1, [letter])
        return t


def tower_over(base: Presentation, levels: Sequence[tuple] = (), bound: int = 2, name=None) -> Tower:
    return Tower(base, bound=bound, name=name).with_levels(levels)


# ----------------------------------------------------------------------
# homomorphisms
# ----------------------------------------------------------------------

UNVERIFIED = "unverified"
RELATORS_VERIFIED = "relators_verified"


def _source_generators(src) -> tuple:
    return tuple(src.generators)


def _source_relators(src) -> tuple:
    return tuple(src.relators)


@dataclass
class GroupHom:
    """Map from source generators to target words, extended multiplicatively."""

    source: object
    target: Tower
    images: dict
    status: str = UNVERIFIED
    name: str | None = None

    def __post_init__(self):
        self.images = {k: (v if isinstance(v, Word) else Word.parse(v)) for k, v in self.images.items()}
        missing = [g for g in _source_generators(self.source) if g not in self.images]
        if missing:
            raise ValueError(f"no image given for {missing}")
        extra = set(self.images) - set(_source_generators(self.source))
        if extra:
            raise ValueError(f"images given for non-generators {sorted(extra)}")
        allowed = set(self.target.generators)
        for g, img in self.images.items():
            bad = img.symbols - allowed
            if bad:
                raise AlphabetError(f"image of {g} uses letters {sorted(bad)} outside the target")

    def __call__(self, w: Word) -> Word:
        bad = w.symbols - set(self.images)
        if bad:
            raise AlphabetError(f"letters {sorted(bad)} are not source generators")
        return substitute(w, self.images)

    apply = __call__

    def then(self, other: "GroupHom") -> "GroupHom":
        """``other`` after ``self``."""
        imgs = {g: other(w) for g, w in self.images.items()}
        return GroupHom(self.source, other.target, imgs)


@dataclass(frozen=True)
class VerifyResult:
    status: str
    failing_index: int | None = None
    failing_relator: Word | None = None
    image: Word | None = None

    @property
    def ok(self) -> bool:
        return self.failing_index is None


def verify_hom(h: GroupHom) -> VerifyResult:
    """Check every source relator maps to the identity of the target."""
    for i, r in enumerate(_source_relators(h.source)):
        img = h.target.britton_reduce(h(r))
        if img:
            return VerifyResult(h.status, i, r, img)
    if h.status == UNVERIFIED:
        h.status = RELATORS_VERIFIED
    return VerifyResult(h.status)


# ----------------------------------------------------------------------
# fingerprints: homomorphisms of a tower over a free base into SL2(Z/p)
# ----------------------------------------------------------------------

_P = 2_147_483_647


def _mat_mul(x, y, p=_P):
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def _mat_inv(x, p=_P):
    a, b, c, d = x
    return (d, (-b) % p, (-c) % p, a)


def _mat_pow(x, n, p=_P):
    if n < 0:
        x, n = _mat_inv(x, p), -n
    out = (1, 0, 0, 1)
    while n:
        if n & 1:
            out = _mat_mul(out, x, p)
        x = _mat_mul(x, x, p)
        n >>= 1
    return out


def _random_sl2(rng, p=_P):
    while True:
        a = rng.randrange(1, p)
        b = rng.randrange(p)
        c = rng.randrange(p)
        d = (1 + b * c) * pow(a, -1, p) % p
        return (a, b, c, d)


class Fingerprint:
    """Random representations sending each stable letter to a power of its ``u``.

    Since ``t -> M(u)^k`` commutes with the image of ``C(u)``, this is a genuine
    homomorphism; distinct fingerprints certify distinct elements.
    """

    def __init__(self, tower: Tower, seed: int = 0, copies: int = 2):
        if not tower.base.is_free:
            raise UnsupportedPresentation("fingerprints need a free base")
        rng = random.Random(seed)
        self.tables = []
        for _ in range(copies):
            table = {}
            for g in tower.base.generators:
                m = _random_sl2(rng)
                table[(g, 1)] = m
                table[(g, -1)] = _mat_inv(m)
            for lvl in tower.levels:
                mu = self._eval(table, lvl.center_of)
                m = _mat_pow(mu, rng.randrange(1000, 10**6))
                table[(lvl.letter, 1)] = m
                table[(lvl.letter, -1)] = _mat_inv(m)
            self.tables.append(table)

    @staticmethod
    def _eval(table, w: Word):
        out = (1, 0, 0, 1)
        for l in w.letters:
            out = _mat_mul(out, table[l])
        return out

    def __call__(self, w: Word) -> tuple:
        return tuple(self._eval(t, w) for t in self.tables)


def _distinct_representatives(group, words: Sequence[Word], seed: int) -> list:
    """Drop words equal in ``group`` to an earlier word."""
    if isinstance(group, Presentation) and group.is_free:
        return list(dict.fromkeys(words))
    fp = None
    if isinstance(group, Tower) and group.base.is_free:
        fp = Fingerprint(group, seed)
    buckets: dict = {}
    out = []
    for w in words:
        key = fp(w) if fp else None
        bucket = buckets.setdefault(key, [])
        if any(group.equal(w, v) for v in bucket):
            continue
        bucket.append(w)
        out.append(w)
    return out


@dataclass(frozen=True)
class InjectivityResult:
    status: str  # pass | counterexample | unsupported
    radius: int
    checked: int = 0
    counterexample: tuple | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def injectivity_sample(h: GroupHom, radius: int, seed: int = 0) -> InjectivityResult:
    """Images of pairwise distinct ball elements must be pairwise distinct."""
    src = h.source
    try:
        if isinstance(src, Presentation) and not src.is_free:
            src._require_decidable()
        elif isinstance(src, Tower) and not src.base.is_free:
            src.base._require_decidable()
        elif not hasattr(src, "equal"):
            raise UnsupportedPresentation("source has no word problem")
    except UnsupportedPresentation as exc:
        return InjectivityResult("unsupported", radius, note=str(exc))
    ball = list(enumerate_reduced_words(_source_generators(src), radius))
    elems = _distinct_representatives(src, ball, seed)
    tgt = h.target
    fp = Fingerprint(tgt, seed + 1) if tgt.base.is_free else None
    buckets: dict = {}
    for w in elems:
        img = h(w)
        key = fp(img) if fp else None
        bucket = buckets.setdefault(key, [])
        for v, vimg in bucket:
            if tgt.equal(img, vimg):
                return InjectivityResult("counterexample", radius, len(elems), (v, w))
        bucket.append((w, img))
    h.status = f"injectivity_sampled({radius})"
    return InjectivityResult("pass", radius, len(elems))
