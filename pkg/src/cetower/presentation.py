"""Finite presentations standing in for a torsion-free hyperbolic base group.

The word problem is solved by Dehn's algorithm, which is a complete decision
procedure when the symmetrized relators satisfy C'(1/6).  Conjugacy and
centralizers of non-free presentations are bounded searches whose negative
answers are reported as bound exhaustion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import AlphabetError, BoundExhausted, UnsupportedPresentation
from .words import (
    Word,
    abelianization,
    commutator,
    cyclic_permutations,
    cyclic_reduce,
    enumerate_reduced_words,
    invert,
    primitive_root,
    product_of,
)

SIXTH = Fraction(1, 6)


@dataclass(frozen=True)
class SmallCancellationReport:
    lam: Fraction
    piece: Word
    relator: Word
    c_prime_sixth: bool
    torsion_relators: tuple = ()

    @property
    def torsion_free_candidate(self) -> bool:
        return not self.torsion_relators


@dataclass(frozen=True)
class ConjugacyResult:
    """``status`` is one of ``conjugate``, ``not_conjugate``, ``bound_exhausted``."""

    status: str
    witness: Word | None = None

    def __bool__(self) -> bool:
        return self.status == "conjugate"


@dataclass(frozen=True)
class CentralizerResult:
    generators: tuple
    exact: bool
    note: str = ""


def _lcp(a: tuple, b: tuple) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


class Presentation:
    """``<generators | relators>`` with relators stored cyclically reduced.

    ``allow_unsafe`` lets ``is_trivial`` run Dehn's algorithm even when C'(1/6)
    fails; the answer "nontrivial" is then not certified.
    """

    def __init__(
        self,
        generators: Sequence[str],
        relators: Sequence[Word] = (),
        name: str | None = None,
        allow_unsafe: bool = False,
    ):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generators")
        self.name = name
        self.allow_unsafe = allow_unsafe
        rels = []
        for r in relators:
            r = r if isinstance(r, Word) else Word.parse(r)
            self.check_word(r)
            core, _ = cyclic_reduce(r)
            if core:
                rels.append(core)
        self.relators = tuple(rels)
        sym = set()
        for r in self.relators:
            for p in cyclic_permutations(r) + cyclic_permutations(invert(r)):
                sym.add(p)
        self.symmetrized = frozenset(sym)
        self._report = None
        self._dehn_table = None

    # ------------------------------------------------------------------
    def __repr__(self):
        return f"Presentation({list(self.generators)}, {[str(r) for r in self.relators]})"

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.generators == other.generators
            and self.relators == other.relators
            and self.name == other.name
        )

    def __hash__(self):
        return hash((self.generators, self.relators))

    @property
    def letters(self) -> tuple:
        return self.generators

    @property
    def is_free(self) -> bool:
        return not self.relators

    def check_word(self, w: Word) -> None:
        extra = w.symbols - set(self.generators)
        if extra:
            raise AlphabetError(f"letters {sorted(extra)} are not generators of {self.name or 'the group'}")

    @property
    def sc_lambda(self) -> Fraction:
        return self.small_cancellation().lam

    def small_cancellation(self) -> SmallCancellationReport:
        if self._report is None:
            self._report = check_small_cancellation(self)
        return self._report

    # ------------------------------------------------------------------
    def _require_decidable(self):
        if self.is_free or self.allow_unsafe:
            return
        rep = self.small_cancellation()
        if not rep.c_prime_sixth:
            raise UnsupportedPresentation(
                f"presentation is not C'(1/6) (lambda = {rep.lam}); Dehn's algorithm is not a decision procedure"
            )
        if rep.torsion_relators:
            raise UnsupportedPresentation("presentation has proper-power relators (torsion)")

    def _table(self):
        if self._dehn_table is None:
            table: dict = {}
            for r in self.symmetrized:
                n = len(r)
                for k in range(n // 2 + 1, n + 1):
                    prefix = r.letters[:k]
                    repl = invert(Word(r.letters[k:], reduced=True)).letters
                    table.setdefault(k, {})[prefix] = repl
            self._dehn_table = sorted(table.items(), reverse=True)
        return self._dehn_table

    def dehn_reduce(self, w: Word) -> Word:
        """Replace more-than-half relator subwords by their complements until stuck."""
        if self.is_free:
            return w
        table = self._table()
        letters = list(w.letters)
        changed = True
        while changed:
            changed = False
            for i in range(len(letters)):
                for k, prefixes in table:
                    if i + k > len(letters):
                        continue
                    repl = prefixes.get(tuple(letters[i : i + k]))
                    if repl is not None:
                        letters[i : i + k] = repl
                        letters = list(Word(letters).letters)
                        changed = True
                        break
                if changed:
                    break
        return Word(letters, reduced=True)

    def is_trivial(self, w: Word) -> bool:
        self.check_word(w)
        if self.is_free:
            return not w
        self._require_decidable()
        return not self.dehn_reduce(w)

    def wp(self, w: Word) -> str:
        return "trivial" if self.is_trivial(w) else "nontrivial"

    def equal(self, u: Word, v: Word) -> bool:
        return self.is_trivial(u * invert(v))

    def normal_form(self, w: Word):
        """Canonical key for free groups; ``None`` when no normal form is known."""
        return w if self.is_free else None

    def ball(self, radius: int) -> Iterator[Word]:
        return enumerate_reduced_words(self.generators, radius)

    def cyclic_dehn_reduce(self, w: Word) -> Word:
        """Dehn reduction applied to every cyclic permutation until none shortens."""
        w = self.dehn_reduce(w)
        core, _ = cyclic_reduce(w)
        while True:
            best = core
            for p in cyclic_permutations(core):
                q, _ = cyclic_reduce(self.dehn_reduce(p))
                if len(q) < len(best):
                    best = q
                    break
            if len(best) == len(core):
                return core
            core = best

    # ------------------------------------------------------------------
    def relator_lattice_contains(self, vec: Sequence[int]) -> bool:
        """Is ``vec`` in the rational span of the relators' abelianizations?"""
        if not any(vec):
            return True
        rows = [abelianization(r, self.generators) for r in self.relators]
        if not rows:
            return False
        m = np.array(rows, dtype=float)
        aug = np.vstack([m, np.array(vec, dtype=float)])
        return np.linalg.matrix_rank(aug) == np.linalg.matrix_rank(m)

    def abelianization(self, w: Word) -> tuple:
        return abelianization(w, self.generators)


def free_group(*generators: str, name: str | None = None) -> Presentation:
    if len(generators) == 1 and not isinstance(generators[0], str):
        generators = tuple(generators[0])
    return Presentation(generators, (), name=name)


def surface_group(genus: int = 2, name: str | None = None) -> Presentation:
    """Closed orientable surface group with generators a, b, c, d, ... in pairs."""
    gens = [chr(ord("a") + i) for i in range(2 * genus)]
    rel = product_of(commutator(Word.gen(gens[2 * i]), Word.gen(gens[2 * i + 1])) for i in range(genus))
    return Presentation(gens, [rel], name=name or f"S{genus}")


def check_small_cancellation(p: Presentation) -> SmallCancellationReport:
    """Measure the C'(lambda) constant by comparing all symmetrized relators pairwise."""
    sym = sorted(p.symmetrized, key=lambda w: w.letters)
    lam = Fraction(0)
    piece = Word()
    where = Word()
    for i, r in enumerate(sym):
        for s in sym:
            if s is r:
                continue
            k = _lcp(r.letters, s.letters)
            if k and Fraction(k, len(r)) > lam:
                lam = Fraction(k, len(r))
                piece = Word(r.letters[:k], reduced=True)
                where = r
    torsion = tuple(r for r in p.relators if primitive_root(r)[1] > 1)
    return SmallCancellationReport(lam, piece, where, lam < SIXTH, torsion)


def conjugacy(p: Presentation, u: Word, v: Word, bound: int = 4) -> ConjugacyResult:
    """Search ``t`` with ``t^-1 u t = v``.  Exact for free groups."""
    p.check_word(u)
    p.check_word(v)
    if p.is_free:
        cu, ku = cyclic_reduce(u)
        cv, kv = cyclic_reduce(v)
        if len(cu) != len(cv):
            return ConjugacyResult("not_conjugate")
        n = len(cu)
        for i in range(max(n, 1)):
            rot = Word(cu.letters[i:] + cu.letters[:i], reduced=True)
            if rot == cv:
                # cu = x y, rot = y x = x^-1 cu x with x = cu[:i]
                x = Word(cu.letters[:i], reduced=True)
                t = product_of((ku, x, kv))
                return ConjugacyResult("conjugate", t)
        return ConjugacyResult("not_conjugate")
    p._require_decidable()
    cu = p.cyclic_dehn_reduce(u)
    cv = p.cyclic_dehn_reduce(v)
    if not cu and not cv:
        return ConjugacyResult("conjugate", Word())
    if bool(cu) != bool(cv):
        return ConjugacyResult("not_conjugate")
    vi = invert(v)
    for t in p.ball(bound):
        if p.is_trivial(product_of((invert(t), u, t, vi))):
            return ConjugacyResult("conjugate", t)
    return ConjugacyResult("bound_exhausted")


def centralizer_base(p: Presentation, g: Word, bound: int = 3) -> CentralizerResult:
    """Generator of the (cyclic) centralizer of a nontrivial ``g``.

    Free groups: exact root extraction.  Otherwise roots of the cyclically
    Dehn-reduced word are tried, and then short candidate roots ``f`` with
    ``f^n = g``; the result is tagged as bound-limited.
    """
    p.check_word(g)
    if p.is_trivial(g):
        raise ValueError("the centralizer of the identity is the whole group")
    if p.is_free:
        core, k = cyclic_reduce(g)
        root, _ = primitive_root(core)
        return CentralizerResult((product_of((invert(k), root, k)),), True)
    w = p.dehn_reduce(g)
    core, k = cyclic_reduce(w)
    root, n = primitive_root(core)
    best = product_of((invert(k), root, k))
    best_n = n
    # look for a shorter root f with f^m = g, m > best_n
    for f in p.ball(bound):
        if not f or len(f) * 2 > len(w) + 2 * bound:
            continue
        for m in range(best_n + 1, len(w) + 2):
            if p.is_trivial(product_of([f] * m + [invert(g)])):
                best, best_n = f, m
                break
    return CentralizerResult((best,), False, f"bound-limited (search radius {bound})")
