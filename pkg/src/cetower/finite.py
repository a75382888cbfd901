"""Small permutation groups used as exact oracle targets in tests."""

from __future__ import annotations

from collections import deque
from typing import Mapping

from .errors import AlphabetError
from .words import Word, letters_of


def _compose(p: tuple, q: tuple) -> tuple:
    # apply p, then q
    return tuple(q[i] for i in p)


def _inverse(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


class PermutationGroup:
    """Group generated by named permutations; words are read left to right."""

    def __init__(self, generators: Mapping[str, tuple], name: str | None = None):
        self.gen_perms = {k: tuple(v) for k, v in generators.items()}
        degrees = {len(p) for p in self.gen_perms.values()}
        if len(degrees) != 1:
            raise ValueError("all generators must act on the same set")
        self.degree = degrees.pop()
        self.identity = tuple(range(self.degree))
        self.name = name
        self._letter = {}
        for g, p in self.gen_perms.items():
            self._letter[(g, 1)] = p
            self._letter[(g, -1)] = _inverse(p)
        self._reps = None

    def __repr__(self):
        return f"PermutationGroup({self.name or dict(self.gen_perms)})"

    @property
    def generators(self) -> tuple:
        return tuple(self.gen_perms)

    def element(self, w: Word) -> tuple:
        out = self.identity
        for l in w.letters:
            p = self._letter.get(l)
            if p is None:
                raise AlphabetError(f"letter {l[0]!r} is not a generator of {self.name}")
            out = _compose(out, p)
        return out

    def is_trivial(self, w: Word) -> bool:
        return self.element(w) == self.identity

    def equal(self, u: Word, v: Word) -> bool:
        return self.element(u) == self.element(v)

    def normal_form(self, w: Word):
        return self.element(w)

    def _bfs(self):
        if self._reps is None:
            reps = {self.identity: Word()}
            queue = deque([self.identity])
            letters = letters_of(self.generators)
            while queue:
                p = queue.popleft()
                w = reps[p]
                for l in letters:
                    q = _compose(p, self._letter[l])
                    if q not in reps:
                        reps[q] = w * Word((l,), reduced=True)
                        queue.append(q)
            self._reps = reps
        return self._reps

    @property
    def order(self) -> int:
        return len(self._bfs())

    def elements(self) -> list:
        """Shortest (shortlex-first) word for each element, in BFS order."""
        return list(self._bfs().values())

    def ball(self, radius: int) -> list:
        return [w for w in self.elements() if len(w) <= radius]


def symmetric_group_3() -> PermutationGroup:
    return PermutationGroup({"a": (1, 0, 2), "b": (1, 2, 0)}, name="S3")


def dihedral_group_4() -> PermutationGroup:
    """Symmetries of a square: ``a`` a quarter turn, ``b`` a reflection."""
    return PermutationGroup({"a": (1, 2, 3, 0), "b": (0, 3, 2, 1)}, name="D4")
