"""Standard quadratic words: normalization, Euler characteristic, solution classes.

A standard quadratic word is a product of atoms followed by a constant ``d``:
commutators ``[x, y]`` (orientable case) or squares ``x^2`` (non-orientable case),
then conjugates ``z^-1 c z``.  Normalization returns an automorphism ``phi`` of
the free factor on the variables together with a conjugator ``k`` such that
``k^-1 w^phi k`` freely reduces to the standard word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .equations import EqSystem, hom_search
from .errors import NotASolution
from .words import Word, commutator, invert, product_of, substitute

COMM, SQUARE, CONJ = "comm", "square", "conj"


@dataclass(frozen=True)
class Atom:
    kind: str
    variables: tuple
    constant: Word | None = None

    @property
    def word(self) -> Word:
        if self.kind == COMM:
            x, y = self.variables
            return commutator(Word.gen(x), Word.gen(y))
        if self.kind == SQUARE:
            return Word.gen(self.variables[0], 2)
        z = Word.gen(self.variables[0])
        return product_of((invert(z), self.constant, z))

    @property
    def weight(self) -> int:
        return -2 if self.kind == COMM else -1

    def __str__(self):
        if self.kind == COMM:
            return f"[{self.variables[0]},{self.variables[1]}]"
        if self.kind == SQUARE:
            return f"{self.variables[0]}^2"
        return f"({self.constant})^{self.variables[0]}"


def comm_atom(x: str, y: str) -> Atom:
    return Atom(COMM, (x, y))


def square_atom(x: str) -> Atom:
    return Atom(SQUARE, (x,))


def conj_atom(z: str, c) -> Atom:
    return Atom(CONJ, (z,), c if isinstance(c, Word) else Word.parse(c))


@dataclass(frozen=True)
class StandardQuadratic:
    orientable: bool
    atoms: tuple
    d: Word = field(default_factory=Word)
    free_variables: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        kinds = [a.kind for a in self.atoms]
        if not kinds:
            raise ValueError("a standard quadratic word needs at least one atom")
        body = [k for k in kinds if k != CONJ]
        if any(k == CONJ for k in kinds[: len(body)]):
            raise ValueError("conjugate atoms must come after commutators and squares")
        if self.orientable and SQUARE in body:
            raise ValueError("orientable forms have no squares")
        if not self.orientable and (COMM in body or not body):
            raise ValueError("non-orientable forms are built from squares")
        if any(not a.constant for a in self.atoms if a.kind == CONJ):
            raise ValueError("conjugate atoms need a nontrivial constant")
        if self.m and not self.d:
            raise ValueError("punctured forms need a nontrivial d")
        seen = [v for a in self.atoms for v in a.variables]
        if len(seen) != len(set(seen)):
            raise ValueError("each variable belongs to exactly one atom")

    @property
    def genus(self) -> int:
        return sum(1 for a in self.atoms if a.kind != CONJ)

    n = genus

    @property
    def m(self) -> int:
        return sum(1 for a in self.atoms if a.kind == CONJ)

    @property
    def coefficients(self) -> tuple:
        return tuple(a.constant for a in self.atoms if a.kind == CONJ)

    @property
    def punctured(self) -> bool:
        return bool(self.m or self.d)

    @property
    def punctures(self) -> int:
        return self.m + 1 if self.punctured else 0

    @property
    def variables(self) -> tuple:
        return tuple(v for a in self.atoms for v in a.variables)

    @property
    def kind(self) -> str:
        o = "orientable" if self.orientable else "nonorientable"
        return f"{o}_{'punctured' if self.punctured else 'closed'}"

    @property
    def word(self) -> Word:
        return product_of([a.word for a in self.atoms] + [self.d])

    def as_system(self, group) -> EqSystem:
        return EqSystem(self.variables + self.free_variables, group, (self.word,))

    def __str__(self):
        parts = [str(a) for a in self.atoms]
        if self.d:
            parts.append(f"({self.d})")
        return " ".join(parts)


# ----------------------------------------------------------------------
# counting occurrences
# ----------------------------------------------------------------------


def occurrence_counts(words: Sequence[Word], variables) -> dict:
    vs = set(variables)
    counts = {v: 0 for v in variables}
    for w in words:
        for sym, _ in w.letters:
            if sym in vs:
                counts[sym] += 1
    return counts


def is_quadratic(s, variables=None) -> str:
    """``not``, ``quadratic`` or ``strictly_quadratic`` (only variables that appear count)."""
    if isinstance(s, EqSystem):
        words, variables = s.equations, s.variables
    else:
        words = [s] if isinstance(s, Word) else list(s)
        if variables is None:
            raise ValueError("say which symbols are variables")
    counts = [c for c in occurrence_counts(words, variables).values() if c]
    if any(c > 2 for c in counts):
        return "not"
    if all(c == 2 for c in counts):
        return "strictly_quadratic"
    return "quadratic"


# ----------------------------------------------------------------------
# normalization
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Normalization:
    standard: StandardQuadratic
    automorphism: dict
    conjugator: Word
    original: Word

    def check(self) -> bool:
        img = substitute(self.original, self.automorphism)
        k = self.conjugator
        return product_of((invert(k), img, k)) == self.standard.word


class _Normalizer:
    def __init__(self, w: Word, variables):
        self.vars = [v for v in variables]
        self.vset = set(variables)
        self.original = w
        self.phi = {v: Word.gen(v) for v in self.vars}
        self.k = Word()
        self.atoms: list = []
        self.R = w

    # -- bookkeeping ------------------------------------------------
    def subst(self, sigma: Mapping[str, Word]):
        self.phi = {v: substitute(img, sigma) for v, img in self.phi.items()}
        self.k = substitute(self.k, sigma)
        self.R = substitute(self.R, sigma)

    def rotate(self, i: int):
        """Move the first ``i`` letters of the remainder to its end."""
        if i == 0:
            return
        a = Word(self.R.letters[:i], reduced=True)
        b = Word(self.R.letters[i:], reduced=True)
        ai = invert(a)
        sigma = {}
        for atom in self.atoms:
            if atom.kind == CONJ:
                z = atom.variables[0]
                sigma[z] = Word.gen(z) * ai
            else:
                for v in atom.variables:
                    sigma[v] = product_of((a, Word.gen(v), ai))
        self.phi = {v: substitute(img, sigma) for v, img in self.phi.items()}
        self.k = substitute(self.k, sigma) * a
        self.R = b * a

    def positions(self):
        pos: dict = {}
        for i, (sym, sign) in enumerate(self.R.letters):
            if sym in self.vset:
                pos.setdefault(sym, []).append((i, sign))
        return pos

    def order(self, pos):
        return sorted(pos, key=lambda v: pos[v][0][0])

    def cyclic_clean(self):
        l = self.R.letters
        while len(l) > 1 and l[0][0] == l[-1][0] and l[0][1] == -l[-1][1]:
            self.rotate(1)
            l = self.R.letters

    def flip(self, v: str):
        self.subst({v: Word.gen(v, -1)})

    # -- moves --------------------------------------------------------
    def square_move(self, x: str, pos):
        (i, s), _ = pos[x]
        self.rotate(i)
        if s == -1:
            self.flip(x)
        j = self.positions()[x][1][0]
        u = Word(self.R.letters[1:j], reduced=True)
        self.subst({x: Word.gen(x) * invert(u)})
        # remainder is now x x U^-1 V
        assert self.R.letters[:2] == ((x, 1), (x, 1))
        self.atoms.append(square_atom(x))
        self.R = Word(self.R.letters[2:], reduced=True)

    def commutator_move(self, x: str, y: str, pos):
        self.rotate(pos[x][0][0])
        if self.R.letters[0][1] == -1:
            self.flip(x)
        p = self.positions()
        jx = p[x][1][0]
        iy, ey = p[y][0]
        if ey == -1:
            self.flip(y)
            p = self.positions()
        iy = p[y][0][0]
        jy = p[y][1][0]
        letters = self.R.letters
        A = Word(letters[1:iy], reduced=True)
        B = Word(letters[iy + 1 : jx], reduced=True)
        X, Y = Word.gen(x), Word.gen(y)
        # x A y B x^-1 C y^-1 D  ->  x y x^-1 (C B A) y^-1 D
        self.subst({x: X * invert(A)})
        self.subst({y: product_of((Y, invert(A), invert(B)))})
        p = self.positions()
        jx, jy = p[x][1][0], p[y][1][0]
        letters = self.R.letters
        assert letters[:3] == ((x, 1), (y, 1), (x, -1))
        E = Word(letters[3:jy], reduced=True)
        # x y x^-1 E y^-1 D  ->  E x^-1 y^-1 x y D
        self.subst({x: Word.gen(x, -1), y: Word.gen(y, -1)})
        self.subst({x: X * invert(E)})
        self.rotate(len(E))
        atom = comm_atom(x, y)
        assert self.R.letters[:4] == atom.word.letters
        self.atoms.append(atom)
        self.R = Word(self.R.letters[4:], reduced=True)

    def conj_move(self) -> bool:
        pos = self.positions()
        n = len(self.R)
        for z in self.order(pos):
            (i, s), (j, _) = pos[z]
            inner = self.R.letters[i + 1 : j]
            outer = self.R.letters[j + 1 :] + self.R.letters[:i]
            if not any(sym in self.vset for sym, _ in inner):
                start = i
            elif not any(sym in self.vset for sym, _ in outer):
                start = j
            else:
                continue
            self.rotate(start)
            if self.R.letters[0][1] == 1:
                self.flip(z)
            j = self.positions()[z][1][0]
            c = Word(self.R.letters[1:j], reduced=True)
            self.atoms.append(conj_atom(z, c))
            self.R = Word(self.R.letters[j + 1 :], reduced=True)
            return True
        return False

    def run(self):
        while True:
            self.cyclic_clean()
            pos = self.positions()
            if not pos:
                break
            order = self.order(pos)
            same = [v for v in order if pos[v][0][1] == pos[v][1][1]]
            if same:
                self.square_move(same[0], pos)
                continue
            linked = None
            for x in order:
                i, j = pos[x][0][0], pos[x][1][0]
                for y in order:
                    if y == x:
                        continue
                    inside = [i < p < j for p, _ in pos[y]]
                    if inside[0] != inside[1]:
                        linked = (x, y) if inside[0] else (x, y)
                        break
                if linked:
                    break
            if linked:
                x, y = linked
                # make y's first occurrence the one inside x's arc
                self.commutator_move(x, y, pos)
                continue
            if not self.conj_move():
                raise AssertionError("normalization stuck")
        self.d = self.R
        self.sort_atoms()
        self.squares_only()
        self.close_trivial_d()

    def swap(self, i: int):
        """Exchange atoms i and i+1 by conjugating the variables of atom i."""
        a, b = self.atoms[i], self.atoms[i + 1]
        bw = b.word
        bi = invert(bw)
        sigma = {}
        if a.kind == CONJ:
            sigma[a.variables[0]] = Word.gen(a.variables[0]) * bi
        else:
            for v in a.variables:
                sigma[v] = product_of((bw, Word.gen(v), bi))
        self.phi = {v: substitute(img, sigma) for v, img in self.phi.items()}
        self.k = substitute(self.k, sigma)
        self.atoms[i], self.atoms[i + 1] = b, a

    def sort_atoms(self):
        rank = {SQUARE: 0, COMM: 1, CONJ: 2}
        changed = True
        while changed:
            changed = False
            for i in range(len(self.atoms) - 1):
                if rank[self.atoms[i].kind] > rank[self.atoms[i + 1].kind]:
                    self.swap(i)
                    changed = True

    def squares_only(self):
        # x^2 [y,z] -> y^2 z^2 x^2
        while any(a.kind == SQUARE for a in self.atoms) and any(a.kind == COMM for a in self.atoms):
            i = max(n for n, a in enumerate(self.atoms) if a.kind == SQUARE)
            x = self.atoms[i].variables[0]
            y, z = self.atoms[i + 1].variables
            X, Y, Z = Word.gen(x), Word.gen(y), Word.gen(z)
            Xi = invert(X)
            sigma = {
                x: product_of((Y, Z, X)),
                y: product_of((Xi, Y, Z, X)),
                z: product_of((Xi, Z, X, X)),
            }
            self.phi = {v: substitute(img, sigma) for v, img in self.phi.items()}
            self.k = substitute(self.k, sigma)
            self.atoms[i : i + 2] = [square_atom(y), square_atom(z), square_atom(x)]

    def close_trivial_d(self):
        # c_1^{z_1} ... c_m^{z_m} with d = 1: conjugate away z_m, which becomes free
        while not self.d and self.atoms and self.atoms[-1].kind == CONJ:
            if len(self.atoms) == 1:
                raise ValueError(
                    f"the word is conjugate to the constant {self.atoms[0].constant}; it has no standard form"
                )
            last = self.atoms[-1]
            z = last.variables[0]
            Z = Word.gen(z)
            sigma = {}
            for atom in self.atoms[:-1]:
                if atom.kind == CONJ:
                    sigma[atom.variables[0]] = Word.gen(atom.variables[0]) * Z
                else:
                    for v in atom.variables:
                        sigma[v] = product_of((invert(Z), Word.gen(v), Z))
            self.phi = {v: substitute(img, sigma) for v, img in self.phi.items()}
            self.k = substitute(self.k, sigma) * invert(Z)
            self.atoms.pop()
            self.d = last.constant


def to_standard_form(w: Word, variables) -> Normalization:
    """Normalize a strictly quadratic word (variables in first-occurrence order)."""
    variables = list(variables)
    counts = occurrence_counts([w], variables)
    bad = [v for v, c in counts.items() if c not in (0, 2)]
    if bad:
        raise ValueError(f"variables {bad} do not occur exactly twice")
    used = [v for v in variables if counts[v]]
    unused = [v for v in variables if not counts[v]]
    norm = _Normalizer(w, used)
    norm.run()
    if not norm.atoms:
        raise ValueError(f"the word is conjugate to the constant {norm.d}; it has no standard form")
    present = {v for a in norm.atoms for v in a.variables}
    free = tuple(v for v in used if v not in present) + tuple(unused)
    phi = dict(norm.phi)
    for v in unused:
        phi[v] = Word.gen(v)
    orientable = not any(a.kind == SQUARE for a in norm.atoms)
    std = StandardQuadratic(orientable, tuple(norm.atoms), norm.d, free)
    return Normalization(std, phi, norm.k, w)


# ----------------------------------------------------------------------
# invariants
# ----------------------------------------------------------------------


def euler_char(s: StandardQuadratic) -> int:
    """Euler characteristic of the associated punctured surface."""
    if s.orientable:
        return 2 - 2 * s.genus - s.punctures
    return 2 - s.genus - s.punctures


def euler_char_atoms(s: StandardQuadratic) -> int:
    """Same number from atom weights: [x,y] -> -2; x^2, z^-1 c z, d -> -1."""
    total = 2 + sum(a.weight for a in s.atoms)
    if s.d:
        total -= 1
    return total


@dataclass(frozen=True)
class SolutionClass:
    kind: str  # degenerate | commutative | general_position | mixed
    commuting: tuple  # [r_i, r_{i+1}] == 1 for consecutive atoms
    trivial_atoms: tuple = ()

    @property
    def non_commutative(self) -> bool:
        return not all(self.commuting)


def classify_solution(s: StandardQuadratic, phi: Mapping[str, Word], target) -> SolutionClass:
    if not target.is_trivial(substitute(s.word, phi)):
        raise NotASolution("assignment does not solve the equation")
    images = [substitute(a.word, phi) for a in s.atoms]
    trivial = tuple(i for i, r in enumerate(images) if target.is_trivial(r))
    comm = tuple(target.is_trivial(commutator(images[i], images[i + 1])) for i in range(len(images) - 1))
    if trivial:
        kind = "degenerate"
    elif all(comm):
        kind = "commutative"
    elif not any(comm):
        kind = "general_position"
    else:
        kind = "mixed"
    return SolutionClass(kind, comm, trivial)


@dataclass(frozen=True)
class GeneralPositionResult:
    """``found`` carries a non-commutative solution.

    For CSA targets a non-commutative solution exists exactly when one in
    general position does, so the witness need not itself be in general
    position; ``solution_class`` says which it is.
    """

    status: str  # found | all_commutative_up_to_bound | no_solution_up_to_bound
    witness: dict | None = None
    solution_class: SolutionClass | None = None
    solutions_checked: int = 0
    radius: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def detect_general_position(s: StandardQuadratic, target, radius: int = 1) -> GeneralPositionResult:
    if len(s.atoms) < 2:
        raise ValueError("general position needs at least two atoms")
    sols = hom_search(EqSystem(s.variables, target, (s.word,)), target, radius)
    best = None
    for phi in sols:
        cls = classify_solution(s, phi, target)
        if cls.kind == "general_position":
            return GeneralPositionResult("found", phi, cls, len(sols), radius)
        if cls.non_commutative and best is None:
            best = (phi, cls)
    if best:
        return GeneralPositionResult("found", best[0], best[1], len(sols), radius)
    status = "all_commutative_up_to_bound" if sols else "no_solution_up_to_bound"
    return GeneralPositionResult(status, None, None, len(sols), radius)


def is_exempt_regular(s: StandardQuadratic) -> bool:
    """[x,y] d with d != 1, or the closed genus-two orientable word."""
    if not s.orientable or s.m:
        return False
    return (s.genus == 1 and bool(s.d)) or (s.genus == 2 and not s.d)


def is_regular(s: StandardQuadratic, evidence: GeneralPositionResult | None = None) -> str:
    if is_exempt_regular(s):
        return "regular"
    if euler_char(s) > -2:
        return "not_regular"
    if evidence is not None and evidence.found:
        return "regular"
    return "unknown"
