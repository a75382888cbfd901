"""Systems of equations over a group: triangular shape, evaluation, bounded search.

Every equation is a word ``s`` standing for ``s = 1``.  Variables are the
declared symbols; every other symbol is a constant of the coefficient group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import AlphabetError
from .finite import PermutationGroup
from .presentation import Presentation
from .words import Word, enumerate_reduced_words, invert, product_of, substitute

Assignment = dict  # variable symbol -> Word


@dataclass(frozen=True)
class EqSystem:
    variables: tuple
    group: object
    equations: tuple
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        eqs = tuple(e if isinstance(e, Word) else Word.parse(e) for e in self.equations)
        object.__setattr__(self, "equations", eqs)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variables")
        consts = set(self.group.generators) if self.group is not None else set()
        clash = consts & set(self.variables)
        if clash:
            raise AlphabetError(f"symbols {sorted(clash)} are both variables and constants")
        allowed = consts | set(self.variables)
        for i, e in enumerate(eqs):
            bad = e.symbols - allowed
            if bad:
                raise AlphabetError(f"equation {i} uses undeclared symbols {sorted(bad)}")

    @property
    def coefficient_free(self) -> bool:
        vs = set(self.variables)
        return all(e.symbols <= vs for e in self.equations)

    @property
    def used_variables(self) -> tuple:
        seen = set().union(*(e.symbols for e in self.equations)) if self.equations else set()
        return tuple(v for v in self.variables if v in seen)

    def constant_symbols(self) -> frozenset:
        return frozenset(self.group.generators) if self.group is not None else frozenset()

    def over(self, group) -> "EqSystem":
        return EqSystem(self.variables, group, self.equations, self.name)


@dataclass(frozen=True)
class TriangularSystem:
    """Triangles ``z_i z_j z_k = 1`` (variable indices) and pins ``z = a``.

    ``log`` maps every fresh variable to its value as a word in the original
    variables and constants, so solutions of the source system extend uniquely.
    """

    variables: tuple
    original_variables: tuple
    triangles: tuple
    constants: tuple
    log: tuple
    group: object = None

    def to_system(self) -> EqSystem:
        eqs = []
        for i, j, k in self.triangles:
            eqs.append(product_of(Word.gen(self.variables[n]) for n in (i, j, k)))
        for v, a in self.constants:
            eqs.append(Word.gen(v) * invert(a))
        return EqSystem(self.variables, self.group, eqs)

    def extend(self, solution: Mapping[str, Word]) -> Assignment:
        out = {v: solution[v] for v in self.original_variables}
        for v, defn in self.log:
            out[v] = substitute(defn, out)
        return out

    def restrict(self, solution: Mapping[str, Word]) -> Assignment:
        return {v: solution[v] for v in self.original_variables}

    @property
    def num_constant_equations(self) -> int:
        return len(self.constants)


def _fresh_names(taken: set, prefix: str = "w"):
    i = 1
    while True:
        name = f"{prefix}{i}"
        if name not in taken:
            taken.add(name)
            yield name
        i += 1


def triangulate(s: EqSystem) -> TriangularSystem:
    """Split into triangular and constant equations by adding fresh variables.

    Runs of constants and inverse letters are named by fresh variables; long
    products ``y1 ... yn`` are cut as ``y1 y2 w``, ``w w' e``, ``w' y3 ... yn``
    where ``e`` is pinned to the identity.
    """
    variables = list(s.variables)
    vset = set(variables)
    taken = set(variables) | set(s.constant_symbols())
    fresh = _fresh_names(taken)
    index = {v: i for i, v in enumerate(variables)}
    triangles: list = []
    constants: list = []
    pinned: dict = {}
    log: list = []
    state = {"e": None}

    def new_var(defn: Word) -> str:
        v = next(fresh)
        index[v] = len(variables)
        variables.append(v)
        log.append((v, defn))
        return v

    def identity_var() -> str:
        if state["e"] is None:
            state["e"] = new_var(Word())
            constants.append((state["e"], Word()))
        return state["e"]

    def pin(v: str, a: Word):
        constants.append((v, a))
        pinned[v] = a

    def tri(x, y, z):
        triangles.append((index[x], index[y], index[z]))

    for eq in s.equations:
        occurrences = [l for l in eq.letters if l[0] in vset]
        if not occurrences:
            if not eq:
                continue
            k = new_var(eq)
            pin(k, eq)
            e = identity_var()
            tri(k, e, e)
            continue
        if len(occurrences) == 1:
            # A z^e B = 1  =>  z^e = A^-1 B^-1
            i = next(n for n, l in enumerate(eq.letters) if l[0] in vset)
            sym, sign = eq.letters[i]
            a = Word(eq.letters[:i], reduced=True)
            b = Word(eq.letters[i + 1 :], reduced=True)
            val = invert(b * a)
            if sign == -1:
                val = invert(val)
            if sym not in pinned and sym in s.variables:
                pin(sym, val)
            else:
                k = new_var(invert(val))
                pin(k, invert(val))
                tri(sym, k, identity_var())
            continue
        # name constant runs and inverse letters
        factors: list = []
        run: list = []
        for sym, sign in eq.letters:
            if sym not in vset:
                run.append((sym, sign))
                continue
            if run:
                c = Word(run, reduced=True)
                k = new_var(c)
                pin(k, c)
                factors.append(k)
                run = []
            if sign == 1:
                factors.append(sym)
            else:
                k = new_var(Word(((sym, -1),), reduced=True))
                tri(sym, k, identity_var())
                factors.append(k)
        if run:
            c = Word(run, reduced=True)
            k = new_var(c)
            pin(k, c)
            factors.append(k)
        # cut the positive product into triangles
        defn = {v: Word.gen(v) for v in s.variables}
        for v, d in log:
            defn[v] = d
        while len(factors) > 3:
            y1, y2 = factors[0], factors[1]
            prefix = defn[y1] * defn[y2]
            w = new_var(invert(prefix))
            defn[w] = invert(prefix)
            tri(y1, y2, w)
            w2 = new_var(prefix)
            defn[w2] = prefix
            tri(w, w2, identity_var())
            factors = [w2] + factors[2:]
        if len(factors) == 2:
            factors.append(identity_var())
        tri(*factors)
    return TriangularSystem(tuple(variables), tuple(s.variables), tuple(triangles), tuple(constants), tuple(log), s.group)


# ----------------------------------------------------------------------
# evaluation and search
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class EvalResult:
    satisfied: bool
    violated: int | None = None

    def __bool__(self):
        return self.satisfied


def _target(s: EqSystem, target):
    t = s.group if target is None else target
    if t is None:
        raise ValueError("no target group given")
    return t


def evaluate(s: EqSystem, phi: Mapping[str, Word], target=None) -> EvalResult:
    target = _target(s, target)
    missing = [v for v in s.variables if v not in phi]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    for i, e in enumerate(s.equations):
        if not target.is_trivial(substitute(e, phi)):
            return EvalResult(False, i)
    return EvalResult(True)


def candidate_elements(target, radius: int) -> list:
    if isinstance(target, PermutationGroup):
        return target.ball(radius)
    return list(enumerate_reduced_words(target.generators, radius))


def hom_search(s: EqSystem, target=None, radius: int = 1, limit: int | None = None, candidates=None) -> list:
    """All assignments with images from the radius ball that satisfy ``s``.

    Backtracks in declared variable order, testing each equation as soon as its
    last variable is assigned.  Results come in lexicographic candidate order.
    """
    target = _target(s, target)
    cands = list(candidates) if candidates is not None else candidate_elements(target, radius)
    order = list(s.variables)
    pos = {v: i for i, v in enumerate(order)}
    due: list = [[] for _ in order]
    always = []
    for e in s.equations:
        vs = [pos[x] for x in e.symbols if x in pos]
        if vs:
            due[max(vs)].append(e)
        else:
            always.append(e)
    if any(not target.is_trivial(e) for e in always):
        return []
    out: list = []
    phi: dict = {}

    def rec(i: int) -> bool:
        if i == len(order):
            out.append(dict(phi))
            return limit is not None and len(out) >= limit
        v = order[i]
        for c in cands:
            phi[v] = c
            if all(target.is_trivial(substitute(e, phi)) for e in due[i]):
                if rec(i + 1):
                    return True
        del phi[v]
        return False

    if not order:
        return [{}]
    rec(0)
    return out


@dataclass(frozen=True)
class RadicalResult:
    """``excluded`` is definitive; ``in_radical_up_to_bound`` is only evidence."""

    status: str
    witness: dict | None = None
    image: Word | None = None
    solutions_checked: int = 0

    @property
    def excluded(self) -> bool:
        return self.status == "excluded"


def radical_sample(s: EqSystem, w: Word, target=None, radius: int = 1) -> RadicalResult:
    target = _target(s, target)
    sols = hom_search(s, target, radius)
    for phi in sols:
        img = substitute(w, phi)
        if not target.is_trivial(img):
            return RadicalResult("excluded", phi, img, len(sols))
    return RadicalResult("in_radical_up_to_bound", None, None, len(sols))


def coordinate_presentation(s: EqSystem, with_constants: bool = True) -> Presentation:
    """The naive presentation ``<X, A | S, relators of A>`` (no radical taken).

    With ``with_constants=False`` a coefficient-free system is read as the
    group ``<X | S>``.
    """
    if not with_constants:
        if not s.coefficient_free:
            raise ValueError("system has constants")
        return Presentation(s.variables, s.equations, name=s.name)
    base = s.group
    gens = tuple(s.variables) + tuple(base.generators)
    rels = tuple(s.equations) + tuple(getattr(base, "relators", ()))
    return Presentation(gens, rels, name=s.name)
