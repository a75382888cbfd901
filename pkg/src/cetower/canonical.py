"""Reduce a triangular system over the base group to systems over the free group.

For a triangle ``z_i z_j z_k = 1`` and a solution with values ``g_i, g_j, g_k``
the values factor as ``h1 c1 h2^-1``, ``h2 c2 h3^-1``, ``h3 c3 h1^-1`` with
short ``c``'s whose product is trivial.  Enumerating the short triples gives
finitely many systems over the free group whose solutions, pushed through the
word maps ``rho``, are solutions of the original system, and every solution
arises this way once the length cap is large enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .equations import EqSystem, TriangularSystem, evaluate, hom_search, triangulate
from .errors import NotASolution
from .presentation import Presentation, free_group
from .words import Word, enumerate_reduced_words, invert, product_of, substitute


@dataclass(frozen=True)
class CanonicalConfig:
    """``bound`` caps the length of the ``c`` words (lengths ``< bound``).

    ``delta`` is the hyperbolicity constant used only for the reported
    theoretical cap; it is not computed from the presentation.
    """

    bound: int = 1
    delta: int = 0
    rep_scheme: str | None = None

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("bound must be at least 1")

    def theoretical_exponent(self, alphabet_size: int) -> int:
        d = self.delta
        return 5050 * (d + 1) ** 6 * (2 * alphabet_size) ** (2 * d)

    def theoretical_L(self, q: int, alphabet_size: int) -> int:
        return q * 2 ** self.theoretical_exponent(alphabet_size)

    def describe_L(self, q: int, alphabet_size: int) -> str:
        return f"{q}*2^{self.theoretical_exponent(alphabet_size)}"


def rep_scheme(group: Presentation) -> str:
    return "geodesic" if group.is_free else "bounded"


def theta(g: Word, group: Presentation) -> Word:
    """A word equal to ``g`` in the group: free reduction or Dehn reduction."""
    group.check_word(g)
    if group.is_free:
        return g
    return group.dehn_reduce(g)


def xvar(j: int, k: int) -> str:
    return f"x{j}_{k}"


@dataclass(frozen=True)
class ReducedInstance:
    system: EqSystem
    rho: dict
    constants: tuple  # one (c1, c2, c3) per triangle
    group: Presentation
    index: int = 0

    def __post_init__(self):
        for j, cs in enumerate(self.constants):
            if len(cs) != 3:
                raise ValueError("each triangle needs three constants")
            if not self.group.is_trivial(product_of(cs)):
                raise ValueError(f"c1 c2 c3 is not trivial for triangle {j + 1}")

    def pushforward(self, phi: Mapping[str, Word]) -> dict:
        """``z -> theta(rho(z)^phi)``: the base-group solution built from ``phi``."""
        return {z: theta(substitute(w, phi), self.group) for z, w in self.rho.items()}


def _triples(group: Presentation, bound: int) -> list:
    words = list(enumerate_reduced_words(group.generators, bound - 1))
    out = []
    for c1, c2 in product(words, repeat=2):
        for c3 in words:
            if group.is_trivial(product_of((c1, c2, c3))):
                out.append((c1, c2, c3))
    return out


def _piece(j: int, k: int, cs) -> Word:
    nxt = k % 3 + 1
    return product_of((Word.gen(xvar(j, k)), cs[k - 1], Word.gen(xvar(j, nxt), -1)))


def build_instance(ts: TriangularSystem, group: Presentation, cs: Sequence[tuple], index: int = 0) -> ReducedInstance:
    occ: dict = {}
    for j, tri in enumerate(ts.triangles, start=1):
        for k, s in enumerate(tri, start=1):
            occ.setdefault(ts.variables[s], []).append((j, k))
    pins = dict(ts.constants)
    eqs = []
    for z in ts.variables:
        places = occ.get(z, [])
        if not places:
            continue
        j0, k0 = places[0]
        first = _piece(j0, k0, cs[j0 - 1])
        for j, k in places[1:]:
            eqs.append(first * invert(_piece(j, k, cs[j - 1])))
        if z in pins:
            rhs = theta(pins[z], group)
            for j, k in places:
                eqs.append(_piece(j, k, cs[j - 1]) * invert(rhs))
    rho = {}
    extra = []
    for z in ts.variables:
        if z in pins:
            rho[z] = theta(pins[z], group)
        elif z in occ:
            j, k = occ[z][0]
            rho[z] = _piece(j, k, cs[j - 1])
        else:
            rho[z] = Word.gen(z)
            extra.append(z)
    xs = [xvar(j, k) for j in range(1, len(ts.triangles) + 1) for k in (1, 2, 3)]
    F = free_group(group.generators)
    system = EqSystem(tuple(xs) + tuple(extra), F, tuple(eqs))
    return ReducedInstance(system, rho, tuple(tuple(c) for c in cs), group, index)


def generate_instances(ts: TriangularSystem, cfg: CanonicalConfig, group: Presentation | None = None) -> list:
    group = group if group is not None else ts.group
    triples = _triples(group, cfg.bound)
    out = []
    for i, cs in enumerate(product(triples, repeat=len(ts.triangles))):
        out.append(build_instance(ts, group, cs, i))
    return out


def count_instances(ts: TriangularSystem, cfg: CanonicalConfig, group: Presentation | None = None) -> int:
    group = group if group is not None else ts.group
    return len(_triples(group, cfg.bound)) ** len(ts.triangles)


@dataclass(frozen=True)
class PullbackResult:
    ok: bool
    violated: int | None = None
    assignment: dict | None = None


def check_pullback(inst: ReducedInstance, original, phi: Mapping[str, Word]) -> PullbackResult:
    """Does ``rho`` then ``phi`` then the projection solve ``original``?"""
    if not evaluate(inst.system, phi, inst.system.group):
        raise NotASolution("phi does not solve the reduced system over the free group")
    system = original.to_system() if isinstance(original, TriangularSystem) else original
    psi = inst.pushforward(phi)
    psi = {v: psi.get(v, Word()) for v in system.variables}
    res = evaluate(system, psi, inst.group)
    return PullbackResult(res.satisfied, res.violated, psi)


def lift_free_solution(ts: TriangularSystem, psi: Mapping[str, Word]):
    """For a free base, factor a solution through the instance with all ``c = 1``.

    Returns ``(cs, phi)``: a free-group triangle ``g1 g2 g3 = 1`` is a tripod
    ``g1 = h1 h2^-1, g2 = h2 h3^-1, g3 = h3 h1^-1`` with ``h1 = 1``.
    """
    phi = {}
    for j, (a, b, _) in enumerate(ts.triangles, start=1):
        g1, g2 = psi[ts.variables[a]], psi[ts.variables[b]]
        phi[xvar(j, 1)] = Word()
        phi[xvar(j, 2)] = invert(g1)
        phi[xvar(j, 3)] = invert(g1 * g2)
    for z in ts.variables:
        if not any(ts.variables[s] == z for tri in ts.triangles for s in tri) and z not in dict(ts.constants):
            phi[z] = psi[z]
    cs = tuple((Word(), Word(), Word()) for _ in ts.triangles)
    return cs, phi


# ----------------------------------------------------------------------
# solution tree
# ----------------------------------------------------------------------


@dataclass
class Leaf:
    """``F(Y) * base`` with the assignment of the constrained variables."""

    free_variables: tuple
    fixed: dict


@dataclass
class Branch:
    instance: ReducedInstance
    leaves: list = field(default_factory=list)
    error: str | None = None

    def solutions(self, radius: int, group: Presentation) -> Iterable[dict]:
        """Enumerate the branch family with free-variable values from a ball."""
        ball = list(enumerate_reduced_words(group.generators, radius))
        for leaf in self.leaves:
            for values in product(ball, repeat=len(leaf.free_variables)):
                phi = dict(leaf.fixed)
                phi.update(zip(leaf.free_variables, values))
                yield self.instance.pushforward(phi)


LeafSolver = Callable[[EqSystem], list]


def brute_force_solver(radius: int = 1) -> LeafSolver:
    """Enumerate the constrained variables; the rest become free letters of Y."""

    def solve(system: EqSystem) -> list:
        used = set(system.used_variables)
        fixed_vars = [v for v in system.variables if v in used]
        free = tuple(v for v in system.variables if v not in used)
        sub = EqSystem(fixed_vars, system.group, system.equations)
        return [Leaf(free, phi) for phi in hom_search(sub, system.group, radius)]

    return solve


@dataclass
class HomTree:
    system: EqSystem
    triangular: TriangularSystem
    branches: list
    config: CanonicalConfig

    @property
    def root_label(self) -> str:
        return f"F({', '.join(self.triangular.variables)}; {', '.join(self.system.group.generators)})"

    def solutions(self, radius: int = 0) -> Iterable[tuple]:
        """Yield ``(branch index, solution restricted to the original variables)``."""
        for b, branch in enumerate(self.branches):
            for psi in branch.solutions(radius, self.system.group):
                yield b, {v: psi[v] for v in self.system.variables}


def build_hom_tree(s: EqSystem, solver: LeafSolver | None = None, cfg: CanonicalConfig | None = None) -> HomTree:
    cfg = cfg or CanonicalConfig()
    solver = solver or brute_force_solver(1)
    ts = triangulate(s)
    branches = []
    for inst in generate_instances(ts, cfg, s.group):
        br = Branch(inst)
        try:
            br.leaves = list(solver(inst.system))
        except Exception as exc:  # per-branch failure is recorded, not fatal
            br.error = f"{type(exc).__name__}: {exc}"
        if br.leaves or br.error:
            branches.append(br)
    return HomTree(s, ts, branches, cfg)
