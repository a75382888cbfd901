import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_system, solution_key
from cetower.equations import (
    EqSystem,
    coordinate_presentation,
    evaluate,
    hom_search,
    radical_sample,
    triangulate,
)
from cetower.errors import AlphabetError
from cetower.finite import dihedral_group_4, symmetric_group_3
from cetower.presentation import free_group
from cetower.words import W, Word, commutator, invert, substitute

F1 = free_group("a")
F2 = free_group("a", "b")


def test_triangle_is_kept():
    s = EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3")])
    t = triangulate(s)
    assert t.triangles == ((0, 1, 2),)
    assert t.constants == () and t.log == ()


def test_long_equation_split_once():
    s = EqSystem(("z1", "z2", "z3", "z4"), F2, [W("z1 z2 z3 z4")])
    t = triangulate(s)
    # z1 z2 w1, w1 w2 e (so w2 = w1^-1), w2 z3 z4 with e pinned to 1
    assert len(t.triangles) == 3
    assert len(t.constants) == 1 and not t.constants[0][1]
    sol = {"z1": W("a"), "z2": W("b"), "z3": W("a"), "z4": W("a^-1 b^-1 a^-1")}
    assert evaluate(t.to_system(), t.extend(sol))


def test_constant_equation():
    s = EqSystem(("z1",), F2, [W("z1 b^-1 a^-1")])
    t = triangulate(s)
    assert t.triangles == ()
    assert t.constants == (("z1", W("a b")),)


def test_undeclared_symbol_rejected():
    with pytest.raises(AlphabetError):
        EqSystem(("x",), F2, [W("x c")])


def test_evaluate_examples():
    s1 = EqSystem(("x", "y"), F1, [W("[x,y]")])
    assert evaluate(s1, {"x": W("a"), "y": W("a^2")})
    s2 = EqSystem(("x", "y"), F2, [W("[x,y]")])
    res = evaluate(s2, {"x": W("a"), "y": W("b")})
    assert not res and res.violated == 0
    s3 = EqSystem(("x",), F2, [W("x^2")])
    assert not evaluate(s3, {"x": W("a b")})


def test_hom_search_examples():
    s = EqSystem(("x",), F1, [W("x^2")])
    assert hom_search(s, radius=2) == [{"x": Word()}]
    s = EqSystem(("x", "y"), F1, [W("[x,y]")])
    assert len(hom_search(s, radius=1)) == 9


def test_hom_search_matches_commutation_predicate():
    s = EqSystem(("x", "y"), F2, [W("[x,y]")])
    found = {(p["x"], p["y"]) for p in hom_search(s, radius=1)}
    ball = list(F2.ball(1))
    brute = {(u, v) for u in ball for v in ball if not commutator(u, v)}
    assert found == brute
    assert len(brute) == 9 + 8  # pairs with an identity, then u = v^{+-1}


def test_hom_search_results_reevaluate():
    s = EqSystem(("x", "y"), F2, [W("x y x^-1 y^-1")])
    for phi in hom_search(s, radius=2, limit=50):
        assert evaluate(s, phi)


def test_radical_examples():
    s = EqSystem(("x",), F1, [W("x^2")])
    assert radical_sample(s, W("x"), radius=2).status == "in_radical_up_to_bound"
    s = EqSystem(("x",), F2, [W("[x,a]")])
    res = radical_sample(s, W("[x,b]"), radius=1)
    assert res.excluded
    assert res.witness == {"x": W("a")}
    assert not F2.is_trivial(substitute(W("[x,b]"), res.witness))


def test_radical_of_conjugation_equation():
    # c^z d = 1 with c = a, d = b a^-1 b^-1: solution z = b^-1, centralizer generator a
    s = EqSystem(("z",), F2, [W("z^-1 a z b a^-1 b^-1")])
    sols = hom_search(s, radius=1)
    assert sols == [{"z": W("b^-1")}]
    res = radical_sample(s, commutator(W("z b"), W("a")), radius=2)
    assert res.status == "in_radical_up_to_bound"
    assert res.solutions_checked >= 1


def test_coordinate_presentations():
    s = EqSystem(("x",), F2, [])
    p = coordinate_presentation(s)
    assert p.generators == ("x", "a", "b") and p.relators == ()
    s = EqSystem(("x",), F2, [W("[x,a]")])
    p = coordinate_presentation(s)
    assert p.relators == (W("[x,a]"),)
    s = EqSystem(("x", "y"), None, [W("x^2 y^2")])
    p = coordinate_presentation(s, with_constants=False)
    assert p.generators == ("x", "y")


def _check_bijection(s, group):
    t = triangulate(s)
    ts = t.to_system()
    orig = hom_search(s, group, candidates=group.elements())
    tri = hom_search(ts, group, candidates=group.elements())
    assert len(orig) == len(tri)
    for phi in orig:
        assert evaluate(ts, t.extend(phi), group)
    keys = {solution_key(group, t.restrict(psi), s.variables) for psi in tri}
    assert len(keys) == len(tri)
    for psi in tri:
        assert evaluate(s, t.restrict(psi), group)


@pytest.mark.parametrize("seed", range(10))
def test_triangulation_bijection_finite(seed):
    rng = random.Random(seed)
    group = symmetric_group_3() if seed % 2 else dihedral_group_4()
    _check_bijection(random_system(group, rng), group)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_triangulation_shape(seed):
    rng = random.Random(seed)
    s = random_system(symmetric_group_3(), rng)
    t = triangulate(s)
    for tri in t.triangles:
        assert len(tri) == 3
    assert set(t.original_variables) == set(s.variables)
    assert len(set(t.variables)) == len(t.variables)
