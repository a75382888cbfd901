import random

import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_quadratic_word
from cetower.equations import EqSystem, hom_search
from cetower.errors import NotASolution
from cetower.finite import symmetric_group_3
from cetower.presentation import free_group
from cetower.quadratic import (
    StandardQuadratic,
    classify_solution,
    comm_atom,
    conj_atom,
    detect_general_position,
    euler_char,
    euler_char_atoms,
    is_quadratic,
    is_regular,
    square_atom,
    to_standard_form,
)
from cetower.words import W, Word, substitute

F1 = free_group("a")
F2 = free_group("a", "b")
S3 = symmetric_group_3()


@pytest.mark.parametrize("w, vs, out", [("[x,y]", "xy", "strictly_quadratic"), ("x a y", "xy", "quadratic"), ("x x x", "x", "not")])
def test_is_quadratic(w, vs, out):
    assert is_quadratic(W(w), list(vs)) == out


def test_commutator_already_standard():
    n = to_standard_form(W("[x,y]"), ["x", "y"])
    assert n.standard.orientable and n.standard.genus == 1 and not n.standard.d
    assert all(n.automorphism[v] == Word.gen(v) for v in "xy")
    assert n.check()


def test_xyxy_becomes_one_square():
    n = to_standard_form(W("x y x y"), ["x", "y"])
    s = n.standard
    assert not s.orientable and s.genus == 1 and s.m == 0
    assert len(s.free_variables) == 1
    assert n.check()


def test_two_conjugates_with_constant():
    n = to_standard_form(W("x a x^-1 y b y^-1 a^-1 b^-1"), ["x", "y"])
    s = n.standard
    assert s.orientable and s.genus == 0 and s.m == 2
    assert s.d
    assert n.check()


def test_word_conjugate_to_constant_has_no_form():
    with pytest.raises(ValueError):
        to_standard_form(W("x a x^-1"), ["x"])


def _bijection_over_s3(w, names):
    n = to_standard_form(w, names)
    assert n.check()
    s = n.standard
    svars = s.variables + s.free_variables
    assert set(svars) == set(names)
    src = hom_search(EqSystem(names, S3, [w]), S3, candidates=S3.elements())
    std = hom_search(EqSystem(svars, S3, [s.word]), S3, candidates=S3.elements())
    assert len(src) == len(std)
    images = set()
    for psi in std:
        phi = {v: substitute(n.automorphism[v], psi) for v in names}
        assert S3.is_trivial(substitute(w, phi))
        images.add(tuple(S3.element(phi[v]) for v in names))
    assert len(images) == len(std)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_normalization_identity_and_bijection(seed):
    rng = random.Random(seed)
    w, names = random_quadratic_word(rng)
    try:
        n = to_standard_form(w, names)
    except ValueError:
        return  # conjugate to a constant
    assert n.check()
    _bijection_over_s3(w, names)


@pytest.mark.parametrize(
    "atoms, d, chi",
    [
        ([comm_atom("x", "y")], "1", 0),
        ([conj_atom("z1", "a"), conj_atom("z2", "b")], "a b", -1),
        ([square_atom("x"), square_atom("y")], "a", -1),
    ],
)
def test_euler_examples(atoms, d, chi):
    s = StandardQuadratic(atoms[0].kind != "square", atoms, W(d))
    assert euler_char(s) == chi == euler_char_atoms(s)


@pytest.mark.parametrize("orientable", [True, False])
def test_euler_two_routes_exhaustive(orientable):
    for n in range(0, 5):
        for m in range(0, 5):
            for with_d in (False, True):
                if not orientable and n == 0:
                    continue
                if m and not with_d:
                    continue
                if n == 0 and m == 0 and not with_d:
                    continue
                body = [comm_atom(f"x{i}", f"y{i}") if orientable else square_atom(f"x{i}") for i in range(n)]
                conj = [conj_atom(f"z{j}", "a") for j in range(m)]
                if not body and not conj:
                    continue
                s = StandardQuadratic(orientable, body + conj, W("b") if with_d else Word())
                assert euler_char(s) == euler_char_atoms(s)


def test_classify_examples():
    s = StandardQuadratic(True, [comm_atom("x1", "y1"), comm_atom("x2", "y2")])
    assert classify_solution(s, {v: Word() for v in s.variables}, F2).kind == "degenerate"
    sq = StandardQuadratic(False, [square_atom(f"x{i}") for i in range(1, 5)])
    phi = {"x1": W("a"), "x2": W("a^-1"), "x3": W("b"), "x4": W("b^-1")}
    cls = classify_solution(sq, phi, F2)
    # a^2 and a^-2 commute, so only the middle pair fails
    assert cls.kind == "mixed" and cls.non_commutative
    assert cls.commuting == (True, False, True)
    c = StandardQuadratic(True, [conj_atom("z1", "a"), conj_atom("z2", "a")], W("a^-2"))
    assert classify_solution(c, {"z1": Word(), "z2": Word()}, F2).kind == "commutative"


def test_classify_rejects_non_solutions():
    s = StandardQuadratic(False, [square_atom("x")], W("a^-2"))
    with pytest.raises(NotASolution):
        classify_solution(s, {"x": W("b")}, F2)


def test_commutative_class_stable_under_reordering():
    c1 = StandardQuadratic(True, [conj_atom("z1", "a"), conj_atom("z2", "a^2")], W("a^-3"))
    c2 = StandardQuadratic(True, [conj_atom("z2", "a^2"), conj_atom("z1", "a")], W("a^-3"))
    phi = {"z1": W("a"), "z2": W("a^-2")}
    assert classify_solution(c1, phi, F2).kind == classify_solution(c2, phi, F2).kind == "commutative"


def test_detect_general_position():
    sq = StandardQuadratic(False, [square_atom(f"x{i}") for i in range(1, 5)])
    res = detect_general_position(sq, F2, radius=1)
    assert res.found and res.solution_class.non_commutative
    with pytest.raises(ValueError):
        detect_general_position(StandardQuadratic(True, [comm_atom("x", "y")]), F2)
    two = StandardQuadratic(False, [square_atom("x"), square_atom("y")])
    assert detect_general_position(two, F1, radius=2).status == "all_commutative_up_to_bound"


def test_regularity():
    assert is_regular(StandardQuadratic(True, [comm_atom("x", "y")], W("a"))) == "regular"
    assert is_regular(StandardQuadratic(True, [comm_atom("x1", "y1"), comm_atom("x2", "y2")])) == "regular"
    assert is_regular(StandardQuadratic(False, [square_atom("x"), square_atom("y")])) == "not_regular"
    sq = StandardQuadratic(False, [square_atom(f"x{i}") for i in range(1, 5)])
    assert is_regular(sq) == "unknown"
    assert is_regular(sq, detect_general_position(sq, F2, 1)) == "regular"
