import random

import pytest
from hypothesis import given, settings, strategies as st

from cetower.bench import random_word
from cetower.canonical import (
    CanonicalConfig,
    ReducedInstance,
    brute_force_solver,
    build_hom_tree,
    check_pullback,
    count_instances,
    generate_instances,
    lift_free_solution,
    theta,
    xvar,
)
from cetower.equations import EqSystem, evaluate, hom_search, triangulate
from cetower.presentation import free_group, surface_group
from cetower.words import W, Word, invert, product_of

F2 = free_group("a", "b")
S2 = surface_group(2)


def test_theta_examples():
    assert theta(W("a a^-1 b"), F2) == W("b")
    assert theta(S2.relators[0], S2) == Word()


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 20))
def test_theta_equals_input_in_group(seed, n):
    rng = random.Random(seed)
    g = random_word(S2.generators, n, rng)
    assert S2.equal(theta(g, S2), g)
    f = random_word(F2.generators, n, rng)
    assert theta(f, F2) == f


def test_config_and_theoretical_constant():
    cfg = CanonicalConfig(bound=2, delta=0)
    assert cfg.theoretical_exponent(2) == 5050
    assert cfg.describe_L(3, 2) == "3*2^5050"
    assert cfg.theoretical_L(1, 2) == 2**5050
    assert CanonicalConfig(delta=1).theoretical_exponent(2) == 5050 * 64 * 16
    with pytest.raises(ValueError):
        CanonicalConfig(bound=0)


def test_single_triangle_bound_one():
    ts = triangulate(EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3")]))
    insts = generate_instances(ts, CanonicalConfig(bound=1))
    assert len(insts) == 1
    inst = insts[0]
    assert inst.constants == ((Word(), Word(), Word()),)
    assert inst.system.equations == ()
    assert inst.rho["z1"] == W(f"{xvar(1, 1)} {xvar(1, 2)}^-1")
    assert inst.rho["z3"] == W(f"{xvar(1, 3)} {xvar(1, 1)}^-1")


def test_repeated_variable_gives_coincidence_equation():
    ts = triangulate(EqSystem(("z1", "z2"), F2, [W("z1 z1 z2")]))
    inst = generate_instances(ts, CanonicalConfig(bound=1))[0]
    x11, x12, x13 = (W(xvar(1, k)) for k in (1, 2, 3))
    expected = product_of((x11, invert(x12), invert(x12 * invert(x13))))
    assert inst.system.equations == (expected,)


def test_constant_equation_gives_theta_equation():
    s = EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3"), W("z2 a^-1")])
    inst = generate_instances(triangulate(s), CanonicalConfig(bound=1))[0]
    assert W(f"{xvar(1, 2)} {xvar(1, 3)}^-1 a^-1") in inst.system.equations
    assert inst.rho["z2"] == W("a")


def test_corrupted_constants_rejected():
    ts = triangulate(EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3")]))
    good = generate_instances(ts, CanonicalConfig(bound=1))[0]
    with pytest.raises(ValueError):
        ReducedInstance(good.system, good.rho, ((W("a"), Word(), Word()),), F2)


def test_instance_counts_bound_two():
    # triples of reduced words of length <= 1 with product 1: (1,1,1), (c,c^-1,1) rotated, ...
    ts = triangulate(EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3")]))
    ball = list(F2.ball(1))
    brute = sum(1 for p in ball for q in ball for r in ball if not product_of((p, q, r)))
    assert count_instances(ts, CanonicalConfig(bound=2)) == brute == 13


def test_pullback_every_instance():
    s = EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3"), W("z1 a^-1")])
    ts = triangulate(s)
    insts = generate_instances(ts, CanonicalConfig(bound=2))
    checked = 0
    for inst in insts:
        for phi in hom_search(inst.system, radius=1, limit=20):
            res = check_pullback(inst, s, phi)
            assert res.ok, (inst.constants, phi)
            checked += 1
    assert checked > 0


def test_pullback_on_empty_system():
    s = EqSystem(("z",), F2, [])
    inst = generate_instances(triangulate(s), CanonicalConfig(bound=1))[0]
    assert check_pullback(inst, s, {"z": W("a b")}).ok


def test_planted_solution_is_reproduced():
    s = EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3"), W("z1 a^-1")])
    ts = triangulate(s)
    planted = {"z1": W("a"), "z2": W("b"), "z3": W("b^-1 a^-1")}
    full = ts.extend(planted)
    cs, phi = lift_free_solution(ts, full)
    inst = next(i for i in generate_instances(ts, CanonicalConfig(bound=1)) if i.constants == cs)
    assert evaluate(inst.system, phi)
    res = check_pullback(inst, s, phi)
    assert res.ok
    assert {v: res.assignment[v] for v in s.variables} == planted


def test_hom_tree_examples():
    empty = build_hom_tree(EqSystem(("z",), F2, []))
    assert len(empty.branches) == 1
    assert empty.branches[0].leaves[0].free_variables == ("z",)
    assert len(list(empty.solutions(radius=1))) == 5

    pin = build_hom_tree(EqSystem(("z",), F2, [W("z a^-1")]))
    sols = [phi for _, phi in pin.solutions()]
    assert sols and all(phi == {"z": W("a")} for phi in sols)


def test_hom_tree_solutions_all_satisfy():
    s = EqSystem(("z1", "z2"), F2, [W("[z1,z2]")])
    tree = build_hom_tree(s, brute_force_solver(1), CanonicalConfig(bound=1))
    assert tree.root_label.startswith("F(")
    n = 0
    for _, phi in tree.solutions(radius=1):
        assert evaluate(s, phi)
        n += 1
    assert n > 0


def test_solver_failure_is_recorded_per_branch():
    def broken(system):
        raise RuntimeError("boom")

    tree = build_hom_tree(EqSystem(("z1", "z2", "z3"), F2, [W("z1 z2 z3")]), broken)
    assert tree.branches and all(b.error == "RuntimeError: boom" for b in tree.branches)
