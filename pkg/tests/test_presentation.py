import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cetower.bench import random_word
from cetower.errors import AlphabetError, UnsupportedPresentation
from cetower.presentation import (
    Presentation,
    centralizer_base,
    check_small_cancellation,
    conjugacy,
    free_group,
    surface_group,
)
from cetower.words import W, Word, conjugate, cyclic_permutations, invert, power, product_of

S2 = surface_group(2)


def _brute_lambda(p):
    # longest common prefix of distinct symmetrized relators, by direct slicing
    best = Fraction(0)
    sym = list(p.symmetrized)
    for r in sym:
        for s in sym:
            if r == s:
                continue
            k = 0
            while k < min(len(r), len(s)) and r.letters[k] == s.letters[k]:
                k += 1
            best = max(best, Fraction(k, len(r)))
    return best


def test_free_presentation_lambda_zero():
    rep = check_small_cancellation(free_group("a", "b"))
    assert rep.lam == 0 and rep.c_prime_sixth


def test_surface_group_lambda():
    rep = check_small_cancellation(S2)
    # relator length 8, pieces are single letters
    assert len(S2.relators[0]) == 8
    assert len(rep.piece) == 1
    assert rep.lam == Fraction(1, 8) == _brute_lambda(S2)
    assert rep.c_prime_sixth


def test_torsion_relator_is_flagged_and_rejected():
    p = Presentation(["a"], [W("a a")])
    rep = check_small_cancellation(p)
    assert not rep.torsion_free_candidate
    with pytest.raises(UnsupportedPresentation):
        p.wp(W("a"))


def test_non_small_cancellation_rejected_without_override():
    p = Presentation(["a", "b"], [W("[a,b]")])
    assert not p.small_cancellation().c_prime_sixth
    with pytest.raises(UnsupportedPresentation):
        p.wp(W("a"))
    q = Presentation(["a", "b"], [W("[a,b]")], allow_unsafe=True)
    assert q.wp(W("[a,b]")) == "trivial"


def test_symmetrized_closure():
    for r in S2.symmetrized:
        assert invert(r) in S2.symmetrized
        for c in cyclic_permutations(r):
            assert c in S2.symmetrized
    assert len(S2.symmetrized) == 16


def test_surface_wp_examples():
    assert S2.wp(W("[a,b][c,d]")) == "trivial"
    assert S2.wp(W("a")) == "nontrivial"
    with pytest.raises(AlphabetError):
        S2.wp(W("x"))


def test_conjugated_relators_are_trivial():
    rng = random.Random(1)
    rel = S2.relators[0]
    for _ in range(100):
        u = random_word(S2.generators, rng.randint(0, 12), rng)
        assert S2.wp(conjugate(rel, u)) == "trivial"


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 40), st.integers(0, 10**6))
def test_w_times_inverse_trivial(n, seed):
    w = random_word(S2.generators, n, random.Random(seed))
    assert S2.wp(w * invert(w)) == "trivial"


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 10**6), st.sampled_from((1, -1))), max_size=3), st.integers(0, 10**6))
def test_trivial_words_have_zero_abelianization(parts, seed):
    rng = random.Random(seed)
    rel = S2.relators[0]
    pieces = [conjugate(power(rel, e), random_word(S2.generators, s % 6, rng)) for s, e in parts]
    w = product_of(pieces)
    assert S2.is_trivial(w)
    assert not any(S2.abelianization(w))


def test_dehn_reduce_shortens_relator_halves():
    rel = S2.relators[0]
    # five letters of an eight-letter relator get replaced by the inverse of the other three
    w = Word(rel.letters[:5])
    out = S2.dehn_reduce(w)
    assert len(out) == 3
    assert out == invert(Word(rel.letters[5:]))


def test_free_conjugacy_examples():
    F = free_group("a", "b")
    res = conjugacy(F, W("a b"), W("b a"))
    assert res.status == "conjugate" and res.witness == W("a")
    assert conjugacy(F, W("a"), W("b")).status == "not_conjugate"


def test_surface_conjugacy_with_witness():
    rng = random.Random(3)
    for _ in range(5):
        u = random_word(S2.generators, rng.randint(1, 4), rng)
        t = random_word(S2.generators, rng.randint(0, 4), rng)
        v = conjugate(u, t)
        res = conjugacy(S2, u, v, bound=4)
        assert res.status == "conjugate"
        assert S2.is_trivial(product_of((invert(res.witness), u, res.witness, invert(v))))


def test_surface_conjugacy_bound_exhaustion_is_distinct():
    res = conjugacy(S2, W("a"), W("b"), bound=1)
    assert res.status in ("not_conjugate", "bound_exhausted")
    assert not res


@pytest.mark.parametrize(
    "g, root",
    [("a a", "a"), ("a b", "a b"), ("a b^3 a^-1", "a b a^-1"), ("(a b a^-1)^3", "a b a^-1"), ("(a b)^2", "a b")],
)
def test_free_centralizer_roots(g, root):
    F = free_group("a", "b")
    res = centralizer_base(F, W(g))
    assert res.exact
    assert res.generators == (W(root),)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 10**6))
def test_free_centralizer_matches_exhaustive_root_search(n, k, seed):
    F = free_group("a", "b")
    rng = random.Random(seed)
    base = random_word(F.generators, n, rng)
    g = power(base, k)
    r = centralizer_base(F, g).generators[0]
    assert F.is_trivial(product_of((invert(r), invert(g), r, g)))
    # g is a positive power of r, and no shorter word in the ball has a higher power equal to g
    assert any(power(r, j) == g for j in range(-len(g) - 1, len(g) + 2))
    for c in F.ball(len(r) - 1):
        if c:
            assert all(power(c, j) != g for j in range(-len(g) - 1, len(g) + 2))


def test_surface_centralizer_commutes():
    res = centralizer_base(S2, W("a b"))
    assert not res.exact
    r = res.generators[0]
    assert S2.is_trivial(product_of((invert(r), W("b^-1 a^-1"), r, W("a b"))))


def test_abelianization_lattice():
    assert S2.relator_lattice_contains((0, 0, 0, 0))
    assert not S2.relator_lattice_contains((1, 0, 0, 0))
