from cetower.finite import dihedral_group_4, symmetric_group_3
from cetower.words import W


def test_orders():
    assert symmetric_group_3().order == 6
    assert dihedral_group_4().order == 8


def test_relations():
    s3 = symmetric_group_3()
    assert s3.is_trivial(W("a a"))
    assert s3.is_trivial(W("b b b"))
    assert s3.is_trivial(W("(a b)^2"))
    d4 = dihedral_group_4()
    assert d4.is_trivial(W("a^4"))
    assert d4.is_trivial(W("b a b a"))
    assert not d4.is_trivial(W("a a"))


def test_elements_are_distinct_and_short():
    g = dihedral_group_4()
    reps = g.elements()
    assert len({g.element(w) for w in reps}) == len(reps)
    assert max(len(w) for w in reps) <= 3
