"""Embedding instances covering every level case, shared with the acceptance run."""

from cetower.embeddings import NtqLevel, NtqSystem
from cetower.presentation import Presentation, free_group
from cetower.words import W

F2 = free_group("a", "b", name="F2")
# a^2 b^2 c^2 has pieces of length 1 against a relator of length 6 (lambda = 1/6),
# so Dehn's "trivial" answers are sound but "nontrivial" ones are uncertified
N3 = Presentation(["a", "b", "c"], [W("a^2 b^2 c^2")], name="N3", allow_unsafe=True)


def quad(base, equation, name):
    return NtqSystem(base, (NtqLevel("I", (), W(equation)),), name)


CASES = [
    ("IV", NtqSystem(F2, (NtqLevel("IV", ("x", "y")),), "IV")),
    ("IV three letters", NtqSystem(F2, (NtqLevel("IV", ("x", "y", "w")),), "IV3")),
    ("III", NtqSystem(F2, (NtqLevel("III", ("x", "y")),), "III")),
    ("III three letters", NtqSystem(F2, (NtqLevel("III", ("x", "y", "w")),), "III3")),
    ("II", NtqSystem(F2, (NtqLevel("II", ("x",), center_of=W("a")),), "II")),
    ("II over III", NtqSystem(F2, (NtqLevel("II", ("y",), center_of=W("x")), NtqLevel("III", ("x", "w"))), "II/III")),
    ("x^2", quad(F2, "x^2", "x2")),
    ("x^2 d", quad(F2, "x^2 a^-2", "x2d")),
    ("x^2 y^2", quad(F2, "x^2 y^2", "x2y2")),
    ("c^z d", quad(F2, "z^-1 a z a^-1", "czd")),
    ("genus zero k=2 commutative", quad(F2, "z1^-1 a z1 z2^-1 a z2 a^-2", "k2")),
    ("genus zero k=3 commutative", quad(F2, "z1^-1 a z1 z2^-1 a z2 z3^-1 a z3 a^-3", "k3")),
    ("x^2 y^2 d commutative", quad(F2, "x^2 y^2 a^-4", "x2y2d_comm")),
    ("x^2 y^2 d", quad(F2, "x^2 y^2 b^-2 a^-2", "x2y2d")),
    ("x^2 c^z d", quad(F2, "x^2 z^-1 b z b^-1 a^-2", "x2czd")),
    ("x^2 y^2 z^2 commutative", quad(F2, "x^2 y^2 z^2", "x2y2z2_comm")),
    ("x^2 y^2 z^2 general position", quad(N3, "x^2 y^2 z^2", "x2y2z2_gp")),
]
