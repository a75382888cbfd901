import pytest

from _cases import CASES
from cetower.embeddings import NtqSystem
from cetower.equations import EqSystem
from cetower.errors import ParseError
from cetower.formats import HomRecord, dumps, load, loads
from cetower.presentation import Presentation, free_group
from cetower.tower import GroupHom, Tower, tower_over
from cetower.words import W


def test_group_file(data_dir):
    g = load(data_dir / "S2.grp")
    assert isinstance(g, Presentation)
    assert g.generators == ("a", "b", "c", "d")
    assert g.relators == (W("[a,b][c,d]"),)


def test_empty_relators_allowed():
    g = loads("group F { generators: a, b; relators: ; }")
    assert g.is_free


def test_unsafe_flag(data_dir):
    assert load(data_dir / "N3.grp").allow_unsafe


def test_tower_file_resolves_relative_base(data_dir):
    t = load(data_dir / "H3.twr")
    assert isinstance(t, Tower)
    assert t.stable_letters == ("t", "s", "r")
    assert t.is_trivial(W("[r, a s t]"))


def test_system_and_ntq_files(data_dir):
    s = load(data_dir / "commutator.sys")
    assert isinstance(s, EqSystem) and s.variables == ("x", "y")
    n = load(data_dir / "two_levels.ntq")
    assert isinstance(n, NtqSystem)
    assert [l.form for l in n.levels] == ["II", "III"]


def test_kind_mismatch_rejected(data_dir):
    with pytest.raises(ParseError):
        load(data_dir / "F2.grp", kind="tower")


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("group G {\n  generators: a;\n  relators: a^;\n}", 3, 15),
        ("group G { generators: a; bogus: a; }", 1, 26),
        ("group G { generators: a;", 1, 25),
    ],
)
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        loads(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_comments_and_inline_base():
    text = """
    # a tower with an inline base
    tower T {
      base: group F { generators: a, b; relators: ; };
      level { letter: t; center_of: a; }
    }
    """
    t = loads(text)
    assert t.stable_letters == ("t",)


def test_round_trips(data_dir):
    objs = [
        free_group("a", "b", name="F2"),
        load(data_dir / "S2.grp"),
        load(data_dir / "H3.twr"),
        load(data_dir / "commutator.sys"),
    ] + [ntq for _, ntq in CASES]
    for obj in objs:
        again = loads(dumps(obj))
        assert dumps(again) == dumps(obj)


def test_hom_round_trip(data_dir):
    t = load(data_dir / "H3.twr")
    h = GroupHom(free_group("a", "b", "x"), t, {"a": W("a"), "b": W("b"), "x": W("t^r")})
    record = loads(dumps(h))
    assert isinstance(record, HomRecord)
    bound = record.bind(h.source, t)
    assert bound.images == h.images
