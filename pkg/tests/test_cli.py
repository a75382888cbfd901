import io

import pytest

from cetower.cli import main
from cetower.formats import load


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def body(text):
    return [l for l in text.splitlines() if not l.startswith("#")]


def test_wp(data_dir):
    code, out, _ = run("wp", "--group", data_dir / "F2.grp", "a a^-1")
    assert code == 0 and body(out) == ["trivial"]
    assert out.startswith("# command: wp\n# config:")
    code, out, _ = run("wp", "--group", data_dir / "S2.grp", "a")
    assert body(out) == ["nontrivial"]
    code, out, _ = run("wp", "--tower", data_dir / "H3.twr", "[r, a s t]")
    assert body(out) == ["trivial"]


def test_reduce(data_dir):
    code, out, _ = run("reduce", "--tower", data_dir / "H3.twr", "t a t^-1 b")
    assert code == 0 and body(out) == ["a b"]


def test_triangulate(data_dir):
    code, out, _ = run("triangulate", "--system", data_dir / "commutator.sys")
    assert code == 0 and "fresh variables" in out


def test_quad(data_dir):
    code, out, _ = run("quad", "--system", data_dir / "quadratic.sys")
    assert code == 0
    assert "euler_characteristic: -1;" in out
    code, out, _ = run("quad", "--word", "x y x y", "--vars", "x,y")
    assert code == 0 and "orientable: false;" in out


def test_canonical(data_dir, tmp_path):
    code, out, _ = run(
        "canonical", "--group", data_dir / "F2.grp", "--system", data_dir / "commutator.sys",
        "--bound", 1, "--report-L", "--emit-dir", tmp_path,
    )
    assert code == 0
    assert "theoretical L: 7*2^5050" in out
    assert sorted(p.suffix for p in tmp_path.iterdir()) == [".hom", ".sys"]


def test_embed_then_verify(data_dir, tmp_path):
    twr, hom = tmp_path / "H.twr", tmp_path / "phi.hom"
    code, out, _ = run("embed", "--ntq", data_dir / "two_levels.ntq", "--verify-radius", 2, "--out-tower", twr, "--out-hom", hom)
    assert code == 0, out
    assert "relators: verified" in out
    assert load(twr).height >= 3
    code, out, _ = run("verify-hom", "--hom", hom, "--source", data_dir / "two_levels.ntq", "--target", twr, "--radius", 2)
    assert code == 0
    assert "pass" in out
    assert "injectivity sample (radius 2): pass" in run("embed", "--ntq", data_dir / "two_levels.ntq", "--verify-radius", 2)[1]


def test_embed_quadratic_level(data_dir):
    code, out, _ = run("embed", "--ntq", data_dir / "squares.ntq")
    assert code == 0 and "relators_verified" in out


def test_unsupported_case_exit_code(data_dir):
    code, out, err = run("embed", "--ntq", data_dir / "regular_high_genus.ntq")
    assert code == 3
    assert "regular quadratic equations" in out + err


def test_hom_search(data_dir):
    code, out, _ = run("hom-search", "--system", data_dir / "commutator.sys", "--radius", 1)
    assert code == 0 and "solutions: 3" in out


def test_hom_search_no_solution_is_bound_exhaustion(tmp_path, data_dir):
    sys_file = tmp_path / "far.sys"
    sys_file.write_text(f"system far {{ over: {data_dir / 'F2.grp'}; vars: x; equations: x a^-3; }}")
    code, _, _ = run("hom-search", "--system", sys_file, "--radius", 1)
    assert code == 4


def test_bench(data_dir):
    code, out, _ = run("bench", "wp", "--tower", data_dir / "H3.twr", "--lengths", "50,100,200", "--samples", 2)
    assert code == 0 and "slope" in out


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.grp"
    bad.write_text("group G { generators: a;\n relators: a^; }")
    code, _, err = run("wp", "--group", bad, "a")
    assert code == 2
    assert err.startswith("error:") and "line 2, column 14" in err


def test_missing_file_exit_code(tmp_path):
    code, _, err = run("wp", "--group", tmp_path / "nope.grp", "a")
    assert code == 2 and err.startswith("error:")


def test_default_bound_from_environment(monkeypatch, data_dir):
    monkeypatch.setenv("GT_DEFAULT_BOUND", "1")
    code, out, _ = run("hom-search", "--system", data_dir / "commutator.sys")
    assert "radius=1" in out


def test_output_is_deterministic(data_dir):
    a = run("triangulate", "--system", data_dir / "commutator.sys")
    b = run("triangulate", "--system", data_dir / "commutator.sys")
    assert a == b
