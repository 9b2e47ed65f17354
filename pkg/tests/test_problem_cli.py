import json
import subprocess
import sys

import pytest

from kz.cli import main
from kz.errors import NotHomogeneousError, ParseError
from kz.problem import fixture_names, fixtures_dir, load_fixture, parse_problem_text, render


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


def fx(name):
    return str(fixtures_dir() / f"{name}.json")


@pytest.mark.parametrize("name", fixture_names())
def test_render_parse_round_trip(name):
    P = load_fixture(name)
    once = render(P)
    assert render(parse_problem_text(once)) == once


def test_fixture_contents():
    P = load_fixture("colon_gap")
    assert P.kind == "ideal_as_module"
    assert [str(g) for g in P.generators] == ["X^2", "X*Y", "Y^2"]
    assert [str(f) for f in P.sequence] == ["X", "Y^2"]
    Q = load_fixture("staircase_d2")
    assert Q.kind == "quotient_ring" and [str(g) for g in Q.generators] == ["X3^3", "X1*X3^2", "X2*X3"]


def test_parse_errors_are_positional():
    text = '{\n  "ring": {"variables": ["X"]},\n  "module": {"kind": "quotient_ring", "generators": ["X^"]}\n}'
    with pytest.raises(ParseError) as info:
        parse_problem_text(text, "p.json")
    assert info.value.line == 3 and "exponent" in str(info.value)
    with pytest.raises(ParseError) as info:
        parse_problem_text('{"ring": {"variables": ["X"]},}', "p.json")
    assert info.value.line == 1 and info.value.column is not None
    with pytest.raises(NotHomogeneousError):
        parse_problem_text('{"ring": {"variables": ["X", "Y"]}, "module": {"kind": "quotient_ring", "generators": ["X^2+Y"]}}')
    with pytest.raises(ParseError):
        parse_problem_text('{"ring": {"variables": ["X"]}, "module": {"kind": "torus"}}')


def test_chi_table_colon_gap(capsys):
    r = report(capsys, "chi-table", "--problem", fx("colon_gap"), "--k", "1", "--grid", "3", "--jobs", "1")
    table = r["results"]["table"]
    assert all(v == (2 if k.startswith("1,") else 3) for k, v in table.items())


def test_seq_check_colon_gap(capsys):
    r = report(capsys, "seq-check", "--level", "dd", "--nmax", "2", "--problem", fx("colon_gap"), "--jobs", "1")
    dd = r["results"]["dd"]
    assert not dd["holds"] and dd["witness"]["left"] == ["X*Y^2", "Y^3"]


def test_verify_lemma21_example39(capsys):
    r = report(capsys, "verify", "lemma21", "--k", "1", "--problem", fx("staircase_d2"), "--jobs", "1")
    assert r["results"]["passed"] and r["results"]["checks"]


@pytest.mark.parametrize("target", ["lemma21", "cmm", "thm12", "thm14", "thm15", "thm11", "inversion", "multiplicity"])
def test_verify_targets_pass_on_three_layer(capsys, target):
    r = report(capsys, "verify", target, "--problem", fx("three_layer"), "--jobs", "1")
    assert r["results"]["passed"]


def test_verify_gc(capsys):
    r = report(capsys, "verify", "gc", "--problem", fx("generalized_cm"), "--jobs", "1")
    assert r["results"]["passed"]


@pytest.mark.parametrize("command", ["chi", "homology", "fit", "pk", "h0", "filtration", "seqcm", "distinguished"])
def test_commands_run(capsys, command):
    r = report(capsys, command, "--problem", fx("xz_yz_distinguished"), "--jobs", "1")
    assert r["command"] == command and "results" in r


def test_lc_commands(capsys):
    r = report(capsys, "lc", "--problem", fx("generalized_cm"), "--jobs", "1")
    assert r["results"]["lengths"] == {"0": 0, "1": 1}
    r = report(capsys, "lc", "--k", "2", "--i", "0", "--problem", fx("staircase_d3"), "--jobs", "1")
    assert r["results"]["exact"]


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ring": {"variables": ["X"]}, "module": {"kind": "quotient_ring", "generators": ["X^"]}}')
    assert run(capsys, "h0", "--problem", str(bad))[0] == 2
    assert run(capsys, "h0", "--problem", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify", "thm12", "--problem", fx("colon_gap"), "--jobs", "1")[0] == 3
    assert run(capsys, "verify", "gc", "--problem", fx("colon_gap"), "--jobs", "1")[0] == 3
    assert run(capsys, "filtration", "--problem", fx("cm_complete_intersection"))[0] == 0
    empty = tmp_path / "noseq.json"
    empty.write_text('{"ring": {"variables": ["X"]}, "module": {"kind": "quotient_ring", "generators": []}}')
    assert run(capsys, "chi", "--problem", str(empty))[0] == 3


def test_resource_budget_exit_code(capsys, monkeypatch):
    import kz.groebner as g
    real = g.Submodule.gb

    def tight(self, kind="pot", max_pairs=None, max_degree=None):
        return real(self, kind, 0, max_degree)
    monkeypatch.setattr(g.Submodule, "gb", tight)
    assert run(capsys, "chi", "--problem", fx("staircase_d2"), "--jobs", "1")[0] == 4


def test_verification_failure_exit_code(capsys, monkeypatch):
    import kz.cli as cli
    monkeypatch.setattr(cli.kz_koszul, "chi_via_colons", lambda *a, **k: -1)
    code, out, _ = run(capsys, "verify", "lemma21", "--problem", fx("staircase_d2"), "--jobs", "1")
    assert code == 5 and '"passed": false' in out


def _strip(text):
    data = json.loads(text)
    data.pop("timing_seconds")
    return data


def test_reports_are_deterministic_and_parallel_sound(capsys):
    args = ["chi-table", "--problem", fx("staircase_d3"), "--k", "1", "--grid", "2"]
    a = run(capsys, *args, "--jobs", "1")[1]
    b = run(capsys, *args, "--jobs", "1")[1]
    c = run(capsys, *args, "--jobs", "2")[1]
    assert _strip(a) == _strip(b) == _strip(c)


def test_table_output(capsys):
    code, out, _ = run(capsys, "chi-table", "--problem", fx("colon_gap"), "--grid", "2", "--out", "table", "--jobs", "1")
    assert code == 0 and "n1\\n2" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kz.cli", "h0", "--problem", fx("staircase_d2")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["results"]["h0_length"] == 1
