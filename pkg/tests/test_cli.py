import json

import pytest

from kmforge import cli
from kmforge.acceptance import DETERMINISM_COMMANDS

Q8_I = '{"generator_words":["g0"]}'


def run_ok(*argv):
    code, out = cli.run(list(argv))
    assert code == 0, out
    return out


def run_json(*argv):
    return json.loads(run_ok(*argv, "--output", "json"))


def test_construct_q8_text():
    out = run_ok("construct", "--group", "catalog:Q8", "--subgroup", Q8_I, "--word", "[x1,x2]")
    assert "bound: codim H = 2 <= f^1(1) = 2" in out
    assert "H = {0, 3} (order 2, index 4)" in out
    assert "characteristic: verified against 24 automorphisms" in out


def test_construct_q8_json():
    d = run_json("construct", "--group", "catalog:Q8", "--subgroup", Q8_I, "--word", "[x1,x2]")
    assert d["status"] == "ok" and d["command"] == "construct"
    assert d["results"]["H"]["elements"] == ["0", "3"]
    c = d["certificates"]
    assert (c["codim_H"], c["bound_value"], c["characteristic"]) == ("2", "2", True)
    assert set(d["inputs"]) == {"group", "subgroup", "word"}
    assert all(len(h) == 64 for h in d["inputs"].values())
    assert "wall_time" not in d


def test_construct_prank_and_non_integral():
    d = run_json("construct", "--group", "catalog:Q8", "--subgroup", Q8_I, "--word", "[x1,x2]",
                 "--codim", "prank:2")
    assert d["certificates"]["codim_H"] == "2"
    out = run_ok("construct", "--group", "catalog:C3", "--subgroup", '{"generators":[]}', "--word", "[x1,x2]")
    assert "bound: codim H = log2(3) <= f^1(log2(3)) (certified; |G:H| = 3 <= 2^5)" in out


def test_inline_group_json():
    group = json.dumps({"kind": "permutation", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    d = run_json("aut", "--group", group)
    assert d["results"]["order"] == "6"
    table = json.dumps({"kind": "cayley", "table": [[0, 1], [1, 0]]})
    assert "1 automorphism" in run_ok("aut", "--group", table)
    code, out = cli.run(["aut", "--group", '{"kind":"matrix"}'])
    assert code == 1 and "unknown group kind" in out


def test_trace_file(tmp_path):
    path = tmp_path / "trace.json"
    run_ok("construct", "--group", "catalog:Q8", "--subgroup", Q8_I, "--word", "[x1,x2]", "--trace", str(path))
    trace = json.loads(path.read_text())
    assert [s["k"] for s in trace["steps"]] == ["1", "2"]
    assert trace["certificate"]["bound_holds"] is True


def test_census_and_aut_text():
    assert "3 maximal subgroups; chain verified" in run_ok("census", "--group", "catalog:Q8", "--word", "[x1,x2]",
                                                            "--chain")
    assert "1 automorphism" in run_ok("aut", "--group", "catalog:C2")
    assert "24 automorphisms" in run_ok("aut", "--group", "catalog:Q8")


def test_algebra_construct():
    sub = '{"mode":"twosided","basis":[["0","1","0"],["0","0","1"]]}'
    d = run_json("algebra-construct", "--algebra", "corpus:abc_f2", "--subspace", sub, "--word", "(x1*x2)")
    assert d["certificates"]["scope"] == "absolute"
    endos = '[[["1","0","0"],["0","1","0"],["0","0","1"]]]'
    d = run_json("algebra-construct", "--algebra", "corpus:abc_f2", "--subspace", sub, "--word", "(x1*x2)",
                 "--endos", endos)
    assert d["certificates"]["scope"] == "relative to supplied endomorphisms"


def test_algebra_rejects_non_multiplicative_endo():
    sub = '{"mode":"twosided","basis":[["0","0","1"]]}'
    swap = '[[["0","1","0"],["1","0","0"],["0","0","2"]]]'
    code, out = cli.run(["algebra-construct", "--algebra", "corpus:abc_f3", "--subspace", sub,
                         "--word", "(x1*x2)", "--endos", swap])
    assert code == 1 and "map not an algebra endomorphism" in out


def test_lemma1_and_axioms():
    fam = '[{"generator_words":["g0"]},{"generator_words":["g1"]},{"generator_words":["g0*g1"]}]'
    d = run_json("lemma1", "--group", "catalog:Q8", "--word", "[x1,x2]", "--m", "2", "--family", fam)
    assert d["status"] == "ok"
    d = run_json("axioms", "--group", "catalog:D8", "--codim", "prank:2")
    assert d["status"] == "ok"


def test_catalog_lists_groups():
    out = run_ok("catalog")
    assert "Q8" in out and "SL(2,3)" in out


@pytest.mark.parametrize("argv, fragment", [
    (["construct", "--group", "catalog:NOPE", "--subgroup", Q8_I, "--word", "[x1,x2]"], "unknown"),
    (["construct", "--group", "catalog:Q8", "--subgroup", "{bad", "--word", "[x1,x2]"], "error"),
    (["construct", "--group", "catalog:Q8", "--subgroup", Q8_I, "--word", "[x1,x1]"], "repeated variable"),
    (["construct", "--group", "catalog:S3", "--subgroup", '{"generator_words":["g1"]}', "--word", "[x1,x2]"],
     "not normal"),
    (["construct", "--group", "catalog:S3", "--subgroup", '{"generators":[]}', "--word", "[x1,x2]",
      "--codim", "prank:2"], "power of p"),
    (["aut", "--group", "catalog:Q8", "--frobnicate"], "unrecognized arguments"),
    (["construct", "--group", "/nonexistent/file.json", "--subgroup", Q8_I, "--word", "[x1,x2]"], "error"),
])
def test_input_errors_exit_1(argv, fragment):
    code, out = cli.run(argv)
    assert code == 1 and out.startswith("error:") and fragment in out


def test_cap_error_mentions_override():
    c600 = json.dumps({"kind": "permutation", "degree": 600, "generators": [[(i + 1) % 600 for i in range(600)]]})
    code, out = cli.run(["aut", "--group", c600])
    assert code == 1 and "KMFORGE_CAPS" in out


def test_caps_cannot_be_lowered(monkeypatch):
    monkeypatch.setenv("KMFORGE_CAPS", "group_order=4")
    assert "24 automorphisms" in run_ok("aut", "--group", "catalog:Q8")


def test_certificate_failure_exit_2(monkeypatch):
    monkeypatch.setattr("kmforge.construction.is_characteristic", lambda H, auts: False)
    code, out = cli.run(["construct", "--group", "catalog:Q8", "--subgroup", Q8_I, "--word", "[x1,x2]",
                         "--output", "json"])
    assert code == 2
    d = json.loads(out)
    assert d["status"] == "certificate failure" and "not characteristic" in d["results"]["witness"]


@pytest.mark.parametrize("argv", DETERMINISM_COMMANDS, ids=lambda a: a[0] + ":" + a[2])
def test_json_is_byte_identical_and_canonical(argv):
    first, second = run_ok(*argv, "--output", "json"), run_ok(*argv, "--output", "json")
    assert first == second
    assert first == json.dumps(json.loads(first), sort_keys=True, indent=2) + "\n"


def test_timing_is_opt_in():
    argv = ["aut", "--group", "catalog:C2", "--output", "json"]
    assert "wall_time" not in json.loads(run_ok(*argv))
    assert "wall_time" in json.loads(run_ok(*argv, "--timing"))


def test_selftest_filter_lemma1():
    code, out = cli.run(["selftest", "--filter", "lemma1"])
    assert code == 0 and "[PASS]" in out and out.rstrip().endswith("1/1 criteria passed")


def test_selftest_unknown_filter():
    code, out = cli.run(["selftest", "--filter", "nothing-matches-this"])
    assert code == 1 and "no criterion matches" in out


def test_broken_commutator_makes_selftest_fail(monkeypatch):
    from kmforge import catalog
    from test_words import _value_set_with, broken_commutator

    # the full sweep reaches D8 only after a minute; start the scan there
    groups = [catalog.get("C4"), catalog.get("D8")]
    monkeypatch.setattr("kmforge.catalog.groups", lambda max_order: groups)
    monkeypatch.setattr("kmforge.words._value_set", _value_set_with(broken_commutator))
    code, out = cli.run(["selftest", "--filter", "multilinear"])
    assert code == 2
    assert "[FAIL]" in out and "witness:" in out


def test_main_writes_errors_to_stderr(capsys):
    assert cli.main(["aut", "--group", "catalog:NOPE"]) == 1
    captured = capsys.readouterr()
    assert captured.out == "" and captured.err.startswith("error:")
