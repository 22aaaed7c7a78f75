import json
import subprocess
import sys

import pytest
from hypothesis import given

from conftest import labelled, set_systems
from sunflower_vc.cli import main
from sunflower_vc.errors import InputError
from sunflower_vc.formats import format_system, parse, parse_rational, parse_text
from sunflower_vc.gen import tree_family


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def pair_file(tmp_path):
    f = tmp_path / "pair.txt"
    f.write_text("# two singletons\n1\n2\n")
    return str(f)


# ---------------------------------------------------------------- formats


@given(set_systems(max_n=6, max_members=8))
def test_round_trip_both_formats(H):
    for fmt in ("text", "json"):
        assert parse(format_system(H, fmt), fmt) == H
        assert parse(format_system(H, fmt)) == H


def test_text_format_details():
    H = parse_text("!ground a b c\n# note\n\na b\n{}\n")
    assert H.ground == ("a", "b", "c") and H.sets() == [[], ["a", "b"]]
    assert parse_text("x y\ny z\n").ground == ("x", "y", "z")
    for bad in ("a\n!ground a\n", "!ground a\nb\n", "a {}\n", "!bogus\n", "!ground a a\n"):
        with pytest.raises(InputError):
            parse_text(bad)
    with pytest.raises(InputError):
        format_system(labelled(["#x"], [["#x"]]))


def test_json_format_details():
    H = parse('{"sets": [["b"], ["a", "b"]]}')
    assert H.ground == ("b", "a")
    for bad in ('{"sets": 3}', "[1]", '{"ground": [1], "sets": []}'):
        with pytest.raises(InputError):
            parse(bad, "json")
    with pytest.raises(InputError):
        parse("{oops", "json")


def test_parse_rational():
    assert parse_rational("1/8") == parse_rational("0.125")
    assert parse_rational(" 3 ") == 3
    for bad in ("x", "1/0"):
        with pytest.raises(InputError):
            parse_rational(bad)


# ---------------------------------------------------------------- commands


def test_tree_then_find_absent(tmp_path, capsys):
    out = tmp_path / "tree.txt"
    assert run(["construct", "tree", "--r", "3", "--ell", "2", "-o", str(out)], capsys)[0] == 0
    assert parse(out.read_text()) == tree_family(3, 2)
    code, text, _ = run(["sunflower", "find", str(out), "--r", "3"], capsys)
    assert code == 1 and "absent" in text
    code, text, _ = run(["sunflower", "find", str(out), "--r", "3", "--json"], capsys)
    assert code == 1 and json.loads(text)["outcome"] == "absent"


def test_pipeline_through_stdin():
    env_py = [sys.executable, "-m", "sunflower_vc"]
    tree = subprocess.run(env_py + ["construct", "tree", "--r", "3", "--ell", "2"], capture_output=True, check=True)
    found = subprocess.run(env_py + ["sunflower", "find", "--r", "3", "-"], input=tree.stdout, capture_output=True)
    assert found.returncode == 1 and b"absent" in found.stdout


def test_bounds_logstar(capsys):
    code, text, _ = run(["bounds", "logstar", "--x", "300"], capsys)
    assert code == 0 and text.strip() == "4.5"


def test_kk_check_example(pair_file, capsys):
    code, text, _ = run(["kk", "check", pair_file, "--variant", "kk-bell", "--q", "1/8", "--epsilon", "1/2", "--json"], capsys)
    rep = json.loads(text)
    assert code == 0
    assert rep["witnesses"]["min_cover_weight"] == "1/4" and rep["witnesses"]["branch1"] is True


def test_sunflower_modes(pair_file, capsys):
    assert run(["sunflower", "find", pair_file, "--r", "2"], capsys)[0] == 0
    assert run(["sunflower", "er", pair_file, "--r", "2"], capsys)[0] == 0
    assert run(["sunflower", "vc1", pair_file, "--r", "2"], capsys)[0] == 0
    assert run(["sunflower", "witness", pair_file, "--r", "2"], capsys)[0] == 0
    code, _, err = run(["sunflower", "vc1", pair_file, "--r", "3"], capsys)
    assert code == 2 and "error" in err


def test_vc_and_spread(pair_file, capsys):
    code, text, _ = run(["vc", pair_file, "--json"], capsys)
    assert code == 0 and json.loads(text)["witnesses"]["dimension"] == 1
    assert run(["spread", "decompose", pair_file, "--W", "1", "--t", "1"], capsys)[0] == 0
    code, text, _ = run(["spread", "expectation", pair_file, "--p", "1/2", "--q", "1/4", "--t", "1", "--json"], capsys)
    assert code == 0 and "witnesses" in json.loads(text)


def test_csv_sweeps(pair_file, capsys):
    code, text, _ = run(["kk", "sweep", pair_file, "--q-values", "1/2,1/8"], capsys)
    assert code == 0 and text.splitlines()[0].count(",") >= 3 and len(text.splitlines()) == 7
    code, text, _ = run(["sunflower", "threshold-sweep", "--r-values", "3", "--ell-values", "1,2", "--count", "3"], capsys)
    assert code == 0 and "," in text.splitlines()[0]


def test_gen_is_deterministic(capsys):
    argv = ["gen", "--n", "6", "--ell", "3", "--size", "5", "--seed", "4", "--count", "3"]
    a = run(argv, capsys)[1]
    b = run(argv, capsys)[1]
    lines = a.splitlines()
    assert a == b and len(lines) == 3
    assert all(len(parse(l, "json")) == 5 for l in lines)


def test_verify_small(capsys):
    code, text, _ = run(["verify", "oracle", "--scale", "0.05"], capsys)
    assert code == 0 and "PASS" in text.upper()


def test_reports_replayable(pair_file, capsys):
    argv = ["sunflower", "partition", pair_file, "--r", "2", "--seed", "3", "--trials", "20", "--json"]
    reps = []
    for _ in range(2):
        rep = json.loads(run(argv, capsys)[1])
        rep.pop("timing")
        reps.append(json.dumps(rep, sort_keys=True))
    assert reps[0] == reps[1]
    assert json.loads(reps[0])["input_digest"].startswith("sha256:")


def test_usage_errors(tmp_path, capsys):
    assert run(["vc", str(tmp_path / "missing.txt")], capsys)[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("a {}\n")
    assert run(["vc", str(bad)], capsys)[0] == 2
