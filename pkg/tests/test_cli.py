import json

import pytest

from adelab.cli import EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_OK, dispatch
from adelab.config import Settings

LAME_SIXTH = ["--ode", "lame", "--params", "n=1/6,B=0,g2=0,g3=1"]
HYP_HALF = ["--ode", "hyp", "--params", "a=1/2,b=1/2,c=1"]


def _run(capsys, settings, argv):
    code = dispatch(argv, settings)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pcurv_test_json(capsys, settings):
    code, out, _ = _run(capsys, settings, ["pcurv", "test", *LAME_SIXTH, "--p", "5"])
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["tool"] == "adelab"
    assert data["command"] == "pcurv test"
    assert data["result"]["status"] == "Zero"
    assert data["result"]["m"] == 5
    assert data["params"]["k"] == 1


def test_failed_check_exits_with_one(capsys, settings):
    argv = ["pcurv", "pullback", *LAME_SIXTH, "--source=-1;42*z-5;36*z^2-9*z", "--s", "3"]
    code, out, _ = _run(capsys, settings, argv)
    assert code == EXIT_CHECK_FAILED
    assert json.loads(out)["result"]["holds"] is False


def test_pullback_holds(capsys, settings):
    argv = ["pcurv", "pullback", *LAME_SIXTH, "--source=-7/36;42*z-6;36*z^2-9*z", "--s", "3"]
    code, out, _ = _run(capsys, settings, argv)
    assert code == EXIT_OK


def test_invalid_input_exits_with_two(capsys, settings):
    code, out, err = _run(capsys, settings, ["pcurv", "test", "--ode", "lame", "--params", "n=1/6,B=0", "--p", "5"])
    assert code == EXIT_INVALID
    assert out == ""
    assert err.startswith("error:")


@pytest.mark.parametrize(
    "argv",
    [
        ["pcurv", "test", *LAME_SIXTH],
        ["frobnicate"],
        ["pcurv", "scan", *HYP_HALF, "--pmax", "x"],
    ],
)
def test_argument_errors_exit_with_two(capsys, settings, argv):
    code, _, _ = _run(capsys, settings, argv)
    assert code == EXIT_INVALID


def test_scan_pmax_below_two_is_rejected(capsys, settings):
    code, _, _ = _run(capsys, settings, ["pcurv", "scan", *HYP_HALF, "--pmax", "1"])
    assert code == EXIT_INVALID


def test_scan_csv(capsys, settings):
    code, out, _ = _run(capsys, settings, ["pcurv", "scan", *HYP_HALF, "--pmax", "20", "--out", "csv"])
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "p,status,m,k"
    assert [line.split(",")[0] for line in lines[1:]] == ["2", "3", "5", "7", "11", "13", "17", "19"]


def test_scan_json_does_not_depend_on_threads(capsys, settings):
    argv = ["pcurv", "scan", *LAME_SIXTH, "--pmax", "40"]
    _, single, _ = _run(capsys, settings, [*argv, "--threads", "1"])
    _, pooled, _ = _run(capsys, settings, [*argv, "--threads", "2"])
    assert single == pooled
    assert "workers" not in json.loads(single)["params"]


def test_timings_flag(capsys, settings):
    _, out, _ = _run(capsys, settings, ["mf", "numerator", "--weight", "12", "--timings"])
    assert "wall_ms" in json.loads(out)
    _, out, _ = _run(capsys, settings, ["mf", "numerator", "--weight", "12"])
    data = json.loads(out)
    assert "wall_ms" not in data
    assert data["result"]["multiplier"] == 691


def test_text_output(capsys, settings):
    code, out, _ = _run(capsys, settings, ["ec", "count", "--p", "7", "--t2", "1", "--t3", "1", "--out", "text"])
    assert code == EXIT_OK
    assert out.startswith("ec count\n")
    assert "agree: true" in out


def test_vector_field_commands(capsys, settings):
    code, out, _ = _run(capsys, settings, ["vf", "pclosed", "--catalog", "limitcycle", "--pmax", "13"])
    assert code == EXIT_OK
    statuses = {r["p"]: r["status"] for r in json.loads(out)["result"]["records"]}
    assert statuses[3] == "Collinear"
    assert statuses[5] == "RingPrime"
    assert statuses[7] == "NotCollinear"

    code, _, _ = _run(capsys, settings, ["vf", "firstintegral", "--catalog", "ramanujan-e", "--p", "7"])
    assert code == EXIT_OK
    code, _, _ = _run(capsys, settings, ["vf", "membership", "--p", "5", "--index", "2"])
    assert code == EXIT_OK


def test_hodge_series_from_monomial_file(capsys, settings, tmp_path):
    path = tmp_path / "monomials.txt"
    path.write_text("# t0, t1\n1,1,1,1\n2,0,2,0\n", encoding="utf-8")
    code, out, _ = _run(capsys, settings, ["hodge", "series", "--monomials", str(path), "--beta", "0,0,0,0", "--trunc", "3"])
    assert code == EXIT_OK
    result = json.loads(out)["result"]
    assert result["k"] == 1
    assert result["terms"] == 5
    assert result["coefficients"]["2,1"] == "1/32"
    assert result["terms_check"] is True


def test_missing_monomial_file(capsys, settings, tmp_path):
    argv = ["hodge", "series", "--monomials", str(tmp_path / "absent.txt"), "--beta", "0,0,0,0"]
    code, _, _ = _run(capsys, settings, argv)
    assert code == EXIT_INVALID


@pytest.mark.parametrize("table", ["hyp-half", "mpk-grid", "cubic-codim-table", "powersum-11", "ab-congruence-100"])
def test_repro_quick_tables(capsys, settings, table):
    code, out, _ = _run(capsys, settings, ["repro", table])
    assert code == EXIT_OK
    assert out == f"{table}: ok\n"


@pytest.mark.slow
@pytest.mark.parametrize(
    "table",
    [
        "lame-table4-badprimes",
        "lame-12-89",
        "lame-5-87",
        "lame-4-65",
        "ramanujan-pclosed",
        "modular4-pclosed",
        "limitcycle-p3",
    ],
)
def test_repro_slow_tables(capsys, settings, table):
    code, out, _ = _run(capsys, settings, ["repro", table, "--threads", "2"])
    assert code == EXIT_OK
    assert out == f"{table}: ok\n"


def test_repro_unknown_table(capsys, settings):
    code, _, err = _run(capsys, settings, ["repro", "table-99"])
    assert code == EXIT_INVALID
    assert "unknown table" in err


def test_repro_mismatch_prints_diff(capsys, tmp_path):
    (tmp_path / "mpk-grid.txt").write_text("# wrong\n2 2 4\n3 3 7\n", encoding="utf-8")
    code, out, err = _run(capsys, Settings(threads=1, golden_dir=tmp_path), ["repro", "mpk-grid"])
    assert code == EXIT_CHECK_FAILED
    assert "-3 3 7" in out
    assert "+3 3 6" in out
    assert "mismatch" in err
