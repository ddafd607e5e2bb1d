import io

import pytest

import twinsieve.cli as cli
from twinsieve.cli import EXIT_CAPACITY, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, execute, main, parse_args


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = execute(parse_args(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_count_all_engines_41():
    code, out, err = run(["count", "--n", "41", "--engine", "all"])
    assert code == EXIT_OK
    assert out == "n,engine,twin_count\n41,brute,6\n41,sieve,6\n41,ie,6\n"
    assert "done in" in err


def test_count_range_agrees():
    code, out, _ = run(["count", "--nmin", "1", "--nmax", "300", "--engine", "all", "--strict"])
    assert code == EXIT_OK
    assert len(out.splitlines()) == 1 + 3 * 300


def test_engine_mismatch_strict(monkeypatch):
    monkeypatch.setitem(cli._COUNTERS, "ie", lambda n: -1)
    code, _, err = run(["count", "--n", "41", "--engine", "all", "--strict"])
    assert code == EXIT_VIOLATION
    assert "mismatch" in err
    assert run(["count", "--n", "41", "--engine", "all"])[0] == EXIT_OK


def test_trace_41():
    code, out, _ = run(["trace", "--n", "41"])
    lines = out.splitlines()
    assert code == EXIT_OK
    assert lines[0] == "step,rule,count,remaining"
    assert lines[-1] == '5,k mod 5 != 3,4,"[11, 17, 29, 41]"'


def test_expand_41():
    code, out, err = run(["expand", "--n", "41", "--basis", "2,3,5"])
    assert code == EXIT_OK
    assert len(out.splitlines()) == 19
    assert "= 4" in err


def test_expand_capacity():
    assert run(["expand", "--n", "100000"])[0] == EXIT_CAPACITY
    assert run(["count", "--n", "100000", "--engine", "ie"])[0] == EXIT_CAPACITY


def test_lemmas_violations_strict():
    code, out, err = run(["lemmas", "--id", "L4_5", "--pmax", "17", "--strict"])
    assert code == EXIT_VIOLATION
    assert out.splitlines()[0] == "id,params,lhs,rhs,holds,diagnostics"
    assert all(",false," in line for line in out.splitlines()[1:])
    assert "violations=" in err


def test_lemmas_clean_dump_all():
    code, out, _ = run(["lemmas", "--id", "L4_4", "--mmax", "50", "--dump-all", "--strict"])
    assert code == EXIT_OK
    assert len(out.splitlines()) == 51


def test_bounds_output():
    code, out, _ = run(["bounds"])
    lines = out.splitlines()
    assert code == EXIT_OK and len(lines) == 29
    assert lines[0] == "v,p_v,n,w_float,d_prime,d_actual,ratio"


def test_pi():
    code, out, _ = run(["pi", "--n", "1000000"])
    assert out.splitlines()[1] == "1000000,78498,78498,true"


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--n", "abc"],
        ["count"],
        ["count", "--n", "0"],
        ["count", "--n", "5", "--nmin", "1", "--nmax", "3"],
        ["count", "--nmin", "9", "--nmax", "3"],
        ["trace"],
        ["trace", "--n", "41", "--basis", "2,4"],
        ["lemmas", "--id", "NOPE"],
        ["bounds", "--vmin", "2"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE


def test_out_file_lf(tmp_path):
    target = tmp_path / "b.csv"
    code, out, _ = run(["bounds", "--vmax", "5", "--out", str(target)])
    assert code == EXIT_OK and out == ""
    data = target.read_bytes()
    assert b"\r" not in data and data.endswith(b"\n")
    assert data.decode().splitlines()[-1] == "5,11,122,10.057143,2,10,5.0000"


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nn = 41\nengine = brute\nstrict = true\n")
    c = parse_args(["count", "--config", str(cfg)])
    assert (c.n, c.engine, c.strict) == (41, "brute", True)
    c = parse_args(["count", "--config", str(cfg), "--engine", "ie"])
    assert c.engine == "ie"


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense\n")
    assert main(["count", "--config", str(cfg)]) == EXIT_USAGE
    assert main(["count", "--config", str(tmp_path / "missing")]) == EXIT_USAGE


def test_main_stdout(capsys):
    assert main(["count", "--n", "9"]) == EXIT_OK
    assert capsys.readouterr().out == "n,engine,twin_count\n9,sieve,2\n"
