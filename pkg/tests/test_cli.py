import json

import pytest

from conftest import GOLDEN, run_cli


@pytest.mark.parametrize("args,golden", [
    (("table", "--id", "1"), "table1.csv"),
    (("table", "--id", "2"), "table2.csv"),
    (("table", "--id", "3", "--precision", "1"), "table3.csv"),
    (("table", "--id", "4"), "table4.csv"),
    (("figure", "--id", "5", "--n", "10"), "figure5.csv"),
    (("figure", "--id", "9", "--a", "2", "--precision", "4"), "figure9_a2.csv"),
    (("law", "ruin-biased", "--a", "10", "--b", "10", "--p", "45/100"), "law_ruin_biased.csv"),
])
def test_golden_csv(args, golden):
    cp = run_cli(*args)
    assert cp.returncode == 0, cp.stderr
    assert cp.stdout == (GOLDEN / golden).read_text()


def test_table1_first_row():
    cp = run_cli("table", "--id", "1", "--precision", "3")
    lines = cp.stdout.splitlines()
    assert len(lines) == 12
    assert lines[1] == "0,46189/262144,0.176"


def test_unknown_table_is_usage_error():
    assert run_cli("table", "--id", "9").returncode == 2


def test_global_flags_before_or_after_subcommand():
    a = run_cli("--precision", "2", "--format", "json", "table", "--id", "4")
    b = run_cli("table", "--id", "4", "--precision", "2", "--format", "json")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert json.loads(a.stdout)["rows"][5]["decimal"]["prob_win"] == 0.02


def test_out_writes_file(tmp_path):
    target = tmp_path / "t1.csv"
    cp = run_cli("table", "--id", "1", "--out", str(target))
    assert cp.returncode == 0 and cp.stdout == ""
    assert target.read_text() == (GOLDEN / "table1.csv").read_text()


def test_law_values():
    cp = run_cli("law", "u2n", "--n", "0", "--p", "1/2")
    assert cp.stdout.splitlines()[1] == "value,1/1,1.000000"
    cp = run_cli("law", "first-return", "--n", "10", "--p", "1/3", "--precision", "4")
    assert cp.stdout.splitlines()[1].endswith(",0.0029")


def test_law_json():
    cp = run_cli("law", "ruin", "--a", "5", "--b", "3", "--format", "json")
    payload = json.loads(cp.stdout)
    assert payload["values"]["expected_duration"]["exact"] == "15/1"


def test_law_table_output():
    cp = run_cli("law", "return-count", "--n", "2")
    assert cp.stdout.splitlines() == ["index,exact,decimal", "0,3/8,0.375000", "1,3/8,0.375000", "2,1/4,0.250000"]


def test_law_rejects_decimal_probability():
    cp = run_cli("law", "u2n", "--n", "3", "--p", "0.45")
    assert cp.returncode == 2
    assert "a/b" in cp.stderr


def test_law_usage_errors():
    assert run_cli("law", "nope").returncode == 2
    assert run_cli("law", "u2n").returncode == 2
    assert run_cli("law", "u2n", "--n", "2", "--bogus", "1").returncode == 2
    assert run_cli("law", "u2n", "--n", "x").returncode == 2


def test_fair_only_law_is_domain_restriction():
    cp = run_cli("law", "lead-time-pmf", "--n", "3", "--p", "1/3")
    assert cp.returncode == 3
    assert "fair" in cp.stderr


def test_every_law_runs():
    from walklab.cli import LAWS

    args = {
        "arcsine-cdf": ["--x", "3/10"], "quantile": ["--prob", "1/2"],
        "ruin-symmetric": ["--a", "3", "--rho", "11/9"], "escape": ["--p", "2/3", "--n", "5"],
        "hit-zero": ["--p", "2/3"], "series-sum": ["--p", "1/3"], "p-return": ["--p", "1/3"],
        "binomial": ["--n", "5", "--k", "2"], "count-paths": ["--x", "5", "--y", "1"],
        "ballot": ["--x", "5", "--y", "1"], "ruin-degenerate": ["--a", "7", "--b", "3", "--p", "1"],
    }
    for name in LAWS:
        extra = args.get(name)
        if extra is None:
            extra = ["--a", "5", "--b", "3"] if name.startswith("ruin") else ["--n", "3"]
        cp = run_cli("law", name, *extra)
        assert cp.returncode == 0, (name, cp.stderr)


def test_figure_examples():
    cp = run_cli("figure", "--id", "5", "--n", "10", "--precision", "3")
    assert "3,0.408,0.369" in cp.stdout.splitlines()
    cp = run_cli("figure", "--id", "7", "--a", "3")
    assert "1/1,0.500000,0.500000,9.000000" in cp.stdout.splitlines()
    assert run_cli("figure", "--id", "6").returncode == 2


def test_simulate_one_step_ruin():
    cp = run_cli("simulate", "ruin", "--a", "1", "--b", "1", "--p", "1/2", "--trials", "100", "--seed", "1")
    assert cp.returncode == 0
    duration = cp.stdout.splitlines()[2].split(",")
    assert duration[0] == "duration" and float(duration[1]) == 1.0


def test_simulate_ruin_z_score():
    cp = run_cli("simulate", "ruin", "--a", "5", "--b", "3", "--p", "1/2", "--trials", "100000", "--seed", "42")
    header, win = cp.stdout.splitlines()[:2]
    assert header == "quantity,mean,stderr,lo,hi,trials,exact,z"
    assert abs(float(win.split(",")[-1])) <= 3


def test_simulate_lead_seed_seven():
    cp = run_cli("simulate", "lead", "--n", "10", "--trials", "100000", "--seed", "7")
    row0 = cp.stdout.splitlines()[1].split(",")
    assert row0[0] == "0" and abs(float(row0[-1])) <= 3


def test_simulate_step_cap_exit_code():
    cp = run_cli("simulate", "ruin", "--a", "50", "--b", "50", "--trials", "200", "--step-cap", "10")
    assert cp.returncode == 4


def test_seed_precedence(tmp_path):
    cfg = tmp_path / "walklab.cfg"
    cfg.write_text("# defaults\nseed = 5\ntrials = 500\n")
    base = ["simulate", "first-return", "--n", "3", "--format", "json"]

    def seed_of(cp):
        assert cp.returncode == 0, cp.stderr
        return json.loads(cp.stdout)["seed"], json.loads(cp.stdout)["trials"]

    assert seed_of(run_cli(*base, "--trials", "500")) == (42, 500)
    assert seed_of(run_cli(*base, "--config", str(cfg))) == (5, 500)
    assert seed_of(run_cli(*base, "--config", str(cfg), env={"WALKLAB_SEED": "9"})) == (9, 500)
    assert seed_of(run_cli(*base, "--config", str(cfg), "--seed", "11", env={"WALKLAB_SEED": "9"})) == (11, 500)
    assert seed_of(run_cli(*base, env={"WALKLAB_CONFIG": str(cfg)})) == (5, 500)


def test_recurrence_command():
    cp = run_cli("recurrence", "--dim", "3", "--format", "json")
    report = json.loads(cp.stdout)
    assert report["classification"] == "transient"
    assert report["p_return"]["lo"] <= 0.3405373 <= report["p_return"]["hi"]
    assert run_cli("recurrence", "--dim", "5").returncode == 3


def test_verify_command():
    cp = run_cli("verify", "--format", "json")
    assert cp.returncode == 0
    assert json.loads(cp.stdout)["passed"] is True


def test_verify_only_and_fault():
    cp = run_cli("verify", "--only", "ballot")
    groups = {line.split(",")[0] for line in cp.stdout.splitlines()[1:]}
    assert groups == {"ballot"}
    cp = run_cli("verify", "--inject-fault", "ballot-theorem")
    assert cp.returncode == 1
    assert "ballot-theorem" in cp.stderr


def test_bad_precision():
    assert run_cli("table", "--id", "1", "--precision", "0").returncode == 2
