import json

import pytest

from polaris import cli, parse


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code, _ = cli.run(list(argv) + ["--out", str(out), "--quiet"])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def statuses(report):
    return [c["status"] for c in report["checks"]]


def test_subhankel_command(tmp_path):
    code, rep = run(["subhankel", "--r", "4", "--checks", "lemma,hessian"], tmp_path)
    assert code == 0
    assert rep["schema"] == 1 and rep["config"]["r"] == 4
    hess = next(c for c in rep["checks"] if c["name"].endswith("hessian"))
    assert hess["payload"]["exponent"] == 10


def test_dolgachev_suite(tmp_path):
    code, rep = run(["suite", "--name", "dolgachev", "--p", "101", "--seed", "7"], tmp_path)
    assert code == 0
    verdicts = sorted(c["payload"]["verdict"] for c in rep["checks"])
    assert verdicts == ["delta_eq(1)"] * 3 + ["not_dominant"]


def test_degree_bad_file_is_usage_error(tmp_path):
    assert cli.main(["degree", "--poly", "bad~~file"]) == 2


def test_degree_parse_error(tmp_path):
    src = tmp_path / "f.txt"
    src.write_text("x0 ** x1 +\n")
    assert cli.main(["degree", "--poly", str(src)]) == 2


def test_unknown_flag_usage():
    assert cli.main(["subhankel", "--bogus"]) == 2
    assert cli.main(["suite", "--name", "nope"]) == 2
    assert cli.main(["subhankel", "--r", "4", "--checks", "lemma,zzz"]) == 2


def test_bad_prime_usage():
    assert cli.main(["degree", "--expr", "x0*x2 - x1^2", "--p", "100"]) == 2


def test_degree_from_file_with_histogram(tmp_path):
    src = tmp_path / "f.txt"
    src.write_text("# the smooth conic\nx0*x2 - x1^2\n")
    hist = tmp_path / "h.csv"
    code, rep = run(["degree", "--poly", str(src), "--p", "101", "--samples", "200", "--seed", "7",
                     "--histogram", str(hist)], tmp_path)
    assert code == 0
    assert rep["checks"][0]["payload"]["verdict"] == "delta_eq(1)"
    assert hist.read_text().splitlines()[0] == "fiber_size,count"


def test_degree_heuristic_status(tmp_path):
    code, rep = run(["degree", "--expr", "x0^3 + x1^3 + x2^3", "--p", "101"], tmp_path)
    assert code == 0 and statuses(rep) == ["heuristic-pass"]


def test_inconclusive_only_exit_code(tmp_path):
    code, rep = run(["degree", "--expr", "x0*x2 - x1^2", "--p", "7", "--samples", "5000"], tmp_path)
    assert code == 3 and statuses(rep) == ["inconclusive"]


def test_gn_and_permutti_commands(tmp_path):
    code, rep = run(["gn", "--r", "4", "--t", "2", "--m", "1", "--n", "3", "--d", "4", "--seed", "2"], tmp_path)
    assert code == 0 and set(statuses(rep)) == {"pass"}
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"type": "permutti", "r": 5, "t": 3, "n": 4, "d": 8, "seed": 0}))
    code, rep = run(["permutti", "--spec", str(spec), "--zv"], tmp_path)
    assert code == 0 and any(c["name"].endswith("z_and_v") for c in rep["checks"])


def test_gn_degenerate_spec_is_usage_error():
    assert cli.main(["gn", "--r", "4", "--t", "2", "--m", "1", "--n", "1", "--d", "3"]) == 2


def test_scroll_dual_command(tmp_path):
    code, rep = run(["scroll-dual", "--a", "1", "--b", "4", "--p", "32003", "--samples", "400", "--seed", "11",
                     "--verify-degree"], tmp_path)
    assert code == 0
    names = {c["name"].split(".")[-1]: c for c in rep["checks"]}
    assert names["interpolate"]["payload"]["kernel_dim_at_d"] == 1
    assert names["interpolate"]["payload"]["p"] == 32003
    assert names["multiplicity_along_L_perp"]["payload"]["multiplicity"] == 4
    assert names["polar_degree"]["payload"]["verdict"] == "delta_eq(1)"


def test_ext_suite(tmp_path):
    code, rep = run(["suite", "--name", "ext", "--r", "3"], tmp_path)
    assert code == 0 and statuses(rep) == ["pass"] * 3


def test_csv_output(tmp_path):
    csv_path = tmp_path / "rows.csv"
    code, _ = cli.run(["suite", "--name", "dolgachev", "--csv", str(csv_path), "--out", str(tmp_path / "r.json"),
                       "--quiet"])
    lines = csv_path.read_text().splitlines()
    assert code == 0 and lines[0] == "name,status,key,value"
    assert any(",verdict,not_dominant" in ln for ln in lines)


def test_deterministic_reports(tmp_path):
    argv = ["suite", "--name", "ext", "--r", "3", "--seed", "3"]
    _, a = run(argv, tmp_path, "a.json")
    _, b = run(argv, tmp_path, "b.json")
    a.pop("wall_time")
    b.pop("wall_time")
    assert cli.dumps(a) == cli.dumps(b)


def test_threads_env_fallback(monkeypatch):
    monkeypatch.setenv("POLARIS_THREADS", "3")
    assert cli._threads(None) == 3
    assert cli._threads(2) == 2
    monkeypatch.setenv("POLARIS_THREADS", "x")
    with pytest.raises(cli.UsageError):
        cli._threads(None)


def test_parallel_matches_serial(tmp_path):
    argv = ["suite", "--name", "subhankel-all"]
    _, a = run(argv + ["--threads", "1"], tmp_path, "a.json")
    _, b = run(argv + ["--threads", "2"], tmp_path, "b.json")
    assert a["checks"] == b["checks"]


def test_exit_code_rules():
    ok = cli.check("a", "pass")
    bad = cli.check("b", "fail")
    inc = cli.check("c", "inconclusive")
    assert cli.exit_code([ok, inc]) == 0
    assert cli.exit_code([ok, bad, inc]) == 1
    assert cli.exit_code([inc, inc]) == 3


def test_stdout_report(capsys):
    assert cli.main(["subhankel", "--r", "2", "--checks", "poly", "--quiet"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert parse(rep["checks"][0]["payload"]["f"]) == parse("x0*x2 - x1^2")
