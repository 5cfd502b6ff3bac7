import csv
import json

import pytest

from torusque import cli


def run_cli(args):
    return cli.main(args)


def test_validate_verb(capsys):
    assert run_cli(["validate", "--matrix", "2,1;1,1"]) == 0
    assert "accepted" in capsys.readouterr().out
    assert run_cli(["validate", "--matrix", "1,0;0,1"]) == 2
    assert "root-of-unity" in capsys.readouterr().out


def test_validate_bad_matrix_exit2(capsys):
    assert run_cli(["validate", "--matrix", "1,2,3"]) == 2


def test_quantize_verb(capsys):
    rc = run_cli(["quantize", "--p", "7", "--terms", "1,0:0.5;-1,0:0.5"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "real-valued symbol: True" in out
    assert "dim = 7" in out


def test_quantize_bad_terms_exit2(capsys):
    assert run_cli(["quantize", "--p", "7", "--terms", "1,0,0:1"]) == 2


def test_config_parsing(tmp_path):
    cfgfile = tmp_path / "sweep.cfg"
    cfgfile.write_text("n = 1\npmin = 3\npmax = 7\nchecks = relations,bound\n"
                       "# comment\nseed = 42\n")
    cfg = cli.build_config(cli.load_config_file(str(cfgfile)), {})
    assert cfg.n == 1 and cfg.pmin == 3 and cfg.pmax == 7 and cfg.seed == 42
    assert cfg.checks == ("relations", "bound")


def test_config_rejects_unknown_key(tmp_path):
    with pytest.raises(cli.ConfigError):
        cli.build_config({"bogus": "1"}, {})
    with pytest.raises(cli.ConfigError):
        cli.build_config({"checks": "nope"}, {})
    with pytest.raises(cli.ConfigError):
        cli.build_config({"pmin": "9", "pmax": "3"}, {})


def test_sweep_nonsymplectic_exit2(capsys, tmp_path):
    rc = run_cli(["sweep", "--matrix", "2,0;0,1", "--pmin", "3", "--pmax", "3"])
    assert rc == 2


def test_sweep_small_range(tmp_path, capsys):
    out_json = tmp_path / "report.json"
    out_csv = tmp_path / "report.csv"
    rc = run_cli(["sweep", "--pmin", "3", "--pmax", "7",
                  "--checks", "relations,decomposition,bound",
                  "--out-json", str(out_json), "--out-csv", str(out_csv)])
    assert rc == 0
    report = json.loads(out_json.read_text())
    assert report["all_passed"]
    assert [rp["p"] for rp in report["primes"]] == [3, 7]
    assert report["skipped"] == [{"p": 5, "reason": "degenerate prime"}]
    for rp in report["primes"]:
        assert set(rp) == {"p", "n", "split_type", "torus_order", "checks"}
        for c in rp["checks"]:
            assert set(c) == {"name", "status", "max_dev", "max_ratio",
                              "witnesses", "millis"}
    with open(out_csv) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["p", "check", "status", "max_dev", "max_ratio", "millis"]
    assert len(rows) == 1 + 2 * 3


def test_sweep_split_prime_bound_fails(tmp_path):
    # the order-2 character defeats the literal bound at split primes
    out_json = tmp_path / "r.json"
    rc = run_cli(["sweep", "--pmin", "11", "--pmax", "11", "--checks",
                  "bound,refined", "--out-json", str(out_json)])
    assert rc == 1
    report = json.loads(out_json.read_text())
    checks = {c["name"]: c for c in report["primes"][0]["checks"]}
    assert checks["bound"]["status"] == "fail"
    assert checks["bound"]["witnesses"][0]["abs_a"] == pytest.approx(9.0)
    assert checks["refined"]["status"] == "pass"


def test_sweep_deterministic_byte_identical(tmp_path):
    paths = []
    for i in (0, 1):
        out = tmp_path / f"d{i}.json"
        rc = run_cli(["sweep", "--pmin", "3", "--pmax", "7",
                      "--checks", "relations,egorov,bound", "--seed", "7",
                      "--deterministic", "--out-json", str(out)])
        assert rc == 0
        paths.append(out.read_bytes())
    assert paths[0] == paths[1]


def test_plotdata(tmp_path, capsys):
    out_json = tmp_path / "report.json"
    rc = run_cli(["sweep", "--pmin", "3", "--pmax", "7", "--checks", "bound",
                  "--out-json", str(out_json)])
    assert rc == 0
    out_csv = tmp_path / "plot.csv"
    rc = run_cli(["plotdata", "--reports", str(out_json), "--out", str(out_csv)])
    assert rc == 0
    with open(out_csv) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["p", "max_ratio", "bound_constant"]
    assert len(rows) == 3
    assert all(float(r[1]) <= float(r[2]) for r in rows[1:])


def test_sweep_n2_bound(tmp_path):
    out_json = tmp_path / "n2.json"
    out_csv = tmp_path / "n2.csv"
    rc = run_cli(["sweep", "--n", "2", "--matrix", "auto-sp4", "--pmin", "3",
                  "--pmax", "3", "--checks", "bound",
                  "--out-json", str(out_json), "--out-csv", str(out_csv)])
    assert rc == 0
    report = json.loads(out_json.read_text())
    check = report["primes"][0]["checks"][0]
    assert check["status"] == "pass"
    assert check["max_ratio"] < 4  # |a_chi| / p^(n/2) < 2^n at this prime


def test_budget_skips_checks(tmp_path):
    out_json = tmp_path / "b.json"
    rc = run_cli(["sweep", "--pmin", "3", "--pmax", "3", "--checks",
                  "relations,bound", "--budget-seconds", "0",
                  "--out-json", str(out_json)])
    assert rc == 0  # skips are not failures
    report = json.loads(out_json.read_text())
    statuses = [c["status"] for c in report["primes"][0]["checks"]]
    assert statuses == ["skip", "skip"]


def test_plotdata_empty(tmp_path):
    report = tmp_path / "empty.json"
    report.write_text(json.dumps({"meta": {"n": 1}, "primes": []}))
    out_csv = tmp_path / "plot.csv"
    assert run_cli(["plotdata", "--reports", str(report),
                    "--out", str(out_csv)]) == 0
    with open(out_csv) as fh:
        rows = list(csv.reader(fh))
    assert rows == [["p", "max_ratio", "bound_constant"]]


def test_demo_verb(capsys):
    rc = run_cli(["demo", "--p", "7"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "|C_A|=8" in out


def test_parse_matrix_fixtures():
    assert cli.parse_matrix("cat-map", 1) == ((2, 1), (1, 1))
    m = cli.parse_matrix("auto-sp4", 2)
    assert len(m) == 4
    with pytest.raises(cli.ConfigError):
        cli.parse_matrix("1,2;3,4;5,6", 1)
