import csv
import io
import json
import math

import pytest

from lmgmetric.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_table(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--h", "0.3")
    assert code == 0
    assert "ground state" in out


def test_spectrum_csv_counts(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "6", "--h", "0.0", "--csv")
    rows = parse_csv(out)
    assert code == 0
    assert list(rows[0]) == ["S", "log_multiplicity", "M", "E"]
    total = sum(math.exp(float(r["log_multiplicity"])) for r in rows)
    assert total == pytest.approx(64)


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--h", "1.5", "--json")
    data = json.loads(out)
    assert data["ground_state"]["M0"] == 2


def test_thermal_n2(capsys):
    code, out, _ = run(capsys, "thermal", "--n", "2", "--beta", "1", "--h", "0")
    row = parse_csv(out)[0]
    assert float(row["log_Z"]) == pytest.approx(math.log(2 + 2 * math.cosh(1)), abs=1e-11)


@pytest.mark.parametrize("method", ["fluct", "fd", "dense"])
def test_finite_metric_methods(capsys, method):
    code, out, _ = run(capsys, "finite-metric", "--n", "2", "--beta", "1", "--h", "0",
                       "--method", method)
    row = parse_csv(out)[0]
    assert code == 0
    assert float(row["g_hh"]) == pytest.approx(2 / (2 + 2 * math.cosh(1)), abs=1e-7)


def test_limit_metric(capsys):
    code, out, _ = run(capsys, "limit-metric", "--beta", "2", "--h", "0", "--json")
    row = json.loads(out)[0]
    assert row["phase"] == "ordered"
    assert row["g_hh"] == 0.5


def test_ricci(capsys):
    code, out, _ = run(capsys, "ricci", "--beta", "2", "--h", "0", "--method", "orthogonal")
    assert float(parse_csv(out)[0]["ricci"]) == pytest.approx(-20.1033, abs=1e-3)


def test_json_keys_match_csv_header(capsys):
    args = ["phase-diagram", "--steps", "4", "--no-ricci"]
    _, out_csv, _ = run(capsys, *args)
    _, out_json, _ = run(capsys, *args, "--json")
    header = out_csv.splitlines()[0].split(",")
    data = json.loads(out_json)
    assert len(data) == 16
    assert all(list(r) == header for r in data)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "metric-scan", "--steps", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("T,h,phase")


def test_converge_summary_on_stderr(capsys):
    code, out, err = run(capsys, "converge", "--beta", "2", "--h", "0", "--n-list", "20,40")
    assert code == 0
    assert len(parse_csv(out)) == 2
    assert "corrected" in err


def test_audit(capsys):
    code, out, _ = run(capsys, "audit")
    assert code == 0
    assert out.count("PASS") == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["converge", "--beta", "2", "--h", "0", "--n-list", "50,51"],
        ["converge", "--beta", "2", "--h", "0", "--n-list", "100,50"],
        ["phase-diagram", "--t-min", "1", "--t-max", "0.5"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["nonsense"],
        ["thermal", "--n", "4"],
        ["thermal", "--n", "x", "--beta", "1", "--h", "0"],
        ["phase-diagram", "--threads", "0"],
    ],
)
def test_argparse_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["limit-metric", "--beta", "1", "--h", "0"],
        ["thermal", "--n", "3", "--beta", "1", "--h", "0"],
        ["ricci", "--beta", "0.5", "--h", "0"],
        ["thermal", "--n", "4", "--beta", "-1", "--h", "0"],
    ],
)
def test_domain_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 3
    assert err.startswith("lmg:")
