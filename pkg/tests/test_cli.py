import csv
import io
import json

import pytest

from qcorr import cli, states
from qcorr.fano_bloch import FanoMatrix


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_point_mixed_s0(capsys):
    code, out, _ = run(capsys, "point", "--scheme", "mixed", "--n", "3", "--s", "0", "--format", "csv")
    assert code == 0
    (row,) = parse_csv(out)
    assert (row["T2"], row["D2"], row["C2"], row["L2"]) == ("0.25", "0", "0.25", "0")
    assert row["branch"] == "plus"


def test_point_text_and_json(capsys):
    code, out, _ = run(capsys, "point", "--scheme", "pure", "--n", "2", "--k", "1", "--s", "1",
                       "--format", "text")
    assert code == 0
    values = dict(line.split("=", 1) for line in out.splitlines())
    assert all(float(values[q]) == 0.0 for q in ("T2", "D2", "C2", "L2"))
    code, out, _ = run(capsys, "point", "--scheme", "mixed", "--n", "3", "--omega", "0.65",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["branch"] == "plus" and data["s"] == pytest.approx(0.3)


@pytest.mark.parametrize(
    "argv, message",
    [
        (["--scheme", "pure", "--n", "2", "--k", "2", "--s", "0.5"], "k must satisfy"),
        (["--scheme", "mixed", "--n", "3", "--s", "1.5"], "overlap s"),
        (["--scheme", "mixed", "--n", "3"], "exactly one of"),
        (["--scheme", "mixed", "--n", "3", "--s", "0.5", "--omega", "0.7"], "exactly one of"),
        (["--scheme", "mixed", "--n", "1", "--s", "0.5"], "n must be"),
        (["--scheme", "banana", "--n", "3", "--s", "0.5"], "invalid choice"),
    ],
)
def test_point_usage_errors(capsys, argv, message):
    code, _, err = run(capsys, "point", *argv)
    assert code == 2 and message in err


def test_sweep_rows_match_point(capsys):
    code, out, _ = run(capsys, "sweep", "--scheme", "mixed", "--n", "3", "--steps", "3")
    rows = parse_csv(out)
    assert code == 0 and [r["s"] for r in rows] == ["0", "0.5", "1"]
    assert out.splitlines()[0] == ",".join(cli.COLUMNS)
    for row in rows:
        _, point, _ = run(capsys, "point", "--scheme", "mixed", "--n", "3", "--s", row["s"],
                          "--format", "csv")
        assert parse_csv(point)[0] == row


def test_sweep_pure_endpoints(capsys):
    _, out, _ = run(capsys, "sweep", "--scheme", "pure", "--n", "2", "--k", "1", "--steps", "2")
    first, last = parse_csv(out)
    assert [float(first[q]) for q in ("T2", "D2", "C2", "L2")] == pytest.approx([0.75, 0.5, 0.25, 0])
    assert [float(last[q]) for q in ("T2", "D2", "C2", "L2")] == [0, 0, 0, 0]


def test_sweep_residuals_and_parallel_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["sweep", "--scheme", "mixed", "--n", "5", "--steps", "64"]
    assert cli.main(base + ["--out", str(a)]) == 0
    assert cli.main(base + ["--out", str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()
    assert all(abs(float(r["residual"])) <= 1e-12 for r in parse_csv(a.read_text()))


def test_sweep_errors(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--scheme", "mixed", "--n", "3", "--steps", "1")
    assert code == 2 and "steps" in err
    code, _, _ = run(capsys, "sweep", "--scheme", "mixed", "--n", "3", "--k", "1")
    assert code == 2
    code, _, err = run(capsys, "sweep", "--scheme", "mixed", "--n", "3",
                       "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 3 and "I/O error" in err


def test_plotdata_shapes(capsys):
    code, out, _ = run(capsys, "plotdata", "--quantity", "L2", "--n", "2", "3", "--steps", "11")
    assert code == 0 and out.startswith("# Figure 4")
    rows = parse_csv(out.split("\n", 1)[1])
    assert all(float(r["n=2"]) == 0.0 for r in rows)
    code, out, _ = run(capsys, "plotdata", "--quantity", "D2", "--n", "3", "--steps", "5",
                       "--format", "json")
    data = json.loads(out)
    assert data["quantity"] == "D2" and len(data["series"]["3"]) == 5


def test_verify_mutation_is_caught(monkeypatch, capsys):
    original = states.mixed_pair_fano

    def flipped(n, s):
        r = original(n, s).r.copy()
        r[2, 2] = -r[2, 2]
        return FanoMatrix(r)

    monkeypatch.setattr(states, "mixed_pair_fano", flipped)
    code, out, _ = run(capsys, "verify", "--grid-density", "1", "--starts", "16")
    assert code == 1
    assert "FAILED oracle-equivalence" in out


def test_verify_zero_tolerance_fails(capsys):
    code, out, _ = run(capsys, "verify", "--grid-density", "1", "--starts", "16", "--tolerance", "0")
    assert code == 1 and "FAILED" in out


def test_verify_small_grid_passes(capsys):
    code, out, _ = run(capsys, "verify", "--grid-density", "1", "--starts", "16")
    assert code == 0 and "checks passed" in out
