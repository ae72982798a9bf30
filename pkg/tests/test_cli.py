import csv
import json

import pytest

from minimax_lab.cli import (
    EXIT_ABORT,
    EXIT_AUDIT_FAIL,
    EXIT_OK,
    EXIT_USAGE,
    ManifestError,
    main,
    parse_manifest,
)

QUAD_MANIFEST = """
# strongly concave quadratic, reference schedule
problem.id = quadratic_nsc
problem.a_diag = 1,-3
problem.mu = 1
problem.radius = 10
algorithm.name = gda
config.schedule = theorem
config.delta_phi_estimate = 1.0
config.horizon_T = 50
run.epsilon = 0.2
run.seeds = 0
run.x0 = 1,1
run.y0 = 1,1
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


# ---------------------------------------------------------------------------
# Manifest parsing
# ---------------------------------------------------------------------------


def test_parse_manifest_roundtrip(tmp_path):
    m = parse_manifest(_write(tmp_path, "m.manifest", QUAD_MANIFEST))
    assert m["problem"]["id"] == "quadratic_nsc"
    assert m["problem"]["a_diag"] == [1.0, -3.0]
    assert m["config"]["horizon_T"] == 50
    assert m["run"]["epsilon"] == 0.2


def test_parse_manifest_errors(tmp_path):
    with pytest.raises(ManifestError):
        parse_manifest(tmp_path / "missing.manifest")
    with pytest.raises(ManifestError):
        parse_manifest(_write(tmp_path, "a", "just some text\n"))
    with pytest.raises(ManifestError):
        parse_manifest(_write(tmp_path, "b", "a.b.c = 1\n"))
    with pytest.raises(ManifestError):
        parse_manifest(_write(tmp_path, "c", "# only comments\n"))


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def test_run_produces_trace_and_summary(tmp_path):
    manifest = _write(tmp_path, "m.manifest", QUAD_MANIFEST)
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(manifest), "--out", str(out)]) == EXIT_OK
    rows = list(csv.reader(open(out / "trace_seed0.csv")))
    assert rows[0] == [
        "t", "x0", "x1", "y0", "y1", "f", "grad_x_norm", "grad_y_norm",
        "phi", "grad_phi_norm", "moreau_grad_norm", "delta", "gap", "wall_ms",
    ]
    assert len(rows) == 52  # header + horizon 50 + initial point
    summary = json.load(open(out / "summary_seed0.json"))
    assert summary["problem"] == "quadratic_nsc"
    assert summary["algorithm"] == "gda"
    assert summary["seed"] == 0
    assert summary["min_grad_phi"] is not None
    assert 1 <= summary["selected_index"] <= 50


def test_run_zero_horizon_single_row(tmp_path):
    text = QUAD_MANIFEST.replace("config.horizon_T = 50", "config.horizon_T = 0")
    manifest = _write(tmp_path, "m.manifest", text)
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(manifest), "--out", str(out)]) == EXIT_OK
    rows = list(csv.reader(open(out / "trace_seed0.csv")))
    assert len(rows) == 2
    assert rows[1][0] == "0"


def test_run_byte_identical(tmp_path):
    manifest = _write(tmp_path, "m.manifest", QUAD_MANIFEST)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    main(["run", "--manifest", str(manifest), "--out", str(out1)])
    main(["run", "--manifest", str(manifest), "--out", str(out2)])
    assert (out1 / "trace_seed0.csv").read_bytes() == (
        out2 / "trace_seed0.csv"
    ).read_bytes()


def test_run_bad_manifest_usage_error(tmp_path):
    manifest = _write(tmp_path, "bad.manifest", "problem.id = no_such_problem\n")
    assert (
        main(["run", "--manifest", str(manifest), "--out", str(tmp_path / "o")])
        == EXIT_USAGE
    )


def test_run_divergent_config_exits_abort(tmp_path):
    text = """
problem.id = quadratic_nsc
algorithm.name = gda
config.eta_x = 50
config.eta_y = 60
config.horizon_T = 5000
run.seeds = 0
run.x0 = 1,1
run.y0 = 1,1
"""
    manifest = _write(tmp_path, "m.manifest", text)
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(manifest), "--out", str(out)]) == EXIT_ABORT
    # the partial trace is still flushed
    assert (out / "trace_seed0.csv").is_file()


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_suite_exit_codes(capsys):
    assert main(["verify", "--suite", "stationarity"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert main(["verify", "--suite", "nsc", "--fault", "stepsize10x"]) == EXIT_AUDIT_FAIL
    out = capsys.readouterr().out
    assert "FAIL nsc_delta_recursion" in out
    assert main(["verify", "--suite", "bogus"]) == EXIT_USAGE


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def test_sweep_singleton_matches_run(tmp_path):
    manifest = _write(tmp_path, "m.manifest", QUAD_MANIFEST)
    out_run = tmp_path / "run"
    out_sweep = tmp_path / "sweep"
    main(["run", "--manifest", str(manifest), "--out", str(out_run)])
    assert (
        main(["sweep", "--manifest", str(manifest), "--out", str(out_sweep)])
        == EXIT_OK
    )
    rows = list(csv.DictReader(open(out_sweep / "sweep.csv")))
    assert len(rows) == 1
    summary = json.load(open(out_run / "summary_seed0.json"))
    assert float(rows[0]["min_grad_phi"]) == pytest.approx(summary["min_grad_phi"])
    assert rows[0]["diverged"] == "False"


def test_sweep_flags_divergent_multiplier(tmp_path):
    text = """
problem.id = quadratic_nsc
algorithm.name = gda
config.eta_x = 0.001
config.eta_y = 0.2
config.horizon_T = 500
run.x0 = 1,1
run.y0 = 1,1
sweep.stepsize_mult = 1,5000
sweep.seeds = 0
"""
    manifest = _write(tmp_path, "m.manifest", text)
    out = tmp_path / "out"
    assert main(["sweep", "--manifest", str(manifest), "--out", str(out)]) == EXIT_OK
    rows = {r["stepsize_mult"]: r for r in csv.DictReader(open(out / "sweep.csv"))}
    assert rows["1.0"]["diverged"] == "False"
    assert rows["5000.0"]["diverged"] == "True"


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def test_report_generates_svg_and_index(tmp_path):
    manifest = _write(tmp_path, "m.manifest", QUAD_MANIFEST)
    out = tmp_path / "out"
    main(["run", "--manifest", str(manifest), "--out", str(out)])
    assert main(["report", "--in", str(out)]) == EXIT_OK
    assert (out / "trace_seed0.svg").is_file()
    index = (out / "index.md").read_text()
    assert "trace_seed0" in index


def test_report_empty_dir_usage_error(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["report", "--in", str(empty)]) == EXIT_USAGE
    assert main(["report", "--in", str(tmp_path / "nope")]) == EXIT_USAGE


def test_report_skips_malformed_rows(tmp_path, capsys):
    d = tmp_path / "dir"
    d.mkdir()
    (d / "trace_bad.csv").write_text(
        "t,x0,y0,f,grad_x_norm,grad_y_norm,phi,grad_phi_norm,"
        "moreau_grad_norm,delta,gap,wall_ms\n"
        "0,1.0,0.0,0.0,1.0,1.0,,1.0,,,,\n"
        "oops,not,a,row,,,,,,,,\n"
        "2,0.9,0.1,0.0,0.9,0.9,,0.9,,,,\n"
    )
    assert main(["report", "--in", str(d)]) == EXIT_OK
    err = capsys.readouterr().err
    assert "malformed" in err
    assert (d / "trace_bad.svg").is_file()
