"""Command-line front end: run solves, sweep grids, run audit suites, plot.

Subcommands::

    minimax-lab run    --manifest PATH [--out DIR]
    minimax-lab sweep  --manifest PATH [--out DIR]
    minimax-lab verify --suite {nsc,nc,stationarity,all} [--fault NAME]
    minimax-lab report --in DIR [--out DIR] [--format svg]

Manifests are flat ``section.key = value`` text files (one dot of nesting,
``#`` comments).  A manifest fully determines its outputs: trace CSVs are
byte-identical across invocations, so the wall-clock column of the trace is
left empty (total wall time lives in the summary JSON instead).

Exit codes: 0 success, 1 audit failure, 2 usage/input error, 3 runtime abort.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

import numpy as np

from . import problems as pb
from . import solvers as sv
from . import stationarity as st
from . import verify as vf
from .core import MinimaxProblem, Regime, SolverConfig

__all__ = ["main", "parse_manifest", "cmd_run", "cmd_sweep", "cmd_verify", "cmd_report"]

EXIT_OK = 0
EXIT_AUDIT_FAIL = 1
EXIT_USAGE = 2
EXIT_ABORT = 3


class ManifestError(ValueError):
    """The manifest file is missing, unparsable, or inconsistent."""


# ---------------------------------------------------------------------------
# Manifest parsing
# ---------------------------------------------------------------------------


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    if "," in raw:
        try:
            return [float(p) for p in raw.split(",") if p.strip()]
        except ValueError:
            return [p.strip() for p in raw.split(",") if p.strip()]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def parse_manifest(path) -> dict:
    """Parse a flat ``section.key = value`` manifest into nested dicts."""
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    out: dict[str, dict] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ManifestError(f"{path}:{lineno}: expected 'section.key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key.count(".") != 1:
            raise ManifestError(
                f"{path}:{lineno}: key {key!r} must have exactly one dot"
            )
        section, name = key.split(".")
        out.setdefault(section, {})[name] = _parse_value(raw)
    if not out:
        raise ManifestError(f"{path}: empty manifest")
    return out


def _as_float_list(v) -> list[float]:
    if isinstance(v, list):
        return [float(x) for x in v]
    return [float(v)]


def _as_int_list(v) -> list[int]:
    return [int(x) for x in _as_float_list(v)]


# ---------------------------------------------------------------------------
# Problem / config construction
# ---------------------------------------------------------------------------


def build_problem(sec: dict) -> MinimaxProblem:
    pid = sec.get("id")
    if pid == "quadratic_nsc":
        a_diag = _as_float_list(sec.get("a_diag", [1.0, -3.0]))
        m = len(a_diag)
        b_scale = float(sec.get("b_scale", 1.0))
        return pb.make_quadratic_nsc(
            np.diag(a_diag),
            b_scale * np.eye(m),
            float(sec.get("mu", 1.0)),
            float(sec.get("radius", 10.0)),
        )
    if pid == "bilinear_box":
        return pb.make_bilinear_box(
            float(sec.get("scale", 1.0)), int(sec.get("dim", 1))
        )
    if pid == "robust_regression":
        X, t = pb.load_default_dataset()
        return pb.make_robust_regression(
            X,
            t,
            gamma=float(sec.get("gamma", 5.0)),
            perturb_radius=float(sec.get("perturb_radius", 0.1)),
        )
    raise ManifestError(f"unknown problem.id {pid!r}")


def _infer_regime(problem: MinimaxProblem, sigma: float) -> Regime:
    if problem.constants.mu > 0:
        return Regime.NC_SC_STOCH if sigma > 0 else Regime.NC_SC_DET
    return Regime.NC_C_STOCH if sigma > 0 else Regime.NC_C_DET


def build_config(
    manifest: dict,
    problem: MinimaxProblem,
    algorithm: str,
    sigma: float,
    epsilon: Optional[float],
    seed: int,
    stepsize_mult: float = 1.0,
) -> SolverConfig:
    sec = dict(manifest.get("config", {}))
    regime = (
        Regime(sec["regime"]) if "regime" in sec else _infer_regime(problem, sigma)
    )
    if sec.get("schedule") == "theorem":
        if epsilon is None:
            raise ManifestError("theorem schedule requires run.epsilon")
        cfg = sv.theorem_stepsizes(
            regime,
            problem.constants,
            epsilon,
            delta_phi_estimate=float(sec.get("delta_phi_estimate", 1.0)),
            delta_zero_estimate=float(sec.get("delta_zero_estimate", 0.0)),
            algorithm="gdmax" if algorithm in ("gdmax", "sgdmax") else "gda",
            sigma=sigma if sigma > 0 else None,
            seed=seed,
        )
        horizon = int(sec.get("horizon_T", cfg.horizon_T))
        return SolverConfig(
            eta_x=cfg.eta_x * stepsize_mult,
            eta_y=cfg.eta_y,
            horizon_T=horizon,
            batch_M=cfg.batch_M,
            zeta=cfg.zeta,
            inner_batch_M=cfg.inner_batch_M,
            seed=seed,
            regime=None if stepsize_mult > 1.0 else regime,
            record_stride=(
                int(sec["record_stride"]) if "record_stride" in sec else None
            ),
        )
    try:
        return SolverConfig(
            eta_x=float(sec["eta_x"]) * stepsize_mult,
            eta_y=float(sec["eta_y"]),
            horizon_T=int(sec["horizon_T"]),
            batch_M=int(sec.get("batch_M", 1)),
            zeta=float(sec["zeta"]) if "zeta" in sec else None,
            inner_batch_M=int(sec.get("inner_batch_M", 1)),
            seed=seed,
            regime=None,
            record_stride=(
                int(sec["record_stride"]) if "record_stride" in sec else None
            ),
        )
    except KeyError as exc:
        raise ManifestError(f"config section missing key {exc}") from exc


def _start_point(manifest: dict, problem: MinimaxProblem):
    run = manifest.get("run", {})
    if "x0" in run:
        x0 = np.array(_as_float_list(run["x0"]))
    else:
        x0 = np.ones(problem.dim_x)
    if "y0" in run:
        y0 = np.array(_as_float_list(run["y0"]))
    else:
        y0 = problem.constraint.project(np.ones(problem.dim_y))
    return x0, y0


def _execute(problem, algorithm, config, sigma, x0, y0):
    if algorithm == "gda":
        return sv.run_gda(problem, config, x0, y0)
    if algorithm == "sgda":
        return sv.run_sgda(pb.add_gaussian_noise(problem, sigma), config, x0, y0)
    if algorithm == "gdmax":
        return sv.run_gdmax(problem, config, x0, y0)
    if algorithm == "sgdmax":
        return sv.run_sgdmax(pb.add_gaussian_noise(problem, sigma), config, x0, y0)
    raise ManifestError(f"unknown algorithm {algorithm!r}")


# ---------------------------------------------------------------------------
# Trace / summary serialization
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if v is None:
        return ""
    f = float(v)
    if math.isnan(f):
        return ""
    return repr(f)


def write_trace_csv(path, trace, problem) -> None:
    """Write one trace in the pinned CSV schema.

    Vector iterates appear in full only for block dimensions <= 8; larger
    blocks are reduced to their norms.  Diagnostics that were not computed
    are left empty, as is the per-row wall-clock column (kept empty so that
    identical manifests produce byte-identical files).
    """
    m, n = problem.dim_x, problem.dim_y
    x_cols = [f"x{i}" for i in range(m)] if m <= 8 else ["x_norm"]
    y_cols = [f"y{i}" for i in range(n)] if n <= 8 else ["y_norm"]
    header = (
        ["t"]
        + x_cols
        + y_cols
        + [
            "f",
            "grad_x_norm",
            "grad_y_norm",
            "phi",
            "grad_phi_norm",
            "moreau_grad_norm",
            "delta",
            "gap",
            "wall_ms",
        ]
    )
    diag = trace.diagnostics

    def dval(key, k):
        arr = diag.get(key)
        if arr is None:
            return None
        return arr[k]

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for k in range(len(trace.ts)):
            if m <= 8:
                xs = [_fmt(v) for v in trace.xs[k]]
            else:
                xs = [_fmt(np.linalg.norm(trace.xs[k]))]
            if n <= 8:
                ys = [_fmt(v) for v in trace.ys[k]]
            else:
                ys = [_fmt(np.linalg.norm(trace.ys[k]))]
            w.writerow(
                [str(int(trace.ts[k]))]
                + xs
                + ys
                + [
                    _fmt(trace.f_vals[k]),
                    _fmt(trace.grad_x_norms[k]),
                    _fmt(trace.grad_y_norms[k]),
                    _fmt(dval("phi", k)),
                    _fmt(dval("grad_phi_norm", k)),
                    _fmt(dval("moreau_grad_norm", k)),
                    _fmt(dval("delta", k)),
                    _fmt(dval("gap", k)),
                    "",  # wall_ms: omitted for byte-determinism
                ]
            )


def _nanmin(arr) -> Optional[float]:
    if arr is None:
        return None
    finite = arr[np.isfinite(arr)]
    if finite.size == 0:
        return None
    return float(np.min(finite))


def _iters_to_epsilon(trace, epsilon: Optional[float]) -> Optional[int]:
    """First recorded iteration whose stationarity measure is <= epsilon."""
    if epsilon is None:
        return None
    for key in ("grad_phi_norm", "moreau_grad_norm"):
        arr = trace.diagnostics.get(key)
        if arr is None:
            continue
        hits = np.nonzero(np.nan_to_num(arr, nan=np.inf) <= epsilon)[0]
        if hits.size:
            return int(trace.ts[hits[0]])
        return None
    return None


def _config_json(config: SolverConfig) -> dict:
    return {
        "eta_x": config.eta_x,
        "eta_y": config.eta_y,
        "horizon_T": config.horizon_T,
        "batch_M": config.batch_M,
        "zeta": config.zeta,
        "inner_batch_M": config.inner_batch_M,
        "seed": config.seed,
        "regime": config.regime.value if config.regime else None,
        "record_stride": config.record_stride,
    }


def write_summary_json(path, trace, problem, algorithm, epsilon) -> None:
    summary = {
        "problem": problem.name,
        "algorithm": algorithm,
        "config": _config_json(trace.config),
        "seed": trace.config.seed,
        "min_grad_phi": _nanmin(trace.diagnostics.get("grad_phi_norm")),
        "min_moreau_grad": _nanmin(trace.diagnostics.get("moreau_grad_norm")),
        "iters_to_epsilon": _iters_to_epsilon(trace, epsilon),
        "selected_index": trace.selected_index,
        "wall_ms_total": trace.wall_ms_total,
    }
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _diagnostic_kinds(problem: MinimaxProblem) -> tuple[str, ...]:
    gt = problem.ground_truth
    kinds = []
    if gt is not None and gt.phi is not None:
        kinds += ["phi", "gap"]
    if problem.constants.mu > 0 and gt is not None and gt.grad_phi is not None:
        kinds.append("grad_phi")
    if (gt is not None and gt.moreau_grad is not None) or (
        problem.constants.mu == 0 and problem.dim_x == 1
        and gt is not None and gt.phi is not None
    ):
        kinds.append("moreau_grad")
    if problem.constants.mu > 0 and gt is not None and gt.y_star is not None:
        kinds.append("delta")
    return tuple(kinds)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _run_one_seed(manifest, problem, algorithm, sigma, epsilon, seed, out_dir):
    config = build_config(manifest, problem, algorithm, sigma, epsilon, seed)
    x0, y0 = _start_point(manifest, problem)
    trace = _execute(problem, algorithm, config, sigma, x0, y0)
    kinds = _diagnostic_kinds(problem)
    if kinds:
        # at most ~200 diagnostic evaluations per run; each may be an inner solve
        stride = max(1, len(trace.ts) // 200)
        st.attach_diagnostics(trace, problem, which=kinds, stride=stride)
    sv.select_output(trace, np.random.default_rng(seed))
    write_trace_csv(out_dir / f"trace_seed{seed}.csv", trace, problem)
    write_summary_json(
        out_dir / f"summary_seed{seed}.json", trace, problem, algorithm, epsilon
    )
    return trace


def cmd_run(manifest_path, out_dir) -> int:
    try:
        manifest = parse_manifest(manifest_path)
        problem = build_problem(manifest.get("problem", {}))
        run = manifest.get("run", {})
        algorithm = manifest.get("algorithm", {}).get("name", "gda")
        sigma = float(run.get("sigma", 0.0))
        epsilon = float(run["epsilon"]) if "epsilon" in run else None
        seeds = _as_int_list(run.get("seeds", [0]))
        out_dir = Path(out_dir if out_dir else run.get("output_dir", "."))
    except (ManifestError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir.mkdir(parents=True, exist_ok=True)
    aborted = False
    for seed in seeds:
        try:
            trace = _run_one_seed(
                manifest, problem, algorithm, sigma, epsilon, seed, out_dir
            )
        except (ManifestError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if trace.aborted:
            print(
                f"abort: seed {seed} produced a non-finite iterate at "
                f"t={trace.abort_index}; partial trace written",
                file=sys.stderr,
            )
            aborted = True
    return EXIT_ABORT if aborted else EXIT_OK


def certified_iters_nsc(trace, problem, epsilon: float) -> Optional[int]:
    """Smallest recorded prefix T whose audited rate bound drops to epsilon^2.

    Uses the realized primal decrease up to T (closed-form primal values on
    the recorded grid), so the returned count is certified by the same bound
    the rate audit checks.
    """
    gt = problem.ground_truth
    if gt is None or gt.phi is None or problem.constants.mu <= 0:
        return None
    kap = problem.constants.kappa
    ell = problem.constants.ell
    D = problem.constants.diameter_D
    eps2 = epsilon * epsilon
    phi0 = float(gt.phi(trace.xs[0]))
    best = math.inf
    for k in range(1, len(trace.ts)):
        best = min(best, float(gt.phi(trace.xs[k])))
        T = int(trace.ts[k])
        decrease = max(0.0, phi0 - best)
        bound = (128.0 * kap**2 * ell * decrease + 5.0 * kap * ell**2 * D * D) / (
            T + 1
        )
        if bound <= eps2:
            return T
    return None


def _boundary_hit(trace, problem) -> bool:
    """True if any recorded ascent iterate touches the constraint boundary."""
    c = problem.constraint
    tol = 1e-9
    if hasattr(c, "lo") and hasattr(c, "hi"):
        return bool(
            np.any(np.abs(trace.ys - c.lo) <= tol)
            or np.any(np.abs(trace.ys - c.hi) <= tol)
        )
    if hasattr(c, "radius") and hasattr(c, "center"):
        norms = np.linalg.norm(trace.ys - c.center, axis=1)
        return bool(np.any(np.abs(norms - c.radius) <= tol))
    return False


def _sweep_point(manifest, problem, algorithm, point):
    epsilon, sigma, seed, mult = point
    config = build_config(
        manifest, problem, algorithm, sigma, epsilon, seed, stepsize_mult=mult
    )
    x0, y0 = _start_point(manifest, problem)
    trace = _execute(problem, algorithm, config, sigma, x0, y0)
    kinds = _diagnostic_kinds(problem)
    if kinds:
        stride = max(1, len(trace.ts) // 200)
        st.attach_diagnostics(trace, problem, which=kinds, stride=stride)
    row = {
        "epsilon": epsilon if epsilon is not None else "",
        "sigma": sigma,
        "seed": seed,
        "stepsize_mult": mult,
        "min_grad_phi": _nanmin(trace.diagnostics.get("grad_phi_norm")),
        "min_moreau_grad": _nanmin(trace.diagnostics.get("moreau_grad_norm")),
        "iters_to_epsilon": (
            certified_iters_nsc(trace, problem, epsilon)
            if epsilon is not None and problem.constants.mu > 0
            else _iters_to_epsilon(trace, epsilon)
        ),
        "diverged": bool(trace.aborted or _boundary_hit(trace, problem)),
    }
    return row


def cmd_sweep(manifest_path, out_dir) -> int:
    try:
        manifest = parse_manifest(manifest_path)
        problem = build_problem(manifest.get("problem", {}))
        algorithm = manifest.get("algorithm", {}).get("name", "gda")
        grid = manifest.get("sweep", {})
        run = manifest.get("run", {})
        epsilons = (
            _as_float_list(grid["epsilon"])
            if "epsilon" in grid
            else [float(run["epsilon"])] if "epsilon" in run else [None]
        )
        sigmas = _as_float_list(grid.get("sigma", run.get("sigma", 0.0)))
        seeds = _as_int_list(grid.get("seeds", run.get("seeds", [0])))
        mults = _as_float_list(grid.get("stepsize_mult", 1.0))
        out_dir = Path(out_dir if out_dir else run.get("output_dir", "."))
    except (ManifestError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out_dir.mkdir(parents=True, exist_ok=True)
    points = [
        (e, s, sd, m)
        for e in epsilons
        for s in sigmas
        for sd in seeds
        for m in mults
    ]
    workers = int(os.environ.get("MINIMAX_LAB_THREADS", "0")) or min(8, len(points))
    try:
        if workers > 1 and len(points) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(
                    pool.map(
                        lambda pt: _sweep_point(manifest, problem, algorithm, pt),
                        points,
                    )
                )
        else:
            rows = [_sweep_point(manifest, problem, algorithm, pt) for pt in points]
    except (ManifestError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cols = [
        "epsilon",
        "sigma",
        "seed",
        "stepsize_mult",
        "min_grad_phi",
        "min_moreau_grad",
        "iters_to_epsilon",
        "diverged",
    ]
    with open(out_dir / "sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in rows:
            w.writerow(
                [
                    "" if row[c] is None else
                    (repr(float(row[c])) if isinstance(row[c], float) else row[c])
                    for c in cols
                ]
            )
    return EXIT_OK


def cmd_verify(suite: str, fault: Optional[str] = None) -> int:
    try:
        results = vf.run_suite(suite, fault=fault)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    for res in results:
        print(str(res))
    return EXIT_OK if all(r.passed for r in results) else EXIT_AUDIT_FAIL


# ---------------------------------------------------------------------------
# Report generation
# ---------------------------------------------------------------------------


def _read_trace_series(path):
    """(t, measure) series from a trace CSV; skips malformed rows."""
    ts, vals = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "t" not in reader.fieldnames:
            raise ValueError("missing header")
        for col in ("grad_phi_norm", "moreau_grad_norm", "grad_x_norm"):
            if col in reader.fieldnames:
                measure = col
                break
        else:
            raise ValueError("no stationarity column")
        for lineno, row in enumerate(reader, start=2):
            try:
                t = int(row["t"])
                raw = row.get(measure, "")
                if raw == "" or raw is None:
                    continue
                v = float(raw)
            except (TypeError, ValueError):
                print(
                    f"warning: {path}: skipping malformed row {lineno}",
                    file=sys.stderr,
                )
                continue
            ts.append(t)
            vals.append(v)
    return np.array(ts), np.array(vals), measure


def cmd_report(in_dir, out_dir=None, fmt: str = "svg") -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    in_dir = Path(in_dir)
    if not in_dir.is_dir():
        print(f"error: not a directory: {in_dir}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(out_dir) if out_dir else in_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    traces = sorted(in_dir.glob("trace_*.csv"))
    sweeps = sorted(in_dir.glob("sweep*.csv"))
    if not traces and not sweeps:
        print(f"error: no trace or sweep CSVs in {in_dir}", file=sys.stderr)
        return EXIT_USAGE

    index_lines = ["# Run report", ""]
    for path in traces:
        try:
            ts, vals, measure = _read_trace_series(path)
        except (ValueError, OSError) as exc:
            print(f"warning: skipping {path.name}: {exc}", file=sys.stderr)
            continue
        if ts.size == 0:
            print(f"warning: skipping {path.name}: no plottable rows", file=sys.stderr)
            continue
        fig, ax = plt.subplots(figsize=(6, 4))
        positive = vals > 0
        if np.any(positive):
            ax.semilogy(ts[positive], vals[positive], lw=1.2)
        else:
            ax.plot(ts, vals, lw=1.2)
        ax.set_xlabel("iteration t")
        ax.set_ylabel(measure)
        ax.set_title(path.stem)
        fig.tight_layout()
        svg = out_dir / f"{path.stem}.{fmt}"
        fig.savefig(svg)
        plt.close(fig)
        index_lines.append(f"- [{path.stem}]({svg.name}) — convergence of {measure}")

    for path in sweeps:
        eps, iters = [], []
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.DictReader(fh), start=2):
                try:
                    e = float(row["epsilon"])
                    it = float(row["iters_to_epsilon"])
                except (TypeError, ValueError, KeyError):
                    continue
                eps.append(e)
                iters.append(it)
        if len(set(eps)) < 2:
            continue
        eps_arr = np.array(eps)
        it_arr = np.array(iters)
        # mean iterations per epsilon, least-squares slope in log-log space
        uniq = np.unique(eps_arr)
        means = np.array([it_arr[eps_arr == e].mean() for e in uniq])
        slope = float(np.polyfit(np.log(uniq), np.log(means), 1)[0])
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.loglog(uniq, means, "o-", lw=1.2)
        ax.set_xlabel("epsilon")
        ax.set_ylabel("iterations to epsilon")
        ax.set_title(path.stem)
        ax.annotate(
            f"log-log slope = {slope:.2f}",
            xy=(0.05, 0.05),
            xycoords="axes fraction",
        )
        fig.tight_layout()
        svg = out_dir / f"{path.stem}_scaling.{fmt}"
        fig.savefig(svg)
        plt.close(fig)
        index_lines.append(
            f"- [{path.stem} scaling]({svg.name}) — fitted slope {slope:.2f}"
        )

    (out_dir / "index.md").write_text("\n".join(index_lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="minimax-lab",
        description="Minimax solver benchmark harness with bound audits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the solves described by a manifest")
    p_run.add_argument("--manifest", required=True)
    p_run.add_argument("--out", default=None)

    p_sweep = sub.add_parser("sweep", help="run a manifest's parameter grid")
    p_sweep.add_argument("--manifest", required=True)
    p_sweep.add_argument("--out", default=None)

    p_verify = sub.add_parser("verify", help="run a named audit suite")
    p_verify.add_argument(
        "--suite", required=True, help="one of nsc, nc, stationarity, all"
    )
    p_verify.add_argument("--fault", default=None, help="named fault fixture")

    p_report = sub.add_parser("report", help="plot traces and sweeps from a directory")
    p_report.add_argument("--in", dest="in_dir", required=True)
    p_report.add_argument("--out", default=None)
    p_report.add_argument("--format", default="svg", choices=["svg", "csv"])

    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args.manifest, args.out)
    if args.command == "sweep":
        return cmd_sweep(args.manifest, args.out)
    if args.command == "verify":
        return cmd_verify(args.suite, args.fault)
    if args.command == "report":
        return cmd_report(args.in_dir, args.out, args.format)
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
