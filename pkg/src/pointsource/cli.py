"""Command-line driver: simulate, identify, diagnose, reproduce-example.

Commands
--------
simulate          generate sensor series for a scenario JSON, with seeded
                  Gaussian noise, writing sensors.csv plus a ground-truth
                  sidecar for later evaluation.
identify          run background subtraction and the 1D or multi-D
                  identification pipeline on a sensor CSV; writes a JSON
                  report, appending error metrics when ground truth is
                  available.
diagnose          run the identifiability checks (sensor/source
                  interleaving on the line; general position, visibility
                  determinant and sensor-count sufficiency in the plane
                  and space) and aggregate a verdict.
reproduce-example evaluate one of the built-in non-uniqueness
                  configurations (1: opposite-sign mirror pair, 2: paired
                  diagonal sources seen by six axis sensors) and write the
                  probe/lambda discrepancy table.

Exit codes: 0 success, 2 scenario validation, 3 forward-solver failure,
4 identification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import forward, identify1d, identifynd, laplace, model

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IDENTIFY = 4

REPORT_SCHEMA_VERSION = 1


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonify(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _simulate_traces(scenario: model.Scenario, include_sources: bool,
                     num_cells: int) -> np.ndarray:
    """Clean sensor series, shape (num_samples, s)."""
    dom = scenario.domain
    if isinstance(dom, model.FreeSpace):
        if not include_sources:
            return np.zeros((scenario.grid.num_samples, len(scenario.sensors)))
        cols = [forward.free_space_response(scenario.sources, b, scenario.grid,
                                            n=dom.n, lambda0=dom.lambda0)
                for b in scenario.sensors]
        return np.column_stack(cols)
    run = scenario if include_sources else \
        model.Scenario(domain=dom, coefficients=scenario.coefficients,
                       sources=(), sensors=scenario.sensors,
                       grid=scenario.grid, f0=scenario.f0)
    sol = forward.crank_nicolson_1d(run, num_cells=num_cells,
                                    store_field=False)
    return sol.traces


def cmd_simulate(args) -> int:
    scenario = model.load_scenario(args.scenario)
    violations = model.validate_scenario(scenario)
    if violations:
        for v in violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        traces = _simulate_traces(scenario, include_sources=True,
                                  num_cells=args.cells)
    except (ValueError, np.linalg.LinAlgError) as exc:
        print(f"solver: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    sigma = scenario.noise_sigma if args.noise is None else args.noise
    seed = scenario.seed if args.seed is None else args.seed
    if sigma > 0.0:
        rng = np.random.default_rng(seed)
        traces = traces + sigma * rng.standard_normal(traces.shape)
    model.write_sensor_csv(out / "sensors.csv", scenario.grid.times(), traces)
    truth = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "sources": [{"location": s.location.tolist(),
                     "intensity": s.intensity_samples(scenario.grid).tolist()}
                    for s in scenario.sources],
        "noise": {"sigma": sigma, "seed": seed},
    }
    _write_json(out / "ground_truth.json", truth)
    print(f"wrote {out / 'sensors.csv'} and {out / 'ground_truth.json'}")
    return EXIT_OK


def _lambda_window(args, scenario: model.Scenario, delta_hint: float
                   ) -> tuple[np.ndarray, tuple[float, float]]:
    grid = scenario.grid
    if args.lambda_min is not None and args.lambda_max is not None:
        lo, hi = args.lambda_min, args.lambda_max
        return np.geomspace(lo, hi, args.lambda_points), (lo, hi)
    plan = laplace.suggest_lambda_grid(grid, delta_hint,
                                       num_points=args.lambda_points)
    return plan.lambdas, (plan.lambda_min, plan.lambda_max)


def _evaluation_block(scenario: model.Scenario, x_hat: np.ndarray,
                      q_hat, truth_path: Path) -> dict:
    if not truth_path.exists():
        return {}
    with open(truth_path) as fh:
        truth = json.load(fh)
    x_true = np.asarray(truth["sources"][0]["location"], dtype=float)
    out = {"x_error": float(np.linalg.norm(np.atleast_1d(x_hat) - x_true))}
    if q_hat is not None:
        q_true = np.asarray(truth["sources"][0]["intensity"], dtype=float)
        t = scenario.grid.times()
        win = t >= 0.1 * scenario.grid.horizon
        denom = float(np.linalg.norm(q_true[win]))
        if denom > 0.0:
            out["q_rel_l2"] = float(
                np.linalg.norm(np.asarray(q_hat)[win] - q_true[win]) / denom)
    return out


def _identify_1d(args, scenario, psi_tilde, out: Path) -> dict:
    dom = scenario.domain
    sensors = np.array([float(p[0]) for p in scenario.sensors])
    order = np.argsort(sensors)
    if sensors.size < 2:
        raise ValueError("1D identification needs two sensors")
    i1, i2 = order[0], order[-1]
    b1, b2 = sensors[i1], sensors[i2]
    coeffs = scenario.coefficients
    if coeffs is None:
        coeffs = model.CoefficientField1D.constant(1.0, 0.0, 0.0,
                                                   interval=(b1, b2))
    branch = "interior"
    warnings: list[str] = []
    if isinstance(dom, model.Interval1D):
        left_refl = b1 == dom.a and isinstance(dom.bc_left, model.Robin)
        right_refl = b2 == dom.b and isinstance(dom.bc_right, model.Robin)
        if left_refl and right_refl:
            # both image factors cancel in the transform ratio
            warnings.append("both sensors on reflecting boundaries; "
                            "interior formula used (image factors cancel)")
        elif left_refl:
            branch = "left_boundary"
        elif right_refl:
            branch = "right_boundary"
        elif b1 == dom.a or b2 == dom.b:
            raise ValueError(
                "a sensor sits on an absorbing (Dirichlet) boundary and "
                "measures zero; move it inside or use a derivative boundary")
    # the bracket width is the natural gap scale; sensor-source gaps sit
    # within a factor 2 of it for any bracketed source
    lambdas, window = _lambda_window(args, scenario, delta_hint=b2 - b1)
    phi1 = laplace.laplace_grid(psi_tilde[:, i1], scenario.grid, lambdas,
                                f"sensor_{i1}")
    phi2 = laplace.laplace_grid(psi_tilde[:, i2], scenario.grid, lambdas,
                                f"sensor_{i2}")
    fit = identify1d.locate_source_1d(phi1, phi2, coeffs, b1, b2,
                                      branch=branch)
    # deconvolve the sensor closer to the recovered source
    idx = i1 if abs(fit.x1_hat - b1) <= abs(fit.x1_hat - b2) else i2
    eps = "auto" if args.epsilon == "auto" else float(args.epsilon)
    intensity = identify1d.recover_intensity_1d(
        psi_tilde[:, idx], scenario.grid, coeffs, fit.x1_hat,
        float(sensors[idx]), eps=eps)
    alternation = identify1d.alternation_findings(
        [fit.x1_hat], sensors.tolist())
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "dimension": 1,
        "x1_hat": fit.x1_hat,
        "branch": fit.branch,
        "offset_hat": fit.offset.offset,
        "offset_residual": fit.offset.residual,
        "admissible": fit.admissible,
        "travel_total": fit.travel_total,
        "per_lambda": [
            {"lam": float(fit.lambdas[k]),
             "x1": float(fit.x1_per_lambda[k]),
             "weight": float(fit.weights[k]),
             "used": bool(fit.used[k])}
            for k in range(fit.lambdas.size)],
        "lambda_window": list(window),
        "intensity": {
            "sensor_index": int(idx),
            "eps": intensity.deconvolution.eps,
            "residual_norm": intensity.deconvolution.residual_norm,
            "exact_amplitude": intensity.exact_amplitude,
            "q_hat": intensity.q.tolist(),
        },
        "diagnostics": list(fit.diagnostics) + warnings,
        "alternation": alternation,
    }
    report["evaluation"] = _evaluation_block(
        scenario, np.array([fit.x1_hat]), intensity.q,
        out / "ground_truth.json")
    return report


def _identify_nd(args, scenario, psi_tilde, out: Path) -> dict:
    dom = scenario.domain
    n = dom.n
    records = [model.SensorRecord(location=p, samples=psi_tilde[:, j],
                                  grid=scenario.grid)
               for j, p in enumerate(scenario.sensors)]
    grid = scenario.grid
    if args.lambda_min is not None and args.lambda_max is not None:
        window = (args.lambda_min, args.lambda_max)
    else:
        window = (max(4.0 / grid.horizon ** 2, 4.0), 0.05 / grid.tau)
    rec = identifynd.locate_source_nd(records, n=n, lam_window=window,
                                      lambda0=getattr(dom, "lambda0", 0.0),
                                      noise_sigma=scenario.noise_sigma)
    eps = "auto" if args.epsilon == "auto" else float(args.epsilon)
    intensity = identifynd.recover_intensity_nd(
        records, rec.alpha_hat, n=n, eps=eps,
        lambda0=getattr(dom, "lambda0", 0.0))
    drift = scenario.coefficients \
        if isinstance(scenario.coefficients, model.DriftFieldND) else None
    visibility = identifynd.nearest_source_matrix(
        rec.x1_hat[None, :], scenario.sensor_points(), drift)
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "dimension": n,
        "x1_hat": rec.x1_hat.tolist(),
        "alpha_hat": rec.alpha_hat.tolist(),
        "d_matrix": rec.d_matrix.tolist(),
        "d_uncertainty": rec.d_uncertainty.tolist(),
        "degenerate": rec.degenerate,
        "general_position": rec.general_position,
        "anchor_pair": list(rec.anchor_pair) if rec.anchor_pair else None,
        "ladder": rec.ladder.tolist(),
        "lambda_window": list(window),
        "multilateration": None if rec.multilateration is None else {
            "residual_norm": rec.multilateration.residual_norm,
            "condition_number": rec.multilateration.condition_number,
            "per_sensor_residual":
                rec.multilateration.per_sensor_residual.tolist(),
        },
        "intensity": {
            "eps": intensity.deconvolutions[0].eps,
            "spread": intensity.spread,
            "q_hat": intensity.q.tolist(),
            "q_hat_per_sensor": intensity.per_sensor.tolist(),
        },
        "nearest_source_matrix": {
            "det": visibility.determinant,       # None: rectangular (r=1)
            "near_singular": visibility.near_singular,
        },
        "diagnostics": list(rec.diagnostics) + (
            [f"cross-sensor intensity spread {intensity.spread:.3g} above "
             f"0.2: distance estimates are suspect"]
            if intensity.spread > 0.2 else []),
    }
    report["evaluation"] = _evaluation_block(
        scenario, rec.x1_hat, intensity.q, out / "ground_truth.json")
    return report


def cmd_identify(args) -> int:
    scenario = model.load_scenario(args.scenario)
    violations = model.validate_scenario(scenario)
    if violations:
        for v in violations:
            print(f"validation: {v}", file=sys.stderr)
        return EXIT_VALIDATION
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data_path = Path(args.data) if args.data else out / "sensors.csv"
    times, series = model.read_sensor_csv(data_path)
    if series.shape != (scenario.grid.num_samples, len(scenario.sensors)):
        print("validation: sensor CSV does not match the scenario "
              "(samples x sensors)", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        background = _simulate_traces(scenario, include_sources=False,
                                      num_cells=args.cells)
    except (ValueError, np.linalg.LinAlgError) as exc:
        print(f"solver (background): {exc}", file=sys.stderr)
        return EXIT_SOLVER
    psi_tilde = series - background
    try:
        if scenario.dimension == 1:
            report = _identify_1d(args, scenario, psi_tilde, out)
        else:
            report = _identify_nd(args, scenario, psi_tilde, out)
    except (ValueError, np.linalg.LinAlgError) as exc:
        print(f"identification: {exc}", file=sys.stderr)
        return EXIT_IDENTIFY
    _write_json(out / "report.json", report)
    if args.format == "csv" and "per_lambda" in report:
        with open(out / "report_per_lambda.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["lam", "x1", "weight", "used"])
            for row in report["per_lambda"]:
                w.writerow([f"{row['lam']:.17g}", f"{row['x1']:.17g}",
                            f"{row['weight']:.17g}", row["used"]])
    print(f"wrote {out / 'report.json'}")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    scenario = model.load_scenario(args.scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    n = scenario.dimension
    checks: dict = {"schema_version": REPORT_SCHEMA_VERSION, "dimension": n}
    obstructions = []
    if n == 1:
        findings = identify1d.alternation_findings(
            [float(s.location[0]) for s in scenario.sources],
            [float(p[0]) for p in scenario.sensors])
        checks["alternation"] = findings
        for f in findings:
            obstructions.append(f"interleaving failure: {f['code']}")
    else:
        pts = scenario.sensor_points()
        if pts.shape[0] >= n + 1:
            ok, witness = identifynd.in_general_position(pts, n)
        else:
            ok, witness = True, None   # no triple/quadruple to test
        checks["general_position"] = {
            "ok": ok, "witness": list(witness) if witness else None}
        if not ok:
            obstructions.append("sensors fail general position")
        drift = scenario.coefficients \
            if isinstance(scenario.coefficients, model.DriftFieldND) else None
        nsm = identifynd.nearest_source_matrix(scenario.source_points(), pts,
                                               drift)
        checks["nearest_source_matrix"] = {
            "det": nsm.determinant,
            "near_singular": nsm.near_singular,
        }
        if nsm.near_singular:
            obstructions.append("nearest-source visibility matrix is "
                                "numerically singular")
        r = len(scenario.sources)
        suff = identifynd.sensor_count_sufficient(r, pts.shape[0], n)
        checks["sensor_count"] = {"r": r, "s": int(pts.shape[0]),
                                  "sufficient": suff}
        if not suff:
            obstructions.append(
                f"{pts.shape[0]} sensors cannot pin down {r} constant "
                f"sources in dimension {n}")
    checks["verdict"] = "non_unique_or_underdetermined" if obstructions \
        else "no_obstruction_found"
    checks["obstructions"] = obstructions
    _write_json(out / "diagnostics.json", checks)
    print(f"verdict: {checks['verdict']}")
    for o in obstructions:
        print(f"  - {o}")
    print(f"wrote {out / 'diagnostics.json'}")
    return EXIT_OK


def cmd_reproduce_example(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lambdas = np.geomspace(args.lambda_min or 1.0, args.lambda_max or 100.0,
                           args.lambda_points) \
        if (args.lambda_min and args.lambda_max) else np.array([1.0, 10.0, 100.0])
    report = identifynd.nonuniqueness_discrepancy(
        args.which, a=args.a, m_dist=args.m, lambdas=lambdas)
    path = out / f"example{args.which}_discrepancy.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["probe", "lam", "discrepancy"])
        for i, p in enumerate(report.probes):
            for k, lam in enumerate(report.lambdas):
                w.writerow(["(" + " ".join(f"{c:.17g}" for c in p) + ")",
                            f"{lam:.17g}", f"{report.table[i, k]:.17g}"])
    summary = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "case": report.case,
        "max_discrepancy": report.max_discrepancy,
        "reference_magnitude": report.reference,
        "separation_ratio": report.reference / max(report.max_discrepancy,
                                                   1e-300),
    }
    _write_json(out / f"example{args.which}_summary.json", summary)
    print(f"max discrepancy {report.max_discrepancy:.3e} vs reference "
          f"{report.reference:.3e}")
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pointsource",
        description="Point-source localization in parabolic transport "
                    "models from sensor time series.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario_required=True):
        if scenario_required:
            p.add_argument("--scenario", required=True,
                           help="scenario JSON path")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--lambda-min", type=float, dest="lambda_min")
        p.add_argument("--lambda-max", type=float, dest="lambda_max")
        p.add_argument("--lambda-points", type=int, default=13,
                       dest="lambda_points")
        p.add_argument("--epsilon", default="auto",
                       help="regularization: 'auto' or a value")
        p.add_argument("--noise", type=float, default=None,
                       help="override scenario noise sigma")
        p.add_argument("--seed", type=int, default=None,
                       help="override scenario noise seed")
        p.add_argument("--cells", type=int, default=400,
                       help="finite-difference cells for interval domains")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p_sim = sub.add_parser("simulate", help="generate sensor data")
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_id = sub.add_parser("identify", help="recover source location and "
                                           "intensity")
    common(p_id)
    p_id.add_argument("--data", default=None,
                      help="sensor CSV (default <out>/sensors.csv)")
    p_id.set_defaults(func=cmd_identify)

    p_diag = sub.add_parser("diagnose", help="identifiability diagnostics")
    common(p_diag)
    p_diag.set_defaults(func=cmd_diagnose)

    p_rep = sub.add_parser("reproduce-example",
                           help="built-in non-uniqueness configurations")
    p_rep.add_argument("which", type=int, choices=(1, 2))
    p_rep.add_argument("--a", type=float, default=1.0,
                       help="source half-separation")
    p_rep.add_argument("--m", type=float, default=3.0, help="probe distance")
    common(p_rep, scenario_required=False)
    p_rep.set_defaults(func=cmd_reproduce_example)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
