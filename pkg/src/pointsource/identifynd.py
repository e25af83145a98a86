"""Multidimensional (n = 2, 3) single-source localization and diagnostics.

The localization pipeline turns transform ratios into distance geometry:

1. evaluate each sensor transform on an integer ladder alpha, alpha+1, ...
   of square roots of the transform parameter;
2. for each sensor pair, the log of the ratio-of-ratios across one ladder
   step equals the source-distance difference up to O(1/alpha); fitting
   the step values against the leading correction shape extrapolates them
   to their limit;
3. one pair with a large difference pins two absolute distances through
   the closed-form inversion of the ratio model; difference chains then
   propagate distances to every sensor;
4. the source is the least-squares intersection of the spheres around the
   sensors (linearized solve plus Gauss-Newton polish).

When all differences vanish the source is equidistant from the sensors
and is recovered directly as their circumcenter.

Also here: the geometric general-position check (no collinear triples /
coplanar quadruples of sensors), the nearest-source visibility matrix
with drift weighting and its determinant, sensor-count sufficiency for
constant-intensity multi-source recovery, and evaluators for the two
built-in non-uniqueness configurations used by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Union

import numpy as np

from .forward import duhamel_masses, resolvent_green
from .laplace import LaplaceSamples, laplace_grid, volterra_deconvolve
from .model import DriftFieldND, SensorRecord, sensor_source_distances

__all__ = [
    "RatioSeries",
    "transform_ratio",
    "DifferenceFit",
    "distance_difference_fit",
    "pairwise_distance_solve",
    "circumcenter",
    "in_general_position",
    "MultilaterationResult",
    "multilaterate",
    "RecoveryND",
    "locate_source_nd",
    "IntensityFitND",
    "recover_intensity_nd",
    "NearestSourceMatrix",
    "nearest_source_matrix",
    "sensor_count_sufficient",
    "DiscrepancyReport",
    "nonuniqueness_discrepancy",
]

TRUNCATION_GUARD = 1e-3


@dataclass(frozen=True, eq=False)
class RatioSeries:
    """Pointwise ratio Phi_j / Phi_i with propagated relative bounds."""

    lambdas: np.ndarray
    values: np.ndarray
    rel_bounds: np.ndarray


def transform_ratio(phi_j: LaplaceSamples, phi_i: LaplaceSamples) -> RatioSeries:
    """Ratio of two sensor transforms on a shared lambda grid."""
    if phi_j.lambdas.shape != phi_i.lambdas.shape or \
            not np.allclose(phi_j.lambdas, phi_i.lambdas, rtol=1e-12):
        raise ValueError("transforms must share the lambda grid")
    bad = np.abs(phi_i.values) <= phi_i.truncation
    if np.any(bad):
        k = int(np.nonzero(bad)[0][0])
        raise ValueError(
            f"denominator transform at lambda={phi_i.lambdas[k]:.6g} sits "
            f"below its truncation bound; shrink the lambda window")
    values = phi_j.values / phi_i.values
    rel = (phi_j.bounds / np.abs(np.where(phi_j.values == 0.0, 1.0,
                                          phi_j.values))
           + phi_i.bounds / np.abs(phi_i.values))
    return RatioSeries(lambdas=phi_j.lambdas, values=values, rel_bounds=rel)


@dataclass(frozen=True, eq=False)
class DifferenceFit:
    """Distance difference alpha_j - alpha_i extrapolated from a ladder."""

    d: float
    slope: float
    residual: float
    uncertainty: float
    alphas: np.ndarray
    steps: np.ndarray


def distance_difference_fit(alphas: np.ndarray, ratio: RatioSeries
                            ) -> DifferenceFit:
    """Extrapolate ladder step values to the distance difference.

    ``ratio`` must hold the pair ratio at lambda corresponding to each
    ladder entry (consecutive integers); ell(alpha) is the log of
    G(alpha)/G(alpha+1), whose limit is the source-distance difference.
    The distance prefactors cancel in the ratio of ratios, so for exact
    free-space data the steps are constant in alpha; the plane-case
    kernel correction decays like 1/(alpha*(alpha+1)), which is the
    fitted shape.
    """
    alphas = np.asarray(alphas, dtype=float)
    g = ratio.values
    if alphas.size != g.size:
        raise ValueError("ladder and ratio values must align")
    if np.any(np.diff(alphas) != 1.0):
        raise ValueError("ladder must consist of consecutive integers")
    if alphas.size - 1 < 3:
        raise ValueError("ladder must provide at least 3 steps")
    if np.any(g <= 0.0):
        raise ValueError("ratio values must be positive on the ladder")
    ell = np.log(g[:-1] / g[1:])
    a = alphas[:-1]
    # the leading correction of one ladder step scales as 1/(alpha*(alpha+1))
    design = np.column_stack([np.ones_like(a), 1.0 / (a * (a + 1.0))])
    rb = ratio.rel_bounds[:-1] + ratio.rel_bounds[1:]
    wts = 1.0 / (rb + 1e-12)
    wts /= wts.max()
    coef, *_ = np.linalg.lstsq(design * wts[:, None], ell * wts, rcond=None)
    fitted = design @ coef
    residual = float(np.sqrt(np.mean((ell - fitted) ** 2)))
    uncertainty = float(residual + np.median(rb))
    return DifferenceFit(d=float(coef[0]), slope=float(coef[1]),
                         residual=residual, uncertainty=uncertainty,
                         alphas=a, steps=ell)


def pairwise_distance_solve(n: int, g_value: float, d: float, sqrt_lam: float
                            ) -> tuple[float, float]:
    """Invert the leading-order ratio model for two absolute distances.

    Given the ratio G = Phi_j/Phi_i at one transform parameter and the
    difference d = alpha_j - alpha_i, the de-exponentiated ratio
    rho = G * exp(sqrt_lam * d) estimates alpha_i/alpha_j (n = 3) or its
    square root (n = 2); then alpha_j = d / (1 - rho_eff).
    """
    if n not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    if d == 0.0:
        raise ValueError("degenerate pair: zero distance difference")
    if g_value <= 0.0:
        raise ValueError("ratio value must be positive")
    log_rho = np.log(g_value) + sqrt_lam * d
    if log_rho > 600.0:
        raise ValueError("inconsistent ratio/difference pair (overflow)")
    rho_eff = np.exp(log_rho if n == 3 else 2.0 * log_rho)
    if abs(rho_eff - 1.0) < 1e-6:
        raise ValueError("ratio model collapses (rho within 1e-6 of 1) "
                         "while the difference is nonzero")
    alpha_j = d / (1.0 - rho_eff)
    alpha_i = rho_eff * alpha_j
    if alpha_j <= 0.0 or alpha_i <= 0.0:
        raise ValueError("distance inversion produced a nonpositive distance")
    return float(alpha_i), float(alpha_j)


def in_general_position(points, n: int) -> tuple[bool, Union[tuple, None]]:
    """No collinear triple (n = 2) / no coplanar quadruple (n = 3).

    Returns (ok, witness); the witness is the index tuple of the first
    violating subset.  Degeneracy is tested against 1e-12 of the cloud
    scale, so exactly symmetric layouts are detected reliably.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if n not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    if pts.shape[1] != n:
        raise ValueError("points do not match the dimension")
    k = n + 1
    if pts.shape[0] < k:
        raise ValueError(f"need at least {k} points")
    scale = max(float(np.ptp(pts)), 1e-300)
    for idx in combinations(range(pts.shape[0]), k):
        v = pts[list(idx[1:])] - pts[idx[0]]
        vol = abs(np.linalg.det(v))
        if vol <= 1e-12 * scale ** n:
            return False, idx
    return True, None


def circumcenter(points) -> np.ndarray:
    """Center equidistant from n+1 affinely independent points.

    Subtracting pairs of squared-distance equations leaves the linear
    system 2 (b_k - b_0) . x = |b_k|^2 - |b_0|^2.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[1]
    if pts.shape[0] != n + 1:
        raise ValueError("circumcenter needs exactly n+1 points")
    a = 2.0 * (pts[1:] - pts[0])
    rhs = np.sum(pts[1:] ** 2, axis=1) - np.sum(pts[0] ** 2)
    try:
        return np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise ValueError("sensor simplex is degenerate (no unique "
                         "circumcenter)") from exc


@dataclass(frozen=True, eq=False)
class MultilaterationResult:
    x: np.ndarray
    per_sensor_residual: np.ndarray
    residual_norm: float
    condition_number: float
    iterations: int


def multilaterate(sensors, alphas) -> MultilaterationResult:
    """Least-squares point at given distances from known sensors.

    A linearized solve (differences of squared sphere equations) seeds a
    Gauss-Newton refinement of sum_j (|x - b_j| - alpha_j)^2.  The
    condition number of the linear system is reported: it blows up exactly
    when the sensors fail general position.
    """
    b = np.atleast_2d(np.asarray(sensors, dtype=float))
    alpha = np.asarray(alphas, dtype=float)
    n = b.shape[1]
    if b.shape[0] < n + 1:
        raise ValueError(f"need at least {n + 1} sensors")
    if np.any(alpha <= 0.0):
        raise ValueError("distances must be positive")
    a = 2.0 * (b[1:] - b[0])
    rhs = (np.sum(b[1:] ** 2, axis=1) - np.sum(b[0] ** 2)
           - (alpha[1:] ** 2 - alpha[0] ** 2))
    cond = float(np.linalg.cond(a))
    if cond > 1e12:
        raise ValueError("sensor geometry is rank deficient (collinear or "
                         "coplanar sensors); cannot multilaterate")
    x, *_ = np.linalg.lstsq(a, rhs, rcond=None)

    iterations = 0
    for iterations in range(1, 51):
        diff = x[None, :] - b
        dist = np.linalg.norm(diff, axis=1)
        if np.any(dist == 0.0):
            break
        f = dist - alpha
        jac = diff / dist[:, None]
        step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        x = x + step
        if np.linalg.norm(step) <= 1e-14 * max(1.0, np.linalg.norm(x)):
            break
    res = np.linalg.norm(x[None, :] - b, axis=1) - alpha
    return MultilaterationResult(
        x=x, per_sensor_residual=res,
        residual_norm=float(np.linalg.norm(res)),
        condition_number=cond, iterations=iterations)


@dataclass(frozen=True, eq=False)
class RecoveryND:
    """Localization report for the multidimensional pipeline."""

    x1_hat: np.ndarray
    alpha_hat: np.ndarray
    d_matrix: np.ndarray
    d_uncertainty: np.ndarray
    degenerate: bool
    general_position: bool
    anchor_pair: Union[tuple, None]
    ladder: np.ndarray
    multilateration: Union[MultilaterationResult, None]
    diagnostics: tuple


def _ladder_from_window(lam_lo: float, lam_hi: float, lambda0: float
                        ) -> np.ndarray:
    """Integer sqrt ladder whose shifted squares fit in the lambda window."""
    a_lo = int(np.ceil(np.sqrt(max(lam_lo, 0.0) + lambda0)))
    a_lo = max(a_lo, int(np.floor(np.sqrt(lambda0))) + 1, 1)
    a_hi = int(np.floor(np.sqrt(lam_hi + lambda0)))
    if a_hi - a_lo < 3:
        raise ValueError(
            f"lambda window [{lam_lo:.4g}, {lam_hi:.4g}] spans fewer than 4 "
            f"integer sqrt values; widen the window or refine the series")
    return np.arange(a_lo, a_hi + 1, dtype=float)


def locate_source_nd(records, n: int, lam_window, lambda0: float = 0.0,
                     noise_sigma: float = 0.0,
                     degenerate_scale: float = 1e-6) -> RecoveryND:
    """Full localization pipeline for one source seen by s >= n+1 sensors.

    ``records`` are background-subtracted SensorRecord objects;
    ``lam_window`` is (lambda_min, lambda_max).  Transforms are evaluated
    at lambda = alpha^2 - lambda0 so the kernel exponent is exactly alpha
    for free-space data with reaction lambda0.

    When the per-sample noise scale ``noise_sigma`` is known, rungs whose
    transform values sink toward the noise floor sigma*sqrt(tau/(2 lam))
    are excluded; if fewer than four survive, the data cannot support the
    asymptotic window and the call fails with that diagnosis.
    """
    records = list(records)
    if n not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    s = len(records)
    if s < n + 1:
        raise ValueError(f"need at least {n + 1} sensors, got {s}")
    sensors = np.array([r.location for r in records], dtype=float)
    ok, witness = in_general_position(sensors, n)
    if not ok:
        raise ValueError(f"sensors fail general position; witness indices "
                         f"{witness}")
    diagnostics: list[str] = []
    lam_lo, lam_hi = float(lam_window[0]), float(lam_window[1])
    ladder = _ladder_from_window(lam_lo, lam_hi, lambda0)
    lambdas = ladder ** 2 - lambda0

    grid = records[0].grid
    phis = [laplace_grid(r.samples, grid, lambdas, series_id=f"sensor_{j}")
            for j, r in enumerate(records)]
    if noise_sigma > 0.0:
        # the transform of iid per-sample noise has std
        # sigma*sqrt(tau/(2 lam)); fold it into the error bookkeeping so
        # every downstream fit weights noisy rungs down
        noise_std = noise_sigma * np.sqrt(grid.tau / (2.0 * lambdas))
        phis = [LaplaceSamples(lambdas=p.lambdas, values=p.values,
                               truncation=p.truncation,
                               discretization=p.discretization + noise_std,
                               horizon=p.horizon, series_id=p.series_id)
                for p in phis]
    guard_ok = np.all([p.truncation_ok(TRUNCATION_GUARD) for p in phis],
                      axis=0)
    if noise_sigma > 0.0:
        # the distance inversion amplifies log-ratio noise by about
        # alpha^2 sqrt(lam)/d, so rungs need real headroom over the floor
        floor = 30.0 * noise_sigma * np.sqrt(grid.tau / (2.0 * lambdas))
        guard_ok &= np.all([np.abs(p.values) >= floor for p in phis], axis=0)
    if not np.all(guard_ok):
        # truncation bounds fail at the small end of the ladder (the lost
        # tail scales like exp(-lam*T)); keep the longest contiguous run
        best_start, best_len, start = 0, 0, None
        for k, ok_k in enumerate(list(guard_ok) + [False]):
            if ok_k and start is None:
                start = k
            elif not ok_k and start is not None:
                if k - start > best_len:
                    best_start, best_len = start, k - start
                start = None
        if best_len < 4:
            raise ValueError("fewer than 4 trustworthy ladder points; "
                             "shorten the ladder or extend the horizon")
        sl = slice(best_start, best_start + best_len)
        ladder = ladder[sl]
        lambdas = lambdas[sl]
        phis = [LaplaceSamples(lambdas=lambdas, values=p.values[sl],
                               truncation=p.truncation[sl],
                               discretization=p.discretization[sl],
                               horizon=p.horizon, series_id=p.series_id)
                for p in phis]
        diagnostics.append(f"ladder reduced to {best_len} points by the "
                           f"transform guard")

    scale = max(float(np.ptp(sensors)), 1e-300)
    d = np.zeros((s, s))
    unc = np.zeros((s, s))
    fits: dict[tuple[int, int], DifferenceFit] = {}
    ratios: dict[tuple[int, int], RatioSeries] = {}
    for i in range(s):
        for j in range(i + 1, s):
            ratio = transform_ratio(phis[j], phis[i])
            fit = distance_difference_fit(ladder, ratio)
            ratios[(i, j)] = ratio
            fits[(i, j)] = fit
            d[i, j] = fit.d
            d[j, i] = -fit.d
            unc[i, j] = unc[j, i] = fit.uncertainty
            # triangle sanity: a distance difference can never exceed the
            # sensor separation
            sep = float(np.linalg.norm(sensors[i] - sensors[j]))
            if abs(fit.d) > sep + 3.0 * fit.uncertainty:
                diagnostics.append(
                    f"difference d[{i},{j}]={fit.d:.4g} exceeds the sensor "
                    f"separation {sep:.4g}; data inconsistent")

    degenerate = bool(np.all(np.abs(d) <= 3.0 * unc + degenerate_scale * scale))
    if degenerate:
        x_hat = circumcenter(sensors[: n + 1])
        alpha = np.linalg.norm(sensors - x_hat[None, :], axis=1)
        return RecoveryND(
            x1_hat=x_hat, alpha_hat=alpha, d_matrix=d, d_uncertainty=unc,
            degenerate=True, general_position=True, anchor_pair=None,
            ladder=ladder, multilateration=None,
            diagnostics=tuple(diagnostics
                              + ["all distance differences at noise level; "
                                 "source taken as the sensor circumcenter"]))

    i0, j0 = np.unravel_index(np.argmax(np.abs(d)), d.shape)
    if i0 > j0:
        i0, j0 = j0, i0
    ratio = ratios[(i0, j0)]
    d0 = d[i0, j0]
    ai_ladder, aj_ladder, used, wts = [], [], [], []
    for k, alpha_k in enumerate(ladder):
        try:
            ai, aj = pairwise_distance_solve(n, float(ratio.values[k]), d0,
                                             float(alpha_k))
        except ValueError:
            continue
        ai_ladder.append(ai)
        aj_ladder.append(aj)
        used.append(alpha_k)
        wts.append(1.0 / (ratio.rel_bounds[k] + 1e-12))
    if len(used) < 2:
        raise ValueError("pair inversion failed on the whole ladder")
    used_arr = np.asarray(used)
    w = np.asarray(wts)
    w /= w.max()
    design = np.column_stack([np.ones_like(used_arr), 1.0 / used_arr])
    dw = design * w[:, None]
    alpha_i0 = float(np.linalg.lstsq(dw, np.asarray(ai_ladder) * w,
                                     rcond=None)[0][0])
    alpha_j0 = float(np.linalg.lstsq(dw, np.asarray(aj_ladder) * w,
                                     rcond=None)[0][0])

    alpha = np.empty(s)
    for k in range(s):
        # single-hop difference chains from both anchors; keep the one
        # with the smaller accumulated uncertainty
        cand_i = alpha_i0 + d[i0, k] if k != i0 else alpha_i0
        cand_j = alpha_j0 + d[j0, k] if k != j0 else alpha_j0
        u_i = unc[i0, k] if k != i0 else 0.0
        u_j = unc[j0, k] if k != j0 else 0.0
        alpha[k] = cand_i if u_i <= u_j else cand_j
    if np.any(alpha <= 0.0):
        raise ValueError("distance propagation produced a nonpositive "
                         "distance; data inconsistent")

    ml = multilaterate(sensors, alpha)
    unc_off = unc[np.triu_indices(s, 1)]
    if ml.residual_norm > max(3.0 * float(np.mean(unc_off)), 1e-6 * scale):
        diagnostics.append(
            f"multilateration residual {ml.residual_norm:.3g} exceeds the "
            f"difference uncertainties; the distance estimates are "
            f"mutually inconsistent")
    return RecoveryND(
        x1_hat=ml.x, alpha_hat=alpha, d_matrix=d, d_uncertainty=unc,
        degenerate=False, general_position=True, anchor_pair=(int(i0), int(j0)),
        ladder=ladder, multilateration=ml, diagnostics=tuple(diagnostics))


@dataclass(frozen=True, eq=False)
class IntensityFitND:
    """Per-sensor intensity recoveries and their cross-sensor spread."""

    q: np.ndarray
    per_sensor: np.ndarray
    spread: float
    deconvolutions: tuple


def recover_intensity_nd(records, alphas, n: int,
                         eps: Union[float, str] = 0.0,
                         lambda0: float = 0.0,
                         sigma: Union[float, None] = None,
                         max_points: int = 2500) -> IntensityFitND:
    """Deconvolve each sensor series by its free-space arrival kernel.

    Every sensor sees the same intensity through a different kernel, so
    the per-sensor recoveries should coincide; their relative spread is
    returned as a consistency diagnostic for the distance estimates.
    """
    from .laplace import decimate_series

    records = list(records)
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas <= 0.0):
        raise ValueError("distances must be positive")
    if len(records) != alphas.size:
        raise ValueError("one distance per sensor record is required")
    grid = records[0].grid
    times = grid.times()
    qs = []
    decs = []
    for rec, a in zip(records, alphas):
        psi = np.asarray(rec.samples, dtype=float)
        if lambda0 != 0.0:
            psi = psi * np.exp(lambda0 * times)
        psi_d, grid_d = decimate_series(psi, grid, max_points)
        masses = duhamel_masses(n, float(a), grid_d, kind="heat")
        dec = volterra_deconvolve(psi_d, None, grid_d, eps=eps, masses=masses,
                                  sigma=sigma)
        q = dec.q
        if grid_d.num_steps != grid.num_steps:
            q = np.interp(times, grid_d.times(), q)
        if lambda0 != 0.0:
            q = q * np.exp(-lambda0 * times)
        qs.append(q)
        decs.append(dec)
    per_sensor = np.vstack(qs)
    q_mean = per_sensor.mean(axis=0)
    denom = max(float(np.linalg.norm(q_mean)), 1e-300)
    spread = float(max(np.linalg.norm(row - q_mean) for row in per_sensor)
                   / denom) if len(records) > 1 else 0.0
    return IntensityFitND(q=q_mean, per_sensor=per_sensor, spread=spread,
                          deconvolutions=tuple(decs))


# ---------------------------------------------------------------------------
# Identifiability diagnostics


def drift_exponent(drift: DriftFieldND, b: np.ndarray, x: np.ndarray,
                   order: int = 32) -> float:
    """Line-integral drift weight -(1/2) int_0^1 a(b + t(x-b)) . (x-b) dt."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    t = 0.5 * (nodes + 1.0)
    seg = x - b
    vals = np.array([np.dot(drift.velocity(b + ti * seg), seg) for ti in t])
    return float(-0.25 * np.dot(weights, vals))


@dataclass(frozen=True, eq=False)
class NearestSourceMatrix:
    """Visibility matrix of nearest sources with drift weighting.

    Entry (j, i) is exp(drift_exponent(b_j, x_i)) when source i attains
    sensor j's minimal distance, and 0 otherwise.  A vanishing determinant
    signals that the leading asymptotics cannot separate the sources.
    """

    matrix: np.ndarray
    determinant: Union[float, None]
    near_singular: Union[bool, None]
    phi: np.ndarray


def nearest_source_matrix(sources, sensors, drift: Union[DriftFieldND, None]
                          ) -> NearestSourceMatrix:
    xs = np.atleast_2d(np.asarray(sources, dtype=float))
    bs = np.atleast_2d(np.asarray(sensors, dtype=float))
    if drift is None:
        drift = DriftFieldND.zero(xs.shape[1])
    table = sensor_source_distances(xs, bs)
    s, r = bs.shape[0], xs.shape[0]
    phi = np.zeros((s, r))
    mat = np.zeros((s, r))
    for j in range(s):
        for i in range(r):
            phi[j, i] = drift_exponent(drift, bs[j], xs[i])
        for i in table.nearest[j]:
            mat[j, i] = np.exp(phi[j, i])
    if s == r:
        det = float(np.linalg.det(mat))
        row_norms = np.linalg.norm(mat, axis=1)
        hadamard = float(np.prod(np.where(row_norms > 0.0, row_norms, 1.0)))
        near_singular = bool(abs(det) <= 1e-10 * hadamard)
        return NearestSourceMatrix(matrix=mat, determinant=det,
                                   near_singular=near_singular, phi=phi)
    return NearestSourceMatrix(matrix=mat, determinant=None,
                               near_singular=None, phi=phi)


def sensor_count_sufficient(r: int, s: int, n: int) -> bool:
    """Sensor count sufficient to pin down up to r constant sources.

    Requires s >= 2r+1 in the plane and s >= 3r+1 in space; below the
    bound there are explicit configurations two different source sets
    cannot be told apart from.
    """
    if n == 2:
        return s >= 2 * r + 1
    if n == 3:
        return s >= 3 * r + 1
    raise ValueError("dimension must be 2 or 3")


# ---------------------------------------------------------------------------
# Built-in non-uniqueness configurations


@dataclass(frozen=True, eq=False)
class DiscrepancyReport:
    """Transform-domain discrepancies over probes and lambdas."""

    case: int
    probes: np.ndarray
    lambdas: np.ndarray
    table: np.ndarray          # |discrepancy|, shape (probes, lambdas)
    max_discrepancy: float
    reference: float           # comparable off-symmetry magnitude


def _bisector_probes(x1: np.ndarray, x2: np.ndarray, count: int,
                     extent: float, seed: int = 7) -> np.ndarray:
    """Points on the hyperplane bisecting segment [x1, x2]."""
    n = x1.size
    mid = 0.5 * (x1 + x2)
    axis = x2 - x1
    axis = axis / np.linalg.norm(axis)
    basis = []
    for e in np.eye(n):
        v = e - np.dot(e, axis) * axis
        for u in basis:
            v = v - np.dot(v, u) * u
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            basis.append(v / norm)
    basis = np.array(basis)
    rng = np.random.default_rng(seed)
    coef = rng.uniform(-extent, extent, size=(count, basis.shape[0]))
    return mid[None, :] + coef @ basis


def nonuniqueness_discrepancy(case: int, a: float = 1.0, m_dist: float = 3.0,
                              lambdas=(1.0, 10.0, 100.0), n: int = 3,
                              probes=None, num_probes: int = 20
                              ) -> DiscrepancyReport:
    """Evaluate one of the built-in indistinguishable configurations.

    case 1: opposite-sign sources at distance 2a; on the bisecting plane
    (line for n = 2) the transforms cancel identically, so no number of
    sensors there can see the pair.  case 2 (n = 3 only): two different
    same-sign source pairs on the diagonals of a square of half-side a;
    their transforms coincide at the six axis probes at distance m_dist,
    so six sensors cannot separate the configurations while a generic
    seventh probe can.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    if case == 1:
        x1 = np.zeros(n)
        x2 = np.zeros(n)
        x1[0], x2[0] = a, -a
        if probes is None:
            probes = _bisector_probes(x1, x2, num_probes, extent=m_dist)
        probes = np.atleast_2d(np.asarray(probes, dtype=float))

        def field(p, lam):
            r1 = np.linalg.norm(p - x1)
            r2 = np.linalg.norm(p - x2)
            if r1 == 0.0 or r2 == 0.0:
                raise ValueError("probe coincides with a source")
            return resolvent_green(n, r1, lam) - resolvent_green(n, r2, lam)

        table = np.array([[abs(field(p, lam)) for lam in lambdas]
                          for p in probes])
        # reference probe at the same distance from x1 as the first bisector
        # probe, but on the x1 side of the axis where nothing cancels
        axis = (x1 - x2) / np.linalg.norm(x1 - x2)
        ref_p = x1 + np.linalg.norm(probes[0] - x1) * axis
        reference = float(max(abs(field(ref_p, lam)) for lam in lambdas))
    elif case == 2:
        if n != 3:
            raise ValueError("case 2 is a spatial (n=3) configuration")
        pair_a = np.array([[a, a, 0.0], [-a, -a, 0.0]])
        pair_b = np.array([[a, -a, 0.0], [-a, a, 0.0]])
        if probes is None:
            m = m_dist
            probes = np.array([[m, 0, 0], [-m, 0, 0], [0, m, 0],
                               [0, -m, 0], [0, 0, m], [0, 0, -m]],
                              dtype=float)
        probes = np.atleast_2d(np.asarray(probes, dtype=float))

        def field(p, lam):
            tot = 0.0
            for src, sign in ((pair_a, 1.0), (pair_b, -1.0)):
                for x in src:
                    r = np.linalg.norm(p - x)
                    if r == 0.0:
                        raise ValueError("probe coincides with a source")
                    tot += sign * resolvent_green(3, r, lam)
            return tot

        table = np.array([[abs(field(p, lam)) for lam in lambdas]
                          for p in probes])
        reference = float(max(abs(field(np.array([1.0, 2.0, 0.0]), lam))
                              for lam in lambdas))
    else:
        raise ValueError("case must be 1 or 2")
    return DiscrepancyReport(case=case, probes=probes, lambdas=lambdas,
                             table=table,
                             max_discrepancy=float(table.max()),
                             reference=reference)
