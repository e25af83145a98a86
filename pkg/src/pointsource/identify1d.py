"""1D source identification from two sensor transforms.

Location recovery uses the large-parameter behaviour of the transform
ratio: for a single source between two sensors,

    log(Phi_1/Phi_2)(lam) = -sqrt(lam) * (travel(b1, x1) - travel(x1, b2))
                            - amp(b1, b2) + O(1/sqrt(lam)),

where travel integrates the slowness 1/sqrt(a2) and amp integrates the
first-order amplitude density.  Solving for the travel distance from b1
and inverting the (strictly monotone) travel integral yields the source
coordinate; sensors sitting on a reflecting boundary see the image charge
and acquire a factor 2 handled by the boundary branches.  Intensity
recovery deconvolves the sensor series by the arrival kernel at the
recovered travel distance and rescales by the leading amplitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.optimize import brentq

from .forward import duhamel_masses, travel_integrals
from .laplace import DeconvolutionResult, LaplaceSamples, volterra_deconvolve
from .model import CoefficientField1D, TimeGrid

__all__ = [
    "OffsetFit",
    "estimate_offset",
    "LocationFit1D",
    "locate_source_1d",
    "invert_travel_distance",
    "IntensityFit1D",
    "recover_intensity_1d",
    "alternation_findings",
]

#: reject transform values whose truncation bound exceeds this fraction
TRUNCATION_GUARD = 1e-3


def _shared_lambdas(phi1: LaplaceSamples, phi2: LaplaceSamples) -> np.ndarray:
    if phi1.lambdas.shape != phi2.lambdas.shape or \
            not np.allclose(phi1.lambdas, phi2.lambdas, rtol=1e-12):
        raise ValueError("sensor transforms must share the lambda grid")
    return phi1.lambdas


def _ratio_mask(phi1: LaplaceSamples, phi2: LaplaceSamples,
                guard: float = TRUNCATION_GUARD) -> np.ndarray:
    """Lambdas where both transforms are nonzero and trustworthy.

    Points where either value sits below its own truncation bound are
    treated as (near-)zeros and skipped; the two series vanish together
    for consistent data, so isolated skips are expected.
    """
    ok = phi1.truncation_ok(guard) & phi2.truncation_ok(guard)
    ok &= (phi1.values != 0.0) & (phi2.values != 0.0)
    return ok


@dataclass(frozen=True, eq=False)
class OffsetFit:
    """Large-lambda limit of log(Phi_1/Phi_2)/(2 sqrt(lam)).

    The limit measures how far the source travel-coordinate sits from the
    sensor midpoint; |offset| < travel(b1, b2)/2 must hold for a source
    bracketed by the sensors (the admissibility check).
    """

    offset: float
    slope: float
    residual: float
    lambdas: np.ndarray
    samples: np.ndarray


def estimate_offset(phi1: LaplaceSamples, phi2: LaplaceSamples) -> OffsetFit:
    """Fit a_k = offset + slope/sqrt(lam_k) to the scaled log-ratio."""
    lam = _shared_lambdas(phi1, phi2)
    ok = _ratio_mask(phi1, phi2)
    if np.count_nonzero(ok) < 3:
        raise ValueError("need at least 3 trustworthy lambda points")
    ratio = phi1.values[ok] / phi2.values[ok]
    if (ratio > 0.0).any() and (ratio < 0.0).any():
        raise ValueError("transform ratio changes sign across the window; "
                         "sensor data inconsistent with a single source")
    if not (ratio > 0.0).all():
        raise ValueError("transform ratio is nonpositive across the window")
    lam_ok = lam[ok]
    a = np.log(ratio) / (2.0 * np.sqrt(lam_ok))
    x = 1.0 / np.sqrt(lam_ok)
    design = np.column_stack([np.ones_like(x), x])
    coef, res, *_ = np.linalg.lstsq(design, a, rcond=None)
    fitted = design @ coef
    residual = float(np.sqrt(np.mean((a - fitted) ** 2)))
    return OffsetFit(offset=float(coef[0]), slope=float(coef[1]),
                     residual=residual, lambdas=lam_ok, samples=a)


def invert_travel_distance(coeffs: CoefficientField1D, b1: float, m: float,
                           direction: int = 1) -> float:
    """Find x with |int_{b1}^{x} slowness| = m on the given side of b1.

    The slowness is strictly positive, so the travel integral is strictly
    monotone and the root is unique; bisection refines it to
    1e-12 * (interval length).
    """
    if m < 0.0:
        raise ValueError("travel distance must be nonnegative")
    if m == 0.0:
        return b1
    end = coeffs.b if direction > 0 else coeffs.a
    total, _ = travel_integrals(coeffs, b1, end)
    if m > abs(total) * (1.0 + 1e-12):
        raise ValueError("travel distance exceeds the domain extent")

    def f(x: float) -> float:
        val, _ = travel_integrals(coeffs, b1, x)
        return abs(val) - m

    if m >= abs(total):
        return end
    return float(brentq(f, b1, end, xtol=1e-12 * (coeffs.b - coeffs.a)))


@dataclass(frozen=True, eq=False)
class LocationFit1D:
    """Per-lambda and aggregate source-location estimates."""

    x1_hat: float
    lambdas: np.ndarray
    x1_per_lambda: np.ndarray
    travel_per_lambda: np.ndarray
    weights: np.ndarray
    in_range: np.ndarray
    used: np.ndarray
    branch: str
    travel_total: float
    amp_total: float
    offset: OffsetFit
    admissible: bool
    diagnostics: tuple


def _weighted_median(values: np.ndarray, weights: np.ndarray) -> float:
    order = np.argsort(values)
    v = values[order]
    w = weights[order]
    c = np.cumsum(w)
    return float(v[np.searchsorted(c, 0.5 * c[-1])])


def locate_source_1d(phi1: LaplaceSamples, phi2: LaplaceSamples,
                     coeffs: CoefficientField1D, b1: float, b2: float,
                     branch: str = "interior") -> LocationFit1D:
    """Recover the source coordinate between sensors b1 < b2.

    branch selects the sensor placement: "interior" for two interior
    sensors, "left_boundary" when b1 sits on a reflecting (derivative)
    boundary, "right_boundary" when b2 does.  Each lambda yields one
    travel-distance estimate; the aggregate is the bound-weighted median
    over the window (the largest lambdas are the most asymptotic but the
    most error-amplified, so no single point is trusted).
    """
    if not b1 < b2:
        raise ValueError("sensors must satisfy b1 < b2")
    if branch not in ("interior", "left_boundary", "right_boundary"):
        raise ValueError(f"unknown branch {branch!r}")
    diagnostics: list[str] = []
    lam = _shared_lambdas(phi1, phi2)
    ok = _ratio_mask(phi1, phi2)
    if np.count_nonzero(ok) < 3:
        raise ValueError("need at least 3 trustworthy lambda points")

    travel_total, amp_total = travel_integrals(coeffs, b1, b2)
    sq = np.sqrt(lam)
    ratio = np.where(ok, phi1.values / np.where(phi2.values == 0.0, 1.0,
                                                phi2.values), np.nan)
    pos = ok & (ratio > 0.0)
    if np.count_nonzero(pos) < 3:
        raise ValueError("fewer than 3 lambda points with a positive ratio")
    if np.count_nonzero(ok & ~pos):
        diagnostics.append("nonpositive transform ratio at some lambdas; skipped")

    logr = np.full_like(sq, np.nan)
    logr[pos] = np.log(ratio[pos])
    if branch == "left_boundary":
        logr = logr - np.log(2.0)   # reflecting boundary doubles Phi_1
    elif branch == "right_boundary":
        logr = logr + np.log(2.0)   # reflecting boundary doubles Phi_2

    # travel distance from b1 per lambda; a source outside the bracket
    # lands exactly on an endpoint (the asymptotics clip there), so the
    # range check needs a margin wider than the transform noise floor
    travel = 0.5 * travel_total - (amp_total + logr) / (2.0 * sq)
    margin = 1e-4 * travel_total
    in_range = pos & (travel > margin) & (travel < travel_total - margin)
    if not np.any(in_range):
        raise ValueError("recovered travel distance out of range at every "
                         "lambda: the source is not bracketed by the sensors")

    if coeffs.is_constant_diffusion:
        # constant-diffusion shortcut: x1 = midpoint - correction
        root_a2 = np.sqrt(coeffs.diffusion(0.5 * (b1 + b2)))
        x1 = 0.5 * (b1 + b2) - root_a2 * (amp_total + logr) / (2.0 * sq)
    else:
        x1 = np.full_like(sq, np.nan)
        for i in np.nonzero(in_range)[0]:
            x1[i] = invert_travel_distance(coeffs, b1, float(travel[i]))

    rel_bound = (phi1.bounds / np.abs(np.where(phi1.values == 0, 1.0,
                                               phi1.values))
                 + phi2.bounds / np.abs(np.where(phi2.values == 0, 1.0,
                                                 phi2.values)))
    weights = 1.0 / (rel_bound + 1e-12)
    used = in_range
    x1_hat = _weighted_median(x1[used], weights[used])

    offset = estimate_offset(phi1, phi2)
    admissible = abs(offset.offset) < 0.5 * travel_total
    if not admissible:
        diagnostics.append("offset fit violates the bracketing bound "
                           "|offset| < travel(b1,b2)/2")
    return LocationFit1D(
        x1_hat=x1_hat, lambdas=lam, x1_per_lambda=x1,
        travel_per_lambda=travel, weights=weights, in_range=in_range,
        used=used, branch=branch, travel_total=travel_total,
        amp_total=amp_total, offset=offset, admissible=admissible,
        diagnostics=tuple(diagnostics))


@dataclass(frozen=True, eq=False)
class IntensityFit1D:
    """Recovered intensity with the deconvolution diagnostics attached."""

    q: np.ndarray
    travel_distance: float
    amplitude: float
    deconvolution: DeconvolutionResult
    exact_amplitude: bool


def recover_intensity_1d(psi_tilde: np.ndarray, grid: TimeGrid,
                         coeffs: CoefficientField1D, x1_hat: float, b: float,
                         eps: Union[float, str] = 0.0,
                         sigma: Union[float, None] = None,
                         max_points: int = 2500) -> IntensityFit1D:
    """Deconvolve a background-subtracted sensor series into an intensity.

    The series is modelled as amplitude * (kernel_at_travel_distance * q)
    with amplitude exp(amp(x1, b)) / (2 sqrt(a2(x1))); this is exact for
    constant coefficients and leading-order otherwise (flagged on the
    result).  Long series are stride-decimated before the dense solve.
    """
    if x1_hat == b:
        raise ValueError("source estimate coincides with the sensor")
    from .laplace import decimate_series

    int_r, int_r1 = travel_integrals(coeffs, x1_hat, b)
    delta0 = abs(int_r)
    c0 = float(np.exp(int_r1) / (2.0 * np.sqrt(coeffs.diffusion(x1_hat))))
    psi_d, grid_d = decimate_series(np.asarray(psi_tilde, dtype=float), grid,
                                    max_points)
    masses = duhamel_masses(1, delta0, grid_d, kind="distance")
    dec = volterra_deconvolve(psi_d, None, grid_d, eps=eps, masses=masses,
                              sigma=sigma)
    q = dec.q / c0
    if grid_d.num_steps != grid.num_steps:
        q = np.interp(grid.times(), grid_d.times(), q)
    return IntensityFit1D(q=q, travel_distance=delta0, amplitude=c0,
                          deconvolution=dec,
                          exact_amplitude=bool(coeffs.is_constant_diffusion))


def alternation_findings(sources, sensors) -> list[dict]:
    """Check the interleaving of sources and sensors on the line.

    Returns one finding per failure mode that provably breaks uniqueness
    of intensity recovery: all sensors to the right of the two leftmost
    sources, all sensors to the left of the two rightmost sources, or
    three consecutive sources spanning an interval containing no sensor.
    An empty list clears these specific obstructions only.
    """
    xs = np.sort(np.asarray(sources, dtype=float).reshape(-1))
    bs = np.sort(np.asarray(sensors, dtype=float).reshape(-1))
    if bs.size == 0:
        raise ValueError("at least one sensor is required")
    findings: list[dict] = []
    if xs.size >= 2 and np.all(bs > xs[1]):
        findings.append({
            "code": "sensors_all_right_of_leading_pair",
            "detail": f"every sensor exceeds the second source x={xs[1]:.6g}; "
                      f"intensities of the two leftmost sources are not "
                      f"identifiable"})
    if xs.size >= 2 and np.all(bs < xs[-2]):
        findings.append({
            "code": "sensors_all_left_of_trailing_pair",
            "detail": f"every sensor is below the second-to-last source "
                      f"x={xs[-2]:.6g}"})
    for r1 in range(xs.size - 2):
        lo, hi = xs[r1], xs[r1 + 2]
        if not np.any((bs >= lo) & (bs <= hi)):
            findings.append({
                "code": "uncovered_source_triple",
                "detail": f"no sensor in [{lo:.6g}, {hi:.6g}] spanned by "
                          f"sources {r1}..{r1 + 2}"})
            break
    return findings
