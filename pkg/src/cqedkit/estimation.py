"""Nonlinear least squares and the two inverse problems built on it.

``minimize_least_squares`` runs a bounded Nelder-Mead simplex (restarted
from its own best point until the objective stops improving) followed by a
finite-difference Gauss-Newton (trust-region) polish.  Both stages come from
scipy; this module adds scaling, restarts, bookkeeping and the problem-specific
objectives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize

from .constants import e_charge, frequency_to_energy, h, hbar
from .decoherence import QuasiparticleParams, gamma_qp, x_qp_thermal
from .jaynes_cummings import (
    JchSystem,
    SpectroObservables,
    StrongMixingError,
    _observables,
    dressed_observables,
)
from .transmon import ConvergenceError, TransmonParams

TWO_PI = 2.0 * math.pi
MODEL_MISMATCH_HZ = 100e3


class FitError(RuntimeError):
    pass


class NonFiniteObjectiveError(FitError):
    def __init__(self, x):
        super().__init__(f"objective returned non-finite residuals at parameters {list(map(float, x))}")
        self.x = np.array(x, dtype=float)


@dataclass
class FitResult:
    params: dict[str, float]
    residual_norm: float  # RMS residual, native units of the objective
    n_iterations: int
    converged: bool
    diagnostics: dict = field(default_factory=dict)
    x0: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)


def _sumsq(r: np.ndarray) -> float:
    # sorted so the value does not depend on residual order
    return float(np.sum(np.sort(r * r)))


def minimize_least_squares(
    objective: Callable[[np.ndarray], Sequence[float]],
    x0: Sequence[float],
    bounds: Optional[Sequence[tuple[float, float]]] = None,
    *,
    names: Optional[Sequence[str]] = None,
    residual_names: Optional[Sequence[str]] = None,
    xtol: float = 1e-10,
    ftol: float = 1e-12,
    max_iter: int = 2000,
    max_restarts: int = 4,
    polish: bool = True,
) -> FitResult:
    """Minimize the sum of squared residuals of ``objective``.

    Parameters
    ----------
    objective : callable
        Maps a parameter vector to a residual vector.
    x0 : sequence of float
        Starting point; must lie within ``bounds``.
    bounds : sequence of (low, high), optional
        Per-parameter box constraints (``None`` or infinite for unbounded).
    xtol, ftol : float
        Relative parameter-step and objective-change tolerances.
    max_iter : int
        Simplex iteration budget summed over restarts.

    Returns
    -------
    FitResult
        ``converged`` is False when the budget ran out; ``params`` then hold the
        best point found.  The result never has a larger objective than ``x0``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    names = list(names) if names is not None else [f"x{i}" for i in range(n)]
    if bounds is None:
        bounds = [(-np.inf, np.inf)] * n
    lo = np.array([-np.inf if b[0] is None else b[0] for b in bounds], dtype=float)
    hi = np.array([np.inf if b[1] is None else b[1] for b in bounds], dtype=float)
    if np.any(x0 < lo) or np.any(x0 > hi):
        raise ValueError(f"initial point {x0.tolist()} lies outside the bounds")

    scale = np.where(np.abs(x0) > 0, np.abs(x0), 1.0)

    def residuals_x(x):
        r = np.asarray(objective(x), dtype=float).ravel()
        if not np.all(np.isfinite(r)):
            raise NonFiniteObjectiveError(x)
        return r

    def residuals_z(z):
        return residuals_x(z * scale)

    def f(z):
        return _sumsq(residuals_z(z))

    z0 = x0 / scale
    f0 = f(z0)
    zbounds = list(zip(lo / scale, hi / scale))
    fatol = ftol * max(f0, 1e-300)

    z_best, f_best = z0.copy(), f0
    iterations, nm_converged, restarts = 0, False, 0
    while iterations < max_iter and restarts <= max_restarts:
        res = minimize(
            f,
            z_best,
            method="Nelder-Mead",
            bounds=zbounds,
            options={"xatol": xtol, "fatol": fatol, "maxiter": max_iter - iterations},
        )
        iterations += int(res.nit)
        nm_converged = res.status == 0
        improved = res.fun < f_best
        if improved:
            gain = f_best - res.fun
            z_best, f_best = np.asarray(res.x, dtype=float), float(res.fun)
        restarts += 1
        if not improved or gain <= ftol * max(f_best, 1e-300) or f_best == 0.0:
            break

    polished = False
    if polish and f_best > 0:
        lsq = least_squares(
            residuals_z,
            np.clip(z_best, lo / scale, hi / scale),
            bounds=(lo / scale, hi / scale),
            method="trf",
            jac="2-point",
            xtol=1e-14,
            ftol=1e-14,
            gtol=1e-14,
            max_nfev=200 * n,
        )
        f_lsq = _sumsq(lsq.fun)
        if f_lsq < f_best:
            z_best, f_best = np.asarray(lsq.x, dtype=float), f_lsq
            polished = lsq.status > 0
            iterations += int(lsq.nfev)

    x_best = z_best * scale
    r = residuals_x(x_best)
    rnames = list(residual_names) if residual_names is not None else [f"r{i}" for i in range(r.size)]
    return FitResult(
        params=dict(zip(names, map(float, x_best))),
        residual_norm=float(math.sqrt(_sumsq(r) / max(r.size, 1))),
        n_iterations=iterations,
        converged=bool(nm_converged or polished),
        diagnostics={
            "residuals": dict(zip(rnames, map(float, r))),
            "initial_residual_norm": float(math.sqrt(f0 / max(r.size, 1))),
            "restarts": restarts,
            "polished": polished,
        },
        x0=dict(zip(names, map(float, x0))),
        bounds={k: (float(a), float(b)) for k, a, b in zip(names, lo, hi)},
    )


# ---------------------------------------------------------------------------
# Spectroscopy: (EJ, EC, g01) from (omega01, omega12, delta_omega)


def spectroscopy_initial_guess(measured: SpectroObservables) -> tuple[float, float, float]:
    """Starting (EJ/h, EC/h, g01/2pi) in Hz from the asymptotic transmon relations."""
    f01 = measured.omega01 / TWO_PI
    f12 = measured.omega12 / TWO_PI
    fc = measured.omega_c_bare / TWO_PI
    ec = f01 - f12
    ej = (f01 + ec) ** 2 / (8.0 * ec)
    g = math.sqrt(abs(measured.delta_omega / TWO_PI * (fc - f01)))
    return ej, ec, g


def _system(x, omega_c, nq, nph, cutoff, coupling, ng):
    ej_hz, ec_hz, g_hz = x
    tp = TransmonParams(frequency_to_energy(ej_hz), frequency_to_energy(ec_hz), ng, cutoff)
    return JchSystem(tp, omega_c, TWO_PI * g_hz, nq, nph, coupling)


def fit_spectroscopy(
    measured: SpectroObservables,
    *,
    n_transmon_levels: int = 4,
    n_photons: int = 12,
    n_charge_cutoff: int = 15,
    coupling: str = "ladder",
    ng: float = 0.0,
) -> FitResult:
    """Fit EJ, EC and g01 so the dressed spectrum matches ``measured``.

    The bare cavity frequency is held at its measured value.  Residuals are
    the linear-frequency differences (Hz) in omega01, omega12 and
    delta_omega, equally weighted.  Returned params are SI: ``EJ`` and ``EC``
    in joules, ``g01`` in rad/s.
    """
    target = np.array([measured.omega01, measured.omega12, measured.delta_omega]) / TWO_PI
    guess = np.array(spectroscopy_initial_guess(measured))
    bounds = [(0.25 * guess[0], 4.0 * guess[0]), (0.25 * guess[1], 4.0 * guess[1]), (1e-3 * guess[2], 10.0 * guess[2])]
    args = (measured.omega_c_bare, n_transmon_levels, n_photons, n_charge_cutoff, coupling, ng)

    def objective(x):
        try:
            model = _observables(_system(x, *args), check_convergence=False) / TWO_PI
        except (StrongMixingError, ValueError) as exc:
            raise FitError(f"forward model failed at EJ/h={x[0]:.6g} Hz, EC/h={x[1]:.6g} Hz, g01/2pi={x[2]:.6g} Hz: {exc}") from exc
        return model - target

    res = minimize_least_squares(
        objective,
        guess,
        bounds,
        names=["EJ_h_hz", "EC_h_hz", "g01_2pi_hz"],
        residual_names=["omega01_hz", "omega12_hz", "delta_omega_hz"],
    )
    ej_hz, ec_hz, g_hz = (res.params[k] for k in ("EJ_h_hz", "EC_h_hz", "g01_2pi_hz"))
    try:
        final = dressed_observables(_system((ej_hz, ec_hz, g_hz), *args), check_convergence=True)
    except ConvergenceError as exc:
        res.flags.append("truncation_not_converged")
        res.diagnostics["truncation_error"] = str(exc)
    else:
        res.diagnostics["model_observables_ghz"] = final.as_ghz()
    if res.residual_norm > MODEL_MISMATCH_HZ:
        res.flags.append("model_mismatch")
    res.diagnostics["fit_units"] = {"EJ_h_hz": "Hz", "EC_h_hz": "Hz", "g01_2pi_hz": "Hz"}
    res.diagnostics["fitted_hz"] = dict(res.params)
    res.params = {"EJ": ej_hz * h, "EC": ec_hz * h, "g01": TWO_PI * g_hz}
    return res


# ---------------------------------------------------------------------------
# T1 versus temperature: (gap, x_neq)

UEV = 1e-6 * e_charge
GAP_BOUNDS_UEV = (100.0, 250.0)
X_NEQ_BOUNDS = (0.0, 1e-4)


def _t1_rate_model(gap_uev, x_ppm, temps, omega01):
    gap = gap_uev * UEV
    p = QuasiparticleParams(gap=gap, x_neq=x_ppm * 1e-6, omega01=omega01)
    return np.array([gamma_qp(p, p.x_neq + x_qp_thermal(gap, T)) for T in temps])


def fit_t1_vs_temperature(data, omega01: float, t_min_fit: float = 0.060) -> FitResult:
    """Fit the gap and non-equilibrium quasiparticle density to T1(T).

    Parameters
    ----------
    data : array-like, shape (n, 3)
        Rows of (temperature K, T1 s, sigma_T1 s).
    omega01 : float
        Qubit angular frequency, rad/s.
    t_min_fit : float
        Points colder than this are excluded.

    Returns
    -------
    FitResult
        ``params`` holds ``gap`` (J) and ``x_neq``.  Residuals are the
        weighted rate differences (1/T1 - Gamma_model) / sigma_rate.
    """
    d = np.asarray(data, dtype=float)
    if d.ndim != 2 or d.shape[1] != 3:
        raise ValueError("data must have rows of (temperature, T1, sigma_T1)")
    d = d[d[:, 0] >= t_min_fit]
    if d.shape[0] < 4:
        raise FitError(f"need at least 4 points at or above {t_min_fit} K, got {d.shape[0]}")
    temps, t1, sig = d.T
    if np.any(sig <= 0) or np.any(t1 <= 0):
        raise FitError("T1 values and their uncertainties must be positive (degenerate weights)")
    rate = 1.0 / t1
    sig_rate = sig / t1**2

    def objective(x):
        return (_t1_rate_model(x[0], x[1], temps, omega01) - rate) / sig_rate

    # floor density from the coldest point; best gap start from a coarse grid
    coldest = np.argmin(temps)
    root = math.sqrt(2 * 200.0 * UEV * omega01 / hbar)
    x_start = float(np.clip(rate[coldest] * math.pi / root * 1e6, 1e-3, 99.0))
    grid = [(g, x_start) for g in (130.0, 160.0, 190.0, 220.0)]
    start = min(grid, key=lambda s: _sumsq(objective(np.array(s))))
    bounds = [GAP_BOUNDS_UEV, (X_NEQ_BOUNDS[0] * 1e6, X_NEQ_BOUNDS[1] * 1e6)]
    res = minimize_least_squares(objective, start, bounds, names=["gap_uev", "x_neq_ppm"])

    gap_uev, x_ppm = res.params["gap_uev"], res.params["x_neq_ppm"]
    span = GAP_BOUNDS_UEV[1] - GAP_BOUNDS_UEV[0]
    if gap_uev >= GAP_BOUNDS_UEV[1] - 1e-6 * span:
        res.flags.append("gap_at_upper_bound")
    if gap_uev <= GAP_BOUNDS_UEV[0] + 1e-6 * span:
        res.flags.append("gap_at_lower_bound")
    res.diagnostics["n_points_used"] = int(d.shape[0])
    res.diagnostics["fitted_natural_units"] = {"gap_uev": gap_uev, "x_neq_ppm": x_ppm}
    res.params = {"gap": gap_uev * UEV, "x_neq": x_ppm * 1e-6}
    return res
