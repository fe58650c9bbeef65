"""Coherence-trace analysis: decay fits, jump rejection and fluctuation statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

from .decoherence import t_phi_from_t1_t2

MAD_SCALE = 1.4826
JUMP_THRESHOLD = 5.0


class TraceFitError(RuntimeError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    trace_id: str
    times: np.ndarray
    p_excited: np.ndarray
    n_shots: int

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.p_excited, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "p_excited", p)
        if t.shape != p.shape or t.ndim != 1:
            raise ValueError(f"trace {self.trace_id!r}: times and p_excited must be 1-D and equal length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError(f"trace {self.trace_id!r}: times must be strictly increasing")
        if np.any((p < 0) | (p > 1)) or not np.all(np.isfinite(p)):
            raise ValueError(f"trace {self.trace_id!r}: probabilities must lie in [0, 1]")
        if int(self.n_shots) != self.n_shots or self.n_shots < 1:
            raise ValueError(f"trace {self.trace_id!r}: n_shots must be a positive integer")


@dataclass(frozen=True)
class T1Fit:
    t1: float
    amplitude: float
    offset: float
    residual_norm: float


@dataclass(frozen=True)
class RamseyFit:
    t2: float
    detuning: float  # Hz
    phase: float
    amplitude: float
    offset: float
    residual_norm: float


@dataclass(frozen=True)
class JumpResult:
    jump_mask: np.ndarray
    steady_state_freq: float
    center: float
    scale: float
    method: str  # "mad" or "two-means"
    ambiguous: bool = False


@dataclass
class SeriesStats:
    mean_t1: float
    std_t1: float
    mean_tphi: float
    std_tphi: float
    rho: Optional[float]  # None when a variance is zero
    n: int
    steady_state_freq: Optional[float] = None
    jump_mask: Optional[np.ndarray] = None
    notes: list[str] = field(default_factory=list)


def _shot_noise(rec: TraceRecord) -> float:
    pbar = float(np.clip(np.mean(rec.p_excited), 0.0, 1.0))
    return math.sqrt(pbar * (1.0 - pbar) / rec.n_shots)


def _lsq(fun, x0, lower, upper):
    return least_squares(fun, x0, bounds=(lower, upper), method="trf", x_scale="jac", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)


def _reweighted(model, res, p, n_shots, lower, upper, passes=3):
    """Refine an unweighted fit by weighting each point with its binomial shot noise.

    Weights come from the current model, p_m (1 - p_m) / n_shots, with p_m kept
    half a shot away from 0 and 1.  A few passes approach the binomial
    maximum-likelihood estimate.
    """
    floor = 0.5 / n_shots
    for _ in range(passes):
        pm = np.clip(model(res.x), floor, 1.0 - floor)
        w = np.sqrt(n_shots / (pm * (1.0 - pm)))
        res = _lsq(lambda x: (model(x) - p) * w, res.x, lower, upper)
    return res


def fit_t1_trace(rec: TraceRecord) -> T1Fit:
    """Fit ``A exp(-t/T1) + B`` to an energy-relaxation trace.

    The starting point comes from a straight-line fit of log(p - B0) against t,
    with B0 taken just below the trace minimum.  The final fit is weighted by
    binomial shot noise (see ``_reweighted``).
    """
    t, p = rec.times, rec.p_excited
    if t.size < 8:
        raise TraceFitError(f"trace {rec.trace_id!r}: need at least 8 points, got {t.size}")
    span = float(p.max() - p.min())
    if not span > 5.0 * _shot_noise(rec):
        raise TraceFitError(f"trace {rec.trace_id!r}: dynamic range {span:.3g} is within 5x the shot noise")

    tail = p[-max(2, t.size // 10):]
    b0 = min(float(np.mean(tail)), float(p.min())) - 1e-3 * span
    y = p - b0
    keep = y > 0.05 * span
    if keep.sum() >= 2:
        slope, intercept = np.polyfit(t[keep], np.log(y[keep]), 1)
    else:
        slope, intercept = -3.0 / (t[-1] - t[0]), math.log(span)
    tau0 = -1.0 / slope if slope < 0 else (t[-1] - t[0]) / 3.0
    x0 = np.array([math.exp(intercept), tau0, b0])

    def model(x):
        a, tau, b = x
        return a * np.exp(-t / tau) + b

    tspan = t[-1] - t[0]
    lower, upper = [-2.0, 1e-6 * tspan, -1.0], [2.0, 1e6 * tspan, 2.0]
    res = _lsq(lambda x: model(x) - p, x0, lower, upper)
    res = _reweighted(model, res, p, rec.n_shots, lower, upper)
    if not res.success:
        raise TraceFitError(f"trace {rec.trace_id!r}: T1 fit did not converge ({res.message})")
    a, tau, b = map(float, res.x)
    return T1Fit(t1=tau, amplitude=a, offset=b, residual_norm=float(np.sqrt(np.mean((model(res.x) - p) ** 2))))


def _spectral_peak(t, y):
    """Frequency (Hz) of the strongest non-DC component and its prominence."""
    dt = np.diff(t)
    uniform = np.allclose(dt, dt[0], rtol=1e-6)
    if uniform:
        nfft = 8 * t.size
        spec = np.abs(np.fft.rfft(y, n=nfft)) ** 2
        freqs = np.fft.rfftfreq(nfft, d=dt[0])
    else:
        from scipy.signal import lombscargle

        fmax = 0.5 / np.min(dt)
        freqs = np.linspace(fmax / (8 * t.size), fmax, 8 * t.size)
        spec = lombscargle(t, y, 2 * np.pi * freqs)
    spec, freqs = spec[1:], freqs[1:]
    k = int(np.argmax(spec))
    floor = float(np.median(spec))
    prominence = float(spec[k] / floor) if floor > 0 else (math.inf if spec[k] > 0 else 0.0)
    return float(freqs[k]), prominence


def fit_ramsey_trace(rec: TraceRecord) -> RamseyFit:
    """Fit ``A exp(-t/T2) cos(2 pi df t + phi) + B`` to a Ramsey fringe.

    ``df`` starts at the peak of the trace's power spectrum; the phase is
    seeded from four quadrature starts and the best fit kept.
    """
    t, p = rec.times, rec.p_excited
    if t.size < 20:
        raise TraceFitError(f"trace {rec.trace_id!r}: need at least 20 points, got {t.size}")
    y = p - p.mean()
    if not np.any(np.abs(y) > 0):
        raise TraceFitError(f"trace {rec.trace_id!r}: no resolvable spectral peak (flat trace)")
    f0, prominence = _spectral_peak(t, y)
    if prominence < 10.0:
        raise TraceFitError(f"trace {rec.trace_id!r}: no resolvable spectral peak (prominence {prominence:.2g})")
    if np.max(np.diff(t)) * f0 > 0.25:
        raise TraceFitError(f"trace {rec.trace_id!r}: fewer than 4 samples per period at {f0:.4g} Hz")

    tspan = t[-1] - t[0]
    amp0 = 0.5 * float(p.max() - p.min())
    b0 = float(p.mean())

    def model(x):
        a, tau, df, phi, b = x
        return a * np.exp(-t / tau) * np.cos(2 * np.pi * df * t + phi) + b

    lower = [0.0, 1e-6 * tspan, 0.5 * f0, -4 * np.pi, -1.0]
    upper = [2.0, 1e6 * tspan, 1.5 * f0 + 1.0 / tspan, 4 * np.pi, 2.0]
    best = None
    for phi0 in (0.0, 0.5 * np.pi, np.pi, -0.5 * np.pi):
        res = _lsq(lambda x: model(x) - p, [amp0, tspan / 3.0, f0, phi0, b0], lower, upper)
        if best is None or res.cost < best.cost:
            best = res
    best = _reweighted(model, best, p, rec.n_shots, lower, upper)
    if not best.success:
        raise TraceFitError(f"trace {rec.trace_id!r}: Ramsey fit did not converge ({best.message})")
    a, tau, df, phi, b = map(float, best.x)
    phi = math.remainder(phi, 2 * math.pi)
    rms = float(np.sqrt(np.mean((model(best.x) - p) ** 2)))
    return RamseyFit(t2=tau, detuning=df, phase=phi, amplitude=a, offset=b, residual_norm=rms)


def _two_means(x: np.ndarray) -> np.ndarray:
    """Exact 1-D two-means split; returns a boolean array marking the upper cluster."""
    order = np.argsort(x, kind="stable")
    xs = x[order] - np.mean(x)  # centered; raw GHz values would cancel catastrophically
    n = xs.size
    csum = np.cumsum(xs)
    csq = np.cumsum(xs * xs)
    k = np.arange(1, n)
    left = csq[:-1] - csum[:-1] ** 2 / k
    right = (csq[-1] - csq[:-1]) - (csum[-1] - csum[:-1]) ** 2 / (n - k)
    split = int(np.argmin(left + right)) + 1
    upper = np.zeros(n, dtype=bool)
    upper[order[split:]] = True
    return upper


def _separated(x: np.ndarray, upper: np.ndarray, threshold: float) -> bool:
    a, b = x[~upper], x[upper]
    if a.size == 0 or b.size == 0:
        return False
    within = max(MAD_SCALE * np.median(np.abs(a - np.median(a))), MAD_SCALE * np.median(np.abs(b - np.median(b))))
    gap = float(b.min() - a.max())
    return gap > threshold * within if within > 0 else gap > 0


def _refine(x: np.ndarray, mask: np.ndarray, threshold: float):
    """Re-centre on the kept samples until the rule flags nothing new.

    Refinement stops early rather than let flagged samples reach half the
    series, so the steady state stays the strict majority.
    """
    while True:
        kept = x[~mask]
        center = float(np.median(kept))
        scale = MAD_SCALE * float(np.median(np.abs(kept - center)))
        new = ~mask & (np.abs(x - center) > threshold * scale)
        if not new.any() or 2 * int((mask | new).sum()) >= x.size:
            return mask, center, scale
        mask = mask | new


def detect_jumps(freqs: Sequence[float], threshold: float = JUMP_THRESHOLD) -> JumpResult:
    """Flag samples taken while the qubit frequency sat away from its steady state.

    Samples further than ``threshold`` scaled MADs from the median are jump
    samples.  Median and MAD are then recomputed on the kept samples until
    nothing new is flagged, which makes the detector idempotent.  The split falls back to exact two-means clustering when the MAD
    is zero while samples differ from the median, or when the data form two
    well separated clusters that the MAD rule leaves unflagged (a near 50/50
    split).  The larger cluster is the steady state; on an exact tie the
    cluster containing the first sample wins and ``ambiguous`` is set.
    """
    x = np.asarray(freqs, dtype=float)
    if x.size < 20:
        raise ValueError(f"need at least 20 frequency samples, got {x.size}")
    center = float(np.median(x))
    scale = MAD_SCALE * float(np.median(np.abs(x - center)))
    method, ambiguous = "mad", False

    if scale > 0:
        mask = np.abs(x - center) > threshold * scale
        fallback = False
        if not mask.any():
            upper = _two_means(x)
            fallback = _separated(x, upper, threshold)
    else:
        mask = x != center
        fallback = bool(mask.any())
        if fallback:
            upper = _two_means(x)

    if fallback:
        method = "two-means"
        n_up = int(upper.sum())
        n_low = x.size - n_up
        if n_up == n_low:
            ambiguous = True
            steady_upper = bool(upper[0])
        else:
            steady_upper = n_up > n_low
        mask = ~upper if steady_upper else upper

    if mask.any():
        mask, center, scale = _refine(x, mask, threshold)

    return JumpResult(
        jump_mask=mask,
        steady_state_freq=float(np.mean(x[~mask])),
        center=center,
        scale=scale,
        method=method,
        ambiguous=ambiguous,
    )


_RHO_SNAP = 64 * np.finfo(float).eps


def normalized_covariance(a: Sequence[float], b: Sequence[float]) -> Optional[float]:
    """(<ab> - <a><b>) / (sigma_a sigma_b) with population sigmas; None if a sigma is zero."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    da, db = a - a.mean(), b - b.mean()
    va, vb = np.mean(da * da), np.mean(db * db)
    if va == 0 or vb == 0:
        return None
    rho = float(np.mean(da * db) / math.sqrt(va * vb))
    # exact linear dependence leaves only rounding error; report it as exactly +-1
    if 1.0 - abs(rho) <= _RHO_SNAP:
        return math.copysign(1.0, rho)
    return rho


def series_statistics(
    t1s: Sequence[float],
    tphis: Sequence[float],
    freqs: Optional[Sequence[float]] = None,
    threshold: float = JUMP_THRESHOLD,
) -> SeriesStats:
    """Means, population standard deviations and normalized covariance of T1 and Tphi.

    When ``freqs`` (one qubit-frequency estimate per repetition) is given,
    jump samples are detected with :func:`detect_jumps` and the steady-state
    frequency and mask are included.
    """
    a = np.asarray(t1s, dtype=float)
    b = np.asarray(tphis, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("T1 and Tphi series must be 1-D and equal length")
    if a.size < 3:
        raise ValueError(f"need at least 3 samples, got {a.size}")
    rho = normalized_covariance(a, b)
    notes = ["standard deviations are population (ddof=0)"]
    if rho is None:
        notes.append("rho not computable: zero variance")
    steady, mask = None, None
    if freqs is not None:
        jumps = detect_jumps(freqs, threshold)
        steady, mask = jumps.steady_state_freq, jumps.jump_mask
        notes.append(f"jump detection: {jumps.method}, {int(mask.sum())} of {mask.size} samples flagged")
    return SeriesStats(
        mean_t1=float(a.mean()),
        std_t1=float(a.std()),
        mean_tphi=float(b.mean()),
        std_tphi=float(b.std()),
        rho=rho,
        n=int(a.size),
        steady_state_freq=steady,
        jump_mask=mask,
        notes=notes,
    )


def tphi_series(t1s: Sequence[float], t2s: Sequence[float]) -> np.ndarray:
    """Elementwise pure dephasing times from paired T1, T2."""
    return np.array([t_phi_from_t1_t2(a, b) for a, b in zip(t1s, t2s)])
