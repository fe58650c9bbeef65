"""Seeded synthetic measurement data with known ground truth.

Every generator draws from :class:`cqedkit.rng.Stream` seeded with
``spec.seed``, so a spec reproduces the same bytes on every platform and
with either kernel backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .decoherence import QuasiparticleParams, t1_model_vs_temperature
from .rng import Stream
from .traces import TraceRecord

KINDS = ("t1-decay", "ramsey", "frequency-series", "t1-vs-temperature")

# Counter offset for the second, independent sub-stream of one spec.
_SUBSTREAM = 1 << 48

_DEFAULTS: dict[str, dict[str, float]] = {
    "t1-decay": {"T1": 20e-6, "A": 0.95, "B": 0.03, "t_max": 100e-6},
    "ramsey": {"T2": 15e-6, "delta_f": 300e3, "phase": 0.0, "A": 0.5, "B": 0.5, "t_max": 60e-6},
    "frequency-series": {"f0": 5.1914e9, "amplitude": 40e3, "jitter": 1e3, "dwell_steady": 45.0, "dwell_jump": 5.0},
    "t1-vs-temperature": {
        "gap": 160e-6 * 1.602176634e-19,
        "x_neq": 5.25e-6,
        "omega01": 2 * math.pi * 5.1914e9,
        "t_min": 0.060,
        "t_max": 0.220,
        "rel_noise": 0.05,
    },
}


@dataclass(frozen=True)
class SynthSpec:
    kind: str
    ground_truth: Mapping[str, float] = field(default_factory=dict)
    n_points: int = 50
    n_shots: int = 1000
    seed: int = 0
    noiseless: bool = False
    trace_id: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown synth kind {self.kind!r}; expected one of {KINDS}")
        unknown = set(self.ground_truth) - set(_DEFAULTS[self.kind])
        if unknown:
            raise ValueError(f"unknown ground-truth parameters for {self.kind}: {sorted(unknown)}")
        if self.n_points < 1 or self.n_shots < 1:
            raise ValueError("n_points and n_shots must be positive")

    def truth(self) -> dict[str, Any]:
        """Ground truth with defaults filled in."""
        return {**_DEFAULTS[self.kind], **self.ground_truth}

    @property
    def label(self) -> str:
        return self.trace_id or f"{self.kind}-{self.seed}"


def _sample(spec: SynthSpec, times: np.ndarray, p: np.ndarray) -> TraceRecord:
    if np.any((p < 0) | (p > 1)):
        raise ValueError("ground truth produces probabilities outside [0, 1]; check A and B")
    if spec.noiseless:
        values = p
    else:
        values = Stream(spec.seed).binomial(spec.n_shots, p) / spec.n_shots
    return TraceRecord(spec.label, times, values, spec.n_shots)


def _require(spec: SynthSpec, kind: str) -> dict[str, Any]:
    if spec.kind != kind:
        raise ValueError(f"expected a {kind} spec, got {spec.kind}")
    return spec.truth()


def gen_t1_trace(spec: SynthSpec) -> TraceRecord:
    """p(t) = A exp(-t/T1) + B on ``n_points`` delays from 0 to t_max."""
    g = _require(spec, "t1-decay")
    t = np.linspace(0.0, g["t_max"], spec.n_points)
    return _sample(spec, t, g["A"] * np.exp(-t / g["T1"]) + g["B"])


def gen_ramsey_trace(spec: SynthSpec) -> TraceRecord:
    """p(t) = A exp(-t/T2) cos(2 pi df t + phase) + B."""
    g = _require(spec, "ramsey")
    t = np.linspace(0.0, g["t_max"], spec.n_points)
    p = g["A"] * np.exp(-t / g["T2"]) * np.cos(2 * np.pi * g["delta_f"] * t + g["phase"]) + g["B"]
    return _sample(spec, t, p)


def gen_frequency_series(spec: SynthSpec) -> tuple[np.ndarray, np.ndarray]:
    """Two-state telegraph frequency record with white jitter.

    Dwell lengths (in samples) are exponential with means ``dwell_steady``
    and ``dwell_jump``, rounded up to at least one sample; an infinite mean
    means the state never changes.  The record starts in the steady state.

    Returns
    -------
    freqs : ndarray
        Frequencies in Hz.
    labels : ndarray of bool
        True while the qubit sits at the jumped level.
    """
    g = _require(spec, "frequency-series")
    n = spec.n_points
    labels = np.zeros(n, dtype=bool)
    stream = Stream(spec.seed)
    i, state = 0, False
    while i < n:
        mean = g["dwell_jump"] if state else g["dwell_steady"]
        if math.isinf(mean):
            length = n - i
        else:
            length = max(1, math.ceil(mean * float(stream.exponential(1)[0])))
        labels[i : i + length] = state
        i += length
        state = not state
    jitter = Stream(spec.seed, start=_SUBSTREAM).normal(n) * g["jitter"]
    freqs = g["f0"] + g["amplitude"] * labels + (0.0 if spec.noiseless else 1.0) * jitter
    return freqs, labels


def gen_t1_vs_temperature(spec: SynthSpec) -> np.ndarray:
    """Rows of (temperature K, T1 s, sigma_T1 s) from the quasiparticle model.

    Each T1 carries Gaussian noise of relative size ``rel_noise`` and the
    same value is reported as its uncertainty.
    """
    g = _require(spec, "t1-vs-temperature")
    temps = np.linspace(g["t_min"], g["t_max"], spec.n_points)
    p = QuasiparticleParams(gap=g["gap"], x_neq=g["x_neq"], omega01=g["omega01"])
    t1 = np.array([t1_model_vs_temperature(p, T) for T in temps])
    if spec.noiseless:
        noisy = t1
    else:
        noisy = t1 * (1.0 + g["rel_noise"] * Stream(spec.seed).normal(spec.n_points))
    return np.column_stack([temps, noisy, g["rel_noise"] * t1])
