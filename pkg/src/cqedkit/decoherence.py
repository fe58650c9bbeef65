"""Closed-form relaxation and dephasing models for a transmon in a cavity.

Conventions: angular frequencies in rad/s, rates in 1/s, energies in J,
temperatures in K.  The superconducting gap is called ``gap`` to keep it
apart from the qubit-cavity detuning.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .constants import e_charge, hbar, kB

# Defaults derived from the device (see README): cavity linewidth inferred
# from the Purcell-limited lifetime, aluminium gap from the T1(T) fit.
KAPPA_DEFAULT = 2 * math.pi * 120e3
GAP_ALUMINIUM = 160e-6 * e_charge


class DispersiveLimitWarning(UserWarning):
    """kappa is not small compared with chi; the dephasing formula is outside its regime."""


@dataclass(frozen=True)
class QuasiparticleParams:
    gap: float
    x_neq: float
    omega01: float

    def __post_init__(self):
        if self.gap <= hbar * self.omega01:
            raise ValueError("superconducting gap must exceed the qubit photon energy")
        if self.x_neq < 0:
            raise ValueError("x_neq must be non-negative")


@dataclass(frozen=True)
class PhotonDephasingParams:
    """Set exactly one of ``n_th`` and ``t_ph``; the other is derived."""

    kappa: float
    chi: float
    omega_c: float
    n_th: Optional[float] = None
    t_ph: Optional[float] = None

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.chi == 0:
            raise ValueError("chi must be non-zero")
        if (self.n_th is None) == (self.t_ph is None):
            raise ValueError("give exactly one of n_th and t_ph")
        if self.n_th is not None and self.n_th < 0:
            raise ValueError("n_th must be non-negative")

    @property
    def n_thermal(self) -> float:
        return self.n_th if self.n_th is not None else n_th(self.omega_c, self.t_ph)


def x_qp_thermal(gap: float, T: float) -> float:
    """Thermal-equilibrium quasiparticle density sqrt(2 pi kT / gap) exp(-gap / kT)."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    r = kB * T / gap
    return math.sqrt(2 * math.pi * r) * math.exp(-1.0 / r)


def gamma_qp(p: QuasiparticleParams, x_total: float) -> float:
    """Quasiparticle tunneling rate (x / pi) sqrt(2 gap omega01 / hbar)."""
    if x_total < 0:
        raise ValueError("quasiparticle density must be non-negative")
    return x_total / math.pi * math.sqrt(2 * p.gap * p.omega01 / hbar)


def delta_omega01_qp(p: QuasiparticleParams, x_total: float) -> float:
    """Quasiparticle-induced qubit frequency shift (rad/s), -gamma_qp / 2."""
    return -0.5 * gamma_qp(p, x_total)


def t1_model_vs_temperature(p: QuasiparticleParams, T: float) -> float:
    return 1.0 / gamma_qp(p, p.x_neq + x_qp_thermal(p.gap, T))


def gamma_purcell(g01: float, detuning: float, kappa: float) -> float:
    if detuning == 0:
        raise ValueError("zero detuning: Purcell formula requires a dispersive qubit")
    return (g01 / detuning) ** 2 * kappa


def kappa_from_purcell(g01: float, detuning: float, t_purcell: float) -> float:
    """Invert the Purcell rate for the cavity linewidth."""
    return 1.0 / (t_purcell * (g01 / detuning) ** 2)


def n_th(omega_c: float, T: float) -> float:
    """Bose-Einstein occupation of a mode at angular frequency ``omega_c``."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    x = hbar * omega_c / (kB * T)
    # exp(-x) / (1 - exp(-x)) stays finite for very cold baths
    return math.exp(-x) / -math.expm1(-x)


def gamma_phi_photon(p: PhotonDephasingParams) -> float:
    """Thermal-photon dephasing n_th kappa chi^2 / (kappa^2 + chi^2).

    Issues :class:`DispersiveLimitWarning` when kappa >= |chi| but still
    evaluates the formula.
    """
    if p.kappa >= abs(p.chi):
        warnings.warn(
            f"kappa ({p.kappa:.3g} rad/s) >= |chi| ({abs(p.chi):.3g} rad/s): outside the kappa << chi limit",
            DispersiveLimitWarning,
            stacklevel=2,
        )
    return p.n_thermal * p.kappa * p.chi**2 / (p.kappa**2 + p.chi**2)


def photon_bath_temperature(gamma_phi: float, kappa: float, chi: float, omega_c: float) -> float:
    """Photon-bath temperature that reproduces a measured thermal dephasing rate."""
    if gamma_phi <= 0:
        raise ValueError("dephasing rate must be positive")
    nbar = gamma_phi * (kappa**2 + chi**2) / (kappa * chi**2)
    if not nbar > 0:
        raise ValueError(f"dephasing rate implies non-physical photon number {nbar}")
    return hbar * omega_c / kB / math.log1p(1.0 / nbar)


def t_phi_from_t1_t2(t1: float, t2: float) -> float:
    """Pure dephasing time (1/T2 - 1/(2 T1))^-1."""
    if t1 <= 0 or t2 <= 0:
        raise ValueError("T1 and T2 must be positive")
    rate = 1.0 / t2 - 0.5 / t1
    if rate <= 0:
        raise ValueError(f"unphysical input: T2 = {t2:.4g} s is not below 2*T1 = {2 * t1:.4g} s")
    return 1.0 / rate


def duffing_ladder(omega01: float, omega12: float) -> np.ndarray:
    """Cumulative angular frequencies of levels 0..3.

    Level 3 uses omega23 = omega01 + 2 (omega12 - omega01).
    """
    omega23 = omega01 + 2.0 * (omega12 - omega01)
    return np.cumsum([0.0, omega01, omega12, omega23])


def mb_populations(level_freqs: Sequence[float], T: float) -> np.ndarray:
    """Boltzmann populations of the four lowest levels (partition sum truncated at level 3)."""
    w = np.asarray(level_freqs, dtype=float)
    if w.shape != (4,):
        raise ValueError(f"need exactly 4 level frequencies (levels 0-3), got {w.size}")
    if w[0] != 0 or np.any(np.diff(w) <= 0):
        raise ValueError("level frequencies must start at 0 and increase")
    if T <= 0:
        raise ValueError("temperature must be positive")
    boltz = np.exp(-hbar * w / (kB * T))
    return boltz / boltz.sum()


def mb_population(level_freqs: Sequence[float], T: float, level: int) -> float:
    return float(mb_populations(level_freqs, T)[level])
