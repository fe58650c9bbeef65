"""Dielectric perturbation of a 3D cavity-transmon system.

Filling the cavity with a dielectric of relative permittivity eps lowers the
cavity frequency as 1/sqrt(eps) and changes the vacuum Rabi coupling

    g01 = 2 e V_zpf beta <1|n|0>

through three factors: the zero-point voltage (V_zpf ~ eps^-3/4 for an LC
mode whose capacitance scales with eps), the capacitive divider
beta = Cg^2 / (Cg^2 + 2 Cq Cg) and the charge matrix element (~ Cq^1/4).
All fractional changes are plain fractions, e.g. 0.0078 for +0.78 %.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

EPSILON_HELIUM = 1.057  # bulk superfluid 4He


@dataclass(frozen=True)
class DielectricInputs:
    """Perturbation inputs.  ``cg_over_cq=None`` selects the small-Cg limit."""

    epsilon: float
    delta_cq: float
    delta_cg: float
    cg_over_cq: Optional[float] = None

    def __post_init__(self):
        if self.epsilon < 1:
            raise ValueError(f"epsilon must be >= 1, got {self.epsilon}")
        if abs(self.delta_cq) >= 0.2 or abs(self.delta_cg) >= 0.2:
            raise ValueError("capacitance changes must stay below 20 % for the perturbative model")
        if self.cg_over_cq is not None and self.cg_over_cq <= 0:
            raise ValueError("cg_over_cq must be positive")


def epsilon_from_frequencies(f_empty: float, f_full: float) -> float:
    """Effective permittivity (f_empty / f_full)^2 from bare cavity frequencies."""
    if not (f_full > 0 and f_empty > 0):
        raise ValueError("cavity frequencies must be positive")
    if f_full > f_empty:
        raise ValueError(f"filled-cavity frequency {f_full} exceeds the empty value {f_empty}; a dielectric cannot raise it")
    return (f_empty / f_full) ** 2


def shifted_cavity_frequency(f_bare: float, epsilon: float) -> float:
    if epsilon < 1:
        raise ValueError(f"epsilon must be >= 1, got {epsilon}")
    return f_bare / math.sqrt(epsilon)


def vzpf_scale(epsilon: float) -> float:
    """Multiplicative change eps^(-3/4) of the cavity zero-point voltage."""
    if epsilon < 1:
        raise ValueError(f"epsilon must be >= 1, got {epsilon}")
    return math.exp(-0.75 * math.log(epsilon))


def beta(cg: float, cq: float) -> float:
    if cg <= 0 or cq <= 0:
        raise ValueError("capacitances must be positive")
    if math.isinf(cg):
        return 1.0
    return cg / (cg + 2.0 * cq)


def ec_shift_from_cq(delta_cq: float) -> float:
    """Fractional change of EC (~ 1/Cq) for a fractional change of Cq."""
    if delta_cq <= -1:
        raise ValueError("delta_cq must exceed -1")
    return 1.0 / (1.0 + delta_cq) - 1.0


def beta_ratio(inp: DielectricInputs) -> float:
    """beta_full / beta_empty."""
    if inp.cg_over_cq is None:
        return (1.0 + inp.delta_cg) / (1.0 + inp.delta_cq)
    r = inp.cg_over_cq
    return beta(r * (1.0 + inp.delta_cg), 1.0 + inp.delta_cq) / beta(r, 1.0)


def matrix_element_scale(delta_cq: float) -> float:
    return (1.0 + delta_cq) ** 0.25


def delta_g01_model(inp: DielectricInputs) -> float:
    """Predicted fractional change of g01 on filling."""
    return vzpf_scale(inp.epsilon) * beta_ratio(inp) * matrix_element_scale(inp.delta_cq) - 1.0


def delta_g01_factors(inp: DielectricInputs) -> dict[str, float]:
    """The three multiplicative factors of :func:`delta_g01_model`, for reporting."""
    return {
        "vzpf_scale": vzpf_scale(inp.epsilon),
        "beta_ratio": beta_ratio(inp),
        "matrix_element_scale": matrix_element_scale(inp.delta_cq),
        "delta_g01": delta_g01_model(inp),
    }
