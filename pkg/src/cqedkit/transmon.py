"""Charge-basis diagonalization of a single-junction transmon.

The Hamiltonian in the Cooper-pair number basis ``n = -N..N`` is

    H = 4 EC (n - ng)^2 - EJ/2 (|n><n+1| + h.c.)

which is tridiagonal, so the dense problem is never formed during solves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .constants import frequency_to_energy, hbar

# Doubling the cutoff must move every requested level by less than this.
CONVERGENCE_HZ = 1e3


class ConvergenceError(RuntimeError):
    """A truncated basis failed its convergence check."""

    def __init__(self, message: str, drift: float):
        super().__init__(message)
        self.drift = drift


@dataclass(frozen=True)
class TransmonParams:
    """Transmon circuit parameters; energies in joules.

    Use :meth:`from_ghz` for the usual EJ/h, EC/h quoting.
    """

    EJ: float
    EC: float
    ng: float = 0.0
    n_charge_cutoff: int = 15

    def __post_init__(self):
        if not (self.EJ > 0 and self.EC > 0):
            raise ValueError(f"EJ and EC must be positive (got EJ={self.EJ}, EC={self.EC})")
        if self.EJ / self.EC <= 1:
            raise ValueError(f"EJ/EC = {self.EJ / self.EC:.3g} is outside the transmon regime (> 1)")
        if int(self.n_charge_cutoff) != self.n_charge_cutoff or self.n_charge_cutoff < 10:
            raise ValueError(f"n_charge_cutoff must be an integer >= 10, got {self.n_charge_cutoff}")

    @classmethod
    def from_ghz(cls, ej_ghz: float, ec_ghz: float, ng: float = 0.0, n_charge_cutoff: int = 15):
        return cls(
            EJ=frequency_to_energy(ej_ghz * 1e9),
            EC=frequency_to_energy(ec_ghz * 1e9),
            ng=ng,
            n_charge_cutoff=n_charge_cutoff,
        )

    @property
    def ratio(self) -> float:
        return self.EJ / self.EC


@dataclass(frozen=True)
class TransmonSpectrum:
    levels: np.ndarray  # J, levels[0] == 0
    n_matrix: np.ndarray  # |<i|n|j>|
    params_echo: TransmonParams
    cutoff_drift: float = field(default=0.0)  # J, observed change on doubling the cutoff

    @property
    def omegas(self) -> np.ndarray:
        """Uncoupled level frequencies (E_i - E_0)/hbar in rad/s."""
        return self.levels / hbar

    @property
    def anharmonicity(self) -> float:
        """(E2 - E1) - (E1 - E0) in joules."""
        return (self.levels[2] - self.levels[1]) - (self.levels[1] - self.levels[0])


def charge_hamiltonian(EJ: float, EC: float, ng: float, n_cutoff: int) -> np.ndarray:
    """Dense charge-basis Hamiltonian for arbitrary (EJ >= 0, cutoff >= 1).

    No regime checks; :func:`build_charge_hamiltonian` is the validated entry point.
    """
    n = np.arange(-n_cutoff, n_cutoff + 1, dtype=float)
    H = np.diag(4.0 * EC * (n - ng) ** 2)
    off = np.full(2 * n_cutoff, -EJ / 2.0)
    H += np.diag(off, 1) + np.diag(off, -1)
    return H


def build_charge_hamiltonian(p: TransmonParams) -> np.ndarray:
    return charge_hamiltonian(p.EJ, p.EC, p.ng, p.n_charge_cutoff)


def _solve(EJ, EC, ng, n_cutoff, n_levels, vectors=True):
    n = np.arange(-n_cutoff, n_cutoff + 1, dtype=float)
    diag = 4.0 * EC * (n - ng) ** 2
    off = np.full(2 * n_cutoff, -EJ / 2.0)
    sel = (0, n_levels - 1)
    try:
        if vectors:
            evals, evecs = eigh_tridiagonal(diag, off, select="i", select_range=sel)
            return evals, evecs, n
        return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=sel), None, n
    except LinAlgError as exc:
        raise RuntimeError(f"transmon eigensolver failed: {exc}") from exc


def diagonalize_transmon(p: TransmonParams, n_levels: int, check_convergence: bool = True) -> TransmonSpectrum:
    """Lowest ``n_levels`` transmon levels and charge matrix elements.

    Parameters
    ----------
    p : TransmonParams
    n_levels : int
        Number of levels to return, at most ``2*n_charge_cutoff - 3``.
    check_convergence : bool
        Re-solve with the cutoff doubled and raise :class:`ConvergenceError`
        if any returned level moves by more than 1 kHz.
    """
    N = p.n_charge_cutoff
    if not 1 <= n_levels <= 2 * N - 3:
        raise ValueError(f"n_levels must be in [1, {2 * N - 3}] for cutoff {N}, got {n_levels}")
    evals, evecs, n = _solve(p.EJ, p.EC, p.ng, N, n_levels)
    levels = evals - evals[0]
    n_matrix = np.abs(evecs.T @ (n[:, None] * evecs))

    drift = 0.0
    if check_convergence:
        ref, _, _ = _solve(p.EJ, p.EC, p.ng, 2 * N, n_levels, vectors=False)
        drift = float(np.max(np.abs((ref - ref[0]) - levels)))
        limit = frequency_to_energy(CONVERGENCE_HZ)
        if drift >= limit:
            raise ConvergenceError(
                f"transmon levels drift by {drift / frequency_to_energy(1.0):.3g} Hz when the charge "
                f"cutoff is doubled from {N}; increase n_charge_cutoff",
                drift,
            )
    return TransmonSpectrum(levels=levels, n_matrix=n_matrix, params_echo=p, cutoff_drift=drift)


def charge_matrix_element_asymptotic(p: TransmonParams, j: int) -> float:
    """Harmonic-limit |<j+1|n|j>| = sqrt((j+1)/2) (EJ / 8EC)^(1/4)."""
    if j < 0:
        raise ValueError("level index must be non-negative")
    return float(np.sqrt((j + 1) / 2.0) * (p.EJ / (8.0 * p.EC)) ** 0.25)
