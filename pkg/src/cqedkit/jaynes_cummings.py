"""Generalized Jaynes-Cummings model of a transmon coupled to one cavity mode.

The product basis is ``|i> (x) |n>`` with transmon level ``i`` and photon
number ``n``; the flat index is ``i * n_photons + n``.  Couplings follow the
rotating-wave form ``hbar g_{i,i+1} (|i><i+1| a^dag + h.c.)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import hbar
from .transmon import CONVERGENCE_HZ, ConvergenceError, TransmonParams, diagonalize_transmon

Label = tuple[int, int]

# A dressed state is assigned a bare label only above this squared overlap.
OVERLAP_FLOOR = 0.5
# exact resonance gives 0.5 plus rounding noise; treat that as ambiguous
_FLOOR_TOL = 1e-9


class StrongMixingError(RuntimeError):
    """A dressed state cannot be unambiguously identified with a bare state."""

    def __init__(self, label: Label, overlap: float):
        super().__init__(
            f"strong mixing: no dressed state overlaps bare state |q={label[0]}, n={label[1]}> "
            f"by more than {OVERLAP_FLOOR} (best {overlap:.3f}); the system is too close to resonance "
            "for dispersive labeling"
        )
        self.label = label
        self.overlap = overlap


@dataclass(frozen=True)
class JchSystem:
    """Cavity + transmon system; frequencies and coupling are angular (rad/s).

    ``coupling="ladder"`` uses g_{i,i+1} = g01 sqrt(i+1).  ``coupling="exact"``
    scales g01 by the ratio of exact charge matrix elements instead.
    """

    transmon: TransmonParams
    omega_c_bare: float
    g01: float
    n_transmon_levels: int = 4
    n_photons: int = 12
    coupling: str = "ladder"

    def __post_init__(self):
        if self.g01 < 0:
            raise ValueError("g01 must be non-negative; the spectrum does not depend on its sign")
        if self.omega_c_bare <= 0:
            raise ValueError("cavity frequency must be positive")
        if self.n_transmon_levels < 4:
            raise ValueError("n_transmon_levels must be >= 4")
        if self.n_photons < 5:
            raise ValueError("n_photons must be >= 5")
        if self.coupling not in ("ladder", "exact"):
            raise ValueError(f"unknown coupling model {self.coupling!r}")

    @property
    def dimension(self) -> int:
        return self.n_transmon_levels * self.n_photons

    def with_truncation(self, n_transmon_levels: int, n_photons: int) -> "JchSystem":
        return JchSystem(self.transmon, self.omega_c_bare, self.g01, n_transmon_levels, n_photons, self.coupling)


@dataclass(frozen=True)
class SpectroObservables:
    """Measured spectroscopic quartet, all angular frequencies in rad/s."""

    omega_c_bare: float
    delta_omega: float
    omega01: float
    omega12: float

    def __post_init__(self):
        for name in ("omega_c_bare", "omega01", "omega12"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        # the pull is negative for a qubit above the cavity and zero without coupling
        if not math.isfinite(self.delta_omega):
            raise ValueError(f"delta_omega must be finite, got {self.delta_omega}")
        if self.omega12 >= self.omega01:
            raise ValueError("omega12 must be below omega01 (negative anharmonicity)")

    @classmethod
    def from_ghz(cls, omega_c, delta_omega, omega01, omega12):
        s = 2e9 * math.pi
        return cls(omega_c * s, delta_omega * s, omega01 * s, omega12 * s)

    def as_ghz(self) -> dict[str, float]:
        s = 2e9 * math.pi
        return {
            "omega_c": self.omega_c_bare / s,
            "delta_omega": self.delta_omega / s,
            "omega01": self.omega01 / s,
            "omega12": self.omega12 / s,
        }


@dataclass(frozen=True)
class DressedSpectrum:
    energies: dict[Label, float]  # J
    overlaps: dict[Label, float]
    system_echo: JchSystem = field(repr=False)

    def energy(self, label: Label) -> float:
        if label not in self.energies:
            raise StrongMixingError(label, self.overlaps.get(label, 0.0))
        return self.energies[label]


def jch_matrix(omegas, omega_c: float, couplings, n_photons: int) -> np.ndarray:
    """Hamiltonian (J) from bare level frequencies and per-transition couplings.

    ``omegas[i]`` is the angular frequency of transmon level ``i`` (with
    ``omegas[0] == 0``) and ``couplings[i]`` the angular coupling between
    levels ``i`` and ``i+1``.
    """
    omegas = np.asarray(omegas, dtype=float)
    couplings = np.asarray(couplings, dtype=float)
    nq = omegas.size
    if couplings.size != nq - 1:
        raise ValueError("need one coupling per adjacent level pair")
    photons = np.arange(n_photons)
    diag = (omegas[:, None] + omega_c * photons[None, :]).ravel()
    H = np.diag(hbar * diag)
    sqrt_n = np.sqrt(photons[1:])
    for i in range(nq - 1):
        # (i, n) <-> (i+1, n-1) for n = 1..n_photons-1
        rows = i * n_photons + photons[1:]
        cols = (i + 1) * n_photons + photons[1:] - 1
        vals = hbar * couplings[i] * sqrt_n
        H[rows, cols] = vals
        H[cols, rows] = vals
    return H


def _couplings(sys: JchSystem, spectrum) -> np.ndarray:
    idx = np.arange(sys.n_transmon_levels - 1)
    if sys.coupling == "ladder":
        return sys.g01 * np.sqrt(idx + 1.0)
    nm = spectrum.n_matrix
    return sys.g01 * nm[idx, idx + 1] / nm[0, 1]


def build_jch(sys: JchSystem, check_convergence: bool = True) -> np.ndarray:
    spectrum = diagonalize_transmon(sys.transmon, sys.n_transmon_levels, check_convergence=check_convergence)
    return jch_matrix(spectrum.omegas, sys.omega_c_bare, _couplings(sys, spectrum), sys.n_photons)


def dressed_spectrum(sys: JchSystem, check_convergence: bool = True) -> DressedSpectrum:
    """Diagonalize and label dressed states by maximum overlap with bare states.

    For each bare label the dressed state with the largest squared overlap
    is chosen (ties go to the lower energy).  Labels whose best overlap does
    not exceed 0.5 are omitted; asking for one raises StrongMixingError.
    """
    H = build_jch(sys, check_convergence=check_convergence)
    evals, evecs = np.linalg.eigh(H)
    weights = evecs**2  # rows: bare, cols: dressed (ascending energy)
    best = np.argmax(weights, axis=1)
    best_w = weights[np.arange(weights.shape[0]), best]
    energies, overlaps = {}, {}
    for flat in range(H.shape[0]):
        label = divmod(flat, sys.n_photons)
        overlaps[label] = float(best_w[flat])
        if best_w[flat] > OVERLAP_FLOOR + _FLOOR_TOL:
            energies[label] = float(evals[best[flat]])
    return DressedSpectrum(energies=energies, overlaps=overlaps, system_echo=sys)


def _observables(sys: JchSystem, check_convergence: bool) -> np.ndarray:
    ds = dressed_spectrum(sys, check_convergence=check_convergence)
    E00, E10, E20, E01 = (ds.energy(lab) for lab in ((0, 0), (1, 0), (2, 0), (0, 1)))
    return np.array([(E10 - E00) / hbar, (E20 - E10) / hbar, (E01 - E00) / hbar - sys.omega_c_bare])


def dressed_observables(sys: JchSystem, check_convergence: bool = True) -> SpectroObservables:
    """Dressed omega01, omega12 and ground-state cavity pull of ``sys``.

    With ``check_convergence`` the calculation is repeated with both
    truncations raised by two; a change above 1 kHz in any observable raises
    :class:`ConvergenceError`.
    """
    w01, w12, dw = _observables(sys, check_convergence)
    if check_convergence:
        bigger = sys.with_truncation(sys.n_transmon_levels + 2, sys.n_photons + 2)
        ref = _observables(bigger, check_convergence=False)
        drift = float(np.max(np.abs(ref - (w01, w12, dw)))) / (2 * math.pi)
        if drift >= CONVERGENCE_HZ:
            raise ConvergenceError(
                f"dressed observables drift by {drift:.3g} Hz when truncations are raised by 2; "
                "increase n_transmon_levels / n_photons",
                drift,
            )
    return SpectroObservables(omega_c_bare=sys.omega_c_bare, delta_omega=dw, omega01=w01, omega12=w12)


def dispersive_shift_approx(g01: float, omega_c: float, omega01: float) -> float:
    """Dispersive-limit cavity pull g01^2 / (omega_c - omega01)."""
    detuning = omega_c - omega01
    if detuning == 0:
        raise ValueError("zero qubit-cavity detuning: the dispersive approximation does not apply")
    return g01**2 / detuning


def dispersive_chi(sys: JchSystem) -> float:
    """Qubit frequency change per added cavity photon, in rad/s (signed).

    Defined as [E(1,1) - E(1,0) - E(0,1) + E(0,0)] / hbar.  This is the full
    photon-number splitting, i.e. twice the chi of the ``chi a^dag a sigma_z``
    convention.
    """
    ds = dressed_spectrum(sys, check_convergence=False)
    E = ds.energy
    return (E((1, 1)) - E((1, 0)) - E((0, 1)) + E((0, 0))) / hbar


def two_photon_frequency(obs: SpectroObservables) -> float:
    """Two-photon 0->2 drive frequency (omega01 + omega12) / 2."""
    return 0.5 * (obs.omega01 + obs.omega12)


def observables_converged_hz(sys: JchSystem) -> float:
    """Largest observable change (Hz) when both truncations are doubled."""
    a = _observables(sys, check_convergence=False)
    b = _observables(sys.with_truncation(2 * sys.n_transmon_levels, 2 * sys.n_photons), check_convergence=False)
    return float(np.max(np.abs(a - b))) / (2 * math.pi)


__all__ = [
    "JchSystem",
    "SpectroObservables",
    "DressedSpectrum",
    "StrongMixingError",
    "jch_matrix",
    "build_jch",
    "dressed_spectrum",
    "dressed_observables",
    "dispersive_shift_approx",
    "dispersive_chi",
    "two_photon_frequency",
    "observables_converged_hz",
]
