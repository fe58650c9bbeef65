"""Circuit-QED modeling and coherence-trace analysis for a dielectric-filled 3D transmon."""

__version__ = "0.1.0"

from .constants import CONST, Kind, Quantity, parse_quantity  # noqa: E402
from .transmon import TransmonParams, TransmonSpectrum, diagonalize_transmon  # noqa: E402
from .jaynes_cummings import (  # noqa: E402
    JchSystem,
    SpectroObservables,
    dispersive_chi,
    dressed_observables,
)
from .estimation import FitResult, fit_spectroscopy, fit_t1_vs_temperature  # noqa: E402
from .rng import BACKEND  # noqa: E402

__all__ = [
    "CONST",
    "Kind",
    "Quantity",
    "parse_quantity",
    "TransmonParams",
    "TransmonSpectrum",
    "diagonalize_transmon",
    "JchSystem",
    "SpectroObservables",
    "dressed_observables",
    "dispersive_chi",
    "FitResult",
    "fit_spectroscopy",
    "fit_t1_vs_temperature",
    "BACKEND",
]
