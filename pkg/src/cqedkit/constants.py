"""Physical constants, tagged scalar quantities and unit conversions.

All internal values are SI (Hz, rad/s, J, K, s, 1/s).  The exact SI-2019
defining constants are used, so no rounding enters from constant tables.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class PhysConstants:
    h: float = 6.62607015e-34
    kB: float = 1.380649e-23
    e_charge: float = 1.602176634e-19

    @property
    def hbar(self) -> float:
        return self.h / (2.0 * math.pi)


CONST = PhysConstants()
h = CONST.h
hbar = CONST.hbar
kB = CONST.kB
e_charge = CONST.e_charge


class Kind(enum.Enum):
    LINEAR_FREQUENCY = "Hz"
    ANGULAR_FREQUENCY = "rad/s"
    ENERGY = "J"
    TEMPERATURE = "K"
    RATE = "1/s"
    TIME = "s"
    DIMENSIONLESS = "1"


class UnitError(ValueError):
    """Raised when quantities of different kinds are mixed or a unit is malformed."""


@dataclass(frozen=True)
class Quantity:
    """A scalar tagged with its physical kind.

    Only quantities of the same kind may be added, subtracted or compared;
    anything else must go through one of the explicit conversion functions.
    """

    value: float
    kind: Kind

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise UnitError(f"non-finite {self.kind.name.lower()} value {self.value!r}")

    def _same(self, other: "Quantity") -> None:
        if not isinstance(other, Quantity):
            raise UnitError(f"cannot combine {self.kind.name} with bare {type(other).__name__}")
        if other.kind is not self.kind:
            raise UnitError(f"cannot combine {self.kind.name} with {other.kind.name}")

    def __add__(self, other: "Quantity") -> "Quantity":
        self._same(other)
        return Quantity(self.value + other.value, self.kind)

    def __sub__(self, other: "Quantity") -> "Quantity":
        self._same(other)
        return Quantity(self.value - other.value, self.kind)

    def __lt__(self, other: "Quantity") -> bool:
        self._same(other)
        return self.value < other.value

    def __le__(self, other: "Quantity") -> bool:
        self._same(other)
        return self.value <= other.value

    def scaled(self, factor: float) -> "Quantity":
        return Quantity(self.value * factor, self.kind)

    def ratio(self, other: "Quantity") -> float:
        self._same(other)
        return self.value / other.value

    def __float__(self) -> float:
        return float(self.value)


Scalar = Union[float, Quantity]


def _unwrap(x: Scalar, expected: Kind) -> tuple[float, bool]:
    if isinstance(x, Quantity):
        if x.kind is not expected:
            raise UnitError(f"expected {expected.name}, got {x.kind.name}")
        return x.value, True
    return float(x), False


def _wrap(value: float, kind: Kind, tagged: bool) -> Scalar:
    return Quantity(value, kind) if tagged else value


def linear_to_angular(f: Scalar) -> Scalar:
    v, tagged = _unwrap(f, Kind.LINEAR_FREQUENCY)
    return _wrap(2.0 * math.pi * v, Kind.ANGULAR_FREQUENCY, tagged)


def angular_to_linear(omega: Scalar) -> Scalar:
    v, tagged = _unwrap(omega, Kind.ANGULAR_FREQUENCY)
    return _wrap(v / (2.0 * math.pi), Kind.LINEAR_FREQUENCY, tagged)


def frequency_to_energy(f: Scalar) -> Scalar:
    """Photon energy ``h*f`` of a linear frequency."""
    v, tagged = _unwrap(f, Kind.LINEAR_FREQUENCY)
    return _wrap(h * v, Kind.ENERGY, tagged)


def energy_to_frequency(E: Scalar) -> Scalar:
    v, tagged = _unwrap(E, Kind.ENERGY)
    return _wrap(v / h, Kind.LINEAR_FREQUENCY, tagged)


def temperature_to_energy(T: Scalar) -> Scalar:
    """Thermal energy ``kB*T``; negative temperatures are rejected."""
    v, tagged = _unwrap(T, Kind.TEMPERATURE)
    if v < 0:
        raise ValueError(f"temperature must be non-negative, got {v} K")
    return _wrap(kB * v, Kind.ENERGY, tagged)


def rate_to_time(rate: Scalar) -> Scalar:
    v, tagged = _unwrap(rate, Kind.RATE)
    return _wrap(math.inf if v == 0 else 1.0 / v, Kind.TIME, tagged)


# Unit suffixes accepted on the command line and in config files.  Each maps
# to (kind, multiplier to SI).  Linear frequencies stay linear: a flag such
# as ``--g01 0.1235GHz`` means g01/2pi, converted by the caller.
_UNITS: dict[str, tuple[Kind, float]] = {
    "Hz": (Kind.LINEAR_FREQUENCY, 1.0),
    "kHz": (Kind.LINEAR_FREQUENCY, 1e3),
    "MHz": (Kind.LINEAR_FREQUENCY, 1e6),
    "GHz": (Kind.LINEAR_FREQUENCY, 1e9),
    "rad/s": (Kind.ANGULAR_FREQUENCY, 1.0),
    "K": (Kind.TEMPERATURE, 1.0),
    "mK": (Kind.TEMPERATURE, 1e-3),
    "uK": (Kind.TEMPERATURE, 1e-6),
    "s": (Kind.TIME, 1.0),
    "ms": (Kind.TIME, 1e-3),
    "us": (Kind.TIME, 1e-6),
    "ns": (Kind.TIME, 1e-9),
    "/s": (Kind.RATE, 1.0),
    "1/s": (Kind.RATE, 1.0),
    "/ms": (Kind.RATE, 1e3),
    "/us": (Kind.RATE, 1e6),
    "J": (Kind.ENERGY, 1.0),
    "eV": (Kind.ENERGY, e_charge),
    "meV": (Kind.ENERGY, 1e-3 * e_charge),
    "ueV": (Kind.ENERGY, 1e-6 * e_charge),
    "%": (Kind.DIMENSIONLESS, 1e-2),
}

_QUANTITY_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(1/\S+|[^\s\d.+\-]\S*)\s*$")


def parse_quantity(text: str) -> Quantity:
    """Parse a unit-suffixed scalar such as ``"6.9348GHz"`` or ``"80mK"``.

    A bare number is rejected: every physical scalar must carry its unit.
    """
    m = _QUANTITY_RE.match(text.replace("µ", "u").replace("μ", "u"))
    if m is None:
        raise UnitError(f"{text!r}: expected a number followed by a unit suffix (e.g. 5.19GHz, 80mK, 20us)")
    number, suffix = m.groups()
    if suffix not in _UNITS:
        raise UnitError(f"{text!r}: unknown unit {suffix!r}; known units: {', '.join(_UNITS)}")
    kind, mult = _UNITS[suffix]
    return Quantity(float(number) * mult, kind)
