import math

import pytest
from hypothesis import settings

from cqedkit.jaynes_cummings import JchSystem, SpectroObservables
from cqedkit.transmon import TransmonParams

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

TWO_PI = 2 * math.pi

# Published device values, GHz (measured rows and fitted rows).
EMPTY = dict(omega_c=6.9348, delta_omega=0.00875, omega01=5.1914, omega12=4.8834, EJ=13.887, EC=0.2710, g01=0.1235)
FULL = dict(omega_c=6.7540, delta_omega=0.00913, omega01=5.1747, omega12=4.8695, EJ=13.895, EC=0.2690, g01=0.1201)


def measured(row) -> SpectroObservables:
    return SpectroObservables.from_ghz(row["omega_c"], row["delta_omega"], row["omega01"], row["omega12"])


def system(row, **kw) -> JchSystem:
    tp = TransmonParams.from_ghz(row["EJ"], row["EC"])
    return JchSystem(tp, TWO_PI * row["omega_c"] * 1e9, TWO_PI * row["g01"] * 1e9, **kw)


@pytest.fixture(params=["empty", "full"])
def device_row(request):
    return EMPTY if request.param == "empty" else FULL


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
