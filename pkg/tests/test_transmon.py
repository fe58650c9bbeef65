import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqedkit.constants import frequency_to_energy, h
from cqedkit.transmon import (
    ConvergenceError,
    TransmonParams,
    build_charge_hamiltonian,
    charge_hamiltonian,
    charge_matrix_element_asymptotic,
    diagonalize_transmon,
)

from conftest import EMPTY

GHZ = frequency_to_energy(1e9)


def empty_params(**kw):
    return TransmonParams.from_ghz(EMPTY["EJ"], EMPTY["EC"], **kw)


def test_decoupled_charge_states():
    H = charge_hamiltonian(0.0, GHZ, 0.0, 1)
    np.testing.assert_array_equal(H, np.diag(4 * GHZ * np.array([1.0, 0.0, 1.0])))


def test_off_diagonal_is_minus_half_ej():
    H = build_charge_hamiltonian(empty_params())
    off = np.concatenate([np.diag(H, 1), np.diag(H, -1)])
    np.testing.assert_allclose(off, -h * 6.9435e9, rtol=1e-14)
    assert H.shape == (31, 31)
    assert np.max(np.abs(H - H.T)) == 0.0


@pytest.mark.parametrize(
    "kw",
    [dict(EJ=-1.0, EC=1.0), dict(EJ=1.0, EC=0.0), dict(EJ=1.0, EC=1.0), dict(EJ=50.0, EC=1.0, n_charge_cutoff=9)],
)
def test_invalid_params_rejected(kw):
    with pytest.raises(ValueError):
        TransmonParams(**kw)


def test_empty_cavity_bare_levels_bracket_asymptotics():
    s = diagonalize_transmon(empty_params(), 4)
    w01 = s.omegas[1] / (2 * math.pi)
    alpha = s.anharmonicity / h
    assert 5.19e9 <= w01 <= 5.22e9
    assert -0.32e9 <= alpha <= -0.27e9
    # asymptotic oracle: sqrt(8 EJ EC) - EC = 5.216 GHz
    assert math.sqrt(8 * EMPTY["EJ"] * EMPTY["EC"]) - EMPTY["EC"] == pytest.approx(5.216, abs=5e-4)


def _ng_shift_hz(ng):
    a = diagonalize_transmon(empty_params(ng=0.0), 3)
    b = diagonalize_transmon(empty_params(ng=ng), 3)
    return abs(a.levels[1] - b.levels[1]) / h


def _charge_dispersion_hz(m, ratio, ec_hz):
    # harmonic-limit peak-to-peak dispersion of level m
    return ec_hz * 2 ** (4 * m + 5) / math.factorial(m) * math.sqrt(2 / math.pi) * (ratio / 2) ** (m / 2 + 0.75) * math.exp(
        -math.sqrt(8 * ratio)
    )


def test_offset_charge_dispersion_matches_asymptotic_oracle():
    ratio = EMPTY["EJ"] / EMPTY["EC"]
    ec = EMPTY["EC"] * 1e9
    oracle = _charge_dispersion_hz(1, ratio, ec) + _charge_dispersion_hz(0, ratio, ec)
    # ng = 0 to 1/2 spans the full cosine band of omega01
    assert _ng_shift_hz(0.5) == pytest.approx(oracle, rel=0.25)
    # cosine band: a quarter period is half the full swing
    assert _ng_shift_hz(0.25) == pytest.approx(0.5 * _ng_shift_hz(0.5), rel=1e-3)
    assert _ng_shift_hz(0.25) < 1e-6 * EMPTY["omega01"] * 1e9


@pytest.mark.xfail(strict=True, reason="charge dispersion at EJ/EC = 51 is 4.3 kHz at ng = 0.25, not below 1 kHz")
def test_offset_charge_shift_below_1khz():
    assert _ng_shift_hz(0.25) < 1e3


def test_single_level():
    s = diagonalize_transmon(empty_params(), 1)
    np.testing.assert_array_equal(s.levels, [0.0])


def test_level_count_limit():
    with pytest.raises(ValueError):
        diagonalize_transmon(empty_params(), 2 * 15 - 2)
    assert len(diagonalize_transmon(empty_params(), 2 * 15 - 3, check_convergence=False).levels) == 27


def test_convergence_failure_reports_drift():
    # EJ/EC = 3000 needs far more than 10 charge states
    p = TransmonParams(3000 * 0.27 * GHZ, 0.27 * GHZ, 0.0, 10)
    with pytest.raises(ConvergenceError) as err:
        diagonalize_transmon(p, 4)
    assert err.value.drift > frequency_to_energy(1e3)


def test_cutoff_drift_decreases_with_cutoff():
    EC = 0.27 * GHZ
    EJ = 3000 * EC
    drifts = []
    for N in (10, 15, 20, 25):
        a = np.linalg.eigvalsh(charge_hamiltonian(EJ, EC, 0.0, N))[:4]
        b = np.linalg.eigvalsh(charge_hamiltonian(EJ, EC, 0.0, N + 5))[:4]
        drifts.append(np.max(np.abs((a - a[0]) - (b - b[0]))))
    assert all(x > y for x, y in zip(drifts, drifts[1:]))


@pytest.mark.parametrize(
    "p, j, expected",
    [
        (TransmonParams(8.0, 1.0), 0, math.sqrt(0.5)),
        (empty_params(), 0, 1.125),
    ],
)
def test_asymptotic_matrix_element(p, j, expected):
    assert charge_matrix_element_asymptotic(p, j) == pytest.approx(expected, abs=5e-4)


def test_asymptotic_matrix_element_level_scaling():
    p = empty_params()
    ratio = charge_matrix_element_asymptotic(p, 1) / charge_matrix_element_asymptotic(p, 0)
    assert ratio == pytest.approx(math.sqrt(2), rel=1e-15)


def _exact_vs_asymptotic(ratio):
    p = TransmonParams(ratio * 0.27 * GHZ, 0.27 * GHZ, 0.0, 20)
    s = diagonalize_transmon(p, 4)
    return abs(s.n_matrix[1, 0] / charge_matrix_element_asymptotic(p, 0) - 1)


@pytest.mark.parametrize("ratio", [42.0, 45.0, 51.2, 60.0, 70.0])
def test_exact_matrix_element_close_to_asymptotic(ratio):
    assert _exact_vs_asymptotic(ratio) < 0.03


@pytest.mark.parametrize("ratio", [40.0, 41.0])
@pytest.mark.xfail(strict=True, reason="the 3% agreement only sets in above EJ/EC = 41.4 (3.06% at 40)")
def test_exact_matrix_element_close_to_asymptotic_low_ratio(ratio):
    assert _exact_vs_asymptotic(ratio) < 0.03


@given(ratio=st.floats(min_value=20, max_value=150), ec_ghz=st.floats(min_value=0.1, max_value=0.5))
def test_spectrum_invariants(ratio, ec_ghz):
    p = TransmonParams(ratio * ec_ghz * GHZ, ec_ghz * GHZ, 0.0, 20)
    s = diagonalize_transmon(p, 6, check_convergence=False)
    assert s.levels[0] == 0.0
    assert np.all(np.diff(s.levels) > 0)
    assert s.anharmonicity < 0
    np.testing.assert_allclose(s.n_matrix, s.n_matrix.T, atol=1e-10)
    assert s.n_matrix[0, 1] > 10 * s.n_matrix[0, 3]
