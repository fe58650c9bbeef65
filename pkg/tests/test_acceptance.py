"""Acceptance criteria 1-10, one test each.

Every test prints a single ``PASS criterion N: ...`` or ``FAIL criterion N: ...``
line (also collected into the terminal summary) before asserting.
"""

import io
import json
import os
import subprocess
import sys
from contextlib import redirect_stdout

import numpy as np

from cqedkit.cli import main
from cqedkit.constants import h
from cqedkit.decoherence import (
    GAP_ALUMINIUM,
    KAPPA_DEFAULT,
    PhotonDephasingParams,
    QuasiparticleParams,
    delta_omega01_qp,
    duffing_ladder,
    gamma_phi_photon,
    gamma_purcell,
    gamma_qp,
    mb_population,
    mb_populations,
    photon_bath_temperature,
    x_qp_thermal,
)
from cqedkit.dielectric import DielectricInputs, delta_g01_model, ec_shift_from_cq, epsilon_from_frequencies
from cqedkit.estimation import fit_spectroscopy
from cqedkit.jaynes_cummings import JchSystem, dispersive_shift_approx, dressed_observables
from cqedkit.rng import Stream
from cqedkit.synth import SynthSpec, gen_frequency_series, gen_ramsey_trace, gen_t1_trace
from cqedkit.traces import detect_jumps, fit_ramsey_trace, fit_t1_trace, normalized_covariance
from cqedkit.transmon import TransmonParams
from scipy.optimize import brentq

from conftest import ACCEPTANCE_LINES, EMPTY, FULL, TWO_PI, measured


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_dispersive_identity():
    errs = []
    for row in (EMPTY, FULL):
        pull = dispersive_shift_approx(row["g01"], row["omega_c"], row["omega01"])
        errs.append(abs(pull / row["delta_omega"] - 1))
    report(1, max(errs) <= 0.01, f"g01^2/Delta vs measured pull, rel err empty {errs[0]:.2%}, full {errs[1]:.2%} (tol 1%)")


def test_criterion_02_dielectric_constant():
    eps = epsilon_from_frequencies(6.93480e9, 6.75395e9)
    report(2, abs(eps - 1.0543) <= 5e-4, f"epsilon = {eps:.5f} (target 1.0543 +- 0.0005)")


def test_criterion_03_spectroscopy_fit():
    worst = 0.0
    for row in (EMPTY, FULL):
        p = fit_spectroscopy(measured(row)).params
        got = (p["EJ"] / h / 1e9, p["EC"] / h / 1e9, p["g01"] / TWO_PI / 1e9)
        worst = max(worst, *(abs(g / w - 1) for g, w in zip(got, (row["EJ"], row["EC"], row["g01"]))))
    tp = TransmonParams.from_ghz(13.5, 0.28)
    sysm = JchSystem(tp, TWO_PI * 7.1e9, TWO_PI * 0.11e9)
    q = fit_spectroscopy(dressed_observables(sysm)).params
    trip = max(abs(q["EJ"] / tp.EJ - 1), abs(q["EC"] / tp.EC - 1), abs(q["g01"] / sysm.g01 - 1))
    ok = worst <= 0.02 and trip <= 1e-6
    report(3, ok, f"table fit worst rel err {worst:.3%} (tol 2%); self round trip {trip:.1e} (tol 1e-6)")


def test_criterion_04_dielectric_composition():
    dg = 100 * delta_g01_model(DielectricInputs(1.057, 0.0078, 0.0165))
    dec = 100 * ec_shift_from_cq(0.0078)
    measured_dg = 100 * (FULL["g01"] / EMPTY["g01"] - 1)
    ok = abs(dg + 3.05) <= 0.15 and abs(dg + 3.2) <= 0.4 and dg < 0 and measured_dg < 0 and -0.82 <= dec <= -0.74
    report(4, ok, f"dg01 = {dg:.3f}% (target -3.05 +- 0.15, within 0.4pp of -3.2; measured {measured_dg:.2f}%); dEC = {dec:.3f}% in [-0.82, -0.74]")


def test_criterion_05_quasiparticle_anchors():
    qp = QuasiparticleParams(GAP_ALUMINIUM, 0.0, TWO_PI * 5.1914e9)
    rate = gamma_qp(qp, 4e-6)
    shift_khz = delta_omega01_qp(qp, 4e-6) / TWO_PI / 1e3
    t_cross = brentq(lambda T: x_qp_thermal(GAP_ALUMINIUM, T) - 4e-6, 0.05, 0.3, xtol=1e-9)
    ok = abs(rate / 1.60e5 - 1) <= 0.02 and abs(shift_khz + 12.8) <= 0.05 and abs(shift_khz / -14 - 1) <= 0.15 and 0.150 <= t_cross <= 0.160
    report(5, ok, f"Gamma_qp = {rate:.4g}/s (1.60e5 +- 2%); shift = {shift_khz:.2f} kHz (within 15% of -14); crossover {1e3 * t_cross:.1f} mK in [150, 160]")


def test_criterion_06_purcell():
    times = []
    for row in (EMPTY, FULL):
        g = TWO_PI * row["g01"] * 1e9
        times.append(1e6 / gamma_purcell(g, TWO_PI * (row["omega_c"] - row["omega01"]) * 1e9, KAPPA_DEFAULT))
    ok = abs(times[0] - 264) <= 0.5 and abs(times[1] - 229) <= 0.5 and abs(times[0] / 265 - 1) <= 0.1 and abs(times[1] / 240 - 1) <= 0.1
    report(6, ok, f"Purcell times {times[0]:.1f} / {times[1]:.1f} us (264 / 229; within 10% of 265 / 240)")


def test_criterion_07_photon_bath_inversion():
    wc = TWO_PI * 6.9348e9
    worst = 0.0
    for chi_mhz in (-0.8, -1.61, -3.0):
        for T in np.linspace(0.020, 0.300, 57):
            p = PhotonDephasingParams(KAPPA_DEFAULT, TWO_PI * chi_mhz * 1e6, wc, t_ph=T)
            rate = gamma_phi_photon(p)
            back = photon_bath_temperature(rate, p.kappa, p.chi, wc)
            again = gamma_phi_photon(PhotonDephasingParams(p.kappa, p.chi, wc, t_ph=back))
            worst = max(worst, abs(back / T - 1), abs(again / rate - 1))
    chi = -TWO_PI * 1.61e6
    rate80 = gamma_phi_photon(PhotonDephasingParams(KAPPA_DEFAULT, chi, wc, n_th=0.0159))
    t80 = 1e3 * photon_bath_temperature(rate80, KAPPA_DEFAULT, chi, wc)
    ok = worst <= 1e-9 and abs(t80 - 80) <= 1
    report(7, ok, f"inverse pair worst rel err {worst:.1e} over 20-300 mK (tol 1e-9); worked point -> {t80:.2f} mK (80 +- 1)")


def test_criterion_08_maxwell_boltzmann():
    levels = duffing_ladder(TWO_PI * EMPTY["omega01"] * 1e9, TWO_PI * EMPTY["omega12"] * 1e9)
    cold = mb_population(levels, 0.010, 1)
    p100 = mb_population(levels, 0.100, 1)
    sums = max(abs(mb_populations(levels, T).sum() - 1) for T in np.geomspace(0.001, 10.0, 400))
    ok = cold < 1e-10 and abs(p100 - 0.0759) <= 0.001 and sums <= 1e-12
    report(8, ok, f"P(1) at 10 mK = {cold:.1e} (< 1e-10); at 100 mK = {p100:.4f} (0.0759 +- 0.001); max |sum - 1| = {sums:.1e}")


def test_criterion_09_pipeline_recovery():
    seeds = range(100)
    t1_ok, t2_ok, df_ok = [], [], []
    for s in seeds:
        t1_ok.append(abs(fit_t1_trace(gen_t1_trace(SynthSpec("t1-decay", {}, seed=s))).t1 / 20e-6 - 1) <= 0.03)
        r = fit_ramsey_trace(gen_ramsey_trace(SynthSpec("ramsey", {}, n_points=200, seed=s)))
        t2_ok.append(abs(r.t2 / 15e-6 - 1) <= 0.03)
        df_ok.append(abs(r.detuning - 300e3) <= 500)
    acc = []
    for s in range(20):
        f, labels = gen_frequency_series(SynthSpec("frequency-series", {}, n_points=500, seed=s))
        acc.append(np.mean(detect_jumps(f).jump_mask == labels))
    exact = []
    for s in range(100):
        a = 20e-6 + 1e-6 * Stream(s).normal(120)
        exact += [normalized_covariance(a, 1.3 * a + 2e-6) == 1.0, normalized_covariance(a, -0.7 * a + 40e-6) == -1.0]
    indep = [abs(normalized_covariance(Stream(s).normal(120), Stream(s + 10_000).normal(120))) < 0.25 for s in range(100)]
    rates = [np.mean(x) for x in (t1_ok, t2_ok, df_ok)]
    ok = min(rates) >= 0.95 and min(acc) >= 0.95 and all(exact) and np.mean(indep) >= 0.95
    report(
        9,
        ok,
        f"T1 {rates[0]:.0%}, T2 {rates[1]:.0%}, df {rates[2]:.0%} of 100 seeds (>= 95%); jump label accuracy min {min(acc):.1%}; "
        f"rho exact on {sum(exact)}/{len(exact)} affine pairs; |rho| < 0.25 for {np.mean(indep):.0%} of independent pairs",
    )


def _cli_commands(tmp):
    t1, ram, freq, t1t, pop = (os.path.join(tmp, n) for n in ("t1.csv", "ramsey.csv", "f.csv", "t1t.csv", "pop.csv"))
    return [
        ["spectro", "predict", "--ej", "13.887GHz", "--ec", "0.2710GHz", "--g01", "0.1235GHz", "--omega-c", "6.9348GHz"],
        ["spectro", "fit", "--omega-c", "6.9348GHz", "--delta-omega", "8.75MHz", "--omega01", "5.1914GHz", "--omega12", "4.8834GHz"],
        ["dielectric", "epsilon", "--f-empty", "6.93480GHz", "--f-full", "6.75395GHz"],
        ["dielectric", "shift", "--f-bare", "6.93480GHz", "--epsilon", "1.057"],
        ["dielectric", "g01-shift", "--epsilon", "1.057", "--delta-cq", "0.78%", "--delta-cg", "1.65%"],
        ["decoherence", "qp", "--x-qp", "4e-6", "--omega01", "5.1914GHz", "--temperature", "140mK"],
        ["decoherence", "purcell", "--g01", "0.1235GHz", "--omega-c", "6.9348GHz", "--omega01", "5.1914GHz"],
        ["decoherence", "photon-temp", "--t-phi", "84us", "--chi=-1.61MHz", "--omega-c", "6.9348GHz"],
        ["decoherence", "tphi", "--t1", "20us", "--t2", "15us"],
        ["population", "--omega01", "5.1914GHz", "--omega12", "4.8834GHz", "--t-start", "10mK", "--t-stop", "200mK", "--t-step", "5mK", "--csv", pop],
        ["traces", "synth", "--kind", "t1", "--repeats", "20", "--seed", "1", "--out", t1],
        ["traces", "synth", "--kind", "ramsey", "--repeats", "20", "--seed", "101", "--out", ram],
        ["traces", "synth", "--kind", "freq", "--seed", "7", "--out", freq],
        ["traces", "synth", "--kind", "t1-vs-temperature", "--seed", "3", "--out", t1t],
        ["decoherence", "t1-fit", "--input", t1t, "--omega01", "5.1914GHz"],
        ["traces", "analyze", "--kind", "ramsey", "--input", ram],
        ["traces", "stats", "--t1-input", t1, "--ramsey-input", ram],
        ["traces", "jumps", "--input", freq],
    ], (t1, ram, freq, t1t, pop)


def _snapshot(tmp):
    commands, files = _cli_commands(tmp)
    docs = []
    for argv in commands:
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(argv)
        docs.append((code, buf.getvalue().encode()))
    return docs, [open(f, "rb").read() for f in files]


def test_criterion_10_cli_determinism(tmp_path):
    tmp = str(tmp_path)
    first = _snapshot(tmp)
    second = _snapshot(tmp)
    codes_ok = all(code == 0 and json.loads(doc)['tool'] for code, doc in first[0])
    same = first == second
    # separate interpreters with different hash seeds must agree as well
    argv = [sys.executable, "-m", "cqedkit", *_cli_commands(tmp)[0][10]]
    outs = [subprocess.run(argv, capture_output=True, env=dict(os.environ, PYTHONHASHSEED=s)).stdout for s in ("1", "2")]
    ok = codes_ok and same and outs[0] == outs[1] == first[0][10][1]
    report(10, ok, f"{len(first[0])} subcommands run twice: documents and {len(first[1])} output files byte-identical; cross-process check {'ok' if outs[0] == outs[1] else 'differs'}")

