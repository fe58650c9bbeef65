"""Command-line interface.

Every physical scalar takes an explicit unit suffix (``6.9348GHz``,
``80mK``, ``20us``, ``160ueV``).  Results are written to stdout as one JSON
document that echoes the resolved configuration.  Exit status: 0 success,
1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from typing import Optional, Sequence

import numpy as np

from . import decoherence as dec
from . import dielectric as diel
from . import io as cio
from .constants import Kind, Quantity, UnitError, frequency_to_energy, h, hbar, parse_quantity
from .estimation import FitError, fit_spectroscopy, fit_t1_vs_temperature
from .jaynes_cummings import (
    JchSystem,
    SpectroObservables,
    dispersive_chi,
    dispersive_shift_approx,
    dressed_observables,
    two_photon_frequency,
)
from .rng import BACKEND
from .synth import SynthSpec, gen_frequency_series, gen_ramsey_trace, gen_t1_trace, gen_t1_vs_temperature
from .traces import (
    TraceFitError,
    detect_jumps,
    fit_ramsey_trace,
    fit_t1_trace,
    series_statistics,
    tphi_series,
)
from .transmon import TransmonParams

TWO_PI = 2.0 * math.pi


# -- argument types ---------------------------------------------------------


def _qty(*kinds: Kind):
    names = "/".join(k.name.lower().replace("_", " ") for k in kinds)

    def convert(text: str) -> Quantity:
        try:
            q = parse_quantity(text)
        except UnitError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
        if q.kind not in kinds:
            raise argparse.ArgumentTypeError(f"{text!r} is a {q.kind.name.lower().replace('_', ' ')}, expected {names}")
        return q

    convert.__name__ = names
    return convert


FREQ = _qty(Kind.LINEAR_FREQUENCY)
ENERGY_OR_FREQ = _qty(Kind.ENERGY, Kind.LINEAR_FREQUENCY)
TEMP = _qty(Kind.TEMPERATURE)
TIME = _qty(Kind.TIME)
RATE = _qty(Kind.RATE)
ENERGY = _qty(Kind.ENERGY)


def fraction(text: str) -> float:
    """Dimensionless value: plain number or percentage (``0.78%``)."""
    s = text.strip()
    try:
        return float(s[:-1]) / 100.0 if s.endswith("%") else float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number or percentage") from None


def _energy(q: Quantity) -> float:
    return frequency_to_energy(q.value) if q.kind is Kind.LINEAR_FREQUENCY else q.value


def _ang(q: Quantity) -> float:
    return TWO_PI * q.value


# -- spectro ----------------------------------------------------------------


def _add_truncations(p):
    p.add_argument("--n-levels", type=int, default=4, help="transmon levels in the coupled model (default 4)")
    p.add_argument("--n-photons", type=int, default=12, help="Fock-space truncation (default 12)")
    p.add_argument("--charge-cutoff", type=int, default=15, help="charge basis spans -N..N (default 15)")
    p.add_argument("--coupling", choices=("ladder", "exact"), default="ladder")
    p.add_argument("--ng", type=float, default=0.0, help="offset charge (Cooper pairs)")


def cmd_spectro_predict(a):
    tp = TransmonParams(_energy(a.ej), _energy(a.ec), a.ng, a.charge_cutoff)
    sysm = JchSystem(tp, _ang(a.omega_c), _ang(a.g01), a.n_levels, a.n_photons, a.coupling)
    obs = dressed_observables(sysm)
    chi = dispersive_chi(sysm)
    approx = dispersive_shift_approx(sysm.g01, sysm.omega_c_bare, obs.omega01)
    return {
        **{f"{k}_ghz": v for k, v in obs.as_ghz().items()},
        "two_photon_ghz": two_photon_frequency(obs) / TWO_PI / 1e9,
        "chi_mhz": chi / TWO_PI / 1e6,
        "chi_convention": "qubit frequency change per cavity photon, [E11-E10-E01+E00]/h",
        "delta_omega_dispersive_mhz": approx / TWO_PI / 1e6,
        "matrix_dimension": sysm.dimension,
    }


def cmd_spectro_fit(a):
    meas = SpectroObservables(_ang(a.omega_c), _ang(a.delta_omega), _ang(a.omega01), _ang(a.omega12))
    res = fit_spectroscopy(
        meas,
        n_transmon_levels=a.n_levels,
        n_photons=a.n_photons,
        n_charge_cutoff=a.charge_cutoff,
        coupling=a.coupling,
        ng=a.ng,
    )
    return {
        "EJ_h_ghz": res.params["EJ"] / h / 1e9,
        "EC_h_ghz": res.params["EC"] / h / 1e9,
        "g01_2pi_ghz": res.params["g01"] / TWO_PI / 1e9,
        "residual_norm_hz": res.residual_norm,
        "residuals_hz": res.diagnostics["residuals"],
        "converged": res.converged,
        "n_iterations": res.n_iterations,
        "flags": res.flags,
        "initial_guess_hz": res.x0,
        "bounds_hz": res.bounds,
    }


# -- dielectric -------------------------------------------------------------


def cmd_dielectric_epsilon(a):
    return {"epsilon": diel.epsilon_from_frequencies(a.f_empty.value, a.f_full.value)}


def cmd_dielectric_shift(a):
    return {"f_shifted_ghz": diel.shifted_cavity_frequency(a.f_bare.value, a.epsilon) / 1e9}


def cmd_dielectric_g01(a):
    inp = diel.DielectricInputs(a.epsilon, a.delta_cq, a.delta_cg, a.cg_over_cq)
    f = diel.delta_g01_factors(inp)
    ec = diel.ec_shift_from_cq(a.delta_cq)
    return {
        **f,
        "delta_g01_percent": round(100.0 * f["delta_g01"], 2),
        "delta_ec": ec,
        "delta_ec_percent": round(100.0 * ec, 2),
        "beta_model": "small-Cg limit" if a.cg_over_cq is None else "general",
    }


# -- decoherence ------------------------------------------------------------


def cmd_decoherence_qp(a):
    p = dec.QuasiparticleParams(gap=a.gap.value, x_neq=a.x_neq, omega01=_ang(a.omega01))
    rate = dec.gamma_qp(p, a.x_qp)
    out = {
        "gamma_qp_per_s": rate,
        "t1_qp_us": 1e6 / rate if rate > 0 else None,
        "delta_f01_khz": dec.delta_omega01_qp(p, a.x_qp) / TWO_PI / 1e3,
    }
    if a.temperature is not None:
        T = a.temperature.value
        out["x_qp_thermal"] = dec.x_qp_thermal(p.gap, T)
        out["t1_model_us"] = 1e6 * dec.t1_model_vs_temperature(p, T)
    return out


def cmd_decoherence_t1fit(a):
    data = cio.load_t1_vs_temperature_csv(a.input)
    res = fit_t1_vs_temperature(data, _ang(a.omega01), a.t_min_fit.value)
    return {
        "gap_uev": res.params["gap"] / 1.602176634e-25,
        "x_neq": res.params["x_neq"],
        "residual_norm": res.residual_norm,
        "converged": res.converged,
        "flags": res.flags,
        "n_points_used": res.diagnostics["n_points_used"],
    }


def cmd_decoherence_purcell(a):
    detuning = _ang(a.omega_c) - _ang(a.omega01)
    rate = dec.gamma_purcell(_ang(a.g01), detuning, _ang(a.kappa))
    return {"gamma_purcell_per_s": rate, "t_purcell_us": 1e6 / rate if rate > 0 else None}


def cmd_decoherence_photon_temp(a):
    kappa, chi, wc = _ang(a.kappa), _ang(a.chi), _ang(a.omega_c)
    out = {"kappa_ll_chi": bool(kappa < abs(chi))}
    if a.temperature is not None:
        p = dec.PhotonDephasingParams(kappa, chi, wc, t_ph=a.temperature.value)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", dec.DispersiveLimitWarning)
            rate = dec.gamma_phi_photon(p)
        out.update({"n_th": p.n_thermal, "gamma_phi_per_s": rate, "t_phi_us": 1e6 / rate if rate > 0 else None})
    else:
        rate = a.gamma_phi.value if a.gamma_phi is not None else 1.0 / a.t_phi.value
        T = dec.photon_bath_temperature(rate, kappa, chi, wc)
        out.update({"gamma_phi_per_s": rate, "t_ph_mk": 1e3 * T, "n_th": dec.n_th(wc, T)})
    return out


def cmd_decoherence_tphi(a):
    return {"t_phi_us": 1e6 * dec.t_phi_from_t1_t2(a.t1.value, a.t2.value)}


# -- population -------------------------------------------------------------


def cmd_population(a):
    levels = dec.duffing_ladder(_ang(a.omega01), _ang(a.omega12))
    out = {"level_freqs_ghz": (levels / TWO_PI / 1e9).tolist()}
    if a.temperature is not None:
        out["populations"] = dec.mb_populations(levels, a.temperature.value).tolist()
        return out
    if a.t_start is None or a.t_stop is None or a.t_step is None:
        raise UsageError("give --temperature, or all of --t-start, --t-stop and --t-step")
    n = int(round((a.t_stop.value - a.t_start.value) / a.t_step.value)) + 1
    if n < 1:
        raise UsageError("--t-stop must not be below --t-start")
    temps = a.t_start.value + a.t_step.value * np.arange(n)
    rows = [(float(T), *map(float, dec.mb_populations(levels, T))) for T in temps]
    if a.csv:
        cio.write_table_csv(a.csv, ("temperature_k", "p0", "p1", "p2", "p3"), rows)
        out["csv"] = a.csv
    out["sweep"] = [dict(zip(("temperature_k", "p0", "p1", "p2", "p3"), r)) for r in rows]
    return out


# -- traces -----------------------------------------------------------------

_SYNTH_KIND = {"t1": "t1-decay", "ramsey": "ramsey", "freq": "frequency-series", "t1-vs-temperature": "t1-vs-temperature"}


def _synth_truth(a) -> dict:
    q = lambda v: None if v is None else v.value  # noqa: E731
    pick = {
        "t1-decay": {"T1": q(a.t1), "A": a.amplitude, "B": a.offset, "t_max": q(a.t_max)},
        "ramsey": {"T2": q(a.t2), "delta_f": q(a.delta_f), "phase": a.phase, "A": a.amplitude, "B": a.offset, "t_max": q(a.t_max)},
        "frequency-series": {
            "f0": q(a.f0),
            "amplitude": q(a.jump),
            "jitter": q(a.jitter),
            "dwell_steady": a.dwell_steady,
            "dwell_jump": a.dwell_jump,
        },
        "t1-vs-temperature": {
            "gap": q(a.gap),
            "x_neq": a.x_neq,
            "omega01": None if a.omega01 is None else _ang(a.omega01),
            "t_min": q(a.temp_min),
            "t_max": q(a.temp_max),
            "rel_noise": a.rel_noise,
        },
    }[_SYNTH_KIND[a.kind]]
    return {k: v for k, v in pick.items() if v is not None}


def cmd_traces_synth(a):
    kind = _SYNTH_KIND[a.kind]
    truth = _synth_truth(a)
    default_points = {"t1-decay": 50, "ramsey": 200, "frequency-series": 500, "t1-vs-temperature": 17}[kind]
    points = a.points if a.points is not None else default_points
    specs = [
        SynthSpec(kind, truth, points, a.shots, a.seed + k, a.noiseless, f"{kind}-{k}" if a.repeats > 1 else "")
        for k in range(a.repeats)
    ]
    out = {"kind": kind, "ground_truth": specs[0].truth(), "out": a.out, "repeats": a.repeats, "seeds": [s.seed for s in specs]}
    if kind in ("t1-decay", "ramsey"):
        gen = gen_t1_trace if kind == "t1-decay" else gen_ramsey_trace
        cio.write_traces_csv(a.out, [gen(s) for s in specs])
    elif kind == "frequency-series":
        if a.repeats != 1:
            raise UsageError("--repeats applies to trace kinds only")
        freqs, labels = gen_frequency_series(specs[0])
        cio.write_frequency_csv(a.out, freqs)
        out["ground_truth_jump_mask"] = labels.astype(int).tolist()
    else:
        if a.repeats != 1:
            raise UsageError("--repeats applies to trace kinds only")
        cio.write_t1_vs_temperature_csv(a.out, gen_t1_vs_temperature(specs[0]))
    return out


def _fit_all(records, kind):
    fits = []
    for rec in records:
        if kind == "t1":
            r = fit_t1_trace(rec)
            fits.append({"trace_id": rec.trace_id, "t1_us": 1e6 * r.t1, "amplitude": r.amplitude, "offset": r.offset, "residual_norm": r.residual_norm})
        else:
            r = fit_ramsey_trace(rec)
            fits.append(
                {
                    "trace_id": rec.trace_id,
                    "t2_us": 1e6 * r.t2,
                    "detuning_khz": r.detuning / 1e3,
                    "phase": r.phase,
                    "amplitude": r.amplitude,
                    "offset": r.offset,
                    "residual_norm": r.residual_norm,
                }
            )
    return fits


def cmd_traces_analyze(a):
    return {"kind": a.kind, "fits": _fit_all(cio.load_traces_csv(a.input), a.kind)}


def _jump_summary(res):
    return {
        "steady_state_freq_hz": res.steady_state_freq,
        "n_flagged": int(res.jump_mask.sum()),
        "jump_mask": res.jump_mask.astype(int).tolist(),
        "method": res.method,
        "ambiguous": res.ambiguous,
        "center_hz": res.center,
        "scale_hz": res.scale,
    }


def cmd_traces_stats(a):
    t1_fits = _fit_all(cio.load_traces_csv(a.t1_input), "t1")
    r_fits = _fit_all(cio.load_traces_csv(a.ramsey_input), "ramsey")
    if len(t1_fits) != len(r_fits):
        raise ValueError(f"{len(t1_fits)} T1 traces but {len(r_fits)} Ramsey traces; they must pair one to one")
    t1s = np.array([f["t1_us"] for f in t1_fits]) * 1e-6
    t2s = np.array([f["t2_us"] for f in r_fits]) * 1e-6
    tphis = tphi_series(t1s, t2s)
    st = series_statistics(t1s, tphis)
    out = {
        "n": st.n,
        "mean_t1_us": 1e6 * st.mean_t1,
        "std_t1_us": 1e6 * st.std_t1,
        "mean_tphi_us": 1e6 * st.mean_tphi,
        "std_tphi_us": 1e6 * st.std_tphi,
        "rho": st.rho if st.rho is not None else "not computable (zero variance)",
        "notes": st.notes,
        "tphi_us": (1e6 * tphis).tolist(),
    }
    if len(r_fits) >= 20:
        detunings = np.array([f["detuning_khz"] for f in r_fits]) * 1e3
        out["detuning_jumps"] = _jump_summary(detect_jumps(detunings, a.threshold))
    return out


def cmd_traces_jumps(a):
    return _jump_summary(detect_jumps(cio.load_frequency_csv(a.input), a.threshold))


# -- parser -----------------------------------------------------------------


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqedkit", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="group", required=True)

    spectro = sub.add_parser("spectro", help="dressed-spectrum prediction and parameter fitting").add_subparsers(dest="action", required=True)
    p = spectro.add_parser("predict", help="forward model: (EJ, EC, g01, omega_c) -> observables")
    p.add_argument("--ej", type=ENERGY_OR_FREQ, required=True, help="EJ as EJ/h (e.g. 13.887GHz) or energy")
    p.add_argument("--ec", type=ENERGY_OR_FREQ, required=True, help="EC as EC/h or energy")
    p.add_argument("--g01", type=FREQ, required=True, help="g01/2pi")
    p.add_argument("--omega-c", type=FREQ, required=True, help="bare cavity frequency omega_c/2pi")
    _add_truncations(p)
    p.set_defaults(func=cmd_spectro_predict)
    p = spectro.add_parser("fit", help="inverse fit of EJ, EC, g01 to measured spectroscopy")
    for flag in ("--omega-c", "--delta-omega", "--omega01", "--omega12"):
        p.add_argument(flag, type=FREQ, required=True, help="linear frequency (x/2pi)")
    _add_truncations(p)
    p.set_defaults(func=cmd_spectro_fit)

    dl = sub.add_parser("dielectric", help="dielectric filling model").add_subparsers(dest="action", required=True)
    p = dl.add_parser("epsilon", help="effective permittivity from empty/full cavity frequencies")
    p.add_argument("--f-empty", type=FREQ, required=True)
    p.add_argument("--f-full", type=FREQ, required=True)
    p.set_defaults(func=cmd_dielectric_epsilon)
    p = dl.add_parser("shift", help="cavity frequency after filling")
    p.add_argument("--f-bare", type=FREQ, required=True)
    p.add_argument("--epsilon", type=float, default=diel.EPSILON_HELIUM)
    p.set_defaults(func=cmd_dielectric_shift)
    p = dl.add_parser("g01-shift", help="predicted fractional change of g01")
    p.add_argument("--epsilon", type=float, default=diel.EPSILON_HELIUM)
    p.add_argument("--delta-cq", type=fraction, required=True, help="fractional Cq change, e.g. 0.78%%")
    p.add_argument("--delta-cg", type=fraction, required=True, help="fractional Cg change, e.g. 1.65%%")
    p.add_argument("--cg-over-cq", type=float, default=None, help="Cg/Cq; omit for the small-Cg limit")
    p.set_defaults(func=cmd_dielectric_g01)

    dc = sub.add_parser("decoherence", help="relaxation and dephasing models").add_subparsers(dest="action", required=True)
    p = dc.add_parser("qp", help="quasiparticle rate and frequency shift")
    p.add_argument("--gap", type=ENERGY, default=Quantity(dec.GAP_ALUMINIUM, Kind.ENERGY), help="superconducting gap (default 160ueV)")
    p.add_argument("--x-qp", type=fraction, required=True, help="quasiparticle density entering the rate")
    p.add_argument("--x-neq", type=fraction, default=0.0, help="non-equilibrium floor for --temperature")
    p.add_argument("--omega01", type=FREQ, required=True)
    p.add_argument("--temperature", type=TEMP, default=None)
    p.set_defaults(func=cmd_decoherence_qp)
    p = dc.add_parser("t1-fit", help="fit gap and x_neq to a T1-vs-temperature CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--omega01", type=FREQ, required=True)
    p.add_argument("--t-min-fit", type=TEMP, default=Quantity(0.060, Kind.TEMPERATURE))
    p.set_defaults(func=cmd_decoherence_t1fit)
    p = dc.add_parser("purcell", help="Purcell emission rate")
    p.add_argument("--g01", type=FREQ, required=True)
    p.add_argument("--omega-c", type=FREQ, required=True)
    p.add_argument("--omega01", type=FREQ, required=True)
    p.add_argument("--kappa", type=FREQ, default=Quantity(120e3, Kind.LINEAR_FREQUENCY), help="kappa/2pi (default 120kHz)")
    p.set_defaults(func=cmd_decoherence_purcell)
    p = dc.add_parser("photon-temp", help="thermal-photon dephasing <-> photon-bath temperature")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gamma-phi", type=RATE, help="dephasing rate, e.g. 1.19e4/s")
    g.add_argument("--t-phi", type=TIME, help="pure dephasing time")
    g.add_argument("--temperature", type=TEMP, help="forward mode: bath temperature")
    p.add_argument("--kappa", type=FREQ, default=Quantity(120e3, Kind.LINEAR_FREQUENCY))
    p.add_argument("--chi", type=FREQ, required=True, help="chi/2pi, signed")
    p.add_argument("--omega-c", type=FREQ, required=True)
    p.set_defaults(func=cmd_decoherence_photon_temp)
    p = dc.add_parser("tphi", help="pure dephasing time from T1 and T2")
    p.add_argument("--t1", type=TIME, required=True)
    p.add_argument("--t2", type=TIME, required=True)
    p.set_defaults(func=cmd_decoherence_tphi)

    p = sub.add_parser("population", help="Maxwell-Boltzmann populations of levels 0-3")
    p.add_argument("--omega01", type=FREQ, required=True)
    p.add_argument("--omega12", type=FREQ, required=True)
    p.add_argument("--temperature", type=TEMP)
    p.add_argument("--t-start", type=TEMP)
    p.add_argument("--t-stop", type=TEMP)
    p.add_argument("--t-step", type=TEMP)
    p.add_argument("--csv", help="write the sweep as a CSV table")
    p.set_defaults(func=cmd_population)

    tr = sub.add_parser("traces", help="synthetic data and trace analysis").add_subparsers(dest="action", required=True)
    p = tr.add_parser("synth", help="generate seeded synthetic data")
    p.add_argument("--kind", choices=tuple(_SYNTH_KIND), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--points", type=int)
    p.add_argument("--shots", type=int, default=1000)
    p.add_argument("--repeats", type=int, default=1, help="number of traces (seeds seed..seed+repeats-1)")
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--t1", type=TIME)
    p.add_argument("--t2", type=TIME)
    p.add_argument("--t-max", type=TIME)
    p.add_argument("--delta-f", type=FREQ)
    p.add_argument("--phase", type=float, help="fringe phase, radians")
    p.add_argument("--amplitude", type=float)
    p.add_argument("--offset", type=float)
    p.add_argument("--f0", type=FREQ)
    p.add_argument("--jump", type=FREQ, help="telegraph jump size")
    p.add_argument("--jitter", type=FREQ)
    p.add_argument("--dwell-steady", type=float, help="mean steady dwell, samples")
    p.add_argument("--dwell-jump", type=float, help="mean jumped dwell, samples")
    p.add_argument("--gap", type=ENERGY)
    p.add_argument("--x-neq", type=fraction)
    p.add_argument("--omega01", type=FREQ)
    p.add_argument("--temp-min", type=TEMP)
    p.add_argument("--temp-max", type=TEMP)
    p.add_argument("--rel-noise", type=fraction)
    p.set_defaults(func=cmd_traces_synth)
    p = tr.add_parser("analyze", help="fit every trace in a CSV file")
    p.add_argument("--kind", choices=("t1", "ramsey"), required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_traces_analyze)
    p = tr.add_parser("stats", help="T1/Tphi statistics from paired T1 and Ramsey trace files")
    p.add_argument("--t1-input", required=True)
    p.add_argument("--ramsey-input", required=True)
    p.add_argument("--threshold", type=float, default=5.0)
    p.set_defaults(func=cmd_traces_stats)
    p = tr.add_parser("jumps", help="reject telegraph jumps in a frequency series")
    p.add_argument("--input", required=True)
    p.add_argument("--threshold", type=float, default=5.0)
    p.set_defaults(func=cmd_traces_jumps)
    return parser


def _config(args: argparse.Namespace, argv: Sequence[str]) -> dict:
    resolved = {}
    for k, v in sorted(vars(args).items()):
        if k == "func":
            continue
        if isinstance(v, Quantity):
            resolved[k] = {"value": v.value, "unit": v.kind.value}
        else:
            resolved[k] = v
    return {"argv": list(argv), "resolved": resolved, "kernel_backend": BACKEND}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = f"{args.group} {getattr(args, 'action', '')}".strip()
    try:
        result = args.func(args)
    except UsageError as exc:
        print(f"cqedkit {command}: usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FitError, TraceFitError, RuntimeError, OSError) as exc:
        print(f"cqedkit {command}: error: {exc}", file=sys.stderr)
        return 1
    try:
        sys.stdout.write(cio.emit_report(command, _config(args, argv), result))
    except OSError as exc:
        print(f"cqedkit {command}: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
