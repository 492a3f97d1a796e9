"""Command-line entry points: scenario orchestration and file emission.

Every subcommand reads one TOML scenario, runs, and writes CSV/JSON plus a
manifest into the output directory.  Thread count changes wall time only;
all reductions are ordered.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .config import ConfigError, ScenarioConfig, parse_config, serialize_config
from .ensemble import evolve_ensemble, init_ensemble, intensity_average
from .mpm import (
    broadening_scan,
    cascade_report,
    default_delta_cm,
    modulated_probe_spectrum,
    phase_trace,
    probe_grid,
)
from .observables import (
    AlignmentTrace,
    alignment,
    angular_momentum_stats,
    coherences,
    level_populations,
    spectrogram,
    synth_spectrum,
)
from .optimize import Objective, default_search, optimize_delays, scan_delay
from .parallel import map_ordered
from .rotor import revival_time
from .runio import RunWriter, verify_manifest
from .trains import (
    interleaved_train,
    kick_strength_from_intensity,
    periodic_train,
    resonance_trajectories,
)

PS = 1e-12


def _duration(text: str) -> float:
    """Parse '100fs', '1.5ps' or plain seconds."""
    t = text.strip().lower()
    for suffix, scale in (("fs", 1e-15), ("ps", 1e-12), ("ns", 1e-9), ("s", 1.0)):
        if t.endswith(suffix):
            return float(t[: -len(suffix)]) * scale
    return float(t)


def _common_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--config", required=True, help="scenario TOML")
    sp.add_argument("--out-dir", default=None, help="output directory (default from config)")
    sp.add_argument("--threads", type=int, default=None, help="worker threads (default from config, 0 = all cores)")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                    help="config override, dotted key (repeatable)")


def _load(args) -> tuple[ScenarioConfig, dict]:
    overrides = {}
    for item in args.override:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        k, v = item.split("=", 1)
        overrides[k.strip()] = v.strip()
    cfg = parse_config(args.config, overrides)
    seed = cfg.seed if args.seed is None else args.seed
    threads = cfg.threads if args.threads is None else args.threads
    threads = None if threads == 0 else threads
    out_dir = args.out_dir or cfg.output.directory
    return cfg, {"seed": seed, "threads": threads, "out_dir": out_dir}


def _writer(cfg: ScenarioConfig, run: dict, command: str) -> RunWriter:
    return RunWriter(
        out_dir=run["out_dir"],
        command=command,
        config_text=serialize_config(cfg),
        seed=run["seed"],
        threads=0 if run["threads"] is None else run["threads"],
    )


def _emit_train(w: RunWriter, train) -> None:
    w.csv("train.csv", ["time_ps", "p"], [(t / PS, p) for t, p in zip(train.times, train.strengths)])


def _emit_gram(w: RunWriter, stem: str, gram, cfg: ScenarioConfig) -> None:
    """Matrix CSV (rows = shift, columns = scan values) plus an axes sidecar."""
    header = ["shift_nm"] + [repr(float(v / PS)) for v in gram.scan_values]
    rows = [[s] + col.tolist() for s, col in zip(gram.shift_nm.tolist(), gram.intensity)]
    w.csv(f"{stem}.csv", header, rows)
    w.json(
        f"{stem}.json",
        {
            "scan_values_ps": (gram.scan_values / PS).tolist(),
            "shift_nm_range": [float(gram.shift_nm[0]), float(gram.shift_nm[-1])],
            "shift_points": int(len(gram.shift_nm)),
            "config": serialize_config(cfg),
            "software_version": __version__,
        },
    )


def _nearest_line_j(grid, lines):
    """Per grid point, the J of the nearest line center."""
    if not lines:
        return [-1] * len(grid)
    centers = np.array([s for _, s in lines])
    js = np.array([j for j, _ in lines])
    idx = np.abs(grid[:, None] - centers[None, :]).argmin(axis=1)
    return js[idx]


def cmd_simulate(args) -> int:
    cfg, run = _load(args)
    w = _writer(cfg, run, "simulate")
    train = cfg.train.build()
    ens0 = init_ensemble(cfg.molecule, cfg.thermal, j_max=cfg.j_max)

    def one(scale: float):
        final = evolve_ensemble(ens0, train.scaled(scale), keep_snapshots=False)[-1]
        js, pops = level_populations(final)
        cv = coherences(final, m_weighting=cfg.probe.m_weighting)
        return {"pops": pops, "coh_power": cv.magnitude_squared()}, final, cv

    scales = [s for s, _ in cfg.profile.samples]
    results = map_ordered(one, scales, threads=run["threads"])
    by_scale = {s: r for s, r in zip(scales, results)}
    averaged = intensity_average(lambda s: by_scale[s][0], cfg.profile)
    final, cv = results[-1][1], results[-1][2]  # brightest zone carries the scalar extras

    js = np.arange(len(averaged["pops"]))
    w.csv("populations.csv", ["j", "population"], zip(js.tolist(), averaged["pops"].tolist()))
    w.csv(
        "coherences.csv",
        ["j", "rho_re", "rho_im", "power"],
        [(int(j), float(v.real), float(v.imag), float(abs(v) ** 2)) for j, v in zip(cv.js, cv.values)],
    )
    power = averaged["coh_power"]
    spec = synth_spectrum(cv, cfg.probe, cfg.molecule)
    lines = [(j, s) for j, s, _ in spec.peaks]
    w.csv(
        "spectrum.csv",
        ["wavelength_shift_nm", "intensity", "nearest_j"],
        zip(spec.shift_nm.tolist(), spec.intensity.tolist(), (int(x) for x in _nearest_line_j(spec.shift_nm, lines))),
    )
    _emit_train(w, train)
    mean_j, top_j = angular_momentum_stats(final)
    pk = power[power > 0]
    top_line = int(np.nonzero(power >= 0.05 * power.max())[0][-1]) if pk.size else -1
    w.json(
        "summary.json",
        {
            "mean_j": mean_j,
            "top_populated_j": int(np.nonzero(averaged["pops"] >= 0.05 * averaged["pops"].max())[0][-1]),
            "top_line_j": top_line,
            "tallest_line_j": int(np.argmax(power)),
            "alignment": alignment(final),
            "integrated_coherence": float(np.sum(power)),
            "truncation_tail": final.truncation_tail(),
        },
    )
    w.finalize(__version__)
    return 0


def cmd_spectrogram(args) -> int:
    cfg, run = _load(args)
    w = _writer(cfg, run, "spectrogram")
    ens0 = init_ensemble(cfg.molecule, cfg.thermal, j_max=cfg.j_max)
    tr = revival_time(cfg.molecule)
    if cfg.train.kind == "periodic":
        center = cfg.train.period_ps * PS
        values = center + np.linspace(-args.span * tr, args.span * tr, args.points)
        trains = [periodic_train(cfg.train.count, float(v), cfg.train.P) for v in values]
    elif cfg.train.kind == "interleaved":
        tpl = cfg.train.template()
        values = tpl.T1 + np.linspace(-args.span * tr, args.span * tr, args.points)
        trains = [interleaved_train(tpl.with_delays(T1=float(v))) for v in values]
    else:
        raise ConfigError("spectrogram scans periodic or interleaved trains")
    finals = map_ordered(lambda t: evolve_ensemble(ens0, t, keep_snapshots=False)[-1], trains, threads=run["threads"])
    gram = spectrogram(values, finals, cfg.probe, cfg.molecule)
    _emit_gram(w, "spectrogram", gram, cfg)
    w.finalize(__version__)
    return 0


def cmd_scan(args) -> int:
    cfg, run = _load(args)
    w = _writer(cfg, run, "scan")
    tpl = cfg.train.template()
    ens0 = init_ensemble(cfg.molecule, cfg.thermal, j_max=cfg.j_max)
    tr = revival_time(cfg.molecule)
    obj = Objective(kind=args.objective, j_min=args.j_min)
    if args.from_ps is not None and args.to_ps is not None:
        values = np.linspace(args.from_ps * PS, args.to_ps * PS, args.points)
    else:
        center = getattr(tpl, args.delay) if args.delay != "T3" else tpl.resolved_T3()
        values = center + np.linspace(-0.06 * tr, 0.06 * tr, args.points)
    values, curve, gram = scan_delay(tpl, args.delay, values, obj, ens0, probe=cfg.probe, threads=run["threads"])
    w.csv("scan.csv", ["delay_ps", "objective"], zip((values / PS).tolist(), curve.tolist()))
    _emit_gram(w, "scan_spectrogram", gram, cfg)
    w.finalize(__version__)
    return 0


def cmd_optimize(args) -> int:
    cfg, run = _load(args)
    w = _writer(cfg, run, "optimize")
    tpl = cfg.train.template()
    ens0 = init_ensemble(cfg.molecule, cfg.thermal, j_max=cfg.j_max)
    search = default_search(cfg.molecule, window_fraction=args.window, constrain_T3=tpl.constrain_T3)
    obj = Objective(kind=args.objective, j_min=args.j_min)
    res = optimize_delays(tpl, obj, search, ens0, threads=run["threads"])
    tr = revival_time(cfg.molecule)
    w.json(
        "optimize.json",
        {
            "t1_ps": res.T1 / PS, "t2_ps": res.T2 / PS, "t3_ps": res.T3 / PS, "t4_ps": res.T4 / PS,
            "t1_frac": res.T1 / tr, "t2_frac": res.T2 / tr, "t3_frac": res.T3 / tr, "t4_frac": res.T4 / tr,
            "objective": res.objective,
            "evaluations": res.evaluations,
        },
    )
    w.csv(
        "trace.csv",
        ["step", "delay", "value_ps", "objective"],
        [(i, name, float("nan") if np.isnan(v) else v / PS, o) for i, (name, v, o) in enumerate(res.trace)],
    )
    w.finalize(__version__)
    return 0


def cmd_mpm(args) -> int:
    cfg, run = _load(args)
    w = _writer(cfg, run, "mpm")
    train = cfg.train.build()
    ens0 = init_ensemble(cfg.molecule, cfg.thermal, j_max=cfg.j_max)
    snaps = evolve_ensemble(ens0, train)
    trace = AlignmentTrace(snaps, cfg.molecule)
    probe, medium = cfg.mpm_probe, cfg.medium

    t = probe_grid(probe)
    phi = phase_trace(t, trace(t), medium)
    shift, S, nu = modulated_probe_spectrum(probe, t, phi)
    w.csv("mpm_spectrum.csv", ["wavelength_shift_nm", "intensity"], zip(shift.tolist(), S.tolist()))
    rep = cascade_report(shift, S, nu, default_delta_cm(cfg.molecule, cfg.thermal), threshold=args.threshold)
    w.json(
        "cascade.json",
        {
            "peak_count": rep.peak_count,
            "threshold": rep.threshold,
            "delta_cm": rep.delta_cm,
            "band_magnitudes": list(rep.band_magnitudes),
            "band_centers_cm": list(rep.band_centers_cm),
            "mean_band_spacing_cm": rep.mean_band_spacing_cm,
            "second_exceeds_first": rep.second_exceeds_first(),
            "phi0": medium.phi0,
        },
    )
    if cfg.train.kind == "interleaved":
        period = cfg.train.t4_ps * PS
        n_epochs = cfg.train.base_count + 1
    else:
        period = (cfg.train.period_ps or 0.0) * PS
        n_epochs = cfg.train.count - 1
    pre = -(11.0 * probe.fwhm_duration)
    delays = [pre] + [m * period for m in range(1, n_epochs + 1)]
    rows = broadening_scan(trace, probe, medium, delays, threads=run["threads"])
    w.csv("broadening.csv", ["delay_ps", "fwhm_nm", "centroid_nm"],
          [(d / PS, f, c) for d, f, c in rows])
    _emit_train(w, train)
    w.finalize(__version__)
    return 0


def cmd_plan(args) -> int:
    cfg, run = _load(args)
    w = _writer(cfg, run, "plan")
    mol = cfg.molecule
    js = [j for j in range(args.j_from, args.j_to + 1)
          if mol.parity == "both" or j % 2 == (1 if mol.parity == "odd" else 0)]
    rows = resonance_trajectories(js, mol)
    tr = revival_time(mol)
    w.csv(
        "plan.csv",
        ["j", "offset", "n_j", "t_j_ps", "t_j_over_trev"],
        [(j, off, n, t / PS, t / tr) for j, off, n, t in rows],
    )
    w.finalize(__version__)
    return 0


def cmd_convert(args) -> int:
    cfg, run = _load(args)
    w = _writer(cfg, run, "convert")
    fwhm = _duration(args.fwhm)
    if args.intensity is not None:
        P = kick_strength_from_intensity(args.intensity, fwhm, cfg.molecule)
        out = {"intensity_wcm2": args.intensity, "fwhm_s": fwhm, "p": P}
        print(f"P = {P:.4f}")
    else:
        from .trains import intensity_from_kick_strength

        I = intensity_from_kick_strength(args.p, fwhm, cfg.molecule)
        out = {"intensity_wcm2": I, "fwhm_s": fwhm, "p": args.p}
        print(f"intensity = {I:.4e} W/cm^2")
    w.json("convert.json", out)
    w.finalize(__version__)
    return 0


def cmd_verify(args) -> int:
    ok = verify_manifest(args.out_dir)
    print("manifest ok" if ok else "manifest MISMATCH")
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="rotkick", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="evolve the configured train, emit level/coherence/spectrum tables")
    _common_flags(sp)
    sp.set_defaults(fn=cmd_simulate)

    sp = sub.add_parser("spectrogram", help="spectra vs scanned train period (periodic) or T1 (interleaved)")
    _common_flags(sp)
    sp.add_argument("--points", type=int, default=97)
    sp.add_argument("--span", type=float, default=0.06, help="half-width of the scan, fraction of T_rev")
    sp.set_defaults(fn=cmd_spectrogram)

    sp = sub.add_parser("scan", help="objective along one interleave delay")
    _common_flags(sp)
    sp.add_argument("--delay", choices=("T1", "T2", "T3", "T4"), default="T1")
    sp.add_argument("--objective", choices=("total-coherence", "high-J-coherence"), default="total-coherence")
    sp.add_argument("--j-min", type=int, default=17)
    sp.add_argument("--points", type=int, default=121)
    sp.add_argument("--from-ps", type=float, default=None)
    sp.add_argument("--to-ps", type=float, default=None)
    sp.set_defaults(fn=cmd_scan)

    sp = sub.add_parser("optimize", help="tune interleave delays by grid + coordinate descent")
    _common_flags(sp)
    sp.add_argument("--objective", choices=("total-coherence", "high-J-coherence"), default="total-coherence")
    sp.add_argument("--j-min", type=int, default=17)
    sp.add_argument("--window", type=float, default=0.06, help="search half-width, fraction of T_rev")
    sp.set_defaults(fn=cmd_optimize)

    sp = sub.add_parser("mpm", help="probe phase modulation: cascade spectrum and broadening table")
    _common_flags(sp)
    sp.add_argument("--threshold", type=float, default=0.01)
    sp.set_defaults(fn=cmd_mpm)

    sp = sub.add_parser("plan", help="resonance trajectory table T_J(N_J)")
    _common_flags(sp)
    sp.add_argument("--j-from", type=int, default=1)
    sp.add_argument("--j-to", type=int, default=31)
    sp.set_defaults(fn=cmd_plan)

    sp = sub.add_parser("convert", help="peak intensity <-> kick strength")
    _common_flags(sp)
    sp.add_argument("--intensity", type=float, default=None, help="W/cm^2")
    sp.add_argument("--p", type=float, default=None, help="kick strength")
    sp.add_argument("--fwhm", default="100fs")
    sp.set_defaults(fn=cmd_convert)

    sp = sub.add_parser("check-manifest", help="re-hash files listed in a run manifest")
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(fn=cmd_verify)

    args = ap.parse_args(argv)
    if getattr(args, "command", None) == "convert" and (args.intensity is None) == (args.p is None):
        ap.error("convert needs exactly one of --intensity or --p")
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
