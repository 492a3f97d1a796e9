"""Probe spectra behind the optimized 28-pulse train.

Two views of the same evolution: a narrowband probe late in the train showing
the cascaded sideband comb, and a 120 fs probe stepped across the revival
epochs showing how the modulation bandwidth evolves.
"""

import argparse

from rotkick.config import parse_config
from rotkick.ensemble import evolve_ensemble, init_ensemble
from rotkick.mpm import (
    MediumSpec,
    ProbePulse,
    broadening_scan,
    cascade_report,
    default_delta_cm,
    modulated_probe_spectrum,
    phase_trace,
    probe_grid,
)
from rotkick.observables import AlignmentTrace
from rotkick.trains import interleaved_train


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="scenarios/o2_cascade.toml")
    ap.add_argument("--pressure-atm", type=float, default=None,
                    help="override the scenario pressure")
    args = ap.parse_args()

    cfg = parse_config(args.config)
    tpl = cfg.train.template()
    ens = init_ensemble(cfg.molecule, cfg.thermal, j_max=cfg.j_max)
    snaps = evolve_ensemble(ens, interleaved_train(tpl))
    trace = AlignmentTrace(snaps, cfg.molecule)
    medium = cfg.medium
    if args.pressure_atm is not None:
        medium = MediumSpec(medium.phi0_per_atm, args.pressure_atm)
    print(f"train of {tpl.base_count * 4} pulses, phi0 = {medium.phi0:.0f} rad "
          f"at {medium.pressure_atm} atm")

    probe = cfg.mpm_probe
    t = probe_grid(probe)
    phi = phase_trace(t, trace(t), medium)
    shift, intensity, nu = modulated_probe_spectrum(probe, t, phi)
    delta = default_delta_cm(cfg.molecule, cfg.thermal)
    rep = cascade_report(shift, intensity, nu, delta)
    print(f"cascade: {rep.peak_count} peaks above 1%, "
          f"band spacing {rep.mean_band_spacing_cm:.2f} cm^-1 (thermal-peak line {delta:.2f}), "
          f"order-2/order-1 = {rep.band_magnitudes[1] / rep.band_magnitudes[0]:.2f}")

    fs_probe = ProbePulse(probe.center_wavelength_nm, 120e-15)
    delays = [-11 * fs_probe.fwhm_duration] + [m * tpl.T4 for m in range(1, tpl.base_count + 1)]
    rows = broadening_scan(trace, fs_probe, medium, delays)
    tl = fs_probe.transform_limited_fwhm_nm()
    print(f"\n120 fs probe, transform limit {tl:.3f} nm")
    print(f"{'delay_ps':>10} {'fwhm_nm':>9} {'centroid_nm':>11}")
    for d, fw, cen in rows:
        print(f"{d * 1e12:>10.3f} {fw:>9.3f} {cen:>11.3f}")


if __name__ == "__main__":
    main()
