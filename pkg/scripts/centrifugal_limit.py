"""Reach of resonant pulse trains with and without centrifugal distortion.

Prints the highest populated level after N kicks at the revival period for a
range of N, side by side for the real molecule and a rigid-rotor control.
"""

import argparse

from rotkick.ensemble import ThermalSpec, evolve_ensemble, init_ensemble
from rotkick.observables import level_populations, max_populated_j
from rotkick.rotor import O2, revival_time
from rotkick.trains import periodic_train


def reach(mol, j_max, n, p, period):
    ens = init_ensemble(mol, ThermalSpec(), j_max=j_max)
    final = evolve_ensemble(ens, periodic_train(n, period, p), keep_snapshots=False)[-1]
    _, pops = level_populations(final)
    return max_populated_j(pops), final.truncation_tail()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=7.0, help="kick strength per pulse")
    ap.add_argument("--j-max", type=int, default=160)
    ap.add_argument("--j-max-rigid", type=int, default=240)
    ap.add_argument("--counts", type=int, nargs="+", default=[1, 2, 4, 8, 12, 16, 20])
    args = ap.parse_args()

    trev = revival_time(O2)
    rigid = O2.with_(D=0.0)
    print(f"revival period {trev * 1e12:.6f} ps, P = {args.p} per pulse")
    print(f"{'N':>4} {'reach':>6} {'tail':>9}   {'rigid reach':>11} {'tail':>9}")
    for n in args.counts:
        j, tail = reach(O2, args.j_max, n, args.p, trev)
        jr, tail_r = reach(rigid, args.j_max_rigid, n, args.p, trev)
        print(f"{n:>4} {j:>6} {tail:>9.2e}   {jr:>11} {tail_r:>9.2e}")
    print("reach saturates with distortion on; the rigid control keeps climbing")


if __name__ == "__main__":
    main()
