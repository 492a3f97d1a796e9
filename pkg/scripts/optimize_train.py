"""Optimize the four interleave delays of a 28-pulse train.

Reproduces the scenario baked into scenarios/o2_cascade.toml: coordinate
descent on (T1, T2, T4) with T3 = T1 + T2, objective = integrated coherence
above a J floor.
"""

import argparse
import json

from rotkick.ensemble import ThermalSpec, init_ensemble
from rotkick.optimize import Objective, default_search, optimize_delays
from rotkick.rotor import O2, revival_time
from rotkick.trains import InterleaveTemplate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=7.0)
    ap.add_argument("--j-max", type=int, default=220)
    ap.add_argument("--base-count", type=int, default=7)
    ap.add_argument("--objective", default="high-J-coherence",
                    choices=["total-coherence", "high-J-coherence"])
    ap.add_argument("--j-min", type=int, default=17)
    ap.add_argument("--window", type=float, default=0.06, help="search half-width in revivals")
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--out", default=None, help="optional JSON path for the result")
    args = ap.parse_args()

    trev = revival_time(O2)
    ens = init_ensemble(O2, ThermalSpec(), j_max=args.j_max)
    tpl = InterleaveTemplate(T4=trev, T1=0.25 * trev, T2=0.5 * trev,
                             P=args.p, base_count=args.base_count)
    obj = Objective(args.objective, j_min=args.j_min)
    res = optimize_delays(tpl, obj, default_search(O2, window_fraction=args.window),
                          ens, threads=args.threads)

    print(f"objective {res.objective:.6e} after {res.evaluations} evaluations")
    for name, t in (("T1", res.T1), ("T2", res.T2), ("T3", res.T3), ("T4", res.T4)):
        print(f"  {name} = {t * 1e12:.6f} ps = {t / trev:.4f} revivals")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"t1_ps": res.T1 * 1e12, "t2_ps": res.T2 * 1e12,
                       "t3_ps": res.T3 * 1e12, "t4_ps": res.T4 * 1e12,
                       "objective": res.objective, "evaluations": res.evaluations}, fh, indent=2)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
