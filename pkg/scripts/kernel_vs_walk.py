#!/usr/bin/env python3
"""Print kernel rows next to walk-extracted transition frequencies.

    python scripts/kernel_vs_walk.py --w exp:1.0 --states -3 3 --replicas 200000
"""

import argparse

import numpy as np

import srrw
from srrw import vectorwalk as vw
from srrw.harness import substream


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--w", default="exp:1.0")
    ap.add_argument("--states", type=int, nargs=2, default=(-3, 3))
    ap.add_argument("--replicas", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--dir", choices=["+", "-"], default="+")
    args = ap.parse_args()
    w = srrw.WeightFunction.parse(args.w)

    for state in range(args.states[0], args.states[1] + 1):
        row = srrw.eta_kernel_row(w, state)
        out, censored = vw.kernel_transition_samples(
            w, state, args.dir, args.replicas, substream(args.seed, state + 100))
        vals, cnts = np.unique(out, return_counts=True)
        emp = dict(zip(vals.tolist(), (cnts / len(out)).tolist()))
        support = sorted(set(emp) | {s for s in range(row.lo, row.lo + len(row.probs))
                                     if row.prob_at(s) > 1e-6})
        tv = 0.5 * sum(abs(emp.get(k, 0.0) - row.prob_at(k)) for k in set(emp) | set(support))
        print(f"state {state:+d} (dir {args.dir}, censored {censored}, TV {tv:.4f})")
        for v in support:
            print(f"   -> {v:+d}: kernel {row.prob_at(v):.5f}  walk {emp.get(v, 0.0):.5f}")


if __name__ == "__main__":
    main()
