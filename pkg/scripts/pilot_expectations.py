#!/usr/bin/env python3
"""Recompute the pilot quantities behind src/srrw/expectations.json.

Prints suggested bands; it does not overwrite the committed file.
"""

import argparse
import json

import srrw


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=99)
    ap.add_argument("--endpoint-replicas", type=int, default=100_000)
    ap.add_argument("--inverse-replicas", type=int, default=1_000_000)
    ap.add_argument("--threads", type=int, default=2)
    args = ap.parse_args()

    ep = srrw.endpoint_law(srrw.EndpointConfig(
        master_seed=args.seed, n_ladder=(50, 100, 200),
        replicas=args.endpoint_replicas, threads=args.threads))
    ks = {str(r["n"]): r["ks"] for r in ep.tables["endpoint"]}
    # suggested cap: observed + ~3 KS noise quantiles
    slack = 3 * 1.36 / args.endpoint_replicas**0.5
    ks_max = {n: round(v + slack + 0.002, 3) for n, v in ks.items()}

    it = srrw.inverse_time_asymptotics(srrw.InverseTimeConfig(
        master_seed=args.seed, n=24, replicas=args.inverse_replicas,
        cross_replicas=0, threads=args.threads))
    row0 = next(r for r in it.tables["inverse_time"] if r["c"] == 0.0)

    print("observed endpoint KS:", ks)
    print("suggested endpoint_ks_max:", ks_max)
    print("observed inverse-time scaled at c=0: %.3f +- %.3f"
          % (row0["scaled"], row0["se_scaled"]))
    print("committed expectations:", json.dumps(srrw.load_expectations(), indent=2))


if __name__ == "__main__":
    main()
