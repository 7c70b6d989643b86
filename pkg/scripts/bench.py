#!/usr/bin/env python3
"""Timing table for the coset evaluator against brute force, plus dual-weight cost per omega."""

import argparse
import json
import time

from padicweights.characters import characters_of_conductor
from padicweights.dualweight import dual_weight
from padicweights.scans import bench_fast_vs_brute


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--cases", type=int, default=100)
    args = ap.parse_args()

    print("p\tn\tcases\tmax_rel_err\tt_fast\tt_brute\tspeedup\tms_per_dual_weight")
    for n in range(3, args.max_n + 1):
        rec = bench_fast_vs_brute(args.p, n, args.cases)
        chi = characters_of_conductor(args.p, n)[0]
        oms = characters_of_conductor(args.p, n)[:20]
        t0 = time.perf_counter()
        for om in oms:
            dual_weight(chi, om)
        per = 1e3 * (time.perf_counter() - t0) / len(oms)
        print(f"{args.p}\t{n}\t{rec['cases']}\t{rec['max_rel_err']:.2e}\t{rec['t_fast']:.4f}\t"
              f"{rec['t_brute']:.4f}\t{rec['speedup']:.1f}\t{per:.1f}")
    print(json.dumps({"note": "best of 3 repeats; single process"}))


if __name__ == "__main__":
    main()
