#!/usr/bin/env python3
"""Falsification sweep over the random Blaschke pool for several lambda and mu values.

Prints one row per level-set family and writes per-trial JSONL files.

    python3 scripts/falsification_sweep.py --maps 200 --seed 0 --out-dir runs/sweep
"""

import argparse
import os
import time

from hypolevel.campaign import blaschke_pool, falsification_campaign
from hypolevel.level_set import DMu, OmegaLambda


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--maps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pairs", type=int, default=500)
    ap.add_argument("--lambdas", type=float, nargs="*", default=[0.8, 1, 1.1, 1.5, 2, 5])
    ap.add_argument("--mus", type=float, nargs="*", default=[0.5, -0.1, -0.5, -1, -2])
    ap.add_argument("--out-dir")
    args = ap.parse_args()

    pool = blaschke_pool(args.maps, args.seed)
    specs = [OmegaLambda(x) for x in args.lambdas] + [DMu(x) for x in args.mus]
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
    print(f"{'family':<18}{'covered':>8}{'excluded':>9}{'empty':>7}{'outside':>8}"
          f"{'violations':>11}{'seconds':>9}")
    for spec in specs:
        t0 = time.perf_counter()
        s = falsification_campaign(pool, [spec], seed=args.seed, n_pairs=args.pairs)
        by = s.totals()["by_status"]
        print(f"{spec.label:<18}{by.get('covered', 0):>8}{by.get('excluded', 0):>9}"
              f"{by.get('empty', 0):>7}{by.get('outside', 0):>8}{s.violations:>11}"
              f"{time.perf_counter() - t0:>9.1f}")
        if args.out_dir:
            s.write_jsonl(os.path.join(args.out_dir, f"{spec.label}.jsonl".replace(" ", "_")))


if __name__ == "__main__":
    main()
