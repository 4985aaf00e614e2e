#!/usr/bin/env python3
"""Compare every engine with the brute-force oracle on seeded random instances.

    python scripts/run_oracle_diff.py --count 500 --seed 1
"""

import argparse
import random
import time
from collections import Counter

from combideal.engines import EngineConfig, decide, oracle_member, verify_witness
from combideal.random_instances import FAMILIES, instance_for_engine, random_f0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--families", nargs="+", choices=FAMILIES, default=list(FAMILIES))
    args = ap.parse_args()

    agree, members, bad = Counter(), Counter(), []
    start = time.perf_counter()
    for k in range(args.count):
        fam = args.families[k % len(args.families)]
        rng = random.Random(f"{args.seed}:{fam}:{k}")
        p = instance_for_engine(rng, fam)
        f0 = random_f0(rng, p)
        d = decide(f0, p, EngineConfig(engine=fam))
        if d.member == oracle_member(f0, p) and (d.member or verify_witness(f0, p, d.witness)):
            agree[fam] += 1
            members[fam] += d.member
        else:
            bad.append((fam, k))
    elapsed = time.perf_counter() - start

    print(f"{'engine':<12} {'agree':>7} {'members':>8}")
    for fam in args.families:
        total = sum(1 for k in range(args.count) if args.families[k % len(args.families)] == fam)
        print(f"{fam:<12} {agree[fam]:>3}/{total:<3} {members[fam]:>8}")
    print(f"{args.count} instances in {elapsed:.1f}s")
    if bad:
        print("disagreements:", bad[:10])
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
