"""Buchsbaum index histograms of sampled instantons, charges 1..6.

    python3 scripts/survey_charges.py --trials 20 --seed 0
"""
import argparse
import json
import time

from monadlab.analysis import generic_bounds
from monadlab.sampler import SURVEY_FIELD, SampleConfig, survey


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-charge", type=int, default=6)
    ap.add_argument("--thooft", action="store_true")
    ap.add_argument("--json", help="write all survey results to this file")
    args = ap.parse_args()

    results = {}
    print(f"{'k':>2} {'lower_p':>7} {'histogram':<24} {'natural':>7} {'supernat':>8} {'tHooft':>6} {'secs':>6}")
    for k in range(1, args.max_charge + 1):
        start = time.perf_counter()
        res = survey(SampleConfig(charge=k, field=SURVEY_FIELD, seed=args.seed, thooft=args.thooft),
                     args.trials)
        secs = time.perf_counter() - start
        hist = " ".join(f"p{p}:{n}" for p, n in res.histogram.items())
        f = res.flag_counts
        print(f"{k:>2} {generic_bounds(k).lower_p:>7} {hist:<24} {f['natural']:>7} "
              f"{f['supernatural']:>8} {f['tHooft']:>6} {secs:>6.1f}")
        results[k] = res.to_json()
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2)


if __name__ == "__main__":
    main()
