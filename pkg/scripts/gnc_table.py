"""Invariants of generalized nullcorrelation bundles E(a,b,d) and F(a,b,d).

Prints p, regularity against its bound, the H^1 generation degrees and the
H^1 dimensions for every d > b >= a >= 0 with d <= --max-d.
"""
import argparse

from monadlab.analysis import analyze_monad
from monadlab.sampler import SURVEY_FIELD, SampleConfig, sample_gnc


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-d", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'bundle':<12} {'c1':>3} {'c2':>3} {'p':>3} {'reg':>4} {'bound':>5} {'gen':>8} {'stable':>6}  h1")
    for d in range(1, args.max_d + 1):
        for b in range(d):
            for a in range(b + 1):
                for variant in "EF":
                    m = sample_gnc(SampleConfig(shape=(a, b, d), variant=variant, field=SURVEY_FIELD,
                                                seed=args.seed))
                    rep = analyze_monad(m)
                    c = rep.classification
                    gen = ",".join(map(str, c.h1_generation_degrees))
                    print(f"{variant}({a},{b},{d})".ljust(12),
                          f"{c.chern[0]:>3} {c.chern[1]:>3} {c.buchsbaum_p:>3} {c.regularity_computed:>4} "
                          f"{c.regularity_bound_cmr:>5} {gen:>8} {str(c.is_stable):>6}  {rep.module.dims()}")


if __name__ == "__main__":
    main()
