"""Streaming estimate as a function of experiment duration.

Writes ``rounds/d  f_hat  lo  hi`` rows for a range of duration multipliers,
one file per distance, for a plot of the estimate against run length.

    python scripts/duration_curve.py --noise 0.008 --distance 3,5 --out curves/
"""
import argparse
import os

from anyonsweep.estimate import wilson_interval
from anyonsweep.harness import ExperimentConfig, run_new

DEFAULT_MULTS = "1,2,5,10,20,50,100,200,500,1000"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--distance", default="3,5")
    parser.add_argument("--noise", type=float, default=0.008)
    parser.add_argument("--mults", default=DEFAULT_MULTS)
    parser.add_argument("--repeats", type=int, default=20,
                        help="independent runs pooled per multiplier")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="duration_curves")
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for d in (int(x) for x in args.distance.split(",")):
        path = os.path.join(args.out, f"duration_d{d}_p{args.noise:g}.dat")
        with open(path, "w") as fh:
            fh.write("# rounds/d  f_hat  lo  hi\n")
            for m in (int(x) for x in args.mults.split(",")):
                l = blocks = 0
                for rep in range(args.repeats):
                    cfg = ExperimentConfig(distances=[d], noise=[args.noise], rounds_mult=m,
                                           seed=args.seed + 1000 * rep + m, workers=1)
                    (r,) = run_new(cfg)
                    l += r.l
                    blocks += m
                lo, hi = wilson_interval(l, blocks)
                fh.write(f"{m} {l / blocks:.6g} {lo:.6g} {hi:.6g}\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
