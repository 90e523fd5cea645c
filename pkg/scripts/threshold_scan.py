"""Coarse noise scan of the streaming estimate for several distances.

Used to locate the d=3/d=5 crossing before fixing the threshold-ordering
test points. Prints one line per (p, d).

    python scripts/threshold_scan.py --distance 3,5 --noise 0.005,0.01,0.02,0.03,0.04
"""
import argparse

from anyonsweep.harness import ExperimentConfig, run_new


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--distance", default="3,5")
    parser.add_argument("--noise", default="0.005,0.01,0.02,0.025,0.03,0.04")
    parser.add_argument("--rounds-mult", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    cfg = ExperimentConfig(
        distances=[int(x) for x in args.distance.split(",")],
        noise=[float(x) for x in args.noise.split(",")],
        rounds_mult=args.rounds_mult, seed=args.seed, workers=args.workers,
    )
    records = sorted(run_new(cfg), key=lambda r: (r.p, r.d))
    print(f"{'p':>8} {'d':>3} {'l':>7} {'f_hat':>10} {'lo':>10} {'hi':>10}")
    for r in records:
        print(f"{r.p:8.4f} {r.d:3d} {r.l:7d} {r.f_hat:10.5f} {r.lo:10.5f} {r.hi:10.5f}")


if __name__ == "__main__":
    main()
