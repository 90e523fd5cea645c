"""Run both estimators on one (d, p) and print the comparison.

    python scripts/compare_methods.py --distance 3 --noise 0.01 --shots 10000 --rounds-mult 100000
"""
import argparse
import json

from anyonsweep.harness import ExperimentConfig, run_compare


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--distance", type=int, default=3)
    parser.add_argument("--noise", type=float, default=0.01)
    parser.add_argument("--shots", type=int, default=10_000)
    parser.add_argument("--rounds-mult", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    cfg = ExperimentConfig(method="compare", distances=[args.distance], noise=[args.noise],
                           shots=args.shots, rounds_mult=args.rounds_mult, seed=args.seed,
                           workers=args.workers)
    for row in run_compare(cfg):
        new, old = row["new"], row["legacy"]
        print(f"d={row['d']} p={row['p']}")
        print(f"  streaming : {new['f_hat']:.5f} [{new['lo']:.5f}, {new['hi']:.5f}]"
              f"  ({row['wall_time_new']:.1f} s)")
        print(f"  parity fit: {old['f_hat']:.5f} [{old['lo']:.5f}, {old['hi']:.5f}]"
              f"  ({row['wall_time_legacy']:.1f} s)")
        print(f"  intervals overlap: {row['agree']}")
        print(json.dumps(old["checkpoints"]))


if __name__ == "__main__":
    main()
