"""How tight is each registered bound on random operands?

Prints, per bound, the quantiles of lhs / rhs over the trials (1.0 means attained) and
the smallest slack seen, sorted from tightest to loosest median.

    python3 scripts/tightness_survey.py --dim 4 --rank 3 --trials 50
"""
import argparse

from shkit.harness import TrialConfig, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--rank", type=int, default=None)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = TrialConfig(args.dim, args.rank or args.dim, args.trials, master_seed=args.seed, identity_ids=())
    rep = run_suite(cfg)
    rows = sorted(rep.bounds.items(), key=lambda kv: -kv[1]["q50"])
    print(f"{'bound':<18} {'evals':>6} {'q50':>8} {'q90':>8} {'q99':>8} {'min slack':>11} {'viol':>5}")
    for bid, s in rows:
        print(f"{bid:<18} {s['evaluations']:>6} {s['q50']:>8.4f} {s['q90']:>8.4f} {s['q99']:>8.4f} "
              f"{s['min_slack']:>11.3e} {s['violations']:>5}")
    print(f"\n{rep.total_violations} violations, {len(rep.errors)} errors, {rep.wall_time:.1f}s")


if __name__ == "__main__":
    main()
