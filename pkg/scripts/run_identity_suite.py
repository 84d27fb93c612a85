"""Run the identity suite over a grid of (dim, rank) families and print a table.

    python3 scripts/run_identity_suite.py --trials 100 --dims 2 3 4 6 --deficiencies 0 1 2
"""
import argparse
import time

from shkit.harness import TrialConfig, identity_ids, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 6])
    ap.add_argument("--deficiencies", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--stress", action="store_true")
    args = ap.parse_args()

    ids = identity_ids()
    worst = dict.fromkeys(ids, 0.0)
    print(f"{'dim':>4} {'rank':>4} {'trials':>6} {'failures':>8} {'max residual':>13} {'seconds':>8}")
    for n in args.dims:
        for d in args.deficiencies:
            if n - d < 1:
                continue
            t0 = time.perf_counter()
            rep = run_suite(TrialConfig(n, n - d, args.trials, master_seed=args.seed, tol=args.tol,
                                        bound_ids=(), stress=args.stress))
            res = max(s["max_residual"] for s in rep.identities.values())
            for iid, s in rep.identities.items():
                worst[iid] = max(worst[iid], s["max_residual"])
            print(f"{n:>4} {n - d:>4} {args.trials:>6} {rep.identity_failures:>8} {res:>13.3e} "
                  f"{time.perf_counter() - t0:>8.1f}")
    print("\nworst residual per identity")
    for iid in ids:
        print(f"  {iid:<16} {worst[iid]:.3e}")


if __name__ == "__main__":
    main()
