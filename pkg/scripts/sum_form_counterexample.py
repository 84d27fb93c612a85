"""The lower bound for w_A2((P Q; O O)) only holds in its max form.

The sum form 1/2 max{w(P+Q) + w(P-Q), w(P+iQ) + w(P-iQ)} is printed next to the block
radius on scalar examples and on a random search. The registered max form, with each
sum replaced by a max, is checked on the same operands.

    python3 scripts/sum_form_counterexample.py --search 2000
"""
import argparse

import numpy as np

from shkit.blocks import assemble
from shkit.catalog import evaluate_bound, sahoo1_sum_form
from shkit.core import make_space
from shkit.harness import gen_compatible, gen_metric


def show(label, sp, P, Q):
    bound, quantity = sahoo1_sum_form(P, Q)
    held = evaluate_bound(sp, "sahoo1", (P, Q)).holds
    flag = "FAILS" if bound > quantity * (1 + 1e-12) else "holds"
    print(f"{label:<28} sum form {bound:.6f} vs w {quantity:.6f}: {flag}; max form holds: {held}")
    return bound > quantity * (1 + 1e-12)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--search", type=int, default=500, help="random operand pairs to try")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    one = make_space(np.eye(1))
    show("P = 0, Q = 1", one, one.zero(), one.identity())
    show("P = Q = 1", one, one.identity(), one.identity())

    rng = np.random.default_rng(args.seed)
    fails = 0
    for _ in range(args.search):
        n = int(rng.integers(1, 5))
        sp = gen_metric(n, int(rng.integers(1, n + 1)), rng)
        P, Q = gen_compatible(sp, rng), gen_compatible(sp, rng)
        bound, quantity = sahoo1_sum_form(P, Q)
        fails += bound > quantity * (1 + 1e-12)
        assert evaluate_bound(sp, "sahoo1", (P, Q)).holds
        assert abs(assemble(sp, P, Q, None, None).omega - quantity) <= 1e-9 * (1 + quantity)
    print(f"\nrandom search: sum form fails on {fails} of {args.search} pairs; max form never fails")


if __name__ == "__main__":
    main()
