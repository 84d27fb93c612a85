import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from shkit.catalog import (BoundResult, compare_bounds, evaluate_bound, get_spec, operand_digest,
                           registry, sahoo1_sum_form)
from shkit.core import compatible, make_space
from shkit.errors import (IncompatibleOperandRoles, NotCompatible, OperandConstraint,
                          ParamOutOfDomain, UnknownBound)
from shkit.harness import gen_compatible, gen_metric

import oracles
from strategies import space_and_ops

IDS = [spec.bound_id for spec in registry()]

# lhs and rhs for a fixed tuple under A = diag(2, 1), from the dense-grid oracle on
# A^{1/2} T A^{-1/2} with 2^20 angles
FIXED_A = np.diag([2.0, 1.0])
FIXED_OPS = (
    np.array([[1, 1j], [0, 2]]),
    np.array([[0, 1], [1, 1j]]),
    np.array([[2, 0], [1, -1]]),
    np.array([[1j, 0], [0, 1]]),
)
FROZEN = {
    "them10": (2.6936017645869, 4.7281204301643),
    "them100": (2.6936017645869, 4.1418740775282),
}


class TestRegistry:
    def test_ids_unique(self):
        assert len(IDS) == len(set(IDS))

    def test_contents(self):
        assert len(IDS) == 25
        for bid in ("thm101", "ineq106", "them10", "them100", "sahoo1", "f12", "kkkk2020", "lmm05"):
            assert bid in IDS

    def test_thm101_domain(self):
        kind, domain, _ = get_spec("thm101").params["lam"]
        assert kind == "interval" and domain == (0.0, 1.0)

    def test_directions(self):
        assert get_spec("sahoo1").direction == "lower"
        assert get_spec("sahoo2").direction == "lower"
        assert get_spec("them100_sharper").direction == "comparison"
        assert get_spec("them10").direction == "upper"

    def test_statements_present(self):
        assert all(spec.statement for spec in registry())

    def test_unknown(self):
        with pytest.raises(UnknownBound):
            get_spec("nope")
        with pytest.raises(KeyError):
            get_spec("nope")


class TestEvaluate:
    def test_frozen_values(self):
        sp = make_space(FIXED_A)
        for bid, (lhs, rhs) in FROZEN.items():
            res = evaluate_bound(sp, bid, FIXED_OPS)
            assert res.lhs == pytest.approx(lhs, abs=1e-9)
            assert res.rhs == pytest.approx(rhs, abs=1e-9)
            assert res.holds

    def test_refine1_upper_nilpotent(self):
        res = evaluate_bound(make_space(np.eye(2)), "refine1_upper", [[[0, 1], [0, 0]]])
        assert res.lhs == pytest.approx(0.5, abs=1e-10)
        assert res.rhs == pytest.approx(1.0, abs=1e-12)
        assert res.holds

    def test_them10_saturates(self):
        sp = gen_metric(4, 3, 0)
        Q = gen_compatible(sp, 1)
        O = sp.zero()
        res = evaluate_bound(sp, "them10", (O, Q, Q, O))
        assert abs(res.lhs - Q.omega) <= 1e-10 * (1 + Q.omega)
        assert abs(res.slack) <= 1e-10 * (1 + res.rhs)

    def test_sk1_identity_saturates(self, rng):
        sp = make_space(np.eye(3))
        S = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        res = evaluate_bound(sp, "sk1", (np.eye(3), S), {"sign": 1})
        assert abs(res.slack) <= 1e-9 * (1 + res.rhs)

    def test_thm101_random_lambda(self):
        sp = gen_metric(4, 3, 2)
        ops = [gen_compatible(sp, s) for s in range(4)]
        res = evaluate_bound(sp, "thm101", ops, {"lam": 0.37})
        assert res.holds and res.slack >= 0 and res.params == {"lam": 0.37}

    @pytest.mark.parametrize("lam", [-0.1, 1.5])
    def test_lambda_domain(self, lam):
        sp = make_space(np.eye(2))
        with pytest.raises(ParamOutOfDomain):
            evaluate_bound(sp, "thm101", [np.eye(2)] * 4, {"lam": lam})

    def test_sign_domain(self):
        with pytest.raises(ParamOutOfDomain):
            evaluate_bound(make_space(np.eye(2)), "sk1", [np.eye(2)] * 2, {"sign": 2})

    def test_unknown_bound(self):
        with pytest.raises(UnknownBound):
            evaluate_bound(make_space(np.eye(2)), "nope", [np.eye(2)])

    def test_operand_count(self):
        with pytest.raises(IncompatibleOperandRoles):
            evaluate_bound(make_space(np.eye(2)), "them10", [np.eye(2)] * 3)
        with pytest.raises(IncompatibleOperandRoles):
            evaluate_bound(make_space(np.eye(2)), "them10", {"P": np.eye(2)})

    def test_mapping_operands(self):
        sp = make_space(FIXED_A)
        by_role = dict(zip("PQRS", FIXED_OPS))
        assert evaluate_bound(sp, "them10", by_role) == evaluate_bound(sp, "them10", FIXED_OPS)

    def test_incompatible_operand(self):
        sp = make_space(np.diag([1.0, 0.0]))
        with pytest.raises(NotCompatible):
            evaluate_bound(sp, "refine1_upper", [[[0, 1], [0, 0]]])

    def test_constraint(self):
        sp = gen_metric(3, 3, 1)
        P, Q, R, S = (gen_compatible(sp, s) for s in range(4))
        with pytest.raises(OperandConstraint):
            evaluate_bound(sp, "cor100_vs_kk2020", (P, Q, R, S))
        assert evaluate_bound(sp, "cor100_vs_kk2020", (P, Q, P, Q)).holds

    def test_deterministic(self):
        sp = gen_metric(4, 2, 9)
        ops = [gen_compatible(sp, s) for s in range(4)]
        a = evaluate_bound(sp, "upper3", ops)
        fresh = make_space(sp.A.copy())
        b = evaluate_bound(fresh, "upper3", [X.T.copy() for X in ops])
        assert a == b and isinstance(a, BoundResult)
        assert a.as_dict()["operand_digest"] == b.operand_digest

    def test_digest_depends_on_params(self):
        sp = make_space(np.eye(2))
        ops = [compatible(sp, np.eye(2))] * 4
        d1 = operand_digest(sp, "PQRS", ops, {"lam": 0.25})
        d2 = operand_digest(sp, "PQRS", ops, {"lam": 0.5})
        assert d1 != d2 and len(d1) == 16

    def test_zero_operands(self):
        sp = gen_metric(3, 2, 4)
        for spec in registry():
            res = evaluate_bound(sp, spec.bound_id, [sp.zero()] * len(spec.roles))
            assert res.lhs == 0.0 and res.rhs == 0.0 and res.holds

    def test_block_radius_matches_sampling(self):
        rng = np.random.default_rng(2)
        sp = gen_metric(2, 1, rng)
        ops = [gen_compatible(sp, rng) for _ in range(4)]
        res = evaluate_bound(sp, "them10", ops)
        big = np.kron(np.eye(2), sp.A)
        M = np.block([[ops[0].T, ops[1].T], [ops[2].T, ops[3].T]])
        sampled = oracles.sampled_numerical_radius(big, M, rng)
        assert sampled <= res.lhs * (1 + 1e-9)
        assert res.lhs - sampled <= 1e-2 * res.lhs


class TestSahooSumForm:
    def test_counterexample(self):
        # P = 0, Q = I: the sum form claims 1 <= w_A2((O I; O O)) = 1/2
        sp = make_space(np.eye(1))
        bound, quantity = sahoo1_sum_form(sp.zero(), sp.identity())
        assert bound == pytest.approx(1.0) and quantity == pytest.approx(0.5)
        assert bound > quantity
        assert evaluate_bound(sp, "sahoo1", (sp.zero(), sp.identity())).holds

    def test_second_counterexample(self):
        sp = make_space(np.eye(1))
        one = sp.identity()
        bound, quantity = sahoo1_sum_form(one, one)
        assert bound == pytest.approx(math.sqrt(2.0)) and quantity == pytest.approx((1 + math.sqrt(2)) / 2)
        assert bound > quantity


class TestCompare:
    def test_sorted_by_rhs(self):
        sp = gen_metric(4, 3, 5)
        ops = [gen_compatible(sp, s) for s in range(4)]
        rows = compare_bounds(sp, ["them10", "them100", "upper3", "thm101"], ops)
        assert [r.rhs for r in rows] == sorted(r.rhs for r in rows)
        assert [r.bound_id for r in rows].index("them100") < [r.bound_id for r in rows].index("them10")

    def test_zero_operands_lexicographic(self):
        sp = make_space(np.eye(2))
        ids = ["upper3", "them10", "ineq106", "them100"]
        rows = compare_bounds(sp, ids, [np.zeros((2, 2))] * 4)
        assert [r.bound_id for r in rows] == sorted(ids)

    def test_role_mismatch(self):
        with pytest.raises(IncompatibleOperandRoles):
            compare_bounds(make_space(np.eye(2)), ["them10", "sk1"], [np.eye(2)] * 4)

    def test_cor100_sharper_than_kk2020(self):
        sp = gen_metric(3, 2, 6)
        P, Q = gen_compatible(sp, 1), gen_compatible(sp, 2)
        rows = compare_bounds(sp, ["kk2020", "cor100"], (P, Q, P, Q))
        assert rows[0].bound_id == "cor100" or rows[0].rhs == rows[1].rhs


@settings(max_examples=25)
@given(space_and_ops(6, max_dim=4), st.floats(0, 1), st.sampled_from([1, -1]))
def test_soundness(data, lam, sign):
    sp, T, S, P, Q, R, S4 = data
    pools = {("T",): (T,), ("T", "S"): (T, S), ("P", "Q"): (P, Q), ("P", "R"): (P, R),
             ("P", "Q", "R", "S"): (P, Q, R, S4)}
    for spec in registry():
        ops = (P, Q, P, Q) if spec.bound_id == "cor100_vs_kk2020" else pools[spec.roles]
        res = evaluate_bound(sp, spec.bound_id, ops, {"lam": lam, "sign": sign})
        assert res.holds, (spec.bound_id, res)
        assert math.isfinite(res.lhs) and res.lhs >= 0 and res.rhs >= 0
