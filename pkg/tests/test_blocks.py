import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from shkit.blocks import assemble, lift_metric, nonneg_numerical_radius, proof_unitaries, split
from shkit.core import a_inner, compatible, is_a_unitary, make_space
from shkit.errors import DimensionMismatch, NotCompatible
from shkit.harness import gen_compatible, gen_metric
from shkit.numerics import numerical_radius

from strategies import space_and_ops, spaces


def rel_err(a, b):
    return abs(a - b) / (1.0 + max(abs(a), abs(b)))


class TestLift:
    def test_identity(self):
        big = lift_metric(make_space(np.eye(3)))
        assert np.allclose(big.A, np.eye(6)) and big.rank == 6

    def test_rank_doubles(self):
        assert lift_metric(make_space(np.diag([1.0, 0.0]))).rank == 2

    @given(spaces(max_dim=4))
    def test_eigenvalue_multiset(self, sp):
        big = lift_metric(sp)
        assert big.rank == 2 * sp.rank
        expected = np.sort(np.concatenate([sp.eigenvalues, sp.eigenvalues]))
        assert np.allclose(big.eigenvalues, expected, rtol=1e-10, atol=0)

    @given(spaces(max_dim=4), st.integers(0, 2 ** 32 - 1))
    def test_inner_product_splits(self, sp, seed):
        rng = np.random.default_rng(seed)
        n = sp.dim
        x = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
        y = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
        lhs = a_inner(lift_metric(sp), x, y)
        rhs = a_inner(sp, x[:n], y[:n]) + a_inner(sp, x[n:], y[n:])
        assert abs(lhs - rhs) <= 1e-12 * (1 + np.abs(sp.A).max() * np.linalg.norm(x) * np.linalg.norm(y))


class TestAssemble:
    def test_index_convention(self, rng):
        sp = make_space(np.eye(2))
        P, Q, R, S = (rng.standard_normal((2, 2)) for _ in range(4))
        B = assemble(sp, P, Q, R, S)
        M = B.assembled
        assert np.array_equal(M[:2, :2], P) and np.array_equal(M[:2, 2:], Q)
        assert np.array_equal(M[2:, :2], R) and np.array_equal(M[2:, 2:], S)
        assert np.array_equal(B.block(1, 0).T, R)
        again = split(sp, M)
        for i in range(2):
            for j in range(2):
                assert np.array_equal(again.block(i, j).T, B.block(i, j).T)

    def test_zero(self):
        B = assemble(make_space(np.diag([2.0, 0.0, 1.0])))
        assert B.omega == B.norm == B.radius == 0.0

    def test_names_offending_block(self):
        sp = make_space(np.diag([1.0, 0.0]))
        with pytest.raises(NotCompatible, match="block R"):
            assemble(sp, None, None, [[0, 1], [0, 0]], None)

    def test_dimension(self):
        with pytest.raises(DimensionMismatch):
            assemble(make_space(np.eye(2)), np.eye(3))
        with pytest.raises(DimensionMismatch):
            split(make_space(np.eye(2)), np.eye(3))

    @given(space_and_ops(4, max_dim=4))
    def test_compatibility_of_assembled(self, data):
        sp, P, Q, R, S = data
        B = assemble(sp, P, Q, R, S)
        assert compatible(lift_metric(sp), B.assembled) is not None

    def test_incompatible_block_makes_incompatible_matrix(self):
        sp = make_space(np.diag([1.0, 0.0]))
        M = np.zeros((4, 4))
        M[0, 3] = 1.0  # Q = [[0, 1], [0, 0]]
        with pytest.raises(NotCompatible):
            compatible(lift_metric(sp), M)

    @given(space_and_ops(4, max_dim=4))
    def test_blockwise_sharp(self, data):
        sp, P, Q, R, S = data
        B = assemble(sp, P, Q, R, S)
        direct = B.op.sharp.T
        blockwise = B.block_sharp().assembled
        assert np.abs(direct - blockwise).max() <= 1e-10 * (1 + np.abs(direct).max())

    @given(space_and_ops(2, max_dim=4))
    def test_diagonal_and_antidiagonal(self, data):
        sp, T, S = data
        assert rel_err(assemble(sp, T, None, None, S).omega, max(T.omega, S.omega)) <= 1e-8
        target = max(T.norm, S.norm)
        assert rel_err(assemble(sp, T, None, None, S).norm, target) <= 1e-8
        assert rel_err(assemble(sp, None, T, S, None).norm, target) <= 1e-8

    @given(space_and_ops(2, max_dim=4))
    def test_lem100(self, data):
        sp, T, S = data
        assert rel_err(assemble(sp, T, S, S, T).omega, max((T + S).omega, (T - S).omega)) <= 1e-8
        assert rel_err(assemble(sp, T, -S, S, T).omega,
                       max((T + 1j * S).omega, (T - 1j * S).omega)) <= 1e-8

    @given(space_and_ops(4, max_dim=4))
    def test_norm_and_radius_of_norm_matrix(self, data):
        sp, P, Q, R, S = data
        B = assemble(sp, P, Q, R, S)
        N = B.norm_matrix()
        assert B.radius <= max(abs(np.linalg.eigvals(N))) + 1e-8
        assert B.norm <= np.linalg.norm(N, 2) + 1e-8


class TestProofUnitaries:
    @pytest.mark.parametrize("A", [np.eye(2), np.diag([1.0, 0.0]), np.diag([3.0, 0.0, 0.2])])
    def test_all_unitary(self, A):
        sp = make_space(A)
        for name, U in proof_unitaries(sp).items():
            assert is_a_unitary(lift_metric(sp), U.assembled), name

    @given(spaces(max_dim=4))
    def test_random_metrics(self, sp):
        for U in proof_unitaries(sp).values():
            assert is_a_unitary(lift_metric(sp), U.assembled)

    def test_rotation_diagonalizes(self):
        # U^# (T S; S T) U = diag(T - S, T + S) for the (1/sqrt2)(I I; -I I) rotation
        sp = gen_metric(3, 2, 4)
        T, S = gen_compatible(sp, 5), gen_compatible(sp, 6)
        U = proof_unitaries(sp)["rotate_plus"].op
        M = assemble(sp, T, S, S, T).op
        D = (U.sharp @ M @ U).T
        P2 = lift_metric(sp).projector
        expected = P2 @ assemble(sp, T - S, None, None, T + S).assembled @ P2
        assert np.abs(D - expected).max() <= 1e-9 * (1 + np.abs(D).max())


class TestNonnegative:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            nonneg_numerical_radius([[1, -1], [0, 1]])

    @given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1))
    def test_matches_general_radius(self, k, seed):
        M = np.random.default_rng(seed).uniform(0, 1, (k, k))
        assert rel_err(numerical_radius(M), nonneg_numerical_radius(M)) <= 1e-8
