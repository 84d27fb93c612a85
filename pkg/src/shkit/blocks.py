"""2 x 2 operator matrices over H + H under the lifted metric diag(A, A)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import numerics as nx
from .core import CompatibleOperator, MetricSpace, compatible, is_compatible
from .errors import DimensionMismatch, NotCompatible

ROLES = ("P", "Q", "R", "S")


def lift_metric(space: MetricSpace) -> MetricSpace:
    return space.lifted


def _block_matrix(space: MetricSpace, blk) -> np.ndarray:
    n = space.dim
    if blk is None or (np.isscalar(blk) and blk == 0):
        return np.zeros((n, n), dtype=complex)
    if isinstance(blk, CompatibleOperator):
        return blk.T
    M = nx.as_square(blk, "block")
    if M.shape[0] != n:
        raise DimensionMismatch(f"block is {M.shape[0]}x{M.shape[0]}, metric is {n}x{n}")
    return M


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """[[P, Q], [R, S]] with block (i, j) at rows i*n:(i+1)*n, cols j*n:(j+1)*n."""

    space: MetricSpace
    P: CompatibleOperator
    Q: CompatibleOperator
    R: CompatibleOperator
    S: CompatibleOperator

    @property
    def space2(self) -> MetricSpace:
        return self.space.lifted

    @cached_property
    def assembled(self) -> np.ndarray:
        return np.block([[self.P.T, self.Q.T], [self.R.T, self.S.T]])

    @cached_property
    def op(self) -> CompatibleOperator:
        # four compatible blocks make a compatible block operator
        return CompatibleOperator._trusted(self.space2, self.assembled)

    def block(self, i: int, j: int) -> CompatibleOperator:
        return (self.P, self.Q, self.R, self.S)[2 * i + j]

    @property
    def omega(self) -> float:
        return self.op.omega

    @property
    def norm(self) -> float:
        return self.op.norm

    @property
    def radius(self) -> float:
        return self.op.radius

    def block_sharp(self) -> BlockOperator:
        """Sharp computed blockwise: [[P#, R#], [Q#, S#]]."""
        return BlockOperator(self.space, self.P.sharp, self.R.sharp, self.Q.sharp, self.S.sharp)

    def norm_matrix(self) -> np.ndarray:
        return np.array([[self.P.norm, self.Q.norm], [self.R.norm, self.S.norm]])


def assemble(space: MetricSpace, P=None, Q=None, R=None, S=None) -> BlockOperator:
    blocks = []
    for name, blk in zip(ROLES, (P, Q, R, S)):
        if isinstance(blk, CompatibleOperator) and blk.space is space:
            blocks.append(blk)
            continue
        M = _block_matrix(space, blk)
        check = is_compatible(space, M)
        if not check:
            raise NotCompatible(f"block {name}: {check.message()}")
        blocks.append(compatible(space, M))
    return BlockOperator(space, *blocks)


def split(space: MetricSpace, M) -> BlockOperator:
    """Inverse of ``assemble`` for a 2n x 2n matrix."""
    n = space.dim
    M = nx.as_square(M, "block operator")
    if M.shape[0] != 2 * n:
        raise DimensionMismatch(f"expected {2 * n}x{2 * n}, got {M.shape}")
    return assemble(space, M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:])


def _scalar_blocks(space: MetricSpace, a, b, c, d) -> BlockOperator:
    I = space.identity()
    return BlockOperator(space, a * I, b * I, c * I, d * I)


def proof_unitaries(space: MetricSpace) -> dict[str, BlockOperator]:
    """The diag(A, A)-unitary block operators used to rotate 2 x 2 operator matrices."""
    h = 1.0 / np.sqrt(2.0)
    return {
        "rotate_plus": _scalar_blocks(space, h, h, -h, h),  # (1/sqrt2)(I I; -I I)
        "rotate_minus": _scalar_blocks(space, h, -h, h, h),  # (1/sqrt2)(I -I; I I)
        "rotate_imag": _scalar_blocks(space, h, 1j * h, 1j * h, h),  # (1/sqrt2)(I iI; iI I)
        "swap": _scalar_blocks(space, 0, 1, 1, 0),  # (O I; I O)
        "swap_neg_upper": _scalar_blocks(space, 0, -1, 1, 0),  # (O -I; I O)
        "swap_neg_lower": _scalar_blocks(space, 0, 1, -1, 0),  # (O I; -I O)
        "sign_flip": _scalar_blocks(space, 1, 0, 0, -1),  # (I O; O -I)
    }


def nonneg_numerical_radius(M) -> float:
    """w(M) for an entrywise nonnegative matrix: half the spectral radius of M + M^T."""
    M = np.asarray(M, dtype=float)
    if np.any(M < 0):
        raise ValueError("matrix has negative entries")
    return 0.5 * nx.spectral_radius(M + M.T)
