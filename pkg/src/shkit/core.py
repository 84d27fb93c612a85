"""Seminorm, A-adjoint, A-numerical radius and A-spectral radius for a PSD metric A.

Every A-quantity of an A-bounded operator T is reduced to a classical quantity of
its compression

    T~ = L^{1/2} V_r^* T V_r L^{-1/2}

where A = V_r L V_r^* is the thin eigendecomposition of A on its range. Writing
x = V_r u + V_0 w and z = L^{1/2} u, one has ||x||_A = ||z|| and, because T maps
N(A) into N(A), ||Tx||_A = ||T~ z|| and <Tx, x>_A = <T~ z, z>. Hence

    ||T||_A = ||T~||,  w_A(T) = w(T~),  r_A(T) = r(T~),  and (T^#)~ = (T~)^*.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import numerics as nx
from .errors import DimensionMismatch, NotCompatible, NotPositive, NegativeEigenvalue, ZeroMetric

PREDICATE_TOL = nx.IDENTITY_TOL
_MEMO_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """A validated positive semidefinite metric with its cached eigenstructure."""

    A: np.ndarray
    rank: int
    eigenvalues: np.ndarray  # the r nonzero eigenvalues, ascending
    range_basis: np.ndarray  # n x r, orthonormal columns spanning R(A)
    null_basis: np.ndarray  # n x (n - r), orthonormal columns spanning N(A)
    rtol: float = nx.DEFAULT_RTOL

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @cached_property
    def sqrt(self) -> np.ndarray:
        Vr = self.range_basis
        return (Vr * np.sqrt(self.eigenvalues)) @ Vr.conj().T

    @cached_property
    def pinv(self) -> np.ndarray:
        Vr = self.range_basis
        return (Vr / self.eigenvalues) @ Vr.conj().T

    @cached_property
    def projector(self) -> np.ndarray:
        Vr = self.range_basis
        return Vr @ Vr.conj().T

    @cached_property
    def metric(self) -> np.ndarray:
        """A rebuilt from its range eigenpairs (sub-threshold eigenvalues dropped)."""
        Vr = self.range_basis
        return (Vr * self.eigenvalues) @ Vr.conj().T

    @cached_property
    def lifted(self) -> MetricSpace:
        """The metric diag(A, A) on H + H."""
        n = self.dim
        big = np.zeros((2 * n, 2 * n), dtype=complex)
        big[:n, :n] = self.A
        big[n:, n:] = self.A
        return make_space(big, self.rtol)

    @cached_property
    def _memo(self) -> dict:
        return {}

    def memoized(self, kind: str, T: np.ndarray, compute):
        """Cache scalar quantities of operators by value; many bounds share operands."""
        key = (kind, T.tobytes())
        memo = self._memo
        try:
            return memo[key]
        except KeyError:
            pass
        if len(memo) >= _MEMO_LIMIT:
            memo.clear()
        value = memo[key] = compute()
        return value

    @property
    def scale(self) -> float:
        return float(self.eigenvalues[-1])

    def operator(self, T) -> CompatibleOperator:
        return compatible(self, T)

    def zero(self) -> CompatibleOperator:
        return CompatibleOperator._trusted(self, np.zeros((self.dim, self.dim), dtype=complex))

    def identity(self) -> CompatibleOperator:
        return CompatibleOperator._trusted(self, np.eye(self.dim, dtype=complex))


def make_space(A, rtol: float = nx.DEFAULT_RTOL) -> MetricSpace:
    A = nx.as_square(A, "metric")
    w, V = nx.hermitian_eig(A, tol=rtol)
    try:
        r = nx.pseudo_rank(w, rtol)
    except NegativeEigenvalue as exc:
        raise NotPositive(f"metric is not positive semidefinite: {exc}") from None
    if r == 0:
        raise ZeroMetric("metric is zero")
    n = A.shape[0]
    return MetricSpace(
        A=0.5 * (A + A.conj().T),
        rank=r,
        eigenvalues=w[n - r:].copy(),
        range_basis=V[:, n - r:].copy(),
        null_basis=V[:, :n - r].copy(),
        rtol=rtol,
    )


class Compatibility(NamedTuple):
    ok: bool
    residual: float
    threshold: float

    def __bool__(self):
        return self.ok

    def message(self) -> str:
        if self.ok:
            return "operator maps N(A) into N(A)"
        return (f"kernel invariance fails: ||A^(1/2) T V_0||_max = {self.residual:.3e} "
                f"> {self.threshold:.3e} (T does not map N(A) into N(A))")


def _check_vector(space: MetricSpace, x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (space.dim,):
        raise DimensionMismatch(f"{name}: expected a vector of length {space.dim}, got shape {x.shape}")
    return x


def _check_operator(space: MetricSpace, T) -> np.ndarray:
    T = nx.as_square(T, "operator")
    if T.shape[0] != space.dim:
        raise DimensionMismatch(f"operator is {T.shape[0]}x{T.shape[0]}, metric is {space.dim}x{space.dim}")
    return T


def is_compatible(space: MetricSpace, T) -> Compatibility:
    """Finite-dimensional Douglas test: A-bounded (and A-adjointable) iff T N(A) is inside N(A)."""
    if isinstance(T, CompatibleOperator):
        T = T.T
    T = _check_operator(space, T)
    threshold = space.rtol * (1.0 + nx.max_abs(T)) * float(np.sqrt(space.scale))
    if space.rank == space.dim:
        return Compatibility(True, 0.0, threshold)
    residual = nx.max_abs(space.sqrt @ T @ space.null_basis)
    return Compatibility(residual <= threshold, residual, threshold)


@dataclass(frozen=True, eq=False)
class CompatibleOperator:
    """An n x n operator known to map N(A) into N(A), with its r x r compression.

    Arithmetic (``+ - @``, scalar ``*``) stays inside the algebra of A-bounded
    operators, so results are not re-validated.
    """

    space: MetricSpace
    T: np.ndarray
    compressed: np.ndarray = field(repr=False)

    @classmethod
    def _trusted(cls, space: MetricSpace, T) -> CompatibleOperator:
        Vr = space.range_basis
        s = np.sqrt(space.eigenvalues)
        return cls(space, T, (s[:, None] * (Vr.conj().T @ T @ Vr)) / s[None, :])

    @cached_property
    def sharp(self) -> CompatibleOperator:
        sp = self.space
        return CompatibleOperator._trusted(sp, sp.pinv @ self.T.conj().T @ sp.metric)

    @cached_property
    def norm(self) -> float:
        return self.space.memoized("norm", self.T, lambda: nx.largest_singular_value(self.compressed))

    @cached_property
    def omega(self) -> float:
        return self.space.memoized("omega", self.T, lambda: nx.numerical_radius(self.compressed))

    @cached_property
    def radius(self) -> float:
        return self.space.memoized("radius", self.T, lambda: nx.spectral_radius(self.compressed))

    def _other(self, other) -> CompatibleOperator:
        if isinstance(other, CompatibleOperator):
            if other.space is not self.space:
                raise DimensionMismatch("operators live on different metric spaces")
            return other
        return compatible(self.space, other)

    def __add__(self, other):
        return CompatibleOperator._trusted(self.space, self.T + self._other(other).T)

    def __sub__(self, other):
        return CompatibleOperator._trusted(self.space, self.T - self._other(other).T)

    def __neg__(self):
        return CompatibleOperator._trusted(self.space, -self.T)

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return CompatibleOperator._trusted(self.space, c * self.T)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return CompatibleOperator._trusted(self.space, self.T / c)

    def __matmul__(self, other):
        return CompatibleOperator._trusted(self.space, self.T @ self._other(other).T)


def compatible(space: MetricSpace, T) -> CompatibleOperator:
    if isinstance(T, CompatibleOperator):
        if T.space is space:
            return T
        T = T.T
    T = _check_operator(space, T)
    check = is_compatible(space, T)
    if not check:
        raise NotCompatible(check.message())
    return CompatibleOperator._trusted(space, T)


def compress(space: MetricSpace, T) -> np.ndarray:
    return compatible(space, T).compressed


def a_inner(space: MetricSpace, x, y) -> complex:
    x = _check_vector(space, x, "x")
    y = _check_vector(space, y, "y")
    return complex(np.vdot(y, space.A @ x))


def a_seminorm(space: MetricSpace, x) -> float:
    x = _check_vector(space, x, "x")
    return float(np.linalg.norm(space.sqrt @ x))


def sharp(space: MetricSpace, T) -> CompatibleOperator:
    """The A-adjoint A^+ T^* A, the reduced solution of A X = T^* A."""
    return compatible(space, T).sharp


def a_op_norm(space: MetricSpace, T) -> float:
    return compatible(space, T).norm


def a_numerical_radius(space: MetricSpace, T) -> float:
    return compatible(space, T).omega


def a_spectral_radius(space: MetricSpace, T) -> float:
    return compatible(space, T).radius


def _projected(T: CompatibleOperator) -> CompatibleOperator:
    """P_R T P_R, which equals (T^#)^#; it differs from T by an operator of A-seminorm zero."""
    P = T.space.projector
    return CompatibleOperator._trusted(T.space, P @ T.T @ P)


def re_part(space: MetricSpace, T) -> CompatibleOperator:
    """(P_R T P_R + T^#) / 2, so that re_part + i im_part = P_R T P_R exactly."""
    T = compatible(space, T)
    return (_projected(T) + T.sharp) / 2


def im_part(space: MetricSpace, T) -> CompatibleOperator:
    T = compatible(space, T)
    return (_projected(T) - T.sharp) / 2j


def rotated_part_norms(space: MetricSpace, T, theta, part: str = "re") -> np.ndarray:
    """||Re_A(e^{it} T)||_A (or the Im_A part) for each angle t in ``theta``.

    Uses Re_A(e^{it}T) = cos t Re_A(T) - sin t Im_A(T) and
    Im_A(e^{it}T) = sin t Re_A(T) + cos t Im_A(T).
    """
    C_re = re_part(space, T).compressed
    C_im = im_part(space, T).compressed
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta)[:, None, None], np.sin(theta)[:, None, None]
    if part == "re":
        stack = c * C_re - s * C_im
    elif part == "im":
        stack = s * C_re + c * C_im
    else:
        raise ValueError(f"part must be 're' or 'im', got {part!r}")
    # both parts are A-selfadjoint, so the compressions are Hermitian
    w = np.linalg.eigvalsh(stack)
    return np.maximum(w[:, -1], -w[:, 0])


def zm_sup(space: MetricSpace, T, part: str = "re", n_grid: int = nx.THETA_GRID,
           refine: bool = True) -> float:
    """sup over t of ||Re_A(e^{it} T)||_A (or Im_A), which equals w_A(T).

    The map has period pi, so the grid covers [0, pi). With ``refine=False`` this is
    the plain grid maximum.
    """
    T = compatible(space, T)
    theta = np.pi * np.arange(n_grid) / n_grid
    values = rotated_part_norms(space, T, theta, part)
    if not refine:
        return float(values.max())
    return nx.refine_grid_maxima(lambda t: rotated_part_norms(space, T, t, part), theta, values)


def _raw(space: MetricSpace, T) -> np.ndarray:
    if isinstance(T, CompatibleOperator):
        return T.T
    return _check_operator(space, T)


def is_a_selfadjoint(space: MetricSpace, T, tol: float = PREDICATE_TOL) -> bool:
    AT = space.A @ _raw(space, T)
    return nx.max_abs(AT - AT.conj().T) <= tol * (1.0 + nx.max_abs(AT))


def is_a_positive(space: MetricSpace, T, tol: float = PREDICATE_TOL) -> bool:
    if not is_a_selfadjoint(space, T, tol):
        return False
    AT = space.A @ _raw(space, T)
    w = np.linalg.eigvalsh(0.5 * (AT + AT.conj().T))
    return bool(w[0] >= -tol * (1.0 + np.max(np.abs(w))))


def is_a_unitary(space: MetricSpace, U, tol: float = PREDICATE_TOL) -> bool:
    U = _raw(space, U)
    if not is_compatible(space, U):
        return False
    U = CompatibleOperator._trusted(space, U)
    P = space.projector
    left = nx.max_abs((U.sharp @ U).T - P)
    right = nx.max_abs((U.sharp.sharp @ U.sharp).T - P)
    return left <= tol and right <= tol
