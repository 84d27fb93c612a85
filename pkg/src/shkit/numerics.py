"""Dense complex-matrix kernels.

Thin, validated wrappers over LAPACK (through numpy) plus the classical
numerical-radius optimizer that the rest of the package reduces to.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NegativeEigenvalue, NoConvergence, NonFinite, NotHermitian

DEFAULT_RTOL = 1e-10
IDENTITY_TOL = 1e-8

# numerical radius optimizer
THETA_GRID = 1024
THETA_TOL = 1e-9
N_REFINE = 3

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


class HermitianEigen(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary, columns


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array (a copy is not guaranteed)."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise DimensionMismatch(f"{name}: expected a non-empty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFinite(f"{name}: contains NaN or Inf")
    return M


def as_square(M, name: str = "matrix") -> np.ndarray:
    M = as_matrix(M, name)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name}: expected a square matrix, got shape {M.shape}")
    return M


def max_abs(M) -> float:
    return float(np.max(np.abs(M))) if np.size(M) else 0.0


def hermitian_eig(M, tol: float = DEFAULT_RTOL) -> HermitianEigen:
    M = as_square(M)
    asym = max_abs(M - M.conj().T)
    if asym > tol * (1.0 + max_abs(M)):
        raise NotHermitian(f"asymmetry {asym:.3e} exceeds {tol:g} relative")
    w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    return HermitianEigen(w, V)


def general_eigenvalues(M) -> np.ndarray:
    M = as_square(M)
    try:
        return np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def largest_singular_value(M) -> float:
    M = as_matrix(M)
    return float(np.linalg.norm(M, 2))


def spectral_radius(M) -> float:
    return float(np.max(np.abs(general_eigenvalues(M))))


def pseudo_rank(eigenvalues, rtol: float = DEFAULT_RTOL) -> int:
    """Number of eigenvalues above ``rtol * max``; rejects clearly negative ones."""
    w = np.asarray(eigenvalues, dtype=float)
    if w.size == 0:
        return 0
    scale = max(float(w.max()), 0.0)
    if np.any(w < -rtol * scale):
        raise NegativeEigenvalue(f"eigenvalue {w.min():.3e} below -rtol*max = {-rtol * scale:.3e}")
    if scale == 0.0:
        return 0
    return int(np.count_nonzero(w > rtol * scale))


def _top_eig(H, K, theta):
    """lambda_max of cos(t) H - sin(t) K for each t in ``theta``."""
    theta = np.asarray(theta, dtype=float)
    stack = np.cos(theta)[:, None, None] * H - np.sin(theta)[:, None, None] * K
    return np.linalg.eigvalsh(stack)[:, -1]


def rotated_top_eigenvalues(M, n_grid: int = THETA_GRID):
    """h(theta_k) = lambda_max(Re(e^{i theta_k} M)) on the uniform grid over [0, 2pi).

    Only half the grid is diagonalized: lambda_max at theta + pi is -lambda_min at theta.
    """
    M = as_square(M)
    if n_grid % 2:
        raise ValueError("n_grid must be even")
    H = 0.5 * (M + M.conj().T)
    K = -0.5j * (M - M.conj().T)
    half = n_grid // 2
    theta = 2.0 * np.pi * np.arange(n_grid) / n_grid
    stack = np.cos(theta[:half])[:, None, None] * H - np.sin(theta[:half])[:, None, None] * K
    w = np.linalg.eigvalsh(stack)
    return theta, np.concatenate([w[:, -1], -w[:, 0]]), H, K


def refine_grid_maxima(f, theta, values, theta_tol: float = THETA_TOL,
                       n_refine: int = N_REFINE) -> float:
    """Maximize a periodic function sampled on a uniform grid.

    ``f`` maps an array of angles to an array of values. The ``n_refine`` highest
    local maxima of ``values`` (cyclic neighbours) are each polished by
    golden-section search over the two adjacent grid cells, vectorized across
    brackets, until every bracket is narrower than ``theta_tol``.
    """
    theta = np.asarray(theta, dtype=float)
    h = np.asarray(values, dtype=float)
    best = float(h.max())
    step = theta[1] - theta[0] if theta.size > 1 else 2.0 * np.pi
    peaks = np.flatnonzero((h >= np.roll(h, 1)) & (h >= np.roll(h, -1)))
    peaks = peaks[np.argsort(-h[peaks], kind="stable")][:n_refine]
    a = theta[peaks] - step
    b = theta[peaks] + step
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while np.max(b - a) > theta_tol:
        left = fc > fd  # maximum lies in [a, d]
        a, b = np.where(left, a, c), np.where(left, d, b)
        new_c = np.where(left, b - _INVPHI * (b - a), d)
        new_d = np.where(left, c, a + _INVPHI * (b - a))
        fp = f(np.where(left, new_c, new_d))
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = new_c, new_d
    return max(best, float(np.max(fc)), float(np.max(fd)))


def numerical_radius(M, n_grid: int = THETA_GRID, theta_tol: float = THETA_TOL,
                     n_refine: int = N_REFINE) -> float:
    """Classical numerical radius, max over theta of lambda_max(Re(e^{i theta} M)).

    The support function of the numerical range is sampled on ``n_grid`` angles in
    [0, 2pi) and its best local maxima refined (see ``refine_grid_maxima``).
    """
    theta, h, H, K = rotated_top_eigenvalues(M, n_grid)
    if not np.any(K) or not np.any(H):
        # h is a multiple of |cos| or |sin|; the grid contains the maximizer
        return max(float(h.max()), 0.0)
    best = refine_grid_maxima(lambda t: _top_eig(H, K, t), theta, h, theta_tol, n_refine)
    return max(best, 0.0)
