"""Dense complex matrix kernel: norms, inverses, products, complements.

Everything operates on 2-D complex128 ndarrays. Values are treated as
immutable; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInvertibleError, RankDeficientError

DEFAULT_RESIDUAL_EPS = 1e-9
DEFAULT_INVERT_EPS = 1e-8


@dataclass(frozen=True)
class Tolerance:
    """Numerical policy: absolute residual bound and invertibility floor.

    ``invert_eps`` is a lower bound on sigma_min/sigma_max; an operator below
    it is declared not invertible.
    """

    residual_eps: float = DEFAULT_RESIDUAL_EPS
    invert_eps: float = DEFAULT_INVERT_EPS

    def __post_init__(self):
        if not self.residual_eps > 0:
            raise ValueError("residual_eps must be positive")
        if not 0 < self.invert_eps < 1:
            raise ValueError("invert_eps must lie in (0, 1)")


def as_op(entries) -> np.ndarray:
    """Coerce to a 2-D complex128 matrix (scalars become 1x1)."""
    x = np.atleast_2d(np.asarray(entries, dtype=np.complex128))
    if x.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={x.ndim}")
    return x


def adjoint(x: np.ndarray) -> np.ndarray:
    return np.conj(x).T


def spectral_norm(x: np.ndarray) -> float:
    """Largest singular value; 0.0 for an empty matrix."""
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    return float(np.linalg.svd(x, compute_uv=False)[0])


def singular_values(x: np.ndarray) -> np.ndarray:
    return np.linalg.svd(np.asarray(x), compute_uv=False)


def inversion_ratio(x: np.ndarray) -> float:
    """sigma_min/sigma_max, the scale-invariant invertibility measure."""
    x = np.asarray(x)
    if x.shape[0] != x.shape[1]:
        raise ValueError("inversion ratio needs a square matrix")
    if x.size == 0:
        return 0.0
    s = np.linalg.svd(x, compute_uv=False)
    if s[0] == 0.0:
        return 0.0
    return float(s[-1] / s[0])


def is_invertible(x: np.ndarray, tol: Tolerance) -> bool:
    return inversion_ratio(x) >= tol.invert_eps


def try_invert(x: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Invert a square matrix, or raise NotInvertibleError below the surrogate.

    Inversion goes through the SVD so the result is as stable as the
    conditioning allows; the acceptance gate is sigma_min/sigma_max >=
    tol.invert_eps.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != x.shape[1]:
        raise ValueError(f"cannot invert a {x.shape[0]}x{x.shape[1]} matrix")
    u, s, vh = np.linalg.svd(x)
    if s[0] == 0.0 or s[-1] / s[0] < tol.invert_eps:
        raise NotInvertibleError(ratio=0.0 if s[0] == 0.0 else float(s[-1] / s[0]))
    return (adjoint(vh) / s) @ adjoint(u)


def kron(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Kronecker product; satisfies (x (x) y)(u (x) v) = xu (x) yv."""
    return np.kron(np.asarray(x), np.asarray(y))


def direct_sum(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Block-diagonal matrix diag(x, y)."""
    x, y = as_op(x), as_op(y)
    out = np.zeros((x.shape[0] + y.shape[0], x.shape[1] + y.shape[1]), dtype=np.complex128)
    out[: x.shape[0], : x.shape[1]] = x
    out[x.shape[0] :, x.shape[1] :] = y
    return out


def rank_at_tolerance(x: np.ndarray, tol: Tolerance) -> int:
    """Number of singular values within invert_eps of the largest, relatively."""
    x = np.asarray(x)
    if x.size == 0:
        return 0
    s = np.linalg.svd(x, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s / s[0] >= tol.invert_eps))


def range_basis(x: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Orthonormal basis of the column space, as columns."""
    x = np.asarray(x)
    u, s, _ = np.linalg.svd(x, full_matrices=False)
    return u[:, : rank_at_tolerance(x, tol)]


def orthonormal_complement(x: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Orthonormal basis (columns) of range(x)^perp.

    Requires full column rank at tolerance; the result has
    rows(x) - cols(x) columns and is empty for square invertible input.
    """
    x = as_op(x)
    rows, cols = x.shape
    u, s, _ = np.linalg.svd(x, full_matrices=True)
    rank = 0 if (s.size == 0 or s[0] == 0.0) else int(np.sum(s / s[0] >= tol.invert_eps))
    if rank < cols:
        raise RankDeficientError(f"rank {rank} < {cols} columns at tolerance")
    return u[:, cols:]


def random_op(rows: int, cols: int, seed) -> np.ndarray:
    """Complex Ginibre matrix, deterministic given the seed (or Generator)."""
    if rows <= 0 or cols <= 0:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(n: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fix."""
    z = random_op(n, n, seed)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    d /= np.abs(d)
    return q * d
