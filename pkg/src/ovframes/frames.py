"""Weak operator-valued frame model and its canonical machinery.

A weak OVF is a pair of operator sequences ({A_n}, {Psi_n}), each A_n and
Psi_n a d0 x d matrix, whose mixed frame operator

    S = sum_n Psi_n^* A_n

is invertible. Stacking the sequences block-row-wise gives the analysis
operators theta_A and theta_Psi, and S factors as theta_Psi^* theta_A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentDecompositionError, NotInvertibleError
from .linalg import (
    Tolerance,
    adjoint,
    as_op,
    inversion_ratio,
    singular_values,
    spectral_norm,
    try_invert,
)


@dataclass(frozen=True)
class WeakOvf:
    """A pair of N operator sequences, stored as (N, d0, d) arrays."""

    A: np.ndarray
    Psi: np.ndarray
    tol: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self):
        a = _as_sequence(self.A)
        psi = _as_sequence(self.Psi)
        if a.shape != psi.shape:
            raise ValueError(f"A has shape {a.shape} but Psi has shape {psi.shape}")
        if a.shape[0] < 1:
            raise ValueError("a frame needs at least one index")
        if a.shape[1] < 1 or a.shape[2] < 1:
            raise ValueError("operators must have positive dimensions")
        a.flags.writeable = False
        psi.flags.writeable = False
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "Psi", psi)

    @property
    def N(self) -> int:
        return self.A.shape[0]

    @property
    def d0(self) -> int:
        return self.A.shape[1]

    @property
    def d(self) -> int:
        return self.A.shape[2]

    def shape_tuple(self):
        return self.A.shape


def _as_sequence(ops) -> np.ndarray:
    """Coerce a sequence of d0 x d operators to an (N, d0, d) complex array."""
    if isinstance(ops, np.ndarray) and ops.ndim == 3:
        return np.array(ops, dtype=np.complex128)
    return np.array([as_op(op) for op in ops], dtype=np.complex128)


@dataclass(frozen=True)
class FrameReport:
    """Classification flags, optimal bounds and the factorization residual.

    Bounds are None when the frame operator fails the invertibility
    surrogate (is_weak False carries no bounds).
    """

    S: np.ndarray
    is_weak: bool
    is_parseval: bool
    is_riesz: bool
    is_orthonormal: bool
    lower_bound: float | None
    upper_bound: float | None
    factorization_residual: float


def embedding(n: int, N: int, d0: int) -> np.ndarray:
    """Block injection L_n: C^d0 -> C^(N*d0) placing its input in block n.

    The embeddings satisfy L_n^* L_m = delta_{n,m} I and sum_n L_n L_n^* = I.
    """
    if not 0 <= n < N:
        raise IndexError(f"block index {n} out of range for N={N}")
    out = np.zeros((N * d0, d0), dtype=np.complex128)
    out[n * d0 : (n + 1) * d0] = np.eye(d0)
    return out


def analysis_operator(ops) -> np.ndarray:
    """Stack a sequence of d0 x d operators into the (N*d0) x d block column.

    Row-block m of the result is exactly the m-th operator, so
    L_m^* theta = op_m bit-for-bit.
    """
    seq = _as_sequence(ops)
    n, d0, d = seq.shape
    return seq.reshape(n * d0, d)


def frame_operator(f: WeakOvf) -> np.ndarray:
    """The mixed sum S = sum_n Psi_n^* A_n, a d x d matrix."""
    s = np.zeros((f.d, f.d), dtype=np.complex128)
    for psi_n, a_n in zip(f.Psi, f.A):
        s += adjoint(psi_n) @ a_n
    return s


def idempotent_P(f: WeakOvf) -> np.ndarray:
    """P = theta_A S^-1 theta_Psi^*, the oblique projection onto range(theta_A)."""
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    s_inv = try_invert(frame_operator(f), f.tol)
    return theta_a @ s_inv @ adjoint(theta_psi)


def classify(f: WeakOvf) -> FrameReport:
    """Compute S, the factorization residual, bounds and class flags.

    is_weak      S passes the invertibility surrogate
    bounds       (||S^-1||^-1, ||S||), i.e. (sigma_min, sigma_max) of S
    is_parseval  ||S - I|| <= residual_eps
    is_riesz     ||P - I|| <= residual_eps  (P = theta_A S^-1 theta_Psi^*)
    orthonormal  Parseval and Riesz
    """
    eps = f.tol.residual_eps
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    s = frame_operator(f)
    fact_res = spectral_norm(s - adjoint(theta_psi) @ theta_a)
    sv = singular_values(s)
    is_weak = bool(sv[0] > 0.0 and sv[-1] / sv[0] >= f.tol.invert_eps)
    eye = np.eye(f.d)
    is_parseval = bool(spectral_norm(s - eye) <= eps)
    if is_weak:
        lower, upper = float(sv[-1]), float(sv[0])
        p = theta_a @ try_invert(s, f.tol) @ adjoint(theta_psi)
        is_riesz = bool(spectral_norm(p - np.eye(f.N * f.d0)) <= eps)
    else:
        lower = upper = None
        is_riesz = False
    return FrameReport(
        S=s,
        is_weak=is_weak,
        is_parseval=is_parseval,
        is_riesz=is_riesz,
        is_orthonormal=is_parseval and is_riesz,
        lower_bound=lower,
        upper_bound=upper,
        factorization_residual=fact_res,
    )


def from_factors(U, V, N: int, d0: int, tol: Tolerance | None = None) -> WeakOvf:
    """Frame with A_n = L_n^* U and Psi_n = L_n^* V for (N*d0) x d factors.

    The frame operator of the result equals V^* U; raises
    NotInvertibleError when V^* U fails the surrogate.
    """
    tol = tol or Tolerance()
    u, v = as_op(U), as_op(V)
    if u.shape != v.shape:
        raise ValueError(f"factor shapes differ: {u.shape} vs {v.shape}")
    if u.shape[0] != N * d0:
        raise ValueError(f"factors have {u.shape[0]} rows, expected N*d0 = {N * d0}")
    s = adjoint(v) @ u
    if inversion_ratio(s) < tol.invert_eps:
        raise NotInvertibleError("V^* U failed the invertibility surrogate")
    d = u.shape[1]
    return WeakOvf(u.reshape(N, d0, d), v.reshape(N, d0, d), tol)


@dataclass(frozen=True)
class OperatorONB:
    """Operator orthonormal basis: N operators d0 x d with N*d0 = d.

    Construction validates F_n F_k^* = delta_{n,k} I and
    sum_n F_n^* F_n = I within residual_eps.
    """

    F: np.ndarray
    tol: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self):
        f = _as_sequence(self.F)
        n, d0, d = f.shape
        if n * d0 != d:
            raise ValueError(f"operator ONB needs N*d0 = d, got {n}*{d0} != {d}")
        eps = self.tol.residual_eps
        gram = np.einsum("nij,mkj->nmik", f, f.conj())
        target = np.einsum("nm,ik->nmik", np.eye(n), np.eye(d0))
        if np.max(np.abs(gram - target)) > eps:
            raise ValueError("cross-Gram F_n F_k^* != delta_{n,k} I at tolerance")
        completeness = np.einsum("nji,njk->ik", f.conj(), f)
        if np.max(np.abs(completeness - np.eye(d))) > eps:
            raise ValueError("sum F_n^* F_n != I at tolerance")
        f.flags.writeable = False
        object.__setattr__(self, "F", f)

    @property
    def N(self) -> int:
        return self.F.shape[0]


def onb_from_embeddings(N: int, d0: int, tol: Tolerance | None = None) -> OperatorONB:
    """The canonical operator ONB F_n = L_n^* on C^(N*d0)."""
    f = np.array([adjoint(embedding(n, N, d0)) for n in range(N)])
    return OperatorONB(f, tol or Tolerance())


def from_operator_onb(F: OperatorONB, U, V, tol: Tolerance | None = None) -> WeakOvf:
    """Frame with A_n = F_n U and Psi_n = F_n V for d x d operators U, V.

    The frame operator of the result equals V^* U.
    """
    tol = tol or Tolerance()
    u, v = as_op(U), as_op(V)
    s = adjoint(v) @ u
    if inversion_ratio(s) < tol.invert_eps:
        raise NotInvertibleError("V^* U failed the invertibility surrogate")
    a = np.array([f_n @ u for f_n in F.F])
    psi = np.array([f_n @ v for f_n in F.F])
    return WeakOvf(a, psi, tol)


def check_representation_identity(f: WeakOvf, ys, zs) -> float:
    """Residual of the coefficient identity for h = sum A_n^* y_n = sum Psi_n^* z_n.

    Returns |sum <y_n, z_n> - sum <Pt_n h, At_n h> - sum <y_n - Pt_n h, z_n - At_n h>|
    where At_n = A_n S^-1 and Pt_n = Psi_n (S^-1)^* are the canonical-dual
    sequences. Raises InconsistentDecompositionError when the two sums
    disagree by more than residual_eps.
    """
    ys = np.asarray(ys, dtype=np.complex128).reshape(f.N, f.d0)
    zs = np.asarray(zs, dtype=np.complex128).reshape(f.N, f.d0)
    h_a = sum(adjoint(a_n) @ y_n for a_n, y_n in zip(f.A, ys))
    h_psi = sum(adjoint(p_n) @ z_n for p_n, z_n in zip(f.Psi, zs))
    if np.linalg.norm(h_a - h_psi) > f.tol.residual_eps:
        raise InconsistentDecompositionError(
            f"coefficient sums disagree by {np.linalg.norm(h_a - h_psi):.3e}"
        )
    h = h_a
    s_inv = try_invert(frame_operator(f), f.tol)
    lhs = complex(sum(np.vdot(y_n, z_n) for y_n, z_n in zip(ys, zs)))
    mid = 0.0 + 0.0j
    cross = 0.0 + 0.0j
    for a_n, p_n, y_n, z_n in zip(f.A, f.Psi, ys, zs):
        at_h = a_n @ s_inv @ h
        pt_h = p_n @ adjoint(s_inv) @ h
        mid += np.vdot(pt_h, at_h)
        cross += np.vdot(y_n - pt_h, z_n - at_h)
    return abs(lhs - mid - cross)


@dataclass(frozen=True)
class ClassicOvfReport:
    """classify() of the pair (A, A) plus the positivity certificate for S."""

    report: FrameReport
    hermitian_floor: float
    is_positive: bool


def classic_ovf_check(A, tol: Tolerance | None = None) -> ClassicOvfReport:
    """Classify the classical OVF pair Psi := A and report positivity of S.

    The classical frame operator S = sum A_n^* A_n is positive
    semidefinite; positivity holds when the smallest eigenvalue of
    (S + S^*)/2 reaches the lower bound up to residual_eps.
    """
    tol = tol or Tolerance()
    a = _as_sequence(A)
    f = WeakOvf(a, a, tol)
    report = classify(f)
    herm = (report.S + adjoint(report.S)) / 2
    floor = float(np.min(np.linalg.eigvalsh(herm)))
    positive = bool(
        report.is_weak and floor >= (report.lower_bound or 0.0) - tol.residual_eps
    )
    return ClassicOvfReport(report=report, hermitian_floor=floor, is_positive=positive)
