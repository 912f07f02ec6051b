"""Dilation of Parseval weak OVFs to orthonormal ones, and the similarity
classification of frames under right-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duality import canonical_dual, dual_from_parameters
from .errors import NotInvertibleError, NotSimilarError, PreconditionFailedError, ShapeMismatchError
from .frames import WeakOvf, analysis_operator, classify, frame_operator
from .linalg import (
    adjoint,
    inversion_ratio,
    orthonormal_complement,
    random_op,
    range_basis,
    spectral_norm,
    try_invert,
)


@dataclass(frozen=True)
class Dilation:
    """An orthonormal extension of a Parseval frame.

    The extension space has dimension d + (N*d0 - rank theta_A); ``embed``
    is the isometry of the original space into it, and restricting B_n
    (resp. Phi_n) along ``embed`` recovers A_n (resp. Psi_n).
    """

    extended_dim: int
    B: np.ndarray
    Phi: np.ndarray
    embed: np.ndarray

    def as_frame(self, tol) -> WeakOvf:
        return WeakOvf(self.B, self.Phi, tol)


@dataclass(frozen=True)
class SimilarityWitness:
    """Invertible right-multipliers carrying one frame onto another.

    ``residual`` is the worst reconstruction error over both sequences;
    ``p_residual`` compares the two oblique idempotents, which the
    similarity theorem makes an equivalent test.
    """

    R_AB: np.ndarray
    R_PsiPhi: np.ndarray
    residual: float
    p_residual: float


def dilate(f: WeakOvf) -> Dilation:
    """Extend a qualifying Parseval frame to an orthonormal one.

    Hypotheses, each reported by name on failure: the frame is Parseval
    (NotParseval); range(theta_A) = range(theta_Psi) at tolerance
    (RangesDiffer); P is self-adjoint, i.e. an orthogonal projection
    (PNotProjection). The extension maps h (+) g to
    A_n h + L_n^* (I - P) g over an orthonormal basis of range(theta_A)^perp.
    """
    report = classify(f)
    if not report.is_parseval:
        raise PreconditionFailedError("NotParseval")
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    q_a = range_basis(theta_a, f.tol)
    q_psi = range_basis(theta_psi, f.tol)
    slack = 10 * f.tol.residual_eps
    mutual = max(
        spectral_norm(q_a @ adjoint(q_a) @ q_psi - q_psi),
        spectral_norm(q_psi @ adjoint(q_psi) @ q_a - q_a),
    )
    if q_a.shape[1] != q_psi.shape[1] or mutual > slack:
        raise PreconditionFailedError("RangesDiffer")
    s_inv = try_invert(report.S, f.tol)
    p = theta_a @ s_inv @ adjoint(theta_psi)
    if spectral_norm(p - adjoint(p)) > slack:
        raise PreconditionFailedError("PNotProjection")

    complement = orthonormal_complement(theta_a, f.tol)
    tail = (np.eye(f.N * f.d0) - p) @ complement
    ext = f.d + complement.shape[1]
    b = np.zeros((f.N, f.d0, ext), dtype=np.complex128)
    phi = np.zeros((f.N, f.d0, ext), dtype=np.complex128)
    for n in range(f.N):
        tail_n = tail[n * f.d0 : (n + 1) * f.d0]
        b[n] = np.concatenate([f.A[n], tail_n], axis=1)
        phi[n] = np.concatenate([f.Psi[n], tail_n], axis=1)
    embed = np.zeros((ext, f.d), dtype=np.complex128)
    embed[: f.d] = np.eye(f.d)
    return Dilation(extended_dim=ext, B=b, Phi=phi, embed=embed)


def similarity_witness(f: WeakOvf, g: WeakOvf) -> SimilarityWitness:
    """Recover the unique right-multipliers carrying f onto g, or refuse.

    Candidates are R_AB = S^-1 theta_Psi^* theta_B and
    R_PsiPhi = (S^-1)^* theta_A^* theta_Phi. Acceptance needs the
    reconstruction residual and the idempotent comparison both within
    10x residual_eps and both candidates invertible; otherwise
    NotSimilarError carries the offending residual.
    """
    if f.shape_tuple() != g.shape_tuple():
        raise ShapeMismatchError(f"{f.shape_tuple()} vs {g.shape_tuple()}")
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    theta_b = analysis_operator(g.A)
    theta_phi = analysis_operator(g.Psi)
    s_inv = try_invert(frame_operator(f), f.tol)
    r_ab = s_inv @ adjoint(theta_psi) @ theta_b
    r_psiphi = adjoint(s_inv) @ adjoint(theta_a) @ theta_phi

    residual = 0.0
    for n in range(f.N):
        residual = max(residual, spectral_norm(g.A[n] - f.A[n] @ r_ab))
        residual = max(residual, spectral_norm(g.Psi[n] - f.Psi[n] @ r_psiphi))
    slack = 10 * f.tol.residual_eps
    if residual > slack:
        raise NotSimilarError(f"sequence residual {residual:.3e}", residual=residual)
    if inversion_ratio(r_ab) < f.tol.invert_eps or inversion_ratio(r_psiphi) < f.tol.invert_eps:
        raise NotSimilarError("candidate multiplier is singular", residual=residual)

    s_g = frame_operator(g)
    if inversion_ratio(s_g) < f.tol.invert_eps:
        raise NotSimilarError("candidate frame operator is singular", residual=residual)
    p_f = theta_a @ s_inv @ adjoint(theta_psi)
    p_g = theta_b @ try_invert(s_g, f.tol) @ adjoint(theta_phi)
    p_residual = spectral_norm(p_g - p_f)
    if p_residual > slack:
        raise NotSimilarError(f"idempotent residual {p_residual:.3e}", residual=p_residual)
    return SimilarityWitness(R_AB=r_ab, R_PsiPhi=r_psiphi, residual=residual, p_residual=p_residual)


def parsevalize(f: WeakOvf, side: str) -> WeakOvf:
    """One-sided Parseval normalization, similar to the original frame.

    side="left" rescales the first sequence to ({A_n S^-1}, {Psi_n});
    side="right" gives ({A_n}, {Psi_n (S^-1)^*}).
    """
    s_inv = try_invert(frame_operator(f), f.tol)
    if side == "left":
        return WeakOvf(np.array([a @ s_inv for a in f.A]), f.Psi, f.tol)
    if side == "right":
        return WeakOvf(f.A, np.array([p @ adjoint(s_inv) for p in f.Psi]), f.tol)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def unique_similar_dual_check(f: WeakOvf, samples: int = 20, seed: int = 0) -> bool:
    """Sampled check that the canonical dual is the only similar dual.

    The canonical dual must be witnessed similar; each sampled
    parameterized dual must be witnessed similar exactly when it coincides
    with the canonical dual (which happens for every sample on Riesz
    frames, where the correction terms vanish identically).
    """
    canonical = canonical_dual(f)
    try:
        similarity_witness(f, canonical)
    except NotSimilarError:
        return False

    rng = np.random.default_rng(seed)
    s_inv = try_invert(frame_operator(f), f.tol)
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    p = theta_a @ s_inv @ adjoint(theta_psi)
    # keep ||VU - VPU|| below sigma_min(S^-1)/2 so the combined operator stays invertible
    sigma_min = 1.0 / spectral_norm(frame_operator(f))
    scale = np.sqrt(sigma_min / (2.0 * (1.0 + spectral_norm(p))))
    nd0 = f.N * f.d0
    slack = 10 * f.tol.residual_eps
    for _ in range(samples):
        u = random_op(nd0, f.d, rng)
        v = random_op(f.d, nd0, rng)
        u *= scale / spectral_norm(u)
        v *= scale / spectral_norm(v)
        try:
            g = dual_from_parameters(f, u, v)
        except NotInvertibleError:
            continue
        is_canonical = (
            max(spectral_norm(g.A[n] - canonical.A[n]) for n in range(f.N)) <= slack
            and max(spectral_norm(g.Psi[n] - canonical.Psi[n]) for n in range(f.N)) <= slack
        )
        try:
            similarity_witness(f, g)
            similar = True
        except NotSimilarError:
            similar = False
        if similar != is_canonical:
            return False
    return True
