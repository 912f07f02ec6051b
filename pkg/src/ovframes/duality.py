"""Duals of weak OVFs: canonical dual, the full dual parameterization,
orthogonality, interpolation and direct sums.

A pair ({B_n}, {Phi_n}) is dual to ({A_n}, {Psi_n}) when both mixed sums
sum Psi_n^* B_n and sum Phi_n^* A_n equal the identity; orthogonal when
both vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInvertibleError, PreconditionFailedError, ShapeMismatchError, TheoremViolatedError
from .frames import WeakOvf, analysis_operator, classify, frame_operator
from .linalg import adjoint, as_op, inversion_ratio, spectral_norm, try_invert


@dataclass(frozen=True)
class DualPair:
    """A candidate dual with its duality residual; valid when the residual
    is within 10x residual_eps."""

    primal: WeakOvf
    dual: WeakOvf
    duality_residual: float
    valid: bool


@dataclass(frozen=True)
class OrthogonalityReport:
    orthogonal: bool
    residual: float


def mixed_frame_operators(f: WeakOvf, g: WeakOvf) -> tuple[np.ndarray, np.ndarray]:
    """(sum Psi_n^* B_n, sum Phi_n^* A_n) for f = (A, Psi), g = (B, Phi)."""
    if f.shape_tuple() != g.shape_tuple():
        raise ShapeMismatchError(f"{f.shape_tuple()} vs {g.shape_tuple()}")
    first = sum(adjoint(p) @ b for p, b in zip(f.Psi, g.A))
    second = sum(adjoint(phi) @ a for phi, a in zip(g.Psi, f.A))
    return first, second


def canonical_dual(f: WeakOvf) -> WeakOvf:
    """The canonical dual ({A_n S^-1}, {Psi_n (S^-1)^*}).

    Its frame operator is S^-1, and taking the canonical dual twice gives
    back the original frame.
    """
    s_inv = try_invert(frame_operator(f), f.tol)
    a = np.array([a_n @ s_inv for a_n in f.A])
    psi = np.array([p_n @ adjoint(s_inv) for p_n in f.Psi])
    return WeakOvf(a, psi, f.tol)


def is_dual(f: WeakOvf, g: WeakOvf) -> DualPair:
    """Test duality of g against f via both mixed frame operators."""
    first, second = mixed_frame_operators(f, g)
    eye = np.eye(f.d)
    residual = max(spectral_norm(first - eye), spectral_norm(second - eye))
    return DualPair(
        primal=f, dual=g, duality_residual=residual,
        valid=bool(residual <= 10 * f.tol.residual_eps),
    )


def dual_bounds_check(f: WeakOvf) -> tuple[float, float]:
    """Optimal bounds of the canonical dual; asserts they are (1/b, 1/a).

    The reciprocity must hold within 10x residual_eps relative or the
    (never expected) TheoremViolatedError is raised.
    """
    report = classify(f)
    if not report.is_weak:
        raise NotInvertibleError("frame operator failed the invertibility surrogate")
    dual_report = classify(canonical_dual(f))
    a, b = report.lower_bound, report.upper_bound
    a_dual, b_dual = dual_report.lower_bound, dual_report.upper_bound
    slack = 10 * f.tol.residual_eps
    if abs(a_dual - 1 / b) > slack * (1 / b) or abs(b_dual - 1 / a) > slack * (1 / a):
        raise TheoremViolatedError(
            f"dual bounds ({a_dual}, {b_dual}) are not (1/{b}, 1/{a})"
        )
    return a_dual, b_dual


def right_inverse_of_synthesis(f: WeakOvf, U) -> np.ndarray:
    """R = theta_A S^-1 + (I - P) U, a right-inverse of theta_Psi^*.

    U ranges over all (N*d0) x d operators and parameterizes all bounded
    right-inverses.
    """
    u = as_op(U)
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    s_inv = try_invert(frame_operator(f), f.tol)
    p = theta_a @ s_inv @ adjoint(theta_psi)
    return theta_a @ s_inv + (np.eye(f.N * f.d0) - p) @ u


def left_inverse_of_analysis(f: WeakOvf, V) -> np.ndarray:
    """L = S^-1 theta_Psi^* + V (I - P), a left-inverse of theta_A.

    V ranges over all d x (N*d0) operators and parameterizes all bounded
    left-inverses.
    """
    v = as_op(V)
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    s_inv = try_invert(frame_operator(f), f.tol)
    p = theta_a @ s_inv @ adjoint(theta_psi)
    return s_inv @ adjoint(theta_psi) + v @ (np.eye(f.N * f.d0) - p)


def dual_from_parameters(f: WeakOvf, U, V) -> WeakOvf:
    """Dual frame for parameters U: (N*d0) x d and V: d x (N*d0).

    Builds B_n = A_n S^-1 + L_n^* U - A_n S^-1 theta_Psi^* U and
    Phi_n = Psi_n (S^-1)^* + L_n^* V^* - Psi_n (S^-1)^* theta_A^* V^*;
    the pair is returned only when S^-1 + V U - V theta_A S^-1 theta_Psi^* U
    passes the invertibility surrogate (otherwise the parameters do not
    produce a weak OVF and NotInvertibleError is raised). U = V = 0 yields
    the canonical dual; every dual arises from some (U, V).
    """
    u, v = as_op(U), as_op(V)
    nd0 = f.N * f.d0
    if u.shape != (nd0, f.d):
        raise ShapeMismatchError(f"U must be {(nd0, f.d)}, got {u.shape}")
    if v.shape != (f.d, nd0):
        raise ShapeMismatchError(f"V must be {(f.d, nd0)}, got {v.shape}")
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    s_inv = try_invert(frame_operator(f), f.tol)
    p = theta_a @ s_inv @ adjoint(theta_psi)
    combined = s_inv + v @ u - v @ p @ u
    if inversion_ratio(combined) < f.tol.invert_eps:
        raise NotInvertibleError(
            "S^-1 + VU - V theta_A S^-1 theta_Psi^* U failed the surrogate"
        )
    eye = np.eye(nd0)
    b_stack = theta_a @ s_inv + (eye - p) @ u
    phi_stack = theta_psi @ adjoint(s_inv) + (eye - adjoint(p)) @ adjoint(v)
    return WeakOvf(
        b_stack.reshape(f.N, f.d0, f.d), phi_stack.reshape(f.N, f.d0, f.d), f.tol
    )


def is_orthogonal(f: WeakOvf, g: WeakOvf) -> OrthogonalityReport:
    """True when both mixed frame operators vanish at 10x residual_eps."""
    first, second = mixed_frame_operators(f, g)
    residual = max(spectral_norm(first), spectral_norm(second))
    return OrthogonalityReport(
        orthogonal=bool(residual <= 10 * f.tol.residual_eps), residual=residual
    )


def interpolate(f: WeakOvf, g: WeakOvf, C, D, E, F) -> WeakOvf:
    """Mix two orthogonal Parseval frames through d x d coefficients.

    Requires C^* E + D^* F = I within residual_eps; the result
    ({A_n C + B_n D}, {Psi_n E + Phi_n F}) is again Parseval.
    """
    c, dd, e, ff = as_op(C), as_op(D), as_op(E), as_op(F)
    if not classify(f).is_parseval or not classify(g).is_parseval:
        raise PreconditionFailedError("NotParseval")
    if not is_orthogonal(f, g).orthogonal:
        raise PreconditionFailedError("NotOrthogonal")
    eye = np.eye(f.d)
    if spectral_norm(adjoint(c) @ e + adjoint(dd) @ ff - eye) > f.tol.residual_eps:
        raise PreconditionFailedError("CoefficientIdentity", "C^*E + D^*F != I at tolerance")
    a = np.array([a_n @ c + b_n @ dd for a_n, b_n in zip(f.A, g.A)])
    psi = np.array([p_n @ e + q_n @ ff for p_n, q_n in zip(f.Psi, g.Psi)])
    return WeakOvf(a, psi, f.tol)


def direct_sum_frames(f: WeakOvf, g: WeakOvf) -> WeakOvf:
    """Direct sum of two orthogonal frames, acting on C^d (+) C^d.

    Each operator is the row concatenation [A_n B_n]; orthogonality makes
    the frame operator block-diagonal S_f (+) S_g, so the sum is weak, and
    Parseval whenever both inputs are.
    """
    if f.shape_tuple() != g.shape_tuple():
        raise ShapeMismatchError(f"{f.shape_tuple()} vs {g.shape_tuple()}")
    if not is_orthogonal(f, g).orthogonal:
        raise PreconditionFailedError("NotOrthogonal")
    a = np.concatenate([f.A, g.A], axis=2)
    psi = np.concatenate([f.Psi, g.Psi], axis=2)
    return WeakOvf(a, psi, f.tol)
