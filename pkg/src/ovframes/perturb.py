"""Stability of weak OVFs under perturbation of the first sequence.

Two sufficient hypotheses are evaluated for a perturbed sequence {B_n}:

* square-budget path: r = sum ||A_n - B_n||^2 with
  sqrt(r) * ||theta_Psi (S^*)^-1|| < 1 (the alpha = beta = 0,
  gamma = sqrt(r) instance of the Hilding-type bound), giving the lower
  bound (1 - sqrt(r) ||theta_Psi (S^*)^-1||) / ||(S^*)^-1||;
* mixed-sum path: sum ||A_n - B_n|| * ||Psi_n (S^*)^-1|| < 1, giving the
  lower bound (1 - mixed) / ||(S^*)^-1||.

Both paths share the upper bound ||theta_Psi|| (||theta_A|| + sqrt(r)).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisFailedError, NotInvertibleError, TheoremViolatedError
from .frames import WeakOvf, _as_sequence, analysis_operator, classify, frame_operator
from .linalg import (
    Tolerance,
    adjoint,
    as_op,
    inversion_ratio,
    random_op,
    singular_values,
    spectral_norm,
    try_invert,
)


class HildingStatus(enum.Enum):
    CERTIFIED = "certified"
    HYPOTHESIS_UNCERTIFIED = "hypothesis_uncertified"
    HYPOTHESIS_VIOLATED = "hypothesis_violated"


@dataclass(frozen=True)
class HildingReport:
    """Outcome of the closeness test ||Ux - Vx|| <= alpha ||Ux|| + beta ||Vx||.

    The inequality is checked on the supplied samples plus the extreme
    right singular vectors of U - V. Sampled evidence alone never claims
    the theorem: CERTIFIED additionally needs the operator-norm
    certificate ||U - V|| <= alpha * sigma_min(U), under which the norm
    sandwich is verified on all samples and V must pass the invertibility
    surrogate.
    """

    status: HildingStatus
    alpha: float
    beta: float
    worst_hypothesis_slack: float
    certificate_margin: float
    sandwich_ok: bool | None
    v_invertible: bool | None


def hilding_check(U, V, alpha: float, beta: float, samples, tol: Tolerance | None = None) -> HildingReport:
    tol = tol or Tolerance()
    u, v = as_op(U), as_op(V)
    if not (0 <= alpha < 1 and 0 <= beta < 1):
        raise ValueError("alpha and beta must lie in [0, 1)")
    if inversion_ratio(u) < tol.invert_eps:
        raise NotInvertibleError("U failed the invertibility surrogate")

    diff_sv, diff_vecs = np.linalg.svd(u - v)[1:]
    vectors = [np.asarray(x, dtype=np.complex128).reshape(-1) for x in samples]
    vectors.append(diff_vecs[0].conj())
    vectors.append(diff_vecs[-1].conj())

    worst_slack = -np.inf
    for x in vectors:
        nx = np.linalg.norm(x)
        if nx == 0:
            continue
        ux, vx = u @ x, v @ x
        slack = np.linalg.norm(ux - vx) - alpha * np.linalg.norm(ux) - beta * np.linalg.norm(vx)
        worst_slack = max(worst_slack, float(slack / nx))
    if worst_slack > tol.residual_eps:
        return HildingReport(
            status=HildingStatus.HYPOTHESIS_VIOLATED, alpha=alpha, beta=beta,
            worst_hypothesis_slack=worst_slack, certificate_margin=-np.inf,
            sandwich_ok=None, v_invertible=None,
        )

    sigma_min_u = float(singular_values(u)[-1])
    margin = alpha * sigma_min_u - spectral_norm(u - v)
    if margin < -tol.residual_eps:
        return HildingReport(
            status=HildingStatus.HYPOTHESIS_UNCERTIFIED, alpha=alpha, beta=beta,
            worst_hypothesis_slack=worst_slack, certificate_margin=float(margin),
            sandwich_ok=None, v_invertible=None,
        )

    lo, hi = (1 - alpha) / (1 + beta), (1 + alpha) / (1 - beta)
    sandwich_ok = True
    for x in vectors:
        nx = np.linalg.norm(x)
        if nx == 0:
            continue
        nu, nv = np.linalg.norm(u @ x), np.linalg.norm(v @ x)
        if nv < lo * nu - tol.residual_eps * nx or nv > hi * nu + tol.residual_eps * nx:
            sandwich_ok = False
    v_invertible = inversion_ratio(v) >= tol.invert_eps
    if not sandwich_ok or not v_invertible:
        raise TheoremViolatedError("certified hypothesis but the conclusion failed")
    return HildingReport(
        status=HildingStatus.CERTIFIED, alpha=alpha, beta=beta,
        worst_hypothesis_slack=worst_slack, certificate_margin=float(margin),
        sandwich_ok=True, v_invertible=True,
    )


@dataclass(frozen=True)
class PerturbCert:
    """Perturbation constants and the theoretical frame bounds they imply.

    ``theoretical_lower``/``theoretical_upper`` are the best bounds over
    the hypothesis paths that hold; both are None when neither hypothesis
    holds.
    """

    alpha: float
    beta: float
    gamma: float
    r: float
    mixed_sum: float
    dual_synthesis_norm: float
    square_budget_ok: bool
    mixed_sum_ok: bool
    square_budget_lower: float
    mixed_sum_lower: float
    theoretical_upper_bound: float
    theoretical_lower: float | None
    theoretical_upper: float | None

    @property
    def any_path(self) -> bool:
        return self.square_budget_ok or self.mixed_sum_ok


def perturbation_constants(f: WeakOvf, B) -> PerturbCert:
    """Compute r, the mixed sum, and the per-path theoretical bounds."""
    b = _as_sequence(B)
    if b.shape != f.A.shape:
        raise ValueError(f"perturbed sequence has shape {b.shape}, expected {f.A.shape}")
    s = frame_operator(f)
    s_adj_inv = try_invert(adjoint(s), f.tol)
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)

    deltas = np.array([spectral_norm(a_n - b_n) for a_n, b_n in zip(f.A, b)])
    psi_dual_norms = np.array([spectral_norm(p_n @ s_adj_inv) for p_n in f.Psi])
    r = float(np.sum(deltas**2))
    mixed = float(np.sum(deltas * psi_dual_norms))
    dual_synth = spectral_norm(theta_psi @ s_adj_inv)
    s_inv_norm = spectral_norm(s_adj_inv)
    theta_a_norm = spectral_norm(theta_a)
    theta_psi_norm = spectral_norm(theta_psi)

    square_ok = bool(np.sqrt(r) * dual_synth < 1.0)
    mixed_ok = bool(mixed < 1.0)
    square_lower = (1.0 - np.sqrt(r) * dual_synth) / s_inv_norm
    mixed_lower = (1.0 - mixed) / s_inv_norm
    upper = theta_psi_norm * (theta_a_norm + np.sqrt(r))

    lowers = [lo for lo, ok in ((square_lower, square_ok), (mixed_lower, mixed_ok)) if ok]
    return PerturbCert(
        alpha=0.0, beta=0.0, gamma=float(np.sqrt(r)), r=r, mixed_sum=mixed,
        dual_synthesis_norm=dual_synth,
        square_budget_ok=square_ok, mixed_sum_ok=mixed_ok,
        square_budget_lower=float(square_lower), mixed_sum_lower=float(mixed_lower),
        theoretical_upper_bound=float(upper),
        theoretical_lower=float(max(lowers)) if lowers else None,
        theoretical_upper=float(upper) if lowers else None,
    )


@dataclass(frozen=True)
class PerturbationReport:
    cert: PerturbCert
    measured_lower: float
    measured_upper: float
    is_weak: bool


def verify_perturbation(f: WeakOvf, B) -> PerturbationReport:
    """Classify the perturbed pair and check it against the theoretical bounds.

    Raises HypothesisFailedError when neither hypothesis path holds and
    TheoremViolatedError when the perturbed pair is not weak or its
    measured optimal bounds escape the theoretical ones (never expected
    for admissible perturbations).
    """
    cert = perturbation_constants(f, B)
    if not cert.any_path:
        raise HypothesisFailedError("no perturbation hypothesis path applies")
    perturbed = WeakOvf(_as_sequence(B), f.Psi, f.tol)
    report = classify(perturbed)
    if not report.is_weak:
        raise TheoremViolatedError("perturbed pair is not a weak OVF")
    slack = 10 * f.tol.residual_eps
    if report.lower_bound < cert.theoretical_lower - slack:
        raise TheoremViolatedError(
            f"measured lower bound {report.lower_bound} below {cert.theoretical_lower}"
        )
    if report.upper_bound > cert.theoretical_upper + slack:
        raise TheoremViolatedError(
            f"measured upper bound {report.upper_bound} above {cert.theoretical_upper}"
        )
    return PerturbationReport(
        cert=cert, measured_lower=report.lower_bound,
        measured_upper=report.upper_bound, is_weak=True,
    )


def sample_admissible_perturbation(f: WeakOvf, budget_fraction: float, seed) -> np.ndarray:
    """Random B = A + E scaled so the mixed sum equals budget_fraction exactly.

    budget_fraction must lie in (0, 1); the returned sequence satisfies
    the mixed-sum hypothesis by construction and verify_perturbation must
    accept it.
    """
    if not 0 < budget_fraction < 1:
        raise ValueError("budget_fraction must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    s_adj_inv = try_invert(adjoint(frame_operator(f)), f.tol)
    psi_dual_norms = np.array([spectral_norm(p_n @ s_adj_inv) for p_n in f.Psi])
    e = np.array([random_op(f.d0, f.d, rng) for _ in range(f.N)])
    mixed = float(sum(spectral_norm(e_n) * w for e_n, w in zip(e, psi_dual_norms)))
    e *= budget_fraction / mixed
    return f.A + e


@dataclass(frozen=True)
class TightnessRow:
    seed: int
    budget_fraction: float
    theoretical_lower: float
    measured_lower: float
    theoretical_upper: float
    measured_upper: float


def tightness_rows(f: WeakOvf, budget_fractions, seeds) -> list[TightnessRow]:
    """Theoretical-vs-measured bound table over a seed/budget grid.

    Per-seed computations are pure and independently reproducible, so the
    grid may be evaluated in any order (or in parallel).
    """
    rows = []
    for fraction in budget_fractions:
        for seed in seeds:
            b = sample_admissible_perturbation(f, fraction, seed)
            rep = verify_perturbation(f, b)
            rows.append(
                TightnessRow(
                    seed=int(seed), budget_fraction=float(fraction),
                    theoretical_lower=rep.cert.theoretical_lower,
                    measured_lower=rep.measured_lower,
                    theoretical_upper=rep.cert.theoretical_upper,
                    measured_upper=rep.measured_upper,
                )
            )
    return rows
