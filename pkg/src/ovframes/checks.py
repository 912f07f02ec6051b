"""Named verification checks over a frame document, each tied to the
identity it tests. Shared by the HTTP service and the CLI report command.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duality import canonical_dual, is_dual
from .errors import FrameFormatError, NotInvertibleError, OvfError, TheoremViolatedError
from .frames import WeakOvf, analysis_operator, classify, idempotent_P
from .grouplike import check_grouplike_conditions, validate_system
from .groups import check_shift_conditions
from .io import FrameDocument
from .linalg import spectral_norm
from .perturb import sample_admissible_perturbation, verify_perturbation

CHECK_NAMES = ("all", "weak", "factor", "parseval", "riesz", "dual", "shift", "grouplike", "perturb")


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    statement: str
    passed: bool
    residual: float | None = None
    detail: str | None = None


def _weak_check(doc: FrameDocument) -> CheckOutcome:
    report = classify(doc.frame)
    return CheckOutcome(
        name="weak",
        statement="S = sum Psi_n^* A_n passes the invertibility surrogate",
        passed=report.is_weak,
        residual=None,
        detail=None if report.is_weak else "frame operator is singular at tolerance",
    )


def _factor_check(doc: FrameDocument) -> CheckOutcome:
    f = doc.frame
    report = classify(f)
    residual = report.factorization_residual
    detail = None
    if report.is_weak:
        p = idempotent_P(f)
        residual = max(residual, spectral_norm(p @ p - p))
    else:
        detail = "idempotent skipped: frame operator is singular"
    return CheckOutcome(
        name="factor",
        statement="S factors as theta_Psi^* theta_A; P = theta_A S^-1 theta_Psi^* is idempotent",
        passed=bool(residual <= 10 * f.tol.residual_eps),
        residual=float(residual),
        detail=detail,
    )


def _parseval_check(doc: FrameDocument) -> CheckOutcome:
    f = doc.frame
    report = classify(f)
    residual = spectral_norm(report.S - np.eye(f.d))
    return CheckOutcome(
        name="parseval",
        statement="S = I (Parseval)",
        passed=report.is_parseval,
        residual=float(residual),
    )


def _riesz_check(doc: FrameDocument) -> CheckOutcome:
    f = doc.frame
    report = classify(f)
    residual = None
    if report.is_weak:
        residual = float(spectral_norm(idempotent_P(f) - np.eye(f.N * f.d0)))
    return CheckOutcome(
        name="riesz",
        statement="P = theta_A S^-1 theta_Psi^* = I (Riesz)",
        passed=report.is_riesz,
        residual=residual,
    )


def _dual_check(doc: FrameDocument, companion: FrameDocument | None) -> CheckOutcome:
    f = doc.frame
    if companion is not None:
        pair = is_dual(f, companion.frame)
        return CheckOutcome(
            name="dual",
            statement="sum Psi_n^* B_n = sum Phi_n^* A_n = I against the companion frame",
            passed=pair.valid,
            residual=float(pair.duality_residual),
        )
    try:
        dual = canonical_dual(f)
    except NotInvertibleError:
        return CheckOutcome(
            name="dual",
            statement="canonical dual ({A_n S^-1}, {Psi_n (S^-1)^*}) is a dual",
            passed=False,
            detail="frame operator is singular at tolerance",
        )
    residual = is_dual(f, dual).duality_residual
    back = canonical_dual(dual)
    involution = max(
        max(spectral_norm(x - y) for x, y in zip(back.A, f.A)),
        max(spectral_norm(x - y) for x, y in zip(back.Psi, f.Psi)),
    )
    residual = max(residual, involution)
    return CheckOutcome(
        name="dual",
        statement="canonical dual is a dual and the dual of the dual is the frame",
        passed=bool(residual <= 10 * f.tol.residual_eps),
        residual=float(residual),
    )


def _shift_check(doc: FrameDocument) -> CheckOutcome:
    if doc.group is None:
        raise FrameFormatError("shift check requires a group block")
    report = check_shift_conditions(doc.frame, doc.group)
    return CheckOutcome(
        name="shift",
        statement="A_{gp}A_{gq}^* = A_pA_q^* (and APsi, PsiPsi families) on all triples",
        passed=report.ok,
        residual=float(report.max_residual),
        detail=None if report.ok else f"worst triple {report.worst}",
    )


def _grouplike_check(doc: FrameDocument) -> CheckOutcome:
    if doc.system is None:
        raise FrameFormatError("grouplike check requires a grouplike block")
    system_report = validate_system(doc.system)
    if not system_report.valid:
        return CheckOutcome(
            name="grouplike",
            statement="table axioms and phased shift conditions",
            passed=False,
            detail=system_report.violation,
        )
    report = check_grouplike_conditions(doc.frame, doc.system)
    return CheckOutcome(
        name="grouplike",
        statement="A_{sigma(UV)}A_{sigma(UW)}^* = f(UV)conj(f(UW)) A_VA_W^* on all triples",
        passed=report.ok,
        residual=float(report.max_residual),
        detail=None if report.ok else f"worst triple {report.worst}",
    )


def _perturb_check(doc: FrameDocument) -> CheckOutcome:
    f = doc.frame
    try:
        for seed in range(5):
            b = sample_admissible_perturbation(f, 0.5, seed)
            verify_perturbation(f, b)
    except OvfError as exc:
        return CheckOutcome(
            name="perturb",
            statement="sampled admissible perturbations stay weak within theoretical bounds",
            passed=False,
            detail=str(exc),
        )
    return CheckOutcome(
        name="perturb",
        statement="sampled admissible perturbations stay weak within theoretical bounds",
        passed=True,
    )


def run_checks(
    doc: FrameDocument, names, companion: FrameDocument | None = None
) -> list[CheckOutcome]:
    """Run the named checks (or "all" for every applicable one) in order."""
    requested = list(names)
    for name in requested:
        if name not in CHECK_NAMES:
            raise FrameFormatError(f"unknown check {name!r}; known: {', '.join(CHECK_NAMES)}")
    if "all" in requested:
        expanded = ["weak", "factor", "dual"]
        if doc.group is not None:
            expanded.append("shift")
        if doc.system is not None:
            expanded.append("grouplike")
        requested = expanded + [n for n in requested if n not in ("all",) and n not in expanded]

    outcomes = []
    for name in requested:
        if name == "weak":
            outcomes.append(_weak_check(doc))
        elif name == "factor":
            outcomes.append(_factor_check(doc))
        elif name == "parseval":
            outcomes.append(_parseval_check(doc))
        elif name == "riesz":
            outcomes.append(_riesz_check(doc))
        elif name == "dual":
            outcomes.append(_dual_check(doc, companion))
        elif name == "shift":
            outcomes.append(_shift_check(doc))
        elif name == "grouplike":
            outcomes.append(_grouplike_check(doc))
        elif name == "perturb":
            outcomes.append(_perturb_check(doc))
    return outcomes


def classification_summary(f: WeakOvf) -> dict:
    """Plain-data classification block used by reports."""
    report = classify(f)
    return {
        "d": f.d,
        "d0": f.d0,
        "N": f.N,
        "is_weak": report.is_weak,
        "is_parseval": report.is_parseval,
        "is_riesz": report.is_riesz,
        "is_orthonormal": report.is_orthonormal,
        "lower_bound": report.lower_bound,
        "upper_bound": report.upper_bound,
        "factorization_residual": report.factorization_residual,
        "truncated_analysis_norm": float(spectral_norm(analysis_operator(f.A))),
    }
