"""Finite group-like unitary systems with exact rational phases.

A system of size n with phase order m is a multiplication table sending a
pair of element indices (u, v) to a phase turn t(u,v) in Z_m together with
an element index s(u,v): the operator product satisfies
U V = zeta^{t(u,v)} W with zeta = exp(2 pi i / m). The splitting maps are
f(zeta^k U) = zeta^k and sigma(zeta^k U) = U, so every identity involving
f and sigma reduces to integer arithmetic mod m on the table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSystemError, PreconditionFailedError
from .frames import WeakOvf, analysis_operator, classify
from .groups import FiniteGroup
from .linalg import Tolerance, adjoint, as_op, kron, rank_at_tolerance, spectral_norm


@dataclass(frozen=True)
class GroupLikeSystem:
    """Phased multiplication structure of a finite group-like unitary system.

    mul_phase[u, v] is the turn t(u,v) in Z_{phase_order}; mul_elem[u, v]
    is sigma(UV). inv_phase/inv_elem encode U^-1 = zeta^{inv_phase[u]} *
    element inv_elem[u]. The identity element has index ``identity``.
    """

    size: int
    phase_order: int
    mul_phase: np.ndarray
    mul_elem: np.ndarray
    inv_phase: np.ndarray
    inv_elem: np.ndarray
    identity: int


def group_like_system(mul_phase, mul_elem, phase_order: int) -> GroupLikeSystem:
    """Assemble a system from its table, locating identity and inverses.

    Only structural facts are established here (the table is total, an
    identity exists, inverses exist and are unique); the group-like axioms
    themselves are the job of validate_system.
    """
    t = np.asarray(mul_phase, dtype=np.int64)
    s = np.asarray(mul_elem, dtype=np.int64)
    n = s.shape[0]
    if s.shape != (n, n) or t.shape != (n, n) or n < 1:
        raise InvalidSystemError("phase and element tables must be square, same size")
    if phase_order < 1:
        raise InvalidSystemError("phase_order must be a positive integer")
    if s.min() < 0 or s.max() >= n:
        raise InvalidSystemError("element table entries out of range")
    t = np.mod(t, phase_order)

    idx = np.arange(n)
    identity = None
    for e in range(n):
        if np.array_equal(s[e], idx) and np.array_equal(s[:, e], idx):
            identity = e
            break
    if identity is None:
        raise InvalidSystemError("no identity element in the table")

    inv_elem = np.full(n, -1, dtype=np.int64)
    inv_phase = np.zeros(n, dtype=np.int64)
    for u in range(n):
        hits = np.flatnonzero(s[u] == identity)
        if hits.size != 1:
            raise InvalidSystemError(f"element {u} has no unique inverse")
        v = int(hits[0])
        inv_elem[u] = v
        inv_phase[u] = (-t[u, v]) % phase_order
    for arr in (t, s, inv_phase, inv_elem):
        arr.flags.writeable = False
    return GroupLikeSystem(
        size=n, phase_order=phase_order, mul_phase=t, mul_elem=s,
        inv_phase=inv_phase, inv_elem=inv_elem, identity=identity,
    )


def system_from_group(group: FiniteGroup) -> GroupLikeSystem:
    """A plain group viewed as a group-like system with trivial phases."""
    zeros = np.zeros((group.order, group.order), dtype=np.int64)
    return group_like_system(zeros, group.mul, 1)


def system_from_cocycle(group: FiniteGroup, cocycle, phase_order: int) -> GroupLikeSystem:
    """System over a group with phases from a Z_m-valued 2-cocycle table."""
    return group_like_system(cocycle, group.mul, phase_order)


def system_from_unitaries(mats, phase_order: int, tol: Tolerance | None = None) -> GroupLikeSystem:
    """Derive the table of a concrete set of unitaries closed up to phases.

    Every product mats[u] @ mats[v] must match zeta^k * mats[w] for unique
    (k, w) at tolerance; otherwise the set is not a group-like system of
    the declared phase order.
    """
    tol = tol or Tolerance()
    ops = [as_op(m) for m in mats]
    n = len(ops)
    phases = [_turn_to_complex(k, phase_order) for k in range(phase_order)]
    t = np.zeros((n, n), dtype=np.int64)
    s = np.zeros((n, n), dtype=np.int64)
    for u in range(n):
        for v in range(n):
            prod = ops[u] @ ops[v]
            matches = [
                (k, w)
                for w in range(n)
                for k in range(phase_order)
                if spectral_norm(prod - phases[k] * ops[w]) <= 10 * tol.residual_eps
            ]
            if len(matches) != 1:
                raise InvalidSystemError(
                    f"product of elements {u},{v} matches {len(matches)} phased elements"
                )
            t[u, v], s[u, v] = matches[0]
    return group_like_system(t, s, phase_order)


@dataclass(frozen=True)
class SystemReport:
    """validate_system outcome: first violated axiom, or clean."""

    valid: bool
    violation: str | None = None


def validate_system(sys: GroupLikeSystem) -> SystemReport:
    """Exact check of the corresponding-mapping identities and injectivity.

    All phase comparisons are integers mod phase_order, so a pass is exact
    (no floating arithmetic involved). Checks, in order: identity behaves
    trivially (sigma(U) = U, f(U) = 1 routed through I*U and U*I);
    sigma-associativity sigma(U sigma(VW)) = sigma(sigma(UV) W); the phase
    cocycle f(U sigma(VW)) f(VW) = f(sigma(UV) W) f(UV); two-sided
    inverses with cancelling phases; injectivity of the seven section
    maps.
    """
    n, m = sys.size, sys.phase_order
    s, t = sys.mul_elem, sys.mul_phase
    e = sys.identity
    idx = np.arange(n)

    if not (np.array_equal(s[e], idx) and np.array_equal(s[:, e], idx)):
        return SystemReport(False, "identity does not act trivially on elements")
    if np.any(t[e] != 0) or np.any(t[:, e] != 0):
        return SystemReport(False, "identity carries a nonzero phase")

    for u in range(n):
        for v in range(n):
            sv = s[u, v]
            for w in range(n):
                if s[u, s[v, w]] != s[sv, w]:
                    return SystemReport(
                        False, f"sigma associativity fails at triple ({u},{v},{w})"
                    )
                if (t[v, w] + t[u, s[v, w]]) % m != (t[u, v] + t[sv, w]) % m:
                    return SystemReport(
                        False, f"phase cocycle fails at triple ({u},{v},{w})"
                    )

    for u in range(n):
        v = sys.inv_elem[u]
        if s[u, v] != e or (t[u, v] + sys.inv_phase[u]) % m != 0:
            return SystemReport(False, f"right inverse of element {u} inconsistent")
        if s[v, u] != e or (sys.inv_phase[u] + t[v, u]) % m != 0:
            return SystemReport(False, f"left inverse of element {u} inconsistent")

    inv = sys.inv_elem
    sections = {
        "sigma(VU)": lambda v, w: s[v],
        "sigma(UV)": lambda v, w: s[:, v],
        "sigma(UV^-1)": lambda v, w: s[:, inv[v]],
        "sigma(V^-1U)": lambda v, w: s[inv[v]],
        "sigma(VU^-1)": lambda v, w: s[v][inv],
        "sigma(U^-1V)": lambda v, w: s[:, v][inv],
        "sigma(VU^-1W)": lambda v, w: s[s[v][inv], w],
    }
    for name, section in sections.items():
        for v in range(n):
            for w in range(n):
                image = section(v, w)
                if np.unique(image).size != n:
                    return SystemReport(False, f"map {name} not injective for V={v}, W={w}")
    return SystemReport(True, None)


def _turn_to_complex(k: int, m: int) -> complex:
    """zeta^k for the m-th root of unity; quarter turns are exact."""
    k = k % m
    quarters = {(0, 4): 1.0, (1, 4): 1.0j, (2, 4): -1.0, (3, 4): -1.0j}
    if 4 * k % m == 0:
        return quarters[(4 * k // m, 4)]
    return complex(np.exp(2j * np.pi * k / m))


def phase_value(sys: GroupLikeSystem, turn: int) -> complex:
    return _turn_to_complex(turn, sys.phase_order)


@dataclass(frozen=True)
class GroupLikeRepresentation:
    """An injective phased-unitary action of a group-like system."""

    system: GroupLikeSystem
    pi: np.ndarray

    @property
    def dim(self) -> int:
        return self.pi.shape[1]


def grouplike_representation_residual(rep: GroupLikeRepresentation) -> float:
    """Worst violation of the phased product law, the inverse law and
    unitarity. Injectivity is checked separately (it is a separation, not
    a residual)."""
    sys = rep.system
    eye = np.eye(rep.dim)
    worst = 0.0
    for u in range(sys.size):
        worst = max(worst, spectral_norm(adjoint(rep.pi[u]) @ rep.pi[u] - eye))
        inv_op = phase_value(sys, sys.inv_phase[u]) * rep.pi[sys.inv_elem[u]]
        worst = max(worst, spectral_norm(rep.pi[u] @ inv_op - eye))
        for v in range(sys.size):
            target = phase_value(sys, sys.mul_phase[u, v]) * rep.pi[sys.mul_elem[u, v]]
            worst = max(worst, spectral_norm(rep.pi[u] @ rep.pi[v] - target))
    return worst


def grouplike_representation_injective(rep: GroupLikeRepresentation, tol: Tolerance) -> bool:
    n = rep.system.size
    for u in range(n):
        for v in range(u + 1, n):
            if spectral_norm(rep.pi[u] - rep.pi[v]) <= 10 * tol.residual_eps:
                return False
    return True


def regular_representation(sys: GroupLikeSystem) -> GroupLikeRepresentation:
    """Left regular representation lambda_U chi_V = f(UV) chi_{sigma(UV)}."""
    report = validate_system(sys)
    if not report.valid:
        raise InvalidSystemError(report.violation)
    n = sys.size
    lam = np.zeros((n, n, n), dtype=np.complex128)
    for u in range(n):
        for v in range(n):
            lam[u, sys.mul_elem[u, v], v] = phase_value(sys, sys.mul_phase[u, v])
    return GroupLikeRepresentation(system=sys, pi=lam)


def right_regular_representation(sys: GroupLikeSystem) -> GroupLikeRepresentation:
    """Right regular representation rho_U chi_V = f(VU^-1) chi_{sigma(VU^-1)}."""
    report = validate_system(sys)
    if not report.valid:
        raise InvalidSystemError(report.violation)
    n = sys.size
    rho = np.zeros((n, n, n), dtype=np.complex128)
    for u in range(n):
        ku, wu = sys.inv_phase[u], sys.inv_elem[u]
        for v in range(n):
            turn = (ku + sys.mul_phase[v, wu]) % sys.phase_order
            rho[u, sys.mul_elem[v, wu], v] = phase_value(sys, turn)
    return GroupLikeRepresentation(system=sys, pi=rho)


def generate_grouplike_frame(
    rep: GroupLikeRepresentation, A, Psi, tol: Tolerance | None = None
) -> WeakOvf:
    """The frame (A pi(U)^-1, Psi pi(U)^-1) indexed by elements in table order.

    pi(U)^-1 is taken through the inverse law f(U^-1) pi(sigma(U^-1)); the
    phase multiplication is skipped when the turn is zero so that trivial
    phase systems reproduce plain group generation bit for bit.
    """
    tol = tol or Tolerance()
    a, psi = as_op(A), as_op(Psi)
    sys = rep.system
    a_seq, psi_seq = [], []
    for u in range(sys.size):
        k, w = int(sys.inv_phase[u]), int(sys.inv_elem[u])
        a_u = a @ rep.pi[w]
        psi_u = psi @ rep.pi[w]
        if k % sys.phase_order != 0:
            phase = phase_value(sys, k)
            a_u = phase * a_u
            psi_u = phase * psi_u
        a_seq.append(a_u)
        psi_seq.append(psi_u)
    return WeakOvf(np.array(a_seq), np.array(psi_seq), tol)


@dataclass(frozen=True)
class GroupLikeConditionReport:
    """Outcome of the phased shift-invariance test over all (U, V, W)."""

    ok: bool
    max_residual: float
    worst: tuple[str, int, int, int] | None


def check_grouplike_conditions(f: WeakOvf, sys: GroupLikeSystem) -> GroupLikeConditionReport:
    """Verify the three phased identity families

        A_{sigma(UV)} A_{sigma(UW)}^* = f(UV) conj(f(UW)) A_V A_W^*

    (and the APsi, PsiPsi analogues) over every triple of elements."""
    if f.N != sys.size:
        raise ValueError(f"frame length {f.N} != system size {sys.size}")
    m = sys.phase_order
    families = {
        "AA": np.einsum("pij,qkj->pqik", f.A, f.A.conj()),
        "APsi": np.einsum("pij,qkj->pqik", f.A, f.Psi.conj()),
        "PsiPsi": np.einsum("pij,qkj->pqik", f.Psi, f.Psi.conj()),
    }
    worst = None
    max_res = 0.0
    for name, gram in families.items():
        for u in range(sys.size):
            su = sys.mul_elem[u]
            tu = sys.mul_phase[u]
            shifted = gram[np.ix_(su, su)]
            turns = (tu[:, None] - tu[None, :]) % m
            phases = np.array([[phase_value(sys, k) for k in row] for row in turns])
            diff = shifted - phases[:, :, None, None] * gram
            norms = np.linalg.norm(diff, ord=2, axis=(2, 3))
            v, w = np.unravel_index(np.argmax(norms), norms.shape)
            if norms[v, w] > max_res:
                max_res = float(norms[v, w])
                worst = (name, u, int(v), int(w))
    return GroupLikeConditionReport(
        ok=bool(max_res <= 10 * f.tol.residual_eps), max_residual=max_res, worst=worst
    )


def reconstruct_grouplike_representation(
    f: WeakOvf, sys: GroupLikeSystem
) -> GroupLikeRepresentation:
    """Recover the injective representation behind a Parseval frame.

    Requires the frame Parseval, the analysis operator onto (full row rank
    N*d0 at tolerance, the surrogate for theta_A^* injective) and the
    phased conditions to hold; failures raise
    PreconditionFailedError("NotParseval" | "AnalysisNotSurjective" |
    "ConditionsFail"). The representation is
    pi(U) = theta_Psi^* (lambda_U (x) I_{d0}) theta_A.
    """
    if not classify(f).is_parseval:
        raise PreconditionFailedError("NotParseval")
    theta_a = analysis_operator(f.A)
    if f.N * f.d0 > f.d or rank_at_tolerance(theta_a, f.tol) < f.N * f.d0:
        raise PreconditionFailedError("AnalysisNotSurjective")
    conditions = check_grouplike_conditions(f, sys)
    if not conditions.ok:
        raise PreconditionFailedError(
            "ConditionsFail", f"worst triple {conditions.worst} at {conditions.max_residual:.3e}"
        )
    lam = regular_representation(sys)
    theta_psi = analysis_operator(f.Psi)
    eye = np.eye(f.d0)
    pi = np.array(
        [adjoint(theta_psi) @ kron(lam.pi[u], eye) @ theta_a for u in range(sys.size)]
    )
    return GroupLikeRepresentation(system=sys, pi=pi)
