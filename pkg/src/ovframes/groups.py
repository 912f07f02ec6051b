"""Frames generated by unitary representations of finite groups.

Groups are Cayley tables on element indices 0..order-1 with the identity
at index 0 (tables are relabeled on construction if needed). A
representation pi turns a generator pair (A, Psi) into the frame
A_g = A pi_{g^-1}, Psi_g = Psi pi_{g^-1}, indexed by elements in table
order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dilation import parsevalize
from .errors import PreconditionFailedError
from .frames import WeakOvf, analysis_operator, classify, frame_operator
from .linalg import Tolerance, adjoint, as_op, kron, spectral_norm


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a multiplication table on indices; identity is 0."""

    mul: np.ndarray
    inv: np.ndarray

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def identity(self) -> int:
        return 0


def finite_group(mul) -> FiniteGroup:
    """Build and validate a group from its multiplication table.

    The identity is located and relabeled to index 0; associativity,
    identity laws and two-sided inverses are checked on all tuples.
    """
    table = np.asarray(mul, dtype=np.int64)
    n = table.shape[0]
    if table.shape != (n, n) or n < 1:
        raise ValueError("multiplication table must be square and nonempty")
    if table.min() < 0 or table.max() >= n:
        raise ValueError("table entries must be element indices")

    idx = np.arange(n)
    identity = None
    for e in range(n):
        if np.array_equal(table[e], idx) and np.array_equal(table[:, e], idx):
            identity = e
            break
    if identity is None:
        raise ValueError("table has no two-sided identity")
    if identity != 0:
        perm = idx.copy()
        perm[[0, identity]] = perm[[identity, 0]]
        relabeled = np.empty_like(table)
        for a in range(n):
            for b in range(n):
                relabeled[perm[a], perm[b]] = perm[table[a, b]]
        table = relabeled

    # lhs[a,b,c] = table[table[a,b], c]; rhs[a,b,c] = table[a, table[b,c]]
    lhs = table[table, :]
    rhs = np.take(table, table, axis=1)
    if not np.array_equal(lhs, rhs):
        raise ValueError("table is not associative")

    inv = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        hits = np.flatnonzero(table[a] == 0)
        if hits.size != 1 or table[hits[0], a] != 0:
            raise ValueError(f"element {a} has no unique two-sided inverse")
        inv[a] = hits[0]
    table.flags.writeable = False
    inv.flags.writeable = False
    return FiniteGroup(mul=table, inv=inv)


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return finite_group((idx[:, None] + idx[None, :]) % n)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n; element b*n + a is s^b r^a."""
    order = 2 * n
    table = np.zeros((order, order), dtype=np.int64)
    for b1 in range(2):
        for a1 in range(n):
            for b2 in range(2):
                for a2 in range(n):
                    b = (b1 + b2) % 2
                    a = (a2 + (a1 if b2 == 0 else -a1)) % n
                    table[b1 * n + a1, b2 * n + a2] = b * n + a
    return finite_group(table)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    ng, nh = g.order, h.order
    table = np.zeros((ng * nh, ng * nh), dtype=np.int64)
    for a1 in range(ng):
        for b1 in range(nh):
            for a2 in range(ng):
                for b2 in range(nh):
                    table[a1 * nh + b1, a2 * nh + b2] = g.mul[a1, a2] * nh + h.mul[b1, b2]
    return finite_group(table)


@dataclass(frozen=True)
class Representation:
    """A unitary representation: one d x d unitary per group element."""

    group: FiniteGroup
    pi: np.ndarray

    @property
    def dim(self) -> int:
        return self.pi.shape[1]


def representation_residual(rep: Representation) -> float:
    """Worst violation of pi_g pi_h = pi_{gh} and of unitarity."""
    g = rep.group
    eye = np.eye(rep.dim)
    worst = 0.0
    for a in range(g.order):
        worst = max(worst, spectral_norm(adjoint(rep.pi[a]) @ rep.pi[a] - eye))
        for b in range(g.order):
            worst = max(worst, spectral_norm(rep.pi[a] @ rep.pi[b] - rep.pi[g.mul[a, b]]))
    return worst


def left_regular(group: FiniteGroup) -> Representation:
    """Permutation matrices of left translation: lambda_g chi_q = chi_{gq}."""
    n = group.order
    lam = np.zeros((n, n, n), dtype=np.complex128)
    for g in range(n):
        for q in range(n):
            lam[g, group.mul[g, q], q] = 1.0
    return Representation(group=group, pi=lam)


def right_regular(group: FiniteGroup) -> Representation:
    """Permutation matrices of right translation: rho_g chi_q = chi_{q g^-1}."""
    n = group.order
    rho = np.zeros((n, n, n), dtype=np.complex128)
    for g in range(n):
        for q in range(n):
            rho[g, group.mul[q, group.inv[g]], q] = 1.0
    return Representation(group=group, pi=rho)


def generate_frame(rep: Representation, A, Psi, tol: Tolerance | None = None) -> WeakOvf:
    """The frame (A pi_{g^-1}, Psi pi_{g^-1}) indexed by elements in table order."""
    tol = tol or Tolerance()
    a, psi = as_op(A), as_op(Psi)
    group = rep.group
    a_seq = np.array([a @ rep.pi[group.inv[g]] for g in range(group.order)])
    psi_seq = np.array([psi @ rep.pi[group.inv[g]] for g in range(group.order)])
    return WeakOvf(a_seq, psi_seq, tol)


@dataclass(frozen=True)
class ShiftReport:
    """Outcome of the shift-invariance test over all (g, p, q) triples."""

    ok: bool
    max_residual: float
    worst: tuple[str, int, int, int] | None


def check_shift_conditions(f: WeakOvf, group: FiniteGroup) -> ShiftReport:
    """Verify A_{gp}A_{gq}^* = A_pA_q^*, A_{gp}Psi_{gq}^* = A_pPsi_q^* and
    Psi_{gp}Psi_{gq}^* = Psi_pPsi_q^* over every triple.

    These identities hold exactly when the frame comes from a generator
    pair over some unitary representation (no Parseval hypothesis needed
    for this direction).
    """
    if f.N != group.order:
        raise ValueError(f"frame length {f.N} != group order {group.order}")
    families = {
        "AA": np.einsum("pij,qkj->pqik", f.A, f.A.conj()),
        "APsi": np.einsum("pij,qkj->pqik", f.A, f.Psi.conj()),
        "PsiPsi": np.einsum("pij,qkj->pqik", f.Psi, f.Psi.conj()),
    }
    worst = None
    max_res = 0.0
    for name, gram in families.items():
        for g in range(group.order):
            shifted = gram[np.ix_(group.mul[g], group.mul[g])]
            diff = shifted - gram
            norms = np.linalg.norm(diff, ord=2, axis=(2, 3))
            p, q = np.unravel_index(np.argmax(norms), norms.shape)
            if norms[p, q] > max_res:
                max_res = float(norms[p, q])
                worst = (name, g, int(p), int(q))
    return ShiftReport(ok=bool(max_res <= 10 * f.tol.residual_eps), max_residual=max_res, worst=worst)


def reconstruct_representation(f: WeakOvf, group: FiniteGroup) -> Representation:
    """Recover the representation behind a Parseval shift-invariant frame.

    pi_g = theta_Psi^* (lambda_g (x) I_{d0}) theta_A; the result is
    unitary, multiplicative and regenerates the frame from its identity
    element. Raises PreconditionFailedError("NotParseval" |
    "ShiftConditionsFail") when the hypotheses fail.
    """
    if not classify(f).is_parseval:
        raise PreconditionFailedError("NotParseval")
    shift = check_shift_conditions(f, group)
    if not shift.ok:
        raise PreconditionFailedError(
            "ShiftConditionsFail", f"worst triple {shift.worst} at {shift.max_residual:.3e}"
        )
    lam = left_regular(group)
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    eye = np.eye(f.d0)
    pi = np.array(
        [adjoint(theta_psi) @ kron(lam.pi[g], eye) @ theta_a for g in range(group.order)]
    )
    return Representation(group=group, pi=pi)


@dataclass(frozen=True)
class CommutationReport:
    """Per-element residuals of the intertwining and commutant identities."""

    analysis_residuals: np.ndarray
    psi_residuals: np.ndarray
    frame_op_residuals: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(
            max(
                self.analysis_residuals.max(),
                self.psi_residuals.max(),
                self.frame_op_residuals.max(),
            )
        )


def check_commutation(f: WeakOvf, rep: Representation) -> CommutationReport:
    """Residuals of theta_A pi_g = (lambda_g (x) I) theta_A (same for Psi)
    and of S pi_g = pi_g S, for every g."""
    group = rep.group
    if f.N != group.order:
        raise ValueError(f"frame length {f.N} != group order {group.order}")
    lam = left_regular(group)
    theta_a = analysis_operator(f.A)
    theta_psi = analysis_operator(f.Psi)
    s = frame_operator(f)
    eye = np.eye(f.d0)
    res_a, res_psi, res_s = [], [], []
    for g in range(group.order):
        lam_g = kron(lam.pi[g], eye)
        res_a.append(spectral_norm(theta_a @ rep.pi[g] - lam_g @ theta_a))
        res_psi.append(spectral_norm(theta_psi @ rep.pi[g] - lam_g @ theta_psi))
        res_s.append(spectral_norm(s @ rep.pi[g] - rep.pi[g] @ s))
    return CommutationReport(
        analysis_residuals=np.array(res_a),
        psi_residuals=np.array(res_psi),
        frame_op_residuals=np.array(res_s),
    )


def twisted_shift_conditions(f: WeakOvf, group: FiniteGroup, side: str) -> ShiftReport:
    """Shift conditions of the one-sided Parseval normalization.

    side="left" tests ({A_g S^-1}, {Psi_g}); side="right" tests
    ({A_g}, {Psi_g (S^-1)^*}), the S-twisted identity families.
    """
    return check_shift_conditions(parsevalize(f, side), group)
