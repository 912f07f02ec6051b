"""Random corpus generation: weak, Parseval, operator-ONB, group and
group-like frames, deterministic per seed.
"""

from __future__ import annotations

import numpy as np

from .errors import NotInvertibleError, TheoremViolatedError
from .frames import WeakOvf, classify, from_factors
from .groups import (
    FiniteGroup,
    Representation,
    check_shift_conditions,
    cyclic_group,
    generate_frame,
    left_regular,
)
from .grouplike import (
    GroupLikeRepresentation,
    GroupLikeSystem,
    check_grouplike_conditions,
    generate_grouplike_frame,
    group_like_system,
    validate_system,
)
from .io import FrameDocument
from .linalg import Tolerance, adjoint, inversion_ratio, kron, random_op, random_unitary, try_invert


def prescribed_factors(d: int, d0: int, N: int, rng, singular_range=(0.5, 2.0)):
    """Factor pair (U, V) with V^* U well-conditioned by construction.

    U is Ginibre; V is chosen so that V^* U equals a random matrix with
    singular values drawn from ``singular_range``, keeping the corpus far
    from the invertibility floor.
    """
    if N * d0 < d:
        raise ValueError("need N*d0 >= d for an invertible frame operator")
    rng = np.random.default_rng(rng)
    u = random_op(N * d0, d, rng)
    s = rng.uniform(*singular_range, size=d)
    m = random_unitary(d, rng) * s @ random_unitary(d, rng)
    gram_inv = try_invert(adjoint(u) @ u, Tolerance())
    v = u @ gram_inv @ adjoint(m)
    return u, v


def random_weak_frame(d: int, d0: int, N: int, seed, tol: Tolerance | None = None) -> WeakOvf:
    tol = tol or Tolerance()
    u, v = prescribed_factors(d, d0, N, seed)
    return from_factors(u, v, N, d0, tol)


def random_parseval_frame(
    d: int, d0: int, N: int, seed, tol: Tolerance | None = None, paired: bool = False
) -> WeakOvf:
    """Parseval frame; with ``paired`` the two sequences coincide (A = Psi),
    which also satisfies the dilation hypotheses."""
    tol = tol or Tolerance()
    rng = np.random.default_rng(seed)
    if N * d0 < d:
        raise ValueError("need N*d0 >= d for a Parseval frame")
    if paired:
        q, _ = np.linalg.qr(random_op(N * d0, d, rng))
        return from_factors(q, q, N, d0, tol)
    u = random_op(N * d0, d, rng)
    v = u @ try_invert(adjoint(u) @ u, tol)
    return from_factors(u, v, N, d0, tol)


def random_operator_onb_frame(d: int, d0: int, N: int, seed, tol: Tolerance | None = None) -> WeakOvf:
    """Orthonormal frame whose sequence is an operator ONB: A_n = Psi_n = L_n^* Q."""
    tol = tol or Tolerance()
    if d != N * d0:
        raise ValueError("an operator ONB needs d = N*d0")
    q = random_unitary(d, seed)
    f = np.array([q[n * d0 : (n + 1) * d0] for n in range(N)])
    return WeakOvf(f, f, tol)


def random_unitary_representation(group: FiniteGroup, d: int, rng) -> Representation:
    """Copies of the regular representation conjugated by a Haar unitary.

    Needs |G| | d. Every irreducible occurs with multiplicity
    (d/|G|) * its dimension, which keeps the commutant generator
    normalization well posed whenever d <= |G|*d0.
    """
    rng = np.random.default_rng(rng)
    n = group.order
    if d % n != 0:
        raise ValueError("regular-block representation needs |G| | d")
    copies = d // n
    lam = left_regular(group)
    q = random_unitary(d, rng)
    pi = np.zeros((n, d, d), dtype=np.complex128)
    for g in range(n):
        pi[g] = adjoint(q) @ kron(lam.pi[g], np.eye(copies)) @ q
    return Representation(group=group, pi=pi)


def random_cyclic_representation(n: int, d: int, rng) -> Representation:
    """Representation of Z_n on C^d from balanced characters, conjugated.

    Exponents are assigned round-robin, so no character occurs more than
    ceil(d/n) times; that keeps the commutant generator normalization
    well posed whenever d <= n*d0.
    """
    rng = np.random.default_rng(rng)
    group = cyclic_group(n)
    omega = np.exp(2j * np.pi / n)
    exponents = np.arange(d) % n
    q = random_unitary(d, rng)
    pi = np.zeros((n, d, d), dtype=np.complex128)
    for g in range(n):
        pi[g] = adjoint(q) @ np.diag(omega ** (g * exponents)) @ q
    return Representation(group=group, pi=pi)


def _commutant_normalized_pair(pi: np.ndarray, inverses, d0: int, rng, tol: Tolerance):
    """Generator pair (A, Psi) whose generated frame is Parseval.

    K = sum_g pi_g Psi0^* A0 pi_g^-1 lies in the commutant of the
    representation, so replacing A0 by A0 K^-1 prescribes frame operator I.
    """
    d = pi.shape[1]
    for _ in range(64):
        a0 = random_op(d0, d, rng)
        psi0 = random_op(d0, d, rng)
        k = np.zeros((d, d), dtype=np.complex128)
        for g in range(pi.shape[0]):
            k += pi[g] @ adjoint(psi0) @ a0 @ pi[inverses[g]]
        if inversion_ratio(k) >= 1e-3:
            return a0 @ try_invert(k, tol), psi0
    raise NotInvertibleError("could not draw a well-conditioned generator pair")


def random_group_frame(
    group: FiniteGroup,
    d: int,
    d0: int,
    seed,
    tol: Tolerance | None = None,
    rep: Representation | None = None,
):
    """Parseval group-generated frame; returns (frame, representation, A, Psi).

    A representation may be supplied; the default regular-block one needs
    |G| | d.
    """
    tol = tol or Tolerance()
    if d > group.order * d0:
        raise ValueError("need d <= |G|*d0 for a Parseval group frame")
    rng = np.random.default_rng(seed)
    if rep is None:
        rep = random_unitary_representation(group, d, rng)
    a, psi = _commutant_normalized_pair(rep.pi, rep.group.inv, d0, rng, tol)
    return generate_frame(rep, a, psi, tol), rep, a, psi


def cyclic_projective_system(n: int) -> GroupLikeSystem:
    """Z_n with the bilinear cocycle t(i, j) = i*j mod n, phase order n."""
    group = cyclic_group(n)
    idx = np.arange(n)
    cocycle = (idx[:, None] * idx[None, :]) % n
    return group_like_system(cocycle, group.mul, n)


def clock_shift_representation(sys: GroupLikeSystem, d: int, rng) -> GroupLikeRepresentation:
    """Representation of the cyclic projective system on C^d (n | d).

    pi0(u) = Shift^u Clock^u on C^n realizes the bilinear cocycle exactly;
    it is tensored up to dimension d and conjugated by a Haar unitary.
    """
    n = sys.size
    if d % n != 0:
        raise ValueError("clock-shift representation needs size | d")
    rng = np.random.default_rng(rng)
    omega = np.exp(2j * np.pi / n)
    shift = np.roll(np.eye(n), 1, axis=0).astype(np.complex128)
    clock = np.diag(omega ** np.arange(n))
    q = random_unitary(d, rng)
    pi = np.zeros((n, d, d), dtype=np.complex128)
    for u in range(n):
        base = np.linalg.matrix_power(shift, u) @ np.linalg.matrix_power(clock, u)
        pi[u] = adjoint(q) @ kron(base, np.eye(d // n)) @ q
    return GroupLikeRepresentation(system=sys, pi=pi)


def random_grouplike_frame(
    sys: GroupLikeSystem,
    rep: GroupLikeRepresentation,
    d0: int,
    seed,
    tol: Tolerance | None = None,
):
    """Parseval frame generated over a group-like representation."""
    tol = tol or Tolerance()
    rng = np.random.default_rng(seed)
    # phases cancel inside K = sum_U pi(U) Psi0^* A0 pi(U)^-1, so the plain
    # adjoint inverse of each unitary is enough here
    d = rep.pi.shape[1]
    for _ in range(64):
        a0 = random_op(d0, d, rng)
        psi0 = random_op(d0, d, rng)
        k = np.zeros((d, d), dtype=np.complex128)
        for u in range(sys.size):
            k += rep.pi[u] @ adjoint(psi0) @ a0 @ adjoint(rep.pi[u])
        if inversion_ratio(k) >= 1e-3:
            a = a0 @ try_invert(k, tol)
            return generate_grouplike_frame(rep, a, psi0, tol), a, psi0
    raise NotInvertibleError("could not draw a well-conditioned generator pair")


GENERATOR_KINDS = ("parseval", "weak", "group", "grouplike", "operator-onb")


def generate_document(kind: str, d: int, d0: int, N: int, seed, tol: Tolerance | None = None):
    """Build a frame document of the requested class, verified before return.

    Dimension constraints per kind: parseval/weak need N*d0 >= d;
    operator-onb needs d = N*d0; group (cyclic Z_N) needs d <= N*d0;
    grouplike (Z_N with the bilinear cocycle) additionally needs N | d.
    Violations raise ValueError; a generated frame failing its own class
    check raises TheoremViolatedError (never expected).
    """
    tol = tol or Tolerance()
    if min(d, d0, N) < 1:
        raise ValueError("dimensions must be positive")
    if kind == "parseval":
        frame = random_parseval_frame(d, d0, N, seed, tol, paired=True)
        if not classify(frame).is_parseval:
            raise TheoremViolatedError("generated frame is not Parseval")
        return FrameDocument(frame=frame)
    if kind == "weak":
        frame = random_weak_frame(d, d0, N, seed, tol)
        if not classify(frame).is_weak:
            raise TheoremViolatedError("generated frame is not weak")
        return FrameDocument(frame=frame)
    if kind == "operator-onb":
        frame = random_operator_onb_frame(d, d0, N, seed, tol)
        if not classify(frame).is_orthonormal:
            raise TheoremViolatedError("generated frame is not orthonormal")
        return FrameDocument(frame=frame)
    if kind == "group":
        if d > N * d0:
            raise ValueError("need d <= N*d0 for a Parseval group frame")
        group = cyclic_group(N)
        rng = np.random.default_rng(seed)
        rep = random_cyclic_representation(N, d, rng)
        frame, _, _, _ = random_group_frame(group, d, d0, rng, tol, rep=rep)
        if not classify(frame).is_parseval or not check_shift_conditions(frame, group).ok:
            raise TheoremViolatedError("generated group frame failed its class check")
        return FrameDocument(frame=frame, group=group)
    if kind == "grouplike":
        if d % N != 0:
            raise ValueError("grouplike generation needs N | d")
        if d > N * d0:
            raise ValueError("need d <= N*d0 for a Parseval grouplike frame")
        sys = cyclic_projective_system(N)
        if not validate_system(sys).valid:
            raise TheoremViolatedError("constructed system failed validation")
        rng = np.random.default_rng(seed)
        rep = clock_shift_representation(sys, d, rng)
        frame, _, _ = random_grouplike_frame(sys, rep, d0, rng, tol)
        if not classify(frame).is_parseval or not check_grouplike_conditions(frame, sys).ok:
            raise TheoremViolatedError("generated grouplike frame failed its class check")
        return FrameDocument(frame=frame, system=sys)
    raise ValueError(f"unknown kind {kind!r}; known: {', '.join(GENERATOR_KINDS)}")
