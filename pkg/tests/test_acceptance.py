"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines; any
assertion failure marks the corresponding criterion red.
"""

import itertools
import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import TOL, scalar_frame
from ovframes.cli import main as cli_main
from ovframes.dilation import dilate, similarity_witness
from ovframes.duality import (
    canonical_dual,
    dual_from_parameters,
    is_dual,
    is_orthogonal,
    mixed_frame_operators,
)
from ovframes.errors import NotInvertibleError, NotSimilarError
from ovframes.frames import (
    WeakOvf,
    analysis_operator,
    check_representation_identity,
    classify,
    frame_operator,
    from_factors,
    from_operator_onb,
    idempotent_P,
    onb_from_embeddings,
)
from ovframes.gen import (
    clock_shift_representation,
    cyclic_projective_system,
    random_group_frame,
    random_grouplike_frame,
    random_parseval_frame,
    random_weak_frame,
)
from ovframes.groups import (
    check_commutation,
    check_shift_conditions,
    cyclic_group,
    dihedral_group,
    direct_product,
    generate_frame,
    left_regular,
    reconstruct_representation,
)
from ovframes.grouplike import (
    GroupLikeRepresentation,
    check_grouplike_conditions,
    generate_grouplike_frame,
    grouplike_representation_injective,
    grouplike_representation_residual,
    reconstruct_grouplike_representation,
    system_from_cocycle,
    system_from_group,
    validate_system,
)
from ovframes.io import FrameDocument, frame_from_dict, frame_to_dict
from ovframes.linalg import adjoint, orthonormal_complement, random_op, random_unitary, spectral_norm
from ovframes.perturb import (
    perturbation_constants,
    sample_admissible_perturbation,
    verify_perturbation,
)

SEED = 987654321


def _passed(number, text):
    print(f"ACCEPTANCE {number:2d} PASS - {text}")


def _corpus(count, rng):
    frames = []
    for _ in range(count):
        d = int(rng.integers(1, 9))
        d0 = int(rng.integers(1, 5))
        n = int(rng.integers(max(2, -(-d // d0)), 17))
        frames.append(random_weak_frame(d, d0, n, rng))
    return frames


@pytest.fixture(scope="module")
def corpus():
    return _corpus(200, np.random.default_rng(SEED))


def test_criterion_01_factorization(corpus):
    worst = 0.0
    for f in corpus:
        s = frame_operator(f)
        theta_a = analysis_operator(f.A)
        theta_psi = analysis_operator(f.Psi)
        worst = max(worst, spectral_norm(s - adjoint(theta_psi) @ theta_a))
    assert worst <= 1e-8
    _passed(1, f"factorization residual over 200 frames: {worst:.3e} <= 1e-8")


def test_criterion_02_idempotent(corpus):
    worst = 0.0
    for f in corpus:
        p = idempotent_P(f)
        worst = max(worst, spectral_norm(p @ p - p))
    assert worst <= 1e-8
    _passed(2, f"idempotent residual over 200 frames: {worst:.3e} <= 1e-8")


def test_criterion_03_canonical_dual_suite(corpus):
    worst_dual = worst_inv = worst_rec = 0.0
    for f in corpus:
        report = classify(f)
        dual = canonical_dual(f)
        worst_dual = max(worst_dual, is_dual(f, dual).duality_residual)
        back = canonical_dual(dual)
        worst_inv = max(
            worst_inv,
            max(spectral_norm(x - y) for x, y in zip(back.A, f.A)),
            max(spectral_norm(x - y) for x, y in zip(back.Psi, f.Psi)),
        )
        dual_report = classify(dual)
        a, b = report.lower_bound, report.upper_bound
        worst_rec = max(
            worst_rec,
            abs(dual_report.lower_bound - 1 / b) * b,
            abs(dual_report.upper_bound - 1 / a) * a,
        )
    assert worst_dual <= 1e-8 and worst_inv <= 1e-8 and worst_rec <= 1e-7
    _passed(
        3,
        f"canonical dual: residual {worst_dual:.2e}, involution {worst_inv:.2e}, "
        f"reciprocity {worst_rec:.2e}",
    )


def test_criterion_04_representation_identity():
    rng = np.random.default_rng(SEED + 4)
    worst = 0.0
    for f in _corpus(20, rng):
        s_inv = np.linalg.inv(frame_operator(f))
        ker_a = orthonormal_complement(analysis_operator(f.A), f.tol)
        ker_psi = orthonormal_complement(analysis_operator(f.Psi), f.tol)
        for _ in range(50):
            h = (rng.standard_normal(f.d) + 1j * rng.standard_normal(f.d))
            ys = np.array([p_n @ adjoint(s_inv) @ h for p_n in f.Psi])
            zs = np.array([a_n @ s_inv @ h for a_n in f.A])
            if ker_a.shape[1]:
                ys += (ker_a @ random_op(ker_a.shape[1], 1, rng))[:, 0].reshape(f.N, f.d0)
            if ker_psi.shape[1]:
                zs += (ker_psi @ random_op(ker_psi.shape[1], 1, rng))[:, 0].reshape(f.N, f.d0)
            worst = max(worst, check_representation_identity(f, ys, zs))
    assert worst <= 1e-7
    _passed(4, f"representation identity over 20x50 coefficient pairs: {worst:.3e} <= 1e-7")


def test_criterion_05_factor_constructors():
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(100):
        d = int(rng.integers(1, 7))
        d0 = int(rng.integers(1, 4))
        n = int(rng.integers(-(-d // d0), 13))
        u, v = random_op(n * d0, d, rng), random_op(n * d0, d, rng)
        try:
            f = from_factors(u, v, n, d0, TOL)
        except NotInvertibleError:
            continue
        worst = max(worst, spectral_norm(classify(f).S - adjoint(v) @ u))
    worst_onb = 0.0
    for _ in range(100):
        d0 = int(rng.integers(1, 4))
        n = int(rng.integers(1, 6))
        d = n * d0
        onb_q = random_unitary(d, rng)
        onb = onb_from_embeddings(n, d0)
        f_base = np.array([row @ onb_q for row in onb.F])
        from ovframes.frames import OperatorONB

        rotated = OperatorONB(f_base, TOL)
        u, v = random_op(d, d, rng), random_op(d, d, rng)
        try:
            f = from_operator_onb(rotated, u, v, TOL)
        except NotInvertibleError:
            continue
        worst_onb = max(worst_onb, spectral_norm(classify(f).S - adjoint(v) @ u))
    assert worst <= 1e-9 and worst_onb <= 1e-9
    _passed(5, f"constructors match V^*U: factors {worst:.2e}, operator-ONB {worst_onb:.2e}")


def test_criterion_06_dual_parameterization():
    rng = np.random.default_rng(SEED + 6)
    f = random_weak_frame(2, 1, 3, rng)
    p = idempotent_P(f)
    scale = np.sqrt((1 / spectral_norm(frame_operator(f))) / (2 * (1 + spectral_norm(p))))
    produced = 0
    for _ in range(100):
        u = random_op(3, 2, rng)
        v = random_op(2, 3, rng)
        u *= scale / spectral_norm(u)
        v *= scale / spectral_norm(v)
        dual = dual_from_parameters(f, u, v)
        pair = is_dual(f, dual)
        assert pair.valid and pair.duality_residual <= 1e-8
        produced += 1
    assert produced == 100

    # scalar grid: every dual on the grid is reproduced by the parameterization
    g = scalar_frame([1.0, 1.0], [1.0, 1.0])
    grid = [(-2 + 0.25 * k) for k in range(17)]
    checked = 0
    for b1, p1 in itertools.product(grid, repeat=2):
        b2, p2 = 1.0 - b1, 1.0 - p1
        if not (-2 <= b2 <= 2 and -2 <= p2 <= 2):
            continue
        if abs(p1 * b1 + p2 * b2) == 0.0:
            continue  # not a weak OVF, outside the theorem's scope
        dual = dual_from_parameters(g, np.array([[b1], [b2]]), np.array([[p1, p2]]))
        assert_allclose(dual.A[:, 0, 0], [b1, b2], atol=1e-12)
        assert_allclose(dual.Psi[:, 0, 0], [p1, p2], atol=1e-12)
        checked += 1
    assert checked > 100
    _passed(6, f"100 parameterized duals verified; {checked} grid duals reproduced")


def test_criterion_07_dilation():
    rng = np.random.default_rng(SEED + 7)
    worst_s = worst_gram = worst_restrict = 0.0
    for k in range(50):
        d0 = int(rng.integers(1, 3))
        n = int(rng.integers(2, 7))
        d = int(rng.integers(1, n * d0 + 1))
        f = random_parseval_frame(d, d0, n, rng, paired=True)
        dil = dilate(f)
        ext = dil.extended_dim
        frame = dil.as_frame(TOL)
        worst_s = max(worst_s, spectral_norm(frame_operator(frame) - np.eye(ext)))
        for i in range(n):
            for j in range(n):
                target = np.eye(d0) if i == j else np.zeros((d0, d0))
                worst_gram = max(
                    worst_gram, spectral_norm(dil.B[i] @ adjoint(dil.Phi[j]) - target)
                )
            worst_restrict = max(
                worst_restrict,
                spectral_norm(dil.B[i] @ dil.embed - f.A[i]),
                spectral_norm(dil.Phi[i] @ dil.embed - f.Psi[i]),
            )
        assert spectral_norm(adjoint(dil.embed) @ dil.embed - np.eye(d)) <= 1e-12
    assert worst_s <= 1e-8 and worst_gram <= 1e-8 and worst_restrict <= 1e-8
    _passed(
        7,
        f"50 dilations orthonormal: S residual {worst_s:.2e}, cross-Gram {worst_gram:.2e}, "
        f"restriction {worst_restrict:.2e}",
    )


def _well_conditioned(d, rng):
    s = rng.uniform(0.5, 2.0, size=d)
    return random_unitary(d, rng) * s @ random_unitary(d, rng)


def test_criterion_08_similarity():
    rng = np.random.default_rng(SEED + 8)
    worst_recovery = worst_transport = 0.0
    for k in range(25):
        f = random_weak_frame(3, 1, 5, rng)
        r, t = _well_conditioned(3, rng), _well_conditioned(3, rng)
        g = WeakOvf(np.array([a @ r for a in f.A]), np.array([p @ t for p in f.Psi]), TOL)
        wit = similarity_witness(f, g)
        worst_recovery = max(
            worst_recovery, spectral_norm(wit.R_AB - r), spectral_norm(wit.R_PsiPhi - t)
        )
        transport = spectral_norm(
            frame_operator(g) - adjoint(wit.R_PsiPhi) @ frame_operator(f) @ wit.R_AB
        )
        worst_transport = max(worst_transport, transport, wit.p_residual)
        assert not is_orthogonal(f, g).orthogonal
        first, _ = mixed_frame_operators(f, g)
        floor = classify(f).lower_bound * np.linalg.svd(wit.R_AB, compute_uv=False)[-1]
        assert spectral_norm(first) >= floor - 1e-8

        # planted non-similar pair: permuting indices changes the idempotent
        perm = rng.permutation(f.N)
        h = WeakOvf(f.A[perm], f.Psi[perm], TOL)
        if spectral_norm(idempotent_P(h) - idempotent_P(f)) > 1e-6:
            with pytest.raises(NotSimilarError):
                similarity_witness(f, h)
    assert worst_recovery <= 1e-8 and worst_transport <= 1e-8
    _passed(
        8,
        f"similarity: recovery {worst_recovery:.2e}, transport {worst_transport:.2e}, "
        "similar pairs never orthogonal, permuted pairs rejected",
    )


GROUPS = [
    ("Z2", cyclic_group(2), 2, 1),
    ("Z3", cyclic_group(3), 3, 2),
    ("Z4", cyclic_group(4), 8, 2),
    ("Z2xZ2", direct_product(cyclic_group(2), cyclic_group(2)), 4, 1),
    ("D3", dihedral_group(3), 6, 2),
]


def test_criterion_09_group_round_trip():
    rng = np.random.default_rng(SEED + 9)
    worst_rec = worst_comm = 0.0
    for name, group, d, d0 in GROUPS:
        f, rep, _, _ = random_group_frame(group, d, d0, rng)
        assert classify(f).is_parseval
        assert check_shift_conditions(f, group).ok
        recovered = reconstruct_representation(f, group)
        worst_rec = max(
            worst_rec,
            max(spectral_norm(recovered.pi[g] - rep.pi[g]) for g in range(group.order)),
        )
        worst_comm = max(worst_comm, check_commutation(f, rep).max_residual)
    assert worst_rec <= 1e-8 and worst_comm <= 1e-8
    _passed(
        9,
        f"group round trip on Z2,Z3,Z4,Z2xZ2,D3: recovery {worst_rec:.2e}, "
        f"commutation {worst_comm:.2e}",
    )


def test_criterion_10_grouplike_suite():
    rng = np.random.default_rng(SEED + 10)
    # exact validation over the constructed projective corpus
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    pauli_t = np.zeros((4, 4), dtype=int)
    for a1 in range(2):
        for b1 in range(2):
            for a2 in range(2):
                for b2 in range(2):
                    pauli_t[a1 * 2 + b1, a2 * 2 + b2] = (2 * b1 * a2) % 4
    corpus = [
        system_from_group(cyclic_group(3)),
        system_from_group(dihedral_group(3)),
        cyclic_projective_system(2),
        cyclic_projective_system(3),
        cyclic_projective_system(4),
        system_from_cocycle(v4, pauli_t, 4),
    ]
    for sys in corpus:
        report = validate_system(sys)
        assert report.valid, report.violation

    # phase_order 1 reproduces the group machinery bit for bit
    group = cyclic_group(4)
    sys1 = system_from_group(group)
    lam = left_regular(group)
    a = np.asarray(rng.standard_normal((1, 4)) + 1j * rng.standard_normal((1, 4)))
    psi = np.asarray(rng.standard_normal((1, 4)) + 1j * rng.standard_normal((1, 4)))
    via_group = generate_frame(lam, a, psi, TOL)
    via_system = generate_grouplike_frame(
        GroupLikeRepresentation(system=sys1, pi=lam.pi), a, psi, TOL
    )
    assert np.array_equal(via_group.A, via_system.A)
    assert np.array_equal(via_group.Psi, via_system.Psi)

    # reconstruction round trip where theta_A is onto (d = size * d0)
    worst = 0.0
    for n, d0 in [(2, 1), (3, 1), (4, 2)]:
        sys = cyclic_projective_system(n)
        rep = clock_shift_representation(sys, n * d0, rng)
        f, _, _ = random_grouplike_frame(sys, rep, d0, rng)
        assert classify(f).is_parseval
        assert check_grouplike_conditions(f, sys).ok
        recovered = reconstruct_grouplike_representation(f, sys)
        worst = max(
            worst, max(spectral_norm(recovered.pi[u] - rep.pi[u]) for u in range(n))
        )
        assert grouplike_representation_residual(recovered) <= 1e-8
        assert grouplike_representation_injective(recovered, TOL)
    assert worst <= 1e-8
    _passed(10, f"group-like: corpus valid, phase-1 bit-compatible, round trip {worst:.2e}")


def test_criterion_11_perturbation_soundness():
    rng = np.random.default_rng(SEED + 11)
    frames = [random_weak_frame(2, 1, 4, rng), random_weak_frame(3, 2, 4, rng)]
    runs = 0
    for budget in (0.1, 0.5, 0.9, 0.99):
        for seed in range(125):
            for k, f in enumerate(frames):
                b = sample_admissible_perturbation(f, budget, (seed, k, int(budget * 100)))
                verify_perturbation(f, b)  # raises TheoremViolatedError on failure
                runs += 1
    assert runs == 1000

    scalar = scalar_frame([1.0, 0.5, 0.25], [1.0, -1.0, 2.0])
    base = classify(scalar)
    worst = 0.0
    for t in (0.1, 0.3, 0.7, 0.95):
        perturbed = classify(WeakOvf(t * scalar.A, scalar.Psi, TOL))
        worst = max(worst, abs(perturbed.lower_bound - t * base.lower_bound))
        cert = perturbation_constants(scalar, t * scalar.A)
        if cert.any_path:
            assert cert.theoretical_lower <= perturbed.lower_bound + 1e-10
    assert worst <= 1e-10
    _passed(11, f"1000 admissible perturbations sound; scalar family error {worst:.2e}")


def test_criterion_12_truncation_growth():
    for n in (3, 10, 100):
        a_vals = [1.0 / np.sqrt(k) for k in range(1, n + 1)]
        psi_vals = [1.0] + [0.0] * (n - 1)
        f = scalar_frame(a_vals, psi_vals)
        harmonic = float(sum(1.0 / k for k in range(1, n + 1)))
        norm_sq = spectral_norm(analysis_operator(f.A)) ** 2
        assert abs(norm_sq - harmonic) <= 1e-10
        assert spectral_norm(frame_operator(f) - np.eye(1)) <= 1e-15
    _passed(12, "||theta_A||^2 tracks the harmonic numbers at N=3,10,100 while S = 1")


def test_criterion_13_cli_pipelines(tmp_path):
    f = tmp_path / "f.json"
    fd = tmp_path / "fd.json"
    assert cli_main(["gen", "--kind", "parseval", "-d", "2", "--d0", "1", "-N", "4",
                     "--seed", "7", "-o", str(f)]) == 0
    assert cli_main(["verify", str(f)]) == 0
    assert cli_main(["dual", str(f), "-o", str(fd)]) == 0
    assert cli_main(["verify", str(f), "--checks", "dual", "--dual-file", str(fd)]) == 0

    rng = np.random.default_rng(SEED + 13)
    for k in range(100):
        d = int(rng.integers(1, 5))
        d0 = int(rng.integers(1, 3))
        n = int(rng.integers(-(-d // d0), 8))
        doc = FrameDocument(frame=random_weak_frame(d, d0, n, rng))
        back = frame_from_dict(json.loads(json.dumps(frame_to_dict(doc))))
        assert np.array_equal(back.frame.A, doc.frame.A)
        assert np.array_equal(back.frame.Psi, doc.frame.Psi)
    _passed(13, "CLI gen/verify/dual pipelines exit 0; 100 serialization round trips bit-exact")
