import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import TOL, scalar_frame
from ovframes.duality import (
    canonical_dual,
    direct_sum_frames,
    dual_bounds_check,
    dual_from_parameters,
    interpolate,
    is_dual,
    is_orthogonal,
    left_inverse_of_analysis,
    right_inverse_of_synthesis,
)
from ovframes.errors import NotInvertibleError, PreconditionFailedError, ShapeMismatchError
from ovframes.frames import WeakOvf, analysis_operator, classify, frame_operator
from ovframes.gen import random_parseval_frame, random_weak_frame
from ovframes.linalg import adjoint, random_op, spectral_norm


def test_canonical_dual_of_parseval_is_itself(rng):
    f = random_parseval_frame(3, 1, 4, rng)
    dual = canonical_dual(f)
    assert_allclose(dual.A, f.A, atol=1e-12)
    assert_allclose(dual.Psi, f.Psi, atol=1e-12)


def test_canonical_dual_scalar():
    f = scalar_frame([1.0, 1.0], [1.0, 1.0])  # S = 2
    dual = canonical_dual(f)
    assert_allclose(dual.A[:, 0, 0], [0.5, 0.5])
    assert_allclose(dual.Psi[:, 0, 0], [0.5, 0.5])
    assert_allclose(frame_operator(dual), [[0.5]])


def test_canonical_dual_involution(rng):
    f = random_weak_frame(3, 2, 4, rng)
    back = canonical_dual(canonical_dual(f))
    assert max(spectral_norm(x - y) for x, y in zip(back.A, f.A)) <= TOL.residual_eps
    assert max(spectral_norm(x - y) for x, y in zip(back.Psi, f.Psi)) <= TOL.residual_eps


def test_dual_bounds_scalar_cases(rng):
    assert_allclose(dual_bounds_check(scalar_frame([1.0], [1.0])), (1.0, 1.0))
    assert_allclose(dual_bounds_check(scalar_frame([1.0, 1.0], [1.0, 1.0])), (0.5, 0.5))
    f = random_weak_frame(4, 1, 6, rng)
    report = classify(f)
    a_dual, b_dual = dual_bounds_check(f)
    assert abs(a_dual - 1 / report.upper_bound) <= 1e-8 * (1 / report.upper_bound)
    assert abs(b_dual - 1 / report.lower_bound) <= 1e-8 * (1 / report.lower_bound)


def test_is_dual_cases(rng):
    f = random_parseval_frame(2, 1, 3, rng)
    assert is_dual(f, f).valid  # Parseval frames are self-dual
    g = random_weak_frame(2, 1, 3, rng)
    assert is_dual(g, canonical_dual(g)).valid
    disjoint_a = scalar_frame([1.0, 0.0], [1.0, 0.0])
    disjoint_b = scalar_frame([0.0, 1.0], [0.0, 1.0])
    pair = is_dual(disjoint_a, disjoint_b)
    assert not pair.valid  # mixed sums vanish entirely
    with pytest.raises(ShapeMismatchError):
        is_dual(f, scalar_frame([1.0], [1.0]))


def test_right_inverse_parameterization(rng):
    f = random_weak_frame(3, 1, 4, rng)
    theta_psi = analysis_operator(f.Psi)
    s_inv = np.linalg.inv(frame_operator(f))
    base = analysis_operator(f.A) @ s_inv

    assert_allclose(right_inverse_of_synthesis(f, np.zeros((4, 3))), base, atol=1e-12)
    # the canonical right-inverse is a fixed point of the parameterization
    assert_allclose(right_inverse_of_synthesis(f, base), base, atol=1e-12)
    r = right_inverse_of_synthesis(f, random_op(4, 3, rng))
    assert spectral_norm(adjoint(theta_psi) @ r - np.eye(3)) <= 1e-9


def test_left_inverse_parameterization(rng):
    f = random_weak_frame(3, 1, 4, rng)
    theta_a = analysis_operator(f.A)
    s_inv = np.linalg.inv(frame_operator(f))
    base = s_inv @ adjoint(analysis_operator(f.Psi))

    assert_allclose(left_inverse_of_analysis(f, np.zeros((3, 4))), base, atol=1e-12)
    assert_allclose(left_inverse_of_analysis(f, base), base, atol=1e-12)
    left = left_inverse_of_analysis(f, random_op(3, 4, rng))
    assert spectral_norm(left @ theta_a - np.eye(3)) <= 1e-9


def test_dual_from_zero_parameters_is_canonical(rng):
    f = random_weak_frame(2, 1, 3, rng)
    dual = dual_from_parameters(f, np.zeros((3, 2)), np.zeros((2, 3)))
    expected = canonical_dual(f)
    assert_allclose(dual.A, expected.A, atol=1e-12)
    assert_allclose(dual.Psi, expected.Psi, atol=1e-12)


def test_dual_from_small_parameters_is_dual(rng):
    f = random_parseval_frame(2, 1, 4, rng)
    u = 1e-3 * random_op(4, 2, rng)
    v = 1e-3 * random_op(2, 4, rng)
    dual = dual_from_parameters(f, u, v)
    assert is_dual(f, dual).duality_residual <= 1e-9


def test_dual_from_adversarial_parameters_rejected():
    f = scalar_frame([1.0], [1.0])  # d = 1, S = 1, P = 1
    # with P = I the combined operator is S^-1 + VU - VU ... pick U, V such
    # that S^-1 + VU - V P U = 0: here theta_A = 1 so V P U = VU and the
    # combined operator is S^-1 = 1, never singular; use N = 2 instead.
    g = scalar_frame([1.0, 0.0], [1.0, 0.0])
    # theta_A = (1;0), P = diag(1,0); choose U = (0;1), V = (0, v2):
    # combined = 1 + v2*1 - 0 = 1 + v2, singular at v2 = -1
    u = np.array([[0.0], [1.0]])
    v = np.array([[0.0, -1.0]])
    with pytest.raises(NotInvertibleError):
        dual_from_parameters(g, u, v)


def test_scalar_grid_duals_all_come_from_parameters():
    # d = d0 = 1, N = 2 brute-force oracle: every grid dual of ((1,1),(1,1))
    # is reproduced exactly by dual_from_parameters with U = theta_B,
    # V = theta_Phi^*
    f = scalar_frame([1.0, 1.0], [1.0, 1.0])
    grid = [(-2 + 0.25 * k) for k in range(17)]
    reproduced = 0
    refused = 0
    for b1, p1 in itertools.product(grid, repeat=2):
        b2, p2 = 1.0 - b1, 1.0 - p1
        if not (-2 <= b2 <= 2 and -2 <= p2 <= 2):
            continue
        s_dual = p1 * b1 + p2 * b2  # frame operator of the candidate pair
        u = np.array([[b1], [b2]])
        v = np.array([[p1, p2]])  # theta_Phi^* for real phi
        if abs(s_dual) < TOL.invert_eps:
            with pytest.raises(NotInvertibleError):
                dual_from_parameters(f, u, v)
            refused += 1
            continue
        dual = dual_from_parameters(f, u, v)
        assert_allclose(dual.A[:, 0, 0], [b1, b2], atol=1e-12)
        assert_allclose(dual.Psi[:, 0, 0], [p1, p2], atol=1e-12)
        assert is_dual(f, dual).valid
        reproduced += 1
    assert reproduced > 100
    assert refused > 0


def test_orthogonality_cases(rng):
    disjoint_a = scalar_frame([1.0, 0.0], [1.0, 0.0])
    disjoint_b = scalar_frame([0.0, 1.0], [0.0, 1.0])
    assert is_orthogonal(disjoint_a, disjoint_b).orthogonal
    f = random_weak_frame(2, 1, 4, rng)
    assert not is_orthogonal(f, f).orthogonal  # mixed sum is S != 0


def _orthogonal_parseval_pair(d, d0, n, rng):
    # block-disjoint supports in index space make all mixed sums vanish
    q1, _ = np.linalg.qr(random_op(n * d0, d, rng))
    q2, _ = np.linalg.qr(random_op(n * d0, d, rng))
    zeros = np.zeros((n, d0, d))
    a1 = q1.reshape(n, d0, d)
    a2 = q2.reshape(n, d0, d)
    f = WeakOvf(np.concatenate([a1, zeros]), np.concatenate([a1, zeros]), TOL)
    g = WeakOvf(np.concatenate([zeros, a2]), np.concatenate([zeros, a2]), TOL)
    return f, g


def test_interpolate_identity_coefficients(rng):
    f, g = _orthogonal_parseval_pair(2, 1, 3, rng)
    eye, zero = np.eye(2), np.zeros((2, 2))
    out = interpolate(f, g, eye, zero, eye, zero)
    assert_allclose(out.A, f.A, atol=1e-15)
    assert_allclose(out.Psi, f.Psi, atol=1e-15)


def test_interpolate_scalar_half_half(rng):
    f, g = _orthogonal_parseval_pair(2, 1, 3, rng)
    c = (2 ** -0.5) * np.eye(2)
    out = interpolate(f, g, c, c, c, c)  # conj(c)e + conj(d)f = 1/2 + 1/2 = 1
    assert classify(out).is_parseval


def test_interpolate_random_coefficients(rng):
    f, g = _orthogonal_parseval_pair(2, 1, 3, rng)
    c = random_op(2, 2, rng) + 2 * np.eye(2)
    e = adjoint(np.linalg.inv(c))  # C^*E = I
    out = interpolate(f, g, c, np.zeros((2, 2)), e, np.zeros((2, 2)))
    assert classify(out).is_parseval


def test_interpolate_preconditions(rng):
    f, g = _orthogonal_parseval_pair(2, 1, 3, rng)
    eye, zero = np.eye(2), np.zeros((2, 2))
    with pytest.raises(PreconditionFailedError) as err:
        interpolate(f, g, eye, zero, 2 * eye, zero)
    assert err.value.reason == "CoefficientIdentity"
    weak = random_weak_frame(2, 1, 6, rng)
    with pytest.raises(PreconditionFailedError):
        interpolate(weak, weak, eye, zero, eye, zero)


def test_direct_sum_frames(rng):
    f, g = _orthogonal_parseval_pair(2, 1, 3, rng)
    out = direct_sum_frames(f, g)
    assert out.d == 4
    report = classify(out)
    assert report.is_parseval
    # frame operator splits into blocks; off-diagonal blocks vanish
    s = report.S
    assert spectral_norm(s[:2, 2:]) <= 1e-10
    assert spectral_norm(s[2:, :2]) <= 1e-10
    assert_allclose(s[:2, :2], frame_operator(f), atol=1e-12)
    assert_allclose(s[2:, 2:], frame_operator(g), atol=1e-12)


def test_direct_sum_requires_orthogonality(rng):
    f = random_weak_frame(2, 1, 4, rng)
    with pytest.raises(PreconditionFailedError):
        direct_sum_frames(f, f)
