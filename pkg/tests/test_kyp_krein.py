import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from whfactor.errors import DimensionMismatch, NormNotStrictlyContractive, NotSelfadjoint, SingularGram
from whfactor.generate import random_contractive_system
from whfactor.kyp_krein import (
    KreinSpace,
    KypCertificate,
    bicontraction_margins,
    inertia,
    inertia_check,
    krein_adjoint,
    solve_kyp,
    verify_adjoint_kyp,
    verify_kyp,
)
from whfactor.realization import StateSpaceSystem, dichotomy_info
from whfactor.wiener_hopf import a_cross

seeds = st.integers(min_value=0, max_value=2**32 - 1)


# ---------------------------------------------------------------- verify_kyp


def test_verify_kyp_stable_scalar(sys_shift):
    # gap matrix diag(H - 0.25, 1 - H)
    assert verify_kyp(sys_shift, [[0.5]]) == pytest.approx(0.25)


def test_verify_kyp_antistable_scalar(sys_antistable):
    gap = np.array([[2.0, 0.8], [0.8, 1.16]])
    expected = (3.16 - np.sqrt(3.16**2 - 4 * 1.68)) / 2
    assert np.linalg.det(gap) == pytest.approx(1.68)
    assert verify_kyp(sys_antistable, [[-1.0]]) == pytest.approx(expected)


def test_verify_kyp_too_small_h(sys_shift):
    assert verify_kyp(sys_shift, [[0.1]]) == pytest.approx(-0.15)


def test_verify_kyp_rejects_nonselfadjoint():
    sys = StateSpaceSystem(np.zeros((2, 2)), np.eye(2), 0.5 * np.eye(2), np.zeros((2, 2)))
    with pytest.raises(NotSelfadjoint):
        verify_kyp(sys, [[0.5, 0.1], [0.0, 0.5]])


def test_verify_kyp_dimension(sys_shift):
    with pytest.raises(DimensionMismatch):
        verify_kyp(sys_shift, np.eye(2))


# ---------------------------------------------------------------- verify_adjoint_kyp


def test_verify_adjoint_stable_scalar(sys_shift):
    # diag(2, 1) - S diag(2, 1) S* = diag(1, 0.5)
    assert verify_adjoint_kyp(sys_shift, [[0.5]]) == pytest.approx(0.5)


def test_verify_adjoint_antistable_scalar(sys_antistable):
    gap = np.array([[2.84, 2.0], [2.0, 2.0]])
    expected = np.linalg.eigvalsh(gap)[0]
    assert expected > 0
    assert verify_adjoint_kyp(sys_antistable, [[-1.0]]) == pytest.approx(expected)


def test_verify_adjoint_singular(sys_shift):
    with pytest.raises(SingularGram):
        verify_adjoint_kyp(sys_shift, [[0.0]])


@given(st.floats(min_value=0.26, max_value=0.99))
def test_adjoint_follows_from_kyp_scalar(h):
    sys = StateSpaceSystem(0.0, 1.0, 0.5, 0.0)
    assert verify_kyp(sys, [[h]]) > 0
    assert verify_adjoint_kyp(sys, [[h]]) > 0


# ---------------------------------------------------------------- solve_kyp


def test_solve_kyp_stable_scalar(sys_shift):
    cert = solve_kyp(sys_shift)
    h = cert.H[0, 0].real
    assert 0.25 < h < 1.0
    assert cert.inertia == (1, 0)
    assert cert.margin > 0 and cert.adjoint_margin > 0


def test_solve_kyp_antistable_scalar(sys_antistable):
    cert = solve_kyp(sys_antistable)
    assert cert.H[0, 0].real < 0
    assert cert.inertia == (0, 1)
    assert verify_kyp(sys_antistable, cert.H) > 0


def test_solve_kyp_norm_one():
    with pytest.raises(NormNotStrictlyContractive):
        solve_kyp(StateSpaceSystem(0.0, 1.0, 1.0, 0.0))


def test_solve_kyp_static():
    cert = solve_kyp(StateSpaceSystem.static(0.5 * np.eye(2)))
    assert cert.H.shape == (0, 0)
    assert cert.margin == pytest.approx(0.75)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_bounded_real_lemma_properties(seed):
    _, sys = random_contractive_system(np.random.default_rng(seed), max_states=10)
    cert = solve_kyp(sys)
    assert verify_kyp(sys, cert.H) > 0
    assert verify_adjoint_kyp(sys, cert.H) > 0
    assert inertia_check(cert, dichotomy_info(sys.A))
    assert min(bicontraction_margins(sys.A, cert.H)) > 0
    assert min(bicontraction_margins(a_cross(sys), cert.H)) > 0


# ---------------------------------------------------------------- inertia


def test_inertia_counts():
    assert inertia(np.diag([1.0, -2.0, 3.0])) == (2, 1)
    with pytest.raises(SingularGram):
        inertia(np.diag([1.0, 0.0]))


def test_inertia_check_cases():
    stable = dichotomy_info(np.array([[0.0]]))
    anti = dichotomy_info(np.array([[2.0]]))
    pos = KypCertificate(np.array([[0.5]]), 0.1, 0.1, (1, 0))
    neg = KypCertificate(np.array([[-1.0]]), 0.1, 0.1, (0, 1))
    assert inertia_check(pos, stable)
    assert inertia_check(neg, anti)
    assert not inertia_check(pos, anti)


# ---------------------------------------------------------------- Krein geometry


def test_krein_inner_product():
    K = KreinSpace(np.diag([1.0, -1.0]))
    assert K.inner([1, 0], [1, 0]) == 1
    assert K.inner([0, 1], [0, 1]) == -1
    assert K.inner([1, 1], [1, 1]) == 0


def test_krein_adjoint_examples(rng):
    S = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert_allclose(krein_adjoint(S, np.eye(3)), S.conj().T)
    assert_allclose(krein_adjoint(np.eye(2), np.diag([1.0, -1.0])), np.eye(2))
    assert_allclose(krein_adjoint(np.diag([2.0, 0.5]), np.diag([1.0, -1.0])), np.diag([2.0, 0.5]))


def test_krein_adjoint_singular():
    with pytest.raises(SingularGram):
        krein_adjoint(np.eye(2), np.diag([1.0, 0.0]))


@settings(max_examples=40)
@given(seeds, st.integers(1, 6))
def test_krein_adjoint_is_involution(seed, n):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n))
    H = X + X.T + np.diag(rng.choice([-1.0, 1.0], n) * (1 + rng.random(n)) * n)
    S = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    twice = krein_adjoint(krein_adjoint(S, H), H)
    assert np.linalg.norm(twice - S) <= 1e-12 * np.linalg.cond(H) ** 2 * max(1, np.linalg.norm(S))


def test_bicontraction_examples(sys_shift):
    assert bicontraction_margins(np.zeros((2, 2)), np.eye(2)) == pytest.approx((1.0, 1.0))
    assert_allclose(a_cross(sys_shift), [[-0.5]])
    cert = solve_kyp(sys_shift)
    h = cert.H[0, 0].real
    m1, m2 = bicontraction_margins(a_cross(sys_shift), cert.H)
    assert m1 == pytest.approx(0.75 * h) and m2 == pytest.approx(0.75 / h)
    assert bicontraction_margins([[-0.5]], [[0.5]]) == pytest.approx((0.375, 1.5))
    assert bicontraction_margins([[2.0]], [[1.0]])[0] < 0
