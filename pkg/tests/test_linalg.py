import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from iwasawa_lab.linalg import (
    NotPositiveDefiniteError,
    SingularMatrixError,
    expm_series,
    gram_norm,
    is_unitary,
    ldl_unipotent_factor,
    singular_values,
)
from iwasawa_lab.randmat import gaussian, random_sl, random_spd


def test_ldl_identity():
    L, d = ldl_unipotent_factor(np.eye(4))
    assert np.array_equal(L, np.eye(4))
    assert np.array_equal(d, np.ones(4))


def test_ldl_hand_example():
    L, d = ldl_unipotent_factor(np.array([[2.0, 1.0], [1.0, 1.0]]))
    np.testing.assert_allclose(L, [[1, 0], [0.5, 1]], atol=1e-15)
    np.testing.assert_allclose(d, [2, 0.5], rtol=1e-15)


@pytest.mark.parametrize("field", ["R", "C"])
def test_ldl_reconstruction_random(rng, field):
    worst = 0.0
    for s in range(1000):
        n = 1 + s % 8
        m = random_spd(rng, n, field)
        L, d = ldl_unipotent_factor(m)
        assert np.all(d > 0)
        assert np.allclose(np.diag(L), 1.0)
        worst = max(worst, np.max(np.abs(L @ np.diag(d) @ L.conj().T - m)) / np.max(np.abs(m)))
    assert worst < 1e-9


def test_ldl_rejects_indefinite_and_non_hermitian():
    with pytest.raises(NotPositiveDefiniteError, match="not positive definite"):
        ldl_unipotent_factor(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(ValueError):
        ldl_unipotent_factor(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_gram_norm_examples(rng):
    assert gram_norm([np.array([1.0, 0, 0]), np.array([0, 1.0, 0])]) == pytest.approx(1.0)
    assert gram_norm([np.array([3.0, 4.0])]) == pytest.approx(5.0)
    m = rng.standard_normal((4, 4))
    assert gram_norm(m) == pytest.approx(abs(np.linalg.det(m)), rel=1e-12)
    assert gram_norm([np.array([1.0, 2.0]), np.array([2.0, 4.0])]) == 0.0


@given(st.integers(2, 6), st.integers(1, 5), st.sampled_from("RC"), st.integers(0, 2**32 - 1))
def test_gram_norm_orthogonal_append(n, k, field, seed):
    k = min(k, n - 1)
    g = np.random.default_rng(seed)
    cols = gaussian(g, (n, k), field)
    # a vector orthogonal to span(cols): project a random vector off it
    u = gaussian(g, n, field)
    q, _ = np.linalg.qr(cols)
    u = u - q @ (q.conj().T @ u)
    lhs = gram_norm(np.column_stack([cols, u]))
    rhs = gram_norm(cols) * np.linalg.norm(u)
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_singular_values_examples(rng):
    np.testing.assert_allclose(singular_values(np.eye(3)), np.ones(3))
    np.testing.assert_allclose(singular_values(np.diag([0.5, 2.0])), [2.0, 0.5])
    g = random_sl(rng, 3)
    assert np.prod(singular_values(g)) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(SingularMatrixError):
        singular_values(np.array([[1.0, 2.0], [2.0, 4.0]]))


@given(st.integers(2, 6), st.sampled_from("RC"), st.integers(0, 2**32 - 1))
def test_singular_values_of_inverse_are_reciprocal(n, field, seed):
    g = random_sl(np.random.default_rng(seed), n, field)
    s = singular_values(g)
    s_inv = singular_values(np.linalg.inv(g))
    np.testing.assert_allclose(np.sort(1.0 / s), np.sort(s_inv), rtol=1e-8)


def test_expm_series_nilpotent_is_exact():
    x = np.zeros((4, 4))
    x[0, 1], x[1, 2], x[2, 3] = 1.0, 2.0, 3.0
    e = expm_series(x)
    expected = np.eye(4) + x + x @ x / 2 + x @ x @ x / 6
    assert np.array_equal(e, expected)


@given(st.integers(2, 6), st.floats(0.01, 4.0), st.integers(0, 2**32 - 1))
def test_expm_series_matches_scipy(n, scale, seed):
    x = scale * np.random.default_rng(seed).standard_normal((n, n))
    ref = scipy.linalg.expm(x)
    assert np.max(np.abs(expm_series(x) - ref)) <= 1e-11 * np.max(np.abs(ref))


def test_is_unitary():
    th = 0.3
    assert is_unitary(np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]]))
    assert not is_unitary(np.diag([1.0, 2.0]))
