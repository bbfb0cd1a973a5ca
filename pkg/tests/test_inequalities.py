import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iwasawa_lab import inequalities as ineq

nonneg = st.floats(0, 1e12)
vec = st.lists(nonneg, min_size=1, max_size=6)


def test_report_semantics():
    r = ineq.BoundReport(1.0, 1.0 + 1e-13)
    assert r.holds and r.violations == 0
    r = ineq.BoundReport(1.0, 1.0 + 1e-9)
    assert not r.holds and r.violations == 1
    assert r.margin == pytest.approx(-1e-9)


def test_power_product_examples():
    r = ineq.power_product_bound([1.0, 1.0], [1.0, 1.0])
    assert math.exp(r.lhs) == pytest.approx(9.0)
    assert math.exp(r.rhs) == pytest.approx(4.0)
    r = ineq.power_product_bound([0.0, 0.0, 0.0], [1.0, 2.0, 0.5])
    assert r.margin == 0.0 and r.holds
    with pytest.raises(ValueError):
        ineq.power_product_bound([-1.0], [1.0])
    with pytest.raises(ValueError):
        ineq.power_product_bound([1.0, 2.0], [1.0])


@pytest.mark.parametrize(
    "A, a, equal",
    [
        ([5.0, 0.0, 0.0], [1.0, 2.0, 3.0], False),
        ([5.0, 0.0, 0.0], [1.0, 0.0, 0.0], True),
        ([0.0, 5.0, 0.0], [0.0, 2.0, 0.0], True),
        ([0.0, 0.0, 0.0], [1.0, 1.0, 1.0], True),
        ([1.0, 1.0], [1.0, 0.0], False),
        ([1.0, 1.0], [0.0, 0.0], True),
        ([3.0, 4.0], [1.0, 1.0], False),
    ],
)
def test_power_product_equality_cases(A, a, equal):
    # equality iff every index with a_i > 0 carries all of sum(A)
    r = ineq.power_product_bound(A, a)
    assert (abs(r.margin) < 1e-14) == equal


@given(vec.flatmap(lambda A: st.tuples(st.just(A), st.lists(st.floats(0, 5), min_size=len(A), max_size=len(A)))))
def test_power_product_holds(pair):
    A, a = pair
    assert ineq.power_product_bound(A, a).holds


def test_log_sum_examples():
    hi, lo = ineq.log_sum_sandwich([0.0, 0.0])
    assert hi.margin == 0 and lo.margin == 0
    hi, lo = ineq.log_sum_sandwich([math.e - 1])
    for r in (hi, lo):
        assert r.lhs == pytest.approx(1.0) and r.rhs == pytest.approx(1.0)


@given(vec)
def test_log_sum_sandwich_holds(A):
    hi, lo = ineq.log_sum_sandwich(A)
    assert hi.holds and lo.holds


def test_epsilon_delta_examples():
    assert ineq.epsilon_delta_split(0.0, 0.0, 3, 1 / 3, 1 / 6).margin == 0.0
    r = ineq.epsilon_delta_split(1.0, 0.0, 1, 1 / 3, 1 / 2)
    assert math.exp(r.lhs) == pytest.approx(8.0)
    assert math.exp(r.rhs) == pytest.approx(2 ** (2 / 3 + 1 / 2))
    with pytest.raises(ValueError):
        ineq.epsilon_delta_split(1.0, 1.0, 2, 1.0, 0.5)


@given(st.floats(0, 1e200), st.floats(0, 1e200), st.integers(1, 6))
def test_so_split_holds(s, z2, n):
    assert ineq.so_split_bound(s, z2, n).holds


@given(st.floats(-1e100, 1e100), st.floats(-1e100, 1e100), st.floats(-1e100, 1e100))
def test_sl4_7_6_holds(x2, x3, x5):
    assert ineq.sl4_commutator_bound(x2, x3, x5).holds


@given(st.floats(-1e100, 1e100), st.floats(-1e100, 1e100), st.floats(-1e100, 1e100), st.floats(-1e100, 1e100))
def test_sp4_bound_holds(a, b, c, d):
    assert ineq.sp4_commutator_bound(a, c).holds
    assert ineq.sp4_commutator_bound(a + 1j * b, c + 1j * d).holds


@given(st.integers(1, 4), st.floats(0, 0.99), st.integers(0, 2**32 - 1))
def test_psi_lower_bound(m, alpha, seed):
    x = np.random.default_rng(seed).uniform(-1e3, 1e3, (50, m))
    assert ineq.psi_lower_bound(x, alpha).all_hold


@pytest.mark.parametrize("sampling", ineq.SAMPLINGS)
@pytest.mark.parametrize("name", ineq.FUZZ_TARGETS)
def test_fuzz_suites(name, sampling):
    r = ineq.fuzz(name, 100_000, 11, sampling)
    assert r.violations == 0, r


def test_fuzz_is_deterministic():
    a = ineq.fuzz("so_split", 50_000, 3, "logscale")
    b = ineq.fuzz("so_split", 50_000, 3, "logscale")
    assert a == b


def test_psi_integral_u_zero_is_finite():
    r = ineq.psi_integral([0.0, 0.0], 0.5, 100_000, 1)
    assert np.isfinite(r.mean) and r.mean > 0 and r.stderr < 0.05 * r.mean


def test_psi_integral_decreases_along_u():
    small = ineq.psi_integral([1.0, 1.0], 0.5, 200_000, 2)
    large = ineq.psi_integral([100.0, 100.0], 0.5, 200_000, 2)
    assert large.mean < small.mean - 3 * math.hypot(small.stderr, large.stderr)


def test_psi_decay_check_real():
    rep = ineq.psi_decay_check([1.0, 1.0], 0.5, 0.5, 200_000, 5)
    assert rep.all_hold
    assert rep.details["target"] == pytest.approx(-0.125)
    with pytest.raises(ValueError):
        ineq.psi_decay_check([0.0, 0.0], 0.5, 0.5, 1000, 1)


def test_psi_twist_invariance_complex():
    u = np.array([3.0 + 1.0j, -2.0 + 0.5j])
    xi = np.exp(1j * np.array([0.4, 2.1]))
    a = ineq.psi_integral(u, 0.5, 200_000, 9, field="C", stream=0)
    b = ineq.psi_integral(xi * u, 0.5, 200_000, 9, field="C", stream=1)
    assert abs(a.mean - b.mean) < 4 * math.hypot(a.stderr, b.stderr)
