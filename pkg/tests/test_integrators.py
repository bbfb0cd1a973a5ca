import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iwasawa_lab import integrators as it
from iwasawa_lab.closed_forms import GroupSpec, RankOneParams

SL = lambda n, f="R": GroupSpec("sl", n, f)  # noqa: E731

# reference values from independent quadratures (substitution x = sinh t, mpmath)
LOG_LEMMA_REAL = {0.1: 11.0446983973033957, 0.5: 2.96687923043038347, 1.0: 1.88928845099357119}
LOG_LEMMA_REAL_HEAD = {0.1: 1.930753448265974, 0.5: 1.710999975068716, 1.0: 1.496137205343864}
# closed forms at beta = 1/2: R via 2F1(1/2, 1/4; 3/2; -a^2), C elementary
BETA_HALF = {
    "R": {1: 1.8749795014938724, 10: 1.0263342996072839, 100: 0.37604052854934004},
    "C": {1: 2.855887130123107, 10: 1.2926460882088868, 100: 0.41849155699201364},
}


def test_commutator_coordinate_counts():
    assert [len(it.commutator_coords(n)) for n in (3, 4, 5)] == [1, 3, 6]
    with pytest.raises(ValueError):
        it.commutator_coords(2)


def test_spec_dims():
    assert it.IntegrandSpec(SL(3)).dim == 3
    assert it.IntegrandSpec(SL(3, "C")).dim == 6
    assert it.IntegrandSpec(SL(4), "commutator").dim == 3
    assert it.IntegrandSpec(SL(4), "vslice").dim == 3
    assert it.IntegrandSpec(GroupSpec("sp4"), "commutator").dim == 2
    assert it.IntegrandSpec(GroupSpec("so", 3), "commutator").dim == 4
    assert it.IntegrandSpec(GroupSpec("rank1", rank_one=RankOneParams(2, 1)), "full").dim == 3


def test_spec_rejects_bad_combinations():
    with pytest.raises(ValueError):
        it.IntegrandSpec(SL(3), "nope")
    with pytest.raises(ValueError):
        it.IntegrandSpec(SL(3), alpha=1.0)
    with pytest.raises(ValueError):
        it.IntegrandSpec(GroupSpec("sp4"), alpha=0.5)
    with pytest.raises(ValueError):
        it.IntegrandSpec(GroupSpec("so", 2), "full")
    with pytest.raises(ValueError):
        it.IntegrandSpec(SL(2), "commutator")


def test_integrand_examples():
    spec = it.IntegrandSpec(SL(4), "commutator")
    assert it.evaluate_integrand(spec, np.zeros(3)) == pytest.approx(1.0)
    assert it.evaluate_integrand(spec, np.array([1.0, 0.0, 0.0])) == pytest.approx(0.5)
    s2 = it.IntegrandSpec(SL(2))
    assert it.evaluate_integrand(s2, np.array([3.0])) == pytest.approx(10**-0.5)
    with pytest.raises(ValueError):
        it.evaluate_integrand(spec, np.zeros(4))


DUAL_SPECS = [
    it.IntegrandSpec(SL(n, f), d, rc, al, lp)
    for n in (2, 3, 4, 5)
    for f in ("R", "C")
    for d in ("full", "commutator", "vslice")
    if not (n == 2 and d == "commutator")
    for rc, al, lp in ((-1.0, 0.0, 0.0), (-1.0, 0.5, 2.0))
] + [
    it.IntegrandSpec(GroupSpec("sp4", field=f), d) for f in ("R", "C") for d in ("full", "commutator")
] + [it.IntegrandSpec(GroupSpec("so", n), "commutator", log_power=1.0) for n in (1, 2, 3, 4)]


@pytest.mark.parametrize("spec", DUAL_SPECS, ids=lambda s: f"{s.group.tag}{s.group.n}{s.group.field}-{s.domain}-{s.alpha}")
def test_closed_path_matches_oracle(spec, rng):
    # log-uniform magnitudes with random signs; the oracle's smallest pivot
    # loses relative accuracy for large entries, which the Lambda factor sees
    top = 30.0 if spec.alpha else 1e3
    x = rng.choice([-1, 1], (10_000, spec.dim)) * np.expm1(rng.uniform(0, math.log1p(top), (10_000, spec.dim)))
    a = it.log_integrand(spec, x, "closed")
    b = it.log_integrand(spec, x, "oracle")
    # absolute error in log = relative error in the integrand
    assert np.max(np.abs(a - b)) < 1e-8


def test_closed_path_matches_oracle_bulk(rng):
    spec = it.IntegrandSpec(SL(4), "commutator", alpha=0.5, log_power=2.0)
    x = rng.uniform(-100, 100, (10_000, 3))
    np.testing.assert_allclose(it.log_integrand(spec, x), it.log_integrand(spec, x, "oracle"), rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("field", ["R", "C"])
def test_inverse_last_column_matches_solve(field, rng):
    spec = it.IntegrandSpec(SL(5, field))
    x = rng.uniform(-1e3, 1e3, (200, spec.dim))
    v = it.build_element(spec, x)
    e = np.zeros((200, 5, 1), dtype=v.dtype)
    e[:, -1] = 1
    ref = np.log(np.linalg.norm(np.linalg.solve(v, e)[..., 0], axis=-1))
    np.testing.assert_allclose(it.log_inverse_last_column(v), ref, rtol=1e-12)


def test_rank_one_integrand():
    p = RankOneParams(2, 1, 1.0)
    spec = it.IntegrandSpec(GroupSpec("rank1", rank_one=p), "commutator")
    # (1 + 2 * 4)^{1/2 + 1/2}
    assert it.evaluate_integrand(spec, np.array([2.0])) == pytest.approx(1 / 9)


def test_constant_integrand_box_volume():
    r = it.mc_integrate(lambda x: np.zeros(len(x)), 1, 0.0, 1.0, 10_000, 1)
    assert r.mean == pytest.approx(2.0) and r.stderr < 1e-12
    r = it.mc_integrate(lambda x: np.zeros(len(x)), 2, 1.0, 2.0, 100_000, 1)
    assert abs(r.mean - 12.0) < 4 * r.stderr


def test_sl2_box_integral():
    spec = it.IntegrandSpec(SL(2))
    r = it.mc_estimate(spec, 10.0, 200_000, 7)
    assert abs(r.mean - 2 * math.asinh(10.0)) < 3 * r.stderr


@pytest.mark.parametrize("kind", ["uniform", "radial", "cauchy", "pareto"])
def test_proposals_unbiased(kind):
    # int over 1 < |x|_inf <= 5 in R^2 of (1 + |x|^2)^{-1}
    log_f = lambda x: -np.log1p(np.sum(x * x, axis=1))  # noqa: E731
    ref = it.mc_integrate(log_f, 2, 1.0, 5.0, 2_000_000, 99, "uniform", stream=7)
    r = it.mc_integrate(log_f, 2, 1.0, 5.0, 200_000, 3, kind)
    assert abs(r.mean - ref.mean) < 4 * math.hypot(r.stderr, ref.stderr)


def test_worker_count_does_not_change_result():
    spec = it.IntegrandSpec(SL(3))
    a = it.mc_estimate(spec, 50.0, 200_000, 5, workers=1)
    b = it.mc_estimate(spec, 50.0, 200_000, 5, workers=4)
    assert a == b


def test_mc_rejects_bad_arguments():
    spec = it.IntegrandSpec(SL(2))
    with pytest.raises(ValueError):
        it.mc_estimate(spec, 10.0, 10, 1)
    with pytest.raises(ValueError):
        it.mc_estimate(spec, -1.0, 10_000, 1)
    with pytest.raises(ValueError):
        it.mc_integrate(lambda x: x[:, 0], 1, 0.0, math.inf, 1000, 1, "radial")
    with pytest.raises(ValueError):
        it.Proposal("gauss")


def test_scan_estimates_nondecreasing():
    rep = it.radial_scan(it.IntegrandSpec(SL(3)), [10, 100, 1000], 100_000, 2)
    assert all(b >= a for a, b in zip(rep.estimates, rep.estimates[1:]))
    assert rep.cumulative_samples == [100_000, 200_000, 300_000]
    assert len(rep.csv_rows()) == 3


@pytest.mark.parametrize("n", [2, 3])
def test_undamped_scan_log_lower_bound(n):
    rep = it.radial_scan(it.IntegrandSpec(SL(n)), [10, 100, 1000, 1e4], 100_000, 4)
    log_term = [1 + math.log1p(r * r) for r in rep.radii]
    # half the ratio at the smallest radius; the full ratio overshoots because
    # the inner box carries an O(1) constant the log term does not
    c = 0.5 * rep.estimates[0] / log_term[0]
    assert all(e - 2 * se >= c * t for e, se, t in zip(rep.estimates, rep.stderrs, log_term))
    assert all(b >= a - 2 * math.hypot(sa, sb) for a, b, sa, sb in zip(rep.estimates, rep.estimates[1:], rep.stderrs, rep.stderrs[1:]))


def test_scan_report_round_trip():
    rep = it.radial_scan(it.IntegrandSpec(SL(2)), [10, 100, 1000], 20_000, 1)
    d = json.loads(json.dumps(rep.to_dict()))
    assert it.ScanReport.from_dict(d) == rep


def test_scan_rejects_unsorted_radii():
    with pytest.raises(ValueError):
        it.radial_scan(it.IntegrandSpec(SL(2)), [100, 10], 1000, 1)


def _synthetic(radii, f, rel_se=1e-3):
    est = [f(r) for r in radii]
    inc = [est[0]] + list(np.diff(est))
    inc_se = [rel_se * abs(i) for i in inc]
    se = list(np.sqrt(np.cumsum(np.square(inc_se))))
    return radii, est, se, inc, inc_se


RADII = [10.0, 100.0, 1e3, 1e4]


def test_classify_synthetic_convergent():
    label, *_ = it.classify(*_synthetic(RADII, lambda r: 5 - 1 / r))
    assert label == "convergent"


def test_classify_synthetic_log():
    label, slope, *_ = it.classify(*_synthetic(RADII, lambda r: 2 * math.log(r)))
    assert label == "log_divergent" and slope == pytest.approx(2.0)


def test_classify_synthetic_log_squared():
    label, *_ = it.classify(*_synthetic(RADII, lambda r: math.log(r) ** 2))
    assert label == "log_divergent"


def test_classify_synthetic_power():
    label, *_ = it.classify(*_synthetic(RADII, lambda r: r**0.5))
    assert label == "power_divergent"


def test_classify_decaying_but_unresolved_is_inconclusive():
    # increments still large at the last radius but their density decays
    radii, est, se, inc, inc_se = _synthetic(RADII, lambda r: 100 - 100 / r**0.2)
    assert it.increment_rule(est, inc, inc_se) is False
    label, *_ = it.classify(radii, est, se, inc, inc_se)
    assert label in ("convergent", "inconclusive")


@settings(max_examples=30)
@given(st.floats(0.01, 3.0))
def test_increment_rule_needs_small_last_shell(c):
    radii, est, se, inc, inc_se = _synthetic(RADII, lambda r: c * math.log(r))
    assert not it.increment_rule(est, inc, inc_se)


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_log_lemma_real(eps):
    r = it.log_lemma_1d(eps, "R")
    assert r.total == pytest.approx(LOG_LEMMA_REAL[eps], rel=1e-9)
    assert r.head == pytest.approx(LOG_LEMMA_REAL_HEAD[eps], rel=1e-9)
    assert r.tail <= r.tail_bound


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_log_lemma_complex(eps):
    r = it.log_lemma_1d(eps, "C")
    assert r.total == pytest.approx(math.pi / eps, rel=1e-9)
    assert r.tail <= r.tail_bound


def test_log_lemma_rejects_nonpositive():
    with pytest.raises(ValueError):
        it.log_lemma_1d(0.0)


@pytest.mark.parametrize("field", ["R", "C"])
@pytest.mark.parametrize("a", [1, 10, 100])
def test_beta_decay_reference(field, a):
    r = it.beta_decay_1d(a, 0.5, field)
    assert r.estimate == pytest.approx(BETA_HALF[field][a], rel=1e-10)
    assert r.estimate <= r.bound


@given(st.floats(1.0, 1e6), st.floats(0.01, 0.99), st.sampled_from("RC"))
def test_beta_bound_holds(a, beta, field):
    r = it.beta_decay_1d(a, beta, field)
    assert r.estimate <= r.bound * (1 + 1e-12)
