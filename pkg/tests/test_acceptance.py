"""Acceptance criteria, one check per criterion.

Each check returns ``(passed, detail)``; the pytest wrappers assert on it and
the terminal summary prints one PASS/FAIL line per criterion. Running this
file directly prints the same lines without pytest.
"""

import json
import math
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from iwasawa_lab import cli
from iwasawa_lab import closed_forms as cf
from iwasawa_lab import inequalities as ineq
from iwasawa_lab import integrators as it
from iwasawa_lab.checks import closed_form_errors
from iwasawa_lab.iwasawa import cocycle_check
from iwasawa_lab.randmat import random_nstar, random_sl, random_unitary, random_vcol

FIELDS = ("R", "C")
RADII = [10.0, 1e2, 1e3, 1e4]
SHELL_SAMPLES = 1_000_000
SEED = 1


def _scan(group, domain="full", **kw):
    return it.radial_scan(it.IntegrandSpec(group, domain, **kw), RADII, SHELL_SAMPLES, SEED)


def _scan_detail(rep):
    inc = ", ".join(f"{x:.4g}" for x in rep.increments)
    return (
        f"{rep.classification}; increments [{inc}], last/total {rep.increments[-1] / rep.estimates[-1]:.3f}, "
        f"slope {rep.slope_vs_logR:.4g} +- {rep.slope_stderr:.2g}"
    )


def check_1():
    t0 = time.perf_counter()
    errs = closed_form_errors(np.random.default_rng(SEED), 1000)
    elapsed = time.perf_counter() - t0
    name, worst = max(((k, max(v)) for k, v in errs.items()), key=lambda kv: kv[1])
    return worst < 1e-8 and elapsed < 30, f"worst relative error {worst:.2e} ({name}); {elapsed:.1f} s"


def check_2():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for n in (3, 4, 5):
        for field in FIELDS:
            for _ in range(10_000):
                worst = max(worst, cocycle_check(random_nstar(rng, n, field, 2.0), random_vcol(rng, n, field, 2.0)))
    return worst < 1e-8, f"worst residual {worst:.2e} over 6 x 10^4 pairs"


def check_3():
    rng = np.random.default_rng(SEED)
    det_w = mod_w = inv_w = 0.0
    for s in range(10_000):
        n, field = 2 + s % 7, FIELDS[(s // 7) % 2]
        det_w = max(det_w, cf.det_block_residual(random_sl(rng, n, field)))
        r = cf.unitary_block_residuals(random_unitary(rng, n, field))
        mod_w, inv_w = max(mod_w, r.modulus), max(inv_w, r.inverse)
    worst = max(det_w, mod_w, inv_w)
    return worst < 1e-8, f"det {det_w:.2e}, modulus {mod_w:.2e}, inverse {inv_w:.2e}"


def check_4():
    bad = []
    for k, name in enumerate(ineq.FUZZ_TARGETS):
        for sampling in ineq.SAMPLINGS:
            r = ineq.fuzz(name, 1_000_000, SEED, sampling)
            if r.violations:
                bad.append(f"{name}/{sampling}: {r.violations}")
    n = len(ineq.FUZZ_TARGETS) * len(ineq.SAMPLINGS)
    return not bad, f"{n} target/sampling pairs at 10^6 samples" + (f"; violations {bad}" if bad else ", 0 violations")


def check_5():
    t0 = time.perf_counter()
    spec = it.IntegrandSpec(cf.GroupSpec("sl", 2))
    parts, ok = [], True
    for R in (1.0, 10.0, 100.0):
        r = it.mc_estimate(spec, R, 1_000_000, SEED)
        z = (r.mean - 2 * math.asinh(R)) / r.stderr
        ok &= abs(z) < 3
        parts.append(f"R={R:g} z={z:+.2f}")
    elapsed = time.perf_counter() - t0
    return ok and elapsed < 10, ", ".join(parts) + f"; {elapsed:.1f} s"


def check_6():
    parts, ok = [], True
    for n in (2, 3):
        rep = _scan(cf.GroupSpec("sl", n))
        ok &= rep.classification == "log_divergent" and rep.slope_vs_logR > 3 * rep.slope_stderr
        parts.append(f"SL({n}): {_scan_detail(rep)}")
    return ok, " | ".join(parts)


def check_7():
    rep = _scan(cf.GroupSpec("sl", 3), log_power=-3.5)
    rule = it.increment_rule(rep.estimates, rep.increments, rep.increment_stderrs)
    return rep.classification == "convergent" and rule, _scan_detail(rep)


def check_8():
    parts, ok = [], True
    for alpha in (0.0, 0.5):
        rep = _scan(cf.GroupSpec("sl", 4), "commutator", alpha=alpha, log_power=2.0)
        rule = it.increment_rule(rep.estimates, rep.increments, rep.increment_stderrs)
        ok &= rep.classification == "convergent" and rule
        parts.append(f"alpha={alpha}: {_scan_detail(rep)}")
    return ok, " | ".join(parts)


def check_9():
    rep = ineq.psi_decay_check([1.0, 1.0], 0.5, 0.5, 1_000_000, SEED)
    d = rep.details
    return rep.all_hold, f"slope {d['slope']:.4f} vs limit {rep.lhs:.4f}"


def check_10():
    ll = it.log_lemma_1d(1.0, "R")
    ok = math.isfinite(ll.total) and ll.tail <= ll.tail_bound + 1e-6
    parts = [f"log lemma tail {ll.tail:.6f} <= {ll.tail_bound:.6f}"]
    for a in (1.0, 10.0, 100.0):
        b = it.beta_decay_1d(a, 0.5, "R")
        ok &= math.isfinite(b.estimate) and b.estimate <= b.bound + 1e-6
        parts.append(f"beta a={a:g}: {b.estimate:.4f} <= {b.bound:.4f}")
    return ok, "; ".join(parts)


def check_11():
    argv = ["scan", "--group", "sl", "--n", "2", "--samples", str(SHELL_SAMPLES), "--seed", str(SEED)]
    with tempfile.TemporaryDirectory() as tmp:
        blobs = []
        for k in range(2):
            path = Path(tmp) / f"r{k}.json"
            if cli.main(argv + ["--out", str(path)]) != 0:
                return False, "scan command failed"
            blobs.append(path.read_bytes())
        csvs = []
        for k in range(2):
            path = Path(tmp) / f"r{k}.csv"
            cli.main(argv + ["--format", "csv", "--out", str(path)])
            csvs.append(path.read_bytes())
    same_json, same_csv = blobs[0] == blobs[1], csvs[0] == csvs[1]
    fuzz_same = ineq.fuzz("so_split", 100_000, SEED, "logscale") == ineq.fuzz("so_split", 100_000, SEED, "logscale")
    psi_same = ineq.psi_integral([1.0, 1.0], 0.5, 100_000, SEED) == ineq.psi_integral([1.0, 1.0], 0.5, 100_000, SEED)
    ok = same_json and same_csv and fuzz_same and psi_same
    return ok, f"json identical {same_json}, csv identical {same_csv}, fuzz {fuzz_same}, psi {psi_same}"


CHECKS = {k: globals()[f"check_{k}"] for k in range(1, 12)}


@pytest.mark.parametrize("number", list(CHECKS))
def test_criterion(number, acceptance_log):
    passed, detail = CHECKS[number]()
    acceptance_log.append(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
    assert passed, detail


if __name__ == "__main__":
    for k, check in CHECKS.items():
        passed, detail = check()
        print(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}", flush=True)
