"""Named property suites run by ``iwasawa-lab check``.

Each suite draws its inputs from a seeded generator and returns one
:class:`PropertyResult` per property, with the worst value observed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import closed_forms as cf
from . import inequalities as ineq
from .integrators import beta_decay_1d, log_lemma_1d
from .iwasawa import (
    WeightCombo,
    a_basic_weight,
    a_mu_weight,
    cocycle_check,
    group_norm,
    iwasawa,
    log_weight_on_a,
    reconstruction_error,
    rho_so,
    rho_sp4,
    rho_sl_mu,
)
from .linalg import IDENTITY_TOL, SPECTRAL_TOL, adjoint, expm_series
from .randmat import random_nstar, random_sl, random_unitary, random_vcol

FIELDS = ("R", "C")


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    samples: int
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _below(name, values, threshold, note="") -> PropertyResult:
    worst = float(np.max(values)) if len(values) else 0.0
    return PropertyResult(name, bool(worst < threshold), worst, threshold, len(values), note)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _oracle_log_rho2(g, rho: WeightCombo) -> float:
    return 2.0 * log_weight_on_a(iwasawa(g).a, rho)


# ---------------------------------------------------------------- iwasawa

def suite_iwasawa(samples: int, seed: int, tol: float = IDENTITY_TOL) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    recon, unit, wedge, inv_norm, submult, one_param = [], [], [], [], [], []
    for s in range(samples):
        n = 2 + s % 7
        field = FIELDS[(s // 7) % 2]
        g = random_sl(rng, n, field)
        f = iwasawa(g)
        recon.append(reconstruction_error(g, f))
        unit.append(float(np.max(np.abs(f.k @ adjoint(f.k) - np.eye(n)))))
        i = 1 + s % (n - 1)
        lam = math.exp(-np.sum(np.log(f.a[n - i:])))
        mu = math.exp(np.sum(np.log(f.a[:i])))
        wedge.append(max(_rel(a_basic_weight(g, i), lam), _rel(a_mu_weight(g, i), mu)))
        inv_norm.append(_rel(group_norm(np.linalg.inv(g)), group_norm(g)))
        h = random_sl(rng, n, field)
        submult.append(group_norm(g @ h) / (group_norm(g) * group_norm(h)) - 1.0)
        x = rng.standard_normal((n, n))
        x = (x + x.T) / 2
        x -= np.trace(x) / n * np.eye(n)
        # spectral norm <= 1 keeps exp(3x) well conditioned
        x *= rng.random() / max(np.linalg.norm(x, 2), 1e-12)
        base = group_norm(expm_series(x))
        t = (0.5, 2.0, 3.0)[s % 3]
        one_param.append(_rel(group_norm(expm_series(t * x)), base**t))
    cocycle = []
    for s in range(samples):
        n = 3 + s % 3
        field = FIELDS[(s // 3) % 2]
        cocycle.append(cocycle_check(random_nstar(rng, n, field, 2.0), random_vcol(rng, n, field, 2.0)))
    return [
        _below("reconstruction", recon, tol),
        _below("k_unitary", unit, tol),
        _below("wedge_vs_factor", wedge, SPECTRAL_TOL),
        _below("norm_inverse_symmetric", inv_norm, SPECTRAL_TOL),
        _below("norm_submultiplicative", submult, 1e-9, "worst is max(|xy| / (|x| |y|)) - 1"),
        _below("norm_one_parameter", one_param, 1e-6),
        _below("cocycle", cocycle, 1e-8),
    ]


# ---------------------------------------------------------------- closed forms

def closed_form_errors(rng: np.random.Generator, samples: int) -> dict[str, list[float]]:
    """Relative error of each explicit formula against the Iwasawa oracle
    at ``samples`` points with coordinates uniform in ``[-10, 10]``."""
    err: dict[str, list[float]] = {}

    def coords(shape, field):
        x = rng.uniform(-10, 10, shape)
        return x if field == "R" else x + 1j * rng.uniform(-10, 10, shape)

    rho4 = rho_sl_mu(4)
    err["phi_sl4"] = []
    err["phi_sl4_commutator"] = []
    for _ in range(samples):
        x = coords(6, "R")
        err["phi_sl4"].append(_rel(float(cf.phi_sl4(x)), math.exp(_oracle_log_rho2(cf.sl4_unipotent(x), rho4))))
        x[[0, 3, 5]] = 0
        err["phi_sl4_commutator"].append(
            _rel(float(cf.phi_sl4_commutator(x[1], x[2], x[4])), math.exp(_oracle_log_rho2(cf.sl4_unipotent(x), rho4)))
        )
    for n in (3, 4, 5):
        for field in FIELDS:
            rho = rho_sl_mu(n, field)
            key = f"keyformula_rho2[n={n},{field}]"
            err[key] = []
            for _ in range(samples):
                y = coords(n - 1, field)
                err[key].append(_rel(float(cf.keyformula_rho2(y, field)), math.exp(_oracle_log_rho2(cf.vcol_element(y), rho))))
    for field in FIELDS:
        rho = rho_sp4(field)
        key = f"sp4_commutator_rho[{field}]"
        err[key] = []
        for _ in range(samples):
            y, z = coords(2, field)
            closed = float(cf.sp4_commutator_rho(y, z, field)) ** 2
            err[key].append(_rel(closed, math.exp(_oracle_log_rho2(cf.sp4_element(y, z), rho))))
    for n in (1, 2, 3, 4):
        rho = rho_so(n)
        key = f"so_rho2[n={n}]"
        err[key] = []
        for _ in range(samples):
            y, z = coords(n, "R"), rng.uniform(-10, 10)
            err[key].append(_rel(float(cf.so_rho2(y, z)), math.exp(_oracle_log_rho2(cf.so_element(y, z), rho))))
    return err


def suite_closed_forms(samples: int, seed: int, tol: float = SPECTRAL_TOL) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    out = [_below(name, v, tol) for name, v in closed_form_errors(rng, samples).items()]
    origin = [
        float(cf.phi_sl4(np.zeros(6))),
        float(cf.keyformula_rho2(np.zeros(3))),
        float(cf.sp4_commutator_rho(0.0, 0.0)),
        float(cf.so_rho2(np.zeros(2), 0.0)),
    ]
    out.append(_below("unit_at_origin", [abs(v - 1.0) for v in origin], 1e-15))
    x = rng.uniform(-10, 10, (samples, 6))
    lows = [
        np.min(cf.phi_sl4(x)),
        np.min(cf.keyformula_rho2(x[:, :4])),
        np.min(cf.sp4_commutator_rho(x[:, 0], x[:, 1])),
        np.min(cf.so_rho2(x[:, :3], x[:, 3])),
    ]
    out.append(_below("at_least_one", [1.0 - float(v) for v in lows], 1e-15))
    return out


# ---------------------------------------------------------------- inequalities

def suite_inequalities(samples: int, seed: int) -> list[PropertyResult]:
    out = []
    for name in ineq.FUZZ_TARGETS:
        for sampling in ineq.SAMPLINGS:
            r = ineq.fuzz(name, samples, seed, sampling)
            out.append(
                PropertyResult(
                    f"{name}[{sampling}]", r.passed, float(r.violations), 1.0, r.samples,
                    f"worst relative margin {r.worst_relative_margin:.3e}",
                )
            )
    return out


# ---------------------------------------------------------------- block identities

def suite_block_identities(samples: int, seed: int, tol: float = 1e-8) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    det_res, modulus, inverse, phase, phase_stated = [], [], [], [], []
    for s in range(samples):
        n = 2 + s % 7
        field = FIELDS[(s // 7) % 2]
        det_res.append(cf.det_block_residual(random_sl(rng, n, field)))
        b = random_unitary(rng, n, field)
        if abs(b[-1, -1]) < 1e-6:
            continue
        r = cf.unitary_block_residuals(b)
        modulus.append(r.modulus)
        inverse.append(r.inverse)
        phase.append(r.phase)
        phase_stated.append(r.phase_as_stated)
    return [
        _below("det_block", det_res, tol),
        _below("unitary_block_modulus", modulus, tol),
        _below("unitary_block_inverse", inverse, tol),
        PropertyResult(
            "unitary_block_phase_diagnostic", True, float(np.max(phase)), tol, len(phase),
            f"det A - d det B as displayed: worst {np.max(phase_stated):.3e}; with conj(d): worst {np.max(phase):.3e}",
        ),
    ]


# ---------------------------------------------------------------- psi decay and 1-D integrals

def suite_psi_decay(samples: int, seed: int) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    out = []
    lower, monotone, twist = [], [], []
    for m in (1, 2, 3, 4):
        for field in FIELDS:
            x = rng.uniform(-100, 100, (samples, m))
            u = rng.uniform(-100, 100, (samples, m))
            if field == "C":
                x = x + 1j * rng.uniform(-100, 100, (samples, m))
                u = u + 1j * rng.uniform(-100, 100, (samples, m))
            alpha = rng.uniform(0, 1)
            rep = ineq.psi_lower_bound(x, alpha)
            lower.append(rep.violations)
            monotone.append(int(np.sum(cf.log_psi(x, u, alpha) < cf.log_psi(x, np.zeros(m), alpha) * (1 - 1e-12))))
            if field == "C":
                xi = np.exp(2j * np.pi * rng.random(m))
                a = cf.log_psi(xi * x, xi * u, alpha)
                b = cf.log_psi(x, u, alpha)
                twist.append(float(np.max(np.abs(a - b) / b)))
    total = 8 * samples
    out.append(PropertyResult("psi_lower_bound", sum(lower) == 0, float(sum(lower)), 1.0, total, "worst is the violation count"))
    out.append(PropertyResult("psi_monotone_in_u", sum(monotone) == 0, float(sum(monotone)), 1.0, total, "worst is the violation count"))
    tw = _below("psi_unit_twist_invariance", twist, 1e-12)
    out.append(PropertyResult(tw.name, tw.passed, tw.worst, tw.threshold, 4 * samples))
    rep = ineq.psi_decay_check([1.0, 1.0], 0.5, 0.5, max(samples, 10**5), seed)
    out.append(
        PropertyResult(
            "psi_decay_slope", rep.all_hold, float(rep.rhs), float(rep.lhs), max(samples, 10**5),
            f"fitted slope {rep.details['slope']:.4f}, envelope {rep.details['target']:.4f}",
        )
    )
    tails, betas = [], []
    for field in FIELDS:
        for eps in (0.1, 0.5, 1.0):
            r = log_lemma_1d(eps, field)
            tails.append(r.tail - r.tail_bound)
        for a in (1.0, 10.0, 100.0):
            r = beta_decay_1d(a, 0.5, field)
            betas.append(r.estimate - r.bound)
    out.append(_below("log_lemma_tail_below_bound", tails, 1e-6))
    out.append(_below("beta_decay_below_bound", betas, 1e-6))
    return out


SUITES: dict[str, Callable[..., list[PropertyResult]]] = {
    "iwasawa": suite_iwasawa,
    "closed-forms": suite_closed_forms,
    "inequalities": suite_inequalities,
    "appendix-a": suite_block_identities,
    "appendix-b": suite_psi_decay,
}
