"""Margin-reporting predicates for the exponent-splitting inequalities.

Multiplicative inequalities are compared through their logarithms, so
``lhs`` and ``rhs`` of a report are log values and the check is meaningful
for coordinates up to ~1e150.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import closed_forms as cf
from .integrators import MCResult, Proposal, _stream_rng, mc_integrate
from .linalg import field_dim

REL_SLACK = 1e-12


@dataclass(frozen=True)
class BoundReport:
    """Outcome of ``lhs >= rhs``; array fields for batched checks.

    ``holds`` is ``margin >= -|rhs| * REL_SLACK``.
    """

    lhs: np.ndarray | float
    rhs: np.ndarray | float
    details: Optional[dict] = field(default=None, compare=False)

    @property
    def margin(self):
        return np.asarray(self.lhs) - np.asarray(self.rhs)

    @property
    def holds(self):
        return self.margin >= -np.abs(self.rhs) * REL_SLACK

    @property
    def all_hold(self) -> bool:
        return bool(np.all(self.holds))

    @property
    def violations(self) -> int:
        return int(np.size(self.holds) - np.count_nonzero(self.holds))

    @property
    def worst_relative_margin(self) -> float:
        """``min (lhs - rhs) / |rhs|`` (``inf`` where ``rhs`` is 0 and the bound holds)."""
        m = np.asarray(self.margin, dtype=float)
        r = np.abs(np.asarray(self.rhs, dtype=float))
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(r > 0, m / np.where(r > 0, r, 1.0), np.where(m >= 0, np.inf, -np.inf))
        return float(np.min(rel))


def _nonneg(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if np.any(a < 0) or np.any(np.isnan(a)):
        raise ValueError(f"{name} must be nonnegative")
    return a


def _log1p_sum(A: np.ndarray) -> np.ndarray:
    """``log(1 + sum A)`` over the last axis via ``|x|^2`` helpers."""
    return cf.log1p_sum_abs2(np.sqrt(A))


def power_product_bound(A, a) -> BoundReport:
    """``(1 + sum A)^{sum a} >= prod (1 + A_i)^{a_i}`` in log form.

    Batched over leading axes; the last axis indexes ``i``.
    """
    A = _nonneg(A, "A")
    a = _nonneg(a, "a")
    if A.shape[-1] != a.shape[-1]:
        raise ValueError("A and a must have equal lengths")
    lhs = np.sum(a, axis=-1) * _log1p_sum(A)
    rhs = np.sum(a * np.log1p(A), axis=-1)
    return BoundReport(lhs, rhs)


def log_sum_sandwich(A) -> tuple[BoundReport, BoundReport]:
    """``sum log(1+A_i) >= log(1 + sum A_i) >= (1/n) sum log(1+A_i)``."""
    A = _nonneg(A, "A")
    n = A.shape[-1]
    total = np.sum(np.log1p(A), axis=-1)
    middle = _log1p_sum(A)
    return BoundReport(total, middle), BoundReport(middle, total / n)


def epsilon_delta_split(r2_half, z2, n: int, eps: float, delta: float) -> BoundReport:
    """``((1+s)^2 + z2)(1 + z2 + s)^n >= (1+s)^{2 eps + n(1-delta)} (1+z2)^{1-eps+n delta}``

    with ``s = r^2/2``, in log form.
    """
    if not (0 < eps < 1 and 0 < delta < 1):
        raise ValueError("eps and delta must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be a positive integer")
    s = _nonneg(r2_half, "r2_half")
    z2 = _nonneg(z2, "z2")
    ls = np.log1p(s)
    lz = np.log1p(z2)
    # log((1+s)^2 + z2) and log(1 + z2 + s), both without overflow
    with np.errstate(divide="ignore"):
        log_z2 = np.log(z2)
        lhs = np.logaddexp(2.0 * ls, log_z2) + n * np.logaddexp(0.0, np.logaddexp(log_z2, np.log(s)))
    rhs = (2 * eps + n * (1 - delta)) * ls + (1 - eps + n * delta) * lz
    return BoundReport(lhs, rhs)


def so_split_bound(r2_half, z2, n: int) -> BoundReport:
    """The SO(n+2, 2) split with ``eps = 1/3``, ``delta = 1/(2n)``."""
    return epsilon_delta_split(r2_half, z2, n, 1.0 / 3.0, 1.0 / (2 * n))


def sl4_commutator_bound(x2, x3, x5) -> BoundReport:
    """``phi(x2, x3, x5) >= prod (1 + x_i^2)^{7/6}`` on ``[N_4, N_4]``."""
    lhs = cf.log_phi_sl4_commutator(x2, x3, x5)
    rhs = 7.0 / 6.0 * (cf.log1p_abs2(x2) + cf.log1p_abs2(x3) + cf.log1p_abs2(x5))
    return BoundReport(lhs, rhs)


def sp4_commutator_bound(y, z, field: Optional[str] = None) -> BoundReport:
    """``a^rho >= ((1+|y|^2)^{4/3} (1+|z|^2)^{7/6})^{dimF/2}`` on ``[N, N]`` of Sp4."""
    if field is None:
        field = "C" if (np.iscomplexobj(y) or np.iscomplexobj(z)) else "R"
    lhs = cf.log_sp4_commutator_rho(y, z, field)
    k = field_dim(field)
    rhs = 0.5 * k * (4.0 / 3.0 * cf.log1p_abs2(y) + 7.0 / 6.0 * cf.log1p_abs2(z))
    return BoundReport(lhs, rhs)


def psi_lower_bound(x, alpha: float) -> BoundReport:
    """``psi(x, 0) >= prod (1 + |x_i|^2)^{1 + alpha/m}``."""
    x = np.asarray(x)
    m = x.shape[-1]
    lhs = cf.log_psi(x, np.zeros(m), alpha)
    rhs = (1.0 + alpha / m) * np.sum(cf.log1p_abs2(x), axis=-1)
    return BoundReport(lhs, rhs)


# ---------------------------------------------------------------- fuzzing

@dataclass(frozen=True)
class FuzzSummary:
    name: str
    samples: int
    violations: int
    worst_relative_margin: float

    @property
    def passed(self) -> bool:
        return self.violations == 0


SAMPLINGS = ("uniform", "reciprocal", "logscale")


def _coords(rng, shape, sampling: str) -> np.ndarray:
    """Signed coordinates: uniform on [-100, 100], reciprocal-uniform
    (``1/U``), or log-uniform magnitudes in ``[1e-3, 1e150]``."""
    if sampling == "uniform":
        return rng.uniform(-100.0, 100.0, shape)
    if sampling == "reciprocal":
        mag = 1.0 / (1.0 - rng.random(shape))
    elif sampling == "logscale":
        mag = 10.0 ** rng.uniform(-3.0, 150.0, shape)
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    return np.where(rng.random(shape) < 0.5, -mag, mag)


def _fuzz_batch(name: str, rng, m: int, sampling: str) -> BoundReport:
    if name == "power_product":
        k = int(rng.integers(1, 7))
        A = _coords(rng, (m, k), sampling) ** 2
        return power_product_bound(A, rng.uniform(0.0, 3.0, (m, k)))
    if name in ("log_sum_upper", "log_sum_lower"):
        k = int(rng.integers(1, 7))
        hi, lo = log_sum_sandwich(_coords(rng, (m, k), sampling) ** 2)
        return hi if name == "log_sum_upper" else lo
    if name == "sl4_commutator_7_6":
        x = _coords(rng, (3, m), sampling)
        return sl4_commutator_bound(*x)
    if name == "sp4_commutator":
        y, z = _coords(rng, (2, m), sampling)
        if rng.random() < 0.5:
            y = y + 1j * _coords(rng, m, sampling)
            z = z + 1j * _coords(rng, m, sampling)
            return sp4_commutator_bound(y, z, "C")
        return sp4_commutator_bound(y, z, "R")
    if name == "so_split":
        n = int(rng.integers(1, 7))
        y = _coords(rng, (m, n), sampling)
        s = np.exp(cf.log_sum_abs2(y)) / 2.0
        z = _coords(rng, m, sampling)
        return so_split_bound(s, z**2, n)
    raise ValueError(f"unknown fuzz target {name!r}")


FUZZ_TARGETS = (
    "power_product",
    "log_sum_upper",
    "log_sum_lower",
    "sl4_commutator_7_6",
    "sp4_commutator",
    "so_split",
)


def fuzz(name: str, samples: int, seed: int, sampling: str = "uniform", batch: int = 1 << 14) -> FuzzSummary:
    """Check one inequality family on ``samples`` seeded random inputs.

    Batches use independent counter-based streams, so the outcome depends
    only on ``(name, samples, seed, sampling, batch)``.
    """
    if name not in FUZZ_TARGETS:
        raise ValueError(f"unknown fuzz target {name!r}")
    stream = FUZZ_TARGETS.index(name) * len(SAMPLINGS) + SAMPLINGS.index(sampling)
    bad = 0
    worst = math.inf
    for c in range(-(-samples // batch)):
        m = min(batch, samples - c * batch)
        rep = _fuzz_batch(name, _stream_rng(seed, stream, c), m, sampling)
        bad += rep.violations
        worst = min(worst, rep.worst_relative_margin)
    return FuzzSummary(name, samples, bad, worst)


# ---------------------------------------------------------------- psi decay

def psi_integral(
    u, alpha: float, samples: int, seed: int, field: str = "R", tail: Optional[float] = None, stream: int = 0
) -> MCResult:
    """MC estimate of ``int_{F^m} psi(x, u, alpha)^{-dimF/2} dx``.

    Sampled with independent heavy-tailed coordinates whose tail exponent
    (default ``alpha / 2``) is lighter than the integrand's, which keeps the
    importance weights bounded at infinity.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    u = np.asarray(u, dtype=complex if field == "C" else float)
    k = field_dim(field)
    dim = k * u.shape[-1]

    def log_f(x):
        z = x if field == "R" else x[:, 0::2] + 1j * x[:, 1::2]
        return -0.5 * k * cf.log_psi(z, u, alpha)

    prop = Proposal("pareto", tail=alpha / 2 if tail is None else tail)
    return mc_integrate(log_f, dim, 0.0, math.inf, samples, seed, prop, stream=stream)


def psi_decay_check(
    u,
    alpha: float,
    eps: float,
    samples: int,
    seed: int,
    field: str = "R",
    ladder: Sequence[float] = (1.0, 10.0, 100.0),
    slack: float = 0.1,
) -> BoundReport:
    """Fit the decay of the psi integral along ``u`` and compare it with
    ``(1 + |u|^2)^{-alpha eps dimF / 2}``.

    The integral is estimated at ``s u / |u|`` for ``s`` in ``ladder``; the
    slope of ``log I`` against ``log(1 + s^2)`` must not exceed
    ``-alpha eps dimF / 2 + slack``. The report has ``lhs`` that threshold
    and ``rhs`` the fitted slope; ``details`` holds the ladder data.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    u = np.asarray(u, dtype=complex if field == "C" else float)
    norm = float(np.linalg.norm(u))
    if norm == 0:
        raise ValueError("u must be nonzero to define a decay direction")
    if len(ladder) < 2:
        raise ValueError("need at least two ladder points")
    results = [psi_integral(s * u / norm, alpha, samples, seed, field, stream=i) for i, s in enumerate(ladder)]
    x = np.log1p(np.square(np.asarray(ladder, dtype=float)))
    y = np.log([r.mean for r in results])
    slope = float(np.polyfit(x, y, 1)[0])
    target = -alpha * eps * field_dim(field) / 2
    return BoundReport(
        target + slack,
        slope,
        details={
            "norms": [float(s) for s in ladder],
            "estimates": [r.mean for r in results],
            "stderrs": [r.stderr for r in results],
            "slope": slope,
            "target": target,
        },
    )
