"""Seeded Monte-Carlo integration over truncated coordinate boxes on ``N``
and ``[N, N]`` with radial convergence scans. Two 1-D quadratures sit at the end.

Randomness is counter based: the points of chunk ``c`` of stream ``s`` come
from a Philox generator keyed by ``(seed, s, c)``, so results depend only on
``(seed, samples)`` and never on how chunks are distributed over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from . import closed_forms as cf
from .iwasawa import (
    WeightCombo,
    iwasawa,
    log_weight_on_a,
    rho_so,
    rho_sp4,
    rho_sl_mu,
)
from .linalg import field_dim

CHUNK_SIZE = 1 << 15
DOMAINS = ("full", "commutator", "vslice")
PROPOSALS = ("uniform", "radial", "cauchy", "pareto")


# ---------------------------------------------------------------- integrand

@dataclass(frozen=True)
class IntegrandSpec:
    """``a(v)^{rho_coeff rho} a(v)^{alpha dimF Lambda} (1 + rho(log a(v)))^{log_power}``.

    The ``Lambda`` factor is the weight ``||v^{-1} e_n||`` and is only
    defined for SL(n, F).
    """

    group: cf.GroupSpec
    domain: str = "full"
    rho_coeff: float = -1.0
    alpha: float = 0.0
    log_power: float = 0.0

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        if not 0 <= self.alpha < 1:
            raise ValueError("alpha must lie in [0, 1)")
        if self.alpha and self.group.tag != "sl":
            raise ValueError("the alpha factor is only defined for SL(n, F)")
        g = self.group
        supported = {
            "sl": ("full", "commutator", "vslice"),
            "sp4": ("full", "commutator"),
            "so": ("commutator",),
            "rank1": ("full", "commutator"),
        }[g.tag]
        if self.domain not in supported:
            raise ValueError(f"domain {self.domain!r} is not available for group {g.tag!r}")
        if self.dim == 0:
            raise ValueError("the chosen domain is trivial for this group")

    @property
    def positions(self) -> list[tuple[int, int]]:
        """Matrix positions of the free entries (SL only)."""
        return coordinate_positions(self.group.n, self.domain)

    @property
    def field_coords(self) -> int:
        """Number of coordinates over F."""
        g = self.group
        if g.tag == "sl":
            return len(self.positions)
        if g.tag == "sp4":
            return 4 if self.domain == "full" else 2
        if g.tag == "so":
            return g.n + 1
        p = g.rank_one
        return p.m_2lambda + (p.m_lambda if self.domain == "full" else 0)

    @property
    def dim(self) -> int:
        """Real dimension of the coordinate space."""
        return self.field_coords * self.group.dim_f


def coordinate_positions(n: int, domain: str) -> list[tuple[int, int]]:
    """Superdiagonal positions parametrising ``N``, ``[N, N]`` or ``V`` in SL(n)."""
    if domain == "full":
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if domain == "commutator":
        return commutator_coords(n)
    if domain == "vslice":
        return [(i, n - 1) for i in range(n - 1)]
    raise ValueError(f"unknown domain {domain!r}")


def commutator_coords(n: int) -> list[tuple[int, int]]:
    """Positions ``(i, j)``, ``j >= i + 2``, that parametrise ``[N_n, N_n]``.

    The commutator subgroup is exactly the set of unipotents whose first
    superdiagonal vanishes; Haar measure is Lebesgue measure in the
    remaining entries.
    """
    if n < 3:
        raise ValueError("[N, N] is trivial for n < 3")
    return [(i, j) for i in range(n) for j in range(i + 2, n)]


def _to_field(coords: np.ndarray, field: str) -> np.ndarray:
    if field == "R":
        return coords
    return coords[..., 0::2] + 1j * coords[..., 1::2]


def build_element(spec: IntegrandSpec, coords) -> np.ndarray:
    """The group element(s) with the given real coordinates."""
    g = spec.group
    c = _to_field(np.asarray(coords, dtype=float), g.field)
    if c.shape[-1] != spec.field_coords:
        raise ValueError(f"expected {spec.dim} real coordinates")
    if g.tag == "sl":
        return cf.upper_unipotent(g.n, c, spec.positions)
    if g.tag == "sp4":
        if spec.domain == "commutator":
            return cf.sp4_element(c[..., 0], c[..., 1])
        return cf.sp4_nilradical_element(*np.moveaxis(c, -1, 0))
    if g.tag == "so":
        return cf.so_element(c[..., :-1], c[..., -1])
    raise ValueError("rank-one groups have no matrix model here")


def _rho_mu(group: cf.GroupSpec) -> WeightCombo:
    if group.tag == "sl":
        return rho_sl_mu(group.n, group.field)
    if group.tag == "sp4":
        return rho_sp4(group.field)
    return rho_so(group.n)


def log_mu_unipotent(v: np.ndarray, j: int) -> np.ndarray:
    """``log ||first j rows of v||`` for unit upper triangular ``v`` (batched).

    With ``rows = [U | W]`` the Gram determinant equals ``det(I + M M^*)``
    for ``M = U^{-1} W``, computed from the singular values of ``M``.
    """
    n = v.shape[-1]
    if j == n:
        return np.zeros(v.shape[:-2])
    if j == 1:
        return 0.5 * cf.log1p_sum_abs2(v[..., 0, 1:])
    if j == n - 1:
        return log_inverse_last_column(v)
    m = np.linalg.solve(v[..., :j, :j], v[..., :j, j:])
    s = np.linalg.svd(m, compute_uv=False)
    return 0.5 * np.sum(cf.log1p_abs2(s), axis=-1)


def log_inverse_last_column(v: np.ndarray) -> np.ndarray:
    """``log ||v^{-1} e_n||`` for unit upper triangular ``v`` by back substitution."""
    n = v.shape[-1]
    x = np.zeros(v.shape[:-1], dtype=v.dtype)
    x[..., n - 1] = 1
    for i in range(n - 2, -1, -1):
        x[..., i] = -np.sum(v[..., i, i + 1:] * x[..., i + 1:], axis=-1)
    return 0.5 * cf.log1p_sum_abs2(x[..., :-1])


def _log_rho2_closed(spec: IntegrandSpec, coords: np.ndarray) -> np.ndarray:
    g = spec.group
    c = _to_field(coords, g.field)
    if g.tag == "rank1":
        p = g.rank_one
        if spec.domain == "full":
            nx2 = np.sum(c[..., : p.m_lambda] ** 2, axis=-1)
            ny2 = np.sum(c[..., p.m_lambda:] ** 2, axis=-1)
        else:
            nx2 = np.zeros(c.shape[:-1])
            ny2 = np.sum(c**2, axis=-1)
        return 2.0 * cf.log_rank_one_rho(nx2, ny2, p)
    if g.tag == "so":
        return cf.log_so_rho2(c[..., :-1], c[..., -1])
    if g.tag == "sp4" and spec.domain == "commutator":
        return 2.0 * cf.log_sp4_commutator_rho(c[..., 0], c[..., 1], g.field)
    if g.tag == "sl":
        if spec.domain == "vslice":
            return cf.log_keyformula_rho2(c, g.field)
        if g.n == 2:
            return g.dim_f * cf.log1p_abs2(c[..., 0])
        if g.n == 4 and g.field == "R" and spec.domain == "commutator":
            return cf.log_phi_sl4_commutator(c[..., 0], c[..., 1], c[..., 2])
    # generic unipotent: weights from wedge norms of leading rows
    v = build_element(spec, coords)
    rho = _rho_mu(g)
    total = np.zeros(coords.shape[:-1])
    for j, coef in enumerate(rho.coeffs, start=1):
        if coef:
            total += 2.0 * float(coef) * log_mu_unipotent(v, j)
    return total


def _log_rho2_oracle(spec: IntegrandSpec, coords: np.ndarray) -> np.ndarray:
    rho = _rho_mu(spec.group)
    mats = build_element(spec, coords).reshape(-1, *([spec.group.matrix_size] * 2))
    out = np.array([2.0 * log_weight_on_a(iwasawa(m).a, rho) for m in mats])
    return out.reshape(coords.shape[:-1])


def _log_lambda_oracle(spec: IntegrandSpec, coords: np.ndarray) -> np.ndarray:
    mats = build_element(spec, coords).reshape(-1, spec.group.n, spec.group.n)
    lam = WeightCombo("Lambda", (1,))
    out = np.array([log_weight_on_a(iwasawa(m).a, lam) for m in mats])
    return out.reshape(coords.shape[:-1])


def log_rho2(spec: IntegrandSpec, coords, method: str = "closed") -> np.ndarray:
    """``log a(v)^{2 rho}`` at the given coordinates."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape[-1] != spec.dim:
        raise ValueError(f"expected {spec.dim} coordinates, got {coords.shape[-1]}")
    if method == "closed":
        return _log_rho2_closed(spec, coords)
    if method == "oracle":
        return _log_rho2_oracle(spec, coords)
    raise ValueError(f"unknown method {method!r}")


def log_integrand(spec: IntegrandSpec, coords, method: str = "closed") -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    l2 = log_rho2(spec, coords, method)
    rho_log = 0.5 * l2
    out = spec.rho_coeff * rho_log
    if spec.log_power:
        out = out + spec.log_power * np.log1p(rho_log)
    if spec.alpha:
        if method == "closed":
            lam = log_inverse_last_column(build_element(spec, coords))
        else:
            lam = _log_lambda_oracle(spec, coords)
        out = out + spec.alpha * spec.group.dim_f * lam
    return out


def evaluate_integrand(spec: IntegrandSpec, coords, method: str = "closed"):
    return np.exp(log_integrand(spec, coords, method))


# ---------------------------------------------------------------- sampling

@dataclass(frozen=True)
class Proposal:
    """How points are drawn inside a shell ``lo < ||x||_inf <= hi``.

    ``uniform``: uniform in the outer box, inner box rejected by weight 0.
    ``radial``: sup-norm radius ``t`` with density proportional to
    ``1 / (offset + t)``, a uniformly chosen face of the cube of half-width
    ``t``, and the other coordinates log-uniform on ``[-t, t]`` (density
    proportional to ``1 / (1 + |x|)``).
    ``cauchy``: independent Cauchy coordinates with the given ``scale``.
    ``pareto``: independent symmetric coordinates with density
    ``tail / (2 (1 + |x|)^{1 + tail})``.
    """

    kind: str = "uniform"
    scale: float = 1.0
    offset: float = 1.0
    tail: float = 0.25

    def __post_init__(self):
        if self.kind not in PROPOSALS:
            raise ValueError(f"unknown proposal {self.kind!r}")


def _stream_rng(seed: int, stream: int, chunk: int) -> np.random.Generator:
    key = np.array([seed, (stream << 32) | chunk], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw(rng, m: int, d: int, lo: float, hi: float, prop: Proposal):
    """Points and ``log`` proposal density; points outside the shell get ``+inf``."""
    if prop.kind == "uniform":
        x = (2.0 * rng.random((m, d)) - 1.0) * hi
        log_q = np.full(m, -d * math.log(2.0 * hi))
    elif prop.kind == "radial":
        c = prop.offset
        ratio = (c + hi) / (c + lo)
        t = (c + lo) * ratio ** rng.random(m) - c
        face = rng.integers(0, 2 * d, size=m)
        # free face coordinates: |x| = (1 + t)^U - 1, symmetric
        span = np.log1p(t)[:, None]
        x = np.expm1(span * rng.random((m, d)))
        x = np.where(rng.random((m, d)) < 0.5, -x, x)
        x[np.arange(m), face // 2] = np.where(face % 2 == 0, t, -t)
        with np.errstate(divide="ignore"):
            log_face = np.sum(np.log(2.0 * span) + np.log1p(np.abs(x)), axis=1)
            log_face -= np.log(2.0 * span[:, 0]) + np.log1p(t)
            log_q = -np.log(c + t) - math.log(math.log(ratio)) - math.log(2 * d) - log_face
        return x, log_q
    elif prop.kind == "cauchy":
        x = prop.scale * np.tan(np.pi * (rng.random((m, d)) - 0.5))
        log_q = np.sum(-math.log(np.pi * prop.scale) - np.log1p((x / prop.scale) ** 2), axis=1)
    else:
        nu = prop.tail
        mag = rng.random((m, d)) ** (-1.0 / nu) - 1.0
        x = np.where(rng.random((m, d)) < 0.5, -mag, mag)
        log_q = np.sum(math.log(nu / 2.0) - (1.0 + nu) * np.log1p(np.abs(x)), axis=1)
    r = np.max(np.abs(x), axis=1)
    outside = (r <= lo) | (r > hi)
    return x, np.where(outside, np.inf, log_q)


@dataclass(frozen=True)
class Moments:
    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, w: np.ndarray) -> "Moments":
        if w.size == 0:
            return cls(0, 0.0, 0.0)
        mean = float(np.mean(w))
        return cls(w.size, mean, float(np.sum((w - mean) ** 2)))

    def merge(self, other: "Moments") -> "Moments":
        n = self.count + other.count
        if n == 0:
            return self
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta**2 * self.count * other.count / n
        return Moments(n, mean, m2)


def _tree_merge(parts: list[Moments]) -> Moments:
    while len(parts) > 1:
        merged = [parts[i].merge(parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


@dataclass(frozen=True)
class MCResult:
    mean: float
    stderr: float
    samples: int


LogDensity = Callable[[np.ndarray], np.ndarray]


def mc_integrate(
    log_f: LogDensity,
    dim: int,
    lo: float,
    hi: float,
    samples: int,
    seed: int,
    proposal: Proposal | str = "uniform",
    stream: int = 0,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> MCResult:
    """Integral of ``exp(log_f)`` over ``{lo < ||x||_inf <= hi}`` in ``R^dim``."""
    if isinstance(proposal, str):
        proposal = Proposal(proposal)
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    if proposal.kind in ("uniform", "radial") and not math.isfinite(hi):
        raise ValueError(f"{proposal.kind} proposal needs a finite outer radius")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    if stream >= 2**32:
        raise ValueError("stream index too large")
    n_chunks = -(-samples // chunk_size)

    def run(c: int) -> Moments:
        m = min(chunk_size, samples - c * chunk_size)
        x, log_q = _draw(_stream_rng(seed, stream, c), m, dim, lo, hi, proposal)
        inside = np.isfinite(log_q)
        w = np.zeros(m)
        if np.any(inside):
            with np.errstate(over="ignore"):
                w[inside] = np.exp(log_f(x[inside]) - log_q[inside])
        return Moments.of(w)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(n_chunks)))
    else:
        parts = [run(c) for c in range(n_chunks)]
    total = _tree_merge(parts)
    if not math.isfinite(total.mean):
        raise FloatingPointError("Monte-Carlo weights overflowed")
    var = total.m2 / (total.count - 1) if total.count > 1 else 0.0
    return MCResult(total.mean, math.sqrt(var / total.count), total.count)


def mc_estimate(
    spec: IntegrandSpec,
    R: float,
    samples: int,
    seed: int,
    proposal: Proposal | str = "uniform",
    workers: int = 1,
) -> MCResult:
    """Integral of the integrand over the box ``[-R, R]^dim``."""
    if not R > 0:
        raise ValueError("R must be positive")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    return mc_integrate(
        lambda x: log_integrand(spec, x), spec.dim, 0.0, R, samples, seed, proposal, workers=workers
    )


# ---------------------------------------------------------------- scans

@dataclass(frozen=True)
class ScanThresholds:
    slope_sigma: float = 3.0
    increment_sigma: float = 2.0
    converged_fraction: float = 0.05
    power_exponent_min: float = 0.1
    exponent_drop: float = 0.2


@dataclass
class ScanReport:
    radii: list[float]
    estimates: list[float]
    stderrs: list[float]
    increments: list[float]
    increment_stderrs: list[float]
    cumulative_samples: list[int]
    slope_vs_logR: float
    slope_stderr: float
    log_coeff: float
    power_coeff: float
    growth_exponents: list[float]
    classification: str
    settings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ScanReport":
        return cls(**d)

    def csv_rows(self) -> list[tuple]:
        return list(zip(self.radii, self.estimates, self.stderrs, self.cumulative_samples))


def _ols(x: np.ndarray, y: np.ndarray):
    coef, *_ = np.linalg.lstsq(x, y, rcond=None)
    resid = y - x @ coef
    dof = len(y) - x.shape[1]
    sigma2 = float(resid @ resid) / dof if dof > 0 else 0.0
    xtx_inv = np.linalg.pinv(x.T @ x)
    return coef, sigma2, xtx_inv


def fit_growth(radii, estimates, stderrs):
    """Slope of the estimates against ``log R`` with its standard error, and
    the coefficients of the fit against ``{1, log R, R^0.1}``.

    The slope error combines the residual scatter with the Monte-Carlo
    covariance of the cumulative estimates (shells are independent).
    """
    L = np.log(np.asarray(radii, dtype=float))
    y = np.asarray(estimates, dtype=float)
    shell_var = np.diff(np.concatenate([[0.0], np.asarray(stderrs, dtype=float) ** 2]))
    k = np.arange(len(y))
    cov = np.cumsum(shell_var)[np.minimum.outer(k, k)]
    x = np.column_stack([np.ones_like(L), L])
    coef, sigma2, xtx_inv = _ols(x, y)
    proj = xtx_inv @ x.T
    mc_var = float(proj[1] @ cov @ proj[1])
    slope_se = math.sqrt(sigma2 * xtx_inv[1, 1] + mc_var)
    if len(y) >= 3:
        x3 = np.column_stack([np.ones_like(L), L, np.exp(0.1 * L)])
        c3, *_ = np.linalg.lstsq(x3, y, rcond=None)
        log_coeff, power_coeff = float(c3[1]), float(c3[2])
    else:
        log_coeff, power_coeff = float(coef[1]), 0.0
    return float(coef[1]), slope_se, log_coeff, power_coeff


def growth_exponents(radii, increments) -> list[float]:
    """Local power-law exponents of the increment density per unit ``log R``."""
    L = np.log(np.asarray(radii, dtype=float))
    dens = np.asarray(increments, dtype=float) / np.diff(L)
    mid = 0.5 * (L[1:] + L[:-1])
    out = []
    for k in range(1, len(dens)):
        if dens[k] > 0 and dens[k - 1] > 0:
            out.append(float(np.log(dens[k] / dens[k - 1]) / (mid[k] - mid[k - 1])))
        else:
            out.append(float("nan"))
    return out


def increment_rule(estimates, increments, increment_stderrs, th: ScanThresholds = ScanThresholds()) -> bool:
    """Increments from the largest shell onward decrease (within
    ``increment_sigma`` standard errors) and the last one is below
    ``converged_fraction`` of the running total.

    The inner box (shell 0) is not compared with the shells.
    """
    inc = np.asarray(increments[1:], dtype=float)
    inc_se = np.asarray(increment_stderrs[1:], dtype=float)
    if len(inc) < 2:
        return False
    tail = range(int(np.argmax(inc)) + 1, len(inc))
    decreasing = all(
        inc[k] <= inc[k - 1] + th.increment_sigma * math.hypot(inc_se[k], inc_se[k - 1]) for k in tail
    )
    return bool(decreasing and inc[-1] < th.converged_fraction * estimates[-1])


def classify(
    radii, estimates, stderrs, increments, increment_stderrs, th: ScanThresholds = ScanThresholds()
):
    """Return ``(classification, slope, slope_se, log_coeff, power_coeff, exponents)``.

    convergent
        :func:`increment_rule` holds, or the slope against ``log R`` is
        within ``slope_sigma`` standard errors of zero.
    log_divergent / power_divergent
        otherwise, decided from the local exponents of the increment density:
        an exponent below ``power_exponent_min``, or one that drops by more
        than ``exponent_drop`` relative to its predecessor, is logarithmic
        growth; a sustained exponent above the minimum is power growth.
    """
    slope, slope_se, log_coeff, power_coeff = fit_growth(radii, estimates, stderrs)
    # shell 0 is the inner box; shells 1.. span consecutive radii
    exps = growth_exponents(list(radii), list(increments[1:])) if len(increments) >= 3 else []
    if increment_rule(estimates, increments, increment_stderrs, th):
        label = "convergent"
    elif slope <= th.slope_sigma * slope_se:
        label = "convergent"
    elif not exps or not math.isfinite(exps[-1]) or exps[-1] <= -th.power_exponent_min:
        # a decaying increment density points to convergence the radii do not resolve
        label = "inconclusive"
    elif exps[-1] < th.power_exponent_min:
        label = "log_divergent"
    elif len(exps) >= 2 and exps[-1] < (1.0 - th.exponent_drop) * exps[-2]:
        label = "log_divergent"
    elif len(exps) >= 2 and exps[-2] >= th.power_exponent_min:
        label = "power_divergent"
    else:
        label = "inconclusive"
    return label, slope, slope_se, log_coeff, power_coeff, exps


def radial_scan(
    spec: IntegrandSpec,
    radii: Sequence[float],
    samples: int,
    seed: int,
    proposal: Proposal | str = "radial",
    workers: int = 1,
    thresholds: ScanThresholds = ScanThresholds(),
) -> ScanReport:
    """Partial integrals over nested boxes ``[-R, R]^dim`` for each radius.

    Each shell between consecutive radii is sampled independently with
    ``samples`` points on its own random stream.
    """
    radii = [float(r) for r in radii]
    if not radii or radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly ascending")
    if isinstance(proposal, str):
        proposal = Proposal(proposal)
    shells = []
    lo = 0.0
    for k, hi in enumerate(radii):
        shells.append(
            mc_integrate(
                lambda x: log_integrand(spec, x), spec.dim, lo, hi, samples, seed, proposal,
                stream=k, workers=workers,
            )
        )
        lo = hi
    inc = [s.mean for s in shells]
    inc_se = [s.stderr for s in shells]
    est = list(np.cumsum(inc))
    se = list(np.sqrt(np.cumsum(np.square(inc_se))))
    label, slope, slope_se, log_coeff, power_coeff, exps = classify(
        radii, est, se, inc, inc_se, thresholds
    )
    return ScanReport(
        radii=radii,
        estimates=[float(e) for e in est],
        stderrs=[float(s) for s in se],
        increments=inc,
        increment_stderrs=inc_se,
        cumulative_samples=[samples * (k + 1) for k in range(len(radii))],
        slope_vs_logR=slope,
        slope_stderr=slope_se,
        log_coeff=log_coeff,
        power_coeff=power_coeff,
        growth_exponents=exps,
        classification=label,
        settings={
            "group": spec.group.tag,
            "n": spec.group.n,
            "field": spec.group.field,
            "rank_one": asdict(spec.group.rank_one) if spec.group.rank_one else None,
            "domain": spec.domain,
            "rho_coeff": spec.rho_coeff,
            "alpha": spec.alpha,
            "log_power": spec.log_power,
            "samples": samples,
            "seed": seed,
            "proposal": asdict(proposal),
            "thresholds": asdict(thresholds),
        },
    )


# ---------------------------------------------------------------- 1-D integrals

@dataclass(frozen=True)
class LogLemmaResult:
    head: float
    tail: float
    total: float
    tail_bound: float
    abserr: float


def log_lemma_1d(eps: float, field: str = "R") -> LogLemmaResult:
    """``int_F (1 + |x|^2)^{-dimF/2} (1 + log(1 + |x|^2))^{-1-eps} dx``.

    Integrated in polar form, split at ``|x| = 2``. The tail is compared with
    ``2 pi^{dimF-1} int_{log 2}^inf r^{-1-eps} dr``.
    """
    if not eps > 0:
        raise ValueError("the integral diverges for eps <= 0")
    k = field_dim(field)
    const = 2.0 * np.pi ** (k - 1)

    def radial(r):
        return r ** (k - 1) / ((1 + r * r) ** (k / 2) * (1 + np.log1p(r * r)) ** (1 + eps))

    head, err_h = integrate.quad(radial, 0.0, 2.0, epsabs=1e-13, epsrel=1e-12)
    # tail: u = 1 + log(1 + r^2), then u = u0 e^s; integrand ~ e^{-eps s}
    u0 = 1.0 + math.log(5.0)

    def tail_integrand(s):
        log_u = math.log(u0) + s
        inv_r2 = 1.0 / math.expm1(math.exp(log_u) - 1.0) if log_u < 6.5 else 0.0
        # r^{k-1} (1 + r^2)^{-k/2} dr/du, with dr/du = (1 + r^2) / (2 r)
        jac = 0.5 * math.sqrt(1.0 + inv_r2) if k == 1 else 0.5
        return jac * math.exp(-eps * log_u)

    tail, err_t = integrate.quad(tail_integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    head *= const
    tail *= const
    bound = const * (1.0 / eps) * math.log(2.0) ** (-eps)
    return LogLemmaResult(head, tail, head + tail, bound, const * (err_h + err_t))


@dataclass(frozen=True)
class BetaDecayResult:
    estimate: float
    bound: float
    abserr: float


def beta_decay_1d(a: float, beta: float, field: str = "R") -> BetaDecayResult:
    """``int_{|y| <= 1} (1 + a^2 |y|^2)^{-beta/2} dy`` and its decay bound.

    The bound is ``C (1 + a^2)^{-beta/2}``; for R the constant covers both
    half-intervals, ``C = 2 * 2^beta / (1 - beta)``, and for C it is
    ``pi 2^beta / (1 - beta/2)``.
    """
    if a < 1:
        raise ValueError("a must be at least 1")
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    if field == "R":
        val, err = integrate.quad(
            lambda y: (1 + a * a * y * y) ** (-beta / 2), 0.0, 1.0,
            points=[1.0 / a] if a > 1 else None, epsabs=0.0, epsrel=1e-12, limit=200,
        )
        val, err = 2 * val, 2 * err
        const = 2.0 * 2.0**beta / (1 - beta)
    elif field == "C":
        # s = t^2 turns the 1/a^2 boundary layer into one of width 1/a
        val, err = integrate.quad(
            lambda t: 2 * t * (1 + a * a * t * t) ** (-beta / 2), 0.0, 1.0,
            points=[1.0 / a] if a > 1 else None, epsabs=0.0, epsrel=1e-12, limit=200,
        )
        val, err = np.pi * val, np.pi * err
        const = np.pi * 2.0**beta / (1 - beta / 2)
    else:
        raise ValueError(f"unknown field {field!r}")
    return BetaDecayResult(val, const * (1 + a * a) ** (-beta / 2), err)
