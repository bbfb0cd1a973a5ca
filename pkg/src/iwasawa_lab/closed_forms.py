"""Explicit formulas for ``a(n)^{2 rho}`` on unipotent elements, their matrix
builders, the comparison function ``psi`` and two block identities for the
compact factor.

Every ``log_*`` function works in log space and broadcasts over leading
axes; the plain functions exponentiate the log version.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .iwasawa import iwasawa
from .linalg import IDENTITY_TOL, adjoint, as_square, field_dim, field_of


@dataclass(frozen=True)
class RankOneParams:
    m_lambda: int
    m_2lambda: int = 0
    lam_h: float = 1.0

    def __post_init__(self):
        if self.m_lambda < 1:
            raise ValueError("m_lambda must be at least 1")
        if self.m_2lambda < 0:
            raise ValueError("m_2lambda must be nonnegative")
        if self.m_2lambda > 0 and self.m_lambda <= 1:
            raise ValueError("m_lambda > 1 is required when m_2lambda > 0")
        if not self.lam_h > 0:
            raise ValueError("lam_h must be positive")

    @classmethod
    def so_n1(cls, n: int, lam_h: float = 1.0) -> "RankOneParams":
        return cls(n - 1, 0, lam_h)

    @classmethod
    def su_n1(cls, n: int, lam_h: float = 1.0) -> "RankOneParams":
        return cls(2 * (n - 1), 1, lam_h)


GROUP_TAGS = ("sl", "sp4", "so", "rank1")


@dataclass(frozen=True)
class GroupSpec:
    """A group from the supported families.

    ``n`` is the matrix size for ``sl``, the size of the identity block for
    ``so`` (the group SO(n+2, 2) realised in dimension ``n + 4``), and is
    ignored for ``sp4`` and ``rank1``.
    """

    tag: str
    n: int = 2
    field: str = "R"
    rank_one: Optional[RankOneParams] = None

    def __post_init__(self):
        if self.tag not in GROUP_TAGS:
            raise ValueError(f"unknown group tag {self.tag!r}")
        field_dim(self.field)
        if self.tag == "sl" and self.n < 2:
            raise ValueError("SL(n) needs n >= 2")
        if self.tag == "so":
            if self.n < 1:
                raise ValueError("SO(n+2, 2) needs n >= 1")
            if self.field != "R":
                raise ValueError("SO(n+2, 2) is a real group")
        if self.tag == "sp4":
            object.__setattr__(self, "n", 4)
        if self.tag == "rank1":
            if self.rank_one is None:
                raise ValueError("rank1 group needs RankOneParams")
            if self.field != "R":
                raise ValueError("rank-one formulas are real")

    @property
    def dim_f(self) -> int:
        return field_dim(self.field)

    @property
    def matrix_size(self) -> Optional[int]:
        if self.tag == "sl":
            return self.n
        if self.tag == "sp4":
            return 4
        if self.tag == "so":
            return self.n + 4
        return None


# ---------------------------------------------------------------- helpers

def log1p_abs2(x):
    """``log(1 + |x|^2)`` without overflow for very large ``|x|``."""
    ax = np.abs(np.asarray(x))
    with np.errstate(divide="ignore"):
        return np.logaddexp(0.0, 2.0 * np.log(ax))


def log_sum_abs2(x, axis=-1):
    """``log(sum |x|^2)`` along ``axis`` with per-slice rescaling."""
    ax = np.abs(np.asarray(x))
    s = np.max(ax, axis=axis, keepdims=True)
    safe = np.where(s > 0, s, 1.0)
    with np.errstate(divide="ignore"):
        return np.log(np.sum((ax / safe) ** 2, axis=axis)) + 2.0 * np.log(np.squeeze(s, axis=axis))


def log1p_sum_abs2(x, axis=-1):
    """``log(1 + sum |x|^2)``."""
    return np.logaddexp(0.0, log_sum_abs2(x, axis=axis))


def log1p_cumsum_abs2(x):
    """``log(1 + sum_{j<=i} |x_j|^2)`` for every prefix along the last axis."""
    ax = np.abs(np.asarray(x))
    s = np.max(ax, axis=-1, keepdims=True)
    safe = np.where(s > 0, s, 1.0)
    with np.errstate(divide="ignore"):
        partial = np.log(np.cumsum((ax / safe) ** 2, axis=-1)) + 2.0 * np.log(s)
    return np.logaddexp(0.0, partial)


def upper_unipotent(n: int, entries, positions=None) -> np.ndarray:
    """Unit upper triangular ``n x n`` matrix with the given off-diagonal entries.

    ``positions`` defaults to all ``(i, j)`` with ``i < j`` in row-major order.
    """
    if positions is None:
        positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    entries = np.asarray(entries)
    if entries.shape[-1] != len(positions):
        raise ValueError(f"expected {len(positions)} entries, got {entries.shape[-1]}")
    dtype = complex if np.iscomplexobj(entries) else float
    v = np.zeros(entries.shape[:-1] + (n, n), dtype=dtype)
    idx = np.arange(n)
    v[..., idx, idx] = 1
    for p, (i, j) in enumerate(positions):
        v[..., i, j] = entries[..., p]
    return v


# ---------------------------------------------------------------- SL(4, R)

def sl4_unipotent(x) -> np.ndarray:
    """The 4x4 unipotent with first-row ``x1, x2, x3``, then ``x4, x5`` and ``x6``."""
    return upper_unipotent(4, x)


def phi_sl4(x):
    """``a(X)^{2 rho}`` for the 4x4 unipotent built from ``x = (x1, ..., x6)``."""
    x = np.asarray(x, dtype=float)
    x1, x2, x3, x4, x5, x6 = np.moveaxis(x, -1, 0)
    f1 = 1 + x1**2 + x2**2 + x3**2
    f2 = 1 + x4**2 + x5**2 + (x2 - x1 * x4) ** 2 + (x3 - x1 * x5) ** 2 + (x3 * x4 - x2 * x5) ** 2
    f3 = 1 + x6**2 + (x5 - x4 * x6) ** 2 + (x3 - x1 * x5 - x2 * x6 + x1 * x4 * x6) ** 2
    return f1 * f2 * f3


def log_phi_sl4_commutator(x2, x3, x5):
    with np.errstate(divide="ignore"):
        l2, l3, l5 = (2.0 * np.log(np.abs(np.asarray(t, dtype=float))) for t in (x2, x3, x5))
        first = np.logaddexp(0.0, np.logaddexp(l2, l3))
        middle = np.logaddexp(np.logaddexp(0.0, l2) + np.logaddexp(0.0, l5), l3)
        last = np.logaddexp(0.0, np.logaddexp(l3, l5))
    return first + middle + last


def phi_sl4_commutator(x2, x3, x5):
    """``phi`` restricted to the commutator subgroup (``x1 = x4 = x6 = 0``)."""
    with np.errstate(divide="ignore"):
        return np.exp(log_phi_sl4_commutator(x2, x3, x5))


# ---------------------------------------------------------------- SL(n, F), last column

def vcol_element(y) -> np.ndarray:
    """``[[I, y], [0, 1]]`` for a column ``y`` of length ``n - 1``."""
    y = np.asarray(y)
    n = y.shape[-1] + 1
    return upper_unipotent(n, y, [(i, n - 1) for i in range(n - 1)])


def log_keyformula_rho2(y, field: Optional[str] = None):
    """``log a(v)^{2 rho}`` for ``v = [[I, y], [0, 1]]`` in SL(n, F)."""
    field = field or field_of(y)
    return field_dim(field) * np.sum(log1p_cumsum_abs2(y), axis=-1)


def keyformula_rho2(y, field: Optional[str] = None):
    return np.exp(log_keyformula_rho2(y, field))


# ---------------------------------------------------------------- Sp4(F)

def sp4_form() -> np.ndarray:
    """The symplectic form ``J = [[0, L], [-L, 0]]`` with ``L`` antidiagonal."""
    ell = np.array([[0.0, 1.0], [1.0, 0.0]])
    z = np.zeros((2, 2))
    return np.block([[z, ell], [-ell, z]])


def sp4_element(y, z) -> np.ndarray:
    """``n(y, z)``, the generic element of the commutator subgroup of ``N``."""
    return upper_unipotent(4, np.stack(np.broadcast_arrays(y, z, y), axis=-1), [(0, 2), (0, 3), (1, 3)])


def sp4_nilradical_element(x, y, z, w) -> np.ndarray:
    """``exp`` of the generic element of ``Lie(N)`` for Sp4."""
    xs = np.broadcast_arrays(x, y, z, w)
    dtype = complex if any(np.iscomplexobj(t) for t in xs) else float
    x, y, z, w = (np.asarray(t, dtype=dtype) for t in xs)
    m = np.zeros(x.shape + (4, 4), dtype=dtype)
    m[..., 0, 1] = x
    m[..., 0, 2] = y
    m[..., 0, 3] = z
    m[..., 1, 2] = w
    m[..., 1, 3] = y
    m[..., 2, 3] = -x
    out = np.broadcast_to(np.eye(4, dtype=dtype), m.shape).copy()
    term = out.copy()
    for j in range(1, 4):
        term = term @ m / j
        out = out + term
    return out


def log_sp4_commutator_rho(y, z, field: Optional[str] = None):
    """``log a(n(y, z))^rho``."""
    if field is None:
        field = "C" if (np.iscomplexobj(y) or np.iscomplexobj(z)) else "R"
    with np.errstate(divide="ignore"):
        ly2 = 2.0 * np.log(np.abs(np.asarray(y)))
        lz2 = 2.0 * np.log(np.abs(np.asarray(z)))
    first = np.logaddexp(0.0, np.logaddexp(ly2, lz2))
    second = np.logaddexp(2.0 * np.logaddexp(0.0, ly2), lz2)
    return 0.5 * field_dim(field) * (first + second)


def sp4_commutator_rho(y, z, field: Optional[str] = None):
    return np.exp(log_sp4_commutator_rho(y, z, field))


# ---------------------------------------------------------------- SO(n+2, 2)

def so_form(n: int) -> np.ndarray:
    """The symmetric form ``H`` defining SO(n+2, 2) in dimension ``n + 4``."""
    ell = np.array([[0.0, 1.0], [1.0, 0.0]])
    h = np.zeros((n + 4, n + 4))
    h[:2, -2:] = ell
    h[-2:, :2] = ell
    h[2:-2, 2:-2] = np.eye(n)
    return h


def so_nilpotent(y, z) -> np.ndarray:
    """The element of ``[n, n]`` with parameters ``y`` (length ``n``) and ``z``."""
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    z = np.asarray(z, dtype=float)
    x = np.zeros(y.shape[:-1] + (n + 4, n + 4))
    x[..., 0, 2:n + 2] = y
    x[..., 0, n + 2] = z
    x[..., 1, n + 3] = -z
    x[..., 2:n + 2, n + 3] = -y
    return x


def so_element(y, z) -> np.ndarray:
    """``exp(X)`` for ``X = so_nilpotent(y, z)``, written out in closed form."""
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    g = np.broadcast_to(np.eye(n + 4), y.shape[:-1] + (n + 4, n + 4)).copy()
    g += so_nilpotent(y, z)
    g[..., 0, n + 3] = -0.5 * np.sum(y**2, axis=-1)
    return g


def log_so_rho2(y, z):
    """``log a(exp X)^{2 rho}`` on SO(n+2, 2)."""
    y = np.asarray(y, dtype=float)
    n = y.shape[-1]
    ls = log_sum_abs2(y) - np.log(2.0)  # log(|y|^2 / 2)
    with np.errstate(divide="ignore"):
        lz2 = 2.0 * np.log(np.abs(np.asarray(z, dtype=float)))
    l1s = np.logaddexp(0.0, ls)
    first = np.logaddexp(2.0 * l1s, lz2)
    second = np.logaddexp(0.0, np.logaddexp(lz2, ls))
    return first + n * second


def so_rho2(y, z):
    return np.exp(log_so_rho2(y, z))


# ---------------------------------------------------------------- real rank one

def log_rank_one_rho(norm_x2, norm_y2, p: RankOneParams):
    """``log a(exp(X + Y))^rho`` from the squared norms of ``X`` and ``Y``."""
    norm_x2 = np.asarray(norm_x2, dtype=float)
    norm_y2 = np.asarray(norm_y2, dtype=float)
    if np.any(norm_x2 < 0) or np.any(norm_y2 < 0):
        raise ValueError("squared norms must be nonnegative")
    with np.errstate(divide="ignore"):
        lx = np.logaddexp(0.0, np.log(0.5 * p.lam_h * norm_x2))
        ly = np.log(2.0 * p.lam_h * norm_y2)
    return (p.m_lambda / 4 + p.m_2lambda / 2) * np.logaddexp(2.0 * lx, ly)


def rank_one_rho(norm_x2, norm_y2, p: RankOneParams):
    return np.exp(log_rank_one_rho(norm_x2, norm_y2, p))


# ---------------------------------------------------------------- comparison function

def log_psi(x, u, alpha: float):
    """``log psi_{alpha,u,m}(x)`` where

    ``psi = (1 + sum |x_i|^2 + |<u, x>|^2)^alpha * prod (1 + |x_i|^2)``.
    """
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    x = np.asarray(x)
    u = np.asarray(u)
    if x.shape[-1] != u.shape[-1]:
        raise ValueError("x and u differ in length")
    inner = np.sum(np.conj(u) * x, axis=-1)
    terms = np.concatenate([x, inner[..., None]], axis=-1)
    return alpha * log1p_sum_abs2(terms) + np.sum(log1p_abs2(x), axis=-1)


def psi(x, u, alpha: float):
    return np.exp(log_psi(x, u, alpha))


# ---------------------------------------------------------------- compact-factor blocks

def det_block_residual(g) -> float:
    """``|det A - det L / ||x|| |`` where ``L`` and ``A`` are the leading
    ``(n-1)``-blocks of ``g`` and of its compact factor and ``x`` is the last
    column of ``g^{-1}``."""
    g = as_square(g)
    det = np.linalg.det(g)
    if abs(abs(det) - 1) > 1e-8:
        raise ValueError(f"g is not unimodular (|det g| = {abs(det):.6g})")
    k = iwasawa(g).k
    x = np.linalg.solve(g, np.eye(g.shape[0])[:, -1])
    lhs = np.linalg.det(k[:-1, :-1])
    rhs = np.linalg.det(g[:-1, :-1]) / np.linalg.norm(x)
    return float(abs(lhs - rhs))


@dataclass(frozen=True)
class UnitaryBlockResiduals:
    modulus: float  # ||det A| - |d||
    inverse: float  # ||c A^{-1} + b^* / conj(d)|| / max(1, ||b^* / conj(d)||)
    phase: float  # |det A - conj(d) det B|, diagnostic only
    phase_as_stated: float  # |det A - d det B|, diagnostic only


def unitary_block_residuals(b, tol: float = IDENTITY_TOL) -> UnitaryBlockResiduals:
    """Residuals of the block identities for ``B = [[A, b], [c, d]]`` unitary."""
    b = as_square(b)
    n = b.shape[0]
    if np.max(np.abs(b @ adjoint(b) - np.eye(n))) > tol:
        raise ValueError("B is not orthogonal/unitary")
    a_blk, col, row, d = b[:-1, :-1], b[:-1, -1], b[-1, :-1], b[-1, -1]
    if abs(d) < tol:
        raise ZeroDivisionError("corner entry d vanishes; c A^{-1} is undefined")
    det_a = np.linalg.det(a_blk)
    det_b = np.linalg.det(b)
    c_ainv = np.linalg.solve(a_blk.T, row)  # row vector c A^{-1}
    expected = -np.conj(col) / np.conj(d)
    return UnitaryBlockResiduals(
        modulus=float(abs(abs(det_a) - abs(d))),
        inverse=float(np.linalg.norm(c_ainv - expected) / max(1.0, np.linalg.norm(expected))),
        phase=float(abs(det_a - np.conj(d) * det_b)),
        phase_as_stated=float(abs(det_a - d * det_b)),
    )
