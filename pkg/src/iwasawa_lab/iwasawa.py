"""Iwasawa decomposition ``g = vbar @ diag(a) @ k`` and weights of ``a(g)``.

Convention: ``vbar`` is unit lower triangular, ``a`` positive, ``k``
orthogonal or unitary. In this convention the weights read off from
wedge products are

* ``mu_j(a) = a_1 ... a_j``, the norm of the first ``j`` rows of ``g``;
* ``Lambda_i(a) = 1 / (a_{n-i+1} ... a_n)``, the norm of the last ``i``
  columns of ``g^{-1}``.

For unimodular ``g`` these coincide up to relabelling:
``Lambda_i = mu_{n-i}``. Every weight formula below is checked in the test
suite against ``iwasawa(g).a`` evaluated through :func:`weight_on_a`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import (
    IDENTITY_TOL,
    SingularMatrixError,
    adjoint,
    as_square,
    field_dim,
    field_of,
    gram_norm,
    singular_values,
)


@dataclass(frozen=True)
class IwasawaFactors:
    vbar: np.ndarray
    a: np.ndarray
    k: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.vbar @ (self.a[:, None] * self.k)


@dataclass(frozen=True)
class WeightCombo:
    """Rational combination of the basic weights ``Lambda_i`` or ``mu_j``.

    ``coeffs[i]`` multiplies the weight with 1-based index ``i + 1``.
    """

    basis: str
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.basis not in ("Lambda", "Mu"):
            raise ValueError(f"unknown weight basis {self.basis!r}")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def zero(cls, basis: str = "Lambda") -> "WeightCombo":
        return cls(basis, ())

    def check_dim(self, n: int) -> None:
        limit = n - 1 if self.basis == "Lambda" else n
        if len(self.coeffs) > limit:
            raise ValueError(
                f"{self.basis} combo of length {len(self.coeffs)} is too long for n={n}"
            )

    def __add__(self, other: "WeightCombo") -> "WeightCombo":
        if other.basis != self.basis:
            raise ValueError("cannot add combos in different bases")
        m = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (m - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (m - len(other.coeffs))
        return WeightCombo(self.basis, tuple(x + y for x, y in zip(a, b)))

    def scale(self, c) -> "WeightCombo":
        return WeightCombo(self.basis, tuple(Fraction(c) * x for x in self.coeffs))


def iwasawa(g) -> IwasawaFactors:
    """Decompose ``g`` via a Householder QR factorisation of ``g^*``.

    ``g^* = Q R`` gives ``g = R^* Q^*`` with ``R^*`` lower triangular; after
    moving the phases of ``diag(R)`` into ``Q`` this is ``vbar diag(a) k``.
    The same factors come from the LDL factorisation of ``g g^*``, but QR
    keeps ``k`` unitary to rounding even for ill-conditioned ``g``.
    """
    g = as_square(g)
    if not np.all(np.isfinite(g)):
        raise ValueError("matrix has non-finite entries")
    q, r = np.linalg.qr(adjoint(g))
    diag = np.diagonal(r)
    a = np.abs(diag)
    # a pivot below rounding of the column it came from means rank deficiency;
    # graded matrices such as large unipotents keep every pivot well above it
    col = np.linalg.norm(g, axis=1)
    if np.any(a <= col * np.finfo(float).eps * g.shape[0]):
        raise SingularMatrixError("matrix is singular")
    phase = diag / a
    q = q * phase  # scale columns
    lower = adjoint(r / phase[:, None])
    vbar = lower / a
    np.fill_diagonal(vbar, 1.0)
    return IwasawaFactors(vbar, a, adjoint(q))


def _check_index(i: int, lo: int, hi: int) -> None:
    if not lo <= i <= hi:
        raise IndexError(f"weight index {i} outside [{lo}, {hi}]")


def a_basic_weight(g, i: int) -> float:
    """``a(g)^{Lambda_i}``: wedge norm of the last ``i`` columns of ``g^{-1}``."""
    g = as_square(g)
    n = g.shape[0]
    _check_index(i, 1, n - 1)
    ginv = np.linalg.inv(g)
    return gram_norm(ginv[:, n - i:])


def a_mu_weight(g, j: int) -> float:
    """``a(g)^{mu_j}``: wedge norm of the first ``j`` rows of ``g``."""
    g = as_square(g)
    n = g.shape[0]
    _check_index(j, 1, n)
    return gram_norm(adjoint(g[:j, :]))


def a_weight_combo(g, w: WeightCombo) -> float:
    g = as_square(g)
    w.check_dim(g.shape[0])
    single = a_basic_weight if w.basis == "Lambda" else a_mu_weight
    log_val = 0.0
    for idx, c in enumerate(w.coeffs, start=1):
        if c:
            log_val += float(c) * np.log(single(g, idx))
    return float(np.exp(log_val))


def log_weight_on_a(a, w: WeightCombo) -> float:
    """Logarithm of the weight ``w`` evaluated on a positive diagonal ``a``."""
    log_a = np.log(np.asarray(a, dtype=float))
    n = log_a.size
    w.check_dim(n)
    total = 0.0
    for idx, c in enumerate(w.coeffs, start=1):
        if not c:
            continue
        if w.basis == "Mu":
            total += float(c) * log_a[:idx].sum()
        else:
            total -= float(c) * log_a[n - idx:].sum()
    return total


def weight_on_a(a, w: WeightCombo) -> float:
    return float(np.exp(log_weight_on_a(a, w)))


def rho_sl(n: int, field: str = "R") -> WeightCombo:
    """``rho`` of SL(n, F) in the Lambda basis: ``dim_R F * sum Lambda_i``."""
    return WeightCombo("Lambda", (field_dim(field),) * (n - 1))


def rho_sl_mu(n: int, field: str = "R") -> WeightCombo:
    return WeightCombo("Mu", (field_dim(field),) * (n - 1))


def rho_sp4(field: str = "R") -> WeightCombo:
    # a^rho = (mu_1 mu_2)^{dim F} for Sp4 realised with the antidiagonal form
    return WeightCombo("Mu", (field_dim(field),) * 2)


def rho_so(n: int) -> WeightCombo:
    """``rho`` of SO(n+2, 2) in the matrix model of size ``n + 4``."""
    k, odd = divmod(n, 2)
    coeffs = [Fraction(1)] * (k + 1)
    if odd:
        coeffs.append(Fraction(1, 2))
    return WeightCombo("Mu", tuple(coeffs))


def sl_log_rho(sigma, field: str = "R") -> float:
    """``rho(log a)`` for SL(n, F) at a dominant ``a`` with entries ``sigma``."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.size
    weights = n + 1 - 2 * np.arange(1, n + 1)
    return 0.5 * field_dim(field) * float(weights @ np.log(sigma))


def group_norm(g) -> float:
    """``||g|| = a^rho`` where ``g = k1 a k2`` with ``a`` dominant."""
    g = as_square(g)
    sigma = singular_values(g)
    det_mod = float(np.prod(sigma))
    if abs(det_mod - 1.0) > 1e-8:
        warnings.warn(f"group_norm of non-unimodular matrix (|det| = {det_mod:.6g})", stacklevel=2)
    return float(np.exp(sl_log_rho(sigma, field_of(g))))


def _is_unit_upper(m, tol: float) -> bool:
    n = m.shape[0]
    return bool(
        np.max(np.abs(np.tril(m, -1)), initial=0.0) <= tol
        and np.max(np.abs(np.diagonal(m) - 1)) <= tol
    )


def check_nstar(v_star, tol: float = IDENTITY_TOL) -> None:
    """Raise unless ``v_star = [[w, 0], [0, 1]]`` with ``w`` unit upper triangular."""
    n = v_star.shape[0]
    if not _is_unit_upper(v_star, tol) or np.max(np.abs(v_star[:-1, -1]), initial=0.0) > tol:
        raise ValueError("v_star is not block-diagonal unipotent of shape [[w, 0], [0, 1]]")


def check_vcol(v1, tol: float = IDENTITY_TOL) -> None:
    """Raise unless ``v1 = [[I, y], [0, 1]]``."""
    n = v1.shape[0]
    if np.max(np.abs(v1[:, :-1] - np.eye(n)[:, :-1])) > tol or abs(v1[-1, -1] - 1) > tol:
        raise ValueError("v1 is not of shape [[I, y], [0, 1]]")


def cocycle_check(v_star, v1) -> float:
    """Relative residual of ``a(v* v1) = a(v*) a(k(v*) v1 k(v*)^{-1})``."""
    v_star = as_square(v_star)
    v1 = as_square(v1)
    if v_star.shape != v1.shape:
        raise ValueError("v_star and v1 differ in size")
    check_nstar(v_star)
    check_vcol(v1)
    lhs = iwasawa(v_star @ v1).a
    f_star = iwasawa(v_star)
    conj = f_star.k @ v1 @ adjoint(f_star.k)
    rhs = f_star.a * iwasawa(conj).a
    return float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))


def reconstruction_error(g, factors: IwasawaFactors) -> float:
    g = np.asarray(g)
    return float(np.max(np.abs(factors.reconstruct() - g)) / max(np.max(np.abs(g)), 1.0))
