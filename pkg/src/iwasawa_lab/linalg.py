"""Dense linear algebra over R or C used as the numerical substrate.

Matrices are plain numpy arrays; a complex dtype selects the field C,
anything else is treated as R.
"""

from __future__ import annotations

import numpy as np

IDENTITY_TOL = 1e-9
SPECTRAL_TOL = 1e-8


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    pass


class SingularMatrixError(np.linalg.LinAlgError):
    pass


def field_of(m) -> str:
    """Return ``"C"`` for complex input, ``"R"`` otherwise."""
    return "C" if np.iscomplexobj(m) else "R"


def field_dim(field: str) -> int:
    """Real dimension of the field, 1 for R and 2 for C."""
    if field not in ("R", "C"):
        raise ValueError(f"unknown field {field!r}")
    return 1 if field == "R" else 2


def as_square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if not np.iscomplexobj(m):
        m = m.astype(float)
    return m


def adjoint(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def ldl_unipotent_factor(m, tol: float = IDENTITY_TOL):
    """Factor a Hermitian positive definite ``m`` as ``L @ diag(d) @ L^*``.

    ``L`` is unit lower triangular and every ``d[i] > 0``.

    Raises
    ------
    NotPositiveDefiniteError
        If a pivot is not positive.
    """
    m = as_square(m)
    scale = max(np.max(np.abs(m)), 1.0)
    if np.max(np.abs(m - adjoint(m))) > tol * scale:
        raise ValueError("matrix is not Hermitian")
    try:
        c = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("not positive definite") from exc
    diag = np.real(np.diagonal(c))
    if np.any(diag <= 0) or not np.all(np.isfinite(diag)):
        raise NotPositiveDefiniteError("not positive definite")
    return c / diag, diag**2


def gram_norm(cols) -> float:
    """Norm of the wedge product of the given vectors.

    Equal to ``sqrt(det(M^* M))`` where ``M`` has the vectors as columns; the
    Gram determinant is taken from a Cholesky factorisation. Linearly
    dependent vectors give 0.
    """
    m = np.column_stack([np.asarray(c) for c in cols]) if isinstance(cols, (list, tuple)) else np.asarray(cols)
    if m.ndim == 1:
        m = m[:, None]
    n, k = m.shape
    if k < 1 or k > n:
        raise ValueError(f"need between 1 and {n} vectors, got {k}")
    gram = adjoint(m) @ m
    try:
        c = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        return 0.0
    return float(np.prod(np.real(np.diagonal(c))))


def singular_values(g) -> np.ndarray:
    """Singular values of an invertible matrix, in descending order."""
    g = as_square(g)
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] <= s[0] * np.finfo(float).eps * g.shape[0]:
        raise SingularMatrixError("matrix is singular")
    return s


def is_unitary(k, tol: float = IDENTITY_TOL) -> bool:
    k = np.asarray(k)
    return bool(np.max(np.abs(k @ adjoint(k) - np.eye(k.shape[0]))) < tol)


def expm_series(x, tol: float = 1e-16, max_terms: int = 200) -> np.ndarray:
    """Matrix exponential by Taylor series with scaling and squaring.

    Terminates exactly for nilpotent input, where the series is finite.
    """
    x = as_square(x)
    n = x.shape[0]
    if not np.any(np.linalg.matrix_power(x, n)):
        out = np.eye(n, dtype=x.dtype)
        term = np.eye(n, dtype=x.dtype)
        for j in range(1, n):
            term = term @ x / j
            out = out + term
        return out
    norm = np.linalg.norm(x, 1)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    y = x / 2.0**squarings
    out = np.eye(n, dtype=y.dtype)
    term = np.eye(n, dtype=y.dtype)
    for j in range(1, max_terms):
        term = term @ y / j
        out = out + term
        if np.linalg.norm(term, 1) < tol * np.linalg.norm(out, 1):
            break
    for _ in range(squarings):
        out = out @ out
    return out
