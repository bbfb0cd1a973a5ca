"""Seeded random group elements for property checks."""

from __future__ import annotations

import numpy as np
from scipy.stats import ortho_group, unitary_group

from .closed_forms import upper_unipotent


def gaussian(rng: np.random.Generator, shape, field: str = "R") -> np.ndarray:
    if field == "R":
        return rng.standard_normal(shape)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_sl(rng: np.random.Generator, n: int, field: str = "R") -> np.ndarray:
    """Gaussian matrix rescaled to determinant 1."""
    g = gaussian(rng, (n, n), field)
    det = np.linalg.det(g)
    if field == "R":
        if det < 0:
            g[0] = -g[0]
        return g / abs(det) ** (1.0 / n)
    return g / det ** (1.0 / n)


def random_unipotent(rng: np.random.Generator, n: int, field: str = "R", scale: float = 1.0) -> np.ndarray:
    k = n * (n - 1) // 2
    return upper_unipotent(n, scale * gaussian(rng, k, field))


def random_nstar(rng: np.random.Generator, n: int, field: str = "R", scale: float = 1.0) -> np.ndarray:
    """``diag(w, 1)`` with ``w`` a random unipotent of size ``n - 1``."""
    v = np.eye(n, dtype=complex if field == "C" else float)
    v[:-1, :-1] = random_unipotent(rng, n - 1, field, scale)
    return v


def random_vcol(rng: np.random.Generator, n: int, field: str = "R", scale: float = 1.0) -> np.ndarray:
    v = np.eye(n, dtype=complex if field == "C" else float)
    v[:-1, -1] = scale * gaussian(rng, n - 1, field)
    return v


def random_unitary(rng: np.random.Generator, n: int, field: str = "R") -> np.ndarray:
    """Haar-distributed orthogonal or unitary matrix."""
    if field == "R":
        return ortho_group.rvs(n, random_state=rng) if n > 1 else np.array([[rng.choice([-1.0, 1.0])]])
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(2j * np.pi * rng.random((1, 1)))


def random_spd(rng: np.random.Generator, n: int, field: str = "R") -> np.ndarray:
    """Positive definite ``g g^*`` for Gaussian ``g``."""
    g = gaussian(rng, (n, n), field)
    return g @ g.conj().T + 1e-3 * np.eye(n)
