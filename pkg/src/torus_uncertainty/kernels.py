"""Explicit coefficient families: Dirichlet, Fejer, powered cosine and friends."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice_fourier import CoeffMap, as_direction, as_vector, lattice_box

FAMILIES = (
    "DirichletRect",
    "FejerInf",
    "PoweredCos",
    "PerturbedP",
    "PerturbedT",
    "DirichletAlongL",
    "FejerAlongL",
)


@dataclass(frozen=True)
class KernelParams:
    family: str
    n: int | None = None
    N: tuple[int, ...] | None = None
    d: int | None = None
    L: tuple[int, ...] | None = None
    k0: tuple[int, ...] | None = None

    def build(self) -> CoeffMap:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.family == "DirichletRect":
            if self.N is None:
                raise ValueError("DirichletRect needs N")
            return dirichlet_rect(self.N)
        if self.n is None:
            raise ValueError(f"{self.family} needs n")
        if self.family == "FejerInf":
            d = self.d if self.d is not None else (len(self.L) if self.L else 1)
            return fejer_inf(self.n, d)
        if self.L is None:
            raise ValueError(f"{self.family} needs a direction L")
        if self.family == "PoweredCos":
            return powered_cos(self.n, self.L)
        if self.family == "PerturbedP":
            return perturbed_p(self.n, self.L)
        if self.family == "PerturbedT":
            return perturbed_t(self.n, self.L)
        if self.family == "DirichletAlongL":
            return dirichlet_along(self.n, self.L, self.k0)
        return fejer_along(self.n, self.L, self.k0)


def _check_n(n: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"size parameter must be an integer >= 1, got {n}")
    return int(n)


def dirichlet_rect(N) -> CoeffMap:
    """Rectangular Dirichlet kernel: unit coefficients on ``-N <= k <= N``."""
    N = as_vector(N).astype(np.int64)
    if np.any(N < 1):
        raise ValueError("Dirichlet kernel needs N > 0 componentwise")
    grid = lattice_box(-N, N)
    return CoeffMap.from_arrays(grid, np.ones(grid.shape[0]), N.size, canonical=True)


def fejer_inf(n: int, d: int) -> CoeffMap:
    """Fejer kernel with weights ``1 - ||k||_inf / n`` on ``||k||_inf < n``."""
    n = _check_n(n)
    if d < 1:
        raise ValueError("dimension must be >= 1")
    grid = lattice_box([-(n - 1)] * d, [n - 1] * d)
    w = 1.0 - np.abs(grid).max(axis=1) / n
    return CoeffMap.from_arrays(grid, w, d, canonical=True)


def _line(n: int, L: np.ndarray, weights: np.ndarray, k0=None) -> CoeffMap:
    m = np.arange(-n, n + 1, dtype=np.int64)
    k0 = np.zeros(L.size, dtype=np.int64) if k0 is None else as_vector(k0, L.size).astype(np.int64)
    return CoeffMap.from_arrays(k0 + np.outer(m, L), weights, L.size)


def powered_cos_weights(n: int) -> np.ndarray:
    """Coefficients ``C(2n, n+m) / 2^n``, ``m = -n..n``, of ``(1 + cos t)^n``."""
    n = _check_n(n)
    scale = 2**n
    # exact integer binomials, correctly rounded by int / int
    try:
        return np.array([math.comb(2 * n, n + m) / scale for m in range(-n, n + 1)])
    except OverflowError:
        raise ValueError(f"coefficients of p_{n} exceed the float range") from None


def powered_cos(n: int, L) -> CoeffMap:
    """``p_n(x) = (1 + cos 2 pi <L,x>)^n``."""
    L = as_direction(L)
    return _line(n, L, powered_cos_weights(n))


def perturbed_p(n: int, L) -> CoeffMap:
    """``p_n(x) + 2 cos 2 pi x_1``; requires L not collinear with e_1."""
    L = as_direction(L)
    if not np.any(L[1:]):
        raise ValueError(f"L={L.tolist()} is collinear with e_1")
    e1 = np.zeros(L.size, dtype=np.int64)
    e1[0] = 1
    extra = CoeffMap.from_arrays(np.vstack([e1, -e1]), [1.0, 1.0], L.size)
    return powered_cos(n, L) + extra


def perturbed_t(n: int, L) -> CoeffMap:
    """``(1 + cos 2 pi x_1)^n + 2 cos 2 pi <L,x>``.

    Requires L not collinear with any axis and ``|L_j| > 1`` for every j.
    """
    L = as_direction(L)
    if np.count_nonzero(L) < 2:
        raise ValueError(f"L={L.tolist()} is collinear with a coordinate axis")
    if np.any(np.abs(L) <= 1):
        raise ValueError(f"L={L.tolist()} needs |L_j| > 1 for all j")
    e1 = np.zeros(L.size, dtype=np.int64)
    e1[0] = 1
    extra = CoeffMap.from_arrays(np.vstack([L, -L]), [1.0, 1.0], L.size)
    return _line(n, e1, powered_cos_weights(n)) + extra


def dirichlet_along(n: int, L, k0=None) -> CoeffMap:
    """Unit coefficients at ``k0 + m L``, ``|m| <= n``."""
    n = _check_n(n)
    L = as_direction(L)
    return _line(n, L, np.ones(2 * n + 1), k0)


def fejer_along(n: int, L, k0=None) -> CoeffMap:
    """Weights ``1 - |m|/n`` at ``k0 + m L``; the endpoints ``|m| = n`` vanish."""
    n = _check_n(n)
    L = as_direction(L)
    m = np.arange(-n, n + 1)
    return _line(n, L, 1.0 - np.abs(m) / n, k0)
