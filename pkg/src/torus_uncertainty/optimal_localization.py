"""Minimal angular variance over polynomials with a prescribed coefficient support.

The directional problem splits the support into maximal arithmetic
progressions ("threads") of step L; the Rayleigh quotient of the shift
correlation is then block diagonal with tridiagonal Toeplitz blocks whose
eigenpairs are known in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .lattice_fourier import CoeffMap, as_direction, as_vector, lattice_box
from .uncertainty import closed_form_up


class InfiniteVarianceError(ValueError):
    """Every polynomial on the support has infinite angular variance."""


@dataclass(frozen=True)
class SupportSet:
    dim: int
    points: frozenset

    @classmethod
    def from_points(cls, points: Iterable) -> "SupportSet":
        pts = [tuple(int(c) for c in np.atleast_1d(p)) for p in points]
        if not pts:
            raise ValueError("support set must be nonempty")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ValueError("support points have mixed dimensions")
        if len(set(pts)) != len(pts):
            raise ValueError("support points must be distinct")
        return cls(dims.pop(), frozenset(pts))

    @classmethod
    def box(cls, N) -> "SupportSet":
        N = as_vector(N).astype(np.int64)
        return cls.from_points(map(tuple, lattice_box(-N, N).tolist()))

    @classmethod
    def line(cls, k0, L, m: int) -> "SupportSet":
        """``k0, k0+L, ..., k0+mL``."""
        k0 = np.asarray(k0, dtype=np.int64)
        L = as_direction(L, k0.size)
        return cls.from_points(tuple((k0 + i * L).tolist()) for i in range(m + 1))

    @classmethod
    def cross(cls, n: int, d: int) -> "SupportSet":
        """Union of the coordinate segments ``{t e_j : |t| <= n}``."""
        pts = {tuple([0] * d)}
        for j in range(d):
            for t in range(-n, n + 1):
                p = [0] * d
                p[j] = t
                pts.add(tuple(p))
        return cls.from_points(sorted(pts))

    def sorted_points(self) -> list[tuple]:
        return sorted(self.points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class Thread:
    start: tuple
    step: tuple
    length: int

    @property
    def points(self) -> list[tuple]:
        s = np.array(self.start)
        L = np.array(self.step)
        return [tuple((s + i * L).tolist()) for i in range(self.length)]


def thread_decompose(S: SupportSet, L) -> list[Thread]:
    """Split S into maximal progressions of step L.

    Sorted by decreasing length, ties by lexicographically smallest start.
    """
    L = tuple(as_direction(L, S.dim).tolist())
    pts = S.points
    threads = []
    for p in pts:
        prev = tuple(a - b for a, b in zip(p, L))
        if prev in pts:
            continue
        n = 1
        q = tuple(a + b for a, b in zip(p, L))
        while q in pts:
            n += 1
            q = tuple(a + b for a, b in zip(q, L))
        threads.append(Thread(p, L, n))
    threads.sort(key=lambda t: (-t.length, t.start))
    return threads


def halves_matrix(size: int) -> np.ndarray:
    """Tridiagonal Toeplitz matrix: zero diagonal, 1/2 off the diagonal."""
    M = np.zeros((size, size))
    i = np.arange(size - 1)
    M[i, i + 1] = 0.5
    M[i + 1, i] = 0.5
    return M


def toeplitz_eigenpairs(m: int) -> list[tuple[float, np.ndarray]]:
    """Analytic eigenpairs of the ``(m+1) x (m+1)`` halves matrix, descending.

    Eigenvalue ``cos(pi n / (m+2))`` with unnormalized eigenvector
    ``sin(pi n j / (m+2))``, ``j = 1..m+1``.
    """
    if m < 0:
        raise ValueError("matrix index m must be >= 0")
    j = np.arange(1, m + 2)
    return [(math.cos(math.pi * n / (m + 2)), np.sin(math.pi * n * j / (m + 2))) for n in range(1, m + 2)]


@dataclass(frozen=True)
class MinVarSolution:
    polynomial: CoeffMap
    var_angular: float
    m0: int
    up: float
    thread: Thread


def min_var_directional(S: SupportSet, L, normalize: bool = False) -> MinVarSolution:
    """Minimizer of the directional angular variance over polynomials on S.

    Coefficients ``sin(pi j / (m0+2))`` along the longest thread, so the
    squared norm is ``(m0+2)/2`` unless ``normalize`` is set.
    """
    threads = thread_decompose(S, L)
    longest = threads[0]
    m0 = longest.length - 1
    if m0 == 0:
        raise InfiniteVarianceError("no two points of S differ by L; angular variance is infinite")
    _, vec = toeplitz_eigenpairs(m0)[0]
    if normalize:
        vec = vec / np.linalg.norm(vec)
    poly = CoeffMap.from_arrays(np.array(longest.points, dtype=np.int64), vec, S.dim)
    var = math.tan(math.pi / (m0 + 2)) ** 2
    return MinVarSolution(poly, var, m0, closed_form_up("MinVarPoly", m0=m0), longest)


def min_var_gg_rect(N) -> tuple[CoeffMap, float]:
    """Tensor sine minimizer of the Goh-Goodman angular variance on a box.

    Returns the unit-norm polynomial and its variance
    ``(d - sum cos^2 a_j) / (sum cos a_j)^2`` with ``a_j = pi / (2 N_j + 2)``.
    """
    N = as_vector(N).astype(np.int64)
    if np.any(N < 1):
        raise ValueError("box half-widths must be positive")
    grid = lattice_box(-N, N)
    ell = grid + N + 1
    coeff = np.prod(np.sin(np.pi * ell / (2 * N + 2)) / np.sqrt(N + 1), axis=1)
    poly = CoeffMap.from_arrays(grid, coeff, N.size, canonical=True)
    c = np.cos(np.pi / (2 * N + 2))
    var = (N.size - math.fsum(c**2)) / math.fsum(c) ** 2
    return poly, var


# randomized oracle ------------------------------------------------------------


def shift_matrix(S: SupportSet, L) -> tuple[np.ndarray, list[tuple]]:
    """Symmetric matrix of the real form ``sum_k c_{k-L} c_k`` on S (no threads)."""
    L = as_direction(L, S.dim)
    pts = S.sorted_points()
    where = {p: i for i, p in enumerate(pts)}
    M = np.zeros((len(pts), len(pts)))
    for p, i in where.items():
        q = tuple((np.array(p) - L).tolist())
        if q in where:
            M[i, where[q]] += 0.5
            M[where[q], i] += 0.5
    return M, pts


def rayleigh_oracle(S: SupportSet, L, restarts: int = 10_000, steps: int = 60, seed: int = 0) -> float:
    """Best Rayleigh quotient found by projected gradient ascent from random starts.

    An independent check on the analytic maximum ``cos(pi/(m0+2))``; it never
    looks at the thread decomposition.
    """
    M, _ = shift_matrix(S, L)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((M.shape[0], restarts))
    X /= np.linalg.norm(X, axis=0)
    best = -np.inf
    lr = 0.5
    for _ in range(steps):
        G = M @ X
        q = np.einsum("ij,ij->j", X, G)
        best = max(best, float(q.max()))
        # gradient of the quotient on the sphere is 2(MX - qX); project back
        X = X + lr * 2.0 * (G - q * X)
        X /= np.linalg.norm(X, axis=0)
    q = np.einsum("ij,ij->j", X, M @ X)
    return max(best, float(q.max()))
