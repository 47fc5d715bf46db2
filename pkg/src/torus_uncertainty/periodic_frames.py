"""Periodic Parseval wavelet frames on T^d from a dilation matrix with |det| = 2.

Everything lives in the coefficient domain.  Level-j masks are
``B^j``-periodic sequences on Z^d (``B = A^T``); lattice reductions modulo
``B^j`` are done in exact integer arithmetic via ``B^{-j} = adj(B^j)/det(B^j)``
so boundary points of the fundamental domains are classified exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .lattice_fourier import CoeffMap, as_direction, as_vector, fsum_real
from .uncertainty import psi_limit, up_directional

DEFAULT_BUDGET = 50_000_000
# upper end of the level range on which the exp-ball radius is verified
BALL_CHECK_LEVELS = 4096
LEVEL_ONE_CONVENTIONS = ("limit", "zero")


class DilationError(ValueError):
    pass


class CoverageError(RuntimeError):
    """A lattice point matched none of the three mask cases."""


class BudgetExceeded(RuntimeError):
    pass


# small exact integer linear algebra ---------------------------------------------


def _matmul(X, Y):
    return tuple(
        tuple(sum(X[i][k] * Y[k][j] for k in range(len(Y))) for j in range(len(Y[0]))) for i in range(len(X))
    )


def _matvec(X, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in X)


def _transpose(X):
    return tuple(zip(*X))


def _det(X) -> int:
    n = len(X)
    if n == 1:
        return X[0][0]
    return sum(
        (-1) ** j * X[0][j] * _det(tuple(row[:j] + row[j + 1 :] for row in X[1:])) for j in range(n)
    )


def _adjugate(X):
    n = len(X)
    if n == 1:
        return ((1,),)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(row[:j] + row[j + 1 :] for r, row in enumerate(X) if r != i)
            cof[i][j] = (-1) ** (i + j) * _det(minor)
    return _transpose(tuple(map(tuple, cof)))


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _in_lattice(M, v) -> bool:
    """Is ``v`` in ``M Z^d``?"""
    det = _det(M)
    return all(x % det == 0 for x in _matvec(_adjugate(M), v))


class _PowerTower:
    """Cached ``(M^r, adj(M^r), det(M^r))`` for one integer matrix."""

    def __init__(self, M):
        self.M = M
        self.adj1 = _adjugate(M)
        self.det1 = _det(M)
        self._pow = [_identity(len(M))]
        self._adj = [_identity(len(M))]

    def power(self, r: int):
        while len(self._pow) <= r:
            self._pow.append(_matmul(self._pow[-1], self.M))
            self._adj.append(_matmul(self.adj1, self._adj[-1]))
        return self._pow[r], self._adj[r], self.det1**r


# dilation matrices ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DilationMatrix:
    """Integer dilation matrix A with |det A| = 2 and its frequency transpose B."""

    A: tuple
    k0: tuple
    theta0: float
    j0: int
    _A_tower: _PowerTower = field(repr=False, compare=False, default=None)
    _B_tower: _PowerTower = field(repr=False, compare=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.A)

    @property
    def B(self) -> tuple:
        return _transpose(self.A)

    @property
    def det(self) -> int:
        return self._A_tower.det1

    def A_power(self, r):
        return self._A_tower.power(r)

    def B_power(self, r):
        return self._B_tower.power(r)

    def ball_level(self, radius: float) -> int:
        """Smallest level r >= j0 whose exp-ball of radius (1+theta0)^r / 2 exceeds ``radius``."""
        if radius <= 0.5:
            return self.j0
        return max(self.j0, int(math.floor(math.log(2 * radius) / math.log1p(self.theta0))) + 1)


def _choose_k0(A, B) -> tuple:
    """Nontrivial residue for both A and B with ``<k0, B^{-1} k0>`` in 1/2 + Z.

    The last condition makes the wavelet masks orthogonal to the scaling masks.
    """
    d = len(A)
    adjB, detB = _adjugate(B), _det(B)
    cands = [v for v in itertools.product(range(-2, 3), repeat=d) if any(v)]
    cands.sort(key=lambda v: (sum(map(abs, v)), tuple(-x for x in v)))
    for v in cands:
        if _in_lattice(A, v) or _in_lattice(B, v):
            continue
        q = Fraction(sum(a * b for a, b in zip(v, _matvec(adjB, v))), detB)
        if (q - Fraction(1, 2)).denominator == 1:
            return tuple(v)
    raise DilationError("no coset representative k0 satisfies the mask conditions")


def _ball_levels(B, theta0: float) -> int:
    """Smallest j0 with radius (1+theta0)^j/2 balls inside int(K_{j-1}) for j0 <= j <= BALL_CHECK_LEVELS."""
    Binv = np.linalg.inv(np.array(B, dtype=float))
    M = np.eye(len(B))
    log_scale = 0.0
    ok = []
    for j in range(1, BALL_CHECK_LEVELS + 1):
        # M * exp(log_scale) == B^{-(j-1)}
        row_norm = float(np.sqrt((M**2).sum(axis=1)).max())
        lhs = j * math.log1p(theta0) - math.log(2) + (math.log(row_norm) + log_scale if row_norm > 0 else -math.inf)
        ok.append(lhs < math.log(0.5))
        M = Binv @ M
        s = float(np.abs(M).max())
        if s > 0:
            M /= s
            log_scale += math.log(s)
    j0 = None
    for j in range(BALL_CHECK_LEVELS, 0, -1):
        if not ok[j - 1]:
            break
        j0 = j
    if j0 is None:
        raise DilationError("exp-ball inclusion fails on the checked level range")
    return max(j0, 2)


def validate_dilation(A) -> DilationMatrix:
    """Check |det A| = 2 and expansiveness; pick k0 and the exp-ball rate theta0."""
    arr = np.asarray(A)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DilationError("dilation matrix must be square")
    if not np.all(arr == np.round(arr)):
        raise DilationError("dilation matrix must have integer entries")
    A_t = tuple(tuple(int(x) for x in row) for row in arr.tolist())
    if abs(_det(A_t)) != 2:
        raise DilationError(f"|det A| must be 2, got {abs(_det(A_t))}")
    eig = np.abs(np.linalg.eigvals(arr.astype(float)))
    if np.any(eig <= 1 + 1e-9):
        raise DilationError(f"eigenvalue moduli {eig.tolist()} must all exceed 1")
    B_t = _transpose(A_t)
    k0 = _choose_k0(A_t, B_t)
    rho = 1.0 / eig.min()
    theta0 = 0.9 * (1.0 / rho - 1.0)
    j0 = _ball_levels(B_t, theta0)
    return DilationMatrix(A_t, k0, theta0, j0, _PowerTower(A_t), _PowerTower(B_t))


QUINCUNX = ((1, 1), (-1, 1))


def default_dilation(d: int) -> DilationMatrix:
    """``[2]`` for d=1, quincunx for d=2, companion matrix of x^d - 2 otherwise."""
    if d == 1:
        return validate_dilation([[2]])
    if d == 2:
        return validate_dilation(QUINCUNX)
    C = np.zeros((d, d), dtype=int)
    C[0, -1] = 2
    C[np.arange(1, d), np.arange(d - 1)] = 1
    return validate_dilation(C)


def coset_reps_level(D: DilationMatrix, j: int) -> list[tuple]:
    """Digit expansions ``sum_{i<j} A^i e_i k0``, ``e_i in {0,1}``: 2^j residues mod A^j."""
    if j < 0:
        raise ValueError("level must be >= 0")
    digits = [_matvec(D.A_power(i)[0], D.k0) for i in range(j)]
    reps = []
    for bits in itertools.product((0, 1), repeat=j):
        v = [0] * D.dim
        for b, dig in zip(bits, digits):
            if b:
                v = [x + y for x, y in zip(v, dig)]
        reps.append(tuple(v))
    return reps


def congruent(D: DilationMatrix, j: int, x, y) -> bool:
    """``x = y mod A^j Z^d``."""
    return _in_lattice(D.A_power(j)[0], tuple(a - b for a, b in zip(x, y)))


# masks ---------------------------------------------------------------------------


class PeriodicFrame:
    """Masks, scaling and wavelet coefficients for a dilation and direction L."""

    def __init__(self, dilation: DilationMatrix, L, level_one: str = "limit"):
        if level_one not in LEVEL_ONE_CONVENTIONS:
            raise ValueError(f"level_one must be one of {LEVEL_ONE_CONVENTIONS}")
        self.level_one = level_one
        self.D = dilation
        self.L = tuple(as_direction(L, dilation.dim).tolist())
        self.nL2 = sum(x * x for x in self.L)
        Binv = np.linalg.inv(np.array(dilation.B, dtype=float))
        a = 0.5 * float(np.abs(Binv).sum(axis=1).max())
        h = math.ceil(a + 0.5)
        self._deltas = list(itertools.product(range(-h, h + 1), repeat=dilation.dim))
        self._deltas.sort(key=lambda v: sum(map(abs, v)))
        self._nu = lru_cache(maxsize=200_000)(self._nu_uncached)

    def __getstate__(self):
        state = dict(self.__dict__)
        del state["_nu"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._nu = lru_cache(maxsize=200_000)(self._nu_uncached)

    @property
    def dim(self) -> int:
        return self.D.dim

    # exact lattice geometry

    def _coords(self, r: int, k):
        """Integer numerators n and denominator D > 0 with ``B^{-r} k = n / D``."""
        _, adj, det = self.D.B_power(r)
        n = _matvec(adj, k)
        if det < 0:
            return tuple(-x for x in n), -det
        return n, det

    def in_interior(self, m: int, k) -> bool:
        """``k in int(K_m)``, i.e. ``B^{-m} k`` in the open cube (-1/2, 1/2)^d."""
        n, den = self._coords(m, k)
        return all(2 * abs(x) < den for x in n)

    def in_domain(self, m: int, k) -> bool:
        """``k in K_m``: ``B^{-m} k`` in the half-open cube [-1/2, 1/2)^d."""
        n, den = self._coords(m, k)
        return all(-den <= 2 * x < den for x in n)

    def reduce(self, r: int, k) -> tuple:
        """Representative of ``k mod B^r Z^d`` in the fundamental domain K_r."""
        n, den = self._coords(r, k)
        p = tuple((2 * x + den) // (2 * den) for x in n)
        Bp = self.D.B_power(r)[0]
        shift = _matvec(Bp, p)
        return tuple(a - b for a, b in zip(k, shift))

    def _class_rep(self, r: int, k, closed: bool):
        """A representative y of k mod B^r with ``B^{-(r-1)} y`` in the open (or closed) cube."""
        n, den = self._coords(r, k)
        p0 = tuple(-((2 * x + den) // (2 * den)) for x in n)
        B = self.D.B
        for delta in self._deltas:
            p = tuple(a + b for a, b in zip(p0, delta))
            w = _matvec(B, tuple(x + den * q for x, q in zip(n, p)))
            if closed:
                if all(2 * abs(x) <= den for x in w):
                    return tuple(a + b for a, b in zip(k, _matvec(self.D.B_power(r)[0], p)))
            elif all(2 * abs(x) < den for x in w):
                return tuple(a + b for a, b in zip(k, _matvec(self.D.B_power(r)[0], p)))
        return None

    def f(self, r: int, k) -> float:
        """Gaussian ``exp(-|L|^2 |k|^2 / (r (r-1)))``.

        At r = 1 the formula is singular: ``"limit"`` uses its r -> 1 limit (the
        indicator of 0), ``"zero"`` sets f_1 to 0.
        """
        q = self.nL2 * sum(x * x for x in k)
        if r == 1:
            return 1.0 if q == 0 and self.level_one == "limit" else 0.0
        if q.bit_length() > 1000:
            return 0.0
        return math.exp(-q / (r * (r - 1)))

    def _nu_uncached(self, r: int, k: tuple) -> float:
        if r < 1:
            raise ValueError("mask level must be >= 1")
        y = self._class_rep(r, k, closed=False)
        if y is not None:
            return self.f(r, y)
        if self._class_rep(r, k, closed=True) is not None:
            return 1.0 / math.sqrt(2.0)
        shift = _matvec(self.D.B_power(r - 1)[0], self.D.k0)
        partner = tuple(a - b for a, b in zip(k, shift))
        y = self._class_rep(r, partner, closed=False)
        if y is not None:
            return math.sqrt(max(0.0, 1.0 - self.f(r, y) ** 2))
        # shell classes need not be closed under the shift (e.g. A = [[0,2],[1,0]]);
        # the partner of a shell class is split evenly as well
        if self._class_rep(r, partner, closed=True) is not None:
            return 1.0 / math.sqrt(2.0)
        raise CoverageError(f"point {k} at level {r} is covered by no mask case")

    def nu(self, r: int, k) -> float:
        return self._nu(int(r), tuple(int(x) for x in k))

    def mu(self, r: int, k) -> float:
        return math.sqrt(2.0) * self.nu(r, k)

    def phase(self, r: int, k) -> complex:
        """``exp(2 pi i <k0, B^{-r} k>)`` from the exact rational argument."""
        n, den = self._coords(r, tuple(int(x) for x in k))
        t = Fraction(sum(a * b for a, b in zip(self.D.k0, n)) % den, den)
        return complex(np.exp(2j * math.pi * float(t)))

    def lam(self, r: int, k) -> complex:
        k = tuple(int(x) for x in k)
        shift = _matvec(self.D.B_power(r - 1)[0], self.D.k0)
        return self.phase(r, k) * self.mu(r, tuple(a + b for a, b in zip(k, shift)))

    def level(self, j: int) -> "FrameLevel":
        return FrameLevel(self, j)

    # infinite product

    def cutoff(self, k) -> int:
        """Smallest level R >= 2 with k in int(K_{r-1}) for every r >= R."""
        k = tuple(int(x) for x in k)
        R = self.D.ball_level(math.sqrt(sum(x * x for x in k)))
        if not all(self.in_interior(r - 1, k) for r in range(R, R + 3)):
            raise DilationError(f"exp-ball bound failed for {k}; theta0 too large")
        while R > 2 and self.in_interior(R - 2, k):
            R -= 1
        return R

    def xi_hat(self, j: int, k, extra_levels: int = 0) -> float:
        """``prod_{r > j} nu_r(k)`` with the Gaussian tail summed in closed form.

        Past the cutoff R every factor is ``f_r(k)``, and
        ``sum_{r >= R} 1/(r(r-1)) = 1/(R-1)``.
        """
        if j < 0:
            raise ValueError("level must be >= 0")
        k = tuple(int(x) for x in k)
        R = self.cutoff(k) + extra_levels
        q = self.nL2 * sum(x * x for x in k)
        if j + 1 >= R:
            return math.exp(-q / j)
        prod = 1.0
        for r in range(j + 1, R):
            prod *= self.nu(r, k)
            if prod == 0.0:
                return 0.0
        return prod * math.exp(-q / (R - 1))

    def phi_hat(self, j: int, k) -> float:
        return 2.0 ** (-j / 2) * self.xi_hat(j, k)

    def psi_hat(self, j: int, k) -> complex:
        return self.lam(j + 1, k) * self.phi_hat(j + 1, k)

    def envelope(self, j: int, radius: np.ndarray) -> np.ndarray:
        """Upper bound of ``xi_hat(j, k)`` for ``|k| = radius``."""
        radius = np.asarray(radius, dtype=float)
        levels = np.array([self.D.ball_level(r) for r in radius.ravel()]).reshape(radius.shape)
        denom = np.maximum(j, levels - 1).astype(float)
        return np.exp(-self.nL2 * radius**2 / np.maximum(denom, 1.0))

    def truncation_radius(self, j: int, eps: float) -> int:
        """Radius beyond which the envelope stays below eps, plus one shell."""
        target = math.log(1.0 / eps)
        r = 1
        while True:
            levels = max(j, self.D.ball_level(r) - 1, 1)
            if self.nL2 * r * r / levels >= target:
                return r + 1
            r += 1


@dataclass(frozen=True)
class FrameLevel:
    frame: PeriodicFrame
    j: int

    def nu(self, k) -> float:
        return self.frame.nu(self.j, k)

    def mu(self, k) -> float:
        return self.frame.mu(self.j, k)

    def lam(self, k) -> complex:
        return self.frame.lam(self.j, k)


def nu(level: FrameLevel, k) -> float:
    return level.nu(k)


def xi_hat(frame: PeriodicFrame, j: int, k, extra_levels: int = 0) -> float:
    return frame.xi_hat(j, k, extra_levels)


def fundamental_domain(frame: PeriodicFrame, j: int) -> list[tuple]:
    """Lattice points of ``K_j = Z^d cap B^j [-1/2, 1/2)^d``."""
    Bj = np.array(frame.D.B_power(j)[0], dtype=float)
    half = 0.5 * np.abs(Bj).sum(axis=1)
    ranges = [range(-int(math.ceil(h)), int(math.ceil(h)) + 1) for h in half]
    pts = [k for k in itertools.product(*ranges) if frame.in_domain(j, k)]
    if len(pts) != 2**j:
        raise CoverageError(f"K_{j} has {len(pts)} points, expected {2**j}")
    return pts


def ball_points(dim: int, radius: float) -> np.ndarray:
    r = int(math.floor(radius))
    axis = np.arange(-r, r + 1)
    grid = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    return grid[(grid**2).sum(axis=1) <= radius * radius]


# frame elements ------------------------------------------------------------------


@dataclass(frozen=True)
class FrameElementCoeffs:
    phi_hat: CoeffMap
    psi_hat: CoeffMap
    j: int
    truncation_radius: int
    tail_bound: float


def _tail_bound(frame: PeriodicFrame, j: int, radius: int, scale: float) -> float:
    """Envelope mass ``sum |xi|^2`` outside the ball, summed out to 3x the radius."""
    pts = ball_points(frame.dim, 3 * radius)
    norms = np.sqrt((pts**2).sum(axis=1))
    outside = norms > radius
    if not outside.any():
        return 0.0
    env = frame.envelope(j, norms[outside])
    return scale * fsum_real(env**2)


def frame_element_coeffs(frame: PeriodicFrame, j: int, eps: float = 1e-8) -> FrameElementCoeffs:
    """Truncated coefficients of the scaling function phi_j and wavelet psi_j."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if j < 0:
        raise ValueError("level must be >= 0")
    radius = frame.truncation_radius(j + 1, eps)
    pts = ball_points(frame.dim, radius)
    keys = [tuple(p) for p in pts.tolist()]
    phi = np.array([frame.phi_hat(j, k) for k in keys])
    psi = np.array([frame.psi_hat(j, k) for k in keys])
    tail = _tail_bound(frame, j, radius, 2.0 ** (-j)) + _tail_bound(frame, j + 1, radius, 2.0 ** (1 - (j + 1)))
    return FrameElementCoeffs(
        CoeffMap.from_arrays(pts, phi, frame.dim),
        CoeffMap.from_arrays(pts, psi, frame.dim),
        j,
        radius,
        tail,
    )


# verification --------------------------------------------------------------------


def uep_identity_check(frame: PeriodicFrame, j: int, window=None) -> dict:
    """Max residuals of the two mask identities over a window (default: K_j).

    (i)  ``mu_j(k)^2 + |lambda_j(k)|^2 = 2``
    (ii) ``mu_j(k) mu_j(k') + lambda_j(k) conj(lambda_j(k')) = 0``, ``k' = k + B^{j-1} k0``
    """
    if j < 1:
        raise ValueError("mask level must be >= 1")
    pts = fundamental_domain(frame, j) if window is None else [tuple(int(x) for x in k) for k in window]
    shift = _matvec(frame.D.B_power(j - 1)[0], frame.D.k0)
    res1 = 0.0
    res2 = 0.0
    comp = 0.0
    for k in pts:
        kp = tuple(a + b for a, b in zip(k, shift))
        mu_k, mu_kp = frame.mu(j, k), frame.mu(j, kp)
        lam_k, lam_kp = frame.lam(j, k), frame.lam(j, kp)
        res1 = max(res1, abs(mu_k**2 + abs(lam_k) ** 2 - 2.0))
        res2 = max(res2, abs(mu_k * mu_kp + lam_k * np.conj(lam_kp)))
        comp = max(comp, abs(frame.nu(j, k) ** 2 + frame.nu(j, kp) ** 2 - 1.0))
    return {"j": j, "points": len(pts), "residual_i": res1, "residual_ii": res2, "complementarity": comp}


def _translate_energy(frame: PeriodicFrame, j: int, f: CoeffMap, coeff: np.ndarray, reps: list[tuple]) -> float:
    """``sum_{k in reps} |sum_m c_m conj(g(m)) exp(2 pi i <m, A^{-j} k>)|^2``."""
    _, adjA, det = frame.D.A_power(j)
    den = abs(det)
    sgn = 1 if det > 0 else -1
    m_adj = [tuple(sgn * x % den for x in _matvec(_transpose(adjA), m)) for m in f.indices.tolist()]
    # <m, A^{-j} k> = (adj(A^j)^T m) . k / det(A^j)
    num = np.array([[sum(a * b for a, b in zip(ma, k)) % den for k in reps] for ma in m_adj], dtype=float)
    twiddle = np.exp(2j * np.pi * num / den)
    a = f.values * np.conj(coeff)
    pair = a @ twiddle
    return fsum_real(np.abs(pair) ** 2)


def parseval_cascade_check(frame: PeriodicFrame, f: CoeffMap, J: int, budget: int = DEFAULT_BUDGET) -> dict:
    """Energies of f against the level-j scaling and wavelet translates.

    ``E_j = sum_{k in L_j} |<f, phi_j(. - A^{-j} k)>|^2`` and ``W_j`` likewise for
    psi_j.  The mask identities give ``E_{j+1} = E_j + W_j``, so the frame
    energy ``E_0 + sum_{j<J} W_j`` equals ``E_J``.
    """
    if f.dim != frame.dim:
        raise ValueError("function and frame dimensions differ")
    if J < 0:
        raise ValueError("J must be >= 0")
    touched = len(f) * sum(2**j for j in range(J + 1)) * 2
    if touched > budget:
        raise BudgetExceeded(f"cascade up to J={J} touches {touched} terms (budget {budget})")
    keys = [tuple(k) for k in f.indices.tolist()]
    norm2 = f.squared_norm()
    E, W, plain = [], [], []
    for j in range(J + 1):
        reps = coset_reps_level(frame.D, j)
        phi = np.array([frame.phi_hat(j, k) for k in keys])
        E.append(_translate_energy(frame, j, f, phi, reps))
        plain.append(abs(complex(np.sum(f.values * phi))) ** 2)
        if j < J:
            psi = np.array([frame.psi_hat(j, k) for k in keys])
            W.append(_translate_energy(frame, j, f, psi, reps))
    residuals = [abs(E[j + 1] - E[j] - W[j]) for j in range(J)]
    frame_energy = E[0] + math.fsum(W)
    return {
        "E": E,
        "W": W,
        "cascade_residuals": residuals,
        "max_cascade_residual": max(residuals, default=0.0),
        "norm2": norm2,
        "tail": norm2 - E[J],
        "frame_energy": frame_energy,
        "frame_energy_all_scaling": math.fsum(plain) + math.fsum(W),
    }


def aliased_energy(frame: PeriodicFrame, j: int, f: CoeffMap) -> float:
    """``E_j`` via frequency classes mod B^j: ``sum_class |sum_m c_m xi_j(m)|^2``."""
    groups: dict = {}
    for k, c in f:
        rep = frame.reduce(j, k)
        groups[rep] = groups.get(rep, 0j) + c * frame.xi_hat(j, k)
    return math.fsum(abs(v) ** 2 for v in groups.values())


# localization limits ---------------------------------------------------------------


def up_limit_sweep(frame: PeriodicFrame, j_list, eps: float = 1e-8, budget: int = DEFAULT_BUDGET) -> list[dict]:
    """Directional products of phi_j and psi_j against their limits 1/4 and psi_limit(d)."""
    j_list = [int(j) for j in j_list]
    if j_list != sorted(j_list):
        raise ValueError("levels must be ascending")
    target_psi = psi_limit(frame.dim)
    rows = []
    for j in j_list:
        radius = frame.truncation_radius(j + 1, eps)
        if (2 * radius + 1) ** frame.dim > budget:
            raise BudgetExceeded(f"level {j} needs a window of radius {radius}")
        el = frame_element_coeffs(frame, j, eps)
        up_phi = up_directional(el.phi_hat, frame.L).up
        up_psi = up_directional(el.psi_hat, frame.L).up
        rows.append(
            {
                "j": j,
                "up_phi": up_phi,
                "up_psi": up_psi,
                "target_phi": 0.25,
                "target_psi": target_psi,
                "norm_phi": el.phi_hat.squared_norm(),
                "norm_psi": el.psi_hat.squared_norm(),
            }
        )
    return rows


def reference_coeffs(L, j: int, eps: float = 1e-8, dilation: DilationMatrix | None = None) -> tuple[CoeffMap, CoeffMap]:
    """Gaussian xi0_j and the closed-form wavelet reference eta_j, truncated at eps."""
    L = as_direction(L)
    if j < 2:
        raise ValueError("reference functions need j >= 2")
    D = dilation if dilation is not None else default_dilation(L.size)
    frame = PeriodicFrame(D, L)
    nL2 = int(L @ L)
    radius = math.sqrt(j * math.log(1.0 / eps) / nL2) + 1
    pts = ball_points(L.size, radius)
    q = nL2 * (pts**2).sum(axis=1).astype(float)
    xi0 = np.exp(-q / j)
    amp = np.sqrt(-np.expm1(-2 * q / (j * (j + 1)))) * np.exp(-q / (j + 1))
    phases = np.array([frame.phase(j, k) for k in pts.tolist()])
    return CoeffMap.from_arrays(pts, xi0, L.size), CoeffMap.from_arrays(pts, phases * amp, L.size)


def reference_limits_check(L, j: int, eps: float = 1e-8, dilation: DilationMatrix | None = None) -> tuple[float, float]:
    """``(UP_L(xi0_j), UP_L(eta_j))``."""
    xi0, eta = reference_coeffs(L, j, eps, dilation)
    return up_directional(xi0, L).up, up_directional(eta, L).up


def as_frame(A, L, level_one: str = "limit") -> PeriodicFrame:
    D = A if isinstance(A, DilationMatrix) else validate_dilation(A)
    return PeriodicFrame(D, as_vector(L, D.dim), level_one)
