"""Directional and coordinate-wise (Goh-Goodman) uncertainty products on T^d."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice_fourier import (
    CoeffMap,
    as_direction,
    fsum_real,
    match_rows,
    shift_correlation,
)

# |<A f, f>| below this fraction of ||f||^2 counts as a structural zero
ZERO_CORRELATION_RTOL = 1e-14


class Status(str, enum.Enum):
    FINITE = "Finite"
    INFINITE_ANGULAR = "InfiniteAngular"
    UNDEFINED_MONOMIAL = "UndefinedMonomial"


@dataclass(frozen=True)
class UPReport:
    """Variances and uncertainty product of one function.

    ``up`` is ``None`` for monomials (0 * inf, left undefined) and ``inf``
    when the angular variance diverges.
    """

    var_angular: float
    var_frequency: float
    commutator_abs: float
    up: float | None
    status: Status

    @property
    def is_finite(self) -> bool:
        return self.status is Status.FINITE

    def to_dict(self) -> dict:
        def enc(x):
            if x is None:
                return None
            return "inf" if math.isinf(x) else x

        return {
            "var_angular": enc(self.var_angular),
            "var_frequency": enc(self.var_frequency),
            "commutator_abs": enc(self.commutator_abs),
            "up": enc(self.up),
            "status": self.status.value,
        }


def _normalized(f: CoeffMap) -> tuple[CoeffMap, float]:
    """Rescale to unit max amplitude; the products are scale invariant."""
    if len(f) == 0:
        raise ValueError("uncertainty product of the zero function is undefined")
    peak = float(np.abs(f.values).max())
    if peak == 1.0:
        return f, 1.0
    return f.scaled(1.0 / peak), peak


def _norm_minus_correlation(f: CoeffMap, shift: np.ndarray, corr: complex) -> float:
    """``||f||^2 - |sum c_{k-L} conj c_k|`` without cancellation.

    Uses ``||f||^2 - |s| = 1/2 * sum_k |c_{k-L} - w c_k|^2`` with ``w = s/|s|``.
    """
    w = corr / abs(corr)
    shifted_idx = f.indices + shift
    # terms over the union of supp(A_L f) and supp(f)
    pos = match_rows(shifted_idx, f.indices)
    hit = pos >= 0
    terms = [np.abs(f.values[hit] - w * f.values[pos[hit]]) ** 2, np.abs(f.values[~hit]) ** 2]
    unmatched = np.ones(len(f), dtype=bool)
    unmatched[pos[hit]] = False
    terms.append(np.abs(w * f.values[unmatched]) ** 2)
    return 0.5 * fsum_real(np.concatenate(terms))


def _frequency_variance(weights: np.ndarray, proj: np.ndarray, norm2: float) -> float:
    mean = fsum_real(proj * weights) / norm2
    return fsum_real((proj - mean) ** 2 * weights) / norm2


def up_directional(f: CoeffMap, L) -> UPReport:
    """Directional uncertainty product ``UP_L`` of ``f`` along ``L``."""
    f, peak = _normalized(f)
    L = as_direction(L, f.dim)
    weights = np.abs(f.values) ** 2
    norm2 = fsum_real(weights)
    nL2 = int(L @ L)
    proj = (f.indices @ L).astype(float)
    var_f = _frequency_variance(weights, proj, norm2)
    corr = shift_correlation(f, L)
    commutator = nL2 * abs(corr) * peak * peak
    if len(f) == 1:
        return UPReport(math.inf, 0.0, commutator, None, Status.UNDEFINED_MONOMIAL)
    if abs(corr) < ZERO_CORRELATION_RTOL * norm2:
        return UPReport(math.inf, var_f, commutator, math.inf, Status.INFINITE_ANGULAR)
    gap = _norm_minus_correlation(f, L, corr)
    var_a = gap * (norm2 + abs(corr)) / abs(corr) ** 2
    up = var_a * var_f / float(nL2 * nL2)
    return UPReport(var_a, var_f, commutator, up, Status.FINITE)


def up_gg(f: CoeffMap) -> UPReport:
    """Goh-Goodman product built from the d coordinate shifts."""
    f, peak = _normalized(f)
    d = f.dim
    weights = np.abs(f.values) ** 2
    norm2 = fsum_real(weights)
    var_f = 0.0
    corr_abs = []
    gaps = []
    eye = np.eye(d, dtype=np.int64)
    for j in range(d):
        var_f += _frequency_variance(weights, f.indices[:, j].astype(float), norm2)
        s = shift_correlation(f, eye[j])
        if abs(s) < ZERO_CORRELATION_RTOL * norm2:
            corr_abs.append(0.0)
            gaps.append(norm2)
        else:
            corr_abs.append(abs(s))
            gaps.append(_norm_minus_correlation(f, eye[j], s))
    commutator = math.fsum(corr_abs)
    commutator_raw = commutator * peak * peak
    if len(f) == 1:
        return UPReport(math.inf, 0.0, commutator_raw, None, Status.UNDEFINED_MONOMIAL)
    if commutator == 0.0:
        return UPReport(math.inf, var_f, commutator_raw, math.inf, Status.INFINITE_ANGULAR)
    # sum_j (||f||^4 - |s_j|^2) / (sum_j |s_j|)^2, each term factored as gap*(norm+|s|)
    num = math.fsum(g * (norm2 + c) for g, c in zip(gaps, corr_abs))
    var_a = num / commutator**2
    return UPReport(var_a, var_f, commutator_raw, var_a * var_f, Status.FINITE)


# closed forms ---------------------------------------------------------------

KERNEL_IDS = (
    "PoweredCos",
    "DirichletRect",
    "DirichletRectGG",
    "FejerLimit",
    "FejerLimitGG",
    "DirectionalFejerLimit",
    "MinVarPoly",
)


def fejer_limit(d: int) -> float:
    return (d + 1) ** 2 * (d + 2) ** 2 / (6 * d * (d + 3) * (d + 4))


def psi_limit(d: int) -> float:
    """Limit of the directional product of the frame wavelets in dimension d."""
    return 0.25 * (d + 2) * (d * d - 2 * d + 4) / d**3


def closed_form_up(kernel_id: str, **params) -> float:
    """Analytic uncertainty products of the explicit kernel families.

    ``PoweredCos(n)``, ``DirichletRect(N, L)``, ``DirichletRectGG(N)``,
    ``FejerLimit(d)``, ``FejerLimitGG(d)``, ``DirectionalFejerLimit()`` and
    ``MinVarPoly(m0)`` (``m0=math.inf`` gives the limit).
    """
    if kernel_id == "PoweredCos":
        n = int(params["n"])
        if n < 1:
            raise ValueError("PoweredCos needs n >= 1")
        return 0.25 + 1.0 / (8 * n - 2)
    if kernel_id == "DirichletRect":
        N = [int(x) for x in np.atleast_1d(params["N"])]
        L = as_direction(params["L"], len(N)).tolist()
        if min(N) < 1:
            raise ValueError("DirichletRect needs N > 0 componentwise")
        full = 1
        overlap = 1
        for Nj, Lj in zip(N, L):
            full *= 2 * Nj + 1
            overlap *= max(0, 2 * Nj + 1 - abs(Lj))
        if overlap == 0:
            return math.inf
        ratio = Fraction(full, overlap) ** 2 - 1
        freq = Fraction(sum(Lj * Lj * Nj * (Nj + 1) for Nj, Lj in zip(N, L)), 3)
        nL2 = sum(Lj * Lj for Lj in L)
        return float(ratio * freq / nL2**2)
    if kernel_id == "DirichletRectGG":
        N = [int(x) for x in np.atleast_1d(params["N"])]
        if min(N) < 1:
            raise ValueError("DirichletRectGG needs N > 0 componentwise")
        d = len(N)
        q = [Fraction(1, 2 * Nj + 1) for Nj in N]
        num = d - sum((1 - x) ** 2 for x in q)
        den = (d - sum(q)) ** 2
        freq = Fraction(sum(Nj * (Nj + 1) for Nj in N), 3)
        return float(num / den * freq)
    if kernel_id in ("FejerLimit", "FejerLimitGG"):
        d = int(params["d"])
        if d < 1:
            raise ValueError("dimension must be >= 1")
        return fejer_limit(d)
    if kernel_id == "DirectionalFejerLimit":
        return 0.3
    if kernel_id == "MinVarPoly":
        m0 = params["m0"]
        if m0 == math.inf:
            return math.pi**2 / 12 - 0.5
        m0 = int(m0)
        if m0 < 1:
            raise ValueError("MinVarPoly needs m0 >= 1")
        return m0 * (m0 + 4) / 12 * math.tan(math.pi / (m0 + 2)) ** 2 - 0.5
    raise ValueError(f"unknown kernel id {kernel_id!r}")
