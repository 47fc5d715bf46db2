"""Independent reference computations used by the tests.

Nothing here imports the package's uncertainty or frame code: products are
evaluated either term by term from their defining sums or from samples of
the trigonometric polynomial on a grid fine enough to integrate exactly.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def naive_up_directional(coeffs: dict, L) -> float:
    """Defining sums, plain loops, no cancellation-aware rewrites."""
    L = tuple(L)
    norm2 = sum(abs(c) ** 2 for c in coeffs.values())
    s = 0j
    for k, c in coeffs.items():
        prev = tuple(a - b for a, b in zip(k, L))
        if prev in coeffs:
            s += coeffs[prev] * np.conj(c)
    if abs(s) == 0:
        return math.inf
    var_a = norm2**2 / abs(s) ** 2 - 1
    proj = {k: sum(a * b for a, b in zip(k, L)) for k in coeffs}
    mean = sum(proj[k] * abs(c) ** 2 for k, c in coeffs.items()) / norm2
    var_f = sum(proj[k] ** 2 * abs(c) ** 2 for k, c in coeffs.items()) / norm2 - mean**2
    nL2 = sum(x * x for x in L)
    return var_a * var_f / nL2**2


def naive_up_gg(coeffs: dict) -> float:
    d = len(next(iter(coeffs)))
    norm2 = sum(abs(c) ** 2 for c in coeffs.values())
    s_abs = []
    var_f = 0.0
    for j in range(d):
        e = tuple(int(i == j) for i in range(d))
        s = 0j
        for k, c in coeffs.items():
            prev = tuple(a - b for a, b in zip(k, e))
            if prev in coeffs:
                s += coeffs[prev] * np.conj(c)
        s_abs.append(abs(s))
        mean = sum(k[j] * abs(c) ** 2 for k, c in coeffs.items()) / norm2
        var_f += sum(k[j] ** 2 * abs(c) ** 2 for k, c in coeffs.items()) / norm2 - mean**2
    if sum(s_abs) == 0:
        return math.inf
    var_a = sum(norm2**2 - x**2 for x in s_abs) / sum(s_abs) ** 2
    return var_a * var_f


def sampled_up_directional(coeffs: dict, L) -> float:
    """UP from point samples: <A f, f> = int e^{2 pi i <L,x>} |f(x)|^2 dx.

    |f|^2 has frequencies in supp - supp; a grid of size > 2 * spread per axis
    integrates every term exactly.  The frequency variance uses the discrete
    derivative f' and Parseval on the same grid.
    """
    keys = np.array(list(coeffs), dtype=float)
    vals = np.array(list(coeffs.values()), dtype=complex)
    d = keys.shape[1]
    spread = int(np.ptp(keys, axis=0).max()) + int(np.abs(L).max()) + 1
    n = 2 * spread + 1
    axis = np.arange(n) / n
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    phase = np.exp(2j * np.pi * grid @ keys.T)
    fx = phase @ vals
    Lv = np.asarray(L, dtype=float)
    dfx = phase @ (vals * (keys @ Lv))
    norm2 = np.mean(np.abs(fx) ** 2)
    s = np.mean(np.exp(2j * np.pi * grid @ Lv) * np.abs(fx) ** 2)
    mean = np.mean(np.conj(fx) * dfx).real / norm2
    second = np.mean(np.abs(dfx) ** 2) / norm2
    var_a = norm2**2 / abs(s) ** 2 - 1
    var_f = second - mean**2
    return var_a * var_f / float(Lv @ Lv) ** 2


def brute_dirichlet_up(N, L) -> float:
    """Directional UP of the rectangular Dirichlet kernel by direct enumeration."""
    box = list(itertools.product(*[range(-n, n + 1) for n in N]))
    return naive_up_directional({k: 1.0 for k in box}, L)


def brute_max_rayleigh(S, L) -> float:
    """Largest eigenvalue of the symmetrized shift form on S, via eigvalsh."""
    pts = sorted(S)
    idx = {p: i for i, p in enumerate(pts)}
    M = np.zeros((len(pts), len(pts)))
    for p, i in idx.items():
        q = tuple(a + b for a, b in zip(p, L))
        if q in idx:
            M[i, idx[q]] = M[idx[q], i] = 0.5
    return float(np.linalg.eigvalsh(M)[-1])


def sturm_count(m: int, x: float) -> int:
    """Eigenvalues of the (m+1)-size halves matrix below x, by the Sturm sequence."""
    count = 0
    q = -x
    for i in range(m + 1):
        if i > 0:
            q = -x - 0.25 / q if q != 0 else -x - 0.25 / 1e-300
        if q < 0:
            count += 1
    return count


def gg_box_var_bruteforce(N) -> float:
    """GG angular variance of the tensor-sine polynomial, from the definition."""
    N = list(N)
    coeffs = {}
    for k in itertools.product(*[range(-n, n + 1) for n in N]):
        coeffs[k] = math.prod(math.sin(math.pi * (kj + nj + 1) / (2 * nj + 2)) for kj, nj in zip(k, N))
    d = len(N)
    norm2 = sum(c * c for c in coeffs.values())
    s = []
    for j in range(d):
        e = tuple(int(i == j) for i in range(d))
        s.append(abs(sum(coeffs.get(tuple(a - b for a, b in zip(k, e)), 0.0) * c for k, c in coeffs.items())))
    return sum(norm2**2 - x**2 for x in s) / sum(s) ** 2
