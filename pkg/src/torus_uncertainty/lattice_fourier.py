"""Sparse Fourier coefficient maps on the integer lattice Z^d.

A :class:`CoeffMap` stores the finitely many nonzero Fourier coefficients
``c_k`` of a trigonometric polynomial on the torus ``T^d``.  All inner
products are Parseval pairings in the coefficient domain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np


class DimensionError(ValueError):
    """Operands live on lattices of different dimension."""


def fsum_complex(values: np.ndarray) -> complex:
    """Exactly rounded sum of a complex array (``math.fsum`` per component)."""
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
    return complex(math.fsum(values.tolist()), 0.0)


def fsum_real(values: np.ndarray) -> float:
    return math.fsum(np.asarray(values, dtype=float).tolist())


@dataclass(frozen=True, eq=False)
class CoeffMap:
    """Immutable sparse map ``Z^d -> C``.

    ``indices`` is an ``(n, d)`` int64 array sorted lexicographically with no
    duplicates, ``values`` the matching complex128 amplitudes (none exactly 0).
    Use :meth:`from_arrays` or :meth:`from_dict` rather than the raw
    constructor.
    """

    dim: int
    indices: np.ndarray
    values: np.ndarray
    _lookup: dict = field(default=None, repr=False, compare=False)

    # construction -----------------------------------------------------

    @classmethod
    def from_arrays(cls, indices, values, dim: int | None = None, *, canonical: bool = False) -> "CoeffMap":
        """Build from parallel arrays; duplicates are summed, exact zeros dropped.

        ``canonical=True`` skips sorting/merging when the caller guarantees
        sorted unique indices (e.g. grids produced by ``np.indices``).
        """
        vals = np.asarray(values, dtype=np.complex128).reshape(-1)
        idx = np.asarray(indices, dtype=np.int64)
        if idx.ndim == 1:
            if dim is None:
                dim = idx.size // vals.size if vals.size else 1
            idx = idx.reshape(-1, dim)
        if dim is None:
            dim = idx.shape[1]
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        if idx.shape != (vals.size, dim):
            raise DimensionError(f"indices of shape {idx.shape} do not match {vals.size} values in dimension {dim}")
        if not canonical and vals.size:
            order = np.lexsort(idx.T[::-1])
            idx = idx[order]
            vals = vals[order]
            if idx.shape[0] > 1:
                new_group = np.empty(idx.shape[0], dtype=bool)
                new_group[0] = True
                new_group[1:] = np.any(idx[1:] != idx[:-1], axis=1)
                if not new_group.all():
                    starts = np.flatnonzero(new_group)
                    vals = np.add.reduceat(vals, starts)
                    idx = idx[starts]
        keep = vals != 0
        if not keep.all():
            idx = idx[keep]
            vals = vals[keep]
        idx = np.ascontiguousarray(idx)
        vals = np.ascontiguousarray(vals)
        idx.setflags(write=False)
        vals.setflags(write=False)
        return cls(dim, idx, vals)

    @classmethod
    def from_dict(cls, entries: Mapping, dim: int | None = None) -> "CoeffMap":
        keys = [tuple(int(c) for c in (k if isinstance(k, Iterable) else (k,))) for k in entries]
        if dim is None:
            if not keys:
                raise ValueError("dimension required for an empty map")
            dim = len(keys[0])
        if any(len(k) != dim for k in keys):
            raise DimensionError("all keys must have the same length")
        vals = [complex(v) for v in entries.values()]
        return cls.from_arrays(np.array(keys, dtype=np.int64).reshape(-1, dim), vals, dim)

    @classmethod
    def empty(cls, dim: int) -> "CoeffMap":
        return cls.from_arrays(np.zeros((0, dim), dtype=np.int64), [], dim)

    # queries ----------------------------------------------------------

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        for k, v in zip(self.indices.tolist(), self.values.tolist()):
            yield tuple(k), v

    def __getitem__(self, k) -> complex:
        if self._lookup is None:
            table = {tuple(row): i for i, row in enumerate(self.indices.tolist())}
            object.__setattr__(self, "_lookup", table)
        key = tuple(int(c) for c in (k if isinstance(k, Iterable) else (k,)))
        if len(key) != self.dim:
            raise DimensionError(f"index {key} is not {self.dim}-dimensional")
        i = self._lookup.get(key)
        return 0j if i is None else complex(self.values[i])

    def __contains__(self, k) -> bool:
        return self[k] != 0

    def to_dict(self) -> dict:
        return dict(iter(self))

    def squared_norm(self) -> float:
        return fsum_real(np.abs(self.values) ** 2)

    def scaled(self, a: complex) -> "CoeffMap":
        return CoeffMap.from_arrays(self.indices, self.values * a, self.dim, canonical=True)

    def conj(self) -> "CoeffMap":
        return CoeffMap.from_arrays(self.indices, np.conj(self.values), self.dim, canonical=True)

    def __add__(self, other: "CoeffMap") -> "CoeffMap":
        _check_dims(self, other)
        return CoeffMap.from_arrays(
            np.vstack([self.indices, other.indices]),
            np.concatenate([self.values, other.values]),
            self.dim,
        )

    def __sub__(self, other: "CoeffMap") -> "CoeffMap":
        return self + other.scaled(-1)

    def allclose(self, other: "CoeffMap", atol: float = 0.0, rtol: float = 1e-12) -> bool:
        diff = self - other
        scale = max(np.abs(self.values).max(initial=0.0), np.abs(other.values).max(initial=0.0))
        return bool(np.all(np.abs(diff.values) <= atol + rtol * scale))

    # serialization ----------------------------------------------------

    def to_json(self) -> str:
        entries = [list(k) + [v.real, v.imag] for k, v in self]
        return json.dumps({"dim": self.dim, "entries": entries})

    @classmethod
    def from_json(cls, text: str) -> "CoeffMap":
        data = json.loads(text)
        dim = int(data["dim"])
        rows = data["entries"]
        if any(len(r) != dim + 2 for r in rows):
            raise DimensionError("entry length does not match dim + 2")
        idx = np.array([r[:dim] for r in rows], dtype=np.int64).reshape(-1, dim)
        vals = np.array([complex(r[dim], r[dim + 1]) for r in rows], dtype=np.complex128)
        return cls.from_arrays(idx, vals, dim)


def _check_dims(*objs) -> int:
    dims = {o.dim if hasattr(o, "dim") else len(o) for o in objs}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def as_vector(v, dim: int | None = None) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v))
    if arr.ndim != 1:
        raise ValueError("expected a vector")
    if dim is not None and arr.size != dim:
        raise DimensionError(f"vector of length {arr.size} used in dimension {dim}")
    return arr


def as_direction(L, dim: int | None = None) -> np.ndarray:
    arr = as_vector(L, dim)
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.round(arr)):
            raise ValueError(f"direction {arr.tolist()} must be an integer vector")
    arr = arr.astype(np.int64)
    if not arr.any():
        raise ValueError("direction must be a nonzero vector")
    return arr


def match_rows(needles: np.ndarray, haystack: np.ndarray) -> np.ndarray:
    """Position of each row of ``needles`` in lexsorted ``haystack``, or -1."""
    n = needles.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    if n == 0 or haystack.shape[0] == 0:
        return out
    lo = np.minimum(needles.min(axis=0), haystack.min(axis=0))
    hi = np.maximum(needles.max(axis=0), haystack.max(axis=0))
    span = (hi - lo + 1).astype(object)
    total = 1
    for s in span:
        total *= int(s)
    if total < 2**62:
        strides = np.ones(len(span), dtype=np.int64)
        for i in range(len(span) - 2, -1, -1):
            strides[i] = strides[i + 1] * int(span[i + 1])
        hkeys = (haystack - lo) @ strides
        nkeys = (needles - lo) @ strides
        # lexsorted rows with row-major strides give sorted keys
        pos = np.searchsorted(hkeys, nkeys)
        pos_c = np.minimum(pos, hkeys.size - 1)
        hit = hkeys[pos_c] == nkeys
        out[hit] = pos_c[hit]
        return out
    table = {tuple(r): i for i, r in enumerate(haystack.tolist())}
    for i, r in enumerate(needles.tolist()):
        out[i] = table.get(tuple(r), -1)
    return out


def inner(f: CoeffMap, g: CoeffMap) -> complex:
    """Parseval pairing ``sum_k c_k(f) conj(c_k(g))``."""
    _check_dims(f, g)
    pos = match_rows(f.indices, g.indices)
    hit = pos >= 0
    return fsum_complex(f.values[hit] * np.conj(g.values[pos[hit]]))


def shift_correlation(f: CoeffMap, L) -> complex:
    """``sum_k c_{k-L} conj(c_k)``, i.e. ``<A_L f, f>``."""
    L = as_direction(L, f.dim)
    pos = match_rows(f.indices + L, f.indices)
    hit = pos >= 0
    return fsum_complex(f.values[hit] * np.conj(f.values[pos[hit]]))


def shift_modulate(f: CoeffMap, K, x0, a: float = 1.0) -> CoeffMap:
    """Coefficients of ``a * exp(2 pi i <K,x>) * f(x - x0)``."""
    if a == 0:
        raise ValueError("scale factor a must be nonzero")
    K = as_vector(K, f.dim).astype(np.int64)
    x0 = as_vector(x0, f.dim).astype(float)
    phase = np.exp(-2j * np.pi * ((f.indices @ x0) % 1.0))
    return CoeffMap.from_arrays(f.indices + K, a * phase * f.values, f.dim, canonical=True)


def apply_A(f: CoeffMap, L) -> CoeffMap:
    """Modulation by ``exp(2 pi i <L,x>)``: ``(A_L f)_k = c_{k-L}``."""
    L = as_direction(L, f.dim)
    return CoeffMap.from_arrays(f.indices + L, f.values, f.dim, canonical=True)


def apply_B(f: CoeffMap, L) -> CoeffMap:
    """Scaled directional derivative: ``(B_L f)_k = -<L,k> c_k``."""
    L = as_direction(L, f.dim)
    return CoeffMap.from_arrays(f.indices, -(f.indices @ L) * f.values, f.dim, canonical=True)


def _window_offsets(shape: Sequence[int]) -> np.ndarray:
    return np.array([n // 2 for n in shape], dtype=np.int64)


def from_discrete_signal(samples) -> CoeffMap:
    """Read a d-dimensional tensor as coefficients on a centered window.

    Index 0 sits at position ``n // 2`` along each axis, so even lengths
    reach one step further into the negative indices.
    """
    arr = np.asarray(samples, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.size == 0 or 0 in arr.shape:
        raise ValueError("discrete signal must be nonempty along every axis")
    grid = np.indices(arr.shape).reshape(arr.ndim, -1).T - _window_offsets(arr.shape)
    return CoeffMap.from_arrays(grid, arr.reshape(-1), arr.ndim, canonical=True)


def to_discrete_signal(f: CoeffMap, shape: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`from_discrete_signal` on a window of the given shape."""
    shape = tuple(int(n) for n in shape)
    if len(shape) != f.dim:
        raise DimensionError("window rank does not match map dimension")
    pos = f.indices + _window_offsets(shape)
    if len(f) and (np.any(pos < 0) or np.any(pos >= np.array(shape))):
        raise ValueError("coefficient support does not fit the requested window")
    out = np.zeros(shape, dtype=np.complex128)
    out[tuple(pos.T)] = f.values
    return out


def evaluate(f: CoeffMap, x) -> np.ndarray:
    """Debug helper: evaluate ``sum_k c_k exp(2 pi i <k,x>)`` at points ``x`` (shape (m, d))."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.shape[1] != f.dim:
        raise DimensionError("points do not match map dimension")
    return np.exp(2j * np.pi * (x @ f.indices.T)) @ f.values


def lattice_box(lo, hi) -> np.ndarray:
    """All integer points of the box ``lo <= k <= hi`` in lexicographic order."""
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    shape = tuple((hi - lo + 1).tolist())
    return np.indices(shape).reshape(len(shape), -1).T + lo
