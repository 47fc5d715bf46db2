import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import naive_up_directional, naive_up_gg, sampled_up_directional
from torus_uncertainty.kernels import dirichlet_rect, powered_cos
from torus_uncertainty.lattice_fourier import CoeffMap, shift_modulate
from torus_uncertainty.uncertainty import (
    Status,
    closed_form_up,
    fejer_limit,
    psi_limit,
    up_directional,
    up_gg,
)


def sparse_maps(d, max_size=10, radius=4):
    key = st.tuples(*[st.integers(-radius, radius)] * d)
    val = st.complex_numbers(min_magnitude=0.05, max_magnitude=5, allow_nan=False, allow_infinity=False)
    return st.dictionaries(key, val, min_size=2, max_size=max_size)


def directions(d, bound=2):
    return st.tuples(*[st.integers(-bound, bound)] * d).filter(any)


def test_p1_value():
    f = CoeffMap.from_dict({(-1, 1): 0.5, (0, 0): 1.0, (1, -1): 0.5})
    assert up_directional(f, [1, -1]).up == pytest.approx(5 / 12, rel=1e-14)


def test_monomial_is_undefined():
    r = up_directional(CoeffMap.from_dict({(2,): 3.7}), [1])
    assert r.status is Status.UNDEFINED_MONOMIAL
    assert r.up is None
    assert up_gg(CoeffMap.from_dict({(2, 1): 1.0})).status is Status.UNDEFINED_MONOMIAL


def test_dirichlet_d1():
    assert up_directional(dirichlet_rect([2]), [1]).up == pytest.approx(9 / 8, rel=1e-14)


def test_dirichlet_gg():
    r = up_gg(dirichlet_rect([1, 1]))
    assert r.up == pytest.approx(5 / 6, rel=1e-14)
    assert r.up == pytest.approx(closed_form_up("DirichletRectGG", N=[1, 1]), rel=1e-14)


def test_infinite_angular():
    f = CoeffMap.from_dict({(0, 0): 1.0, (2, 0): 1.0})
    assert up_gg(f).status is Status.INFINITE_ANGULAR
    assert up_gg(f).up == math.inf
    r = up_directional(f, [1, 0])
    assert r.status is Status.INFINITE_ANGULAR
    assert r.to_dict()["up"] == "inf"


def test_empty_map_rejected():
    with pytest.raises(ValueError):
        up_directional(CoeffMap.empty(1), [1])
    with pytest.raises(ValueError):
        up_gg(CoeffMap.empty(2))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        up_directional(CoeffMap.from_dict({(0,): 1, (1,): 1}), [1, 0])


def test_closed_forms():
    assert closed_form_up("FejerLimit", d=1) == pytest.approx(3 / 10)
    assert closed_form_up("FejerLimit", d=2) == pytest.approx(2 / 5)
    assert closed_form_up("FejerLimitGG", d=3) == pytest.approx(100 / 189)
    assert closed_form_up("DirectionalFejerLimit") == 0.3
    assert closed_form_up("MinVarPoly", m0=math.inf) == pytest.approx(math.pi**2 / 12 - 0.5)
    assert closed_form_up("MinVarPoly", m0=2) == pytest.approx(0.5)
    assert closed_form_up("DirichletRect", N=[1], L=[3]) == math.inf
    assert psi_limit(1) == 2.25 and psi_limit(2) == 0.5
    assert fejer_limit(2) == pytest.approx(0.4)
    with pytest.raises(ValueError):
        closed_form_up("PoweredCos", n=0)
    with pytest.raises(ValueError):
        closed_form_up("Nope")
    with pytest.raises(ValueError):
        closed_form_up("MinVarPoly", m0=0)


def test_min_var_limit_approached():
    vals = [closed_form_up("MinVarPoly", m0=m) for m in (1, 10, 100, 10_000)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(math.pi**2 / 12 - 0.5, abs=1e-6)


def test_large_n_does_not_overflow():
    r = up_directional(powered_cos(600, [1]), [1])
    assert r.up == pytest.approx(0.25 + 1 / (8 * 600 - 2), rel=1e-9)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(sparse_maps(d), directions(d))))
def test_matches_naive_and_sampled(args):
    coeffs, L = args
    r = up_directional(CoeffMap.from_dict(coeffs), L)
    naive = naive_up_directional(coeffs, L)
    if r.status is Status.INFINITE_ANGULAR:
        assert naive == math.inf or naive > 1e10
        return
    # the naive form loses relative accuracy when |s| is close to ||f||^2
    assert r.up == pytest.approx(naive, rel=1e-6, abs=1e-9)
    assert r.up == pytest.approx(sampled_up_directional(coeffs, L), rel=1e-6, abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(sparse_maps))
def test_gg_matches_naive(coeffs):
    r = up_gg(CoeffMap.from_dict(coeffs))
    naive = naive_up_gg(coeffs)
    if r.status is Status.INFINITE_ANGULAR:
        assert naive == math.inf
    else:
        assert r.up == pytest.approx(naive, rel=1e-6, abs=1e-9)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(sparse_maps(d), directions(d))))
def test_lower_bound(args):
    coeffs, L = args
    f = CoeffMap.from_dict(coeffs)
    for r in (up_directional(f, L), up_gg(f)):
        if r.status is Status.FINITE:
            assert r.up >= 0.25 - 1e-12


@settings(max_examples=60, deadline=None)
@given(
    sparse_maps(2),
    directions(2),
    st.tuples(st.integers(-5, 5), st.integers(-5, 5)),
    st.tuples(st.floats(-1, 1), st.floats(-1, 1)),
    st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False),
)
def test_invariance_under_shift_and_modulation(coeffs, L, K, x0, a):
    f = CoeffMap.from_dict(coeffs)
    r = up_directional(f, L)
    assume(r.status is Status.FINITE)
    g = shift_modulate(f, K, x0, a)
    assert up_directional(g, L).up == pytest.approx(r.up, rel=1e-10)


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(-4, 4)), st.floats(0.1, 5), min_size=1, max_size=8))
def test_even_real_maps_have_zero_frequency_mean(half):
    coeffs = {}
    for k, v in half.items():
        if k > (0, 0):
            coeffs[k] = coeffs[(-k[0], -k[1])] = v
    assume(coeffs)
    f = CoeffMap.from_dict(coeffs)
    mean = math.fsum((k[0] + 2 * k[1]) * abs(c) ** 2 for k, c in f)
    assert mean == 0.0


def test_up_scale_invariant_at_extremes():
    f = CoeffMap.from_dict({(0,): 1e-200, (1,): 2e-200, (3,): 1e-200})
    g = CoeffMap.from_dict({(0,): 1.0, (1,): 2.0, (3,): 1.0})
    assert up_directional(f, [1]).up == pytest.approx(up_directional(g, [1]).up, rel=1e-14)
    assert np.isfinite(up_gg(f.scaled(1e250)).up)
