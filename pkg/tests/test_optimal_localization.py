import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_max_rayleigh, gg_box_var_bruteforce, sturm_count
from torus_uncertainty import optimal_localization as OL
from torus_uncertainty.uncertainty import up_directional, up_gg


def supports(d, max_size=20, radius=3):
    key = st.tuples(*[st.integers(-radius, radius)] * d)
    return st.sets(key, min_size=1, max_size=max_size)


def directions(d):
    return st.tuples(*[st.integers(-2, 2)] * d).filter(any)


def test_support_validation():
    with pytest.raises(ValueError):
        OL.SupportSet.from_points([])
    with pytest.raises(ValueError):
        OL.SupportSet.from_points([(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        OL.SupportSet.from_points([(0,), (0, 1)])
    assert len(OL.SupportSet.cross(2, 3)) == 13
    assert len(OL.SupportSet.box([1, 2])) == 15


def test_threads_of_a_box():
    threads = OL.thread_decompose(OL.SupportSet.box([1, 1]), [1, 0])
    assert [t.length for t in threads] == [3, 3, 3]
    assert threads[0].start == (-1, -1)


def test_threads_with_gaps():
    S = OL.SupportSet.from_points([(0,), (1,), (2,), (5,), (6,), (9,)])
    threads = OL.thread_decompose(S, [1])
    assert [(t.start, t.length) for t in threads] == [((0,), 3), ((5,), 2), ((9,), 1)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(supports(d), directions(d))))
def test_threads_partition_support(args):
    pts, L = args
    S = OL.SupportSet.from_points(pts)
    threads = OL.thread_decompose(S, L)
    covered = [p for t in threads for p in t.points]
    assert sorted(covered) == sorted(pts)
    for t in threads:
        before = tuple(a - b for a, b in zip(t.start, L))
        after = tuple(a + b * t.length for a, b in zip(t.start, L))
        assert before not in S.points and after not in S.points


@pytest.mark.parametrize("m", [0, 1, 2, 7, 30])
def test_toeplitz_eigenpairs(m):
    M = OL.halves_matrix(m + 1)
    pairs = OL.toeplitz_eigenpairs(m)
    for lam, v in pairs:
        np.testing.assert_allclose(M @ v, lam * v, atol=1e-13)
    lams = sorted(lam for lam, _ in pairs)
    np.testing.assert_allclose(lams, np.linalg.eigvalsh(M), atol=1e-12)
    # Sturm count below each analytic eigenvalue, nudged both ways
    for i, lam in enumerate(lams):
        assert sturm_count(m, lam - 1e-9) == i
        assert sturm_count(m, lam + 1e-9) == i + 1


def test_min_var_three_point_line():
    sol = OL.min_var_directional(OL.SupportSet.line([0, 0], [1, 1], 2), [1, 1])
    assert sol.m0 == 2
    assert sol.var_angular == pytest.approx(1.0)
    assert sol.up == pytest.approx(0.5)
    assert up_directional(sol.polynomial, [1, 1]).up == pytest.approx(0.5, rel=1e-12)


def test_min_var_box():
    sol = OL.min_var_directional(OL.SupportSet.box([3, 3]), [1, 0])
    assert sol.var_angular == pytest.approx(math.tan(math.pi / 8) ** 2, rel=1e-13)
    assert sol.polynomial.squared_norm() == pytest.approx(4.0)
    assert OL.min_var_directional(OL.SupportSet.box([3, 3]), [1, 0], normalize=True).polynomial.squared_norm() == (
        pytest.approx(1.0)
    )


def test_min_var_infinite():
    with pytest.raises(OL.InfiniteVarianceError):
        OL.min_var_directional(OL.SupportSet.from_points([(0,), (2,)]), [1])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(supports(d, 25), directions(d))))
def test_min_var_against_eigensolver(args):
    pts, L = args
    S = OL.SupportSet.from_points(pts)
    q = brute_max_rayleigh(pts, L)
    if q <= 1e-12:
        with pytest.raises(OL.InfiniteVarianceError):
            OL.min_var_directional(S, L)
        return
    sol = OL.min_var_directional(S, L)
    assert sol.var_angular == pytest.approx(1 / q**2 - 1, rel=1e-9, abs=1e-12)
    assert up_directional(sol.polynomial, L).var_angular == pytest.approx(sol.var_angular, rel=1e-9, abs=1e-12)


def test_rayleigh_oracle_does_not_beat_analytic():
    S = OL.SupportSet.box([2, 2])
    q = OL.rayleigh_oracle(S, [1, 1], restarts=500, seed=1)
    assert q <= math.cos(math.pi / 7) + 1e-12
    assert q > 0.8


@pytest.mark.parametrize("N", [[1], [3], [1, 2], [2, 2, 1]])
def test_gg_rect_minimizer(N):
    poly, var = OL.min_var_gg_rect(N)
    assert poly.squared_norm() == pytest.approx(1.0)
    assert up_gg(poly).var_angular == pytest.approx(var, rel=1e-12)
    assert gg_box_var_bruteforce(N) == pytest.approx(var, rel=1e-12)
