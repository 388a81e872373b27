import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitref.qspan import IrrationalBasis
from orbitref.torus import (
    Monomial,
    Phase,
    TorusPoint,
    covering_radius_cells,
    density_gap,
    find_power_approx,
    occupancy,
    simulate,
    weyl_average,
    weyl_bound,
)

F = Fraction
B = IrrationalBasis.of("sqrt2", "sqrt3")
S2, S3 = B.element("sqrt2").mod1(), B.element("sqrt3").mod1()


def brute_cells(alphas, N, grid):
    # oracle: 60-digit floors of n * alpha
    with mpmath.workdps(60):
        vals = [mpmath.mpf(a.value(200)) if hasattr(a, "value") else mpmath.mpf(a.numerator) / a.denominator
                for a in alphas]
        cells = set()
        for n in range(1, N + 1):
            cells.add(tuple(int(mpmath.floor(mpmath.frac(n * v) * grid)) for v in vals))
    return cells


# ------------------------------------------------------------ types


def test_types_validate():
    TorusPoint((0.0, 0.5))
    with pytest.raises(ValueError):
        TorusPoint((1.0,))
    assert Monomial((0, 0)).is_constant and not Monomial((1, 0)).is_constant
    with pytest.raises(ValueError):
        Phase(float("nan"))


def test_phase_rational_is_exact():
    ns = np.arange(1, 50, dtype=np.uint64)
    a = Phase(F(1, 3)).at(ns)
    b = Phase(F(1, 3)).at(ns + np.uint64(3))
    assert np.array_equal(a, b)
    assert int(Phase(F(1, 4)).at(np.array([1], dtype=np.uint64))[0]) == 1 << 62


# ------------------------------------------------------------ Weyl averages


def test_weyl_examples():
    assert weyl_average([S2], [0], 1000) == 1
    assert weyl_average([F(1, 2)], [1], 1000) == 0
    for N in (10, 100, 10**4):
        assert abs(weyl_average([S2], [1], N)) <= weyl_bound([S2], [1], N)
    with pytest.raises(ValueError):
        weyl_average([S2], [1], 0)
    with pytest.raises(ValueError):
        weyl_average([S2], [1, 1], 10)


def test_weyl_matches_direct_sum():
    with mpmath.workdps(40):
        a = mpmath.sqrt(3) % 1
        direct = sum(mpmath.expjpi(2 * n * a) for n in range(1, 2001)) / 2000
    got = weyl_average([B.element("sqrt3")], [1], 2000)
    assert abs(got - complex(direct)) < 1e-12


@settings(max_examples=40)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2).filter(any), st.integers(1, 3000))
def test_weyl_geometric_bound(m, N):
    assert abs(weyl_average([S2, S3], m, N)) <= weyl_bound([S2, S3], m, N)


@given(st.integers(-4, 4), st.integers(1, 5), st.integers(1, 500))
def test_integer_pairing_gives_exactly_one(c, q, N):
    # m = (q, -q) against (a + c/q, a) pairs to the integer c
    a = B.element("sqrt2")
    alphas = [a + F(c, q), a]
    assert weyl_average(alphas, [q, -q], N) == 1
    assert math.isinf(weyl_bound(alphas, [q, -q], N))


# ------------------------------------------------------------ density


def test_density_examples():
    r = density_gap([F(1, 4)], 100, 8)
    assert r.occupied == 4 and r.empty_fraction == F(1, 2)
    assert density_gap([S2], 10**5, 1024).empty_fraction == 0
    assert density_gap([S2, S3], 10**6, 64).empty_fraction == 0


@pytest.mark.parametrize("alphas,N,grid", [([S2], 300, 64), ([S2, S3], 500, 16), ([F(2, 7), S3], 200, 8)])
def test_occupancy_matches_bruteforce(alphas, N, grid):
    occ = occupancy(alphas, N, grid)
    assert set(map(tuple, np.argwhere(occ))) == brute_cells(alphas, N, grid)


def test_empty_fraction_non_increasing():
    prev = F(1)
    for N in (10, 30, 100, 300, 1000, 3000):
        ef = density_gap([S2, S3], N, 32).empty_fraction
        assert ef <= prev
        prev = ef


def test_covering_radius():
    occ = np.zeros((8,), dtype=bool)
    occ[0] = True
    assert covering_radius_cells(occ) == 4
    assert density_gap([F(1, 4)], 10, 8).covering_radius == F(1, 8)
    with pytest.raises(ValueError):
        covering_radius_cells(np.zeros((4,), dtype=bool))


def test_cell_budget():
    with pytest.raises(ValueError, match="budget"):
        density_gap([S2, S3, S2, S3], 10, 256)


# ------------------------------------------------------------ power search


def test_find_power_examples():
    assert find_power_approx([F(1, 3)], [0], 0.1) == 3
    n = find_power_approx([S2], [F(1, 4)], 1e-3, n_max=10**4)
    assert n is not None and n <= 10**4
    # smallest: brute force below n
    with mpmath.workdps(40):
        v = mpmath.sqrt(2)
        dist = lambda k: min(mpmath.frac(k * v - 0.25), 1 - mpmath.frac(k * v - 0.25))
        assert dist(n) < 1e-3 and all(dist(k) >= 1e-3 for k in range(1, n))
    n = find_power_approx([S2, S3], [F(1, 4), 0], 1e-2, modulus_constraint=(2, 0))
    assert n is not None and n % 2 == 0


def test_find_power_not_found_and_errors():
    assert find_power_approx([F(1, 3)], [F(1, 2)], 0.1, n_max=1000) is None
    with pytest.raises(ValueError):
        find_power_approx([S2], [0], 0)
    with pytest.raises(ValueError):
        find_power_approx([S2], [0, 0], 0.1)


@settings(max_examples=25)
@given(st.fractions(0, 1, max_denominator=50), st.sampled_from([1e-2, 1e-3]), st.integers(1, 3), st.integers(0, 2))
def test_find_power_results_verify(target, tol, d, res):
    n = find_power_approx([S2, S3], [target, F(0)], tol, modulus_constraint=(d, res), n_max=20000)
    if n is None:
        return
    assert n % d == res % d
    with mpmath.workdps(50):
        for a, t in ((mpmath.sqrt(2), target), (mpmath.sqrt(3), 0)):
            x = mpmath.frac(n * a - mpmath.mpf(t.numerator) / t.denominator if isinstance(t, Fraction) else n * a)
            assert min(x, 1 - x) < tol


def test_simulate_report():
    out = simulate([S2], 1000, grid=64, monomials=[[1], [0]])
    assert [a["within_bound"] for a in out["averages"]] == [True, True]
    assert out["averages"][1]["abs"] == 1 and out["averages"][1]["bound"] is None
    assert out["density"]["grid"] == 64
