import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import trapezoid
from hypothesis import given, settings
from hypothesis import strategies as st

from henon.bessel import bessel_zero
from henon.errors import BracketError, DomainError
from henon.weighted_spectrum import (beta_crossings, eigenfunction_radial_factor,
                                     expansion_constant, refine_resonant_alpha, resonant_alphas,
                                     weighted_eigenvalue)

Z01 = float(mp.besseljzero(0, 1))
Z02 = float(mp.besseljzero(0, 2))


def test_eigenvalue_examples():
    assert weighted_eigenvalue(2, 0, 0, 1).mu == pytest.approx(Z01 ** 2, rel=1e-12)
    assert weighted_eigenvalue(2, 0, 0, 1).mu == pytest.approx(5.7832, abs=1e-4)
    assert weighted_eigenvalue(2, 0, 0, 2).mu == pytest.approx(30.471, abs=1e-3)
    assert weighted_eigenvalue(2, 2, 0, 1).mu == pytest.approx(4 * Z01 ** 2, rel=1e-12)


def test_eigenpair_fields():
    pair = weighted_eigenvalue(3, 1.0, 2, 3)
    assert pair.order == pytest.approx((3 - 2 + 4) / 3.0)
    assert pair.mu == pytest.approx((1.5 * pair.zero) ** 2)
    assert pair.lam == 2 * (3 - 2 + 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 5), st.floats(0.0, 4.0), st.integers(0, 5), st.integers(1, 5))
def test_eigenvalue_ordering(N, alpha, n, i):
    mu = weighted_eigenvalue(N, alpha, n, i).mu
    assert mu < weighted_eigenvalue(N, alpha, n, i + 1).mu
    assert mu < weighted_eigenvalue(N, alpha, n + 1, i).mu
    assert weighted_eigenvalue(N, alpha, 0, 1).mu <= mu


def test_radial_factor_examples():
    p1 = weighted_eigenvalue(2, 0, 0, 1)
    p2 = weighted_eigenvalue(2, 0, 0, 2)
    assert abs(eigenfunction_radial_factor(p1, 1.0)) <= 1e-12
    assert eigenfunction_radial_factor(p1, 0.0) == 1.0
    assert abs(eigenfunction_radial_factor(p2, Z01 / Z02)) <= 1e-10


def test_radial_factor_continuous_at_origin():
    for N, alpha, n in [(3, 0.0, 0), (4, 1.5, 0), (3, 1.0, 2)]:
        pair = weighted_eigenvalue(N, alpha, n, 2)
        r = np.array([0.0, 1e-4, 2e-3, 5e-3])
        v = eigenfunction_radial_factor(pair, r)
        assert np.all(np.isfinite(v))
        step = abs(eigenfunction_radial_factor(pair, 2.1e-3) - eigenfunction_radial_factor(pair, 2e-3))
        assert step < 1e-3 * max(1.0, abs(v[0]))


def test_radial_factor_rejects_outside():
    pair = weighted_eigenvalue(2, 0, 0, 1)
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(DomainError):
            eigenfunction_radial_factor(pair, bad)


@pytest.mark.parametrize("N,alpha,n,i", [(2, 0.0, 0, 1), (2, 1.0, 1, 2), (3, 0.0, 0, 2),
                                         (3, 2.0, 2, 1), (4, 0.5, 1, 3)])
def test_radial_factor_solves_weighted_equation(N, alpha, n, i):
    # f'' + (N-1)/r f' - lambda_n/r^2 f + mu r^alpha f = 0
    pair = weighted_eigenvalue(N, alpha, n, i)
    h = 1e-4
    r = np.linspace(0.05, 0.95, 181)
    f = eigenfunction_radial_factor(pair, r)
    fp = eigenfunction_radial_factor(pair, r + h)
    fm = eigenfunction_radial_factor(pair, r - h)
    d1 = (fp - fm) / (2 * h)
    d2 = (fp - 2 * f + fm) / h ** 2
    res = d2 + (N - 1) / r * d1 - pair.lam / r ** 2 * f + pair.mu * r ** alpha * f
    scale = max(1.0, pair.mu)
    assert np.max(np.abs(res)) / scale <= 1e-6


def test_beta_examples():
    c = beta_crossings(2, 0, 2)
    assert c.betas[0] == pytest.approx(2.305, abs=5e-4)
    assert c.betas[1] == 0.0
    assert beta_crossings(2, 0, 1).betas == [0.0]


def test_beta_three_dimensional_bracket():
    # the crossing order sits between b + 2(m-i) and b + 2(m-i) + 1 here
    c = beta_crossings(3, 0, 2)
    assert 2.5 < c.betas[0] < 3.5
    assert abs(bessel_zero(c.betas[0], 1) - bessel_zero(0.5, 2)) <= 1e-9


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 5), st.floats(0.0, 3.0), st.integers(1, 5))
def test_beta_crossing_residual_and_order(N, alpha, m):
    c = beta_crossings(N, alpha, m)
    for i, beta in enumerate(c.betas, start=1):
        assert abs(bessel_zero(beta, i) - c.target) <= 1e-9
    assert all(a > b for a, b in zip(c.betas, c.betas[1:]))
    assert c.betas[-1] == (N - 2) / (2 + alpha)


def test_beta_bracket_failure():
    with pytest.raises(BracketError):
        beta_crossings(2, 0, 3, beta_max=2.0)


def test_resonant_alpha_examples():
    c = beta_crossings(2, 0, 2)
    res = resonant_alphas(2, c, 4)
    by_n = {n: a for _, n, a in res}
    assert 1 not in by_n and 2 not in by_n
    assert by_n[3] == pytest.approx(0.6030, abs=5e-4)
    assert by_n[4] == pytest.approx(8 / 2.305 - 2, abs=2e-3)
    assert [row[2] for row in res] == sorted(row[2] for row in res)
    # recompute beta at the candidate alpha and check the integer is hit
    assert 0.5 * (2 + by_n[4]) * beta_crossings(2, by_n[4], 2).betas[0] == pytest.approx(4, abs=1e-9)


def test_refine_resonant_alpha_fixed_point():
    a = refine_resonant_alpha(3, 2, 1, 3, 0.0)
    beta = beta_crossings(3, a, 2).betas[0]
    assert abs((2 * 3 + 3 - 2) / beta - 2 - a) <= 1e-9


def trapezoid_c(N, alpha, i, n_points=10 ** 6):
    pair = weighted_eigenvalue(N, alpha, 0, i)
    r = np.linspace(0.0, 1.0, n_points)
    w = eigenfunction_radial_factor(pair, r)
    w = w / np.max(np.abs(w))
    aw = np.abs(w)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(aw > 0, w * w * np.log(aw), 0.0)
    weight = r ** (N - 1 + alpha)
    return -trapezoid(weight * g, r) / trapezoid(weight * w * w, r)


@pytest.mark.parametrize("N,alpha,i", [(2, 0.0, 1), (2, 0.0, 2), (3, 1.0, 2)])
def test_expansion_constant_against_trapezoid(N, alpha, i):
    c = expansion_constant(weighted_eigenvalue(N, alpha, 0, i))
    assert c > 0
    assert abs(c - trapezoid_c(N, alpha, i)) <= 1e-6


def test_expansion_constant_scaling():
    pair = weighted_eigenvalue(2, 0, 0, 2)
    assert expansion_constant(pair, scale=0.5) - expansion_constant(pair) == pytest.approx(
        math.log(2), abs=1e-10)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 0.7, 1.0, 2.0])
def test_planar_dichotomy(alpha):
    beta = beta_crossings(2, alpha, 2).betas[0]
    threshold = 0.5 * (2 + alpha) * beta
    mu02 = weighted_eigenvalue(2, alpha, 0, 2).mu
    for n in range(1, 9):
        assert (weighted_eigenvalue(2, alpha, n, 1).mu < mu02) == (n < threshold)


def test_planar_dichotomy_equality_at_resonance():
    a = resonant_alphas(2, beta_crossings(2, 0, 2), 3)[0][2]
    assert weighted_eigenvalue(2, a, 3, 1).mu == pytest.approx(weighted_eigenvalue(2, a, 0, 2).mu,
                                                               rel=1e-9)
