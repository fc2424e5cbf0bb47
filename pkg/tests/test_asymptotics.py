import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import profile
from henon.asymptotics import (AMBIGUOUS, KAPPA, NONRADIAL, RADIAL, classify_n_invariant,
                               convergence_report, expansion_check, limit_amplitude,
                               limit_nodal_radii, limit_profile, nu_limits)
from henon.bessel import bessel_zero
from henon.errors import DomainError
from henon.weighted_spectrum import beta_crossings, resonant_alphas, weighted_eigenvalue

Z01, Z02 = bessel_zero(0, 1), bessel_zero(0, 2)


def test_limit_amplitude_examples():
    assert limit_amplitude(2, 0, 1) == pytest.approx(2.4048, abs=1e-4)
    assert limit_amplitude(2, 2, 1) == pytest.approx(2 * Z01, rel=1e-14)
    assert limit_amplitude(2, 0, 2) == pytest.approx(5.5201, abs=1e-4)
    with pytest.raises(DomainError):
        limit_amplitude(2, 0, 0)


@pytest.mark.parametrize("N,alpha,m", [(2, 0.0, 2), (3, 0.0, 1), (3, 1.0, 3), (5, 2.5, 2)])
def test_limit_profile_values(N, alpha, m):
    assert limit_profile(N, alpha, m, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert abs(limit_profile(N, alpha, m, 1.0)) <= 1e-12
    for r in limit_nodal_radii(N, alpha, m):
        assert abs(limit_profile(N, alpha, m, r)) <= 1e-10
    r = np.linspace(0, 1, 101)
    assert np.max(np.abs(limit_profile(N, alpha, m, r))) == pytest.approx(1.0, rel=1e-12)


def test_limit_nodal_radii_examples():
    assert limit_nodal_radii(2, 0, 2) == [pytest.approx(0.4357, abs=1e-4)]
    assert limit_nodal_radii(2, 2, 2) == [pytest.approx(math.sqrt(Z01 / Z02), rel=1e-14)]
    assert limit_nodal_radii(3, 0, 1) == []
    radii = limit_nodal_radii(4, 1.5, 5)
    assert len(radii) == 4 and all(0 < a < b < 1 for a, b in zip(radii, radii[1:]))


def test_nu_limits_examples():
    lim = nu_limits(2, 0, 2)
    assert lim[-1] == 0.0
    assert lim[0] == pytest.approx(-5.313, abs=1e-3)
    lim = nu_limits(3, 1.0, 4)
    assert all(x < 0 for x in lim[:-1]) and lim[-1] == 0.0


@pytest.mark.parametrize("m", [1, 2])
def test_expansion_residual_is_little_o(m):
    reports = [expansion_check(2, 0.0, m, p, profile=profile(2, 0.0, p, m))
               for p in (1.1, 1.01, 1.001)]
    ratios = [r.ratio for r in reports]
    assert ratios[0] > ratios[1] > ratios[2]
    for r in reports[1:]:
        assert r.c > 0
        assert r.lhs > r.mu
    assert reports[-1].point_error <= 0.05


def test_expansion_overflow_guard():
    from henon.errors import NumericalError
    with pytest.raises(NumericalError):
        # a two-zone profile against the first eigenvalue: exponent ~ log(5)/(p-1)
        expansion_check(2, 0.0, 2, 1.001, profile=profile(2, 0.0, 1.001, 2),
                        pair=weighted_eigenvalue(2, 0.0, 0, 1))


def test_classify_examples():
    verdicts = [classify_n_invariant(0.0, n).verdict for n in range(1, 7)]
    assert verdicts == [NONRADIAL, NONRADIAL] + [RADIAL] * 4
    c1 = classify_n_invariant(0.0, 1)
    assert c1.limit_eigenpair.mu == pytest.approx(bessel_zero(1, 1) ** 2, rel=1e-12)
    c3 = classify_n_invariant(0.0, 3)
    assert c3.limit_eigenpair.mu == pytest.approx(Z02 ** 2, rel=1e-12)
    assert c1.nonradial_count == 2
    assert KAPPA == 5.1869


def test_classify_ambiguous_at_threshold():
    a = resonant_alphas(2, beta_crossings(2, 0, 2), 3)[0][2]
    c = classify_n_invariant(a, 3)
    assert c.verdict == AMBIGUOUS and c.limit_eigenpair is None and len(c.candidates) == 2


def test_classify_rejects_bad_input():
    with pytest.raises(DomainError):
        classify_n_invariant(-1.0, 1)
    with pytest.raises(DomainError):
        classify_n_invariant(0.0, 0)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 4.0))
def test_classification_flips_once(alpha):
    rows = [classify_n_invariant(alpha, n) for n in range(1, 16)]
    verdicts = [r.verdict for r in rows if r.verdict != AMBIGUOUS]
    flips = sum(1 for a, b in zip(verdicts, verdicts[1:]) if a != b)
    assert flips == 1 and verdicts[0] == NONRADIAL
    assert rows[0].nonradial_count >= 1
    assert rows[0].nonradial_count == sum(r.verdict == NONRADIAL for r in rows)
    # distinct limits below the threshold
    mus = [r.limit_eigenpair.mu for r in rows if r.verdict == NONRADIAL]
    assert all(b - a > 1e-6 for a, b in zip(mus, mus[1:]))
    # the second eigenvalue in the n-invariant class sits above the first
    mu01 = weighted_eigenvalue(2, alpha, 0, 1).mu
    for n in range(1, 6):
        second = min(weighted_eigenvalue(2, alpha, n, 1).mu, weighted_eigenvalue(2, alpha, 0, 2).mu)
        assert mu01 < second


def test_convergence_report_planar_two_zone():
    rep = convergence_report(2, 0.0, 2, [1.1, 1.01, 1.001])
    assert rep.monotone and rep.flags == []
    last = rep.rows[-1]
    assert last.amplitude_error / Z02 <= 0.01
    assert last.nu_errors[-1] == pytest.approx(abs(rep.rows[-1].nu_errors[-1]))
    assert len(last.nodal_errors) == 1


def test_convergence_report_single_zone_and_order():
    rep = convergence_report(3, 1.0, 1, [1.05, 1.005])
    assert all(row.nodal_errors == [] for row in rep.rows)
    with pytest.raises(DomainError):
        convergence_report(2, 0.0, 1, [1.01, 1.1])
