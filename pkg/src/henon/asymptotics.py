"""Behaviour of radial nodal solutions as ``p -> 1``.

The rescaled solutions converge to the ``m``-th radial eigenfunction of
``-Delta w = mu |x|^alpha w``: the amplitude ``||u_p||**((p-1)/2)`` tends to
``(2+alpha)/2 z_m(b)``, the nodal radii to ``(z_i/z_m)**(2/(2+alpha))`` and the
singular eigenvalues to ``b**2 - beta_i**2``.  A first-order correction in
``p - 1`` involves the constant ``c`` of
:func:`henon.weighted_spectrum.expansion_constant`.

In the plane the module also classifies least-energy nodal solutions that
are invariant under the dihedral group of order ``2n``: they are nonradial
in the limit when ``n < (2+alpha) beta / 2`` and radial when
``n > (2+alpha) beta / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bessel import bessel_zero
from .errors import DomainError, NumericalError
from .radial_shooting import ProblemParams, RadialProfile, solve_radial
from .singular_sturm import nu_spectrum
from .weighted_spectrum import (CrossingParams, WeightedEigenpair, _check_dims, beta_crossings,
                                bessel_order, eigenfunction_radial_factor, expansion_constant,
                                weighted_eigenvalue)

# Large-p threshold quoted alongside the small-p one for the n-invariant
# problem.  No computation here depends on it.
KAPPA = 5.1869
CLASSIFY_TOL = 1e-9
PROFILE_R_MAX = 0.95

NONRADIAL = "Nonradial"
RADIAL = "Radial"
AMBIGUOUS = "Ambiguous"


def limit_amplitude(N: int, alpha: float, m: int) -> float:
    """Limit of ``||u_p||**((p-1)/2)``: ``(2+alpha)/2 z_m((N-2)/(2+alpha))``."""
    _check_dims(N, alpha)
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    return 0.5 * (2.0 + alpha) * bessel_zero(bessel_order(N, alpha), m)


def limit_profile(N: int, alpha: float, m: int, r):
    """Limit of ``u_p / ||u_p||_inf``, ``r**(-(N-2)/2) J_b(z_m r**((2+alpha)/2))`` scaled to 1 at 0.

    The scaling constant is ``Gamma(b+1) (2/z_m)**b``.
    """
    pair = weighted_eigenvalue(N, alpha, 0, m)
    return eigenfunction_radial_factor(pair, r) / eigenfunction_radial_factor(pair, 0.0)


def limit_nodal_radii(N: int, alpha: float, m: int) -> list:
    """``(z_i/z_m)**(2/(2+alpha))`` for ``i < m`` (empty when ``m = 1``)."""
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    b = bessel_order(N, alpha)
    zm = bessel_zero(b, m)
    return [(bessel_zero(b, i) / zm) ** (2.0 / (2.0 + alpha)) for i in range(1, m)]


def nu_limits(N: int, alpha: float, m: int, crossings: Optional[CrossingParams] = None) -> list:
    """``b**2 - beta_i**2``; the last entry is exactly 0."""
    if crossings is None:
        crossings = beta_crossings(N, alpha, m)
    b = bessel_order(N, alpha)
    out = [b * b - beta * beta for beta in crossings.betas]
    out[-1] = 0.0
    return out


@dataclass
class ExpansionReport:
    mu: float
    c: float
    lhs: float       # ||u_p||**(p-1)
    rhs: float       # mu (1 + c (p-1))
    residual: float
    ratio: float     # residual / (p-1)
    point_error: float  # sup_{r <= 0.95} |mu**(-1/(p-1)) u_p - e**c omega|


def expansion_check(N: int, alpha: float, m: int, p: float,
                    profile: Optional[RadialProfile] = None,
                    pair: Optional[WeightedEigenpair] = None,
                    r_max: float = PROFILE_R_MAX, samples: int = 200) -> ExpansionReport:
    """Compare a profile with the first-order expansion in ``p - 1``.

    ``mu**(-1/(p-1)) u_p`` equals ``exp((log ||u_p||**(p-1) - log mu)/(p-1))``
    times the normalised profile; only that exponent is formed, so nothing
    overflows even though ``mu**(-1/(p-1))`` and ``||u_p||`` both do.
    """
    params = ProblemParams(N, alpha, p, m)
    if profile is None:
        profile = solve_radial(params)
    if pair is None:
        pair = weighted_eigenvalue(N, alpha, 0, m)
    c = expansion_constant(pair)
    mu = pair.mu
    lhs = profile.amplitude_root ** 2
    rhs = mu * (1.0 + c * (p - 1.0))
    residual = abs(lhs - rhs)
    exponent = (2.0 * math.log(profile.amplitude_root) - math.log(mu)) / (p - 1.0)
    if exponent > 700.0:
        raise NumericalError(f"log-space factor exp({exponent:.4g}) is out of range")
    r = np.linspace(0.0, r_max, samples)
    omega = limit_profile(N, alpha, m, r)
    point_error = float(np.max(np.abs(math.exp(exponent) * profile.u_normalized(r)
                                      - math.exp(c) * omega)))
    return ExpansionReport(mu=mu, c=c, lhs=lhs, rhs=rhs, residual=residual,
                           ratio=residual / (p - 1.0), point_error=point_error)


@dataclass
class NInvariantClassification:
    alpha: float
    n: int
    threshold: float
    verdict: str
    limit_eigenpair: Optional[WeightedEigenpair]
    nonradial_count: int
    candidates: list = field(default_factory=list)


def classify_n_invariant(alpha: float, n: int, tol: float = CLASSIFY_TOL) -> NInvariantClassification:
    """Limit of the least-energy nodal solution invariant under rotations by ``2 pi/n``.

    Nonradial, with limit profile built on the ``(n, 1)`` eigenpair, when
    ``n < (2+alpha) beta / 2``; radial (the ``(0, 2)`` eigenpair) when
    ``n > (2+alpha) beta / 2``; ``Ambiguous`` within ``tol`` of the threshold,
    carrying both candidates.
    """
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    beta = beta_crossings(2, alpha, 2).betas[0]
    threshold = 0.5 * (2.0 + alpha) * beta
    count = math.ceil(threshold - 1.0)
    nonrad = weighted_eigenvalue(2, alpha, n, 1)
    rad = weighted_eigenvalue(2, alpha, 0, 2)
    if abs(n - threshold) <= tol:
        return NInvariantClassification(alpha, n, threshold, AMBIGUOUS, None, count, [nonrad, rad])
    if n < threshold:
        return NInvariantClassification(alpha, n, threshold, NONRADIAL, nonrad, count, [nonrad])
    return NInvariantClassification(alpha, n, threshold, RADIAL, rad, count, [rad])


@dataclass
class ConvergenceRow:
    p: float
    amplitude_error: float
    nodal_errors: list
    nu_errors: list
    profile_error: float


@dataclass
class ConvergenceReport:
    N: int
    alpha: float
    m: int
    rows: list
    monotone: bool
    flags: list


def convergence_report(N: int, alpha: float, m: int, p_list,
                       r_max: float = PROFILE_R_MAX, samples: int = 200) -> ConvergenceReport:
    """Errors against the ``p -> 1`` limits for each ``p`` (descending toward 1).

    Every error column must be non-increasing down the table; offending
    columns are listed in ``flags``.
    """
    p_list = list(p_list)
    if any(b >= a for a, b in zip(p_list, p_list[1:])):
        raise DomainError("p_list must be strictly decreasing toward 1")
    amp = limit_amplitude(N, alpha, m)
    radii = limit_nodal_radii(N, alpha, m)
    crossings = beta_crossings(N, alpha, m)
    nus_lim = nu_limits(N, alpha, m, crossings)
    r = np.linspace(0.0, r_max, samples)
    omega = limit_profile(N, alpha, m, r)
    rows = []
    for p in p_list:
        prof = solve_radial(ProblemParams(N, alpha, p, m))
        spec = nu_spectrum(prof)
        rows.append(ConvergenceRow(
            p=p,
            amplitude_error=abs(prof.amplitude_root - amp),
            nodal_errors=[abs(a - b) for a, b in zip(prof.nodal_r[:-1], radii)],
            nu_errors=[abs(a - b) for a, b in zip(spec.nus, nus_lim)],
            profile_error=float(np.max(np.abs(prof.u_normalized(r) - omega))),
        ))
    flags = []

    def check(name, values):
        if any(b > a for a, b in zip(values, values[1:])):
            flags.append(name)

    check("amplitude_error", [row.amplitude_error for row in rows])
    check("profile_error", [row.profile_error for row in rows])
    for k in range(m - 1):
        check(f"nodal_error_{k + 1}", [row.nodal_errors[k] for row in rows])
    for k in range(m):
        check(f"nu_error_{k + 1}", [row.nu_errors[k] for row in rows])
    return ConvergenceReport(N=N, alpha=alpha, m=m, rows=rows, monotone=not flags, flags=flags)
