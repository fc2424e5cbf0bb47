"""Morse index of radial nodal solutions.

For a radial solution with ``m`` nodal zones and negative singular
eigenvalues ``nu_1 < ... < nu_m`` the index is

    sum_i sum_{j=0}^{ceil(J_i - 1)} N_j,
    J_i = (2+alpha)/2 * (sqrt(b**2 - nu_i) - b),   b = (N-2)/(2+alpha),

where ``N_j`` is the multiplicity of the ``j``-th spherical harmonic
eigenvalue ``lambda_j = j(N+j-2)``.  As ``p -> 1`` the ``nu_i`` tend to
``b**2 - beta_i**2`` and the index becomes an explicit function of the
Bessel crossing orders ``beta_i``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

from .errors import DomainError
from .radial_shooting import ProblemParams
from .singular_sturm import SingularSpectrum
from .weighted_spectrum import CrossingParams, beta_crossings, laplace_beltrami_eigenvalue

RESONANCE_TOL = 1e-6
ASYMPTOTIC_RESONANCE_TOL = 1e-9


def multiplicity_Nj(N: int, j: int) -> int:
    """Dimension of the degree-``j`` spherical harmonics on ``S^{N-1}``.

    Exact integer arithmetic: ``(N+2j-2) C(N+j-3, j) / (N-2)`` for ``N >= 3``
    and ``2`` for ``N = 2, j >= 1``.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    if int(j) != j or j < 0:
        raise DomainError(f"j must be an integer >= 0, got {j!r}")
    N, j = int(N), int(j)
    if j == 0:
        return 1
    if N == 2:
        return 2
    return (N + 2 * j - 2) * math.comb(N + j - 3, j) // (N - 2)


def _sum_Nj(N: int, top: int) -> int:
    """``sum_{j=0}^{top} N_j`` (0 for ``top < 0``)."""
    return sum(multiplicity_Nj(N, j) for j in range(0, top + 1))


def J_index(params: ProblemParams, nu: float) -> float:
    """``J = (2+alpha)/2 (sqrt(b**2 - nu) - b)``; positive iff ``nu < 0``."""
    b = (params.N - 2) / (2.0 + params.alpha)
    disc = b * b - nu
    if not disc >= 0:
        raise DomainError(f"nu={nu!r} exceeds b**2 = {b * b:g}")
    root = math.sqrt(disc)
    # -nu/(root+b) avoids cancellation for nu near 0
    theta = -nu / (root + b) if nu <= 0 and root + b > 0 else root - b
    return 0.5 * (2.0 + params.alpha) * theta


def _near_integer(x: float, tol: float):
    k = round(x)
    return abs(x - k) < tol, int(k)


@dataclass
class MorseReport:
    params: ProblemParams
    nus: list
    J_values: list
    ceil_values: list
    total: int
    contributions: list  # (i, j, N_j)
    resonant: bool = False
    interval: Optional[tuple] = None
    decomposition: list = field(default_factory=list)  # (i, j, Lambda_hat, N_j)

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "nus": list(self.nus),
            "J": list(self.J_values),
            "ceil": list(self.ceil_values),
            "total": self.total,
            "contributions": [list(c) for c in self.contributions],
            "resonant": self.resonant,
            "interval": list(self.interval) if self.interval is not None else None,
            "decomposition": [list(d) for d in self.decomposition],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MorseReport":
        return cls(
            params=ProblemParams(**data["params"]),
            nus=list(data["nus"]),
            J_values=list(data["J"]),
            ceil_values=[int(c) for c in data["ceil"]],
            total=int(data["total"]),
            contributions=[tuple(c) for c in data["contributions"]],
            resonant=bool(data["resonant"]),
            interval=tuple(data["interval"]) if data.get("interval") is not None else None,
            decomposition=[tuple(d) for d in data.get("decomposition", [])],
        )


def exact_morse(params: ProblemParams, spectrum: Union[SingularSpectrum, list]) -> MorseReport:
    """Morse index from the negative singular eigenvalues at finite ``p``.

    Also lists the negative eigenvalues ``((2+alpha)/2)**2 nu_i + lambda_j``
    of the full singular problem (each with multiplicity ``N_j``) and checks
    that they add up to the same total.  A ``J_i`` within ``1e-6`` of an
    integer makes the ceiling unreliable: the report is then flagged and
    carries the two candidate totals.
    """
    nus = list(spectrum.nus if isinstance(spectrum, SingularSpectrum) else spectrum)
    if len(nus) != params.m:
        raise DomainError(f"spectrum has {len(nus)} eigenvalues, expected m={params.m}")
    if any(not nu < 0 for nu in nus):
        raise DomainError("singular eigenvalues must be negative")
    N, alpha = params.N, params.alpha
    Js = [J_index(params, nu) for nu in nus]
    ceils = [math.ceil(J - 1.0) for J in Js]
    contributions = [(i, j, multiplicity_Nj(N, j))
                     for i, c in enumerate(ceils, start=1) for j in range(0, c + 1)]
    total = sum(c[2] for c in contributions)
    scale = (0.5 * (2.0 + alpha)) ** 2
    decomposition = []
    for i, nu in enumerate(nus, start=1):
        j = 0
        while True:
            lam_hat = scale * nu + laplace_beltrami_eigenvalue(N, j)
            if not lam_hat < 0:
                break
            decomposition.append((i, j, lam_hat, multiplicity_Nj(N, j)))
            j += 1
    count = sum(d[3] for d in decomposition)
    resonant, extra = False, 0
    for J in Js:
        hit, k = _near_integer(J, RESONANCE_TOL)
        if hit and k >= 1:
            resonant = True
            extra += multiplicity_Nj(N, k)
    interval = None
    if resonant:
        # which side of the integer J_i sits on is not resolved
        low = 0
        for J in Js:
            hit, k = _near_integer(J, RESONANCE_TOL)
            low += _sum_Nj(N, k - 1 if hit and k >= 1 else math.ceil(J - 1.0))
        interval = (low, low + extra)
    elif count != total:
        raise AssertionError(f"decomposition count {count} differs from Morse total {total}")
    return MorseReport(params=params, nus=nus, J_values=Js, ceil_values=ceils, total=total,
                       contributions=contributions, resonant=resonant, interval=interval,
                       decomposition=decomposition)


@dataclass
class AsymptoticMorse:
    N: int
    alpha: float
    m: int
    K_values: list  # ((2+alpha) beta_i - N)/2 for i < m
    resonant: bool
    total: Optional[int]
    interval: Optional[tuple]

    @property
    def value(self):
        return self.interval if self.resonant else self.total


def asymptotic_morse_report(N: int, alpha: float, m: int,
                            crossings: Optional[CrossingParams] = None) -> AsymptoticMorse:
    """Limit ``p -> 1`` of the Morse index, or its bracket at resonance."""
    if crossings is None:
        crossings = beta_crossings(N, alpha, m)
    if crossings.m != m or len(crossings.betas) != m:
        raise DomainError("crossings were computed for a different m")
    Ks = [0.5 * ((2.0 + alpha) * beta - N) for beta in crossings.betas[:-1]]
    base, extra, resonant = 1, 0, False
    for K in Ks:
        hit, k = _near_integer(K, ASYMPTOTIC_RESONANCE_TOL)
        if hit:
            resonant = True
            base += _sum_Nj(N, k)
            extra += multiplicity_Nj(N, k + 1)
        else:
            base += _sum_Nj(N, math.ceil(K))
    if resonant:
        return AsymptoticMorse(N, alpha, m, Ks, True, None, (base, base + extra))
    return AsymptoticMorse(N, alpha, m, Ks, False, base, None)


def asymptotic_morse(N: int, alpha: float, m: int, crossings: Optional[CrossingParams] = None):
    """``1 + sum_{i<m} sum_{j=0}^{ceil(((2+alpha) beta_i - N)/2)} N_j``.

    Returns an ``int``, or a ``(lower, upper)`` tuple when some
    ``((2+alpha) beta_i - N)/2`` is an integer (to ``1e-9``), where the limit
    only brackets the index.
    """
    return asymptotic_morse_report(N, alpha, m, crossings).value


def lane_emden_morse(N: int, m: int) -> int:
    """``m + sum_{i<m} (m-i)(N_{2i-1} + N_{2i})``, the ``alpha = 0`` closed form."""
    return m + sum((m - i) * (multiplicity_Nj(N, 2 * i - 1) + multiplicity_Nj(N, 2 * i))
                   for i in range(1, m))


def planar_two_zone_morse(alpha: float, beta: Optional[float] = None):
    """``2 ceil((2+alpha) beta / 2)`` for the two-zone solution in the plane.

    At resonance (``(2+alpha) beta / 2`` an integer) returns the interval
    ``((2+alpha) beta, (2+alpha) beta + 2)``.
    """
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must be >= 0, got {alpha!r}")
    if beta is None:
        beta = beta_crossings(2, alpha, 2).betas[0]
    x = 0.5 * (2.0 + alpha) * beta
    hit, k = _near_integer(x, ASYMPTOTIC_RESONANCE_TOL)
    if hit:
        return (2 * k, 2 * k + 2)
    return 2 * math.ceil(x)


def n_morse_index(alpha: float, nu1: float, nu2: float, n: int) -> int:
    """Morse index in the space of ``n``-invariant functions (plane, two zones).

    ``2 + sum_i floor(ceil((2+alpha)/2 sqrt(-nu_i) - 1) / n)``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not (nu1 < nu2 < 0):
        raise DomainError("need nu1 < nu2 < 0")
    total = 2
    for nu in (nu1, nu2):
        total += math.ceil(0.5 * (2.0 + alpha) * math.sqrt(-nu) - 1.0) // int(n)
    return total
