"""Eigenpairs of ``-Delta w = mu |x|^alpha w`` on the unit ball.

The eigenvalues are ``mu_{n,i} = ((2+alpha)/2 * z_i(nu_n))**2`` with Bessel
order ``nu_n = (N-2+2n)/(2+alpha)``, and the radial factor of the
eigenfunction is ``r**(-(N-2)/2) * J_{nu_n}(z_i * r**((2+alpha)/2))``.
The module also finds the crossing orders ``beta_i`` with
``z_i(beta_i) = z_m((N-2)/(2+alpha))``, the weight exponents at which the
asymptotic Morse index jumps, and the constant ``c`` of the first-order
expansion of the sup-norm of nodal radial solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.optimize import minimize_scalar

from .bessel import bessel_zero, gamma_fn
from .errors import BracketError, DomainError, NumericalError, QuadratureError

BETA_MAX = 50.0
BETA_TOL = 1e-10


def _check_dims(N, alpha):
    if int(N) != N or N < 2:
        raise DomainError(f"dimension N must be an integer >= 2, got {N!r}")
    if not math.isfinite(alpha) or alpha < 0:
        raise DomainError(f"alpha must be finite and >= 0, got {alpha!r}")


def bessel_order(N: int, alpha: float, n: int = 0) -> float:
    """Order ``(N-2+2n)/(2+alpha)`` attached to angular index ``n``."""
    return (N - 2 + 2 * n) / (2.0 + alpha)


def laplace_beltrami_eigenvalue(N: int, n: int) -> int:
    """``lambda_n = n (N-2+n)`` on the unit sphere of ``R^N``."""
    return n * (N - 2 + n)


@dataclass(frozen=True)
class WeightedEigenpair:
    n: int
    i: int
    mu: float
    order: float
    zero: float
    N: int
    alpha: float

    @property
    def lam(self) -> int:
        return laplace_beltrami_eigenvalue(self.N, self.n)

    def radial(self, r):
        return eigenfunction_radial_factor(self, r)


@dataclass
class CrossingParams:
    """Crossing orders ``beta_1 > ... > beta_m`` for fixed ``(N, alpha, m)``."""

    m: int
    betas: list = field(default_factory=list)
    N: int = 2
    alpha: float = 0.0
    target: float = float("nan")  # z_m of the baseline order


def weighted_eigenvalue(N: int, alpha: float, n: int, i: int) -> WeightedEigenpair:
    _check_dims(N, alpha)
    if int(n) != n or n < 0:
        raise DomainError(f"angular index must be >= 0, got {n!r}")
    if int(i) != i or i < 1:
        raise DomainError(f"radial index must be >= 1, got {i!r}")
    order = bessel_order(N, alpha, n)
    z = bessel_zero(order, i)
    mu = (0.5 * (2.0 + alpha) * z) ** 2
    return WeightedEigenpair(n=int(n), i=int(i), mu=mu, order=order, zero=z, N=int(N), alpha=float(alpha))


def eigenfunction_radial_factor(pair: WeightedEigenpair, r):
    """``r**(-(N-2)/2) J_order(zero * r**((2+alpha)/2))`` for ``r`` in [0, 1].

    Accepts scalars or arrays.  Near the origin the product is evaluated from
    the leading series terms, ``(z/2)**order / Gamma(order+1) * r**n * (...)``,
    so ``r = 0`` is handled exactly.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(r_arr > 1) or not np.all(np.isfinite(r_arr)):
        raise DomainError("r must lie in [0, 1]")
    N, alpha, beta, z, n = pair.N, pair.alpha, pair.order, pair.zero, pair.n
    t = r_arr ** (0.5 * (2.0 + alpha))
    x = z * t
    out = np.empty_like(r_arr)
    small = x < 1e-3
    big = ~small
    if np.any(big):
        out[big] = r_arr[big] ** (-0.5 * (N - 2)) * special.jv(beta, x[big])
    if np.any(small):
        xs = x[small]
        q = -0.25 * xs * xs
        series = 1.0 + q / (beta + 1) + q * q / (2 * (beta + 1) * (beta + 2))
        lead = (0.5 * z) ** beta / gamma_fn(beta + 1)
        out[small] = lead * r_arr[small] ** n * series
    if out.ndim == 0:
        return float(out)
    return out


def radial_sup_norm(pair: WeightedEigenpair) -> float:
    """``max |radial factor|`` on [0, 1]."""
    if pair.n == 0:
        return abs(float(eigenfunction_radial_factor(pair, 0.0)))
    r = np.linspace(0.0, 1.0, 4001)
    vals = np.abs(eigenfunction_radial_factor(pair, r))
    k = int(np.argmax(vals))
    lo, hi = r[max(k - 1, 0)], r[min(k + 1, r.size - 1)]
    res = minimize_scalar(
        lambda s: -abs(eigenfunction_radial_factor(pair, s)),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return max(float(vals[k]), -float(res.fun))


def beta_crossings(N: int, alpha: float, m: int, beta_max: float = BETA_MAX,
                   tol: float = BETA_TOL) -> CrossingParams:
    """Solve ``z_i(beta_i) = z_m(b)``, ``b = (N-2)/(2+alpha)``, by dichotomy.

    ``beta -> z_i(beta)`` is increasing, so for each ``i < m`` the root is
    isolated in ``[b, beta_max]``; ``beta_m = b`` exactly.
    """
    _check_dims(N, alpha)
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    b = bessel_order(N, alpha)
    target = bessel_zero(b, m)
    betas = []
    for i in range(1, m):
        lo, hi = b, float(beta_max)
        if bessel_zero(hi, i) <= target:
            raise BracketError(
                f"z_{i}({hi}) does not exceed z_{m}({b:.6g}); raise beta_max",
                trace=[(hi, bessel_zero(hi, i))],
            )
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if bessel_zero(mid, i) < target:
                lo = mid
            else:
                hi = mid
        betas.append(0.5 * (lo + hi))
    betas.append(b)
    return CrossingParams(m=int(m), betas=betas, N=int(N), alpha=float(alpha), target=target)


def resonant_alphas(N: int, betas: CrossingParams, n_max: int):
    """Weight exponents ``alpha = (2n+N-2)/beta_l - 2 >= 0`` for ``l < m``.

    The ``beta`` table is taken as given (computed at some reference alpha);
    see :func:`refine_resonant_alpha` for the self-consistent version.
    Returns ``(l, n, alpha)`` triples sorted by alpha.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    out = []
    for ell, beta in enumerate(betas.betas[:-1], start=1):
        if beta == 0:
            continue
        for n in range(1, int(n_max) + 1):
            a = (2 * n + N - 2) / beta - 2.0
            if a >= 0:
                out.append((ell, n, a))
    out.sort(key=lambda row: row[2])
    return out


def refine_resonant_alpha(N: int, m: int, ell: int, n: int, alpha0: float,
                          tol: float = 1e-10, max_iter: int = 100) -> float:
    """Iterate ``alpha <- (2n+N-2)/beta_ell(alpha) - 2`` to a fixed point.

    In the plane ``beta_ell`` does not depend on alpha and one step suffices.
    """
    alpha = float(alpha0)
    for _ in range(max_iter):
        beta = beta_crossings(N, max(alpha, 0.0), m).betas[ell - 1]
        new = (2 * n + N - 2) / beta - 2.0
        if new < 0:
            raise DomainError(f"no resonant alpha >= 0 for l={ell}, n={n}")
        if abs(new - alpha) <= tol:
            return new
        alpha = new
    raise NumericalError(f"resonant alpha iteration did not settle after {max_iter} steps")


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _composite_gl(f, breaks, level):
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        edges = np.linspace(a, b, 2 ** level + 1)
        lo, hi = edges[:-1, None], edges[1:, None]
        x = 0.5 * (hi - lo) * _GL_NODES[None, :] + 0.5 * (hi + lo)
        w = 0.5 * (hi - lo) * _GL_WEIGHTS[None, :]
        total += float(np.sum(w * f(x)))
    return total


def expansion_constant(pair: WeightedEigenpair, scale: float = 1.0,
                       tol: float = 1e-8) -> float:
    """``c = -int |x|^a log|w| w^2 / int |x|^a w^2`` for the sup-normalised ``w``.

    ``scale`` multiplies the normalised eigenfunction before evaluation
    (``c`` shifts by ``-log(scale)``).  The integrals are reduced to the
    transformed variable ``t = r**((2+alpha)/2)``, where the weight becomes
    ``t**(M-1)``, and split at the interior zeros ``t_k = z_k / z_i``.
    """
    if scale <= 0:
        raise DomainError("scale must be positive")
    M = 2.0 * (pair.N + pair.alpha) / (2.0 + pair.alpha)
    norm = scale / radial_sup_norm(pair)
    d = 2.0 / (2.0 + pair.alpha)

    def omega_t(t):
        return norm * eigenfunction_radial_factor(pair, np.clip(t, 0.0, 1.0) ** d)

    def num(t):
        w = omega_t(t)
        aw = np.abs(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(aw > 0, w * w * np.log(aw), 0.0)
        return t ** (M - 1) * g

    def den(t):
        w = omega_t(t)
        return t ** (M - 1) * w * w

    breaks = [0.0] + [bessel_zero(pair.order, k) / pair.zero for k in range(1, pair.i)] + [1.0]
    prev = None
    diff = math.inf
    for level in range(1, 12):
        c = -_composite_gl(num, breaks, level) / _composite_gl(den, breaks, level)
        if prev is not None:
            diff = abs(c - prev)
            if diff <= 1e-13 * max(1.0, abs(c)):
                return c
        prev = c
    if diff <= tol:
        return c
    raise QuadratureError(f"expansion constant did not converge (last change {diff:.3g})")
