"""Bessel functions of the first kind of real order and their positive zeros.

Values come from :func:`scipy.special.jv`; this module adds domain checking,
the derivative convention used throughout the package, and an
index-certified zero finder.  Zeros are bracketed from McMahon's estimate
``(i + beta/2 - 1/4) * pi``, the bracket is widened in steps of ``pi`` until
it holds exactly ``i`` sign changes, and the last one is polished by
bisection followed by Newton iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np
from scipy import special

from .errors import BracketError, DomainError

__all__ = [
    "BesselOrder",
    "ZeroTable",
    "eval_J",
    "jv",
    "bessel_zero",
    "zero_table",
    "gamma_fn",
    "count_sign_changes",
]

ZERO_TOL = 1e-12
# Largest number of pi-widenings tried before giving up on a bracket.
EXPANSION_BUDGET = 200
# Scan step for counting sign changes; consecutive zeros are > 2.9 apart
# for every order >= 0.
_SCAN_STEP = 0.25


@dataclass(frozen=True)
class BesselOrder:
    """A finite, non-negative Bessel order."""

    beta: float

    def __post_init__(self):
        b = float(self.beta)
        if not math.isfinite(b) or b < 0:
            raise DomainError(f"Bessel order must be finite and >= 0, got {self.beta!r}")
        object.__setattr__(self, "beta", b)


OrderLike = Union[BesselOrder, float, int]


def _order(order: OrderLike) -> float:
    if isinstance(order, BesselOrder):
        return order.beta
    return BesselOrder(order).beta


@dataclass
class ZeroTable:
    """First few positive zeros of ``J_beta`` together with their residuals."""

    beta: float
    zeros: list = field(default_factory=list)
    residuals: list = field(default_factory=list)

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.zeros, self.zeros[1:])):
            raise ValueError("zeros must be strictly increasing")


def jv(beta: float, x):
    """Vectorised ``J_beta(x)`` without argument checks (internal use)."""
    return special.jv(beta, x)


def eval_J(order: OrderLike, x: float, want_derivative: bool = False):
    """Evaluate ``J_beta(x)`` and optionally ``J_beta'(x)``.

    Parameters
    ----------
    order : BesselOrder or float
        Order ``beta >= 0``.
    x : float
        Argument, ``x >= 0``.
    want_derivative : bool
        Also return the derivative.

    Returns
    -------
    (value, derivative)
        ``derivative`` is ``None`` unless requested.  For ``beta >= 1`` it is
        ``(J_{beta-1} - J_{beta+1}) / 2``; below that the series is
        differentiated term by term, which is ``beta/x J_beta - J_{beta+1}``.
    """
    beta = _order(order)
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x!r}")
    if x < 0:
        raise DomainError(f"argument must be >= 0, got {x!r}")
    value = float(special.jv(beta, x))
    if not want_derivative:
        return value, None
    if beta >= 1:
        deriv = 0.5 * float(special.jv(beta - 1, x) - special.jv(beta + 1, x))
    elif x == 0.0:
        # d/dx of (x/2)^beta / Gamma(beta+1) at 0: 0 for beta = 0, infinite for 0 < beta < 1
        deriv = 0.0 if beta == 0 else math.inf
    else:
        deriv = beta / x * value - float(special.jv(beta + 1, x))
    return value, deriv


def gamma_fn(x: float) -> float:
    """Gamma function on the positive half-line."""
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"gamma_fn needs a finite x > 0, got {x!r}")
    return math.gamma(x)


def count_sign_changes(values) -> int:
    """Number of strict sign changes in a sampled sequence (zeros skipped)."""
    s = np.sign(np.asarray(values, dtype=float))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _mcmahon(beta: float, i: int) -> float:
    return (i + 0.5 * beta - 0.25) * math.pi


def _refine(beta: float, a: float, b: float) -> float:
    fa = special.jv(beta, a)
    # bisection down to a bracket where Newton is safe
    for _ in range(60):
        if b - a < 1e-3:
            break
        c = 0.5 * (a + b)
        fc = special.jv(beta, c)
        if fc == 0:
            return c
        if (fc > 0) == (fa > 0):
            a, fa = c, fc
        else:
            b = c
    x = 0.5 * (a + b)
    for _ in range(50):
        f = special.jv(beta, x)
        df = special.jvp(beta, x)
        step = f / df
        x_new = x - step
        if not (a <= x_new <= b):
            x_new = 0.5 * (a + b)
        if (special.jv(beta, x_new) > 0) == (fa > 0):
            a = x_new
        else:
            b = x_new
        if abs(x_new - x) <= 4e-16 * x_new:
            x = x_new
            break
        x = x_new
    return float(x)


@lru_cache(maxsize=8192)
def _bessel_zero(beta: float, i: int) -> float:
    # lru_cache is internally locked, so concurrent callers are safe.
    hi = max(_mcmahon(beta, i) + 0.5 * math.pi, beta + 1.0)
    for _ in range(EXPANSION_BUDGET):
        x = np.arange(_SCAN_STEP, hi + _SCAN_STEP, _SCAN_STEP)
        vals = special.jv(beta, x)
        if not np.all(np.isfinite(vals)):
            raise BracketError(f"J_{beta} not finite while bracketing zero {i}")
        s = np.sign(vals)
        changes = np.nonzero(s[1:] * s[:-1] < 0)[0]
        exact = np.nonzero(s == 0)[0]
        if exact.size:
            # a sample landed on a zero: merge it into the sign-change list
            cand = sorted(set(changes.tolist()) | set((exact - 1).tolist()))
        else:
            cand = changes.tolist()
        if len(cand) >= i:
            k = cand[i - 1]
            if vals[k + 1] == 0:
                return float(x[k + 1])
            return _refine(beta, float(x[k]), float(x[k + 1]))
        hi += math.pi
    raise BracketError(
        f"could not isolate zero {i} of J_{beta} within {EXPANSION_BUDGET} expansions"
    )


def bessel_zero(order: OrderLike, i: int) -> float:
    """The ``i``-th positive zero ``z_i(beta)`` of ``J_beta``.

    >>> round(bessel_zero(0, 1), 9)
    2.404825558
    """
    beta = _order(order)
    if int(i) != i or i < 1:
        raise DomainError(f"zero index must be a positive integer, got {i!r}")
    return _bessel_zero(beta, int(i))


def zero_table(order: OrderLike, count: int, tol: float = ZERO_TOL) -> ZeroTable:
    """Tabulate the first ``count`` zeros and check their residuals."""
    beta = _order(order)
    zeros = [bessel_zero(beta, i) for i in range(1, count + 1)]
    residuals = [abs(float(special.jv(beta, z))) for z in zeros]
    bad = [r for r in residuals if r > tol]
    if bad:
        raise BracketError(f"zero residual {max(bad):.3g} exceeds {tol:g}")
    return ZeroTable(beta=beta, zeros=zeros, residuals=residuals)

