"""Negative spectrum of the singular Sturm-Liouville problem

    -(t**(M-1) phi')' - t**(M-1) W phi = nu t**(M-3) phi,   phi(1) = 0,

linearised at a radial profile, ``W = p d**2 |w_p|**(p-1)``.

Shooting.  Near ``t = 0`` the admissible solution behaves like ``t**theta``
with ``theta = sqrt(b**2 - nu) - b``, ``b = (M-2)/2``.  Writing
``phi = t**theta y`` removes the singular coefficient:

    y'' + (2 theta + M - 1)/t y' + W y = 0,   y(0) = 1, y'(0) = 0,

which is as tame as the radial equation itself.  When the potential comes
from a :class:`RadialProfile` we integrate ``(w, w', y, y')`` together in the
unscaled variable ``s = T_m t``; ``W`` is then ``p d**2 |w(s)|**(p-1)`` and
needs no interpolation.  The number of interior zeros of ``y`` grows with
``nu``, so each ``nu_i`` is bracketed by bisecting on that count and then
polished with Brent's method on ``phi(1)``.

Oracle.  In ``s = ln t`` the same problem reads

    -(e**((M-2)s) phi_s)_s - e**(Ms) W phi = nu e**((M-2)s) phi

on ``[ln delta, 0]``.  A conservative three-point scheme on a smoothly
stretched grid gives a symmetric tridiagonal pencil whose negative
eigenvalues are extrapolated in the mesh width and in ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .errors import BracketError, DomainError, IntegrationError, NumericalError
from .radial_shooting import (ATOL, RTOL, RadialProfile, TransformMeta, _startup_series,
                              potential_W, potential_sup)

EPS = 1e-6
# DOP853 at rtol 1e-10 puts a noise floor of ~1e-10 on phi(1) roots
NU_TOL = 1e-8
MAX_HALVINGS = 4
WIDEN_BUDGET = 60
COUNT_BISECTIONS = 200
CORE_LENGTH = 25.0
# zero counts only need the topology of phi, so bracketing shots run looser
COUNT_RTOL = 1e-7
# half-width (relative to max(1, |nu|)) of the full-accuracy polishing bracket
POLISH_WIDTH = 1e-5

PotentialLike = Union[RadialProfile, Callable, float]


def theta_exponent(meta: TransformMeta, nu: float) -> float:
    """Frobenius exponent ``sqrt(b**2 - nu) - b`` of the regular solution."""
    b = meta.half_excess
    disc = b * b - nu
    if not disc >= 0:
        raise DomainError(f"nu={nu!r} must not exceed ((M-2)/2)**2 = {b * b:g}")
    root = math.sqrt(disc)
    if nu <= 0:
        # same value, without cancellation for nu close to 0
        return -nu / (root + b) if root + b > 0 else 0.0
    return root - b


@dataclass
class _Shot:
    end: float  # y at t = 1, which equals phi(1)
    count: int
    theta: float
    scale: float  # s = scale * t
    solution: object = None
    s0: float = 0.0
    W0: float = 0.0
    kappa: float = 0.0
    index: int = 2  # component of the dense solution holding y


def _shoot_profile(profile: RadialProfile, nu: float, eps: float, dense: bool = False,
                   edge: float = 1e-12, rtol: float = RTOL) -> _Shot:
    meta, p = profile.meta, profile.params.p
    M, d2 = meta.M, meta.d ** 2
    T = profile.amplitude_root
    th = theta_exponent(meta, nu)
    kap = 2.0 * th + M - 1.0
    q = p - 1.0
    W0 = p * d2
    s0 = eps * T
    w0, dw0 = _startup_series(np.array([s0]), meta, p)
    y0 = [float(w0[0]), float(dw0[0]), 1.0 - W0 * s0 * s0 / (2.0 * (kap + 1.0)),
          -W0 * s0 / (kap + 1.0)]

    def f(s, y):
        w, v, u, du = y
        g = d2 * abs(w) ** q
        return (v, -(M - 1.0) / s * v - g * w, du, -kap / s * du - p * g * u)

    def ev(s, y):
        return y[2]

    sol = solve_ivp(f, (s0, T), y0, method="DOP853", rtol=rtol, atol=ATOL,
                    events=ev, dense_output=dense)
    if sol.status == -1:
        raise IntegrationError(f"shooting failed at nu={nu!r}: {sol.message}")
    # a zero within ``edge`` of t = 1 is the Dirichlet zero, not an interior one
    count = int(np.count_nonzero(sol.t_events[0] < T * (1.0 - edge)))
    return _Shot(end=float(sol.y[2, -1]), count=count, theta=th, scale=T,
                 solution=sol.sol if dense else None, s0=s0, W0=W0, kappa=kap)


def _shoot_callable(W, meta: TransformMeta, nu: float, eps: float, dense: bool = False,
                    edge: float = 1e-12) -> _Shot:
    M = meta.M
    th = theta_exponent(meta, nu)
    kap = 2.0 * th + M - 1.0
    W0 = float(W(0.0))

    def f(t, y):
        u, du = y
        return (du, -kap / t * du - float(W(t)) * u)

    def ev(t, y):
        return y[0]

    y0 = [1.0 - W0 * eps * eps / (2.0 * (kap + 1.0)), -W0 * eps / (kap + 1.0)]
    sol = solve_ivp(f, (eps, 1.0), y0, method="DOP853", rtol=RTOL, atol=ATOL,
                    events=ev, dense_output=dense)
    if sol.status == -1:
        raise IntegrationError(f"shooting failed at nu={nu!r}: {sol.message}")
    count = int(np.count_nonzero(sol.t_events[0] < 1.0 - edge))
    return _Shot(end=float(sol.y[0, -1]), count=count, theta=th, scale=1.0,
                 solution=sol.sol if dense else None, s0=eps, W0=W0, kappa=kap, index=0)


def _shoot(W: PotentialLike, meta: TransformMeta, nu: float, eps: float, dense=False,
           edge: float = 1e-12) -> _Shot:
    if isinstance(W, RadialProfile):
        return _shoot_profile(W, nu, eps, dense, edge)
    if callable(W):
        return _shoot_callable(W, meta, nu, eps, dense, edge)
    const = float(W)
    return _shoot_callable(lambda t: const, meta, nu, eps, dense, edge)


def shoot_phi(W: PotentialLike, meta: TransformMeta, nu: float, eps: float = EPS):
    """Shoot from ``t = eps`` with ``phi ~ t**theta`` and return ``(phi(1), zeros)``.

    Parameters
    ----------
    W : RadialProfile, callable or float
        The potential.  A profile is integrated jointly with its own ODE;
        a callable is evaluated as ``W(t)``; a number means constant ``W``.
    meta : TransformMeta
    nu : float
        Spectral parameter, ``nu < 0``.
    eps : float
        Start of integration.

    Returns
    -------
    (float, int)
        ``phi(1)`` for ``phi(t) = t**theta (1 + O(t**2))`` and the number of
        sign changes of ``phi`` on ``(eps, 1)``; a zero within ``1e-9`` of
        ``t = 1`` is taken to be the boundary zero and not counted.
    """
    if not nu < 0:
        raise DomainError(f"nu must be negative, got {nu!r}")
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    shot = _shoot(W, meta, nu, eps, edge=1e-9)
    return shot.end, shot.count


@dataclass
class SingularSpectrum:
    """Negative eigenvalues ``nu_1 < ... < nu_m`` and sup-normalised eigenfunctions."""

    profile_ref: RadialProfile = field(repr=False)
    nus: list
    thetas: list
    eigenfunction_samples: list = field(repr=False)
    zero_counts: list
    grid_t: np.ndarray = field(repr=False)
    eps: float = EPS
    eps_shifts: list = field(default_factory=list)
    _shots: list = field(default_factory=list, repr=False)
    _scales: list = field(default_factory=list, repr=False)

    def eigenfunction(self, i: int, t):
        """Sup-normalised ``phi_i`` at arbitrary ``t`` in [0, 1] (``i`` is 1-based)."""
        shot, scale = self._shots[i - 1], self._scales[i - 1]
        return _phi_values(shot, np.asarray(t, dtype=float)) / scale


def _phi_values(shot: _Shot, t: np.ndarray) -> np.ndarray:
    t = np.atleast_1d(t).astype(float)
    s = shot.scale * t
    y = np.empty_like(s)
    low = s < shot.s0
    y[low] = 1.0 - shot.W0 * s[low] ** 2 / (2.0 * (shot.kappa + 1.0))
    if np.any(~low):
        y[~low] = shot.solution(s[~low])[shot.index]
    with np.errstate(divide="ignore"):
        tp = np.where(t > 0, t ** shot.theta, 1.0 if shot.theta == 0 else 0.0)
    return tp * y


class _Counter:
    """Memoised interior-zero counts along the bisection."""

    def __init__(self, profile, eps):
        self.profile, self.eps = profile, eps
        self.cache = {}
        self.trace = []

    def __call__(self, nu):
        if nu not in self.cache:
            shot = _shoot_profile(self.profile, nu, self.eps, rtol=COUNT_RTOL)
            self.cache[nu] = shot.count
            self.trace.append((nu, shot.count, shot.end))
        return self.cache[nu]

    def end(self, nu):
        """``phi(1)`` at full accuracy."""
        return _shoot_profile(self.profile, nu, self.eps).end


def _bracket(counter: _Counter, i: int, lo: float, hi: float, widen_low: bool):
    if widen_low:
        for _ in range(WIDEN_BUDGET):
            if counter(lo) <= i - 1:
                break
            lo *= 2.0
        else:
            raise BracketError(f"could not push the count below {i} for nu_{i}", counter.trace)
    elif counter(lo) > i - 1:
        raise BracketError(f"count at nu={lo:.6g} already exceeds {i - 1}", counter.trace)
    if counter(hi) < i:
        raise BracketError(f"count at nu={hi:.6g} is below {i}", counter.trace)
    for _ in range(COUNT_BISECTIONS):
        if counter(lo) == i - 1 and counter(hi) == i:
            return lo, hi
        mid = 0.5 * (lo + hi)
        if counter(mid) <= i - 1:
            lo = mid
        else:
            hi = mid
    raise BracketError(f"count bisection for nu_{i} did not isolate a root", counter.trace)


def _root(counter, i, tol, lo0, hi0, widen_low):
    profile, eps = counter.profile, counter.eps
    lo, hi = _bracket(counter, i, lo0, hi0, widen_low)
    # locate the root with cheap shots, then polish at full accuracy nearby
    try:
        rough = brentq(lambda nu: _shoot_profile(profile, nu, eps, rtol=COUNT_RTOL).end, lo, hi,
                       xtol=1e-9 * max(1.0, abs(lo)), maxiter=200)
    except ValueError as exc:
        raise BracketError(f"phi(1) does not change sign on the nu_{i} bracket",
                           counter.trace) from exc
    half = POLISH_WIDTH * max(1.0, abs(rough))
    a, b = max(lo, rough - half), min(hi, rough + half)
    fa, fb = counter.end(a), counter.end(b)
    if fa == 0:
        return a
    if fb == 0:
        return b
    if (fa > 0) == (fb > 0):
        a, b = lo, hi
    try:
        return brentq(lambda nu: _shoot_profile(profile, nu, eps).end, a, b,
                      xtol=0.01 * tol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except ValueError as exc:
        raise BracketError(f"phi(1) does not change sign on the nu_{i} bracket",
                           counter.trace) from exc


def nu_spectrum(profile: RadialProfile, tol: float = NU_TOL, eps: float = EPS) -> SingularSpectrum:
    """All ``m`` negative eigenvalues for a profile with ``m`` nodal zones.

    The brackets are ``(-||W||_inf - 1, -(M-1))`` for ``i < m`` (the left end
    doubled until it is valid) and ``(-(M-1), 0)`` for ``i = m``.  After each
    root the shooting is repeated from ``eps/2``; if the implied eigenvalue
    shift exceeds ``tol/10`` (relative to ``max(1, |nu|)``) the start is halved again (up to four times).
    """
    meta, m = profile.meta, profile.params.m
    wmax = potential_sup(profile)
    barrier = -(meta.M - 1.0)
    nus, thetas, shots, scales, samples, counts, shifts = [], [], [], [], [], [], []
    counters = {}
    for i in range(1, m + 1):
        if i < m:
            lo0, hi0, widen = -wmax - 1.0, barrier, True
        else:
            lo0, hi0, widen = barrier + 1e-9, -1e-12, False
        e = eps
        counters.setdefault(e, _Counter(profile, e))
        nu = _root(counters[e], i, tol, lo0, hi0, widen)
        shift = math.inf
        for _ in range(MAX_HALVINGS + 1):
            h = max(1e-7 * abs(nu), 1e-11)
            f0 = _shoot_profile(profile, nu, 0.5 * e).end
            f1 = _shoot_profile(profile, nu + h, 0.5 * e).end
            shift = -f0 * h / (f1 - f0) if f1 != f0 else 0.0
            # integrator noise in nu scales with |nu|, so the test does too
            if abs(shift) < 0.1 * tol * max(1.0, abs(nu)):
                break
            e *= 0.5
            counters.setdefault(e, _Counter(profile, e))
            nu = _root(counters[e], i, tol, lo0, hi0, widen)
        shifts.append(abs(shift))
        shot = _shoot_profile(profile, nu, e, dense=True, edge=1e-6)
        vals = _phi_values(shot, profile.grid_t)
        k = int(np.argmax(np.abs(vals)))
        scale = float(abs(vals[k])) or 1.0
        nus.append(float(nu))
        thetas.append(shot.theta)
        shots.append(shot)
        scales.append(scale)
        samples.append(vals / scale)
        counts.append(shot.count)
    return SingularSpectrum(profile_ref=profile, nus=nus, thetas=thetas,
                            eigenfunction_samples=samples, zero_counts=counts,
                            grid_t=profile.grid_t, eps=eps, eps_shifts=shifts,
                            _shots=shots, _scales=scales)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def weighted_inner_product(spectrum: SingularSpectrum, i: int, j: int, panel: float = 0.25) -> float:
    """``int_0^1 t**(M-3) phi_i phi_j dt`` for the sup-normalised eigenfunctions.

    Integrated in ``s = ln t`` with 16-point Gauss-Legendre panels down to the
    shooting start; below it ``phi ~ t**theta / scale`` gives the tail exactly.
    """
    M = spectrum.profile_ref.meta.M
    si, sj = spectrum._shots[i - 1], spectrum._shots[j - 1]
    ci, cj = 1.0 / spectrum._scales[i - 1], 1.0 / spectrum._scales[j - 1]
    t_low = max(si.s0 / si.scale, sj.s0 / sj.scale)
    a = math.log(t_low)
    edges = np.linspace(a, 0.0, max(int(math.ceil(-a / panel)), 1) + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    s = (0.5 * (hi - lo) * _GL_X + 0.5 * (hi + lo)).ravel()
    wts = (0.5 * (hi - lo) * _GL_W).ravel()
    t = np.exp(s)
    body = np.sum(wts * np.exp((M - 2.0) * s) * _phi_values(si, t) * _phi_values(sj, t)) * ci * cj
    k = si.theta + sj.theta + M - 2.0
    tail = ci * cj * t_low ** k / k
    return float(body + tail)


# ---------------------------------------------------------------- FD oracle

def _stretched_grid(L: float, n: int, breaks=(), base: Optional[int] = None,
                    core: float = CORE_LENGTH) -> np.ndarray:
    """Increasing nodes on ``[-L, 0]`` with spacing ``~a/n`` near 0.

    The base map is ``s(sigma) = -a sinh(k sigma)/k``, ``a = min(L, core)``,
    so cells grow like ``cosh`` beyond the core.  Each point of ``breaks`` is
    made a node by snapping its preimage to a multiple of ``1/base`` and
    reparametrising linearly in ``sigma`` between snapped points.  The map
    depends on ``base`` only, so grids with ``n = base, 2 base, ...`` nest and
    Richardson extrapolation in ``1/n`` applies.
    """
    base = base or n
    a = min(L, core)
    ratio = L / a
    if ratio <= 1.0 + 1e-12:
        k = 0.0

        def fwd(sig):
            return -L * sig

        def inv(x):
            return -x / L
    else:
        k = brentq(lambda k: math.sinh(k) / k - ratio, 1e-8, 60.0)

        def fwd(sig):
            return -a * np.sinh(k * sig) / k

        def inv(x):
            return np.arcsinh(-x * k / a) / k
    knots_true, knots_snap = [0.0], [0.0]
    for b in sorted((x for x in breaks if -L < x < 0), reverse=True):
        sig = float(inv(b))
        snap = round(sig * base) / base
        if knots_snap[-1] < snap < 1.0:
            knots_true.append(sig)
            knots_snap.append(snap)
    knots_true.append(1.0)
    knots_snap.append(1.0)
    sigma = np.interp(np.linspace(0.0, 1.0, n + 1), knots_snap, knots_true)
    x = fwd(sigma)
    x[0], x[-1] = 0.0, -L
    return x[::-1].copy()


_GL4_X, _GL4_W = np.polynomial.legendre.leggauss(4)


def _cell_potential(profile: RadialProfile, s: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    """``int e**(M s' - (M-2) s) W ds'`` over ``[lo, hi]`` around each node ``s``."""
    M = profile.meta.M
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _GL4_X[None, :]
    W = potential_W(profile, np.exp(x).ravel()).reshape(x.shape)
    f = np.exp(2.0 * s[:, None] + M * (x - s[:, None])) * W
    return np.sum(half[:, None] * _GL4_W[None, :] * f, axis=1)


def assemble_pencil(profile: Optional[RadialProfile], meta: TransformMeta, s: np.ndarray,
                    W=None):
    """Symmetric tridiagonal ``(diag, offdiag)`` of ``B**-1/2 A B**-1/2``.

    ``s`` are the nodes in ``ln t`` (increasing, Dirichlet at both ends).
    With a profile and ``W=None`` the potential enters through exact
    control-volume averages, split at the node so that kinks of ``|w|**(p-1)``
    sitting on nodes do not spoil second-order accuracy.  Otherwise ``W`` is
    a callable of ``t`` or an array of values at the interior nodes.
    """
    M = meta.M
    si = s[1:-1]
    D = np.diff(s)                      # cell widths
    mid = 0.5 * (s[1:] + s[:-1])
    ell = 0.5 * (D[1:] + D[:-1])        # control volumes of interior nodes
    if W is None:
        pot = (_cell_potential(profile, si, mid[:-1], si)
               + _cell_potential(profile, si, si, mid[1:])) / ell
    else:
        Wv = W(np.exp(si)) if callable(W) else np.asarray(W, dtype=float)
        pot = np.exp(2.0 * si) * Wv
    # stiffness / mass entries scaled by B**-1/2, exponents combined before exp
    c = M - 2.0
    left = np.exp(c * (mid[:-1] - si)) / D[:-1]
    right = np.exp(c * (mid[1:] - si)) / D[1:]
    diag = (left + right) / ell - pot
    off = -np.exp(c * (mid[1:-1] - 0.5 * (si[:-1] + si[1:]))) / (D[1:-1] * np.sqrt(ell[:-1] * ell[1:]))
    return diag, off


def _negative_eigs(diag, off, lower):
    if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(off))):
        raise NumericalError("pencil has non-finite entries")
    try:
        ev = eigh_tridiagonal(diag, off, eigvals_only=True, select="v", select_range=(lower, 0.0))
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc
    return np.sort(ev)


def fd_oracle_spectrum(profile: RadialProfile, grid_size: int = 2000, delta: float = 1e-8,
                       log_delta: Optional[float] = None, base: Optional[int] = None) -> list:
    """Negative eigenvalues of the finite-difference pencil on ``[delta, 1]``.

    ``grid_size`` is the number of cells.  ``log_delta`` may replace
    ``delta`` when the truncation point underflows (needed when ``theta_m``
    is tiny).  ``base`` fixes the grid map (see :func:`_stretched_grid`).
    """
    if grid_size < 100:
        raise DomainError("grid_size must be >= 100")
    if log_delta is None:
        if not 0 < delta < 0.01:
            raise DomainError("delta must lie in (0, 0.01)")
        log_delta = math.log(delta)
    elif not log_delta < math.log(0.01):
        raise DomainError("log_delta must be below log(0.01)")
    breaks = [math.log(t) for t in profile.nodal_t[:-1]]
    s = _stretched_grid(-float(log_delta), int(grid_size), breaks, base)
    diag, off = assemble_pencil(profile, profile.meta, s)
    lower = -4.0 * (potential_sup(profile) + profile.meta.M + 1.0)
    return [float(v) for v in _negative_eigs(diag, off, lower)]


@dataclass
class FDSpectrum:
    nus: list
    lengths: list  # -ln(delta) used for each eigenvalue
    raw: dict = field(default_factory=dict, repr=False)


def fd_extrapolated_spectrum(profile: RadialProfile, grid_size: int = 2000,
                             decay: float = 12.0) -> FDSpectrum:
    """Oracle eigenvalues extrapolated in mesh width and truncation point.

    Mesh: ``(4 nu_{2n} - nu_n)/3``.  Truncation: the Dirichlet condition at
    ``delta`` perturbs ``nu_i`` by ``C delta**kappa_i``,
    ``kappa_i = 2 theta_i + M - 2``; we pick ``L = -ln delta`` with
    ``kappa_i L >= decay`` and eliminate ``C`` using ``L`` and ``2L``.
    """
    m, meta = profile.params.m, profile.meta
    raw = {}

    def level(L):
        if L not in raw:
            a = np.asarray(fd_oracle_spectrum(profile, grid_size, log_delta=-L, base=grid_size))
            b = np.asarray(fd_oracle_spectrum(profile, 2 * grid_size, log_delta=-L, base=grid_size))
            k = min(a.size, b.size)
            raw[L] = (4.0 * b[:k] - a[:k]) / 3.0
        return raw[L]

    L0 = 20.0
    ev = level(L0)
    for _ in range(20):
        if ev.size >= m:
            break
        L0 *= 2.0
        ev = level(L0)
    else:
        raise NumericalError("finite-difference pencil never showed m negative eigenvalues")
    nus, lengths = [], []
    for i in range(m):
        guess = float(ev[i])
        kap = 2.0 * theta_exponent(meta, guess) + meta.M - 2.0
        L = max(L0, decay / kap)
        # refine the exponent from the value at the chosen length
        kap = 2.0 * theta_exponent(meta, float(level(L)[i])) + meta.M - 2.0
        L = max(L0, decay / kap)
        e1, e2 = float(level(L)[i]), float(level(2 * L)[i])
        q = math.exp(-kap * L)
        nus.append((e2 - q * e1) / (1.0 - q))
        lengths.append(L)
    return FDSpectrum(nus=nus, lengths=lengths, raw=raw)
