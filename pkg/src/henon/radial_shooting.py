"""Radial nodal solutions of the Henon problem by shooting.

With ``t = r**((2+alpha)/2)`` the radial equation becomes the Lane-Emden
type problem

    -(t**(M-1) w')' = d**2 t**(M-1) |w|**(p-1) w,   w'(0) = 0, w(1) = 0,

with ``M = 2(N+alpha)/(2+alpha)`` and ``d = 2/(2+alpha)``.  We integrate the
initial value problem ``w(0) = 1`` until its ``m``-th zero ``T_m`` and use the
scaling symmetry ``w -> lam**(2/(p-1)) w(lam t)`` to move that zero to
``t = 1``.  The sup-norm of the rescaled solution is ``T_m**(2/(p-1))``, which
overflows for ``p`` close to 1, so profiles carry its logarithm and the
unit-amplitude shape ``w(T_m t)`` instead of raw values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, IntegrationError

START_T = 1e-4
RTOL = 1e-10
ATOL = 1e-14
GRID_SIZE = 1001


@dataclass(frozen=True)
class TransformMeta:
    M: float
    d: float

    @classmethod
    def from_params(cls, N: int, alpha: float) -> "TransformMeta":
        return cls(M=2.0 * (N + alpha) / (2.0 + alpha), d=2.0 / (2.0 + alpha))

    @property
    def half_excess(self) -> float:
        """``(M-2)/2``, which equals ``(N-2)/(2+alpha)``."""
        return 0.5 * (self.M - 2.0)


@dataclass(frozen=True)
class ProblemParams:
    N: int
    alpha: float
    p: float
    m: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"N must be an integer >= 2, got {self.N!r}")
        if not math.isfinite(self.alpha) or self.alpha < 0:
            raise DomainError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if not math.isfinite(self.p) or self.p <= 1:
            raise DomainError(f"p must be > 1, got {self.p!r}")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        if self.N >= 3:
            crit = (self.N + 2 + 2 * self.alpha) / (self.N - 2)
            if self.p >= crit:
                raise DomainError(f"p must be below {crit:g} when N={self.N}, alpha={self.alpha}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "p", float(self.p))

    @property
    def meta(self) -> TransformMeta:
        return TransformMeta.from_params(self.N, self.alpha)


@dataclass
class Trajectory:
    """Raw output of :func:`integrate_ivp` in the unscaled variable."""

    t: np.ndarray
    w: np.ndarray
    dw: np.ndarray
    zeros: list
    extrema: list
    solution: object  # scipy OdeSolution, valid on [t_start, t[-1]]
    t_start: float
    meta: TransformMeta
    p: float

    def __call__(self, s):
        """``(w, w')`` at ``s`` (array), using the start-up series below ``t_start``."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        w = np.empty_like(s)
        dw = np.empty_like(s)
        low = s < self.t_start
        if np.any(low):
            w[low], dw[low] = _startup_series(s[low], self.meta, self.p)
        if np.any(~low):
            vals = self.solution(s[~low])
            w[~low], dw[~low] = vals[0], vals[1]
        return w, dw


def _startup_series(t, meta: TransformMeta, p: float):
    # w = 1 - a t^2 + b t^4, from the equation expanded about w = 1
    d2, M = meta.d ** 2, meta.M
    a = d2 / (2.0 * M)
    b = p * d2 * a / (4.0 * (M + 2.0))
    t2 = t * t
    return 1.0 - a * t2 + b * t2 * t2, -2.0 * a * t + 4.0 * b * t2 * t


def _rhs(meta: TransformMeta, p: float):
    km1 = meta.M - 1.0
    d2 = meta.d ** 2
    q = p - 1.0

    def f(t, y):
        w, v = y
        return (v, -km1 / t * v - d2 * abs(w) ** q * w)

    return f


def integrate_ivp(params: ProblemParams, meta: Optional[TransformMeta] = None,
                  t_end: Optional[float] = None, tol: float = RTOL) -> Trajectory:
    """Integrate ``w(0) = 1, w'(0) = 0`` until the ``m``-th zero of ``w``.

    The degenerate origin is bridged with the series ``1 - d**2 t**2/(2M)``
    up to ``t = 1e-4``; from there DOP853 (an embedded 8(5,3) pair with dense
    output) runs with relative tolerance ``tol``.  Zeros and interior extrema
    are root-found on the dense output.
    """
    meta = meta or params.meta
    p, m = params.p, params.m
    if t_end is None:
        # zeros of the linear problem are ~ (i + (M-2)/4) pi / d; leave ample room
        t_end = 50.0 * (m + meta.M) * math.pi / meta.d
    t0 = START_T
    w0, dw0 = _startup_series(np.array([t0]), meta, p)

    def zero_event(t, y):
        return y[0]

    zero_event.terminal = m

    def extremum_event(t, y):
        return y[1]

    try:
        sol = solve_ivp(
            _rhs(meta, p), (t0, float(t_end)), [float(w0[0]), float(dw0[0])],
            method="DOP853", rtol=tol, atol=ATOL, dense_output=True,
            events=(zero_event, extremum_event),
        )
    except (ValueError, ArithmeticError) as exc:  # pragma: no cover - scipy internals
        raise IntegrationError(f"integrator failed: {exc}") from exc
    if sol.status == -1:
        raise IntegrationError(f"integrator failed: {sol.message}")
    zeros = [float(z) for z in sol.t_events[0]]
    if len(zeros) < m:
        raise IntegrationError(
            f"found only {len(zeros)} of {m} zeros before t_end={t_end:g}; increase t_end"
        )
    extrema = [float(e) for e in sol.t_events[1] if e < zeros[-1]]
    return Trajectory(t=sol.t, w=sol.y[0], dw=sol.y[1], zeros=zeros, extrema=extrema,
                      solution=sol.sol, t_start=t0, meta=meta, p=p)


@dataclass
class RadialProfile:
    """The ``m``-zone radial solution rescaled to the unit ball.

    ``w_normalized`` samples ``w_p / ||w_p||_inf`` on ``grid_t``.  Use
    :attr:`log_sup_norm` or :attr:`amplitude_root` (``||u_p||**((p-1)/2)``)
    near ``p = 1``; :attr:`sup_norm` and :attr:`w_values` return ``inf`` once
    the true values leave floating-point range.
    """

    params: ProblemParams
    meta: TransformMeta
    grid_t: np.ndarray
    w_normalized: np.ndarray
    log_sup_norm: float
    amplitude_root: float
    nodal_t: list
    nodal_r: list
    amplitudes: list
    extremal_t: list = field(default_factory=list)
    trajectory: Optional[Trajectory] = field(default=None, repr=False)

    @property
    def sup_norm(self) -> float:
        if self.log_sup_norm > 709.0:
            return math.inf
        return math.exp(self.log_sup_norm)

    @property
    def w_values(self) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            return self.sup_norm * self.w_normalized

    @property
    def grid_r(self) -> np.ndarray:
        return self.grid_t ** self.meta.d

    def w_unit(self, t):
        """``w_p(t) / ||w_p||_inf`` at arbitrary ``t`` in [0, 1]."""
        t = np.asarray(t, dtype=float)
        w, _ = self.trajectory(self.amplitude_root * np.atleast_1d(t))
        return w.reshape(t.shape) if t.ndim else float(w[0])

    def dw_unit(self, t):
        """``d/dt`` of :meth:`w_unit`."""
        t = np.asarray(t, dtype=float)
        _, dw = self.trajectory(self.amplitude_root * np.atleast_1d(t))
        dw = self.amplitude_root * dw
        return dw.reshape(t.shape) if t.ndim else float(dw[0])

    def u_normalized(self, r):
        """``u_p(r) / ||u_p||_inf`` with ``u_p(r) = w_p(r**((2+alpha)/2))``."""
        r = np.asarray(r, dtype=float)
        return self.w_unit(r ** (0.5 * (2.0 + self.params.alpha)))

    @property
    def sup_norm_power(self) -> float:
        """``||u_p||**(p-1)``, the quantity compared with ``mu`` in expansions."""
        return self.amplitude_root ** 2


def solve_radial(params: ProblemParams, tol: float = RTOL,
                 grid_size: int = GRID_SIZE) -> RadialProfile:
    """Radial solution with ``m`` nodal zones and ``u_p(0) > 0``."""
    meta = params.meta
    traj = integrate_ivp(params, meta, tol=tol)
    T = traj.zeros[-1]
    nodal_t = [z / T for z in traj.zeros]
    nodal_t[-1] = 1.0
    ext_t = [e / T for e in traj.extrema]
    grid = np.unique(np.concatenate([np.linspace(0.0, 1.0, grid_size), nodal_t, ext_t]))
    w, _ = traj(T * grid)
    w[0] = 1.0
    # nodal points are exact zeros by construction
    w[np.isin(grid, nodal_t)] = 0.0
    amps = [1.0] + [float(traj(T * e)[0][0]) for e in ext_t]
    return RadialProfile(
        params=params,
        meta=meta,
        grid_t=grid,
        w_normalized=w,
        log_sup_norm=2.0 / (params.p - 1.0) * math.log(T),
        amplitude_root=T,
        nodal_t=nodal_t,
        nodal_r=[t ** meta.d for t in nodal_t],
        amplitudes=amps,
        extremal_t=[0.0] + ext_t,
        trajectory=traj,
    )


def potential_W(profile: RadialProfile, t=None) -> np.ndarray:
    """``W_p = p d**2 |w_p|**(p-1)`` on ``grid_t`` (or on given ``t``).

    Evaluated as ``p d**2 T_m**2 |w_p / ||w_p|| |**(p-1)``, so no overflow.
    """
    p, d = profile.params.p, profile.meta.d
    w = profile.w_normalized if t is None else profile.w_unit(t)
    return p * d * d * profile.amplitude_root ** 2 * np.abs(w) ** (p - 1.0)


def potential_sup(profile: RadialProfile) -> float:
    """``||W_p||_inf``, attained at the origin."""
    p, d = profile.params.p, profile.meta.d
    return p * d * d * profile.amplitude_root ** 2
