"""Cached solves shared across test modules (each profile is computed once)."""

from functools import lru_cache

from henon.radial_shooting import ProblemParams, solve_radial
from henon.singular_sturm import fd_extrapolated_spectrum, nu_spectrum


@lru_cache(maxsize=None)
def profile(N, alpha, p, m):
    return solve_radial(ProblemParams(N, alpha, p, m))


@lru_cache(maxsize=None)
def spectrum(N, alpha, p, m):
    return nu_spectrum(profile(N, alpha, p, m))


@lru_cache(maxsize=None)
def fd_spectrum(N, alpha, p, m):
    return fd_extrapolated_spectrum(profile(N, alpha, p, m))


# (label, passed, detail) rows printed at the end of the session
ACCEPTANCE = []


def record(label, ok, detail):
    ACCEPTANCE.append((label, bool(ok), detail))
    print(f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail
