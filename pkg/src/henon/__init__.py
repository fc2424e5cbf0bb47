"""Radial nodal solutions of the Henon problem ``-Delta u = |x|^alpha |u|^(p-1) u``
on the unit ball for ``p`` close to 1: profiles, singular spectra, Morse
indices and their limits as ``p -> 1``.
"""

from .errors import (BracketError, DomainError, HenonError, IntegrationError, NumericalError,
                     QuadratureError)
from .bessel import BesselOrder, ZeroTable, bessel_zero, eval_J, gamma_fn, zero_table
from .weighted_spectrum import (CrossingParams, WeightedEigenpair, beta_crossings,
                                eigenfunction_radial_factor, expansion_constant,
                                refine_resonant_alpha, resonant_alphas, weighted_eigenvalue)
from .radial_shooting import (ProblemParams, RadialProfile, TransformMeta, integrate_ivp,
                              potential_W, solve_radial)
from .singular_sturm import (SingularSpectrum, fd_extrapolated_spectrum, fd_oracle_spectrum,
                             nu_spectrum, shoot_phi, theta_exponent, weighted_inner_product)
from .morse_index import (MorseReport, J_index, asymptotic_morse, exact_morse,
                          lane_emden_morse, multiplicity_Nj, n_morse_index,
                          planar_two_zone_morse)
from .asymptotics import (KAPPA, NInvariantClassification, classify_n_invariant,
                          convergence_report, expansion_check, limit_amplitude,
                          limit_nodal_radii, limit_profile, nu_limits)

__version__ = "0.1.0"
