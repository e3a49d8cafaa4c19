"""Oscillatory integrals with singular phase and their small-t expansions.

The package computes ``I_alpha(t) = int_0^inf exp(i t x^-alpha) phi(x) dx``
and its Laplace analogue by quadrature, builds the singular asymptotic
expansion as t -> 0 from the jet of the amplitude at 0, and checks one
against the other.
"""

from .amplitude import (
    Amplitude,
    CutoffSpec,
    amplitude_from_json,
    amplitude_to_json,
    default_amplitude,
    jet_at_zero,
    make_poly_plateau,
    plateau_cutoff,
    rising_cutoff,
)
from .asymptotics import (
    LAPLACE,
    OSCILLATORY,
    AlphaSpec,
    EmpiricalCoefficient,
    Expansion,
    ExpansionTerm,
    LimitConstant,
    build_expansion,
    coeff_A,
    coeff_A_hat,
    coeff_B,
    coeff_B_check,
    coeff_B_hat,
    coeff_C,
    coeff_C_empirical,
    eval_expansion,
    integer_ratio,
    limit_constant,
    oracle,
    predicted_residual_exponent,
    remainder,
    remainder_order,
    singular_part_F,
    singular_terms,
)
from .errors import (
    AccelerationStalled,
    DivergentIntegral,
    DomainError,
    IllConditionedFit,
    InsufficientPoints,
    InvalidSpec,
    JetExhausted,
    OrderTooHigh,
    PoleError,
    SingPhaseError,
)
from .quadrature import (
    DEFAULT_TOL,
    QuadResult,
    Tolerance,
    oracle_F,
    oracle_fresnel,
    oracle_I,
    oracle_L,
    osc_tail,
)
from .specfun import factorial, fresnel_closed, gamma, i_power, unit_phase, unit_phase_pi

__version__ = "0.1.0"
