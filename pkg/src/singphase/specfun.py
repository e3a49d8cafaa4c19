"""Real-argument Gamma, factorials, unit phases and generalized Fresnel values."""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError, PoleError

__all__ = [
    "gamma",
    "factorial",
    "unit_phase",
    "unit_phase_pi",
    "i_power",
    "fresnel_closed",
]

# Lanczos approximation, g = 7, n = 9.  Relative error ~1e-15 on [1, 2].
_LANCZOS_G = 7.0
_LANCZOS_P = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_POLE_RADIUS = 1e-12


def _gamma_base(x: float) -> float:
    # valid for x in [1, 2]
    z = x - 1.0
    acc = _LANCZOS_P[0]
    for k in range(1, len(_LANCZOS_P)):
        acc += _LANCZOS_P[k] / (z + k)
    w = z + _LANCZOS_G + 0.5
    return _SQRT_2PI * w ** (z + 0.5) * math.exp(-w) * acc


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    The Lanczos sum is only used on ``[1, 2]``; other arguments are moved
    into that interval with ``Gamma(x + 1) = x Gamma(x)``, which keeps the
    relative error small away from the poles.

    Raises
    ------
    PoleError
        If ``x`` is within ``1e-12`` of a non-positive integer.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"gamma: non-finite argument {x!r}")
    if x <= 0.0 and abs(x - round(x)) < _POLE_RADIUS:
        raise PoleError(f"gamma: argument {x!r} is a pole")
    if x > 171.7:
        raise OverflowError(f"gamma({x!r}) overflows a double")

    if 1.0 <= x <= 2.0:
        return _gamma_base(x)
    if x > 2.0:
        m = int(math.floor(x - 1.0))
        y = x - m
        if y < 1.0:  # rounding guard
            y += 1.0
            m -= 1
        prod = 1.0
        for k in range(m):
            prod *= y + k
        return prod * _gamma_base(y)
    # x < 1: lift into [1, 2)
    m = int(math.ceil(1.0 - x))
    y = x + m
    if y >= 2.0:
        y -= 1.0
        m -= 1
    denom = 1.0
    for k in range(m):
        denom *= x + k
    return _gamma_base(y) / denom


def factorial(n: int) -> float:
    """n! as a float; exact for n <= 20."""
    n = int(n)
    if n < 0:
        raise DomainError("factorial of a negative integer")
    if n <= 20:
        return float(math.factorial(n))
    return gamma(n + 1.0)


def unit_phase(theta: float) -> complex:
    """e^{i theta}."""
    return complex(math.cos(theta), math.sin(theta))


_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)


def i_power(m: int) -> complex:
    """i**m for an integer m, exactly."""
    return _QUARTER_TURNS[int(m) % 4]


def unit_phase_pi(r: Fraction | float) -> complex:
    """e^{i pi r}.

    Rational ``r`` is reduced modulo 2 exactly, and multiples of 1/2 come
    back as exact lattice points (so structural zeros stay zero).
    """
    if isinstance(r, (int, Fraction)):
        r = Fraction(r) % 2
        if (2 * r).denominator == 1:
            return i_power(int(2 * r))
        return unit_phase(math.pi * float(r))
    r = math.fmod(float(r), 2.0)
    return unit_phase(math.pi * r)


def fresnel_closed(alpha: float, sign: int = +1) -> complex:
    """Closed form of the generalized Fresnel integral.

    Returns ``e^{+-i alpha pi / 2} Gamma(alpha + 1)``, the value of
    ``int_0^inf exp(+-i x^{1/alpha}) dx`` for ``0 < alpha < 1``.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"fresnel_closed needs 0 < alpha < 1, got {alpha!r}")
    s = _sign(sign)
    return unit_phase(s * alpha * math.pi / 2.0) * gamma(alpha + 1.0)


def _sign(sign) -> int:
    if sign in (+1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise DomainError(f"sign must be +1/-1 or '+'/'-', got {sign!r}")
