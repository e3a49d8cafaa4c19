import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singphase.errors import DomainError, PoleError
from singphase.specfun import (
    factorial,
    fresnel_closed,
    gamma,
    i_power,
    unit_phase,
    unit_phase_pi,
)


@pytest.mark.parametrize(
    "x, expected",
    [
        (1.0, 1.0),
        (0.5, 1.7724538509055160),
        (-0.5, -3.5449077018110320),
    ],
)
def test_gamma_examples(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("x", np.linspace(-29.7, 30.0, 157))
def test_gamma_against_mpmath(x):
    if abs(x - round(x)) < 1e-3 and x <= 0:
        pytest.skip("pole neighbourhood")
    ref = float(mpmath.gamma(mpmath.mpf(float(x))))
    assert gamma(x) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -7.0, -3.0 + 1e-13])
def test_gamma_poles(x):
    with pytest.raises(PoleError):
        gamma(x)


def test_gamma_pole_is_domain_error():
    with pytest.raises(DomainError):
        gamma(-4.0)


def test_gamma_overflow_and_nonfinite():
    with pytest.raises(OverflowError):
        gamma(200.0)
    with pytest.raises(DomainError):
        gamma(float("nan"))


def _away_from_poles(x):
    return not (x <= 0 and abs(x - round(x)) < 1e-3)


def test_gamma_recurrence_random():
    rng = np.random.default_rng(20240611)
    xs = [x for x in rng.uniform(-10, 10, 1400) if _away_from_poles(x) and _away_from_poles(x + 1)]
    xs = xs[:1000]
    assert len(xs) == 1000
    for x in xs:
        lhs = gamma(x + 1)
        assert abs(lhs - x * gamma(x)) <= 1e-12 * abs(lhs)


def test_gamma_reflection_random():
    rng = np.random.default_rng(7)
    xs = [x for x in rng.uniform(-5, 5, 1300) if abs(x - round(x)) > 1e-3][:1000]
    assert len(xs) == 1000
    for x in xs:
        ref = math.pi / math.sin(math.pi * x)
        assert abs(gamma(x) * gamma(1 - x) - ref) <= 1e-10 * abs(ref)


@pytest.mark.parametrize("n, expected", [(0, 1.0), (5, 120.0), (20, 2432902008176640000.0)])
def test_factorial_exact(n, expected):
    assert factorial(n) == expected


def test_factorial_past_exact_range():
    assert factorial(21) == pytest.approx(float(math.factorial(21)), rel=1e-13)
    assert factorial(21) == pytest.approx(5.109094217170944e19, rel=1e-13)
    with pytest.raises(DomainError):
        factorial(-1)


@pytest.mark.parametrize(
    "theta, expected",
    [
        (0.0, (1.0, 0.0)),
        (math.pi / 4, (0.7071067811865476, 0.7071067811865476)),
        (-math.pi / 2, (0.0, -1.0)),
    ],
)
def test_unit_phase_examples(theta, expected):
    z = unit_phase(theta)
    assert z.real == pytest.approx(expected[0], abs=2e-16)
    assert z.imag == pytest.approx(expected[1], abs=2e-16)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_unit_phase_modulus(theta):
    assert abs(abs(unit_phase(theta)) - 1.0) <= 1e-15


def test_i_power_and_lattice_phases():
    assert [i_power(m) for m in range(-2, 6)] == [-1, -1j, 1, 1j, -1, -1j, 1, 1j]
    assert unit_phase_pi(Fraction(1, 2)) == 1j
    assert unit_phase_pi(Fraction(-3, 2)) == 1j
    assert unit_phase_pi(7) == -1
    z = unit_phase_pi(Fraction(-1, 4))
    assert z == pytest.approx(complex(math.sqrt(0.5), -math.sqrt(0.5)), abs=4e-16)


@pytest.mark.parametrize(
    "sign, expected",
    [
        (+1, (0.6266570686577501, 0.6266570686577501)),
        (-1, (0.6266570686577501, -0.6266570686577501)),
        ("+", (0.6266570686577501, 0.6266570686577501)),
    ],
)
def test_fresnel_half(sign, expected):
    z = fresnel_closed(0.5, sign)
    assert z == pytest.approx(complex(*expected), abs=1e-15)


def test_fresnel_quarter():
    z = fresnel_closed(0.25, +1)
    ref = gamma(1.25) * complex(math.cos(math.pi / 8), math.sin(math.pi / 8))
    assert z == pytest.approx(ref, rel=1e-15)
    assert z.real == pytest.approx(0.8374, abs=1e-4)
    assert z.imag == pytest.approx(0.3469, abs=1e-4)


@pytest.mark.parametrize("a", [0.0, 1.0, 1.5, -0.2])
def test_fresnel_domain(a):
    with pytest.raises(DomainError):
        fresnel_closed(a, +1)


def test_fresnel_bad_sign():
    with pytest.raises(DomainError):
        fresnel_closed(0.5, 0)


@settings(max_examples=200)
@given(st.floats(min_value=1e-6, max_value=1 - 1e-6))
def test_fresnel_conjugate(a):
    assert fresnel_closed(a, -1) == fresnel_closed(a, +1).conjugate()


@pytest.mark.parametrize("a", [0.1, 0.3, 0.5, 0.9])
def test_fresnel_against_mpmath(a):
    # independent: the convergent series sum i^k / (k! (k + a)) on [0, 1],
    # tanh-sinh on [1, 2 pi] and mpmath's oscillatory tail quadrature
    with mpmath.workdps(30):
        f = lambda y: mpmath.expj(y) * y ** (a - 1)
        head = mpmath.nsum(lambda k: mpmath.j**k / (mpmath.factorial(k) * (k + a)), [0, mpmath.inf])
        mid = mpmath.quad(f, [1, mpmath.pi, 2 * mpmath.pi])
        tail = mpmath.quadosc(f, [2 * mpmath.pi, mpmath.inf], omega=1)
        val = a * (head + mid + tail)
    assert fresnel_closed(a, +1) == pytest.approx(complex(val), rel=1e-10)
