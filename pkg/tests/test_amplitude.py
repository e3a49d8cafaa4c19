import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from singphase.amplitude import (
    CutoffSpec,
    amplitude_from_json,
    amplitude_to_json,
    default_amplitude,
    jet_at_zero,
    make_poly_plateau,
    plateau_cutoff,
    rising_cutoff,
)
from singphase.errors import InvalidSpec, JetExhausted

SPEC = CutoffSpec(1.0, 2.0)


def test_plateau_examples():
    assert plateau_cutoff(1.0, SPEC) == 1.0
    assert plateau_cutoff(2.0, SPEC) == 0.0
    assert plateau_cutoff(1.5, SPEC) == pytest.approx(0.5, abs=1e-15)


def test_plateau_outside_transition():
    x = np.array([-1.0, 0.0, 0.3, 0.999, 2.0, 2.5, 100.0])
    assert np.array_equal(plateau_cutoff(x, SPEC), [1, 1, 1, 1, 0, 0, 0])


def test_plateau_monotone():
    x = np.linspace(1.0, 2.0, 10_000)
    y = plateau_cutoff(x, SPEC)
    assert np.all(np.diff(y) <= 0)
    assert np.all((y >= 0) & (y <= 1))


def test_rising_is_mirror():
    x = np.linspace(0.0, 3.0, 301)
    assert np.allclose(rising_cutoff(x, SPEC), 1.0 - plateau_cutoff(x, SPEC), atol=1e-15)
    assert rising_cutoff(1.0, SPEC) == 0.0
    assert rising_cutoff(2.0, SPEC) == 1.0


@pytest.mark.parametrize("inner, outer", [(0.0, 1.0), (2.0, 1.0), (1.0, 1.0), (-1.0, 2.0), (1.0, math.inf)])
def test_cutoff_spec_invalid(inner, outer):
    with pytest.raises(InvalidSpec):
        CutoffSpec(inner, outer)


def test_make_poly_plateau_examples():
    phi = make_poly_plateau([1.0], SPEC)
    assert phi(0.5) == 1.0
    assert phi.jet[:4] == (1.0, 0.0, 0.0, 0.0)
    assert phi.support_radius == 2.0
    assert phi(3.0) == 0.0
    assert make_poly_plateau([1.0, 2.0], SPEC).jet[1] == 2.0


def test_make_poly_plateau_invalid():
    with pytest.raises(InvalidSpec):
        make_poly_plateau([1.0], (1.0, 2.0))
    with pytest.raises(InvalidSpec):
        make_poly_plateau([], SPEC)
    with pytest.raises(InvalidSpec):
        make_poly_plateau([1.0], SPEC, jet_length=0)


def test_jet_at_zero_examples():
    phi = make_poly_plateau([3.0, 0.0, 5.0], SPEC)
    assert jet_at_zero(phi, 2) == 10.0
    assert jet_at_zero(phi, 0) == phi(0.0)
    assert jet_at_zero(default_amplitude(), 7) == 0.0


def test_jet_exhausted():
    phi = make_poly_plateau([1.0], SPEC, jet_length=4)
    with pytest.raises(JetExhausted):
        jet_at_zero(phi, 4)
    with pytest.raises(IndexError):
        jet_at_zero(phi, 10)


def test_default_amplitude():
    phi = default_amplitude()
    assert phi.jet_length == 32
    assert phi(0.0) == 1.0
    x = np.linspace(0, 3, 1001)
    assert np.all(phi(x) >= 0)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.floats(2.0, 1e6))
def test_vanishes_beyond_support(coeffs, x):
    phi = make_poly_plateau(coeffs, SPEC)
    assert phi(x) == 0.0


def test_vanishes_beyond_support_sampled():
    phi = make_poly_plateau([1.0, -3.0, 2.0, 7.0], CutoffSpec(0.5, 1.25))
    x = np.linspace(1.25, 50.0, 5000)
    assert np.all(phi(x) == 0.0)


def _central_difference(f, n, h):
    k = np.arange(n + 1)
    nodes = (k - n / 2.0) * h
    w = np.array([(-1) ** (n - j) * math.comb(n, j) for j in k], dtype=float)
    return float(np.dot(w, f(nodes)) / h**n)


# The evaluator equals the polynomial on (-inf, inner], so central stencils
# about 0 see a smooth function.  For n >= 3 the step pair (1e-2, 1e-3) is
# swamped by roundoff (eps / h^n), so the ratio test moves up one decade.
STEPS = {1: (1e-2, 1e-3), 2: (1e-2, 1e-3), 3: (1e-1, 1e-2), 4: (1e-1, 1e-2)}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_finite_differences_reproduce_jet(n):
    coeffs = [0.7, -1.1, 0.9, 0.4, -0.3, 0.25, 1.5, -2.0, 1.0]
    phi = make_poly_plateau(coeffs, CutoffSpec(1.0, 2.0))
    errs = [abs(_central_difference(phi.evaluator, n, h) - jet_at_zero(phi, n)) for h in STEPS[n]]
    order = math.log10(errs[0] / errs[1])
    assert order >= 1.8
    assert errs[1] <= 1e-2 * max(1.0, abs(jet_at_zero(phi, n)))


def test_json_round_trip():
    obj = {"coeffs": [1.0, 2.0, 0.5], "inner": 0.5, "outer": 1.5}
    phi = amplitude_from_json(json.dumps(obj))
    assert amplitude_to_json(phi) == obj
    assert amplitude_from_json(obj).jet[2] == 1.0
    assert amplitude_from_json({"coeffs": [2]}).cutoff == CutoffSpec(1.0, 2.0)


@pytest.mark.parametrize(
    "bad",
    [[1, 2], {"inner": 1}, {"coeffs": "x"}, {"coeffs": [1], "inner": 3, "outer": 2}, {"coeffs": [None]}],
)
def test_json_malformed(bad):
    with pytest.raises(InvalidSpec):
        amplitude_from_json(bad)
