"""Smooth compactly supported amplitudes with exact jets at the origin."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidSpec, JetExhausted

__all__ = [
    "CutoffSpec",
    "Amplitude",
    "plateau_cutoff",
    "rising_cutoff",
    "make_poly_plateau",
    "default_amplitude",
    "jet_at_zero",
    "amplitude_from_json",
    "amplitude_to_json",
]

DEFAULT_JET_LENGTH = 32


@dataclass(frozen=True)
class CutoffSpec:
    """Transition interval ``[inner, outer]`` of a smooth plateau cutoff."""

    inner: float = 1.0
    outer: float = 2.0

    def __post_init__(self):
        if not (math.isfinite(self.inner) and math.isfinite(self.outer)):
            raise InvalidSpec("cutoff bounds must be finite")
        if not 0.0 < self.inner < self.outer:
            raise InvalidSpec(
                f"cutoff needs 0 < inner < outer, got ({self.inner}, {self.outer})"
            )


def _h(u):
    # exp(-1/u) for u > 0, else 0
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def _step(u):
    u = np.clip(u, 0.0, 1.0)
    a = _h(u)
    b = _h(1.0 - u)
    return a / (a + b)


def plateau_cutoff(x, spec: CutoffSpec):
    """Falling cutoff: 1 on ``x <= inner``, 0 on ``x >= outer``, C-infinity between.

    Accepts scalars or arrays.
    """
    xa = np.asarray(x, dtype=float)
    u = (spec.outer - xa) / (spec.outer - spec.inner)
    out = _step(u)
    if np.ndim(x) == 0:
        return float(out)
    return out


def rising_cutoff(x, spec: CutoffSpec):
    """Mirror of :func:`plateau_cutoff`: 0 on ``x <= inner``, 1 on ``x >= outer``."""
    xa = np.asarray(x, dtype=float)
    u = (xa - spec.inner) / (spec.outer - spec.inner)
    out = _step(u)
    if np.ndim(x) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Amplitude:
    """An amplitude phi on ``[0, support_radius]``.

    ``evaluator`` must accept numpy arrays.  ``jet[n]`` is the exact
    derivative ``phi^(n)(0)``.  ``plateau_radius`` (optional) marks an
    interval ``[0, plateau_radius]`` on which phi equals its Taylor
    polynomial; oscillatory tails use it to decide where the integrand is
    regular.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    jet: tuple[float, ...]
    support_radius: float
    plateau_radius: float | None = None
    coeffs: tuple[float, ...] | None = field(default=None, compare=False)
    cutoff: CutoffSpec | None = field(default=None, compare=False)

    def __call__(self, x):
        return self.evaluator(x)

    @property
    def jet_length(self) -> int:
        return len(self.jet)

    def taylor(self, k: int) -> float:
        """Taylor coefficient phi^(k)(0)/k!."""
        if self.coeffs is not None:
            return self.coeffs[k] if k < len(self.coeffs) else 0.0
        return jet_at_zero(self, k) / math.factorial(k)


def make_poly_plateau(
    coeffs: Sequence[float],
    spec: CutoffSpec | None = None,
    jet_length: int = DEFAULT_JET_LENGTH,
) -> Amplitude:
    """Polynomial times a falling plateau cutoff.

    Since the cutoff is identically 1 on ``[0, spec.inner]`` the jet at 0 is
    that of the polynomial: ``jet[n] = n! coeffs[n]``.
    """
    if spec is None:
        spec = CutoffSpec()
    if not isinstance(spec, CutoffSpec):
        raise InvalidSpec("spec must be a CutoffSpec")
    if jet_length < 1:
        raise InvalidSpec("jet_length must be >= 1")
    c = tuple(float(v) for v in coeffs)
    if not c:
        raise InvalidSpec("coeffs must not be empty")
    if not all(math.isfinite(v) for v in c):
        raise InvalidSpec("coeffs must be finite")
    jet_length = max(jet_length, len(c))
    jet = tuple(
        math.factorial(n) * c[n] if n < len(c) else 0.0 for n in range(jet_length)
    )
    poly = np.polynomial.Polynomial(c)

    def evaluator(x):
        xa = np.asarray(x, dtype=float)
        val = poly(xa) * plateau_cutoff(xa, spec)
        val = np.where(xa >= spec.outer, 0.0, val)
        if np.ndim(x) == 0:
            return float(val)
        return val

    return Amplitude(
        evaluator=evaluator,
        jet=jet,
        support_radius=spec.outer,
        plateau_radius=spec.inner,
        coeffs=c,
        cutoff=spec,
    )


def default_amplitude(jet_length: int = DEFAULT_JET_LENGTH) -> Amplitude:
    """phi = plateau cutoff on (1, 2): phi >= 0, phi(0) = 1."""
    return make_poly_plateau([1.0], CutoffSpec(1.0, 2.0), jet_length)


def jet_at_zero(phi: Amplitude, n: int) -> float:
    """phi^(n)(0) from the stored jet."""
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    if n >= len(phi.jet):
        raise JetExhausted(
            f"derivative {n} requested but only {len(phi.jet)} jet entries stored"
        )
    return phi.jet[n]


def amplitude_from_json(obj, jet_length: int = DEFAULT_JET_LENGTH) -> Amplitude:
    """Build a poly-plateau amplitude from ``{"coeffs": [...], "inner": r, "outer": R}``.

    ``obj`` may be a dict or a JSON string.
    """
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict):
        raise InvalidSpec("amplitude JSON must be an object")
    try:
        coeffs = obj["coeffs"]
        inner = float(obj.get("inner", 1.0))
        outer = float(obj.get("outer", 2.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed amplitude JSON: {exc}") from exc
    if not isinstance(coeffs, list):
        raise InvalidSpec("'coeffs' must be a list of numbers")
    try:
        coeffs = [float(c) for c in coeffs]
    except (TypeError, ValueError) as exc:
        raise InvalidSpec(f"malformed amplitude coefficients: {exc}") from exc
    return make_poly_plateau(coeffs, CutoffSpec(inner, outer), jet_length)


def amplitude_to_json(phi: Amplitude) -> dict:
    if phi.coeffs is None or phi.cutoff is None:
        raise InvalidSpec("only poly-plateau amplitudes are serializable")
    return {
        "coeffs": list(phi.coeffs),
        "inner": phi.cutoff.inner,
        "outer": phi.cutoff.outer,
    }
