"""Singular expansions of I_alpha(t) and L_alpha(t) as t -> 0.

For ``I_alpha(t) = int_0^inf exp(i t x^-alpha) phi(x) dx`` the expansion is

    sum_n A_n t^(n/alpha) + sum_n B_n t^(n/alpha) log t + sum_k C_k t^k + ...

where ``A_n`` and ``B_n`` depend only on the jet of ``phi`` at 0, a log term
appears exactly when ``n/alpha`` is a positive integer, and the Taylor
coefficients ``C_k`` are moments of ``phi`` while those converge and have to
be fitted against the quadrature oracle afterwards.  The Laplace analogue
``L_alpha`` swaps the phase factors for real ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import quadrature as quad
from .amplitude import Amplitude, jet_at_zero
from .errors import DivergentIntegral, DomainError, IllConditionedFit, OrderTooHigh
from .quadrature import DEFAULT_TOL, Tolerance
from .specfun import factorial, gamma, i_power, unit_phase_pi

__all__ = [
    "AlphaSpec",
    "ExpansionTerm",
    "Expansion",
    "EmpiricalCoefficient",
    "LimitConstant",
    "OSCILLATORY",
    "LAPLACE",
    "integer_ratio",
    "remainder_order",
    "coeff_A",
    "coeff_B",
    "coeff_B_check",
    "coeff_A_hat",
    "coeff_B_hat",
    "coeff_C",
    "coeff_C_empirical",
    "singular_part_F",
    "singular_terms",
    "build_expansion",
    "eval_expansion",
    "oracle",
    "oracle_result",
    "remainder",
    "limit_constant",
    "predicted_residual_exponent",
]

OSCILLATORY = "oscillatory"
LAPLACE = "laplace"
_KINDS = (OSCILLATORY, LAPLACE)


@dataclass(frozen=True)
class AlphaSpec:
    """The exponent alpha, either an exact fraction p/q or a flagged irrational.

    Rationality is declared, never inferred from a float: whether log terms
    appear is discontinuous in alpha.
    """

    p: int | None = None
    q: int | None = None
    irrational_value: float | None = None

    def __post_init__(self):
        if self.irrational_value is None:
            if self.p is None or self.q is None:
                raise DomainError("rational alpha needs p and q")
            if self.p < 1 or self.q < 1:
                raise DomainError("alpha = p/q needs p, q >= 1")
            if math.gcd(self.p, self.q) != 1:
                raise DomainError("alpha = p/q must be in lowest terms")
        else:
            if self.p is not None or self.q is not None:
                raise DomainError("irrational alpha takes no p/q")
            if not (math.isfinite(self.irrational_value) and self.irrational_value > 0):
                raise DomainError("alpha must be a positive finite number")

    @classmethod
    def rational(cls, p: int, q: int = 1) -> "AlphaSpec":
        fr = Fraction(int(p), int(q))
        return cls(fr.numerator, fr.denominator)

    @classmethod
    def irrational(cls, value: float) -> "AlphaSpec":
        return cls(irrational_value=float(value))

    @classmethod
    def parse(cls, text: str) -> "AlphaSpec":
        """``"p/q"`` or an integer string, both read as exact rationals."""
        try:
            fr = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse alpha {text!r}") from exc
        if fr <= 0:
            raise DomainError("alpha must be positive")
        return cls(fr.numerator, fr.denominator)

    @property
    def is_rational(self) -> bool:
        return self.irrational_value is None

    @property
    def fraction(self) -> Fraction:
        if not self.is_rational:
            raise DomainError("alpha is irrational")
        return Fraction(self.p, self.q)

    @property
    def value(self) -> float:
        if self.is_rational:
            return self.p / self.q
        return self.irrational_value

    def inverse(self) -> Fraction | float:
        """1/alpha, exact when alpha is rational."""
        if self.is_rational:
            return Fraction(self.q, self.p)
        return 1.0 / self.irrational_value

    def __str__(self) -> str:
        if self.is_rational:
            return f"{self.p}/{self.q}" if self.q != 1 else f"{self.p}"
        return f"irrational({self.irrational_value!r})"


Exponent = Fraction | float


@dataclass(frozen=True)
class ExpansionTerm:
    """``coeff * t**exponent * (log t)**log_power``."""

    coeff: complex
    exponent: Exponent
    log_power: int = 0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.log_power not in (0, 1):
            raise DomainError("log_power must be 0 or 1")
        if self.log_power == 1:
            e = self.exponent
            if not (e >= 0 and float(e).is_integer()):
                raise DomainError("log terms only occur at nonnegative integer powers")

    def sort_key(self):
        return (float(self.exponent), self.log_power)

    def to_json(self) -> dict:
        d = {"re": self.coeff.real, "im": self.coeff.imag}
        if isinstance(self.exponent, (int, Fraction)):
            e = Fraction(self.exponent)
            d["exp_num"] = e.numerator
            d["exp_den"] = e.denominator
        else:
            d["exp_num"] = None
            d["exp_den"] = None
            d["exp"] = float(self.exponent)
        d["log_power"] = self.log_power
        if self.label:
            d["label"] = self.label
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ExpansionTerm":
        if d.get("exp_num") is not None:
            e: Exponent = Fraction(int(d["exp_num"]), int(d["exp_den"]))
        else:
            e = float(d["exp"])
        return cls(complex(d["re"], d["im"]), e, int(d["log_power"]), d.get("label", ""))


@dataclass(frozen=True)
class Expansion:
    terms: tuple[ExpansionTerm, ...]
    order_N: int
    remainder_order: int
    kind: str
    alpha: AlphaSpec
    taylor_orders: int = 0

    def to_json(self) -> dict:
        return {
            "terms": [term.to_json() for term in self.terms],
            "order_N": self.order_N,
            "remainder_order": self.remainder_order,
            "kind": self.kind,
            "alpha": str(self.alpha),
            "taylor_orders": self.taylor_orders,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Expansion":
        a = d["alpha"]
        if a.startswith("irrational("):
            alpha = AlphaSpec.irrational(float(a[len("irrational("):-1]))
        else:
            alpha = AlphaSpec.parse(a)
        return cls(
            tuple(ExpansionTerm.from_json(x) for x in d["terms"]),
            int(d["order_N"]),
            int(d["remainder_order"]),
            d["kind"],
            alpha,
            int(d.get("taylor_orders", 0)),
        )

    @property
    def C0(self) -> complex:
        for term in self.terms:
            if term.exponent == 0 and term.log_power == 0:
                return term.coeff
        raise KeyError("expansion carries no constant term")


class EmpiricalCoefficient(NamedTuple):
    value: complex
    condition: float
    residual_rms: float
    window: tuple[float, float]


class LimitConstant(NamedTuple):
    regime: str  # "sub_one" | "one" | "super_one"
    constant: complex
    normalizer: str  # "t" | "t log t" | "t^(1/alpha)"

    def normalize(self, alpha: AlphaSpec, t: float) -> float:
        if self.normalizer == "t":
            return t
        if self.normalizer == "t log t":
            return t * math.log(t)
        return t ** float(alpha.inverse())


# ------------------------------------------------------------ lattice helpers


def integer_ratio(alpha: AlphaSpec, n: int) -> int | None:
    """m = n/alpha when that is a positive integer, else None (exact test)."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    if not alpha.is_rational:
        return None
    if n % alpha.p:
        return None
    return n * alpha.q // alpha.p


def remainder_order(alpha: AlphaSpec, N: int) -> int:
    """ceil((N+1)/alpha) - 1, in exact arithmetic for rational alpha."""
    if alpha.is_rational:
        return -((-(N + 1) * alpha.q) // alpha.p) - 1
    return math.ceil((N + 1) / alpha.value) - 1


def _convergent_taylor_max(alpha: AlphaSpec) -> int:
    """Largest k with a convergent moment int phi x^(-alpha k): ceil(1/alpha) - 1."""
    if alpha.is_rational:
        return -((-alpha.q) // alpha.p) - 1
    return math.ceil(1.0 / alpha.value) - 1


def _exponent(alpha: AlphaSpec, n: int) -> Exponent:
    inv = alpha.inverse()
    return n * inv


def _kind(kind: str) -> str:
    if kind not in _KINDS:
        raise DomainError(f"kind must be one of {_KINDS}, got {kind!r}")
    return kind


def _taylor_ratio(phi: Amplitude, n: int) -> float:
    # phi^(n-1)(0) / (n-1)!
    return jet_at_zero(phi, n - 1) / factorial(n - 1)


def _inv_alpha_float(alpha: AlphaSpec) -> float:
    return float(alpha.inverse())


# ----------------------------------------------------------------- coefficients


def coeff_A_hat(alpha: AlphaSpec, phi: Amplitude, n: int) -> float:
    """Laplace power coefficient ``(1/alpha) a_{n-1} Gamma(-n/alpha)``; 0 on the log lattice."""
    if integer_ratio(alpha, n) is not None:
        return 0.0
    return _inv_alpha_float(alpha) * _taylor_ratio(phi, n) * gamma(-float(_exponent(alpha, n)))


def coeff_A(alpha: AlphaSpec, phi: Amplitude, n: int) -> complex:
    """Oscillatory power coefficient ``e^{-i n pi / (2 alpha)} A_hat_n``."""
    if integer_ratio(alpha, n) is not None:
        return 0j
    phase = unit_phase_pi(-_exponent(alpha, n) / 2)
    return phase * coeff_A_hat(alpha, phi, n)


def coeff_B(alpha: AlphaSpec, phi: Amplitude, n: int) -> complex:
    """Oscillatory log coefficient ``-(1/alpha) a_{n-1} i^m / m!`` with m = n/alpha."""
    m = integer_ratio(alpha, n)
    if m is None:
        return 0j
    return -float(Fraction(alpha.q, alpha.p)) * _taylor_ratio(phi, n) * i_power(m) / factorial(m)


def coeff_B_check(alpha: AlphaSpec, phi: Amplitude, m: int) -> complex:
    """The log coefficient indexed by multiples of p: the coefficient of
    ``t^(q m) log t``, which must equal ``coeff_B(alpha, phi, p m)``."""
    if not alpha.is_rational:
        raise DomainError("reindexed log coefficients need rational alpha")
    if m < 1:
        raise DomainError("m must be a positive integer")
    p, q = alpha.p, alpha.q
    ratio = jet_at_zero(phi, p * m - 1) / factorial(p * m - 1)
    return -float(Fraction(q, p)) * ratio * i_power(q * m) / factorial(q * m)


def coeff_B_hat(alpha: AlphaSpec, phi: Amplitude, n: int) -> float:
    """Laplace log coefficient ``-(1/alpha) a_{n-1} (-1)^m / m!`` with m = n/alpha.

    The alternating sign is what ``exp(-t y)`` produces in place of
    ``exp(i t y)``; for alpha = 1, phi(0) = 1 it gives +1, matching
    ``int_0^1 exp(-t/x) dx = 1 + t log t + O(t)``.
    """
    m = integer_ratio(alpha, n)
    if m is None:
        return 0.0
    sign = -1.0 if m % 2 else 1.0
    return -float(Fraction(alpha.q, alpha.p)) * _taylor_ratio(phi, n) * sign / factorial(m)


def _moment(alpha: AlphaSpec, phi: Amplitude, n: int, tol: Tolerance) -> float:
    """int_0^R phi(x) x^(-alpha n) dx for a convergent exponent."""
    if n == 0:
        return quad.amplitude_integral(phi, tol).value.real
    s = alpha.value * n
    R = phi.support_radius
    near = [phi.taylor(j) for j in range(min(4, phi.jet_length))]

    def f(x):
        return phi.evaluator(x) * x ** (-s)

    return quad.integrate_endpoint_singular(f, R, -s, near, tol).value.real


def coeff_C(
    alpha: AlphaSpec,
    phi: Amplitude,
    n: int,
    tol: Tolerance = DEFAULT_TOL,
    kind: str = OSCILLATORY,
) -> complex:
    """Taylor coefficient of t^n from a convergent moment of phi.

    ``C_n = i^n / n! int phi(x) x^(-alpha n) dx`` (``(-1)^n / n!`` for the
    Laplace kind), defined for ``n <= ceil(1/alpha) - 1``.
    """

    _kind(kind)
    kmax = _convergent_taylor_max(alpha)
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > kmax:
        raise DivergentIntegral(
            f"moment of order {n} diverges for alpha = {alpha} (max {kmax})"
        )
    unit = i_power(n) if kind == OSCILLATORY else (-1.0) ** n
    return unit * _moment(alpha, phi, n, tol) / factorial(n)


def singular_part_F(p: float | Fraction) -> ExpansionTerm:
    """Singular part of ``F_p(t) = int exp(i t x) x^(-p-1) chi(x) dx`` at 0+.

    Non-integer p: ``e^{-i p pi/2} Gamma(-p) t^p``.  Integer p >= 0:
    ``-(i^p / p!) t^p log t``.
    """
    if isinstance(p, float):
        p = Fraction(p)
    p = Fraction(p)
    if p <= -1:
        raise DomainError("need p > -1")
    if p.denominator == 1:
        m = int(p)
        return ExpansionTerm(-i_power(m) / factorial(m), p, 1, label=f"Btilde_{m}")
    coeff = unit_phase_pi(-p / 2) * gamma(-float(p))
    return ExpansionTerm(coeff, p, 0, label=f"Atilde_{p}")


def singular_terms(
    alpha: AlphaSpec, phi: Amplitude, N: int, kind: str = OSCILLATORY
) -> list[ExpansionTerm]:
    """Nonzero singular terms for n = 1..N."""
    _kind(kind)
    out = []
    for n in range(1, N + 1):
        e = _exponent(alpha, n)
        if kind == OSCILLATORY:
            a, b = coeff_A(alpha, phi, n), coeff_B(alpha, phi, n)
        else:
            a, b = complex(coeff_A_hat(alpha, phi, n)), complex(coeff_B_hat(alpha, phi, n))
        if a != 0:
            out.append(ExpansionTerm(a, e, 0, label=f"A_{n}"))
        if b != 0:
            out.append(ExpansionTerm(b, e, 1, label=f"B_{n}"))
    return out


# ------------------------------------------------------------------ evaluation


def eval_expansion(E: Expansion, t: float, branch: str | None = None) -> complex:
    """Sum the expansion at t != 0.

    On the negative axis powers use ``t^e = e^{i pi e} |t|^e`` and log terms
    use ``log |t|``.
    """
    t = float(t)
    if t == 0.0:
        raise DomainError("expansions are not evaluated at t = 0; use the C0 limit")
    if branch is None:
        branch = "positive_axis" if t > 0 else "negative_axis"
    if branch == "positive_axis" and t < 0:
        raise DomainError("t < 0 requires branch='negative_axis'")
    if branch not in ("positive_axis", "negative_axis"):
        raise DomainError(f"unknown branch {branch!r}")
    at = abs(t)
    lg = math.log(at)
    total = 0j
    for term in E.terms:
        e = term.exponent
        v = term.coeff * at ** float(e)
        if t < 0:
            v *= unit_phase_pi(e)
        if term.log_power:
            v *= lg
        total += v
    return total


def oracle_result(alpha: AlphaSpec, phi: Amplitude, t: float, kind: str = OSCILLATORY,
                  tol: Tolerance = DEFAULT_TOL) -> quad.QuadResult:
    """Quadrature result (value and error estimate) for I_alpha(t) or L_alpha(t)."""
    if _kind(kind) == OSCILLATORY:
        return quad.oracle_I(alpha.value, phi, t, tol)
    return quad.oracle_L(alpha.value, phi, t, tol)


def oracle(alpha: AlphaSpec, phi: Amplitude, t: float, kind: str = OSCILLATORY,
           tol: Tolerance = DEFAULT_TOL) -> complex:
    """Quadrature value of I_alpha(t) or L_alpha(t)."""
    return oracle_result(alpha, phi, t, kind, tol).value


# ------------------------------------------------------------ empirical Taylor


def coeff_C_empirical(
    alpha: AlphaSpec,
    phi: Amplitude,
    n: int,
    fit_window: tuple[float, float] = (1e-6, 1e-3),
    kind: str = OSCILLATORY,
    tol: Tolerance = DEFAULT_TOL,
    points: int = 16,
    max_condition: float = 1e8,
    known: dict[int, complex] | None = None,
) -> EmpiricalCoefficient:
    """Fit the coefficient of t^n beyond the convergent-moment range.

    The oracle minus every singular term up to exponent ``n + 1`` and every
    already known Taylor term is fitted, on a logarithmic grid over
    ``fit_window``, by ``sum_k c_k t^k`` for the unknown ``k`` up to
    ``n + 1`` (the extra power soaks up the next order).  Rows are
    weighted by ``1 / (t^n + sigma)`` with ``sigma = 10 tol.abs_tol``, so
    points where ``C_n t^n`` drowns in quadrature noise count for little.

    ``known`` may supply already-fitted lower coefficients; they are
    subtracted instead of refitted.
    """
    _kind(kind)
    kmax = _convergent_taylor_max(alpha)
    if n <= kmax:
        raise DomainError(
            f"C_{n} is a convergent moment for alpha = {alpha}; use coeff_C"
        )
    lo, hi = map(float, fit_window)
    if not 0 < lo < hi:
        raise DomainError("fit window must satisfy 0 < lo < hi")
    # every singular term with exponent <= n + 1
    if alpha.is_rational:
        n_sing = ((n + 1) * alpha.p) // alpha.q
    else:
        n_sing = int(math.floor((n + 1) * alpha.value))
    sing = singular_terms(alpha, phi, max(n_sing, 1), kind) if n_sing >= 1 else []
    fixed = {k: coeff_C(alpha, phi, k, tol, kind) for k in range(kmax + 1)}
    if known:
        fixed.update({k: v for k, v in known.items() if k < n})
    unknown = [k for k in range(kmax + 1, n + 2) if k not in fixed]

    ts = np.geomspace(lo, hi, points)
    sigma = 10.0 * tol.abs_tol
    rows = []
    rhs = []
    base = Expansion(tuple(sing), max(n_sing, 1), 0, kind, alpha)
    for t in ts:
        r = oracle(alpha, phi, t, kind, tol) - eval_expansion(base, t)
        r -= sum(c * t**k for k, c in fixed.items())
        w = 1.0 / (t**n + sigma)
        rows.append([w * t**k for k in unknown])
        rhs.append(w * r)
    M = np.array(rows, dtype=complex)
    y = np.array(rhs, dtype=complex)
    scale = np.linalg.norm(M, axis=0)
    Ms = M / scale
    cond = float(np.linalg.cond(Ms))
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditionedFit(f"fit condition number {cond:.3g} exceeds {max_condition:.3g}")
    sol, *_ = np.linalg.lstsq(Ms, y, rcond=None)
    sol = sol / scale
    resid = y - M @ sol
    rms = float(np.sqrt(np.mean(np.abs(resid) ** 2)))
    value = complex(sol[unknown.index(n)])
    return EmpiricalCoefficient(value, cond, rms, (lo, hi))


# --------------------------------------------------------------- the expansion


def build_expansion(
    alpha: AlphaSpec,
    phi: Amplitude,
    N: int,
    kind: str = OSCILLATORY,
    taylor_orders: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    fit_window: tuple[float, float] = (1e-6, 1e-3),
) -> Expansion:
    """Singular terms n = 1..N plus Taylor terms C_0..C_{taylor_orders}.

    A Taylor term ``t^k`` is only admitted when ``k < (N+1)/alpha``, i.e.
    ``taylor_orders <= remainder_order``; anything larger would sit below
    the first omitted singular term.  Coefficients beyond the convergent
    moments are fitted with :func:`coeff_C_empirical`.
    """
    _kind(kind)
    if N < 1:
        raise DomainError("N must be a positive integer")
    if N > phi.jet_length:
        raise DomainError(f"N = {N} exceeds the amplitude jet length {phi.jet_length}")
    if taylor_orders < 0:
        raise DomainError("taylor_orders must be nonnegative")
    ro = remainder_order(alpha, N)
    if taylor_orders > max(ro, 0):
        raise OrderTooHigh(
            f"taylor_orders = {taylor_orders} exceeds remainder order {ro} "
            f"for alpha = {alpha}, N = {N}"
        )
    terms = list(singular_terms(alpha, phi, N, kind))
    kmax = _convergent_taylor_max(alpha)
    fitted: dict[int, complex] = {}
    for k in range(taylor_orders + 1):
        if k <= kmax:
            c = coeff_C(alpha, phi, k, tol, kind)
        else:
            c = coeff_C_empirical(alpha, phi, k, fit_window, kind, tol, known=fitted).value
            fitted[k] = c
        if c != 0:
            terms.append(ExpansionTerm(c, Fraction(k), 0, label=f"C_{k}"))
    terms.sort(key=ExpansionTerm.sort_key)
    return Expansion(tuple(terms), N, ro, kind, alpha, taylor_orders)


def remainder(
    alpha: AlphaSpec,
    phi: Amplitude,
    N: int,
    kind: str,
    t: float,
    tol: Tolerance = DEFAULT_TOL,
    taylor_orders: int = 0,
    expansion: Expansion | None = None,
) -> complex:
    """Oracle minus the built expansion at t (C0-subtracted oracle at t = 0)."""
    E = expansion or build_expansion(alpha, phi, N, kind, taylor_orders, tol)
    val = oracle(alpha, phi, t, kind, tol)
    if t == 0:
        return val - E.C0
    return val - eval_expansion(E, t)


def predicted_residual_exponent(alpha: AlphaSpec, N: int, taylor_orders: int) -> Exponent:
    """Leading exponent of what an N-term expansion leaves behind.

    The smallest of: the first omitted singular exponent (N+1)/alpha, the
    first omitted Taylor power, and the remainder order when that is at
    least 1 (for N < alpha the remainder bound O(t^0) says nothing).
    """
    cands: list[Exponent] = [_exponent(alpha, N + 1), Fraction(taylor_orders + 1)]
    ro = remainder_order(alpha, N)
    if ro >= 1:
        cands.append(Fraction(ro))
    return min(cands, key=float)


# ----------------------------------------------------------------- limits


def limit_constant(
    alpha: AlphaSpec,
    phi: Amplitude,
    tol: Tolerance = DEFAULT_TOL,
    kind: str = OSCILLATORY,
) -> LimitConstant:
    """Leading behaviour of ``I_alpha(t) - C0`` as t -> 0+.

    alpha < 1: ``i int phi x^-alpha`` against ``t``; alpha = 1: ``-i phi(0)``
    against ``t log t``; alpha > 1: ``(1/alpha) phi(0) e^{-i pi/(2 alpha)}
    Gamma(-1/alpha)`` against ``t^(1/alpha)``.  The Laplace kind drops the
    phase factors (``-int phi x^-alpha``, ``+phi(0)``,
    ``(1/alpha) phi(0) Gamma(-1/alpha)``).
    """
    _kind(kind)
    phi0 = jet_at_zero(phi, 0)
    if alpha.is_rational:
        cmp = (alpha.fraction > 1) - (alpha.fraction < 1)
    else:
        cmp = (alpha.value > 1) - (alpha.value < 1)
    if cmp < 0:
        return LimitConstant("sub_one", coeff_C(alpha, phi, 1, tol, kind), "t")
    if cmp == 0:
        c = -1j * phi0 if kind == OSCILLATORY else complex(phi0)
        return LimitConstant("one", c, "t log t")
    inv = _inv_alpha_float(alpha)
    # same operation order as coeff_A / coeff_A_hat at n = 1
    hat = inv * (phi0 / factorial(0)) * gamma(-float(alpha.inverse()))
    if kind == LAPLACE:
        return LimitConstant("super_one", complex(hat), "t^(1/alpha)")
    return LimitConstant("super_one", unit_phase_pi(-alpha.inverse() / 2) * hat, "t^(1/alpha)")
