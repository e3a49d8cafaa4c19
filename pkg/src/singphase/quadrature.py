"""Reference quadrature for the singular-phase integrals.

Everything here is built from one primitive, a vectorized adaptive
Gauss-Kronrod (7/15) panel integrator.  Oscillatory tails on ``[y0, inf)``
are cut at half periods and the resulting near-alternating series is
summed with the Levin u-transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .amplitude import Amplitude, CutoffSpec, rising_cutoff
from .errors import AccelerationStalled, DomainError

__all__ = [
    "Tolerance",
    "QuadResult",
    "DEFAULT_TOL",
    "integrate_panel",
    "integrate_segments",
    "integrate_endpoint_singular",
    "levin_u",
    "euler_average",
    "osc_tail",
    "amplitude_integral",
    "oracle_I",
    "oracle_L",
    "oracle_F",
    "oracle_fresnel",
]

_EPS = np.finfo(float).eps
# Relative size below which a non-shrinking error counts as roundoff; phase
# rounding in exp(i t y) for |t y| ~ 1e4 already sits near 1e-12.
_ROUNDOFF_REL = 1e-11


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_evals: int = 10_000_000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_evals <= 0:
            raise ValueError("max_evals must be positive")

    def target(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def scaled(self, factor: float) -> "Tolerance":
        """Tolerance with both thresholds multiplied by ``factor``."""
        return Tolerance(self.abs_tol * factor, self.rel_tol * factor, self.max_evals)


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class QuadResult:
    value: complex
    err_estimate: float
    evaluations: int
    converged: bool

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.err_estimate + other.err_estimate,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )

    def scale(self, c) -> "QuadResult":
        return QuadResult(
            self.value * c, self.err_estimate * abs(c), self.evaluations, self.converged
        )


_ZERO = QuadResult(0j, 0.0, 0, True)

# Gauss-Kronrod 7/15 (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_W15 = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_W7 = np.zeros(15)
# Gauss nodes sit at odd Kronrod indices 1, 3, 5, 7(centre), 9, 11, 13
_W7[[1, 3, 5]] = _WG[:3]
_W7[7] = _WG[3]
_W7[[9, 11, 13]] = _WG[2::-1]


def _gk15(f, a: np.ndarray, b: np.ndarray):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    k = h * (fx @ _W15)
    g = h * (fx @ _W7)
    resabs = np.abs(h) * (np.abs(fx) @ _W15)
    if not np.all(np.isfinite(k)):
        raise FloatingPointError("integrand produced non-finite values")
    return k, np.abs(k - g), resabs


def integrate_segments(
    f: Callable[[np.ndarray], np.ndarray],
    edges: Sequence[float],
    tol: Tolerance = DEFAULT_TOL,
    owners: Sequence[int] | None = None,
    max_depth: int = 50,
):
    """Adaptive GK15 over consecutive intervals ``[edges[j], edges[j+1]]``.

    Intervals are refined globally (largest error first) and evaluated in
    vectorized batches.  ``owners[j]`` groups intervals; per-owner sums are
    returned alongside the overall :class:`QuadResult`.

    Returns
    -------
    (QuadResult, values, errors)
        ``values[m]`` / ``errors[m]`` are the integral and error estimate
        accumulated over the intervals owned by ``m``.
    """
    e = np.asarray(edges, dtype=float)
    if e.ndim != 1 or e.size < 2:
        raise ValueError("need at least two edges")
    if np.any(np.diff(e) <= 0):
        raise ValueError("edges must be strictly increasing")
    a = e[:-1].copy()
    b = e[1:].copy()
    own = np.arange(a.size) if owners is None else np.asarray(owners, dtype=int)
    if own.size != a.size:
        raise ValueError("owners must have one entry per interval")
    depth = np.zeros(a.size, dtype=int)
    # intervals whose bisection stopped reducing the error are roundoff-bound
    stuck = np.zeros(a.size, dtype=bool)

    k, err, resabs = _gk15(f, a, b)
    evals = 15 * a.size
    converged = False
    while True:
        total = k.sum()
        total_err = err.sum()
        target = max(tol.target(total), 50.0 * _EPS * resabs.sum())
        if total_err - err[stuck].sum() <= target:
            converged = True
            break
        if evals >= tol.max_evals:
            break
        splittable = (depth < max_depth) & ~stuck & (err > 50.0 * _EPS * resabs)
        if not np.any(splittable):
            break
        idx = np.flatnonzero(splittable)
        order = idx[np.argsort(-err[idx], kind="stable")]
        fixed_err = total_err - err[order].sum()
        # split largest errors until the untouched ones fit in half the budget
        cum = np.cumsum(err[order])
        remaining = fixed_err + (err[order].sum() - cum)
        n_pick = int(np.searchsorted(-remaining, -0.5 * target, side="left")) + 1
        n_pick = max(1, min(n_pick, order.size))
        pick = order[:n_pick]
        keep = np.ones(a.size, dtype=bool)
        keep[pick] = False
        pa, pb = a[pick], b[pick]
        mid = 0.5 * (pa + pb)
        na = np.concatenate([pa, mid])
        nb = np.concatenate([mid, pb])
        nk, nerr, nres = _gk15(f, na, nb)
        evals += 15 * na.size
        m = pick.size
        no_gain = ((nerr[:m] + nerr[m:]) > 0.5 * err[pick]) & (
            nerr[:m] + nerr[m:] < _ROUNDOFF_REL * (nres[:m] + nres[m:])
        )
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        k = np.concatenate([k[keep], nk])
        err = np.concatenate([err[keep], nerr])
        resabs = np.concatenate([resabs[keep], nres])
        own = np.concatenate([own[keep], own[pick], own[pick]])
        depth = np.concatenate([depth[keep], depth[pick] + 1, depth[pick] + 1])
        stuck = np.concatenate([stuck[keep], no_gain, no_gain])

    n_owner = int(own.max()) + 1
    # fixed summation order: sort by interval position
    order = np.argsort(a, kind="stable")
    k, err, own = k[order], err[order], own[order]
    vals = np.zeros(n_owner, dtype=complex)
    np.add.at(vals, own, k)
    errs = np.zeros(n_owner)
    np.add.at(errs, own, err)
    total = complex(k.sum())
    res = QuadResult(total, float(err.sum()), int(evals), bool(converged))
    return res, vals, errs


def integrate_panel(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: Tolerance = DEFAULT_TOL,
    points: Sequence[float] | None = None,
) -> QuadResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[a, b]``.

    ``f`` must be vectorized.  ``points`` are optional interior breakpoints.
    Running out of evaluations gives ``converged=False`` rather than an
    exception.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    edges = [a, b]
    if points is not None:
        edges = sorted({a, b, *(p for p in points if a < p < b)})
    res, _, _ = integrate_segments(f, edges, tol)
    return res


def geometric_points(a: float, b: float, ratio: float = 2.0) -> list[float]:
    """a, a*ratio, a*ratio**2, ... (< b), then b.  Requires 0 < a < b."""
    pts = [a]
    x = a * ratio
    while x < b * (1 - 1e-12):
        pts.append(x)
        x *= ratio
    pts.append(b)
    return pts


def integrate_endpoint_singular(
    f: Callable[[np.ndarray], np.ndarray],
    b: float,
    power: float,
    near_zero: Sequence[complex],
    tol: Tolerance = DEFAULT_TOL,
    levels: int = 60,
) -> QuadResult:
    """Integral over ``(0, b]`` of ``f`` with an integrable singularity at 0.

    Near 0, ``f(x) = x**power * sum_j near_zero[j] x**j``.  The interval is
    graded as ``b 2^{-k}`` down to ``k = levels`` and the innermost piece is
    integrated term by term from that expansion.
    """
    if power <= -1:
        raise DomainError("non-integrable endpoint singularity")
    edges = [b * 2.0 ** (-k) for k in range(levels, -1, -1)]
    res, _, _ = integrate_segments(f, edges, tol)
    eps = edges[0]
    head = sum(
        c * eps ** (j + power + 1) / (j + power + 1) for j, c in enumerate(near_zero)
    )
    return QuadResult(res.value + head, res.err_estimate, res.evaluations, res.converged)


def levin_u(partial_sums: Sequence[complex], terms: Sequence[complex], beta: float = 1.0):
    """Levin u-transform estimates ``T_k`` for ``k = 0 .. len-1``.

    ``partial_sums[j]`` is the sum up to and including ``terms[j]``.  The
    remainder estimate is ``omega_j = (j + beta) * terms[j]``.
    """
    s = np.asarray(partial_sums, dtype=complex)
    a = np.asarray(terms, dtype=complex)
    n = s.size
    if a.size != n:
        raise ValueError("partial_sums and terms must have equal length")
    out = np.empty(n, dtype=complex)
    for k in range(n):
        j = np.arange(k + 1)
        omega = (j + beta) * a[: k + 1]
        if np.any(omega == 0):
            out[k] = s[k]
            continue
        binom = np.array([math.comb(k, int(i)) for i in j], dtype=float)
        w = (-1.0) ** j * binom * ((beta + j) / (beta + k)) ** (k - 1)
        num = np.sum(w * s[: k + 1] / omega)
        den = np.sum(w / omega)
        out[k] = num / den if den != 0 else s[k]
    return out


def euler_average(partial_sums: Sequence[complex], rounds: int | None = None) -> complex:
    """Repeated pairwise averaging of partial sums (Euler transform)."""
    s = np.asarray(partial_sums, dtype=complex)
    if rounds is None:
        rounds = s.size - 1
    for _ in range(rounds):
        if s.size < 2:
            break
        s = 0.5 * (s[:-1] + s[1:])
    return complex(s[-1])


def _segment_edges(y0: float, h: float, n_seg: int, group: int = 1):
    """Half-period edges from y0, with geometric refinement inside segments
    that are long compared with their left end.  Consecutive runs of
    ``group`` half periods share one owner (one series term)."""
    edges = [y0]
    owners = []
    for kseg in range(n_seg * group):
        lo = y0 + kseg * h
        hi = y0 + (kseg + 1) * h
        if lo > 0 and hi / lo > 2.0:
            pts = geometric_points(lo, hi)[1:]
        else:
            pts = [hi]
        edges.extend(pts)
        owners.extend([kseg // group] * len(pts))
    return edges, owners


def osc_tail(
    g: Callable[[np.ndarray], np.ndarray],
    y0: float,
    t: float,
    tol: Tolerance = DEFAULT_TOL,
    max_order: int = 12,
    strict: bool = False,
    accelerator: str = "levin",
) -> QuadResult:
    """``int_{y0}^inf exp(i t y) g(y) dy`` for a slowly decaying ``g``.

    The range is cut at ``y0 + k pi/|t|``; runs of an odd number of
    consecutive segments form the terms of a near-alternating series, which
    is summed with the Levin u-transform of order ``max_order`` (or Euler
    averaging as a cross-check).
    ``strict=True`` raises :class:`AccelerationStalled` when the
    accelerator does not reach the tolerance; otherwise the best estimate
    is returned with ``converged=False``.
    """
    if t == 0:
        raise DomainError("osc_tail needs t != 0")
    h = math.pi / abs(t)
    n_seg = max_order + 2
    # Far from the origin (y0 >> h) single half periods vary too slowly for
    # the accelerator; an odd number of them keeps the sign alternation.
    group = 2 * int(y0 / (8.0 * h)) + 1

    def f(y):
        return np.exp(1j * t * y) * g(y)

    edges, owners = _segment_edges(y0, h, n_seg, group)
    seg_tol = tol.scaled(0.1)
    res, terms, _ = integrate_segments(f, edges, seg_tol, owners=owners)
    if not np.any(terms):
        return QuadResult(0j, res.err_estimate, res.evaluations, res.converged)

    head = terms[0]
    body = terms[1:]
    partial = head + np.cumsum(body)
    if accelerator == "levin":
        est = levin_u(partial, body)
        value = complex(est[-1])
        acc_err = float(abs(est[-1] - est[-2]))
    elif accelerator == "euler":
        value = euler_average(partial)
        acc_err = float(abs(value - euler_average(partial[:-1])))
    else:
        raise ValueError(f"unknown accelerator {accelerator!r}")

    err = acc_err + res.err_estimate
    ok = res.converged and err <= tol.target(value)
    if strict and not ok:
        raise AccelerationStalled(
            f"tail acceleration stalled: error {err:.3g} > {tol.target(value):.3g}"
        )
    return QuadResult(value, err, res.evaluations, ok)


# ---------------------------------------------------------------- oracles


def amplitude_integral(phi: Amplitude, tol: Tolerance = DEFAULT_TOL) -> QuadResult:
    """``int_0^R phi(x) dx``, the t = 0 value of both oracles."""
    pts = [phi.plateau_radius] if phi.plateau_radius else None
    return integrate_panel(phi.evaluator, 0.0, phi.support_radius, tol, points=pts)


def _phase_edges(t: float, alpha: float, lo: float, hi: float) -> list[float]:
    """Breakpoints on [lo, hi] where |t| x^-alpha drops by pi, merged with a
    geometric grid."""
    at = abs(t)
    th_hi = at * lo ** (-alpha)
    th_lo = at * hi ** (-alpha)
    n = int(math.floor((th_hi - th_lo) / math.pi))
    thetas = th_hi - math.pi * np.arange(1, n + 1)
    pts = set(geometric_points(lo, hi))
    pts.update(float(x) for x in (at / thetas[thetas > th_lo]) ** (1.0 / alpha))
    return sorted(p for p in pts if lo <= p <= hi)


def oracle_I(
    alpha: float,
    phi: Amplitude,
    t: float,
    tol: Tolerance = DEFAULT_TOL,
    strategy: str = "split",
) -> QuadResult:
    """Reference value of ``int_0^inf exp(i t x^-alpha) phi(x) dx``.

    ``strategy="split"`` integrates ``[delta, R]`` directly with
    ``delta = min(R, (|t| / 100 pi)^(1/alpha))`` and the rest after the
    substitution ``y = x^-alpha``; ``strategy="substitution"`` uses
    ``delta = R`` so the whole range goes through the substituted form.
    """
    alpha = float(alpha)
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    t = float(t)
    if t == 0.0:
        return amplitude_integral(phi, tol)
    R = phi.support_radius
    if strategy == "split":
        delta = min(R, (abs(t) / (100.0 * math.pi)) ** (1.0 / alpha))
    elif strategy == "substitution":
        delta = R
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    part_tol = tol.scaled(0.25)
    total = _ZERO
    if delta < R:
        pts = _phase_edges(t, alpha, delta, R)
        if phi.plateau_radius and delta < phi.plateau_radius < R:
            pts = sorted(set(pts) | {phi.plateau_radius})

        def direct(x):
            return np.exp(1j * t * x ** (-alpha)) * phi.evaluator(x)

        res, _, _ = integrate_segments(direct, pts, part_tol)
        total = total + res

    inv = 1.0 / alpha

    def g(y):
        return inv * phi.evaluator(y ** (-inv)) * y ** (-inv - 1.0)

    y0 = delta ** (-alpha)
    y_reg = phi.plateau_radius ** (-alpha) if phi.plateau_radius else y0
    if y0 < y_reg:
        h = math.pi / abs(t)
        n = int(math.ceil((y_reg - y0) / h))
        pts = sorted(
            set(y0 + h * np.arange(n)) | set(geometric_points(y0, y_reg)) | {y_reg}
        )
        pts = [p for p in pts if y0 <= p <= y_reg]

        def mid(y):
            return np.exp(1j * t * y) * g(y)

        res, _, _ = integrate_segments(mid, pts, part_tol)
        total = total + res
        y0 = y_reg
    total = total + osc_tail(g, y0, t, part_tol)
    return total


def oracle_L(
    alpha: float, phi: Amplitude, t: float, tol: Tolerance = DEFAULT_TOL
) -> QuadResult:
    """Reference value of ``int_0^inf exp(-t x^-alpha) phi(x) dx`` for t >= 0.

    The integrand is below double-precision underflow once
    ``t x^-alpha > 750``, so the range starts at that point.
    """
    alpha = float(alpha)
    t = float(t)
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    if t < 0:
        raise DomainError("the Laplace integral diverges for t < 0")
    if t == 0.0:
        return amplitude_integral(phi, tol)
    R = phi.support_radius
    lo = (t / 750.0) ** (1.0 / alpha)
    if lo >= R:
        return QuadResult(0j, 0.0, 0, True)
    pts = set(geometric_points(lo, R))
    if phi.plateau_radius and lo < phi.plateau_radius < R:
        pts.add(phi.plateau_radius)

    def f(x):
        return np.exp(-t * x ** (-alpha)) * phi.evaluator(x)

    res, _, _ = integrate_segments(f, sorted(pts), tol)
    return QuadResult(complex(res.value.real, 0.0), res.err_estimate, res.evaluations,
                      res.converged)


def oracle_F(
    p: float, cutoff: CutoffSpec, t: float, tol: Tolerance = DEFAULT_TOL
) -> QuadResult:
    """Reference value of ``int_0^inf exp(i t x) x^(-p-1) chi(x) dx``.

    ``chi`` is the rising cutoff (0 below ``cutoff.inner``, 1 above
    ``cutoff.outer``).
    """
    p = float(p)
    t = float(t)
    if p <= -1:
        raise DomainError("need p > -1")
    if t == 0.0:
        raise DomainError("oracle_F needs t != 0")
    L, M = cutoff.inner, cutoff.outer
    part_tol = tol.scaled(0.5)

    def ramp(x):
        return np.exp(1j * t * x) * x ** (-p - 1.0) * rising_cutoff(x, cutoff)

    h = math.pi / abs(t)
    n = int(math.ceil((M - L) / h))
    pts = sorted(set(L + h * np.arange(n)) | {M})
    head, _, _ = integrate_segments(ramp, pts, part_tol)

    def g(x):
        return x ** (-p - 1.0)

    return head + osc_tail(g, M, t, part_tol)


def oracle_fresnel(
    alpha: float, sign: int = +1, tol: Tolerance = DEFAULT_TOL
) -> QuadResult:
    """``int_0^inf exp(+-i x^(1/alpha)) dx`` computed as
    ``alpha int_0^inf exp(+-i y) y^(alpha-1) dy``."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError("oracle_fresnel needs 0 < alpha < 1")
    s = 1 if sign in (1, "+") else -1 if sign in (-1, "-") else None
    if s is None:
        raise DomainError(f"bad sign {sign!r}")
    two_pi = 2.0 * math.pi
    part_tol = tol.scaled(0.5)

    def f(y):
        return np.exp(1j * s * y) * y ** (alpha - 1.0)

    near = [(1j * s) ** j / math.factorial(j) for j in range(4)]
    head = integrate_endpoint_singular(f, two_pi, alpha - 1.0, near, part_tol)

    def g(y):
        return y ** (alpha - 1.0)

    tail = osc_tail(g, two_pi, float(s), part_tol)
    return (head + tail).scale(alpha)
