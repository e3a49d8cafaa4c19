"""Verification harness: coefficient tables, oracle evaluation and experiments.

Every experiment returns an :class:`ExperimentReport` that serializes to JSON
(floats at 17 significant digits, complex numbers as ``{"re", "im"}``) or to
CSV with one record per grid point.  ``main`` wires the experiments to an
argparse front end whose exit code is 0 on pass, 2 on fail, 3 on
inconclusive and 1 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, NamedTuple, Sequence

import numpy as np

from . import asymptotics as asy
from . import quadrature as quad
from .amplitude import (
    DEFAULT_JET_LENGTH,
    Amplitude,
    amplitude_from_json,
    amplitude_to_json,
    default_amplitude,
)
from .asymptotics import LAPLACE, OSCILLATORY, AlphaSpec
from .errors import InsufficientPoints, SingPhaseError
from .quadrature import DEFAULT_TOL, Tolerance
from .specfun import fresnel_closed, unit_phase_pi

__all__ = [
    "SlopeFit",
    "ExperimentReport",
    "slope_fit",
    "geometric_grid",
    "cmd_coeffs",
    "cmd_eval",
    "cmd_verify_fresnel",
    "cmd_verify_limits",
    "cmd_verify_remainder",
    "cmd_verify_decay",
    "cmd_laplace",
    "main",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
EXIT_CODES = {PASS: 0, FAIL: 2, INCONCLUSIVE: 3}
EXIT_USAGE = 1

REGIME_TOL = {"sub_one": 0.01, "one": 0.10, "super_one": 0.01}
FRESNEL_ALPHAS = (0.25, 0.4, 0.5, 0.6, 0.75)
FRESNEL_REL_TOL = 1e-6
FRESNEL_HALF_TOL = 1e-8
SLOPE_SLACK = 0.3
DECAY_BAR = -3.0
MIN_RESOLVED = 5  # resolved residuals needed before a slope verdict


# --------------------------------------------------------------- slope fitting


class SlopeFit(NamedTuple):
    slope: float
    intercept: float
    r_squared: float
    points_used: int


def slope_fit(points: Iterable[tuple[float, float]]) -> SlopeFit:
    """Ordinary least squares of ``log v`` against ``log t``.

    Raises
    ------
    InsufficientPoints
        Fewer than three points, or a non-positive or non-finite coordinate.
    """
    pts = [(float(t), float(v)) for t, v in points]
    if len(pts) < 3:
        raise InsufficientPoints(f"slope fit needs at least 3 points, got {len(pts)}")
    arr = np.array(pts)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise InsufficientPoints("slope fit needs finite positive t and v")
    x = np.log(arr[:, 0])
    y = np.log(arr[:, 1])
    if np.ptp(x) == 0:
        raise InsufficientPoints("slope fit needs at least two distinct t values")
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    intercept = float(ym - slope * xm)
    ss_tot = float(np.dot(dy, dy))
    resid = dy - slope * dx
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    r2 = min(1.0, max(0.0, r2))
    return SlopeFit(slope, intercept, r2, len(pts))


def geometric_grid(tmin: float, tmax: float, points: int) -> list[float]:
    """Geometric grid from ``tmax`` down to ``tmin`` (the limit point comes last)."""
    if points < 1:
        raise ValueError("points must be >= 1")
    if not 0 < tmin <= tmax:
        raise ValueError("grid needs 0 < tmin <= tmax")
    if points == 1:
        return [float(tmin)]
    return [float(v) for v in np.geomspace(tmax, tmin, points)]


# --------------------------------------------------------------- serialization


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _plain(obj: Any) -> Any:
    """Map report values onto JSON-compatible Python objects."""
    if isinstance(obj, (bool, type(None), str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, AlphaSpec):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dump(obj: Any, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [pad + _dump(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    return json.dumps(obj)


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    s = str(v)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _flatten_row(row: dict, complex_keys: set[str]) -> dict:
    out = {}
    for k, v in row.items():
        if k in complex_keys:
            v = v or {}
            out[f"{k}_re"] = v.get("re")
            out[f"{k}_im"] = v.get("im")
        elif isinstance(v, (dict, list)):
            out[k] = json.dumps(v)
        else:
            out[k] = v
    return out


def _is_complex(v: Any) -> bool:
    return isinstance(v, dict) and set(v) == {"re", "im"}


@dataclass
class ExperimentReport:
    """Outcome of one experiment.

    ``rows`` hold one record per grid point; a row that carries a claim has
    an ``ok`` field, and the verdict can only be ``pass`` when every such
    field is true.  ``summary`` holds whole-experiment quantities such as
    slope fits.
    """

    command: str
    parameters: dict
    rows: list[dict]
    verdict: str
    tolerances: dict
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in EXIT_CODES:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == PASS and any(r.get("ok") is False for r in self.rows):
            raise ValueError("a passing report cannot contain a failing row")

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_dict(self) -> dict:
        d = {
            "command": self.command,
            "parameters": self.parameters,
            "rows": self.rows,
            "verdict": self.verdict,
            "tolerances": self.tolerances,
        }
        if self.summary:
            d["summary"] = self.summary
        return _plain(d)

    def to_json(self) -> str:
        return _dump(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        plain = _plain(self.rows)
        complex_keys = {k for r in plain for k, v in r.items() if _is_complex(v)}
        rows = [_flatten_row(r, complex_keys) for r in plain]
        cols: list[str] = []
        for r in rows:
            for k in r:
                if k not in cols:
                    cols.append(k)
        lines = [",".join(cols)]
        for r in rows:
            lines.append(",".join(_csv_cell(r.get(c)) for c in cols))
        return "\n".join(lines) + "\n"


def _verdict(rows: Sequence[dict], extra: Sequence[bool] = ()) -> str:
    checks = [r["ok"] for r in rows if r.get("ok") is not None] + list(extra)
    if not checks:
        return INCONCLUSIVE
    return PASS if all(checks) else FAIL


def _tol_params(tol: Tolerance) -> dict:
    return {"abs_tol": tol.abs_tol, "rel_tol": tol.rel_tol}


def _phi_params(phi: Amplitude) -> Any:
    try:
        return amplitude_to_json(phi)
    except SingPhaseError:
        return "custom"


def _rel_dev(value: complex, ref: complex) -> float:
    return abs(value - ref) / abs(ref) if ref != 0 else abs(value)


# ----------------------------------------------------------------- commands


def cmd_coeffs(alpha: AlphaSpec, phi: Amplitude, N: int, tol: Tolerance = DEFAULT_TOL) -> ExperimentReport:
    """Table of A_n, B_n, their Laplace counterparts and convergent C_n, n <= N.

    Pass iff, for every n, at most one of A_n and B_n is nonzero, B_n can
    only be nonzero when n/alpha is an integer, A_n vanishes when it is,
    and B_n matches the reindexed coefficient bit for bit.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    kmax = asy._convergent_taylor_max(alpha)
    rows = []
    for n in range(0, N + 1):
        row: dict[str, Any] = {"n": n}
        if n <= kmax:
            row["C"] = complex(asy.coeff_C(alpha, phi, n, tol, OSCILLATORY))
            row["C_hat"] = float(np.real(asy.coeff_C(alpha, phi, n, tol, LAPLACE)))
        else:
            row["C"] = None
            row["C_hat"] = None
        if n == 0:
            row.update(exponent=None, log_term=False, A=None, B=None, A_hat=None, B_hat=None, ok=None)
            rows.append(row)
            continue
        m = asy.integer_ratio(alpha, n)
        a, b = asy.coeff_A(alpha, phi, n), asy.coeff_B(alpha, phi, n)
        ah, bh = asy.coeff_A_hat(alpha, phi, n), asy.coeff_B_hat(alpha, phi, n)
        exclusive = not (a != 0 and b != 0) and not (ah != 0 and bh != 0)
        if m is None:
            gated = b == 0 and bh == 0
            reindexed = True
        else:
            gated = a == 0 and ah == 0
            reindexed = b == asy.coeff_B_check(alpha, phi, n // alpha.p)
        e = asy._exponent(alpha, n)
        row.update(
            exponent=e if isinstance(e, Fraction) else float(e),
            log_term=m is not None,
            A=a,
            B=b,
            A_hat=ah,
            B_hat=bh,
            ok=bool(exclusive and gated and reindexed),
        )
        rows.append(row)
    return ExperimentReport(
        "coeffs",
        {"alpha": str(alpha), "amplitude": _phi_params(phi), "N": N, **_tol_params(tol)},
        rows,
        _verdict(rows),
        {"exclusivity": "exact", "reindexing": "bitwise"},
    )


def _default_taylor(alpha: AlphaSpec, N: int) -> int:
    # convergent moments only, capped by the remainder order
    return max(0, min(asy.remainder_order(alpha, N), asy._convergent_taylor_max(alpha)))


def cmd_eval(
    alpha: AlphaSpec,
    phi: Amplitude,
    t: float,
    N: int,
    tol: Tolerance = DEFAULT_TOL,
    kind: str = OSCILLATORY,
    taylor_orders: int | None = None,
) -> ExperimentReport:
    """Oracle against expansion at one t; no claim, so always inconclusive.

    At t = 0 the expansion is replaced by its limit C0.
    """
    if taylor_orders is None:
        taylor_orders = _default_taylor(alpha, N)
    E = asy.build_expansion(alpha, phi, N, kind, taylor_orders, tol)
    value = asy.oracle(alpha, phi, t, kind, tol)
    if t == 0:
        expansion, branch = E.C0, "limit"
    else:
        expansion = asy.eval_expansion(E, t)
        branch = "positive_axis" if t > 0 else "negative_axis"
    row = {
        "t": float(t),
        "oracle": complex(value),
        "expansion": complex(expansion),
        "abs_difference": abs(value - expansion),
        "branch": branch,
    }
    return ExperimentReport(
        "eval",
        {"alpha": str(alpha), "amplitude": _phi_params(phi), "t": float(t), "N": N,
         "kind": kind, "taylor_orders": taylor_orders, **_tol_params(tol)},
        [row],
        INCONCLUSIVE,
        {},
        {"terms": [term.to_json() for term in E.terms]},
    )


def cmd_verify_fresnel(alphas: Sequence[float] = FRESNEL_ALPHAS, tol: Tolerance = DEFAULT_TOL) -> ExperimentReport:
    """Oracle against the closed form for each alpha and both signs.

    At alpha = 1/2 the oracle is also compared with sqrt(pi)/2 e^{+-i pi/4}
    at the tighter tolerance.
    """
    rows = []
    for a in alphas:
        a = float(a)
        for sign in (+1, -1):
            val = quad.oracle_fresnel(a, sign, tol).value
            ref = fresnel_closed(a, sign)
            rel = _rel_dev(val, ref)
            row = {"alpha": a, "sign": sign, "oracle": complex(val), "closed_form": ref,
                   "rel_error": rel, "explicit_rel_error": None, "ok": rel <= FRESNEL_REL_TOL}
            if a == 0.5:
                explicit = math.sqrt(math.pi) / 2 * unit_phase_pi(Fraction(sign, 4))
                ex = _rel_dev(val, explicit)
                row["explicit_rel_error"] = ex
                row["ok"] = row["ok"] and ex <= FRESNEL_HALF_TOL
            rows.append(row)
    return ExperimentReport(
        "verify-fresnel",
        {"alphas": [float(a) for a in alphas], **_tol_params(tol)},
        rows,
        _verdict(rows),
        {"rel_error": FRESNEL_REL_TOL, "explicit_rel_error_alpha_half": FRESNEL_HALF_TOL},
    )


def _limit_rows(alpha, phi, ts, tol, kind):
    lim = asy.limit_constant(alpha, phi, tol, kind)
    c0 = asy.coeff_C(alpha, phi, 0, tol, kind)
    rows = []
    for t in ts:
        val = asy.oracle(alpha, phi, t, kind, tol)
        tilde = val - c0
        ratio = tilde / lim.normalize(alpha, t)
        rows.append({"t": t, "value": complex(val), "tilde": complex(tilde),
                     "ratio": complex(ratio), "deviation": _rel_dev(ratio, lim.constant)})
    rtol = REGIME_TOL[lim.regime]
    for i, row in enumerate(rows):
        if i == len(rows) - 1:
            row["ok"] = row["deviation"] <= rtol
        else:
            row["ok"] = None
        if lim.regime == "one" and i > 0:
            improving = row["deviation"] < rows[i - 1]["deviation"]
            row["ok"] = improving if row["ok"] is None else (row["ok"] and improving)
    return lim, c0, rows


def cmd_verify_limits(
    alpha: AlphaSpec,
    phi: Amplitude,
    ts: Sequence[float],
    tol: Tolerance = DEFAULT_TOL,
    kind: str = OSCILLATORY,
) -> ExperimentReport:
    """Normalized ``oracle - C0`` along a grid approaching 0.

    The last grid point must be within the regime tolerance of the limit
    constant; in the ``t log t`` regime each point must also improve on
    the one before.
    """
    ts = [float(t) for t in ts]
    if any(t <= 0 for t in ts):
        raise ValueError("limit grids must be positive")
    if not ts:
        return ExperimentReport("verify-limits", {"alpha": str(alpha)}, [], INCONCLUSIVE, {})
    lim, c0, rows = _limit_rows(alpha, phi, ts, tol, kind)
    return ExperimentReport(
        "verify-limits",
        {"alpha": str(alpha), "amplitude": _phi_params(phi), "kind": kind,
         "grid": ts, **_tol_params(tol)},
        rows,
        _verdict(rows),
        {"final_rel_deviation": REGIME_TOL[lim.regime],
         "monotone_improvement": lim.regime == "one"},
        {"regime": lim.regime, "normalizer": lim.normalizer, "limit": lim.constant, "C0": complex(c0)},
    )


def _remainder_part(alpha, phi, N, ts, tol, kind, taylor_orders):
    ro = asy.remainder_order(alpha, N)
    if taylor_orders is None:
        taylor_orders = max(ro, 0)
    window = (min(ts), max(ts))
    E = asy.build_expansion(alpha, phi, N, kind, taylor_orders, tol, fit_window=window)
    pred = asy.predicted_residual_exponent(alpha, N, taylor_orders)
    bar = float(pred) - SLOPE_SLACK
    rows = []
    for t in ts:
        res = asy.oracle_result(alpha, phi, t, kind, tol)
        r = res.value - asy.eval_expansion(E, t)
        # residuals inside the oracle's error bar say nothing about the order
        rows.append({"t": t, "remainder": complex(r), "abs_remainder": abs(r),
                     "oracle_err": res.err_estimate, "resolved": abs(r) > res.err_estimate})
    pts = [(row["t"], row["abs_remainder"]) for row in rows if row["resolved"]]
    summary = {
        "remainder_order": ro,
        "taylor_orders": taylor_orders,
        "predicted_exponent": pred if isinstance(pred, Fraction) else float(pred),
        "slope_bar": bar,
        "terms": [term.to_json() for term in E.terms],
    }
    try:
        fit = slope_fit(pts)
    except InsufficientPoints:
        summary["fit"] = None
        return rows, summary, None
    summary["fit"] = fit._asdict()
    if fit.points_used < MIN_RESOLVED:
        return rows, summary, None
    return rows, summary, fit.slope >= bar


def cmd_verify_remainder(
    alpha: AlphaSpec,
    phi: Amplitude,
    N: int,
    ts: Sequence[float],
    tol: Tolerance = DEFAULT_TOL,
    kind: str = OSCILLATORY,
    taylor_orders: int | None = None,
) -> ExperimentReport:
    """Growth order of the expansion residual on a log grid.

    Taylor terms default to the remainder order; coefficients past the
    convergent moments are fitted over the same window.  Only residuals
    larger than the oracle's error estimate enter the slope fit; with fewer
    than five of those the result is inconclusive.  Pass iff the fitted
    slope is at least the predicted exponent minus 0.3.
    """
    ts = sorted((float(t) for t in ts), reverse=True)
    rows, summary, ok = _remainder_part(alpha, phi, N, ts, tol, kind, taylor_orders)
    verdict = INCONCLUSIVE if ok is None else (PASS if ok else FAIL)
    return ExperimentReport(
        "verify-remainder",
        {"alpha": str(alpha), "amplitude": _phi_params(phi), "N": N, "kind": kind,
         "grid": ts, **_tol_params(tol)},
        rows,
        verdict,
        {"slope_slack": SLOPE_SLACK},
        summary,
    )


def cmd_verify_decay(
    alpha: AlphaSpec,
    phi: Amplitude,
    ts: Sequence[float],
    tol: Tolerance = DEFAULT_TOL,
) -> ExperimentReport:
    """Slope of ``log |I|`` against ``log t`` on a large-t window.

    A window reaching below t = 1 is inconclusive since the claim is
    about t -> infinity.
    """
    ts = sorted(float(t) for t in ts)
    params = {"alpha": str(alpha), "amplitude": _phi_params(phi), "grid": ts, **_tol_params(tol)}
    tols = {"slope_max": DECAY_BAR}
    if not ts or ts[0] < 1.0:
        return ExperimentReport("verify-decay", params, [], INCONCLUSIVE, tols,
                                {"reason": "window must lie in t >= 1"})
    rows = []
    for t in ts:
        v = quad.oracle_I(alpha.value, phi, t, tol).value
        rows.append({"t": t, "oracle": complex(v), "abs_value": abs(v)})
    pts = [(r["t"], r["abs_value"]) for r in rows if r["abs_value"] > 0]
    try:
        fit = slope_fit(pts)
    except InsufficientPoints:
        return ExperimentReport("verify-decay", params, rows, INCONCLUSIVE, tols, {"fit": None})
    verdict = PASS if fit.slope <= DECAY_BAR else FAIL
    return ExperimentReport("verify-decay", params, rows, verdict, tols, {"fit": fit._asdict()})


def cmd_laplace(
    alpha: AlphaSpec,
    phi: Amplitude,
    N: int,
    ts: Sequence[float],
    tol: Tolerance = DEFAULT_TOL,
    taylor_orders: int | None = None,
) -> ExperimentReport:
    """Limit and remainder checks for the Laplace kind.

    Rows start with t = 0, where L must equal C0 within the quadrature
    tolerance.  Every oracle value must be real, the last grid point must
    meet the regime tolerance and the remainder slope its bar.
    """
    ts = [float(t) for t in ts]
    if not ts:
        return ExperimentReport("laplace", {"alpha": str(alpha)}, [], INCONCLUSIVE, {})
    lim, c0, lim_rows = _limit_rows(alpha, phi, ts, tol, LAPLACE)
    rem_rows, summary, slope_ok = _remainder_part(alpha, phi, N, ts, tol, LAPLACE, taylor_orders)
    L0 = asy.oracle(alpha, phi, 0.0, LAPLACE, tol)
    zero_dev = abs(L0 - c0)
    rows = [{"t": 0.0, "value": complex(L0), "tilde": complex(L0 - c0), "ratio": None,
             "deviation": None, "remainder": None, "abs_remainder": zero_dev, "resolved": None,
             "real": complex(L0).imag == 0, "ok": zero_dev <= tol.target(c0)}]
    for lr, rr in zip(lim_rows, rem_rows):
        row = {**lr, "remainder": rr["remainder"], "abs_remainder": rr["abs_remainder"],
               "resolved": rr["resolved"]}
        real = complex(lr["value"]).imag == 0
        row["real"] = real
        row["ok"] = real if lr["ok"] is None else (lr["ok"] and real)
        rows.append(row)
    summary.update(regime=lim.regime, normalizer=lim.normalizer, limit=lim.constant, C0=complex(c0))
    extra = [] if slope_ok is None else [slope_ok]
    verdict = _verdict(rows, extra)
    if slope_ok is None and verdict == PASS:
        verdict = INCONCLUSIVE
    return ExperimentReport(
        "laplace",
        {"alpha": str(alpha), "amplitude": _phi_params(phi), "N": N, "grid": ts, **_tol_params(tol)},
        rows,
        verdict,
        {"final_rel_deviation": REGIME_TOL[lim.regime], "monotone_improvement": lim.regime == "one",
         "slope_slack": SLOPE_SLACK, "imaginary_part": 0.0},
        summary,
    )


# ---------------------------------------------------------------- front end


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


CSV_HELP = """CSV columns: one record per grid point; complex values split into
<name>_re and <name>_im; 'ok' marks rows that carry a claim.
  coeffs:            n, C, C_hat, exponent, log_term, A, B, A_hat, B_hat, ok
  eval:              t, oracle, expansion, abs_difference, branch
  verify-fresnel:    alpha, sign, oracle, closed_form, rel_error, explicit_rel_error, ok
  verify-limits:     t, value, tilde, ratio, deviation, ok
  verify-remainder:  t, remainder, abs_remainder, oracle_err, resolved
  verify-decay:      t, oracle, abs_value
  laplace:           t, value, tilde, ratio, deviation, remainder, abs_remainder,
                     resolved, real, ok
"""


def _parse_amplitude(text: str | None, jet_length: int = DEFAULT_JET_LENGTH) -> Amplitude:
    if text is None:
        return default_amplitude(jet_length)
    if not text.lstrip().startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read amplitude file {text!r}: {exc}") from exc
    try:
        return amplitude_from_json(text, jet_length)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed amplitude JSON: {exc}") from exc


def _parse_alpha(args) -> AlphaSpec:
    if getattr(args, "alpha_irrational", None) is not None:
        return AlphaSpec.irrational(args.alpha_irrational)
    if getattr(args, "alpha", None) is None:
        raise UsageError("one of --alpha or --alpha-irrational is required")
    try:
        return AlphaSpec.parse(args.alpha)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --alpha {args.alpha!r}: {exc}") from exc


def _grid(args, tmin, tmax, points) -> list[float]:
    lo = args.tmin if args.tmin is not None else tmin
    hi = args.tmax if args.tmax is not None else tmax
    n = args.points if args.points is not None else points
    try:
        return geometric_grid(lo, hi, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_common(p: argparse.ArgumentParser, alpha=True, amplitude=True, order=None, grid=False):
    if alpha:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--alpha", help="rational alpha as P/Q (or an integer)")
        g.add_argument("--alpha-irrational", type=float, metavar="X",
                       help="irrational alpha, given by its float value")
    if amplitude:
        p.add_argument("--amplitude", metavar="FILE|JSON",
                       help='poly-plateau amplitude {"coeffs": [...], "inner": r, "outer": R}')
    if order is not None:
        p.add_argument("--order", type=int, default=order, metavar="N",
                       help=f"number of singular terms (default {order})")
    if grid:
        p.add_argument("--tmin", type=float)
        p.add_argument("--tmax", type=float)
        p.add_argument("--points", type=int)
    p.add_argument("--tol-abs", type=float, default=DEFAULT_TOL.abs_tol)
    p.add_argument("--tol-rel", type=float, default=DEFAULT_TOL.rel_tol)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="singphase",
        description="Oscillatory integrals with singular phase: coefficients, oracle and checks.",
        epilog=CSV_HELP + "\nExit codes: 0 pass, 2 fail, 3 inconclusive, 1 usage error.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("coeffs", help="table of expansion coefficients")
    _add_common(p, order=2)

    p = sub.add_parser("eval", help="oracle against expansion at one t")
    _add_common(p, order=1)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--kind", choices=(OSCILLATORY, LAPLACE), default=OSCILLATORY)
    p.add_argument("--taylor", type=int, help="Taylor orders in the expansion")

    p = sub.add_parser("verify-fresnel", help="generalized Fresnel closed form")
    _add_common(p, alpha=False, amplitude=False)
    p.add_argument("--alphas", default=",".join(str(a) for a in FRESNEL_ALPHAS),
                   help="comma-separated alphas in (0, 1)")

    p = sub.add_parser("verify-limits", help="small-t limit regimes")
    _add_common(p, grid=True)
    p.add_argument("--kind", choices=(OSCILLATORY, LAPLACE), default=OSCILLATORY)

    p = sub.add_parser("verify-remainder", help="growth order of the expansion residual")
    _add_common(p, order=1, grid=True)
    p.add_argument("--kind", choices=(OSCILLATORY, LAPLACE), default=OSCILLATORY)
    p.add_argument("--taylor", type=int, help="Taylor orders (default: the remainder order)")

    p = sub.add_parser("verify-decay", help="large-t decay slope")
    _add_common(p, grid=True)

    p = sub.add_parser("laplace", help="limit, remainder and reality checks for L_alpha")
    _add_common(p, order=1, grid=True)
    p.add_argument("--taylor", type=int, help="Taylor orders (default: the remainder order)")
    return parser


def _limit_window(alpha: AlphaSpec) -> tuple[float, float, int]:
    v = alpha.value
    if v < 1:
        return 1e-4, 1e-2, 3
    if v == 1:
        return 1e-5, 1e-2, 4
    return 1e-6, 1e-2, 5


def run(argv: Sequence[str] | None = None) -> ExperimentReport:
    """Parse arguments and run one experiment."""
    return _execute(build_parser().parse_args(argv))


def _execute(args: argparse.Namespace) -> ExperimentReport:
    if args.command is None:
        raise UsageError("a subcommand is required")
    try:
        tol = Tolerance(args.tol_abs, args.tol_rel)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cmd = args.command
    if cmd == "verify-fresnel":
        try:
            alphas = [float(s) for s in args.alphas.split(",") if s.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --alphas: {exc}") from exc
        return cmd_verify_fresnel(alphas, tol)

    alpha = _parse_alpha(args)
    # poly-plateau jets are exact at any length; store enough for --order
    order = getattr(args, "order", 0)
    phi = _parse_amplitude(args.amplitude, max(DEFAULT_JET_LENGTH, order + 1))
    if cmd == "coeffs":
        return cmd_coeffs(alpha, phi, args.order, tol)
    if cmd == "eval":
        return cmd_eval(alpha, phi, args.t, args.order, tol, args.kind, args.taylor)
    if cmd == "verify-limits":
        return cmd_verify_limits(alpha, phi, _grid(args, *_limit_window(alpha)), tol, args.kind)
    if cmd == "verify-remainder":
        ts = _grid(args, 1e-6, 1e-3, 12)
        return cmd_verify_remainder(alpha, phi, args.order, ts, tol, args.kind, args.taylor)
    if cmd == "verify-decay":
        return cmd_verify_decay(alpha, phi, _grid(args, 1e2, 1e4, 17), tol)
    if cmd == "laplace":
        lo, hi, n = _limit_window(alpha)
        ts = _grid(args, lo, hi, 3 * n - 2)
        return cmd_laplace(alpha, phi, args.order, ts, tol, args.taylor)
    raise UsageError(f"unknown command {cmd!r}")


def main(argv: Sequence[str] | None = None) -> int:
    """Console entry point; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
        report = _execute(args)
    except (UsageError, SingPhaseError, ValueError) as exc:
        print(f"singphase: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = report.to_csv() if args.format == "csv" else report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
