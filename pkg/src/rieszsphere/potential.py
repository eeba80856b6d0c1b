"""Riesz s-potential and s-energy of the normalized surface measure on S^d.

The potential U(R) of the uniform measure at a point at distance R from the
centre depends only on R.  Several independent representations are provided:

* ``potential_sigma``      hypergeometric series in R^2 (R < 1) or 1/R^2 (R > 1)
* ``potential_sigma_base`` series in 4R/(R+1)^2, valid for every R
* ``potential_sigma_split`` two-term connection form in ((R-1)/(R+1))^2
* ``potential_sigma_quadrature`` one-dimensional integral over the altitude
* ``potential_closed_special`` hard-coded elementary / elliptic closed forms
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from . import config
from .errors import AssertionFailure, DomainError
from .specfun import (
    digamma,
    elliptic_E,
    elliptic_K,
    gauss_2f1,
    ln_gamma,
)

LOG = "log"


class Method(str, enum.Enum):
    CLOSED_FORM = "ClosedForm"
    SERIES = "Series"
    QUADRATURE = "Quadrature"
    ELLIPTIC_FORM = "EllipticForm"
    LOG_SERIES = "LogSeries"


SLOW_CONVERGENCE = "SlowConvergence"
ACCURACY_LOSS = "AccuracyLoss"

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class EvalReport:
    value: float
    method: Method
    err_estimate: float = 0.0
    flags: tuple = ()

    def __float__(self):
        return float(self.value)


class _NotAvailable:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "NotAvailable"

    def __bool__(self):
        return False


NotAvailable = _NotAvailable()


@dataclass(frozen=True)
class RieszParams:
    """Sphere dimension ``d`` and kernel parameter ``s`` (or ``LOG``)."""

    d: int
    s: float | str

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"dimension d must be an integer >= 2, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if self.s == LOG:
            return
        s = float(self.s)
        if not (0.0 < s < self.d):
            raise DomainError(f"s must lie in (0, d) = (0, {self.d}), got {s}")
        object.__setattr__(self, "s", s)

    @property
    def is_log(self) -> bool:
        return self.s == LOG

    @property
    def regime(self) -> str:
        if self.is_log:
            return "logarithmic"
        diff = self.s - (self.d - 1)
        if diff == 0:
            return "harmonic"
        return "superharmonic" if diff < 0 else "subharmonic"

    @property
    def m(self) -> int | None:
        """Integer m with s = d - 1 - 2m, if any."""
        if self.is_log:
            return None
        x = (self.d - 1 - self.s) / 2
        if x >= 0 and x == int(x):
            return int(x)
        return None


def _require_riesz(p: RieszParams):
    if p.is_log:
        raise DomainError("this operation needs a Riesz parameter s, not the log kernel")


def _check_R(R):
    R = float(R)
    if not R >= 0 or math.isinf(R):
        raise DomainError(f"R must be a finite non-negative number, got {R}")
    return R


# --------------------------------------------------------------------------
# energies

def riesz_energy(p: RieszParams) -> float:
    """s-energy W_s(S^d) of the uniform measure."""
    _require_riesz(p)
    d, s = p.d, p.s
    if s == d - 1:
        return 1.0
    lg = (ln_gamma(d) + ln_gamma((d - s) / 2) - s * math.log(2.0)
          - ln_gamma(d / 2) - ln_gamma(d - s / 2))
    return math.exp(lg)


def log_energy(d: int) -> float:
    """Logarithmic energy of the uniform measure on S^d."""
    if int(d) != d or d < 2:
        raise DomainError(f"dimension d must be an integer >= 2, got {d}")
    return -math.log(2.0) + 0.5 * (digamma(d) - digamma(d / 2))


def surface_ratio(d: int) -> float:
    """omega_{d-1}/omega_d, the normalizing factor of the altitude integral."""
    return math.exp(ln_gamma((d + 1) / 2) - ln_gamma(d / 2)) / math.sqrt(math.pi)


# --------------------------------------------------------------------------
# hypergeometric representations

def _near_one(R):
    return abs(R - 1.0) < config.get().branch_eps


def potential_sigma(p: RieszParams, R: float) -> EvalReport:
    """U_s(R) with the series in R^2 inside and in 1/R^2 outside the sphere."""
    _require_riesz(p)
    R = _check_R(R)
    d, s = p.d, p.s
    if R == 0.0:
        return EvalReport(1.0, Method.CLOSED_FORM)
    if _near_one(R):
        return EvalReport(riesz_energy(p), Method.CLOSED_FORM)
    if s == d - 1:
        v = 1.0 if R < 1 else R ** (1 - d)
        return EvalReport(v, Method.CLOSED_FORM)
    a, b, c = -(d - 1 - s) / 2, s / 2, (d + 1) / 2
    if R < 1:
        v = gauss_2f1(a, b, c, R * R)
    else:
        v = R ** (-s) * gauss_2f1(a, b, c, 1.0 / (R * R))
    return EvalReport(v, Method.SERIES, _series_err(v))


def _series_err(v):
    return 16 * _EPS * abs(v)


def hypergeometric_argument(R: float) -> float:
    """4R/(R+1)^2, invariant under R -> 1/R."""
    return 4.0 * R / (R + 1.0) ** 2


def potential_sigma_base(p: RieszParams, R: float) -> EvalReport:
    """U_s(R) = (R+1)^{-s} 2F1(s/2, d/2; d; 4R/(R+1)^2), valid for all R."""
    _require_riesz(p)
    R = _check_R(R)
    if R == 1.0:
        return EvalReport(riesz_energy(p), Method.CLOSED_FORM)
    d, s = p.d, p.s
    v = (R + 1.0) ** (-s) * gauss_2f1(s / 2, d / 2, d, hypergeometric_argument(R))
    return EvalReport(v, Method.SERIES, _series_err(v))


def potential_sigma_split(p: RieszParams, R: float) -> EvalReport | _NotAvailable:
    """Connection form with a |R-1|^{d-s} term; needs (d-s)/2 non-integer.

    The two terms cancel as R -> 0 (relative error grows roughly like
    1e-16 / R^{d-1}), so prefer :func:`potential_sigma` for small radii.

    The two 2F1 factors terminate for even d; they are summed numerically
    in every case.
    """
    _require_riesz(p)
    R = _check_R(R)
    d, s = p.d, p.s
    h = (d - s) / 2
    if h == int(h) or R == 0.0:
        return NotAvailable
    if R == 1.0:
        return EvalReport(riesz_energy(p), Method.CLOSED_FORM)
    x = ((R - 1.0) / (R + 1.0)) ** 2
    W = riesz_energy(p)
    t1 = W * R ** (1 - d) * ((R + 1) / 2) ** (2 * d - s - 2) * gauss_2f1(1 - d / 2, 1 - d + s / 2, 1 - h, x)
    g = math.gamma((s - d) / 2)
    coef = math.exp(ln_gamma((d + 1) / 2) - ln_gamma(s / 2)) * g / (2 * math.sqrt(math.pi))
    t2 = coef * abs(R - 1) ** (d - s) * R ** (1 - d) * ((R + 1) / 2) ** (d - 2) \
        * gauss_2f1(1 - d / 2, 1 - s / 2, 1 + h, x)
    v = t1 + t2
    return EvalReport(v, Method.SERIES, 16 * _EPS * (abs(t1) + abs(t2)))


# --------------------------------------------------------------------------
# quadrature

def _quad(f, a, b, **kw):
    """scipy quad with the configured tolerances.

    A QUADPACK warning is turned into an inflated error estimate, which the
    callers report through the AccuracyLoss flag.
    """
    tol = config.get()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        val, err = integrate.quad(f, a, b, epsabs=tol.quad_atol, epsrel=tol.quad_rtol,
                                  limit=tol.quad_limit, **kw)
    if any(issubclass(w.category, integrate.IntegrationWarning) for w in caught):
        err = max(err, 1e-6 * abs(val))
    return val, err


def altitude_integral(kernel, d: int, R: float, weight_exp_at_one: float = 0.0):
    """Integrate ``kernel(t) * (1-t^2)^{d/2-1}`` over [-1,1] for a source at radius R.

    The kernel may be sharply peaked near t = 1 when R is close to 1; the
    interval is split geometrically there so the adaptive rule sees smooth
    panels.  ``weight_exp_at_one`` is an extra power of (1-t) pulled into the
    algebraic weight of the last panel (used when R == 1 exactly).
    Returns (value, error) without the omega ratio.
    """
    alpha = d / 2 - 1
    if R == 1.0 or weight_exp_at_one:
        return _quad(lambda t: kernel(t), -1.0, 1.0, weight="alg",
                     wvar=(alpha, alpha + weight_exp_at_one))
    delta = (R - 1.0) ** 2 / (2.0 * R) if R > 0 else 1.0
    cuts = []
    if delta < 0.25:
        x = delta
        while x < 0.5:
            cuts.append(1.0 - x)
            x *= 4.0
        cuts.reverse()
    cuts = [c for c in cuts if -0.9 < c < 1.0]
    total = 0.0
    err = 0.0
    if not cuts:
        return _quad(kernel, -1.0, 1.0, weight="alg", wvar=(alpha, alpha))
    lo = cuts[0]
    v, e = _quad(lambda t: kernel(t) * (1 - t) ** alpha, -1.0, lo, weight="alg", wvar=(alpha, 0.0))
    total += v
    err += e
    for a, b in zip(cuts[:-1], cuts[1:]):
        v, e = _quad(lambda t: kernel(t) * ((1 - t) * (1 + t)) ** alpha, a, b)
        total += v
        err += e
    hi = cuts[-1]
    v, e = _quad(lambda t: kernel(t) * (1 + t) ** alpha, hi, 1.0, weight="alg", wvar=(0.0, alpha))
    total += v
    err += e
    return total, err


def potential_sigma_quadrature(p: RieszParams, R: float) -> EvalReport:
    """U_s(R) by adaptive quadrature of the altitude integral."""
    _require_riesz(p)
    R = _check_R(R)
    d, s = p.d, p.s
    if R == 0.0:
        return EvalReport(1.0, Method.QUADRATURE)
    flags = ()
    if R == 1.0:
        # (R^2 - 2Rt + 1) = 2(1-t): fold the singular power into the weight
        val, err = altitude_integral(lambda t: 2.0 ** (-s / 2), d, R, weight_exp_at_one=-s / 2)
    else:
        if abs(R - 1.0) < 1e-6:
            flags = (ACCURACY_LOSS,)
        g = (R - 1.0) ** 2
        # (R-1)^2 + 2R(1-t) is R^2 - 2Rt + 1 without the cancellation near t = 1
        val, err = altitude_integral(lambda t: (g + 2 * R * (1 - t)) ** (-s / 2), d, R)
    c = surface_ratio(d)
    v = c * val
    err = c * err
    if err > 1e-9 * max(abs(v), 1.0) and ACCURACY_LOSS not in flags:
        flags = flags + (ACCURACY_LOSS,)
    return EvalReport(v, Method.QUADRATURE, err, flags)


# --------------------------------------------------------------------------
# logarithmic kernel

def potential_sigma_log(d: int, R: float) -> EvalReport:
    """Logarithmic potential of the uniform measure via its series in 4R/(R+1)^2."""
    R = _check_R(R)
    if int(d) != d or d < 2:
        raise DomainError(f"dimension d must be an integer >= 2, got {d}")
    if R == 0.0:
        return EvalReport(0.0, Method.LOG_SERIES)
    if R == 1.0:
        return EvalReport(log_energy(d), Method.CLOSED_FORM)
    x = hypergeometric_argument(R)
    head = -math.log1p(R)
    tol = config.get()
    total = 0.0
    k0 = 1
    log_coef = 0.0  # log of (d/2)_k / (d)_k at k = k0 - 1
    chunk = 4096
    flags = ()
    err = 0.0
    lx = math.log(x)
    while True:
        k = np.arange(k0, k0 + chunk, dtype=float)
        steps = np.log((d / 2 + k - 1) / (d + k - 1))
        lc = log_coef + np.cumsum(steps)
        terms = np.exp(lc + k * lx) / k
        total += float(np.sum(terms))
        last = float(terms[-1])
        kl = k[-1]
        r = (d / 2 + kl) / (d + kl) * x * kl / (kl + 1)
        tail = last * r / (1 - r) if r < 1 else math.inf
        log_coef = float(lc[-1])
        k0 += chunk
        if tail <= tol.series_rtol * max(abs(total), 1e-300):
            err = tail
            break
        if k0 > tol.log_series_max_terms:
            flags = (SLOW_CONVERGENCE,)
            err = tail
            break
    v = head + 0.5 * total
    return EvalReport(v, Method.LOG_SERIES, 0.5 * err + 16 * _EPS * abs(v), flags)


def potential_sigma_log_quadrature(d: int, R: float) -> EvalReport:
    """Logarithmic potential by quadrature of the altitude integral."""
    R = _check_R(R)
    if R == 0.0:
        return EvalReport(0.0, Method.QUADRATURE)
    if R == 1.0:
        # -1/2 log(2(1-t)), with the log singularity at t=1 via weight alg-log
        val1, e1 = _quad(lambda t: -0.5 * math.log(2.0), -1.0, 1.0, weight="alg",
                         wvar=(d / 2 - 1, d / 2 - 1))
        val2, e2 = _quad(lambda t: -0.5, -1.0, 1.0, weight="alg-logb", wvar=(d / 2 - 1, d / 2 - 1))
        c = surface_ratio(d)
        return EvalReport(c * (val1 + val2), Method.QUADRATURE, c * (e1 + e2))
    g = (R - 1.0) ** 2
    val, err = altitude_integral(lambda t: -0.5 * math.log(g + 2 * R * (1 - t)), d, R)
    c = surface_ratio(d)
    return EvalReport(c * val, Method.QUADRATURE, c * err)


# --------------------------------------------------------------------------
# special closed forms

def _logratio(R):
    return math.log((R - 1) ** 2 / (R + 1) ** 2)


def _terminating_poly_value(a: Fraction, b: Fraction, c: Fraction, x: float) -> float:
    """Exact-coefficient terminating 2F1 evaluated at float x."""
    coeffs = []
    term = Fraction(1)
    n = 0
    while term != 0:
        coeffs.append(term)
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1))
        n += 1
    v = 0.0
    for cf in reversed(coeffs):
        v = v * x + float(cf)
    return v


def potential_closed_special(p: RieszParams, R: float):
    """Hard-coded elementary or elliptic closed forms; ``NotAvailable`` otherwise."""
    if p.is_log:
        return NotAvailable
    R = _check_R(R)
    d, s = p.d, p.s
    if R == 1.0:
        return EvalReport(riesz_energy(p), Method.CLOSED_FORM)
    if s == d - 1:
        return EvalReport(1.0 if R <= 1 else R ** (1 - d), Method.CLOSED_FORM)
    if R == 0.0:
        if p.m is not None:
            return EvalReport(1.0, Method.CLOSED_FORM)
        return NotAvailable
    key = (d, s)
    if key == (4, 2.0):
        v = 3 / 8 * (R * R + 1) / R ** 2 + 3 / 32 * (R * R - 1) ** 2 / R ** 3 * _logratio(R)
        return EvalReport(v, Method.CLOSED_FORM, _series_err(v))
    if key == (6, 4.0):
        v = (15 / 32 * (R ** 4 - 2 / 3 * R * R + 1) / R ** 4
             + 15 / 128 * (R * R + 1) * (R * R - 1) ** 2 / R ** 5 * _logratio(R))
        return EvalReport(v, Method.CLOSED_FORM, _series_err(v))
    if key == (6, 2.0):
        v = (-15 / 128 * (R * R + 1) * (R ** 4 - 14 / 3 * R * R + 1) / R ** 4
             - 15 / 512 * (R * R - 1) ** 4 / R ** 5 * _logratio(R))
        return EvalReport(v, Method.CLOSED_FORM, _series_err(v))
    if key == (3, 1.0):
        if R < 1:
            return EvalReport(_u31_inside(R), Method.ELLIPTIC_FORM, _series_err(1.0))
        # inversion: U(R) = R^{-s} U(1/R)
        v = _u31_inside(1.0 / R) / R
        return EvalReport(v, Method.ELLIPTIC_FORM, _series_err(v))
    if key == (7, 2.0) and R > 1:
        v = (R ** 4 - R * R / 2 + 0.1) / R ** 6
        return EvalReport(v, Method.CLOSED_FORM, _series_err(v))
    m = p.m
    if m is not None:
        a = Fraction(-m)
        b = Fraction(s).limit_denominator(1) / 2
        c = Fraction(d + 1, 2)
        if R < 1:
            v = _terminating_poly_value(a, b, c, R * R)
        else:
            v = R ** (-s) * _terminating_poly_value(a, b, c, 1.0 / (R * R))
        return EvalReport(v, Method.CLOSED_FORM, _series_err(v))
    return NotAvailable


def _u31_inside(R):
    m = R * R
    k = 4 / (3 * math.pi)
    return k * (1 + m) / m * elliptic_E(m) - k * (1 - m) / m * elliptic_K(m)


# --------------------------------------------------------------------------
# derivatives

def potential_derivative(p: RieszParams, R: float) -> float:
    """dU_s/dR for R > 0, R != 1."""
    _require_riesz(p)
    R = _check_R(R)
    d, s = p.d, p.s
    if R == 1.0:
        raise DomainError("the derivative is not evaluated at R = 1")
    if R == 0.0:
        return 0.0
    if s == d - 1:
        return 0.0 if R < 1 else (1 - d) * R ** (-d)
    if R < 1:
        return derivative_inside(p, R)
    U = potential_sigma(p, R).value
    x = hypergeometric_argument(R)
    if s >= d - 2:
        return derivative_formula_a(p, R, U, x)
    return derivative_formula_b(p, R, U, x)


def derivative_inside(p: RieszParams, R: float) -> float:
    """Derivative of the R^2-series, valid for 0 <= R < 1."""
    d, s = p.d, p.s
    a = 1 - (d - 1 - s) / 2
    return -(d - 1 - s) * s / (d + 1) * R * gauss_2f1(a, 1 + s / 2, 1 + (d + 1) / 2, R * R)


def derivative_formula_a(p: RieszParams, R: float, U: float | None = None, x: float | None = None) -> float:
    """Derivative form whose 2F1 stays bounded for d-2 < s < d."""
    d, s = p.d, p.s
    if U is None:
        U = potential_sigma(p, R).value
    if x is None:
        x = hypergeometric_argument(R)
    f = gauss_2f1(d - s / 2, d / 2, 1 + d, x)
    return -s * U / (R + 1) - s * (R - 1) * abs(R - 1) ** (d - s - 2) / (R + 1) ** (d + 1) * f


def derivative_formula_b(p: RieszParams, R: float, U: float | None = None, x: float | None = None) -> float:
    """Derivative form whose 2F1 stays bounded for 0 < s < d-2."""
    d, s = p.d, p.s
    if U is None:
        U = potential_sigma(p, R).value
    if x is None:
        x = hypergeometric_argument(R)
    f = gauss_2f1(1 + d / 2, 1 + s / 2, 1 + d, x)
    return -s * U / (R + 1) - s * (R - 1) / (R + 1) ** (s + 3) * f


def derivative_limit_at_one(p: RieszParams) -> float:
    """Two-sided limit of dU/dR at R = 1 in the strictly superharmonic regime."""
    _require_riesz(p)
    if not p.s < p.d - 1:
        raise DomainError("the limit exists only for s < d - 1")
    return -p.s / 2 * riesz_energy(p)


def second_derivative_limit_at_one(p: RieszParams) -> float:
    """Limit of d^2U/dR^2 at R = 1 for 0 < s < d - 2."""
    _require_riesz(p)
    d, s = p.d, p.s
    if not s < d - 2:
        raise DomainError("finite limit requires s < d - 2")
    return s / 4 * (s + 1 - d / (d - 2 - s)) * riesz_energy(p)


# --------------------------------------------------------------------------
# diagnostics

@dataclass
class RegimeReport:
    params: RieszParams
    grid: list
    values: list
    inside_trend: str
    outside_trend: str
    inside_curvature: str
    outside_curvature: str
    cusp: bool | None
    second_derivative_limit: float | None
    second_derivative_numeric: float | None
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _trend(vals, rtol=1e-13):
    if len(vals) < 2:
        return "n/a"
    diffs = np.diff(vals)
    scale = rtol * max(np.max(np.abs(vals)), 1e-300)
    if np.all(np.abs(diffs) <= scale):
        return "constant"
    if np.all(diffs < 0):
        return "decreasing"
    if np.all(diffs > 0):
        return "increasing"
    return "mixed"


def _curvature(xs, vals, rtol=1e-10):
    """Sign pattern of divided second differences on a (possibly uneven) grid."""
    if len(xs) < 3:
        return "n/a"
    xs = np.asarray(xs)
    v = np.asarray(vals)
    d1 = np.diff(v) / np.diff(xs)
    d2 = np.diff(d1) / (0.5 * (xs[2:] - xs[:-2]))
    scale = rtol * max(np.max(np.abs(d1)), 1e-300)
    if np.all(np.abs(d2) <= scale):
        return "linear"
    if np.all(d2 > 0):
        return "convex"
    if np.all(d2 < 0):
        return "concave"
    return "mixed"


def regime_diagnostics(p: RieszParams, grid: Sequence[float], raise_on_violation: bool = True) -> RegimeReport:
    """Check the qualitative shape of U_s on a grid of radii.

    Monotonicity and extremal-value properties are checked for every regime,
    convexity only where it is known to hold: on ((2+s)/(1+s), inf) for all
    s, on (0,1) and (1,inf) in the subharmonic regime, and concavity on
    (0,1) for max(0, d-3) < s < d-1 (s = d-3 included when d >= 4).
    """
    _require_riesz(p)
    d, s = p.d, p.s
    grid = sorted(float(r) for r in grid if r >= 0)
    vals = [potential_sigma(p, r).value for r in grid]
    inside = [(r, v) for r, v in zip(grid, vals) if 0 < r < 1]
    outside = [(r, v) for r, v in zip(grid, vals) if r > 1]
    in_trend = _trend([v for _, v in inside])
    out_trend = _trend([v for _, v in outside])
    in_curv = _curvature([r for r, _ in inside], [v for _, v in inside])
    out_curv = _curvature([r for r, _ in outside], [v for _, v in outside])
    W = riesz_energy(p)
    rep = RegimeReport(p, grid, vals, in_trend, out_trend, in_curv, out_curv, None, None, None)
    viol = rep.violations

    def check(name, ok, detail=""):
        rep.checks[name] = bool(ok)
        if not ok:
            viol.append(f"{name}: {detail}")

    if len(outside) >= 2:
        check("decreasing on (1,inf)", out_trend == "decreasing", f"trend {out_trend}")
    expected = {"superharmonic": "decreasing", "harmonic": "constant", "subharmonic": "increasing"}[p.regime]
    if len(inside) >= 2:
        check(f"{expected} on (0,1)", in_trend == expected, f"trend {in_trend}")
    tol = 1e-12
    if p.regime == "superharmonic":
        bad = [r for r, v in zip(grid, vals) if r > 0 and v > 1 + tol]
        check("maximum 1 at R=0", not bad, f"U > 1 at R={bad[:3]}")
    elif p.regime == "subharmonic":
        bad = [r for r, v in zip(grid, vals) if r != 1 and v > W * (1 + tol)]
        check("maximum W at R=1", not bad, f"U > W at R={bad[:3]}")
        # cusp: derivative blows up with opposite signs on either side
        hs = [1e-2, 1e-4, 1e-6]
        left = [potential_derivative(p, 1 - h) for h in hs]
        right = [potential_derivative(p, 1 + h) for h in hs]
        cusp = all(x > 0 for x in left) and all(x < 0 for x in right) \
            and left[0] < left[1] < left[2] and right[0] > right[1] > right[2]
        rep.cusp = cusp
        check("cusp at R=1", cusp, f"left {left}, right {right}")
        if len(inside) >= 3:
            check("convex on (0,1)", in_curv == "convex", f"curvature {in_curv}")
        if len(outside) >= 3:
            check("convex on (1,inf)", out_curv == "convex", f"curvature {out_curv}")
    else:
        rep.cusp = False
    if p.regime == "superharmonic" and len(inside) >= 3:
        if max(0.0, d - 3) < s or (s == d - 3 and d >= 4):
            check("concave on (0,1)", in_curv == "concave", f"curvature {in_curv}")
    far = [(r, v) for r, v in outside if r > (2 + s) / (1 + s)]
    if len(far) >= 3:
        c = _curvature([r for r, _ in far], [v for _, v in far])
        check("convex on ((2+s)/(1+s),inf)", c == "convex", f"curvature {c}")
    if s < d - 2:
        lim = second_derivative_limit_at_one(p)
        num = _second_derivative_at_one(p)
        rep.second_derivative_limit = lim
        rep.second_derivative_numeric = num
        if d - s - 2 >= 1:
            check("second-derivative limit at R=1", abs(num - lim) <= 1e-4 * max(1.0, abs(lim)),
                  f"numeric {num} vs {lim}")
    if viol and raise_on_violation:
        raise AssertionFailure("; ".join(viol))
    return rep


def _second_derivative_at_one(p: RieszParams) -> float:
    """Richardson-extrapolated symmetric difference of U' around R = 1."""
    def est(h):
        return (potential_derivative(p, 1 + h) - potential_derivative(p, 1 - h)) / (2 * h)
    h = 1e-2
    a0, a1, a2 = est(h), est(h / 2), est(h / 4)
    # U' is smooth enough that the symmetric error is O(h^2)
    b0 = (4 * a1 - a0) / 3
    b1 = (4 * a2 - a1) / 3
    return (16 * b1 - b0) / 15
