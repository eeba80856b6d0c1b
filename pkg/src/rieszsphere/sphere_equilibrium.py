"""Signed equilibrium on the whole sphere for a point-charge external field.

A charge ``q`` sits at distance ``R`` from the centre on the positive polar
axis.  The signed equilibrium has a density with respect to the normalized
surface measure that depends only on the altitude ``u`` of the point.  The
critical distance is where the smallest value of that density (attained at
one of the poles) touches zero.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from . import config
from .errors import DomainError, KindMismatch, SolverFailure
from .potential import (
    LOG,
    RieszParams,
    derivative_inside,
    potential_sigma,
    riesz_energy,
)
from .specfun import gauss_2f1


class Side(str, enum.Enum):
    INTERIOR = "interior"
    EXTERIOR = "exterior"


class Kind(str, enum.Enum):
    FIRST = "First"
    SECOND = "Second"
    THIRD = "Third"
    FOURTH = "Fourth"


class CriticalKind(str, enum.Enum):
    NONE = "NoCritical"
    ONE = "One"
    TWO = "Two"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class FieldConfig:
    """Point charge ``q`` at radius ``R`` acting on the sphere S^d."""

    params: RieszParams
    q: float
    R: float

    def __post_init__(self):
        q, R = float(self.q), float(self.R)
        if q == 0 or not math.isfinite(q):
            raise DomainError(f"charge q must be finite and nonzero, got {q}")
        if not R >= 0 or R == 1.0 or not math.isfinite(R):
            raise DomainError(f"source radius must be finite, >= 0 and != 1, got {R}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "R", R)

    @property
    def side(self) -> str:
        if self.R == 0:
            return "center"
        return Side.INTERIOR.value if self.R < 1 else Side.EXTERIOR.value

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def s(self):
        return self.params.s


@dataclass(frozen=True)
class CriticalResult:
    kind: CriticalKind
    radii: tuple = ()
    side: str = ""
    q_star: float | None = None
    r_star: float | None = None
    notes: str = ""

    def distances(self) -> tuple:
        """Distances from the critical radii to the sphere."""
        return tuple(abs(r - 1.0) for r in self.radii)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "radii": list(self.radii),
            "distances": list(self.distances()),
            "side": self.side,
            "q_star": self.q_star,
            "r_star": self.r_star,
            "notes": self.notes,
        }


def _side(side) -> Side:
    try:
        return Side(side)
    except ValueError:
        raise DomainError(f"side must be 'interior' or 'exterior', got {side!r}") from None


# --------------------------------------------------------------------------
# densities

def signed_density(cfg: FieldConfig, u: float) -> float:
    """Density of the signed equilibrium at altitude ``u``."""
    if cfg.params.is_log:
        return signed_density_log(cfg, u)
    u = float(u)
    if not -1.0 <= u <= 1.0:
        raise DomainError(f"altitude u must lie in [-1, 1], got {u}")
    d, s, q, R = cfg.d, cfg.s, cfg.q, cfg.R
    W = riesz_energy(cfg.params)
    U = potential_sigma(cfg.params, R).value
    dist2 = R * R - 2 * R * u + 1
    return 1 + q * U / W - q * abs(R * R - 1) ** (d - s) / (W * dist2 ** ((2 * d - s) / 2))


def signed_density_log(cfg: FieldConfig, u: float) -> float:
    """Density of the signed logarithmic equilibrium at altitude ``u``."""
    u = float(u)
    if not -1.0 <= u <= 1.0:
        raise DomainError(f"altitude u must lie in [-1, 1], got {u}")
    d, q, R = cfg.d, cfg.q, cfg.R
    dist2 = R * R - 2 * R * u + 1
    return 1 + q - q * abs(R * R - 1) ** d / dist2 ** d


def pole_density(cfg: FieldConfig) -> tuple[float, float]:
    """Density at the North Pole (u = 1) and the South Pole (u = -1)."""
    d, q, R = cfg.d, cfg.q, cfg.R
    if cfg.params.is_log:
        north = 1 + q - q * (R + 1) ** d / abs(R - 1) ** d
        south = 1 + q - q * abs(R - 1) ** d / (R + 1) ** d
        return north, south
    s = cfg.s
    W = riesz_energy(cfg.params)
    U = potential_sigma(cfg.params, R).value
    base = 1 + q * U / W
    north = base - q * (R + 1) ** (d - s) / (W * abs(R - 1) ** d)
    south = base - q * abs(R - 1) ** (d - s) / (W * (R + 1) ** d)
    return north, south


def weighted_potential_constant(cfg: FieldConfig) -> float:
    """Constant value of potential plus external field on the sphere."""
    if cfg.params.is_log:
        raise DomainError("only the Riesz case has the closed-form constant")
    return riesz_energy(cfg.params) + cfg.q * potential_sigma(cfg.params, cfg.R).value


# --------------------------------------------------------------------------
# Gonchar functions

_KIND_DOMAIN = {
    Kind.FIRST: ("exterior", 1),
    Kind.SECOND: ("interior", 1),
    Kind.THIRD: ("exterior", -1),
    Kind.FOURTH: ("interior", -1),
}


def kind_for(q: float, side) -> Kind:
    side = _side(side)
    if q > 0:
        return Kind.FIRST if side is Side.EXTERIOR else Kind.SECOND
    return Kind.THIRD if side is Side.EXTERIOR else Kind.FOURTH


def gonchar_value(kind, d: int, s: float, q: float, R: float, W: float | None = None,
                  U: float | None = None) -> float:
    """Gonchar function of the given kind, without the sign/side checks."""
    kind = Kind(kind)
    p = RieszParams(d, s)
    if W is None:
        W = riesz_energy(p)
    if U is None:
        U = potential_sigma(p, R).value
    if kind is Kind.FIRST:
        return (W / q * (R - 1) ** d - (R + 1) ** (d - s)) * R ** (d - 1) + R ** (d - 1) * (R - 1) ** d * U
    if kind is Kind.SECOND:
        return W / q * (1 - R) ** d - (1 + R) ** (d - s) + (1 - R) ** d * U
    if kind is Kind.THIRD:
        return (W / q * (R + 1) ** d - (R - 1) ** (d - s)) * R ** (d - 1) + R ** (d - 1) * (R + 1) ** d * U
    return W / q * (1 + R) ** d - (1 - R) ** (d - s) + (1 + R) ** d * U


def gonchar_function(kind, cfg: FieldConfig) -> float:
    """Gonchar function of ``kind``; the kind must match the charge sign and side."""
    kind = Kind(kind)
    if cfg.params.is_log:
        raise DomainError("Gonchar functions are defined for the Riesz kernel")
    side, sign = _KIND_DOMAIN[kind]
    if cfg.side != side or (cfg.q > 0) != (sign > 0):
        raise KindMismatch(
            f"{kind.value} kind needs a {side} source with q {'>' if sign > 0 else '<'} 0; "
            f"got R={cfg.R}, q={cfg.q}")
    return gonchar_value(kind, cfg.d, cfg.s, cfg.q, cfg.R)


def pole_density_from_gonchar(kind, cfg: FieldConfig) -> float:
    """Extremal pole density recovered from the Gonchar function."""
    kind = Kind(kind)
    G = gonchar_function(kind, cfg)
    d, q, R = cfg.d, cfg.q, cfg.R
    W = riesz_energy(cfg.params)
    norm = {
        Kind.FIRST: R ** (d - 1) * (R - 1) ** d,
        Kind.SECOND: (1 - R) ** d,
        Kind.THIRD: R ** (d - 1) * (R + 1) ** d,
        Kind.FOURTH: (R + 1) ** d,
    }[kind]
    return q / W * G / norm


# --------------------------------------------------------------------------
# root finding helpers

def _bracket_and_solve(fun: Callable[[float], float], xs) -> list[float]:
    """Scan ``xs`` for sign changes of ``fun`` and polish each with Brent's method."""
    tol = config.get()
    vals = [fun(x) for x in xs]
    roots = []
    for (a, fa), (b, fb) in zip(zip(xs, vals), zip(xs[1:], vals[1:])):
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(optimize.brentq(fun, a, b, xtol=tol.root_xtol, rtol=4 * np.finfo(float).eps,
                                         maxiter=500))
    if vals and vals[-1] == 0.0:
        roots.append(xs[-1])
    return roots, list(zip(xs, vals))


def _exterior_grid(n=400):
    # R - 1 from 1e-12 to 1e8, log-spaced
    return list(1.0 + np.logspace(-12, 8, n))


def _interior_grid(n=400):
    inner = np.logspace(-12, math.log10(0.5), n // 2)
    outer = 1.0 - np.logspace(math.log10(0.5), -12, n // 2)
    return sorted(set(inner.tolist()) | set(outer.tolist()))


def characteristic_f(p: RieszParams, R: float) -> float:
    """|R-1|^{d-s}/(R+1)^d - U(R); the South Pole density vanishes where it equals W/q."""
    d, s = p.d, p.s
    return abs(R - 1) ** (d - s) / (R + 1) ** d - potential_sigma(p, R).value


def characteristic_f_prime(p: RieszParams, R: float) -> float:
    """Derivative of :func:`characteristic_f` on (0, 1)."""
    d, s = p.d, p.s
    g1 = -(1 - R) ** (d - s - 1) * (1 + R) ** (-d - 1) * (2 * d - s * (1 + R))
    return g1 - derivative_inside(p, R)


def _north_char(p: RieszParams, R: float) -> float:
    """(R+1)^{d-s}/|R-1|^d - U(R); the North Pole density vanishes where it equals W/q."""
    d, s = p.d, p.s
    e = (d - s) * math.log(R + 1) - d * math.log(abs(R - 1))
    if e > 700:
        # the first term alone is beyond double range; U(R) is at most W there
        return math.inf
    return math.exp(e) - potential_sigma(p, R).value


def superharmonic_minimizer(p: RieszParams) -> tuple[float, float]:
    """Location R* and value f(R*) of the minimum of f on (0, 1) for s < d - 1.

    R* is the zero of the stationarity equation in the form
    h(R) = [2d - s(1+R)] (1-R)^{d-s-1} / ((1+R)^{d+1} R) against the
    derivative series of the potential; a golden-section search on f in a
    narrow window serves as a cross-check.
    """
    d, s = p.d, p.s
    if not s < d - 1:
        raise DomainError("the interior minimum exists only in the superharmonic regime")
    k = s * (d - 1 - s) / (d + 1)

    def phi(R):
        h = (2 * d - s * (1 + R)) * (1 - R) ** (d - s - 1) / ((1 + R) ** (d + 1) * R)
        return h - k * gauss_2f1(1 - (d - 1 - s) / 2, 1 + s / 2, 1 + (d + 1) / 2, R * R)

    xs = _interior_grid(200)
    roots, table = _bracket_and_solve(phi, xs)
    if len(roots) != 1:
        raise SolverFailure(f"expected one stationary point of f on (0,1), found {len(roots)}", table)
    warm = roots[0]
    # golden section on f around the warm start, then bisection on f'
    width = 0.05 * min(warm, 1 - warm)
    a, b = warm - width, warm + width
    r_gs = golden_section_min(lambda R: characteristic_f(p, R), a, b, tol=1e-8)
    fp = lambda R: characteristic_f_prime(p, R)
    lo, hi = r_gs - 1e-6, r_gs + 1e-6
    if fp(lo) < 0 < fp(hi):
        r_star = optimize.bisect(fp, lo, hi, xtol=config.get().root_xtol, maxiter=200)
    else:
        r_star = warm
    return r_star, characteristic_f(p, r_star)


def golden_section_min(fun, a, b, tol=1e-10, maxiter=200):
    """Plain golden-section search for a unimodal function on [a, b]."""
    g = (math.sqrt(5) - 1) / 2
    c = b - g * (b - a)
    dd = a + g * (b - a)
    fc, fd = fun(c), fun(dd)
    for _ in range(maxiter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc < fd:
            b, dd, fd = dd, c, fc
            c = b - g * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, dd, fd
            dd = a + g * (b - a)
            fd = fun(dd)
    return 0.5 * (a + b)


# --------------------------------------------------------------------------
# critical distances

def critical_distance(p: RieszParams, q: float, side) -> CriticalResult:
    """Critical source radius (radii) for charge ``q`` on the given side."""
    if p.is_log:
        return critical_distance_log(p.d, q, side)
    side = _side(side)
    q = float(q)
    if q == 0:
        raise DomainError("charge q must be nonzero")
    d, s = p.d, p.s
    W = riesz_energy(p)
    target = W / q
    if q > 0:
        if side is Side.EXTERIOR:
            # North Pole characteristic decreases from +inf to 0 on (1, inf)
            fun = lambda R: _north_char(p, R) - target
            roots, table = _bracket_and_solve(fun, _exterior_grid())
        else:
            # Second-kind function: W/q at R=0, negative near R=1
            fun = lambda R: gonchar_value(Kind.SECOND, d, s, q, R, W=W)
            roots, table = _bracket_and_solve(fun, _interior_grid())
        if len(roots) != 1:
            raise SolverFailure(f"expected a unique critical radius, found {len(roots)}", table)
        return CriticalResult(CriticalKind.ONE, (roots[0],), side.value)

    # negative charge: South Pole characteristic f(R) = W/q
    if side is Side.EXTERIOR or s >= d - 1:
        if q >= -1:
            return CriticalResult(CriticalKind.NONE, (), side.value,
                                  notes="weak negative field: no critical distance (q >= -1)")
        grid = _exterior_grid() if side is Side.EXTERIOR else _interior_grid()
        fun = lambda R: characteristic_f(p, R) - target
        roots, table = _bracket_and_solve(fun, grid)
        if len(roots) != 1:
            raise SolverFailure(f"expected a unique critical radius, found {len(roots)}", table)
        return CriticalResult(CriticalKind.ONE, (roots[0],), side.value)

    # superharmonic, interior, negative charge
    r_star, f_star = superharmonic_minimizer(p)
    q_star = W / f_star
    tol = config.get().degenerate_rtol
    notes = ""
    if q == -1.0:
        notes = "q = -1 is the boundary case: one root in (0, R*) and the limit R -> 1 coincide"
    if abs(q - q_star) <= tol * abs(q_star):
        return CriticalResult(CriticalKind.DEGENERATE, (r_star,), side.value, q_star, r_star,
                              "tangency: q equals the threshold charge")
    if q > q_star:
        return CriticalResult(CriticalKind.NONE, (), side.value, q_star, r_star,
                              "q above the threshold charge: density stays positive")
    fun = lambda R: characteristic_f(p, R) - target
    left = [x for x in _interior_grid() if x < r_star] + [r_star]
    roots1, table1 = _bracket_and_solve(fun, left)
    roots1 = [r for r in roots1 if r < r_star]
    if q <= -1:
        if len(roots1) != 1:
            raise SolverFailure("expected one critical radius below R*", table1)
        return CriticalResult(CriticalKind.ONE, (roots1[0],), side.value, q_star, r_star, notes)
    right = [r_star] + [x for x in _interior_grid() if x > r_star]
    roots2, table2 = _bracket_and_solve(fun, right)
    roots2 = [r for r in roots2 if r > r_star]
    if len(roots1) != 1 or len(roots2) != 1:
        raise SolverFailure("expected one critical radius on each side of R*", table1 + table2)
    return CriticalResult(CriticalKind.TWO, (roots1[0], roots2[0]), side.value, q_star, r_star, notes)


def critical_distance_log(d: int, q: float, side) -> CriticalResult:
    """Closed-form critical radii for the logarithmic kernel."""
    side = _side(side)
    q = float(q)
    if q == 0:
        raise DomainError("charge q must be nonzero")
    if -1 <= q < 0:
        return CriticalResult(CriticalKind.NONE, (), side.value,
                              notes="weak negative logarithmic field: no critical distance")
    alpha = ((1 + q) / q) ** (1.0 / d)
    if q > 0:
        R = (alpha + 1) / (alpha - 1) if side is Side.EXTERIOR else (alpha - 1) / (alpha + 1)
    else:
        R = (1 + alpha) / (1 - alpha) if side is Side.EXTERIOR else (1 - alpha) / (1 + alpha)
    return CriticalResult(CriticalKind.ONE, (R,), side.value)


# --------------------------------------------------------------------------
# inversion and connection of fields

def inversion_map(cfg: FieldConfig) -> FieldConfig:
    """Image configuration (1/R, q R^{-s}) with the same signed equilibrium."""
    if cfg.params.is_log:
        raise DomainError("the inversion principle is implemented for the Riesz kernel")
    if cfg.R <= 0:
        raise DomainError("inversion needs R > 0")
    return FieldConfig(cfg.params, cfg.q * cfg.R ** (-cfg.s), 1.0 / cfg.R)


class _NoSolution:
    def __repr__(self):
        return "NoSolution"

    def __bool__(self):
        return False


NoSolution = _NoSolution()


def connect_fields(d: int, s: float, q_prime: float, q: float, R_prime: float):
    """Exterior radius R > 1 with q' U(R') = q U(R), or ``NoSolution``.

    U decreases strictly from W to 0 on (1, inf), so a solution exists iff
    q' U(R') / q < W.
    """
    if not (q > 0 and q_prime > 0):
        raise DomainError("connect_fields needs positive charges")
    if not 0 <= R_prime < 1:
        raise DomainError("R' must lie in [0, 1)")
    p = RieszParams(d, s)
    W = riesz_energy(p)
    target = q_prime * potential_sigma(p, R_prime).value / q
    if s == d - 1:
        if not q_prime < q:
            return NoSolution
        return (q_prime / q) ** (1.0 / (1 - d))
    if not target < W:
        return NoSolution
    fun = lambda R: potential_sigma(p, R).value - target
    # U is monotone, so a single bracket suffices; small s pushes the root far out
    lo, hi = 1.0 + 1e-12, 2.0
    if fun(lo) <= 0:
        raise SolverFailure("connection root lies closer than 1e-12 to the sphere", [(lo, fun(lo))])
    while fun(hi) > 0:
        if hi > 1e150:
            raise SolverFailure("connection relation did not bracket a root", [(hi, fun(hi))])
        lo, hi = hi, hi * hi
    tol = config.get()
    return optimize.brentq(fun, lo, hi, xtol=tol.root_xtol, rtol=4 * np.finfo(float).eps, maxiter=500)
