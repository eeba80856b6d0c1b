"""Gonchar polynomial families for s = d - 1 - 2m, built in exact arithmetic.

For these Riesz parameters the energy of the uniform measure is rational
and the potential of the sphere is a terminating hypergeometric sum, so all
four characteristic functions are polynomials with rational coefficients.
Roots are found in floating point and then polished with mpmath.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .errors import (
    DomainError,
    IdentityViolation,
    InclusionViolation,
    NoSignChange,
)

Number = Fraction | int


class PolyKind(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    P = "P"  # the trinomial


# --------------------------------------------------------------------------
# exact polynomial arithmetic on ascending Fraction lists

def _trim(c: list) -> list:
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _scale(a: Sequence, k) -> list:
    return [k * x for x in a]


def _mul(a: Sequence, b: Sequence) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _binomial_power(c0, c1, n: int) -> list:
    """Coefficients of (c0 + c1 z)^n."""
    return [Fraction(math.comb(n, k)) * Fraction(c0) ** (n - k) * Fraction(c1) ** k for k in range(n + 1)]


def _monomial(k: int) -> list:
    return [Fraction(0)] * k + [Fraction(1)]


def _horner(coeffs: Sequence, z):
    v = 0 * z
    for c in reversed(coeffs):
        v = v * z + c
    return v


# --------------------------------------------------------------------------
# exact energy and potential coefficients

def _gamma_exact(x: Fraction) -> tuple[Fraction, int]:
    """Gamma at a positive integer or half-integer as (rational, power of sqrt(pi))."""
    if x <= 0 or (2 * x).denominator != 1:
        raise DomainError(f"exact gamma needs a positive (half-)integer, got {x}")
    if x.denominator == 1:
        return Fraction(math.factorial(int(x) - 1)), 0
    # Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
    n = int(x - Fraction(1, 2))
    return Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), 1


def exact_energy(d: int, m: int) -> Fraction:
    """Riesz energy of the uniform measure on S^d for s = d - 1 - 2m, as a rational."""
    s = d - 1 - 2 * m
    if s <= 0:
        raise DomainError(f"s = d - 1 - 2m must be positive, got {s}")
    num = [_gamma_exact(Fraction(d)), _gamma_exact(Fraction(d - s, 2))]
    den = [_gamma_exact(Fraction(d, 2)), _gamma_exact(Fraction(2 * d - s, 2))]
    val = Fraction(1, 2 ** s)
    pw = 0
    for r, e in num:
        val *= r
        pw += e
    for r, e in den:
        val /= r
        pw -= e
    if pw != 0:  # pragma: no cover - guarded by the parity of d - s
        raise AssertionError("sqrt(pi) factors failed to cancel")
    return val


def potential_coefficients(d: int, m: int) -> list[Fraction]:
    """Coefficients c_k of the terminating sum sum_k c_k x^k representing U."""
    s = Fraction(d - 1 - 2 * m)
    a, b, c = Fraction(-m), s / 2, Fraction(d + 1, 2)
    out = [Fraction(1)]
    for n in range(m):
        out.append(out[-1] * (a + n) * (b + n) / ((c + n) * (n + 1)))
    return out


# --------------------------------------------------------------------------
# polynomial record

@dataclass(frozen=True)
class RationalPoly:
    coeffs: tuple  # ascending powers, exact rationals
    kind: PolyKind
    d: int
    q: Fraction
    m: int = 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def __call__(self, z):
        if isinstance(z, (int, Fraction)):
            return _horner(self.coeffs, Fraction(z))
        if isinstance(z, (mpmath.mpf, mpmath.mpc)):
            return _horner([mpmath.mpf(c.numerator) / c.denominator for c in self.coeffs], z)
        return _horner([float(c) for c in self.coeffs], z)

    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def scale(self) -> float:
        return float(max(abs(c) for c in self.coeffs))

    def __str__(self):
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            terms.append(f"{c}*z^{k}" if k else f"{c}")
        return " + ".join(terms) or "0"


def _as_fraction(q) -> Fraction:
    if isinstance(q, float):
        return Fraction(q).limit_denominator(10 ** 12) if q != int(q) else Fraction(int(q))
    return Fraction(q)


def family_coeffs(kind, d: int, q, m: int = 0) -> list[Fraction]:
    """Raw coefficient list of a Gonchar polynomial, without sign checks."""
    kind = PolyKind(kind)
    q = _as_fraction(q)
    if q == 0:
        raise DomainError("charge q must be nonzero")
    W = exact_energy(d, m)
    cu = potential_coefficients(d, m)
    width = 2 * m + 1
    if kind in (PolyKind.A, PolyKind.C):
        sgn = -1 if kind is PolyKind.A else 1
        # exterior: R^{d-1} U(R) = sum_k c_k R^{2m-2k}
        V = [Fraction(0)] * (2 * m + 1)
        for k, c in enumerate(cu):
            V[2 * m - 2 * k] += c
        base = _binomial_power(sgn, 1, d)          # (z -+ 1)^d
        other = _binomial_power(-sgn, 1, width)    # (z +- 1)^{2m+1}
        zd1 = _monomial(d - 1)
        out = _add(_scale(_mul(base, zd1), W / q), _scale(_mul(other, zd1), -1))
        out = _add(out, _mul(base, V))
    elif kind in (PolyKind.B, PolyKind.D):
        sgn = -1 if kind is PolyKind.B else 1
        V = [Fraction(0)] * (2 * m + 1)
        for k, c in enumerate(cu):
            V[2 * k] += c
        base = _binomial_power(1, sgn, d)          # (1 -+ z)^d
        other = _binomial_power(1, -sgn, width)    # (1 +- z)^{2m+1}
        out = _add(_scale(base, W / q), _scale(other, -1))
        out = _add(out, _mul(base, V))
    else:
        raise DomainError("use trinomial() for the P family")
    return _trim(out)


def build_poly(kind, d: int, q, m: int = 0) -> RationalPoly:
    """Gonchar polynomial of the given kind with exact rational coefficients."""
    kind = PolyKind(kind)
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d}")
    if int(m) != m or m < 0 or d - 1 - 2 * m <= 0:
        raise DomainError(f"need integer m >= 0 with s = d - 1 - 2m > 0, got m={m}")
    q = _as_fraction(q)
    if kind in (PolyKind.A, PolyKind.B) and not q > 0:
        raise DomainError(f"kind {kind.value} needs q > 0")
    if kind in (PolyKind.C, PolyKind.D) and not q < 0:
        raise DomainError(f"kind {kind.value} needs q < 0")
    return RationalPoly(tuple(family_coeffs(kind, d, q, m)), kind, int(d), q, int(m))


def trinomial(d: int, q) -> RationalPoly:
    """(1 + 1/q) w^d + w - 2."""
    q = _as_fraction(q)
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d}")
    if q == 0 or q == -1:
        raise DomainError("trinomial needs q not in {0, -1}")
    c = [Fraction(-2), Fraction(1)] + [Fraction(0)] * (d - 1)
    c[d] += 1 + 1 / q
    return RationalPoly(tuple(_trim(c)), PolyKind.P, int(d), q, 0)


def shift_argument(p: RationalPoly, a, b) -> list[Fraction]:
    """Coefficients of p(a + b z)."""
    out = [Fraction(0)]
    for k, c in enumerate(p.coeffs):
        out = _add(out, _scale(_binomial_power(a, b, k), c))
    return _trim(out)


# --------------------------------------------------------------------------
# roots

@dataclass
class RootSet:
    roots: list
    residuals: list
    converged: bool = True
    iterations: int = 0

    def __len__(self):
        return len(self.roots)

    def real_roots(self, tol=1e-10) -> list[float]:
        return sorted(z.real for z in self.roots if abs(z.imag) <= tol * max(1.0, abs(z)))


def _newton_ratio(c: np.ndarray, dc: np.ndarray, rc: np.ndarray, rdc: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z)/p'(z), through the reversed polynomial where |z| > 1 to avoid overflow."""
    n = len(c) - 1
    out = np.empty_like(z)
    small = np.abs(z) <= 1
    zs = z[small]
    out[small] = np.polynomial.polynomial.polyval(zs, c) / np.polynomial.polynomial.polyval(zs, dc)
    zb = z[~small]
    w = 1 / zb
    ps = np.polynomial.polynomial.polyval(w, rc)
    dps = np.polynomial.polynomial.polyval(w, rdc)
    out[~small] = zb * ps / (n * ps - w * dps)
    return out


def _aberth(c: np.ndarray, z: np.ndarray, maxiter: int, tol: float):
    """Aberth-Ehrlich simultaneous iteration for all roots of sum c_k z^k."""
    dc = c[1:] * np.arange(1, len(c))
    rc = c[::-1].copy()
    rdc = rc[1:] * np.arange(1, len(rc))
    for it in range(1, maxiter + 1):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = _newton_ratio(c, dc, rc, rdc, z)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = ratio / (1 - ratio * inv.sum(axis=1))
        corr = np.where(np.isfinite(corr), corr, 0.0)
        z = z - corr
        if np.all(np.abs(corr) <= tol * np.maximum(1.0, np.abs(z))):
            return z, it, True
    return z, maxiter, False


def roots(p: RationalPoly, seed: int = 20120901, maxiter: int = 500, dps: int = 60) -> RootSet:
    """All complex roots, sorted by (real, imag), with high-precision residuals.

    ``converged`` is False when some residual exceeds
    1e-12 * max|coeff| * max(1, |z|)^deg; the iterate is returned anyway.

    Starting points lie on a circle of radius 1 + max|c_i / c_deg| with
    randomized phases from a fixed seed.
    """
    n = p.degree
    if n < 1:
        raise DomainError("polynomial has degree 0")
    c = p.float_coeffs()
    lead = c[-1]
    radius = 1.0 + float(np.max(np.abs(c[:-1] / lead)))
    rng = np.random.default_rng(seed)
    phases = 2 * np.pi * (np.arange(n) + rng.uniform(0.0, 0.5, n)) / n
    z0 = radius * np.exp(1j * phases)
    z, its, _ = _aberth(c, z0, maxiter, 1e-10)

    # simultaneous polish in extended precision on the exact coefficients;
    # float evaluation in the monomial basis stalls well above eps here
    polished, residuals = [], []
    with mpmath.workdps(dps):
        mc = [mpmath.mpf(x.numerator) / x.denominator for x in p.coeffs]
        mdc = [k * mc[k] for k in range(1, len(mc))]
        w = [mpmath.mpc(zi.real, zi.imag) for zi in z]
        stop = mpmath.mpf(10) ** (-(dps // 2))
        for _ in range(200):
            biggest = mpmath.mpf(0)
            for i in range(n):
                ratio = _horner(mc, w[i]) / _horner(mdc, w[i])
                rep = sum(1 / (w[i] - w[j]) for j in range(n) if j != i)
                step = ratio / (1 - ratio * rep)
                w[i] -= step
                biggest = max(biggest, abs(step) / max(1, abs(w[i])))
            if biggest <= stop:
                break
        for wi in w:
            val = complex(wi)
            polished.append(val)
            residuals.append(float(abs(_horner(mc, mpmath.mpc(val.real, val.imag)))))
    order = sorted(range(n), key=lambda i: (polished[i].real, polished[i].imag))
    rs = RootSet([polished[i] for i in order], [residuals[i] for i in order], True, its)
    # best iterate is returned either way; the flag records the residual test
    rs.converged = residual_ok(p, rs)
    return rs


def residual_ok(p: RationalPoly, rs: RootSet, rtol: float = 1e-12) -> bool:
    scale = mpmath.mpf(p.scale())
    return all(r <= rtol * scale * mpmath.mpf(max(1.0, abs(z))) ** p.degree
               for z, r in zip(rs.roots, rs.residuals))


def real_root_in(p: RationalPoly, lo: float, hi: float, xtol: float = 1e-13) -> float:
    """Bisection root of ``p`` on [lo, hi]; ``hi`` may be ``inf``."""
    with mpmath.workdps(40):
        def f(x):
            return p(mpmath.mpf(x))

        a = float(lo)
        if math.isinf(hi):
            # march outward geometrically from lo until the sign flips
            fa = f(a)
            step = 1e-3
            b = a + step
            while f(b) * fa > 0:
                a, fa = b, f(b)
                step *= 2
                b = a + step
                if b > 1e12:
                    raise NoSignChange(f"no sign change of {p.kind.value} on [{lo}, inf)")
        else:
            b = float(hi)
        fa, fb = f(a), f(b)
        if fa == 0:
            return a
        if fb == 0:
            return b
        if fa * fb > 0:
            raise NoSignChange(f"no sign change of {p.kind.value} on [{lo}, {hi}]")
        while b - a > xtol:
            mid = 0.5 * (a + b)
            if mid in (a, b):
                break
            fm = f(mid)
            if fm == 0:
                return mid
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
        return 0.5 * (a + b)


# --------------------------------------------------------------------------
# exact identities

class Identity(str, enum.Enum):
    FIRST_SECOND = "i"
    THIRD_FOURTH = "ii"
    SECOND_FOURTH = "iii"
    FIRST_THIRD = "iv"
    SELF_RECIPROCAL_A = "v"
    RECIPROCAL_C = "vi"


def family_value(kind, d: int, q, z, m: int = 0):
    """Exact value of a Gonchar polynomial at a rational point."""
    return _horner(family_coeffs(kind, d, q, m), Fraction(z))


@dataclass
class IdentityReport:
    which: Identity
    d: int
    q: Fraction
    samples: list
    ok: bool
    rows: list = field(default_factory=list)  # (z, lhs, rhs)


def _identity_sides(which: Identity, d: int, q: Fraction, z: Fraction) -> list[tuple]:
    A = lambda qq, w: family_value("A", d, qq, w)
    B = lambda qq, w: family_value("B", d, qq, w)
    C = lambda qq, w: family_value("C", d, qq, w)
    D = lambda qq, w: family_value("D", d, qq, w)
    zi = 1 / z
    g = zi ** (d - 1)
    if which is Identity.FIRST_SECOND:
        return [(z ** d * A(q * g, zi), B(q, z)), (z ** d * B(q * g, zi), A(q, z))]
    if which is Identity.THIRD_FOURTH:
        return [(z ** d * C(q * g, zi), D(q, z)), (z ** d * D(q * g, zi), C(q, z))]
    if which is Identity.SECOND_FOURTH:
        return [(B(-q, -z), D(-q, z))]
    if which is Identity.FIRST_THIRD:
        lhs = (-z) ** (2 * d - 1) * A(Fraction(1), -zi)
        if d % 2 == 0:
            return [(lhs, C(Fraction(-1), z))]
        return [(lhs + C(Fraction(-1), z), 2 * (1 + z) ** d)]
    if which is Identity.SELF_RECIPROCAL_A:
        if d % 2:
            raise DomainError("self-reciprocity of the first kind needs even d")
        return [(z ** (2 * d - 1) * A(Fraction(1), zi), A(Fraction(1), z))]
    return [(z ** (2 * d - 1) * C(Fraction(-1), zi), -C(Fraction(-1), z))]


def identity_check(which, d: int, q, samples: Iterable, raise_on_failure: bool = True) -> IdentityReport:
    """Check one of the structural identities in exact rational arithmetic.

    ``q`` is the positive charge for (i) and (iii) and the negative charge
    for (ii); it is ignored by (iv)-(vi), which fix the charges to +-1.
    """
    which = Identity(which)
    q = _as_fraction(q)
    samples = [Fraction(z) for z in samples]
    if any(z == 0 for z in samples):
        raise DomainError("identity samples must avoid z = 0")
    rep = IdentityReport(which, d, q, samples, True)
    for z in samples:
        for lhs, rhs in _identity_sides(which, d, q, z):
            rep.rows.append((z, lhs, rhs))
            if lhs != rhs:
                rep.ok = False
                if raise_on_failure:
                    raise IdentityViolation(f"identity ({which.value}) fails at z={z}: {lhs} != {rhs}")
    return rep


# --------------------------------------------------------------------------
# trinomial structure

def multiple_root_criterion(d: int, q) -> tuple[Fraction, Fraction]:
    """Both sides of the double-root test for A w^{n+m} + B w^m + C with n=d-1, m=1.

    The trinomial has a repeated zero exactly when the two values agree.
    """
    q = _as_fraction(q)
    n, mm = d - 1, 1
    A, B, C = 1 + 1 / q, Fraction(1), Fraction(-2)
    lhs = (-1) ** (n + mm) * A ** mm * C ** n / B ** (n + mm)
    rhs = Fraction(mm ** mm * n ** n, (n + mm) ** (n + mm))
    return lhs, rhs


def egervary_vertices(d: int, q) -> tuple[list[complex], list[complex]]:
    """Vertices of the two concentric polygons whose unit charges balance at the trinomial zeros."""
    qf = float(q)
    if int(d) != d or d < 2:
        raise DomainError("polygon vertices need d >= 2")
    if qf == 0 or qf == -1:
        raise DomainError("vertices need q not in {0, -1}")
    alpha = math.pi if -1 < qf < 0 else 0.0
    lead = abs(1 + 1 / qf)
    r1 = ((2 - 1 / d) / lead) ** (1 / (d - 1))
    r2 = ((2 + 1 / (d - 1)) * 2 / lead) ** (1 / d)
    inner = [r1 * cmath.exp(1j * (-alpha + (2 * k + 1) * math.pi) / (d - 1)) for k in range(1, d)]
    outer = [r2 * cmath.exp(1j * (math.pi - alpha + (2 * k + 1) * math.pi) / d) for k in range(1, d + 1)]
    return inner, outer


def force(z: complex, vertices: Iterable[complex]) -> complex:
    """Resultant of the logarithmic force of unit charges at ``vertices`` on ``z``."""
    zc = z.conjugate()
    return sum(1 / (zc - v.conjugate()) for v in vertices)


@dataclass
class SectorReport:
    d: int
    t: float
    s: float
    half_width: float
    counts: list
    roots: list
    ok: bool
    messages: list = field(default_factory=list)


def _bisect(f, a, b, xtol=1e-15):
    fa = f(a)
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
        if b - a <= xtol:
            break
    return 0.5 * (a + b)


def _angle_gap(a: float, b: float) -> float:
    g = (a - b) % (2 * math.pi)
    return min(g, 2 * math.pi - g)


def sector_inclusion(d: int, raise_on_failure: bool = True) -> SectorReport:
    """Check that each annular sector around the d-th roots of unity holds one zero of 2w^d + w - 2."""
    if int(d) != d or d < 3:
        raise DomainError("sector inclusion is stated for d >= 3")
    s = _bisect(lambda x: x ** d - x / 2 - 1, 1.0, 2.0)
    t = _bisect(lambda x: x ** d + x / 2 - 1, 0.0, 1.0)
    cap = 1.5 ** (1 / (d - 1))
    half = cap / (2 * d)
    rs = roots(trinomial(d, 1))
    msgs = []
    if not (2 / 3 <= t < 1 < s <= cap):
        msgs.append(f"radius bounds fail: t={t}, s={s}, cap={cap}")
    slack = 1e-12
    outside = [z for z in rs.roots if not (t - slack <= abs(z) <= s + slack)]
    if outside:
        msgs.append(f"zeros outside the annulus: {outside}")
    counts = []
    for k in range(d):
        centre = 2 * math.pi * k / d
        inside = [z for z in rs.roots
                  if t - slack <= abs(z) <= s + slack and _angle_gap(cmath.phase(z), centre) <= half]
        counts.append(len(inside))
        if len(inside) != 1:
            msgs.append(f"sector k={k} holds {len(inside)} zeros")
    rep = SectorReport(d, t, s, half, counts, rs.roots, not msgs, msgs)
    if msgs and raise_on_failure:
        raise InclusionViolation("; ".join(msgs))
    return rep


# --------------------------------------------------------------------------
# zero tables and circle distances

def zero_map(kind, d_list: Iterable[int], q, m: int = 0) -> list[tuple[int, complex]]:
    """Flat (d, root) table over several dimensions."""
    rows = []
    for d in d_list:
        p = trinomial(d, q) if PolyKind(kind) is PolyKind.P else build_poly(kind, d, q, m)
        rows.extend((d, z) for z in roots(p).roots)
    return rows


_SQ3 = math.sqrt(3) / 2


def _dist_segment(z: complex, a: complex, b: complex) -> float:
    ab = b - a
    t = ((z - a) * ab.conjugate()).real / abs(ab) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * ab))


def distance_to_limit_set(z: complex) -> float:
    """Distance to the unit circles about -1, 0, 1 and the two vertical chords joining their crossings."""
    d_circ = min(abs(abs(z - c) - 1) for c in (-1, 0, 1))
    d_seg = min(_dist_segment(z, complex(x, -_SQ3), complex(x, _SQ3)) for x in (-0.5, 0.5))
    return min(d_circ, d_seg)


def is_degenerate_family(kind, d: int, q) -> bool:
    """The fourth-kind family with q = -1 collapses to the linear z - 1."""
    return PolyKind(kind) is PolyKind.D and _as_fraction(q) == -1


def circle_distance(kind, d: int, q, m: int = 0) -> float:
    """Largest distance from a zero to the limiting curve of the family.

    Kind B uses the circle |z - 1| = 1 and kind D the circle |z + 1| = 1.
    For kinds A and C the distance to the three-circle-and-chord set is a
    diagnostic only.
    """
    kind = PolyKind(kind)
    rs = roots(build_poly(kind, d, q, m))
    if kind is PolyKind.B:
        return max(abs(abs(z - 1) - 1) for z in rs.roots)
    if kind is PolyKind.D:
        return max(abs(abs(z + 1) - 1) for z in rs.roots)
    return max(distance_to_limit_set(z) for z in rs.roots)
