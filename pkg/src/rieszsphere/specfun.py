"""Special functions on the real line.

Gauss hypergeometric function (plain and regularized), the regularized
incomplete beta function, log-gamma/digamma and the complete elliptic
integrals.  Everything works in double precision; extended precision is
used only by the test oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import config
from .errors import DomainError, NoConvergence, PoleAtC

__all__ = [
    "HyperParams",
    "gauss_2f1",
    "gauss_2f1_regularized",
    "inc_beta_reg",
    "digamma",
    "ln_gamma",
    "rgamma",
    "elliptic_K",
    "elliptic_E",
]

# Distance of c - a - b from an integer below which the generic connection
# formula is abandoned in favour of stepping the hypergeometric ODE.
_NEAR_INT = 1e-3
_DBL_EPS = 2.220446049250313e-16
# Cancellation factor between connection terms that triggers the same fallback.
_CANCEL = 100.0


@dataclass(frozen=True)
class HyperParams:
    a: float
    b: float
    c: float
    z: float


_TINY_PARAM = 1e-150


def _unpack(p, b, c, z):
    if isinstance(p, HyperParams):
        a, b, c, z = float(p.a), float(p.b), float(p.c), float(p.z)
    else:
        if b is None or c is None or z is None:
            raise TypeError("expected HyperParams or four numbers a, b, c, z")
        a, b, c, z = float(p), float(b), float(c), float(z)
    # an upper parameter this small only moves the value by O(a), far below
    # double resolution, but it breaks the connection formulas; snap it to 0
    a = 0.0 if abs(a) < _TINY_PARAM else a
    b = 0.0 if abs(b) < _TINY_PARAM else b
    return a, b, c, z


def _nonpos_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _nonpos_int(x):
        return 0.0
    if x > 170.0:
        return math.exp(-math.lgamma(x))
    if abs(x) < 1e-100:
        # Gamma(x) itself overflows near the origin
        return x / math.gamma(1.0 + x)
    g = math.gamma(x)
    return 1.0 / g


def ln_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


# Bernoulli numbers B_2 .. B_14 for the digamma asymptotic series.
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)


def _digamma_pos(x: float) -> float:
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    p = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        tail += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - tail


def _digamma_any(x: float) -> float:
    if _nonpos_int(x):
        raise DomainError(f"digamma has a pole at {x}")
    if x > 0:
        return _digamma_pos(x)
    # reflection
    return _digamma_pos(1.0 - x) - math.pi / math.tan(math.pi * x)


def digamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"digamma requires x > 0, got {x}")
    return _digamma_pos(x)


# --------------------------------------------------------------------------
# hypergeometric series

def _tol():
    t = config.get()
    return t.series_rtol, t.series_max_terms


def _terminating_index(a: float, b: float):
    """Number of the last nonzero term if the series terminates, else None."""
    ns = [int(-x) for x in (a, b) if _nonpos_int(x)]
    return min(ns) if ns else None


def _settle_index(a, b, c):
    """First index past which the term ratio no longer changes sign or spikes.

    Before it a run of tiny terms can be followed by large ones, so the
    stopping rule is not allowed to fire.
    """
    return max(0, math.ceil(-a) + 1, math.ceil(-b) + 1, math.ceil(-c) + 1)


def _series_reg(a, b, c, z, nmax=None, with_mag=False):
    """Sum of (a)_n (b)_n z^n / (n! Gamma(c+n)), optionally truncated at nmax."""
    rtol, max_terms = _tol()
    # index from which the ratio recurrence for 1/Gamma(c+n) is stable
    n_safe = 0 if c >= 1 else int(math.ceil(1 - c))
    poch = 1.0  # (a)_n (b)_n z^n / n!
    rg = rgamma(c) if n_safe == 0 else None
    total = []
    run = 0.0
    small = 0
    limit = max_terms if nmax is None else nmax + 1
    n_min = _settle_index(a, b, c)
    for n in range(limit):
        if n < n_safe:
            rg_n = rgamma(c + n)
        else:
            if rg is None:
                rg = rgamma(c + n)
            rg_n = rg
        term = poch * rg_n
        total.append(term)
        run += term
        if nmax is None and n > 0:
            s = run
            ratio = abs((a + n) * (b + n) * z / ((n + 1) * (c + n))) if c + n != 0 else math.inf
            if abs(term) <= rtol * abs(s) and ratio < 1.0 and n >= n_min:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        poch *= (a + n) * (b + n) * z / (n + 1)
        if n >= n_safe and rg is not None:
            rg = rg / (c + n)
        if poch == 0.0:
            break
    if nmax is None and small < 3 and poch != 0.0:
        raise NoConvergence(f"2F1 series did not converge in {max_terms} terms (z={z})")
    if with_mag:
        return math.fsum(total), math.fsum(abs(x) for x in total)
    return math.fsum(total)


def _terminating_exact(a, b, c, z, nmax, regularized=False):
    """Finite sum in rational arithmetic; floats convert to Fractions exactly."""
    fa, fb, fc, fz = (Fraction(x) for x in (a, b, c, z))
    term = Fraction(1)
    total = Fraction(1)
    for n in range(nmax):
        term = term * (fa + n) * (fb + n) / ((fc + n) * (n + 1)) * fz
        total += term
    out = float(total)
    return out * rgamma(c) if regularized else out


def _series_plain(a, b, c, z, nmax=None):
    if nmax is not None:
        return _terminating_exact(a, b, c, z, nmax)
    rtol, max_terms = _tol()
    term = 1.0
    total = [1.0]
    run = 1.0
    small = 0
    limit = max_terms if nmax is None else nmax
    n_min = _settle_index(a, b, c)
    for n in range(limit):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total.append(term)
        if term == 0.0:
            break
        run += term
        if nmax is None:
            s = run
            ratio = abs((a + n + 1) * (b + n + 1) * z / ((n + 2) * (c + n + 1)))
            if abs(term) <= rtol * abs(s) and ratio < 1.0 and n >= n_min:
                small += 1
                if small >= 3:
                    return math.fsum(total)
            else:
                small = 0
    else:
        if nmax is None:
            raise NoConvergence(f"2F1 series did not converge in {max_terms} terms (z={z})")
    return math.fsum(total)


def _poch(x, n):
    p = 1.0
    for k in range(n):
        p *= x + k
    return p


def _reg_shift_nonpos_c(a, b, k, z):
    """Regularized 2F1 at c = -k via the shifted series.

    The (k+1)! of the shifted lower parameter is absorbed by regularizing
    the shifted function, so it must not appear in the prefactor.
    """
    pre = _poch(a, k + 1) * _poch(b, k + 1) * z ** (k + 1)
    if pre == 0.0:
        return 0.0
    return pre * _reg_core(a + k + 1, b + k + 1, k + 2, z)


def _log_sum_1311(a, b, m, w, lw):
    """Infinite sum appearing in the degenerate connection formulas.

    Sum over n of (a)_n (b)_n / (n! (n+m)!) w^n [lw - psi(n+1) - psi(n+m+1)
    + psi(a+n) + psi(b+n)].  Also returns the sum of absolute terms.
    """
    rtol, max_terms = _tol()
    coef = 1.0 / math.factorial(m)
    total = []
    run = 0.0
    mag = 0.0
    small = 0
    for n in range(max_terms):
        bracket = (lw - _digamma_pos(n + 1.0) - _digamma_pos(n + m + 1.0)
                   + _digamma_any(a + n) + _digamma_any(b + n))
        term = coef * bracket
        total.append(term)
        run += term
        mag += abs(term)
        if n > 0 and abs(term) <= rtol * max(abs(run), 1e-300):
            small += 1
            if small >= 3:
                return math.fsum(total), mag
        else:
            small = 0
        coef *= (a + n) * (b + n) * w / ((n + 1) * (n + m + 1))
        if coef == 0.0:
            return math.fsum(total), mag
    raise NoConvergence("logarithmic connection series did not converge")


def _reg_one_minus_z(a, b, c, z):
    """Regularized 2F1 for z in (z_switch, 1) via the 1 - z connection.

    When the two connection terms cancel heavily the value is instead
    continued from z = 1/2 along the real axis by the ODE.
    """
    e = c - a - b
    if abs(e - round(e)) < _NEAR_INT and e != round(e):
        return _reg_ode_step(a, b, c, z)
    t1, t2, mag = _connection_terms(a, b, c, z)
    v = t1 + t2
    if mag > _CANCEL * abs(v):
        return _reg_ode_step(a, b, c, z)
    return v


def _connection_terms(a, b, c, z):
    w = 1.0 - z
    e = c - a - b
    m = round(e)
    if e == m:
        lw = math.log(w)
        if m == 0:
            # c = a + b
            pre = rgamma(a) * rgamma(b)
            sm, mag = _log_sum_1311(a, b, 0, w, lw)
            return -pre * sm, 0.0, abs(pre) * mag
        if m > 0:
            # c = a + b + m
            head = 0.0
            coef = 1.0
            for n in range(m):
                head += coef * w ** n
                if n < m - 1:
                    coef *= (a + n) * (b + n) / ((n + 1) * (1 - m + n))
            head *= math.gamma(m) * rgamma(a + m) * rgamma(b + m)
            pre = rgamma(a) * rgamma(b)
            tail = mag = 0.0
            if pre != 0.0:
                sm, mag = _log_sum_1311(a + m, b + m, m, w, lw)
                tail = pre * (-w) ** m * sm
                mag *= abs(pre) * w ** m
            return head, -tail, abs(head) + mag
        # c = a + b - m with m > 0
        m = -m
        head = 0.0
        coef = 1.0
        for n in range(m):
            head += coef * w ** n
            if n < m - 1:
                coef *= (a - m + n) * (b - m + n) / ((n + 1) * (1 - m + n))
        head *= math.gamma(m) * rgamma(a) * rgamma(b) * w ** (-m)
        pre = rgamma(a - m) * rgamma(b - m)
        tail = mag = 0.0
        if pre != 0.0:
            sm, mag = _log_sum_1311(a, b, m, w, lw)
            tail = (-1) ** m * pre * sm
            mag *= abs(pre)
        return head, -tail, abs(head) + mag
    s = math.pi / math.sin(math.pi * e)
    t1 = rgamma(c - a) * rgamma(c - b)
    t2 = rgamma(a) * rgamma(b)
    v1 = v2 = mag = 0.0
    if t1 != 0.0:
        f, fm = _reg_core_mag(a, b, a + b - c + 1, w)
        v1 = s * t1 * f
        mag += abs(s * t1) * fm
    if t2 != 0.0:
        f, fm = _reg_core_mag(c - a, c - b, e + 1, w)
        v2 = -s * t2 * w ** e * f
        mag += abs(s * t2 * w ** e) * fm
    return v1, v2, mag


def _reg_core_mag(a, b, c, z):
    """Regularized 2F1 together with the sum of absolute series terms."""
    if 0.0 < z <= config.get().z_switch and _terminating_index(a, b) is None and not _nonpos_int(c):
        return _series_reg(a, b, c, z, with_mag=True)
    v = _reg_core(a, b, c, z)
    return v, abs(v)


def _reg_ode_step(a, b, c, z):
    """Continue the regularized 2F1 from 1/2 to z by Taylor steps of the ODE."""
    rtol, max_terms = _tol()
    z0 = 0.5
    f = _reg_core(a, b, c, z0)
    fp = a * b * _reg_core(a + 1, b + 1, c + 1, z0)
    ab = a * b
    s1 = a + b + 1
    while z0 < z:
        step = min(z - z0, 0.5 * (1.0 - z0))
        p0 = z0 * (1 - z0)
        p1 = 1 - 2 * z0
        q0 = c - s1 * z0
        ak = [f, fp]
        val = f + fp * step
        der = fp
        hk = step
        small = 0
        for k in range(max_terms):
            nxt = -((p1 * k + q0) * (k + 1) * ak[-1] + (-k * (k - 1) - s1 * k - ab) * ak[-2]) / (
                p0 * (k + 2) * (k + 1))
            ak.append(nxt)
            der += (k + 2) * nxt * hk
            hk *= step
            term = nxt * hk
            val += term
            if abs(term) <= rtol * abs(val) and abs((k + 2) * nxt * hk / step) <= rtol * abs(der) + 1e-300:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
        else:
            raise NoConvergence("ODE continuation of 2F1 did not converge")
        f, fp = val, der
        z0 += step
    return f


def _reg_core(a, b, c, z):
    """Regularized 2F1 for non-terminating or terminating parameters."""
    n_term = _terminating_index(a, b)
    if _nonpos_int(c):
        return _reg_shift_nonpos_c(a, b, int(-c), z)
    if n_term is not None:
        return _terminating_exact(a, b, c, z, n_term, regularized=True)
    if z == 0.0:
        return rgamma(c)
    zs = config.get().z_switch
    if z < -zs:
        # Pfaff transformation maps z < -1/2 into (1/3, 1)
        w = z / (z - 1.0)
        return (1.0 - z) ** (-a) * _reg_core(a, c - b, c, w)
    if z <= zs:
        return _series_reg(a, b, c, z)
    if z < 1.0:
        return _reg_one_minus_z(a, b, c, z)
    if z == 1.0:
        e = c - a - b
        if e <= 0:
            raise NoConvergence(f"2F1 diverges at z=1 when c-a-b={e} <= 0")
        return math.gamma(e) * rgamma(c - a) * rgamma(c - b)
    raise NoConvergence(f"2F1 requires z <= 1 for real evaluation, got {z}")


def gauss_2f1_regularized(p, b=None, c=None, z=None) -> float:
    """Regularized Gauss hypergeometric function 2F1(a,b;c;z)/Gamma(c).

    Accepts a :class:`HyperParams` or four numbers.  Finite for every real c.
    """
    a, b, c, z = _unpack(p, b, c, z)
    if z == 0.0:
        return rgamma(c)
    return _reg_core(a, b, c, z)


def gauss_2f1(p, b=None, c=None, z=None) -> float:
    """Gauss hypergeometric function 2F1(a,b;c;z) for real z <= 1."""
    a, b, c, z = _unpack(p, b, c, z)
    n_term = _terminating_index(a, b)
    if _nonpos_int(c):
        k = int(-c)
        if n_term is None or n_term > k:
            raise PoleAtC(f"c={c} is a pole of the series")
    if z == 0.0:
        return 1.0
    if n_term is not None:
        return _series_plain(a, b, c, z, nmax=n_term)
    if z < 0:
        return _pfaff_plain(a, b, c, z)
    if z <= config.get().z_switch:
        return _series_plain(a, b, c, z)
    if z > 1.0:
        raise NoConvergence(f"2F1 requires z <= 1 for real evaluation, got {z}")
    if z == 1.0:
        e = c - a - b
        if e <= 0:
            raise NoConvergence(f"2F1 diverges at z=1 when c-a-b={e} <= 0")
        return math.exp(math.lgamma(c) + math.lgamma(e) - math.lgamma(c - a) - math.lgamma(c - b)) \
            * _gamma_sign(c) * _gamma_sign(e) * _gamma_sign(c - a) * _gamma_sign(c - b)
    if c > 170.0:
        # Gamma(c) overflows; the regularized route is unusable here.
        return _series_plain(a, b, c, z)
    return math.gamma(c) * _reg_one_minus_z(a, b, c, z)


def _pfaff_plain(a, b, c, z):
    # Of the two Pfaff forms prefer the one whose upper parameters are both
    # non-negative: its series in z/(z-1) > 0 then has terms of one sign.
    w = z / (z - 1.0)
    if not (a >= 0 and c - b >= 0) and (b >= 0 and c - a >= 0):
        a, b = b, a
    return (1.0 - z) ** (-a) * gauss_2f1(a, c - b, c, w)


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    return -1.0 if math.floor(x) % 2 else 1.0


# --------------------------------------------------------------------------
# incomplete beta

def _betacf(x: float, a: float, b: float) -> float:
    tiny = 1e-300
    eps = 1e-16
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise NoConvergence("incomplete beta continued fraction did not converge")


def inc_beta_reg(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta function I(x; a, b)."""
    if not (0.0 <= x <= 1.0) or not a > 0 or not b > 0:
        raise DomainError(f"inc_beta_reg needs x in [0,1], a,b > 0; got x={x}, a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    if x > a / (a + b):
        return 1.0 - inc_beta_reg(1.0 - x, b, a)
    lnfront = (a * math.log(x) + b * math.log1p(-x)
               + math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b))
    return math.exp(lnfront) * _betacf(x, a, b) / a


# --------------------------------------------------------------------------
# elliptic integrals

def elliptic_K(m: float) -> float:
    """Complete elliptic integral of the first kind, parameter m = k^2."""
    if not (0.0 <= m < 1.0):
        raise DomainError(f"elliptic_K needs 0 <= m < 1, got {m}")
    a, b = 1.0, math.sqrt(1.0 - m)
    for _ in range(60):
        if abs(a - b) <= 4 * _DBL_EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def elliptic_E(m: float) -> float:
    """Complete elliptic integral of the second kind, parameter m = k^2."""
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"elliptic_E needs 0 <= m <= 1, got {m}")
    if m == 1.0:
        return 1.0
    a, b = 1.0, math.sqrt(1.0 - m)
    acc = 0.5 * m  # 2^{n-1} c_n^2 with c_0^2 = m
    pw = 0.5
    for _ in range(60):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        pw *= 2.0
        inc = pw * c * c
        acc += inc
        if inc <= _DBL_EPS * 1e-2 * acc and abs(a - b) <= 4 * _DBL_EPS * a:
            break
    return math.pi / (2.0 * a) * (1.0 - acc)
