"""Signed and extremal equilibria on spherical caps around the South Pole.

A negative charge ``q`` sits at ``b = (0, -R)`` with ``R > 1``.  The cap
``Sigma_t`` is the set of sphere points with altitude ``u <= t``.  On the
cap the signed equilibrium is a combination of the balayage of the uniform
measure (``nu``) and of the unit charge at ``b`` (``eps``); ``phi(t)`` is the
constant value of the weighted potential on the cap.  The extremal support
is the cap ``Sigma_{t_c}`` where ``phi`` meets the boundary threshold.

The borderline kernel ``s = d - 2`` (``d >= 3``) gets its own functions: the
balayage there carries a charge spread uniformly over the cap boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import roots_jacobi

from . import config
from .errors import DomainError, SolverFailure
from .potential import ACCURACY_LOSS, RieszParams, potential_sigma, riesz_energy, surface_ratio
from .specfun import gauss_2f1_regularized, inc_beta_reg, ln_gamma


@dataclass(frozen=True)
class CapConfig:
    """Field of a negative charge ``q`` at distance ``R > 1`` below the South Pole."""

    d: int
    s: float
    R: float
    q: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise DomainError(f"d must be an integer >= 2, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        s, R, q = float(self.s), float(self.R), float(self.q)
        if not q < 0:
            raise DomainError(f"the cap problem needs a negative charge, got q={q}")
        if not R > 1 or math.isinf(R):
            raise DomainError(f"the source must lie outside the sphere, got R={R}")
        if s == self.d - 2:
            if self.d < 3:
                raise DomainError("s = d - 2 needs d >= 3 (d = 2 is the log kernel)")
        elif not (self.d - 2 < s < self.d):
            raise DomainError(f"s must satisfy d-2 <= s < d, got s={s}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "q", q)

    @property
    def exceptional(self) -> bool:
        return self.s == self.d - 2

    @property
    def params(self) -> RieszParams:
        return RieszParams(self.d, self.s)

    def r(self, t: float) -> float:
        """Distance from b to the boundary circle of Sigma_t."""
        return math.sqrt(self.R * self.R + 2 * self.R * t + 1)

    def rho(self, xi: float) -> float:
        return self.r(xi)

    def threshold(self, t: float) -> float:
        """q (R-1)^{d-s} / r(t)^d, the value phi must reach for a nonnegative density."""
        return self.q * (self.R - 1) ** (self.d - self.s) / self.r(t) ** self.d


@dataclass
class CapState:
    cfg: CapConfig
    t: float
    phi: float
    nu_norm: float
    eps_norm: float
    boundary_charge: float = 0.0
    is_extremal: bool = False
    flags: list = field(default_factory=list)

    def mass_identity(self) -> float:
        """phi/W * ||nu|| - q * ||eps||, which equals 1 by construction."""
        W = riesz_energy(self.cfg.params)
        return self.phi / W * self.nu_norm - self.cfg.q * self.eps_norm

    def to_dict(self) -> dict:
        c = self.cfg
        return {
            "d": c.d, "s": c.s, "R": c.R, "q": c.q,
            "t": self.t, "phi": self.phi, "nu_norm": self.nu_norm,
            "eps_norm": self.eps_norm, "boundary_charge": self.boundary_charge,
            "is_extremal": self.is_extremal, "flags": list(self.flags),
        }


def _check_t(t, allow_one=False):
    t = float(t)
    hi_ok = t <= 1 if allow_one else t < 1
    if not (-1 < t and hi_ok):
        raise DomainError(f"cap parameter t must lie in (-1, 1{']' if allow_one else ')'}, got {t}")
    return t


def _check_s(d, s, allow_edge=False):
    if allow_edge and s == d - 2 and d >= 3:
        return
    if not (d - 2 < s < d):
        raise DomainError(f"need d-2 < s < d, got d={d}, s={s}")


def _prefactor(d, s):
    # Gamma(d/2) / Gamma(d - s/2)
    return math.exp(ln_gamma(d / 2) - ln_gamma(d - s / 2))


def _norm_constant(d, s):
    # 2^{1-d} Gamma(d) / (Gamma(d - s/2) Gamma(s/2))
    return math.exp((1 - d) * math.log(2) + ln_gamma(d) - ln_gamma(d - s / 2) - ln_gamma(s / 2))


# --------------------------------------------------------------------------
# balayage of the uniform measure

def nu_density(d: int, s: float, t: float, u: float) -> float:
    """Density of the balayage of sigma_d onto Sigma_t, at altitude u < t."""
    _check_s(d, s)
    t = _check_t(t)
    u = float(u)
    if not -1 <= u < t:
        raise DomainError(f"need -1 <= u < t, got u={u}, t={t}")
    x = (t - u) / (1 - u)
    return (_prefactor(d, s) * ((1 - t) / (1 - u)) ** (d / 2) * ((t - u) / (1 - t)) ** ((s - d) / 2)
            * gauss_2f1_regularized(1, d / 2, 1 - (d - s) / 2, x))


def nu_norm(d: int, s: float, t: float) -> float:
    """Total mass 1 - I((1-t)/2; d - s/2, s/2)."""
    _check_s(d, s, allow_edge=True)
    t = _check_t(t, allow_one=True)
    if t == 1:
        return 1.0
    return 1.0 - inc_beta_reg((1 - t) / 2, d - s / 2, s / 2)


def nu_norm_quadrature(d: int, s: float, t: float) -> float:
    """The same mass from the one-dimensional integral over [-1, t]."""
    _check_s(d, s, allow_edge=True)
    t = _check_t(t, allow_one=True)
    tol = config.get()
    v, _ = integrate.quad(lambda u: (1 - u) ** (d - s / 2 - 1), -1, t, weight="alg",
                          wvar=(s / 2 - 1, 0.0), epsabs=tol.quad_atol, epsrel=tol.quad_rtol,
                          limit=tol.quad_limit)
    return _norm_constant(d, s) * v


# --------------------------------------------------------------------------
# balayage of the point charge at b

def eps_density(cfg: CapConfig, t: float, u: float) -> float:
    """Density of the balayage of the unit charge at b onto Sigma_t."""
    d, s, R = cfg.d, cfg.s, cfg.R
    _check_s(d, s)
    t = _check_t(t)
    u = float(u)
    if not -1 <= u < t:
        raise DomainError(f"need -1 <= u < t, got u={u}, t={t}")
    r2 = cfg.r(t) ** 2
    x = (R + 1) ** 2 / r2 * (t - u) / (1 - u)
    W = riesz_energy(cfg.params)
    return (_prefactor(d, s) / W * (R - 1) ** (d - s) / r2 ** (d / 2)
            * ((1 - t) / (1 - u)) ** (d / 2) * ((t - u) / (1 - t)) ** ((s - d) / 2)
            * gauss_2f1_regularized(1, d / 2, 1 - (d - s) / 2, x))


def _eps_integrand(cfg, u):
    d, s, R = cfg.d, cfg.s, cfg.R
    return (1 - u) ** (d - s / 2 - 1) / (R * R + 2 * R * u + 1) ** (d / 2)


def _eps_front(cfg):
    d, s, R = cfg.d, cfg.s, cfg.R
    return _norm_constant(d, s) * (R - 1) ** (d - s) / riesz_energy(RieszParams(d, s))


def eps_norm(cfg: CapConfig, t: float, method: str = "adaptive", nodes: int = 80,
             report: bool = False):
    """Total mass of the balayage of the unit charge at b onto Sigma_t.

    ``method`` is ``"adaptive"`` (QUADPACK with the algebraic end weight) or
    ``"jacobi"`` (fixed Gauss-Jacobi rule on [-1, t]).  With ``report=True``
    a ``(value, flags)`` pair is returned; ``AccuracyLoss`` is flagged when
    the adaptive error estimate exceeds 1e-9.
    """
    d, s = cfg.d, cfg.s
    t = _check_t(t, allow_one=True)
    flags = []
    if method == "adaptive":
        tol = config.get()
        v, err = integrate.quad(lambda u: _eps_integrand(cfg, u), -1, t, weight="alg",
                                wvar=(s / 2 - 1, 0.0), epsabs=tol.quad_atol,
                                epsrel=tol.quad_rtol, limit=tol.quad_limit)
        if err > 1e-9 * max(1.0, abs(v)):
            flags.append(ACCURACY_LOSS)
    elif method == "jacobi":
        # weight (1+x)^{s/2-1} on [-1,1], mapped onto [-1,t]
        x, w = roots_jacobi(nodes, 0.0, s / 2 - 1)
        half = (t + 1) / 2
        u = -1 + half * (x + 1)
        v = half ** (s / 2) * float(np.sum(w * _eps_integrand(cfg, u)))
    else:
        raise DomainError(f"unknown quadrature method {method!r}")
    val = _eps_front(cfg) * v
    return (val, flags) if report else val


def eps_norm_full(cfg: CapConfig) -> float:
    """Mass of the balayage onto the whole sphere, U(R)/W."""
    p = cfg.params
    return potential_sigma(p, cfg.R).value / riesz_energy(p)


# --------------------------------------------------------------------------
# signed equilibrium on the cap

def phi(cfg: CapConfig, t: float) -> float:
    """Constant weighted potential of the signed equilibrium on Sigma_t."""
    return state(cfg, t).phi


def state(cfg: CapConfig, t: float) -> CapState:
    t = _check_t(t, allow_one=True)
    W = riesz_energy(cfg.params)
    nn = nu_norm(cfg.d, cfg.s, t)
    en, flags = eps_norm(cfg, t, report=True)
    ph = W * (1 + cfg.q * en) / nn
    bq = boundary_charge_from(cfg, t, ph) if cfg.exceptional else 0.0
    return CapState(cfg, t, ph, nn, en, bq, False, flags)


def delta(cfg: CapConfig, t: float) -> float:
    """phi(t) minus the boundary threshold; its sign change locates t_c."""
    return phi(cfg, t) - cfg.threshold(t)


def _eta_smooth(cfg: CapConfig, t: float, u: float, phi_t: float) -> float:
    """eta'(u) (t-u)^{(d-s)/2}, finite up to and including u = t."""
    d, s, R, q = cfg.d, cfg.s, cfg.R, cfg.q
    W = riesz_energy(cfg.params)
    r2 = cfg.r(t) ** 2
    x = (t - u) / (1 - u)
    c = 1 - (d - s) / 2
    brace = (phi_t * gauss_2f1_regularized(1, d / 2, c, x)
             - q * (R - 1) ** (d - s) / r2 ** (d / 2) * gauss_2f1_regularized(1, d / 2, c, (R + 1) ** 2 / r2 * x))
    return _prefactor(d, s) / W * ((1 - t) / (1 - u)) ** (d / 2) * (1 - t) ** ((d - s) / 2) * brace


def eta_density(cfg: CapConfig, t: float, u: float, phi_t: float | None = None) -> float:
    """Density of the signed equilibrium on Sigma_t at altitude u < t."""
    if cfg.exceptional:
        return exceptional_density(cfg, t, u, phi_t)
    t = _check_t(t)
    u = float(u)
    if not -1 <= u < t:
        raise DomainError(f"need -1 <= u < t, got u={u}, t={t}")
    if phi_t is None:
        phi_t = phi(cfg, t)
    return _eta_smooth(cfg, t, u, phi_t) * (t - u) ** ((cfg.s - cfg.d) / 2)


def eta_boundary_leading(cfg: CapConfig, t: float, phi_t: float | None = None) -> float:
    """Limit of eta'(u) * ((t-u)/(1-t))^{(d-s)/2} as u -> t from below."""
    d, s = cfg.d, cfg.s
    if phi_t is None:
        phi_t = phi(cfg, t)
    W = riesz_energy(cfg.params)
    g = math.exp(ln_gamma(d / 2) - ln_gamma(d - s / 2) - ln_gamma(1 - (d - s) / 2))
    return g / W * (phi_t - cfg.threshold(t))


def eta_mass(cfg: CapConfig, t: float) -> float:
    """Total charge of the signed equilibrium, by quadrature over Sigma_t."""
    d, s = cfg.d, cfg.s
    t = _check_t(t)
    ph = phi(cfg, t)
    tol = config.get()
    if cfg.exceptional:
        v, _ = integrate.quad(lambda u: exceptional_density(cfg, t, u, ph) * (1 - u) ** (d / 2 - 1),
                              -1, t, weight="alg", wvar=(d / 2 - 1, 0.0),
                              epsabs=tol.quad_atol, epsrel=tol.quad_rtol, limit=tol.quad_limit)
        return surface_ratio(d) * v + boundary_charge_from(cfg, t, ph)
    # the end behaviour (1+u)^{d/2-1} and (t-u)^{(s-d)/2} goes into the weights
    b = (s - d) / 2
    mid = 0.5 * (t - 1)
    quad = lambda f, lo, hi, wv: integrate.quad(f, lo, hi, weight="alg", wvar=wv, epsabs=tol.quad_atol,
                                                epsrel=tol.quad_rtol, limit=tol.quad_limit)[0]
    left = lambda u: eta_density(cfg, t, u, ph) * (1 - u) ** (d / 2 - 1)
    right = lambda u: _eta_smooth(cfg, t, u, ph) * (1 - u * u) ** (d / 2 - 1)
    v = quad(left, -1, mid, (d / 2 - 1, 0.0)) + quad(right, mid, t, (0.0, b))
    return surface_ratio(d) * v


def weighted_potential_outside(cfg: CapConfig, t: float, xi: float, phi_t: float | None = None) -> float:
    """Weighted potential of the signed equilibrium at altitude xi above the cap."""
    d, s, R, q = cfg.d, cfg.s, cfg.R, cfg.q
    if cfg.exceptional:
        return weighted_potential_outside_exceptional(cfg, t, xi, phi_t)
    t = _check_t(t)
    xi = float(xi)
    if not t < xi <= 1:
        raise DomainError(f"need t < xi <= 1, got xi={xi}, t={t}")
    if phi_t is None:
        phi_t = phi(cfg, t)
    y = (xi - t) / (1 + xi)
    a, b = (d - s) / 2, s / 2
    r2 = cfg.r(t) ** 2
    return (phi_t + q / cfg.rho(xi) ** s * inc_beta_reg((R - 1) ** 2 / r2 * y, a, b)
            - phi_t * inc_beta_reg(y, a, b))


def outside_leading(cfg: CapConfig, t: float, phi_t: float | None = None) -> float:
    """Coefficient of ((xi-t)/(1+t))^{(d-s)/2} in the outside potential as xi -> t+."""
    d, s = cfg.d, cfg.s
    if phi_t is None:
        phi_t = phi(cfg, t)
    g = math.exp(ln_gamma(d / 2) - ln_gamma(1 + (d - s) / 2) - ln_gamma(s / 2))
    return g * (cfg.threshold(t) - phi_t)


# --------------------------------------------------------------------------
# critical cap

def _scan_grid(n=400):
    return np.linspace(-1 + 1e-6, 1 - 1e-6, n)


def solve_tc(cfg: CapConfig) -> CapState:
    """Critical cap parameter t_c and the extremal state there."""
    xs = _scan_grid()
    vals = [delta(cfg, x) for x in xs]
    table = list(zip(xs.tolist(), vals))
    changes = [i for i in range(len(vals) - 1) if vals[i] > 0 >= vals[i + 1]]
    if not changes:
        if all(v > 0 for v in vals):
            st = state(cfg, 1.0)
            st.is_extremal = True
            return st
        raise SolverFailure("threshold difference has no + to - sign change", table)
    if len(changes) > 1:
        raise SolverFailure("threshold difference changes sign more than once", table)
    i = changes[0]
    a, b = xs[i], xs[i + 1]
    fa = vals[i]
    xtol = config.get().root_xtol
    while b - a > xtol:
        mid = 0.5 * (a + b)
        fm = delta(cfg, mid)
        if fm > 0:
            a, fa = mid, fm
        else:
            b = mid
    tc = 0.5 * (a + b)
    st = state(cfg, tc)
    st.is_extremal = True
    return st


# --------------------------------------------------------------------------
# s = d - 2

def _require_exceptional(cfg):
    if not cfg.exceptional:
        raise DomainError("this function is for s = d - 2")


def exceptional_density(cfg: CapConfig, t: float, u: float, phi_t: float | None = None) -> float:
    """Absolutely continuous part of the signed equilibrium for s = d - 2."""
    _require_exceptional(cfg)
    t = _check_t(t)
    u = float(u)
    if not -1 <= u <= t:
        raise DomainError(f"need -1 <= u <= t, got u={u}, t={t}")
    d, R, q = cfg.d, cfg.R, cfg.q
    if phi_t is None:
        phi_t = phi(cfg, t)
    W = riesz_energy(cfg.params)
    return phi_t / W - q / W * (R * R - 1) ** 2 / (R * R + 2 * R * u + 1) ** (d / 2 + 1)


def boundary_charge_from(cfg: CapConfig, t: float, phi_t: float) -> float:
    d = cfg.d
    return (1 - t) / 2 * (1 - t * t) ** (d / 2 - 1) * (phi_t - cfg.threshold(t))


def boundary_charge(cfg: CapConfig, t: float) -> float:
    """Charge spread uniformly over the boundary circle of Sigma_t (s = d - 2)."""
    _require_exceptional(cfg)
    t = _check_t(t)
    return boundary_charge_from(cfg, t, phi(cfg, t))


def exceptional_state(cfg: CapConfig, t: float) -> CapState:
    _require_exceptional(cfg)
    return state(cfg, t)


def exceptional_norms_limit(cfg: CapConfig, t: float, steps=(1e-6, 1e-9)) -> tuple[float, float]:
    """Norms at s = d - 2 as a two-point Richardson limit from s > d - 2."""
    d, R, q = cfg.d, cfg.R, cfg.q
    h1, h2 = steps

    def norms(h):
        c = CapConfig(d, d - 2 + h, R, q)
        return nu_norm(d, d - 2 + h, t), eps_norm(c, t)

    n1, e1 = norms(h1)
    n2, e2 = norms(h2)
    lim = lambda f1, f2: (h1 * f2 - h2 * f1) / (h1 - h2)
    return lim(n1, n2), lim(e1, e2)


def extremal_exceptional_density(cfg: CapConfig, tc: float, u: float, phi_tc: float | None = None) -> float:
    """Density of the extremal measure for s = d - 2 written through phi(t_c) alone."""
    _require_exceptional(cfg)
    d, R = cfg.d, cfg.R
    if phi_tc is None:
        phi_tc = phi(cfg, tc)
    W = riesz_energy(cfg.params)
    return phi_tc / W * (1 - (R + 1) ** 2 * cfg.r(tc) ** d / (R * R + 2 * R * u + 1) ** (d / 2 + 1))


def weighted_potential_outside_exceptional(cfg: CapConfig, t: float, xi: float,
                                           phi_t: float | None = None) -> float:
    """Weighted potential above the cap for s = d - 2.

    Near the boundary it behaves like phi + (xi-t)/(1+t) (d-2)/2 [threshold - phi].
    """
    _require_exceptional(cfg)
    t = _check_t(t)
    xi = float(xi)
    if not t < xi <= 1:
        raise DomainError(f"need t < xi <= 1, got xi={xi}, t={t}")
    d, R, q = cfg.d, cfg.R, cfg.q
    if phi_t is None:
        phi_t = phi(cfg, t)
    y = (xi - t) / (1 + xi)
    r2 = cfg.r(t) ** 2
    e = d / 2 - 1
    # the s -> d-2 limit of the general formula, I(x; 1, b) = 1 - (1-x)^b
    return (phi_t + q / cfg.rho(xi) ** (d - 2) * (1 - (1 - (R - 1) ** 2 / r2 * y) ** e)
            - phi_t * (1 - (1 - y) ** e))


def solve_tc_exceptional(cfg: CapConfig) -> CapState:
    _require_exceptional(cfg)
    return solve_tc(cfg)
