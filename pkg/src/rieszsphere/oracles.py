"""Independent double-quadrature oracles on S^2.

These evaluate the weighted potential of a signed equilibrium by brute-force
integration over the sphere (altitude, then the angle on each parallel
(d-1)-sphere), without using any of
the hypergeometric identities the main modules rely on.  They are slow and
exist only to validate the closed forms.
"""
from __future__ import annotations

import math

from scipy import integrate

from .cap_equilibrium import CapConfig, _eta_smooth, phi
from .errors import DomainError
from .potential import surface_ratio
from .sphere_equilibrium import FieldConfig, signed_density

_OPTS = dict(epsabs=1e-12, epsrel=1e-10, limit=400)


def azimuthal_mean(s: float, u: float, xi: float, d: int = 2) -> float:
    """Mean of |x - z|^{-s} over the (d-1)-sphere of altitude u, for z at altitude xi on S^d."""
    al, be = math.acos(u), math.acos(xi)
    # |x - z|^2 = 4 sin^2((al-be)/2) + 4 sin(al) sin(be) sin^2(th/2), free of cancellation
    gap = 4 * math.sin((al - be) / 2) ** 2
    cross = 4 * math.sin(al) * math.sin(be)
    k = d - 2
    f = lambda th: (gap + cross * math.sin(th / 2) ** 2) ** (-s / 2) * math.sin(th) ** k
    scale = abs(al - be)
    pts = [c * scale for c in (1.0, 10.0, 100.0) if 0 < c * scale < math.pi]
    v, _ = integrate.quad(f, 0.0, math.pi, points=pts or None, **_OPTS)
    # int_0^pi sin^k = sqrt(pi) Gamma((k+1)/2) / Gamma(k/2 + 1)
    norm = math.sqrt(math.pi) * math.exp(math.lgamma((k + 1) / 2) - math.lgamma(k / 2 + 1))
    return v / norm


def _outer(f, lo, hi, xi, **kw):
    """Integrate over [lo, hi], splitting at the altitude of the field point."""
    pieces = [lo, hi]
    if lo < xi < hi:
        pieces = [lo, xi, hi]
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        v, _ = integrate.quad(f, a, b, **_OPTS, **kw)
        total += v
    return total


def sphere_weighted_potential(cfg: FieldConfig, xi: float) -> float:
    """U^eta(z) + Q(z) at altitude xi for the whole-sphere signed equilibrium."""
    if cfg.params.is_log:
        raise DomainError("the double-quadrature oracle is implemented for Riesz kernels")
    d, s, q, R = cfg.d, cfg.s, cfg.q, cfg.R
    c = surface_ratio(d)
    # d sigma_d = c (1-u^2)^{d/2-1} du x (normalized mean over the (d-1)-sphere)
    f = lambda u: c * (1 - u * u) ** (d / 2 - 1) * signed_density(cfg, u) * azimuthal_mean(s, u, xi, d)
    field = q / (R * R - 2 * R * xi + 1) ** (s / 2)
    return _outer(f, -1.0, 1.0, xi) + field


def cap_weighted_potential(cfg: CapConfig, t: float, xi: float, phi_t: float | None = None) -> float:
    """U^{eta_t}(z) + Q(z) at altitude xi for the signed equilibrium on Sigma_t (non-exceptional s)."""
    if cfg.exceptional:
        raise DomainError("the cap oracle covers d-2 < s < d")
    d, s, q, R = cfg.d, cfg.s, cfg.q, cfg.R
    if phi_t is None:
        phi_t = phi(cfg, t)
    c = surface_ratio(d)
    b = (s - d) / 2
    field = q / (R * R + 2 * R * xi + 1) ** (s / 2)
    # density = smooth(u) (t-u)^b; put the end singularity into the weight
    g = lambda u: c * (1 - u * u) ** (d / 2 - 1) * _eta_smooth(cfg, t, u, phi_t) * azimuthal_mean(s, u, xi, d)
    if xi < t:
        # the weighted rule samples its end points, so keep it away from u = xi
        mid = 0.5 * (xi + t)
        v1 = _outer(lambda u: g(u) * (t - u) ** b, -1.0, mid, xi)
        v2, _ = integrate.quad(g, mid, t, weight="alg", wvar=(0.0, b), **_OPTS)
        return v1 + v2 + field
    v, _ = integrate.quad(g, -1.0, t, weight="alg", wvar=(0.0, b), **_OPTS)
    return v + field
