import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from rieszsphere.errors import DomainError, KindMismatch
from rieszsphere.oracles import sphere_weighted_potential
from rieszsphere.potential import LOG, RieszParams, potential_sigma, riesz_energy, surface_ratio
from rieszsphere.sphere_equilibrium import (CriticalKind, FieldConfig, Kind, NoSolution, characteristic_f,
                                            connect_fields, critical_distance, critical_distance_log,
                                            gonchar_function, gonchar_value, inversion_map, pole_density,
                                            pole_density_from_gonchar, signed_density, signed_density_log,
                                            superharmonic_minimizer, weighted_potential_constant)

PHI = (1 + math.sqrt(5)) / 2


def cfg(d, s, q, R):
    return FieldConfig(RieszParams(d, s), q, R)


def total_mass(c):
    d = c.d
    dens = signed_density_log if c.params.is_log else signed_density
    f = lambda u: (1 - u * u) ** (d / 2 - 1) * dens(c, u)
    pts = [max(-1.0, min(1.0, (c.R * c.R + 1) / (2 * c.R)))] if c.R > 0 else None
    v, _ = integrate.quad(f, -1, 1, points=pts, epsabs=1e-13, epsrel=1e-12, limit=400)
    return surface_ratio(d) * v


# -- field configuration -----------------------------------------------------

def test_field_config_validation():
    with pytest.raises(DomainError):
        cfg(2, 1, 0.0, 2)
    with pytest.raises(DomainError):
        cfg(2, 1, 1.0, 1.0)
    with pytest.raises(DomainError):
        cfg(2, 1, 1.0, -0.5)
    assert cfg(3, 1, 1, 0.5).side == "interior"
    assert cfg(3, 1, 1, 2.0).side == "exterior"


# -- densities ---------------------------------------------------------------

def test_density_vanishes_at_golden_distance():
    assert signed_density(cfg(2, 1, 1, 1 + PHI), 1.0) == pytest.approx(0.0, abs=1e-10)


def test_density_small_charge_near_uniform():
    c = cfg(3, 1.5, 1e-12, 2.0)
    assert all(signed_density(c, u) == pytest.approx(1.0, abs=1e-10) for u in (-1, 0, 1))
    c = cfg(3, LOG, 1e-12, 2.0)
    assert all(signed_density_log(c, u) == pytest.approx(1.0, abs=1e-10) for u in (-1, 0, 1))


def test_density_domain():
    with pytest.raises(DomainError):
        signed_density(cfg(2, 1, 1, 2), 1.5)


def test_log_density_zero_at_closed_form_radius():
    a = math.sqrt(2)
    assert signed_density_log(cfg(2, LOG, 1, (a + 1) / (a - 1)), 1.0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("q,R", [(1.0, 2.0), (-0.5, 3.0), (2.0, 0.5), (-3.0, 0.4)])
def test_log_density_is_riesz_limit(q, R):
    a, b = cfg(3, 1e-6, q, R), cfg(3, LOG, q, R)
    for u in np.linspace(-1, 1, 7):
        assert signed_density(a, u) == pytest.approx(signed_density_log(b, u), abs=1e-4)


def test_weighted_potential_constancy_d3():
    c = cfg(3, 1.5, 2.0, 3.0)
    w = weighted_potential_constant(c)
    assert w == pytest.approx(riesz_energy(c.params) + 2.0 * potential_sigma(c.params, 3.0).value)
    for xi in (-0.9, -0.3, 0.0, 0.4, 0.95):
        assert sphere_weighted_potential(c, xi) == pytest.approx(w, rel=1e-6)


@pytest.mark.parametrize("d,s,q,R", [(2, 1.5, -0.8, 3.0), (2, 1.0, 2.0, 0.5), (2, 0.6, 0.7, 1.8)])
def test_weighted_potential_constancy_d2_seven_altitudes(d, s, q, R):
    c = cfg(d, s, q, R)
    w = weighted_potential_constant(c)
    vals = [sphere_weighted_potential(c, xi) for xi in np.linspace(-0.9, 0.9, 7)]
    assert max(vals) - min(vals) <= 1e-6 * abs(w)
    assert np.mean(vals) == pytest.approx(w, rel=1e-6)


def random_configs(n, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = int(rng.integers(2, 7))
        s = float(rng.uniform(0.1, 0.95) * d)
        q = float(rng.choice([-1, 1]) * rng.uniform(0.1, 5))
        R = float(rng.uniform(0.05, 0.9) if rng.random() < 0.5 else rng.uniform(1.1, 5))
        out.append(cfg(d, s, q, R))
    return out


@pytest.mark.parametrize("c", random_configs(30), ids=lambda c: f"d{c.d}-s{c.s:.2f}-q{c.q:.2f}-R{c.R:.2f}")
def test_total_mass_is_one(c):
    assert total_mass(c) == pytest.approx(1.0, abs=1e-9)


def test_total_mass_log():
    for q, R in ((1.0, 2.0), (-2.0, 0.3)):
        assert total_mass(cfg(3, LOG, q, R)) == pytest.approx(1.0, abs=1e-9)


# -- poles -------------------------------------------------------------------

def test_pole_values_harmonic():
    north, south = pole_density(cfg(2, 1, 1, 2))
    assert north == pytest.approx(-1.5, rel=1e-14)
    assert south == pytest.approx(1 + 0.5 - 1 / 9, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 0.95), st.floats(-5, 5).filter(lambda q: abs(q) > 1e-3),
       st.one_of(st.floats(0.05, 0.95), st.floats(1.05, 6)))
def test_pole_is_minimum_of_density(d, frac, q, R):
    c = cfg(d, frac * d, q, R)
    north, south = pole_density(c)
    grid = [signed_density(c, u) for u in np.linspace(-1, 1, 41)]
    if q > 0:
        assert north <= south
        assert north == pytest.approx(min(grid), rel=1e-12, abs=1e-12)
    else:
        assert south <= north
        assert south == pytest.approx(min(grid), rel=1e-12, abs=1e-12)


# -- Gonchar functions -------------------------------------------------------

def test_gonchar_zeros():
    assert gonchar_function(Kind.FIRST, cfg(2, 1, 1, 1 + PHI)) == pytest.approx(0.0, abs=1e-12)
    R = 1 - (math.sqrt(17) - 1) / 4
    assert gonchar_function(Kind.SECOND, cfg(2, 1, 1, R)) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_fourth_kind_harmonic_unit_charge_is_linear(d):
    vals = [gonchar_value(Kind.FOURTH, d, d - 1, -1.0, R) / (R - 1) for R in (0.1, 0.3, 0.6, 0.9)]
    assert np.allclose(vals, vals[0], rtol=1e-12)


def test_gonchar_kind_mismatch():
    with pytest.raises(KindMismatch):
        gonchar_function(Kind.FIRST, cfg(2, 1, -1, 2.0))
    with pytest.raises(KindMismatch):
        gonchar_function(Kind.FOURTH, cfg(2, 1, -1, 2.0))
    with pytest.raises(DomainError):
        gonchar_function(Kind.FIRST, cfg(2, LOG, 1, 2.0))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 0.95), st.floats(0.1, 5), st.sampled_from([-1, 1]),
       st.one_of(st.floats(0.05, 0.95), st.floats(1.05, 6)))
def test_pole_density_from_gonchar(d, frac, mag, sign, R):
    c = cfg(d, frac * d, sign * mag, R)
    kind = {(True, True): Kind.FIRST, (True, False): Kind.SECOND,
            (False, True): Kind.THIRD, (False, False): Kind.FOURTH}[(sign > 0, R > 1)]
    north, south = pole_density(c)
    want = north if sign > 0 else south
    assert pole_density_from_gonchar(kind, c) == pytest.approx(want, rel=1e-9, abs=1e-9)


# -- critical distances ------------------------------------------------------

def test_golden_ratio():
    res = critical_distance(RieszParams(2, 1), 1, "exterior")
    assert res.kind == CriticalKind.ONE
    assert res.distances()[0] == pytest.approx(1.6180339887499, abs=1e-10)


def test_plastic_constant():
    res = critical_distance(RieszParams(4, 3), 1, "exterior")
    assert res.distances()[0] == pytest.approx(1.3247179572, abs=1e-9)


def test_interior_harmonic():
    res = critical_distance(RieszParams(2, 1), 1, "interior")
    assert res.distances()[0] == pytest.approx((math.sqrt(17) - 1) / 4, abs=1e-12)


def test_superharmonic_minimizer():
    r_star, f_star = superharmonic_minimizer(RieszParams(4, 1))
    assert r_star == pytest.approx(0.507122392, abs=1e-6)
    for R in (0.2, 0.4, 0.5, 0.52, 0.7, 0.9):
        assert characteristic_f(RieszParams(4, 1), R) >= f_star


def test_weak_negative_exterior_has_no_critical_distance():
    assert critical_distance(RieszParams(2, 1.5), -0.5, "exterior").kind == CriticalKind.NONE


@pytest.mark.parametrize("q,kind", [(-0.5, CriticalKind.NONE), (-0.9, CriticalKind.TWO),
                                    (-1.0, CriticalKind.ONE), (-2.0, CriticalKind.ONE)])
def test_superharmonic_interior_classification(q, kind):
    res = critical_distance(RieszParams(4, 1), q, "interior")
    assert res.kind == kind
    assert res.q_star == pytest.approx(-0.86453, abs=1e-5)


def test_degenerate_at_threshold():
    p = RieszParams(4, 1)
    q_star = critical_distance(p, -0.5, "interior").q_star
    res = critical_distance(p, q_star, "interior")
    assert res.kind == CriticalKind.DEGENERATE
    assert res.radii[0] == pytest.approx(0.507122392, abs=1e-6)


def test_q_minus_one_boundary_note():
    assert "boundary" in critical_distance(RieszParams(4, 1), -1.0, "interior").notes


@pytest.mark.parametrize("d,s,q,side", [
    (2, 1, 1, "exterior"), (3, 1.5, 2, "exterior"), (4, 3.5, 0.3, "exterior"), (3, 1.5, 2, "interior"),
    (5, 2, 1, "interior"), (2, 1.5, -3, "exterior"), (3, 2.5, -2, "interior"), (3, 2, -4, "interior"),
])
def test_criticality_and_admissible_side(d, s, q, side):
    p = RieszParams(d, s)
    res = critical_distance(p, q, side)
    assert res.kind == CriticalKind.ONE
    Rq = res.radii[0]
    pick = (lambda c: pole_density(c)[0]) if q > 0 else (lambda c: pole_density(c)[1])
    assert pick(FieldConfig(p, q, Rq)) == pytest.approx(0.0, abs=1e-9)
    # admissible side: farther from the sphere than the critical radius
    if side == "exterior":
        probes = [Rq * (1 + k / 5) for k in range(1, 6)]
    else:
        probes = [Rq * k / 6 for k in range(1, 6)]
    assert all(pick(FieldConfig(p, q, R)) > 0 for R in probes)


def test_two_roots_sign_pattern():
    p = RieszParams(4, 1)
    res = critical_distance(p, -0.95, "interior")
    r1, r2 = res.radii
    assert r1 < res.r_star < r2
    for R in np.linspace(0.05, 0.95, 11):
        south = pole_density(FieldConfig(p, -0.95, R))[1]
        inside_ok = R <= r1 or R >= r2
        assert (south >= -1e-12) == inside_ok


def test_asymptotic_law():
    consts = []
    for d in (8, 16, 32, 64):
        R = critical_distance(RieszParams(d, d - 1), 1, "exterior").radii[0]
        consts.append(d * d * abs(R - 2 - math.log(3) / d))
    assert max(consts) <= 10


# -- logarithmic critical radii ----------------------------------------------

def test_log_closed_forms():
    assert critical_distance_log(2, 1, "exterior").radii[0] == pytest.approx(3 + 2 * math.sqrt(2), rel=1e-15)
    for d in (2, 3, 7):
        assert critical_distance_log(d, -1, "exterior").kind == CriticalKind.NONE
        assert critical_distance_log(d, -0.3, "interior").kind == CriticalKind.NONE


@pytest.mark.parametrize("q", [0.5, 1.0, 3.0, -1.5, -4.0])
@pytest.mark.parametrize("side", ["exterior", "interior"])
def test_log_critical_radius_zeroes_pole(q, side):
    for d in (2, 3, 5):
        R = critical_distance_log(d, q, side).radii[0]
        north, south = pole_density(cfg(d, LOG, q, R))
        assert (north if q > 0 else south) == pytest.approx(0.0, abs=1e-10)


def test_log_radius_increasing_in_d():
    radii = [critical_distance_log(d, 1, "exterior").radii[0] for d in range(2, 31)]
    assert all(b > a for a, b in zip(radii, radii[1:]))


# -- inversion and connection ------------------------------------------------

def test_inversion_example():
    c = cfg(2, 1, 1, 2.0)
    im = inversion_map(c)
    assert (im.R, im.q) == pytest.approx((0.5, 0.5))
    for u in (-1, 0, 1):
        assert signed_density(im, u) == pytest.approx(signed_density(c, u), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 0.95), st.floats(-4, 4).filter(lambda q: abs(q) > 1e-2),
       st.one_of(st.floats(0.05, 0.95), st.floats(1.05, 6)), st.lists(st.floats(-1, 1), min_size=20, max_size=20))
def test_inversion_invariance(d, frac, q, R, us):
    c = cfg(d, frac * d, q, R)
    im = inversion_map(c)
    back = inversion_map(im)
    assert back.R == pytest.approx(R, rel=1e-15) and back.q == pytest.approx(q, rel=1e-14)
    for u in us:
        a, b = signed_density(c, u), signed_density(im, u)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12 * max(1.0, abs(q)))


@pytest.mark.parametrize("d", [2, 3, 5])
def test_harmonic_duality_first_second_kind(d):
    rng = np.random.default_rng(d)
    for R in rng.uniform(1.05, 6, 20):
        c = cfg(d, d - 1, 1.3, float(R))
        im = inversion_map(c)
        assert im.q == pytest.approx(1.3 * R ** (1 - d))
        assert pole_density_from_gonchar(Kind.SECOND, im) == pytest.approx(
            pole_density_from_gonchar(Kind.FIRST, c), rel=1e-11, abs=1e-11)


def test_connect_fields_examples():
    R = connect_fields(2, 1.5, 1, 1, 0.0)
    roots = np.roots([1, -4, 0, 0, 4])
    smaller = min(r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0)
    assert R == pytest.approx(smaller, rel=1e-12)
    assert connect_fields(3, 2, 0.25, 1, 0.4) == pytest.approx(2.0, rel=1e-15)
    assert connect_fields(3, 2, 1, 1, 0.4) is NoSolution
    assert not NoSolution


def test_connect_fields_subharmonic_condition():
    p = RieszParams(3, 2.5)
    W = riesz_energy(p)
    # q' U(R') / q just below W has a solution; above it does not
    Rp = 0.5
    U = potential_sigma(p, Rp).value
    assert connect_fields(3, 2.5, 0.99 * W / U, 1, Rp) > 1
    assert connect_fields(3, 2.5, 1.01 * W / U, 1, Rp) is NoSolution


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.floats(0.1, 0.8), st.floats(0.0, 0.9), st.floats(0.05, 0.9))
def test_connect_fields_relation_holds(d, frac, Rp, ratio):
    s = frac * (d - 1)
    R = connect_fields(d, s, ratio, 1.0, Rp)
    if R is NoSolution:
        return
    p = RieszParams(d, s)
    assert ratio * potential_sigma(p, Rp).value == pytest.approx(potential_sigma(p, R).value, rel=1e-10)
