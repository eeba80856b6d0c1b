import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rieszsphere.errors import DomainError, IdentityViolation, NoSignChange
from rieszsphere.gonchar_poly import (Identity, PolyKind, build_poly, circle_distance, egervary_vertices,
                                      exact_energy, force, identity_check, multiple_root_criterion,
                                      real_root_in, residual_ok, roots, sector_inclusion, shift_argument,
                                      trinomial, zero_map)
from rieszsphere.potential import RieszParams, riesz_energy
from rieszsphere.sphere_equilibrium import critical_distance

F = Fraction
PHI = (1 + math.sqrt(5)) / 2


def rational_samples(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        z = F(rng.randint(-40, 40), rng.randint(1, 17))
        if z != 0:
            out.append(z)
    return out


# -- construction ------------------------------------------------------------

def test_first_kind_planar_unit_charge():
    p = build_poly("A", 2, 1)
    assert p.coeffs == (F(1), F(-2), F(-2), F(1))


def test_fourth_kind_harmonic_unit_charge_is_linear():
    for d in (2, 3, 6):
        p = build_poly("D", d, -1)
        assert p.degree == 1
        # normalized to z - 1
        assert [c / p.leading for c in p.coeffs] == [F(-1), F(1)]


@pytest.mark.parametrize("d", [2, 3, 4, 7])
@pytest.mark.parametrize("q", [F(1), F(1, 10), F(5, 2)])
def test_second_kind_is_shifted_trinomial(d, q):
    B = build_poly("B", d, q)
    P = trinomial(d, q)
    assert tuple(shift_argument(P, 1, -1)) == B.coeffs


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_harmonic_degrees(d):
    assert build_poly("A", d, 1).degree == 2 * d - 1
    assert build_poly("C", d, F(-3, 2)).degree == 2 * d - 1
    assert build_poly("B", d, 2).degree == d
    assert build_poly("D", d, F(-1, 3)).degree == d


@pytest.mark.parametrize("d,m", [(4, 1), (6, 1), (6, 2), (9, 3)])
def test_higher_m_degrees(d, m):
    assert build_poly("A", d, 1, m).degree == 2 * d - 1
    assert build_poly("C", d, -2, m).degree == 2 * d - 1
    assert build_poly("B", d, 1, m).degree == d + 2 * m
    assert build_poly("D", d, -2, m).degree == d + 2 * m


@pytest.mark.parametrize("d,m", [(2, 0), (3, 0), (4, 1), (5, 1), (7, 2), (8, 3)])
def test_exact_energy_matches_float(d, m):
    assert float(exact_energy(d, m)) == pytest.approx(riesz_energy(RieszParams(d, d - 1 - 2 * m)), rel=1e-13)


def test_build_domain_errors():
    with pytest.raises(DomainError):
        build_poly("A", 3, -1)
    with pytest.raises(DomainError):
        build_poly("C", 3, 1)
    with pytest.raises(DomainError):
        build_poly("B", 3, 1, m=1)  # s = 0
    with pytest.raises(DomainError):
        build_poly("B", 1, 1)
    with pytest.raises(DomainError):
        trinomial(3, -1)


# -- roots -------------------------------------------------------------------

def test_roots_of_golden_cubic():
    rs = roots(build_poly("A", 2, 1))
    got = sorted(z.real for z in rs.roots)
    want = sorted([-1.0, (3 - math.sqrt(5)) / 2, (3 + math.sqrt(5)) / 2])
    assert np.allclose(got, want, atol=1e-14)
    assert all(abs(z.imag) < 1e-14 for z in rs.roots)


def test_roots_linear_family():
    rs = roots(build_poly("D", 4, -1))
    assert len(rs) == 1 and rs.roots[0] == pytest.approx(1.0, abs=1e-15)


def test_root_count_is_degree():
    assert len(roots(build_poly("A", 5, 1))) == 9


def test_roots_sorted_and_deterministic():
    p = build_poly("C", 7, F(-3, 2))
    a, b = roots(p), roots(p)
    assert a.roots == b.roots
    keys = [(z.real, z.imag) for z in a.roots]
    assert keys == sorted(keys)


FAMILY = [(k, d, m) for k in "ABCD" for d in (2, 3, 5, 8, 12, 17, 24) for m in (0, 1, 2) if d - 1 - 2 * m > 0]
CHARGE = {"A": F(1), "B": F(7, 10), "C": F(-3, 2), "D": F(-5, 2)}


@pytest.mark.parametrize("kind,d,m", FAMILY)
def test_residuals_and_conjugate_symmetry(kind, d, m):
    p = build_poly(kind, d, CHARGE[kind], m)
    rs = roots(p)
    assert len(rs) == p.degree
    assert rs.converged and residual_ok(p, rs)
    zs = sorted(rs.roots, key=lambda z: (round(z.real, 9), z.imag))
    conj = sorted((z.conjugate() for z in rs.roots), key=lambda z: (round(z.real, 9), z.imag))
    assert max(abs(a - b) for a, b in zip(zs, conj)) <= 1e-12 * max(1.0, max(abs(z) for z in zs))


@pytest.mark.parametrize("kind", ["B", "D"])
@pytest.mark.parametrize("d", [2, 5, 10, 16, 24])
def test_zeros_of_second_and_fourth_kind_are_simple(kind, d):
    rs = roots(build_poly(kind, d, CHARGE[kind]))
    zs = rs.roots
    gap = min(abs(a - b) for i, a in enumerate(zs) for b in zs[i + 1:])
    assert gap > 1e-8


# -- real roots and critical distances ---------------------------------------

def test_real_root_examples():
    assert real_root_in(build_poly("A", 2, 1), 1, math.inf) == pytest.approx(1 + PHI, abs=1e-13)
    assert real_root_in(build_poly("B", 2, 1), 0, 1) == pytest.approx(1 - (math.sqrt(17) - 1) / 4, abs=1e-13)


def test_no_sign_change():
    with pytest.raises(NoSignChange):
        real_root_in(build_poly("A", 2, 1), 0, 0.3)


CROSS = [("A", 2, 0, F(1)), ("A", 5, 1, F(2)), ("A", 7, 2, F(1, 3)), ("B", 3, 0, F(1)), ("B", 6, 1, F(3, 2)),
         ("C", 3, 0, F(-2)), ("C", 4, 1, F(-3)), ("C", 6, 0, F(-5, 4)), ("D", 3, 0, F(-2)), ("D", 5, 0, F(-7, 2))]


@pytest.mark.parametrize("kind,d,m,q", CROSS)
def test_real_root_matches_critical_distance(kind, d, m, q):
    p = build_poly(kind, d, q, m)
    side = "exterior" if kind in "AC" else "interior"
    res = critical_distance(RieszParams(d, d - 1 - 2 * m), float(q), side)
    assert len(res.radii) == 1
    lo, hi = (1, math.inf) if side == "exterior" else (0, 1)
    assert real_root_in(p, lo, hi) == pytest.approx(res.radii[0], abs=1e-10)


# -- identities --------------------------------------------------------------

@pytest.mark.parametrize("which,d,q", [
    (Identity.FIRST_SECOND, 3, F(1)), (Identity.FIRST_SECOND, 6, F(2, 7)),
    (Identity.THIRD_FOURTH, 3, F(-2)), (Identity.THIRD_FOURTH, 5, F(-1, 3)),
    (Identity.SECOND_FOURTH, 4, F(2)), (Identity.SECOND_FOURTH, 5, F(3, 4)),
    (Identity.FIRST_THIRD, 4, F(1)), (Identity.FIRST_THIRD, 5, F(1)),
    (Identity.SELF_RECIPROCAL_A, 4, F(1)), (Identity.SELF_RECIPROCAL_A, 8, F(1)),
    (Identity.RECIPROCAL_C, 3, F(-1)), (Identity.RECIPROCAL_C, 6, F(-1)),
])
def test_identities_exact_at_random_rationals(which, d, q):
    rep = identity_check(which, d, q, rational_samples(20, 1000 * len(which.value) + d))
    assert rep.ok and len(rep.rows) >= 20
    assert all(isinstance(lhs, Fraction) for _, lhs, _ in rep.rows)


def test_reciprocal_c_example():
    rep = identity_check(Identity.RECIPROCAL_C, 3, -1, [F(2)])
    _, lhs, rhs = rep.rows[0]
    assert lhs == rhs


def test_second_fourth_example():
    assert identity_check(Identity.SECOND_FOURTH, 4, 2, [F(1, 3)]).ok


def test_self_reciprocal_needs_even_d():
    with pytest.raises(DomainError):
        identity_check(Identity.SELF_RECIPROCAL_A, 5, 1, [F(2)])


def test_identity_sample_zero_rejected():
    with pytest.raises(DomainError):
        identity_check(Identity.RECIPROCAL_C, 3, -1, [F(0)])


def test_identity_violation_detected(monkeypatch):
    import rieszsphere.gonchar_poly as gp
    real = gp.family_value
    monkeypatch.setattr(gp, "family_value", lambda kind, d, q, z, m=0: real(kind, d, q, z, m) + (kind == "D"))
    with pytest.raises(IdentityViolation):
        identity_check(Identity.SECOND_FOURTH, 4, 2, [F(1, 3)])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 9), st.fractions(min_value=F(1, 20), max_value=20, max_denominator=30),
       st.lists(st.fractions(min_value=-10, max_value=10, max_denominator=30).filter(bool), min_size=1, max_size=4))
def test_first_second_duality_property(d, q, zs):
    assert identity_check(Identity.FIRST_SECOND, d, q, zs).ok
    assert identity_check(Identity.THIRD_FOURTH, d, -q, zs).ok


def test_reciprocal_root_pairing():
    zs = roots(build_poly("C", 5, -1)).roots
    for z in zs:
        assert min(abs(1 / z - w) for w in zs) < 1e-10


# -- trinomial structure -----------------------------------------------------

def test_trinomial_degree_one():
    p = trinomial(1, F(1, 2))
    assert p.degree == 1
    rs = roots(p)
    # (2 + 1/q) w = 2
    assert rs.roots[0] == pytest.approx(2 / (2 + 1 / 0.5), abs=1e-15)


@pytest.mark.parametrize("d", [3, 6, 10])
def test_trinomial_zeros_simple_by_criterion(d):
    lhs, rhs = multiple_root_criterion(d, 1)
    assert lhs != rhs


def test_double_root_criterion_detects_repeated_zero():
    # choose q so the criterion is met and confirm a repeated zero appears
    d = 3
    n, m = d - 1, 1
    target = F(m ** m * n ** n, (n + m) ** (n + m))
    # (-1)^{n+m} A (-2)^n = target with B = 1
    A = target / ((-1) ** (n + m) * F(-2) ** n)
    q = 1 / (A - 1)
    lhs, rhs = multiple_root_criterion(d, q)
    assert lhs == rhs
    zs = roots(trinomial(d, q)).roots
    assert min(abs(a - b) for i, a in enumerate(zs) for b in zs[i + 1:]) < 1e-6


@pytest.mark.parametrize("d,q", [(6, 1), (4, F(1, 3)), (5, F(-1, 2)), (7, F(-3))])
def test_force_vanishes_at_trinomial_zeros(d, q):
    inner, outer = egervary_vertices(d, q)
    assert len(inner) == d - 1 and len(outer) == d
    for z in roots(trinomial(d, q)).roots:
        assert abs(force(z, inner + outer)) <= 1e-8


@pytest.mark.parametrize("d", range(3, 13))
def test_sector_inclusion(d):
    rep = sector_inclusion(d)
    assert rep.ok and rep.counts == [1] * d
    assert all(rep.t - 1e-12 <= abs(z) <= rep.s + 1e-12 for z in rep.roots)


def test_sector_radius_bounds_d6():
    rep = sector_inclusion(6)
    assert rep.t >= 2 / 3 and rep.s <= 1.5 ** (1 / 5)


def test_sector_domain():
    with pytest.raises(DomainError):
        sector_inclusion(2)


# -- zero maps ---------------------------------------------------------------

def test_zero_map_table_size():
    rows = zero_map("A", [12], 1)
    assert len(rows) == 23 and all(d == 12 for d, _ in rows)
    rows = zero_map("B", [3, 4], 1)
    assert len(rows) == 7


def test_second_kind_zeros_approach_circle():
    dist = [circle_distance("B", d, 1) for d in (10, 20, 40)]
    assert dist[0] > dist[1] > dist[2]


def test_fourth_kind_zeros_approach_circle():
    dist = [circle_distance("D", d, -2) for d in (10, 20, 40)]
    assert dist[0] > dist[1] > dist[2]


def test_degenerate_fourth_family_distance():
    assert circle_distance("D", 5, -1) == pytest.approx(1.0, abs=1e-14)
