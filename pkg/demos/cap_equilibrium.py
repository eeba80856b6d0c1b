"""Signed equilibrium on a spherical cap under a repelling charge.

A charge q = -5 sits at distance 1 + phi below the South Pole of S^2.  For
each cap {u <= t} the signed equilibrium has constant weighted potential
phi(t); the support of the extremal measure is the cap where phi(t) meets
the boundary threshold.  The script locates that cap, tabulates the density
and shows the weighted potential rising above the constant off the cap.

    python demos/cap_equilibrium.py
"""
import math

import numpy as np

from rieszsphere import cap_equilibrium as ce

golden = (1 + math.sqrt(5)) / 2
cfg = ce.CapConfig(2, 1.0, 1 + golden, -5.0)

print("   t        phi(t)     threshold   density >= 0")
for t in np.linspace(-0.8, 0.8, 9):
    ph = ce.phi(cfg, t)
    print(f"{t:6.2f}  {ph:10.6f}  {cfg.threshold(t):10.6f}   {ph >= cfg.threshold(t)}")

st = ce.solve_tc(cfg)
print(f"\ncritical cap t_c = {st.t:.12f}, phi(t_c) = {st.phi:.12f}")

print("\ndensity on the support")
for u in np.linspace(-1, st.t, 8)[:-1]:
    print(f"  u = {u:7.4f}   {ce.eta_density(cfg, st.t, u, st.phi):.8f}")

print("\nweighted potential above the support")
for xi in np.linspace(st.t, 1, 6)[1:]:
    v = ce.weighted_potential_outside(cfg, st.t, xi, st.phi)
    print(f"  xi = {xi:7.4f}   {v:.8f}   excess {v - st.phi:.3e}")

# s = d - 2 in three dimensions: part of the charge sits on the boundary circle.
exc = ce.CapConfig(3, 1.0, 2.0, -5.0)
se = ce.solve_tc_exceptional(exc)
print(f"\nd=3, s=1: t_c = {se.t:.10f}, boundary charge there {se.boundary_charge:.2e}")
for t in (se.t - 0.1, se.t + 0.1):
    print(f"  t = {t:.4f}: boundary charge {ce.boundary_charge(exc, t):+.6f}")
