"""Critical distances for a point charge near the unit sphere.

A positive unit charge above S^2 with the Newtonian kernel leaves the signed
equilibrium nonnegative exactly when the charge sits at least the golden
ratio away from the sphere.  This script prints that value and a few of its
relatives, then shows how the answer moves with dimension.

    python demos/critical_distances.py
"""
import math

from rieszsphere import RieszParams, critical_distance
from rieszsphere.sphere_equilibrium import critical_distance_log, pole_density, FieldConfig


def show(label, res):
    dist = ", ".join(f"{x:.12f}" for x in res.distances()) or "none"
    print(f"{label:<44} {res.kind.value:<10} distance {dist}")


show("d=2, s=1, q=1, exterior", critical_distance(RieszParams(2, 1), 1, "exterior"))
print(f"{'golden ratio':<55} {(1 + math.sqrt(5)) / 2:.12f}")
show("d=4, s=3, q=1, exterior (plastic constant)", critical_distance(RieszParams(4, 3), 1, "exterior"))
show("d=2, s=1, q=1, interior", critical_distance(RieszParams(2, 1), 1, "interior"))
show("d=2, log kernel, q=1, exterior", critical_distance_log(2, 1, "exterior"))
show("d=4, s=1, q=-0.95, interior (two radii)", critical_distance(RieszParams(4, 1), -0.95, "interior"))

# At the critical radius the density vanishes at the nearest pole.
res = critical_distance(RieszParams(3, 1.5), 2.0, "exterior")
R = res.radii[0]
north, south = pole_density(FieldConfig(RieszParams(3, 1.5), 2.0, R))
print(f"\nd=3, s=1.5, q=2: R_q = {R:.10f}, North Pole density {north:.2e}, South Pole {south:.6f}")

# Harmonic case, q = 1: R_q approaches 2 + log(3)/d as d grows.
print("\n  d      R_q - 1        2 + log 3/d - 1   d^2 * gap")
for d in (2, 4, 8, 16, 32, 64):
    Rq = critical_distance(RieszParams(d, d - 1), 1, "exterior").radii[0]
    approx = 2 + math.log(3) / d
    print(f"{d:>3}  {Rq - 1:.10f}   {approx - 1:.10f}     {d * d * abs(Rq - approx):.4f}")
