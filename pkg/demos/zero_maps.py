"""Zero maps of the four polynomial families.

Writes one SVG per family into the current directory (or the directory given
on the command line).  Zeros of the second and fourth kind crowd onto the
circles |z - 1| = 1 and |z + 1| = 1 as d grows; the printed distances show
the trend.

    python demos/zero_maps.py out/
"""
import os
import sys
from fractions import Fraction

from rieszsphere import export
from rieszsphere.gonchar_poly import circle_distance, zero_map

out = sys.argv[1] if len(sys.argv) > 1 else "."
os.makedirs(out, exist_ok=True)

families = {"A": Fraction(1), "B": Fraction(1), "C": Fraction(-3, 2), "D": Fraction(-3, 2)}
dims = [8, 16, 24]
for kind, q in families.items():
    rows = zero_map(kind, dims, q)
    path = os.path.join(out, f"zeros_{kind}.svg")
    export.write_svg(path, [z for _, z in rows], title=f"kind {kind}, q={q}, d in {dims}")
    print(f"{path}: {len(rows)} zeros")

print("\ndistance of the farthest zero from the limiting circle")
for kind in ("B", "D"):
    q = families[kind]
    print(kind, "  ".join(f"d={d}: {circle_distance(kind, d, q):.4f}" for d in (10, 20, 40)))
