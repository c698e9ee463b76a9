"""Projections of Cantor products and the middle-set region map.

Writes region_map.svg and region_map.csv to the current directory.

Run: python demos/05_projection_atlas.py
"""
from fractions import Fraction
from pathlib import Path

from cantorsum import SumSystem, middle_set, middle_set_classify, scan_projections
from cantorsum.atlas import region_grid, region_svg, witness_fraction
from cantorsum.formats import csv_text

third = middle_set(Fraction(1, 3))
pair = SumSystem(third, third)

# Projection along (1, eta) is C_lambda + eta C_gamma up to scale.
for rec in scan_projections(pair, Fraction(1, 2), Fraction(3, 2), 5, Fraction(1, 10), 1e-4):
    print(f"eta={rec.eta:.3f} theta={rec.theta:.4f} witness={rec.witness_found} depth={rec.depth_reached}")

# For two ratio-1/20 sets the dimension sum is below 1/2; witnesses become rare as eps shrinks.
sep = SumSystem(middle_set(Fraction(1, 20)), middle_set(Fraction(1, 20)))
for eps in ("0.08", "0.04", "0.02"):
    recs = scan_projections(sep, Fraction(1, 2), 2, 500, Fraction(eps), Fraction(1, 20**6))
    print(f"eps={eps}: witness fraction {witness_fraction(recs):.3f}")

for lam, gam in [(0.35, 0.35), (0.3, 0.3), (0.22, 0.22), (0.1, 0.1), (0.05, 0.05), (1 / 16, 1 / 16)]:
    lab = middle_set_classify(lam, gam)
    print(f"({lam:.4f}, {gam:.4f}) -> {lab.label}")

Path("region_map.csv").write_text(csv_text(("lam", "gam", "label"), region_grid(100)))
Path("region_map.svg").write_text(region_svg(200))
print("wrote region_map.csv and region_map.svg")
