"""
Kernels for squares
===================

Crowded unit squares collapse to a small kernel.  Squares spread over many
size classes already contain a solution, which the kernel returns directly.
A picture of the second case is written next to this script.
"""

import random
from fractions import Fraction
from pathlib import Path

from shrink_mwisr.geom import shrink_all
from shrink_mwisr.instances import clustered_unit_squares, geometric_squares
from shrink_mwisr.oracle import opt_k_exact
from shrink_mwisr.squareskernel import gamma_int, kernel_arb_uniform, kernel_unit_uniform
from shrink_mwisr.svg import render_svg

delta, k = Fraction(1, 2), 3

crowd = clustered_unit_squares(random.Random(5), 18, clusters=2, side=8, spread=2)
res = kernel_unit_uniform(crowd.rects, k, delta)
print("unit squares:", len(crowd.rects), "-> kernel of", len(res), "bound", res.size_bound)
before = opt_k_exact(crowd.rects, k)[0]
after = opt_k_exact(shrink_all(res.members, delta), k)[0]
print(f"best {k} before: {before}, best {k} shrunk inside the kernel: {after}")

levels = gamma_int(delta) * k
spread = geometric_squares(levels, delta)
res = kernel_arb_uniform(spread.rects, k, delta)
print("\nsize classes needed for a direct answer:", levels)
print("found a solution directly?", res.found, [r.id for r in res.members])

out = Path(__file__).with_name("square_kernels.svg")
out.write_text(render_svg(spread.rects, delta, [r.id for r in res.members]))
print("wrote", out)
