"""
Shrinking and what it buys
==========================

Three rectangles that pairwise overlap, so only one fits without shrinking.
Shrink them and all three fit.
"""

from fractions import Fraction

from shrink_mwisr.geom import Rect, is_independent, shrink_all
from shrink_mwisr.oracle import opt_exact

fam = [Rect("a", 0, 0, 10, 10, 2),
       Rect("b", 8, 0, 18, 10, 3),
       Rect("c", 4, 8, 14, 18, 4)]

value, sol = opt_exact(fam)
print("best without shrinking:", value, [r.id for r in sol])

for delta in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
    small = shrink_all(fam, delta)
    print(f"delta={delta}: all three independent after shrinking?", is_independent(small))
    for r in small:
        print(f"    {r.id}: ({r.x1}, {r.y1}) to ({r.x2}, {r.y2})")

# the shrunk optimum is scored with the original weights
value, sol = opt_exact(shrink_all(fam, Fraction(1, 2)))
print("best with delta=1/2:", value, [r.id for r in sol])
