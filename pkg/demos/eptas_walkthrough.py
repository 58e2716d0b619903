"""
One trial of the randomised reduction, step by step
===================================================

Rectangles of very different sizes are sorted into levels, a random offset
drops one layer in every period, a random shift places the grids, members
cut by coarser grid lines are discarded and the rest are snapped to their
own grid.  The dynamic program then solves the snapped family exactly.
"""

import random
from fractions import Fraction

from shrink_mwisr.boxdp import BoxDP, eptas, root_subproblem
from shrink_mwisr.geom import Rect
from shrink_mwisr.oracle import opt_exact
from shrink_mwisr.sparsify import normalize_params, sparsify

rng = random.Random(3)
fam = []
for i in range(14):
    w = max(1, int(36 ** (3 * rng.random())))
    h = max(1, int(36 ** (3 * rng.random())))
    x, y = rng.randint(0, 36 ** 3), rng.randint(0, 36 ** 3)
    fam.append(Rect(i, x, y, x + w, y + h, rng.randint(1, 5)))

params = normalize_params(Fraction(1, 6), Fraction(1, 6), fam)
print("delta, epsilon:", params.delta, params.epsilon)
print("base:", params.base, " period:", params.period, " frame side L:", params.L)
print("cells per subproblem side:", params.grid_dim)

sp = sparsify(fam, params, random.Random(0))
print("\noffset:", sp.ws.offset, " levels:", sp.ws.p)
for t, (lo, hi) in enumerate(zip(sp.ws.nu, sp.ws.mu), start=1):
    print(f"  level {t}: sides in [{lo}, {hi})  grid unit {sp.grid.unit(t)}")
print("kept after offset:", len(sp.kept), "of", len(fam))
print("kept after dropping cut members:", len(sp.non_abusive))
for q in sp.snapped[:4]:
    print(f"  snapped {q.source_id} on levels {q.level}: x in ({q.x1}, {q.x2})")

root = root_subproblem(sp.grid, params.grid_dim, params.L)
dp = BoxDP(sp.snapped, sp.grid, params.grid_dim)
print("\nDP value on the snapped family:", dp.solve(root))
print("counters:", dp.counters.as_dict())

res = eptas(fam, Fraction(1, 6), Fraction(1, 2), trials=7, seed=0)
opt = opt_exact(fam)[0]
print("\nbest of 7 trials:", res.value, " per trial:", [str(v) for v in res.trial_values])
print("exact optimum without shrinking:", opt)
