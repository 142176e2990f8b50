"""Two unit squares side by side in a disk of radius 5, centre distance d.

When the squares are close, the cheapest set containing them bridges the
gap with concave arcs of radius 1/lambda_c, and Y_c(d) has a corner where
the bridge appears.  We sweep d, locate the corner by bisection on the
closed form and compare the enclosure values on both sides.
"""
import numpy as np

from yieldgeom import ExampleCase, morph, solve_two_step, sweep
from yieldgeom.enclosure import t_value

template = ExampleCase("two-squares", {"d": 1.5})
res = sweep(template, "d", np.linspace(1.05, 3.0, 40))
d_star = res.transitions[0]
print(f"configuration change at d* = {d_star:.6f}")

for d in (1.2, 1.6, d_star - 1e-3, d_star + 1e-3, 2.4):
    sol = solve_two_step(template.with_param("d", d).scene())
    lam = sol.lambda_c
    parts = morph.ParticleSet(sol.particles)
    bare = t_value(parts.region(), lam)
    line = f"d={d:.4f}  Y_c={sol.y_c:.6f}  {sol.config:40s} T(bare)={bare:.5f}"
    if parts.min_gap() < 2 / lam:
        line += f"  T(closed)={t_value(morph.close_r(parts, 1 / lam), lam):.5f}"
    print(line)
