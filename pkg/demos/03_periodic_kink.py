"""A 12 x 12 array of disks of radius delta in a square of side 12.

Small disks move individually; beyond a critical radius the whole array
moves as one block (the closing of the particle set with radius
1/lambda_c).  The geometric solver and the closed form are run side by
side and the single kink in Y_c(delta) is located.
"""
import time

import numpy as np

from yieldgeom import ExampleCase, solve_example, solve_two_step, sweep

template = ExampleCase("periodic-disks", {"L": 12.0, "N": 12, "a": 0.4, "delta": 0.2})
grid = np.linspace(0.04, 0.44, 11)

t0 = time.perf_counter()
for delta in grid:
    case = template.with_param("delta", delta)
    g = solve_two_step(case.scene())
    a = solve_example(case)
    print(f"delta={delta:.2f}  Y_c={g.y_c:.8f}  closed form {a.y_c:.8f}  {g.config}")
print(f"geometric sweep took {time.perf_counter() - t0:.1f} s")

kinks = sweep(template, "delta", grid).transitions
print(f"kinks at {[round(k, 6) for k in kinks]}")
