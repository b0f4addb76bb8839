"""Variation norms and Young integration.

Shows the dynamic-programming p-variation against brute-force partition
enumeration, the 2D rho-variation of covariance kernels, and the
left-point Young integrals, including the exact collapse of the 2D
integral against the Brownian kernel.
"""

import numpy as np

from gaussrde import (
    GridFunction1D,
    TimeGrid,
    brownian_model,
    fbm_model,
    kernel_eval,
    p_variation,
    p_variation_with_partition,
    rho_variation_2d,
    uniform_grid,
    young_integral_1d,
    young_integral_2d,
)
from gaussrde.young import p_variation_bruteforce

rng = np.random.default_rng(11)

# p-variation: DP optimum vs exhaustive enumeration on a short path.
grid = TimeGrid(np.linspace(0.0, 1.0, 9))
path = GridFunction1D(grid, np.cumsum(rng.standard_normal((9, 2)), axis=0) * 0.5)
for p in (1.0, 1.5, 2.0):
    dp = p_variation(path, p)
    bf = p_variation_bruteforce(path, p)
    print(f"p={p:.1f}  dp={dp:.6f}  bruteforce={bf:.6f}  agree={np.isclose(dp, bf)}")

val, part = p_variation_with_partition(path, 2.0)
print("optimal partition for p=2:", part)

# A monotone scalar path has p-variation equal to its total displacement
# for every p >= 1 (one big increment dominates).
ramp = GridFunction1D(grid, (grid.points * 2.0).reshape(-1, 1))
print("monotone ramp, p=2.5:", p_variation(ramp, 2.5), "(displacement 2.0)")

# 2D rho-variation of covariance kernels.  The Brownian kernel has
# rho=1 variation exactly equal to the horizon: rectangle increments of
# min(s,t) telescope along the diagonal.
g16 = uniform_grid(1.0, 13)
R_bm = kernel_eval(brownian_model(), g16)
res = rho_variation_2d(R_bm, 1.0, mode="exact")
print("\nBM kernel rho=1 variation:", res.value, "(horizon 1.0)")

R_fbm = kernel_eval(fbm_model(0.4), g16)
res = rho_variation_2d(R_fbm, 1.25, mode="exact")
print("fBm(0.4) kernel rho=1.25 variation:", f"{res.value:.6f}",
      "lower bound:", res.is_lower_bound)

# Young integrals: left-point sums.  Integrating 1 against any path just
# reproduces its increment.
f = GridFunction1D(grid, np.ones(9))
g = GridFunction1D(grid, grid.points**2)
print("\nint 1 d(t^2) =", young_integral_1d(f, g), "(exact 1.0)")

# Against the Brownian kernel the 2D Young integral collapses to a
# weighted diagonal sum, here int f g dt for the left-point values.
gridN = uniform_grid(1.0, 101)
f = GridFunction1D(gridN, np.sin(2 * np.pi * gridN.points))
h = GridFunction1D(gridN, np.cos(2 * np.pi * gridN.points))
R = kernel_eval(brownian_model(), gridN)
lhs = young_integral_2d(f, h, R)
rhs = float(np.sum(f.values[:-1] * h.values[:-1] * np.diff(gridN.points)))
print("2D Young vs diagonal sum:", lhs, rhs, "gap:", abs(lhs - rhs))
