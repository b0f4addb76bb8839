"""Gaussian driver models and their Cameron-Martin structure.

Samples the built-in covariance models, rebuilds the grid covariance
from the eigen-basis, and checks the variation embedding that controls
how Cameron-Martin perturbations enter rough integrals.
"""

import numpy as np

from gaussrde import (
    TimeGrid,
    brownian_model,
    bridge_model,
    cameron_martin_basis,
    cm_element_from_coeffs,
    cm_embedding_check,
    fbm_model,
    grid_covariance,
    kernel_eval,
    nondegeneracy_check,
    sample_paths,
    uniform_grid,
)

grid = uniform_grid(1.0, 65)

models = {
    "brownian": brownian_model(),
    "fbm H=0.40": fbm_model(0.4),
    "fbm H=0.75": fbm_model(0.75),
    "bridge": bridge_model(1.0),
}

print("model          rho    var(X_1)   increment var on [0.5, 0.75]")
for name, model in models.items():
    v1 = model.kernel(1.0, 1.0)
    iv = (model.kernel(0.75, 0.75) - 2 * model.kernel(0.5, 0.75)
          + model.kernel(0.5, 0.5))
    print(f"{name:<14} {model.rho:<6.3g} {v1:<10.4f} {iv:.4f}")

# Sampling is counter-based per path index, so a batch of 3 is the
# prefix of a batch of 5 at the same seed.
big = sample_paths([brownian_model()] * 2, grid, 5, seed=42)
small = sample_paths([brownian_model()] * 2, grid, 3, seed=42)
print("\nbatch prefix property:", np.array_equal(big.values[:3], small.values))

# The scaled eigenvector basis reconstructs the grid covariance exactly.
model = fbm_model(0.75)
basis = cameron_martin_basis(model, grid)
F = np.stack([basis.element(n).values for n in range(basis.size)])
C = grid_covariance(model, grid)
print("basis size:", basis.size)
print("covariance reconstruction error:",
      np.max(np.abs(F[:, 1:].T @ F[:, 1:] - C)))

# Embedding: the rho-variation of a Cameron-Martin element is bounded by
# its H-norm times the square root of the kernel variation.
rng = np.random.default_rng(3)
print("\nembedding margins (rhs / lhs), 5 random elements per model:")
for name in ("brownian", "fbm H=0.40", "fbm H=0.75"):
    margins = []
    b = cameron_martin_basis(models[name], grid)
    for _ in range(5):
        c = rng.standard_normal(b.size)
        h = cm_element_from_coeffs(b, c)
        rep = cm_embedding_check(models[name], grid, h, h_norm_sq=float(c @ c))
        margins.append(rep["rhs"] / rep["lhs"])
    print(f"  {name:<12} min {min(margins):.3f}  max {max(margins):.3f}")

# Degeneracy scan over the increment covariance.  The bridge kernel pins
# the path at the horizon, so on the full grid some weighting of the
# increments has zero variance; restricted to the first half it is fine.
print()
for name, model in models.items():
    rep = nondegeneracy_check(model, grid)
    print(f"{name:<14} full grid "
          f"{'DEGENERATE' if rep['degenerate'] else 'ok':<12} "
          f"min eig {rep['min_eigenvalue']:.3e}")

half = TimeGrid(grid.points[:33])
rep = nondegeneracy_check(bridge_model(1.0), half)
print(f"{'bridge':<14} up to 0.5 "
      f"{'DEGENERATE' if rep['degenerate'] else 'ok':<12} "
      f"min eig {rep['min_eigenvalue']:.3e}")

R = kernel_eval(bridge_model(1.0), grid)
print("bridge kernel at the pin R(1,1):", R.values[-1, -1])
