"""Recover a time-varying intensity by Volterra deconvolution.

A sensor at distance 0.8 from the source records the convolution of the
unknown intensity with the arrival kernel.  The first-kind system is
solved with a difference-seminorm regularizer; with noisy data the
regularization weight is picked by the discrepancy principle.
"""

import numpy as np

from pointsource import TimeGrid, forward, laplace

grid = TimeGrid(tau=2.5e-3, num_steps=2000)         # 5 time units
t = grid.times()
q_true = 1.0 + np.sin(2.0 * t)
distance = 0.8

psi = forward.convolve_intensity(q_true, 3, distance, grid)
masses = forward.duhamel_masses(3, distance, grid)

# ---- noiseless ---------------------------------------------------------------
clean = laplace.volterra_deconvolve(psi, None, grid, eps=0.0, masses=masses)
win = t >= 0.5
rel = np.linalg.norm(clean.q[win] - q_true[win]) / np.linalg.norm(q_true[win])
print(f"noiseless: relative L2 error {rel:.2e} "
      f"(residual {clean.residual_norm:.1e}, "
      f"{clean.n_tail_extended} dead-time samples extrapolated)")

# ---- 1% noise with automatic regularization ----------------------------------
rng = np.random.default_rng(42)
sigma = 0.01 * np.abs(psi).max()
noisy_data = psi + sigma * rng.standard_normal(psi.shape)
noisy = laplace.volterra_deconvolve(noisy_data, None, grid, eps="auto",
                                    masses=masses, sigma=sigma)
rel_noisy = np.linalg.norm(noisy.q[win] - q_true[win]) \
    / np.linalg.norm(q_true[win])
print(f"1% noise:  relative L2 error {rel_noisy:.2e} "
      f"(discrepancy picked eps = {noisy.eps:.2e})")

# ---- the regularization trade-off --------------------------------------------
print("\n   eps        residual    roughness |Dq|")
for eps in (1e-12, 1e-9, 1e-6, 1e-3):
    res = laplace.volterra_deconvolve(noisy_data, None, grid, eps=eps,
                                      masses=masses)
    print(f"  {eps:8.0e}   {res.residual_norm:10.3e}   {res.seminorm:10.3e}")
print("\nresidual grows and roughness falls as eps increases; the "
      "discrepancy principle stops once the residual matches the noise.")
