"""
Stability of the driven two-mode cavity
=======================================

Two views of stability.  First the 2x2 cavity fluctuation matrix: with
antisymmetric detunings its eigenvalues sit at exactly -gamma_c/2, whatever
the radiation shift r does, so the cavity sector cannot go unstable.
Second, the full 10-mode spectrum: four heavily damped cavity-like
eigenvalues and six slow modes that the reduced model reproduces.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from memrabi import (
    SystemParams,
    TWO_PI,
    classical_steady_state,
    spectrum_full,
    stability_matrix_M,
)

OUT_DIR = Path(__file__).resolve().parents[1] / "demo_output"
OUT_DIR.mkdir(exist_ok=True)

params = SystemParams(
    gamma_c=TWO_PI * 10.0, gamma_at=TWO_PI * 0.01,
    gamma_m=TWO_PI * 0.001, omega_m=TWO_PI * 1000.0,
    J=TWO_PI * 500.0, g1=TWO_PI * 1.0, g_coll=TWO_PI * 10.0,
    delta_L=-TWO_PI * 100.0, delta_R=TWO_PI * 100.0,
    Delta_L=TWO_PI * 10.0, Delta_R=TWO_PI * 10.0,
    alpha_L=1.0, alpha_R=1.0,
)

# scan the radiation shift far beyond anything the drive below produces
r_grid = TWO_PI * np.linspace(-50.0, 50.0, 101)
re_parts = np.empty_like(r_grid)
im_parts = np.empty_like(r_grid)
for i, r in enumerate(r_grid):
    cav = stability_matrix_M(params, r=r)
    re_parts[i] = cav.eigenvalues[0].real
    im_parts[i] = cav.eigenvalues[0].imag

print("cavity 2x2: Re(lambda+) stays pinned:")
print(f"  min {re_parts.min() / TWO_PI:.6f}, "
      f"max {re_parts.max() / TWO_PI:.6f} 2pi MHz "
      f"(-gamma_c/2 = {-params.gamma_c / 2 / TWO_PI:.6f})")

# a realistic r from the driven steady state, for scale
steady = classical_steady_state(params, epsilon=TWO_PI * 2000.0)
print(f"driven steady state: |alpha_L| = {abs(steady.alpha_L):.3f}, "
      f"|alpha_R| = {abs(steady.alpha_R):.3f}, "
      f"r = 2pi x {steady.r / TWO_PI:.4f} MHz "
      f"(converged: {steady.converged})")

report = spectrum_full(params, r=steady.r)
print(f"full spectrum at that shift: "
      f"{'stable' if report.stable else 'UNSTABLE'}")
print("  eigenvalues (2pi MHz), most damped first:")
for idx, value in enumerate(report.spectrum):
    group = "fast" if idx in report.fast_indices else "slow"
    print(f"    {value.real / TWO_PI:+12.6f} {value.imag / TWO_PI:+12.4f}i"
          f"  {group}")
print(f"  slow group vs reduced model: max relative deviation "
      f"{report.max_slow_deviation:.2e}")

fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
left.plot(r_grid / TWO_PI, im_parts / TWO_PI)
left.set_xlabel("radiation shift r (2pi MHz)")
left.set_ylabel(r"Im $\lambda_+$ (2pi MHz)")
left.set_title("cavity splitting follows r")

right.plot(r_grid / TWO_PI, re_parts / TWO_PI)
right.axhline(-params.gamma_c / 2 / TWO_PI, color="gray", linestyle="--",
              lw=1)
right.set_xlabel("radiation shift r (2pi MHz)")
right.set_ylabel(r"Re $\lambda_+$ (2pi MHz)")
right.set_title("damping pinned at -gamma_c/2")

fig.tight_layout()
target = OUT_DIR / "stability_scan.png"
fig.savefig(target, dpi=150)
print(f"wrote {target}")
