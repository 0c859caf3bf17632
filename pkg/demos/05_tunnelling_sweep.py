"""
Parameter sweeps of the effective couplings
===========================================

How the two headline couplings move with the knobs an experiment actually
has: the photon tunnelling J (set by the membrane reflectivity) and the
intracavity amplitude alpha (set by the drive).
"""

from dataclasses import replace
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from memrabi import SystemParams, TWO_PI, effective_params, with_alpha

OUT_DIR = Path(__file__).resolve().parents[1] / "demo_output"
OUT_DIR.mkdir(exist_ok=True)

base = SystemParams(
    gamma_c=TWO_PI * 10.0, gamma_at=TWO_PI * 0.01,
    gamma_m=TWO_PI * 0.001, omega_m=TWO_PI * 1000.0,
    J=TWO_PI * 500.0, g1=TWO_PI * 1.0, g_coll=TWO_PI * 10.0,
    delta_L=-TWO_PI * 100.0, delta_R=TWO_PI * 100.0,
    Delta_L=TWO_PI * 10.0, Delta_R=TWO_PI * 10.0,
    alpha_L=1.0, alpha_R=1.0,
)

# |C| vs J: rises linearly at small J, rolls over once J dominates z_R
J_grid = TWO_PI * np.linspace(1.0, 600.0, 240)
abs_C = np.array([abs(effective_params(replace(base, J=J)).C)
                  for J in J_grid])
peak_J = J_grid[np.argmax(abs_C)]
print(f"|C| peaks at J = 2pi x {peak_J / TWO_PI:.1f} MHz "
      f"with |C| = 2pi x {abs_C.max() / TWO_PI:.4f} MHz")

# G_eff_R vs alpha at fixed J: strictly linear, the cavity field only
# enters through the displaced-drive amplitude
alpha_grid = np.linspace(0.0, 10.0, 50)
G_eff = np.array([effective_params(with_alpha(base, a)).G_eff_R
                  for a in alpha_grid])
slope = G_eff[-1] / alpha_grid[-1]
print(f"G_eff_R / alpha = 2pi x {slope / TWO_PI:.5f} MHz per photon "
      "amplitude (linear by construction)")

fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
left.plot(J_grid / TWO_PI, abs_C / TWO_PI)
left.axvline(peak_J / TWO_PI, color="gray", linestyle="--", lw=1)
left.set_xlabel("tunnelling J (2pi MHz)")
left.set_ylabel("|C| (2pi MHz)")
left.set_title("atom-atom exchange vs tunnelling")

right.plot(alpha_grid, G_eff / TWO_PI)
right.set_xlabel("intracavity amplitude alpha")
right.set_ylabel(r"$G_{\rm eff}^R$ (2pi MHz)")
right.set_title("membrane beam splitter vs drive")

fig.tight_layout()
target = OUT_DIR / "coupling_sweeps.png"
fig.savefig(target, dpi=150)
print(f"wrote {target}")
