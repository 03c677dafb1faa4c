"""
Quadrature variances and the uncertainty product
================================================

The squeezed vacuum saturates Heisenberg: var_x * var_y = 1/4. Added photons
push the product up while the y-quadrature can still dip below the vacuum
level of 1/2.
"""

# %%
import math
import subprocess
import sys
from pathlib import Path

from esvs import EsvsParams, quadrature

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

# %%
for r in (0.2, 0.5, 1.0):
    q = quadrature(EsvsParams(r, 0))
    print(f"n=0 r={r}: var_y {q.var_y:.6f} vs e^-2r/2 {math.exp(-2 * r) / 2:.6f}, snr_xy {q.snr_xy:+.1e}")

# %%
for n in (2, 6):
    for r in (0.1, 0.5, 1.0, 1.5):
        q = quadrature(EsvsParams(r, n))
        below = "squeezed" if q.var_y < 0.5 else "not squeezed"
        print(f"n={n} r={r}: dX dY = {q.product:.4f}, var_y = {q.var_y:.4f} ({below})")

# %% [markdown]
# The same sweep through the command-line front end, as CSV.

# %%
path = OUT / "quadrature_n2_n6.csv"
subprocess.run(
    [sys.executable, "-m", "esvs", "quadrature", "--n", "2", "6", "--r-from", "0.05", "--r-to", "1.5",
     "--r-steps", "30", "--out", str(path)],
    check=True,
)
print("wrote", path)
