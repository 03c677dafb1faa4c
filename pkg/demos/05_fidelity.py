"""
Photon addition versus photon subtraction
=========================================

An n-photon-added squeezed vacuum can closely mimic an m-photon-subtracted
one with different squeezing. The fidelity vanishes when n + m is odd.
Otherwise it has a sharp maximum in r for each lambda.
"""

# %%
from pathlib import Path

import numpy as np

from esvs import EsvsParams, PssvsParams, fidelity
from esvs import oracle
from esvs.optimize import fidelity_sweep, optimal_fidelity

OUT = Path(__file__).with_name("output")
OUT.mkdir(exist_ok=True)

# %%
for n, m, lam in [(2, 2, 1.5), (2, 4, 1.5), (2, 2, 2.5), (1, 2, 1.0)]:
    res = optimal_fidelity(n, m, lam)
    print(f"n={n} m={m} lambda={lam}: F* = {res.f_star:.6f} at r* = {res.r_star:.5f}"
          f"{'  (parity forbids overlap)' if res.degenerate else ''}")

# %% [markdown]
# The optimum agrees with the brute-force overlap of the two truncated kets.

# %%
res = optimal_fidelity(2, 2, 1.5)
print("oracle F at r* =", oracle.oracle_fidelity(EsvsParams(res.r_star, 2), PssvsParams(1.5, 2)))

# %% [markdown]
# Surface for n = 4, m = 6: a ridge of near-unit fidelity runs along
# increasing lambda and r.

# %%
lams = np.linspace(0.5, 3.0, 26)
rs = np.linspace(0.05, 4.0, 80)
table = fidelity_sweep(4, 6, lams, rs)
for lam, row in zip(lams[::5], table[::5]):
    print(f"lambda={lam:.1f}: best r {rs[row.argmax()]:.2f}, F {row.max():.4f}")
path = OUT / "fidelity_n4_m6.csv"
grid = np.array([(lam, r, f) for lam, row in zip(lams, table) for r, f in zip(rs, row)])
np.savetxt(path, grid, delimiter=",", header="lambda,r,f", comments="", fmt="%.9g")
print("wrote", path)
print("spot check F(4,6,lambda=2,r=2.2) =", fidelity(EsvsParams(2.2, 4), PssvsParams(2.0, 6)))
