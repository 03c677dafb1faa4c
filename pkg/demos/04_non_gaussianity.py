"""
Hilbert-Schmidt non-Gaussianity
===============================

The reference Gaussian is the squeezed thermal state with the same first and
second moments. Its distance from the pure photon-added state grows with
the number of added photons and is zero for the squeezed vacuum itself.
"""

# %%
import numpy as np

from esvs import EsvsParams, non_gaussianity
from esvs import oracle

# %%
for r in (-1.0, 0.0, 0.5, 1.5):
    print(f"n=0 r={r:+.1f}: delta = {non_gaussianity(EsvsParams(r, 0)).delta:.2e}")

# %%
for n in range(0, 7):
    rep = non_gaussianity(EsvsParams(0.5, n))
    print(
        f"n={n} r=0.5: delta {rep.delta:.6f}  ref (s={rep.ref.varsigma:.4f}, nbar={rep.ref.nbar:.4f})  "
        f"{rep.terms_used} series terms"
    )

# %% [markdown]
# In the r -> 0 limit one added photon is the Fock state |1>, whose reference
# is a thermal state with nbar = 1: kappa = 1/4, purity 1/3, delta = 5/12.

# %%
rep = oracle.oracle_nongauss(oracle.esvs_vector(EsvsParams(1e-7, 1)))
print(f"oracle delta = {rep.delta:.9f}, 5/12 = {5 / 12:.9f}")

# %% [markdown]
# The closed-form series against the dense Fock-space computation.

# %%
for r, n in [(0.2, 3), (-1.0, 2), (1.5, 5)]:
    p = EsvsParams(r, n)
    a, b = non_gaussianity(p).delta, oracle.oracle_nongauss(oracle.esvs_vector(p)).delta
    print(f"n={n} r={r}: closed {a:.12f} oracle {b:.12f}")

curve = [(float(r), non_gaussianity(EsvsParams(r, 2)).delta) for r in np.linspace(-2, 2, 9)]
print("n=2 curve:", [(round(r, 1), round(d, 4)) for r, d in curve])
