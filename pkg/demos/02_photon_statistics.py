"""
Photon-number distribution and Mandel Q
=======================================

Adding n photons shifts the whole distribution up by n and keeps only
every second number. Squeezing broadens it. Mandel Q shows sub-Poissonian
statistics for weak squeezing, which turn super-Poissonian as r grows.
"""

# %%
import numpy as np

from esvs import EsvsParams, mandel_q, pnd
from esvs import oracle

# %%
for n in (4, 5):
    for r in (0.2, 0.5, 0.8):
        p = EsvsParams(r, n)
        probs = np.array([pnd(p, m) for m in range(30)])
        top = np.argsort(probs)[::-1][:3]
        print(f"n={n} r={r}: most likely m = {list(top)}, P = {np.round(probs[top], 4)}")

# %% [markdown]
# Zeros are exact: no m below n, and no m of the wrong parity.

# %%
p = EsvsParams(0.5, 3)
print([pnd(p, m) for m in range(8)])

# %% [markdown]
# The squeezed vacuum is super-Poissonian (Q = cosh 2r >= 1). A single added
# photon at weak squeezing is nearly a Fock state, Q close to -1.

# %%
for r in (0.01, 0.1, 0.3, 0.6, 1.0, 1.5):
    qs = [mandel_q(EsvsParams(r, n)) for n in range(4)]
    print(f"r={r:<5} Q(n=0..3) = {np.round(qs, 4)}")

q_oracle = oracle.oracle_mandel_q(oracle.esvs_vector(EsvsParams(0.01, 1)))
print("oracle Q(n=1, r=0.01) =", round(q_oracle, 6))
