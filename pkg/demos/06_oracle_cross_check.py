"""
Closed forms against the truncated Fock-space oracle
====================================================

Every analytic expression in the library is re-derived numerically by
building the states as vectors (ladder matrices, matrix exponentials) and
contracting. The same machinery decides between competing printed variants
of four formulas.
"""

# %%
from esvs import verify

report = verify.run("all")
print(report.text())
