# %% [markdown]
# # A general key: eigen-blocks of Alice's marginal
#
# When rho_A is not maximally mixed, Alice may only mix states inside each
# eigenspace.  The averaged key keeps a block label,
# sigma = sum_K P_K rho_A_K ⊗ rho_B_K, and the leftover correlation
# I_sigma is at most log2 D, where D is the number of distinct eigenvalues.

# %%
import numpy as np

from qotp import (
    averaged_state,
    averaged_state_closed_form,
    block_decompose,
    build_ensemble,
    capacity_report,
    enumerate_average,
    marginal,
    mutual_information,
)
from qotp.sampling import bipartite_with_marginal

rng = np.random.default_rng(7)
key = bipartite_with_marginal(np.diag([0.5, 0.25, 0.25]), 3, rng)
blocks = block_decompose(marginal(key, "A"))
print("blocks:", blocks.summary())

# %% Three routes to the averaged state agree
ens = build_ensemble(blocks)
twirl = averaged_state(key, ens)
closed = averaged_state_closed_form(key, blocks)
brute = enumerate_average(key, ens)
print("N =", ens.size)
print("twirl vs closed form:", np.abs(twirl.matrix - closed.matrix).max())
print("twirl vs enumeration:", np.abs(twirl.matrix - brute.matrix).max())

# %% The bound ladder
rep = capacity_report(key)
print(f"I_rho = {rep.I_rho:.6f}, I_sigma = {rep.I_sigma:.6f}, chi_AB = {rep.chiAB:.6f}")
print(f"I_rho - log2 D = {rep.lowerBound:.6f} <= chi_AB <= I_rho = {rep.upperBound:.6f}")
for check in rep.satisfied:
    print(f"  {check.name}: {check.holds} (margin {check.margin:.3g})")

# %% chi_AB is exactly the mutual information erased by the averaging
print("I_rho - I_sigma =", mutual_information(key) - mutual_information(twirl))
