# %% [markdown]
# # Classical keys
#
# A pair of correlated random variables is the diagonal special case.  The
# quantum machinery gives back the classical mutual information, and the
# scrambling reduces to relabelling equiprobable symbols of X_A.

# %%
import numpy as np

from qotp import JointPMF, classical_capacity_report, classical_mutual_information, embed_quantum, mutual_information

noisy = JointPMF([[0.4, 0.1], [0.1, 0.4]])
print("I classical:", classical_mutual_information(noisy))
print("I quantum  :", mutual_information(embed_quantum(noisy)))

# %% Marginal of X_A is uniform, so the whole mutual information is usable
rep = classical_capacity_report(noisy)
print("chi_AB:", rep.chiAB, "D:", rep.D)

# %% Two groups of equiprobable symbols
pa = np.array([0.3, 0.3, 0.2, 0.2])
cond = np.array([[0.8, 0.2], [0.2, 0.8], [0.5, 0.5], [0.9, 0.1]])
grouped = JointPMF(pa[:, None] * cond)
rep = classical_capacity_report(grouped)
print(f"I = {classical_mutual_information(grouped):.4f}, chi_AB = {rep.chiAB:.4f}, D = {rep.D}")
print(rep.notes[0])
