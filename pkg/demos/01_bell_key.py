# %% [markdown]
# # A Bell pair as a one-time pad
#
# Alice and Bob share (|00> + |11>)/sqrt(2).  Alice's half on its own is
# maximally mixed, so every Pauli operator on it leaves what Eve can see
# unchanged.  Averaging over the four Paulis turns the key into I/4, and the
# Holevo quantity of the ensemble equals the full mutual information, 2 bits.

# %%
import numpy as np

from qotp import (
    bell_state,
    block_decompose,
    build_ensemble,
    averaged_state,
    ensemble_chi,
    marginal,
    mutual_information,
    verify_privacy,
)

key = bell_state()
print("I(A:B) =", mutual_information(key))

# %% The scrambling ensemble is the discrete Weyl set {I, X, Z, XZ}
blocks = block_decompose(marginal(key, "A"))
ens = build_ensemble(blocks)
print("blocks:", blocks.summary())
print("ensemble size:", ens.size)
for idx in ens.indices():
    print(idx, "\n", np.round(ens.unitary(idx).real, 3))

# %% Eve's view never changes
print(verify_privacy(key, ens))

# %% Bob's view: the average state is maximally mixed, so chi = S(I/4) - S(key) = 2
sigma = averaged_state(key, ens)
print("sigma == I/4:", sigma.allclose(np.eye(4) / 4))
print("chi_AB =", ensemble_chi(key, ens))
