# %% [markdown]
# # Leaking a little to Eve
#
# If Alice's operations are allowed to change what Eve sees, the extra
# capacity to Bob is at most what Eve could learn, chi_A.  Here Alice either
# does nothing or resets her qubit to |0>, each with probability p.

# %%
import numpy as np

from qotp import bell_state, insecure_bound_check

identity = [np.eye(2)]
reset = [np.outer([1, 0], [1, 0]), np.outer([1, 0], [0, 1])]

print(f"{'p':>5} {'chi_A':>8} {'chi_AB':>8} {'I + chi_A':>10}  holds")
for p in np.linspace(0.0, 1.0, 11):
    res = insecure_bound_check(bell_state(), [(1 - p, identity), (p, reset)])
    print(f"{p:5.2f} {res.chiA:8.4f} {res.chiAB:8.4f} {res.bound:10.4f}  {res.holds}")

# %% Random noisy channels on A
from qotp.sampling import random_bipartite, random_channel

rng = np.random.default_rng(3)
slack = []
for _ in range(200):
    key = random_bipartite(2, 2, rng=rng)
    ops = [(0.5, random_channel(2, n_kraus=2, rng=rng)), (0.5, random_channel(2, n_kraus=3, rng=rng))]
    res = insecure_bound_check(key, ops)
    slack.append(res.bound - res.chiAB)
print("smallest slack over 200 trials:", min(slack))
