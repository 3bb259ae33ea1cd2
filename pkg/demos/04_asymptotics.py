# %% [markdown]
# # Many copies of the key
#
# n copies of rho_A have at most (n+1)^d distinct eigenvalues, one per type
# class, so the per-copy rate lost to block labels is at most
# (d/n) log2(n+1) and vanishes as n grows.

# %%
import numpy as np

from qotp import asymptotic_schedule, bell_state, count_tensor_eigenvalues, marginal, mutual_information

key = bell_state()
sched = asymptotic_schedule(marginal(key, "A"), mutual_information(key), 1000)
for row in (sched[0], sched[9], sched[99], sched[999]):
    print(f"n={row.n:5d}  per-copy rate >= {row.rateLowerBound:.6f}")

# %% Exact eigenvalue counts against the type-class bound
for eigs in ([0.5, 0.5], [0.7, 0.3], [0.5, 0.25, 0.25], [0.5, 0.3, 0.2]):
    d = len(eigs)
    counts = [count_tensor_eigenvalues(eigs, n) for n in range(1, 9)]
    print(eigs, counts, "bound at n=8:", 9**d)
