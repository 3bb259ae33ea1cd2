"""Exit criteria for the package, each at its pinned tolerance.

Every test appends one PASS/FAIL line to the acceptance summary printed at
the end of the pytest run.
"""

import math
from functools import reduce

import numpy as np
import pytest

from qotp.bounds import apply_local_channel, asymptotic_schedule, capacity_report, count_tensor_eigenvalues, insecure_bound_check
from qotp.classical import JointPMF, classical_capacity_report, classical_mutual_information, embed_quantum
from qotp.functionals import StateEnsemble, average_state, coherent_information, holevo_chi, mutual_information
from qotp.matcore import dagger, max_abs
from qotp.sampling import (
    bipartite_with_marginal,
    density_with_spectrum,
    random_bipartite,
    random_channel,
    random_commuting_unitary,
    random_pmf,
)
from qotp.scramble import (
    averaged_state,
    averaged_state_closed_form,
    block_decompose,
    build_ensemble,
    ensemble_chi,
    enumerate_average,
    member_ensemble,
)
from qotp.states import BipartiteState, bell_state, marginal

DEGENERATE_PATTERNS = [
    (2,), (1, 1), (1, 2), (3,), (2, 2), (1, 3), (1, 1, 2), (4,), (2, 2, 1), (3, 2), (3, 3), (1, 1, 1),
]


def record(log, number, title, ok, detail):
    log.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})")
    assert ok, f"criterion {number} failed: {detail}"


def spectrum_from_pattern(pattern, rng, kernel=0):
    levels = np.sort(rng.dirichlet(np.ones(len(pattern))))[::-1]
    while len(levels) > 1 and np.min(np.abs(np.diff(levels))) < 1e-3:
        levels = np.sort(rng.dirichlet(np.ones(len(pattern))))[::-1]
    raw = np.concatenate([np.full(m, lv) for m, lv in zip(pattern, levels)] + [np.zeros(kernel)])
    return raw / raw.sum()


def engineered_states(rng, count, max_dim=6):
    states = []
    while len(states) < count:
        pattern = DEGENERATE_PATTERNS[len(states) % len(DEGENERATE_PATTERNS)]
        kernel = int(rng.integers(0, 2)) if sum(pattern) < max_dim else 0
        spec = spectrum_from_pattern(pattern, rng, kernel)
        dB = int(rng.integers(1, 4))
        states.append(bipartite_with_marginal(density_with_spectrum(spec, rng), dB, rng))
    return states


def small_random_states(rng, count):
    """Random keys with dA, dB <= 3, about half with a degenerate A marginal."""
    out = []
    for i in range(count):
        dA, dB = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        if i % 2 and dA > 1:
            pattern = [(2,), (1, 2), (3,)][int(rng.integers(0, 3))]
            if sum(pattern) > dA:
                pattern = (dA,)
            spec = spectrum_from_pattern(pattern, rng, dA - sum(pattern))
            out.append(bipartite_with_marginal(density_with_spectrum(spec, rng), dB, rng))
        else:
            out.append(random_bipartite(dA, dB, rank=int(rng.integers(1, dA * dB + 1)), rng=rng))
    return out


def random_preserving_ensemble(s, rng):
    """Weighted ensemble of random unitaries commuting with rho_A and the resulting member states."""
    blocks = block_decompose(marginal(s, "A"))
    m = int(rng.integers(2, 7))
    probs = rng.dirichlet(np.ones(m))
    us = [random_commuting_unitary(blocks, rng) for _ in range(m)]
    members = []
    for u in us:
        full = np.kron(u, np.eye(s.dB))
        members.append(BipartiteState(full @ s.matrix @ dagger(full), s.dA, s.dB))
    return StateEnsemble(tuple(probs), tuple(members))


def test_c01_upper_bound(acceptance_log):
    rng = np.random.default_rng(101)
    worst = -np.inf
    trials = 0
    for s in small_random_states(rng, 500):
        i_rho = mutual_information(s)
        chi = holevo_chi(random_preserving_ensemble(s, rng))
        worst = max(worst, chi - i_rho)
        e = build_ensemble(block_decompose(marginal(s, "A")))
        worst = max(worst, ensemble_chi(s, e) - i_rho)
        trials += 1
    record(acceptance_log, 1, "chiAB <= I_rho + 1e-8", trials >= 500 and worst <= 1e-8,
           f"{trials} states, max chiAB - I_rho = {worst:.3g}")


def test_c02_special_case_exact(acceptance_log):
    rng = np.random.default_rng(102)
    worst_gap = worst_sigma = 0.0
    n = 0
    while n < 100:
        dA = int(rng.integers(1, 5))
        r = int(rng.integers(1, dA + 1))
        spec = np.concatenate([np.full(r, 1.0 / r), np.zeros(dA - r)])
        s = bipartite_with_marginal(density_with_spectrum(spec, rng), int(rng.integers(1, 4)), rng)
        e = build_ensemble(block_decompose(marginal(s, "A")))
        assert e.blocks.D == 1
        i_sigma = mutual_information(averaged_state(s, e))
        worst_gap = max(worst_gap, abs(ensemble_chi(s, e) - mutual_information(s)))
        worst_sigma = max(worst_sigma, i_sigma)
        n += 1
    bell = bell_state()
    bell_chi = ensemble_chi(bell, build_ensemble(block_decompose(marginal(bell, "A"))))
    ok = worst_gap <= 1e-8 and worst_sigma <= 1e-8 and abs(bell_chi - 2.0) <= 1e-8
    record(acceptance_log, 2, "D=1 gives chiAB = I_rho exactly", ok,
           f"{n} states, max |chiAB - I_rho| = {worst_gap:.3g}, max I_sigma = {worst_sigma:.3g}, Bell chiAB = {bell_chi:.9f}")


def test_c03_closed_form_and_enumeration(acceptance_log):
    rng = np.random.default_rng(103)
    states = engineered_states(rng, 60)
    dev_closed = dev_enum = 0.0
    max_n = 0
    for s in states:
        blocks = block_decompose(marginal(s, "A"))
        e = build_ensemble(blocks)
        assert e.size <= 10**5
        max_n = max(max_n, e.size)
        sigma = averaged_state(s, e).matrix
        dev_closed = max(dev_closed, max_abs(sigma - averaged_state_closed_form(s, blocks).matrix))
        dev_enum = max(dev_enum, max_abs(sigma - enumerate_average(s, e).matrix))
    ok = len(states) >= 50 and dev_closed <= 1e-9 and dev_enum <= 1e-10
    record(acceptance_log, 3, "twirl = block closed form (1e-9) = enumeration (1e-10)", ok,
           f"{len(states)} states, N <= {max_n}, closed-form dev {dev_closed:.3g}, enumeration dev {dev_enum:.3g}")


def test_c04_lower_bound(acceptance_log):
    rng = np.random.default_rng(104)
    states = small_random_states(rng, 150) + engineered_states(rng, 60)
    states += [bell_state(), BipartiteState(np.diag([0.5, 0, 0, 0.5]), 2, 2),
               BipartiteState.product(np.diag([0.7, 0.3]), np.eye(3) / 3)]
    worst_lower = worst_sigma = np.inf
    for s in states:
        rep = capacity_report(s)
        worst_lower = min(worst_lower, rep.chiAB - (rep.I_rho - rep.logD))
        worst_sigma = min(worst_sigma, rep.logD - rep.I_sigma)
    ok = worst_lower >= -1e-8 and worst_sigma >= -1e-8
    record(acceptance_log, 4, "chiAB >= I_rho - log2 D and I_sigma <= log2 D", ok,
           f"{len(states)} states, min lower margin {worst_lower:.3g}, min log2 D - I_sigma {worst_sigma:.3g}")


def test_c05_mutual_reduction(acceptance_log):
    rng = np.random.default_rng(105)
    worst = 0.0
    count = 0
    for s in small_random_states(rng, 150) + engineered_states(rng, 40):
        i_rho = mutual_information(s)
        e = build_ensemble(block_decompose(marginal(s, "A")))
        sigma = averaged_state(s, e)
        worst = max(worst, abs(ensemble_chi(s, e) - (i_rho - mutual_information(sigma))))
        worst = max(worst, abs(holevo_chi(member_ensemble(s, e)) - (i_rho - mutual_information(sigma))))
        rand = random_preserving_ensemble(s, rng)
        worst = max(worst, abs(holevo_chi(rand) - (i_rho - mutual_information(average_state(rand)))))
        count += 3
    record(acceptance_log, 5, "chiAB = I_rho - I_sigma", worst <= 1e-8,
           f"{count} unitary ensembles, max deviation {worst:.3g}")


def test_c06_privacy(acceptance_log):
    rng = np.random.default_rng(106)
    dev = comm = chi_a = 0.0
    members = 0
    for s in engineered_states(rng, 60) + small_random_states(rng, 60):
        rho_a = marginal(s, "A").matrix
        e = build_ensemble(block_decompose(rho_a))
        for u in e:
            dev = max(dev, max_abs(u @ rho_a @ dagger(u) - rho_a))
            comm = max(comm, max_abs(u @ rho_a - rho_a @ u))
            members += 1
        chi_a = max(chi_a, holevo_chi(StateEnsemble.uniform([marginal(m, "A") for m in member_ensemble(s, e).states])))
    ok = dev <= 1e-9 and comm <= 1e-9 and chi_a <= 1e-8
    record(acceptance_log, 6, "members preserve rho_A, chiA = 0", ok,
           f"{members} members, max deviation {dev:.3g}, max commutator {comm:.3g}, max chiA {chi_a:.3g}")


def test_c07_slightly_insecure(acceptance_log):
    rng = np.random.default_rng(107)
    worst = -np.inf
    trials = 0
    for _ in range(1000):
        dA, dB = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        s = random_bipartite(dA, dB, rank=int(rng.integers(1, dA * dB + 1)), rng=rng)
        m = int(rng.integers(2, 5))
        probs = rng.dirichlet(np.ones(m))
        ops = [(p, random_channel(dA, n_kraus=int(rng.integers(2, 4)), rng=rng)) for p in probs]
        res = insecure_bound_check(s, ops)
        worst = max(worst, res.chiAB - res.bound)
        trials += 1
    record(acceptance_log, 7, "chiAB <= I_rho + chiA", trials >= 1000 and worst <= 1e-8,
           f"{trials} non-unitary ensembles, max chiAB - (I_rho + chiA) = {worst:.3g}")


def test_c08_coherent_information(acceptance_log):
    rng = np.random.default_rng(108)
    worst = -np.inf
    for _ in range(1000):
        dA, dB = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        s = random_bipartite(dA, dB, rank=int(rng.integers(1, dA * dB + 1)), rng=rng)
        out = apply_local_channel(s, random_channel(dA, n_kraus=int(rng.integers(1, 5)), rng=rng))
        worst = max(worst, coherent_information(out) - coherent_information(s))
    record(acceptance_log, 8, "coherent information never increases under channels on A", worst <= 1e-8,
           f"1000 pairs, max increase {worst:.3g}")


def _kron_count(eigs, n, rel=1e-12):
    vals = np.sort(reduce(np.kron, [np.asarray(eigs)] * n))
    count, ref = 1, vals[0]
    for v in vals[1:]:
        if v - ref > rel * abs(v):
            count, ref = count + 1, v
    return count


def test_c09_asymptotics(acceptance_log):
    rng = np.random.default_rng(109)
    spectra = [np.array([1.0]), np.array([0.5, 0.5]), np.array([0.7, 0.3]), np.array([1.0, 0.0]),
               np.array([0.5, 0.25, 0.25]), np.array([4, 2, 1]) / 7, np.ones(3) / 3,
               np.array([0.6, 0.4, 0.0]), rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(2))]
    cases = violations = mismatches = 0
    for eigs in spectra:
        d = len(eigs)
        for n in range(1, 9):
            c = count_tensor_eigenvalues(eigs, n)
            cases += 1
            violations += c > (n + 1) ** d
            mismatches += c != _kron_count(eigs, n)
    rate = asymptotic_schedule(np.eye(2) / 2, mutual_information(bell_state()), 1000)[-1].rateLowerBound
    expected = 2 - (2 / 1000) * math.log2(1001)
    ok = violations == 0 and mismatches == 0 and abs(rate - expected) <= 1e-6 and round(rate, 4) == 1.9801
    record(acceptance_log, 9, "count <= (n+1)^d; Bell rate at n=1000", ok,
           f"{cases} (d<=3, n<=8) cases, {violations} violations, {mismatches} oracle mismatches, rate {rate:.6f}")


def test_c10_classical(acceptance_log):
    rng = np.random.default_rng(110)
    worst = 0.0
    for i in range(200):
        a, b = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        j = JointPMF(random_pmf(a, b, rng))
        worst = max(worst, abs(classical_mutual_information(j) - mutual_information(embed_quantum(j))))
    worst_uniform = 0.0
    for _ in range(50):
        a, b = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        j = JointPMF(rng.dirichlet(np.ones(b), size=a) / a)
        rep = classical_capacity_report(j)
        worst_uniform = max(worst_uniform, abs(rep.chiAB - classical_mutual_information(j)))
    ok = worst <= 1e-9 and worst_uniform <= 1e-8
    record(acceptance_log, 10, "classical I = embedded quantum I; uniform marginal achieves I", ok,
           f"200 PMFs, max |I_cl - I_q| = {worst:.3g}; 50 uniform-marginal PMFs, max |chiAB - I| = {worst_uniform:.3g}")
