"""Random states, unitaries and channels for experiments and property tests."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .matcore import dagger
from .scramble import BlockStructure
from .states import BipartiteState, DensityOperator


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_unitary(dim: int, rng=None) -> np.ndarray:
    """Haar-random unitary."""
    if dim == 1:
        return np.exp(2j * np.pi * _rng(rng).random()) * np.eye(1, dtype=np.complex128)
    return unitary_group.rvs(dim, random_state=_rng(rng))


def random_density(dim: int, rank: int | None = None, rng=None) -> DensityOperator:
    """Random mixed state ``G G^dagger / Tr`` from a ``dim x rank`` Ginibre matrix."""
    rng = _rng(rng)
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ dagger(g)
    return DensityOperator(m / np.trace(m).real)


def random_bipartite(dA: int, dB: int, rank: int | None = None, rng=None) -> BipartiteState:
    return BipartiteState(random_density(dA * dB, rank, rng), dA, dB)


def density_with_spectrum(spectrum, rng=None) -> DensityOperator:
    """``V diag(spectrum) V^dagger`` with Haar-random ``V``."""
    spec = np.asarray(spectrum, dtype=float)
    v = random_unitary(len(spec), rng)
    return DensityOperator((v * spec) @ dagger(v))


def bipartite_with_marginal(rho_a, dB: int, rng=None) -> BipartiteState:
    """Random correlated state ``rho_AB`` whose A marginal is exactly ``rho_a``.

    A full-rank random state is steered onto the target marginal by the local
    map ``M = sqrt(rho_a) tau_A^{-1/2}``, which keeps it positive and gives
    ``Tr_B`` equal to ``M tau_A M^dagger = rho_a``.
    """
    rng = _rng(rng)
    target = DensityOperator(rho_a).matrix
    dA = target.shape[0]
    tau = random_density(dA * dB, rng=rng).matrix
    tau_a = np.einsum("ibjb->ij", tau.reshape(dA, dB, dA, dB))
    w, v = np.linalg.eigh(tau_a)
    inv_sqrt = (v / np.sqrt(w)) @ dagger(v)
    w, v = np.linalg.eigh(target)
    # rounding-level eigenvalues would leak ~sqrt(1e-16) weight into the kernel
    w = np.where(w > 1e-12 * w.max(), w, 0.0)
    sqrt_t = (v * np.sqrt(w)) @ dagger(v)
    m = np.kron(sqrt_t @ inv_sqrt, np.eye(dB))
    out = m @ tau @ dagger(m)
    out = 0.5 * (out + dagger(out))
    return BipartiteState(out / np.trace(out).real, dA, dB)


def random_commuting_unitary(blocks: BlockStructure, rng=None) -> np.ndarray:
    """Haar-random unitary inside each eigen-block (and on the kernel) of rho_A."""
    rng = _rng(rng)
    u = np.zeros((blocks.dim, blocks.dim), dtype=np.complex128)
    for blk in blocks.blocks:
        u += blk.basis @ random_unitary(blk.dim, rng) @ dagger(blk.basis)
    k = blocks.kernel
    if k.shape[1]:
        u += k @ random_unitary(k.shape[1], rng) @ dagger(k)
    return u


def random_channel(d_in: int, d_out: int | None = None, n_kraus: int = 2, rng=None) -> list[np.ndarray]:
    """Kraus elements of a random channel, cut from a Haar isometry."""
    rng = _rng(rng)
    d_out = d_in if d_out is None else d_out
    iso = random_unitary(d_out * n_kraus, rng)[:, :d_in]
    return [iso[i * d_out:(i + 1) * d_out, :] for i in range(n_kraus)]


def random_pmf(size_a: int, size_b: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    return rng.dirichlet(np.ones(size_a * size_b)).reshape(size_a, size_b)
