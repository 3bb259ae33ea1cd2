"""Marginal-preserving scrambling of Alice's subsystem.

The spectrum of rho_A is grouped into degenerate blocks.  Alice's ensemble
consists of block phases (D-th roots of unity, one per block) combined
with a discrete Weyl operator ``X^a Z^b`` inside every block.  Each member
commutes with rho_A, so subsystem A alone carries no information about
which member was applied, while the ensemble average destroys every A-B
correlation except the block label.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .functionals import StateEnsemble, von_neumann_entropy
from .matcore import dagger, hermitian_eig, local_conjugate, max_abs, tensor
from .states import BipartiteState, DensityOperator, marginal, trace_of_blocks_check

DEFAULT_GROUPING_TOL = 1e-9
ZERO_WEIGHT = 1e-12
MARGINAL_TOL = 1e-8
ENUMERATION_LIMIT = 10**6


class MarginalMismatchError(ValueError):
    pass


class EnsembleTooLargeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Block:
    eigenvalue: float
    dim: int
    basis: np.ndarray  # dA x dim, orthonormal columns
    weight: float

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ dagger(self.basis)

    @property
    def rho_a(self) -> np.ndarray:
        """Maximally mixed state on this eigenspace."""
        return self.projector / self.dim


@dataclass(frozen=True, eq=False)
class BlockStructure:
    blocks: tuple
    grouping_tol: float
    dim: int
    kernel: np.ndarray = field(repr=False)  # dA x (dA - support), orthonormal columns

    @property
    def D(self) -> int:
        return len(self.blocks)

    @property
    def block_dims(self) -> tuple:
        return tuple(b.dim for b in self.blocks)

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.blocks])

    def reconstruct(self) -> np.ndarray:
        """``sum_K lambda_K Pi_K``."""
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for b in self.blocks:
            out += b.eigenvalue * b.projector
        return out

    def summary(self) -> list[dict]:
        return [
            {"eigenvalue": b.eigenvalue, "multiplicity": b.dim, "weight": b.weight}
            for b in self.blocks
        ]


def block_decompose(rho_a, grouping_tol: float = DEFAULT_GROUPING_TOL) -> BlockStructure:
    """Group the eigenvalues of rho_A into degenerate blocks.

    Eigenvalues at or below 1e-12 form the kernel and are not counted as a
    block.  The remaining descending spectrum is split wherever two
    neighbours differ by more than ``grouping_tol * max(1, lambda_max)``;
    each block's eigenvalue is the mean of its members.
    """
    if not 1e-12 <= grouping_tol <= 1e-3:
        raise ValueError(f"grouping_tol must lie in [1e-12, 1e-3], got {grouping_tol}")
    rho_a = DensityOperator(rho_a)
    vals, vecs = hermitian_eig(rho_a.matrix)
    support = vals > ZERO_WEIGHT
    scale = grouping_tol * max(1.0, float(vals[0]))

    groups: list[list[int]] = []
    for i in np.flatnonzero(support):
        if groups and vals[groups[-1][-1]] - vals[i] <= scale:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])

    blocks = []
    for g in groups:
        lam = float(np.mean(vals[g]))
        blocks.append(Block(lam, len(g), vecs[:, g], len(g) * lam))
    kernel = vecs[:, ~support]
    return BlockStructure(tuple(blocks), grouping_tol, rho_a.dim, kernel)


def _shift(d: int) -> np.ndarray:
    return np.roll(np.eye(d), 1, axis=0)


def _clock(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def _embed(blocks: BlockStructure, k: int, op: np.ndarray) -> np.ndarray:
    """Act with ``op`` on block ``k`` and as identity everywhere else."""
    b = blocks.blocks[k].basis
    return np.eye(blocks.dim) + b @ (op - np.eye(op.shape[0])) @ dagger(b)


@dataclass(frozen=True, eq=False)
class ScramblingEnsemble:
    """Uniform ensemble indexed by ``(c, ((a_0, b_0), ..., (a_{D-1}, b_{D-1})))``.

    Member ``U = Phi(c) * prod_K X_K^{a_K} Z_K^{b_K}``, where ``Phi(c)``
    multiplies block ``K`` by ``exp(2 pi i c K / D)``.  With
    ``phases=False`` only the cyclic shifts ``X_K^{a_K}`` are kept (the
    permutation-only sub-ensemble); then ``c`` and all ``b_K`` are 0.
    """

    blocks: BlockStructure
    phases: bool = True

    @property
    def radices(self) -> tuple:
        if self.phases:
            return (self.blocks.D,) + tuple(r for d in self.blocks.block_dims for r in (d, d))
        return tuple(self.blocks.block_dims)

    @property
    def size(self) -> int:
        return math.prod(self.radices)

    def __len__(self) -> int:
        return self.size

    @property
    def probability(self) -> float:
        return 1.0 / self.size

    def indices(self) -> Iterator[tuple]:
        for flat in itertools.product(*(range(r) for r in self.radices)):
            yield self._index_from_digits(flat)

    def _index_from_digits(self, digits: Sequence[int]) -> tuple:
        if self.phases:
            c, rest = digits[0], digits[1:]
            pairs = tuple((rest[2 * k], rest[2 * k + 1]) for k in range(self.blocks.D))
        else:
            c = 0
            pairs = tuple((a, 0) for a in digits)
        return (c, pairs)

    def index_of(self, flat: int) -> tuple:
        """Mixed-radix decoding of a member number in ``range(size)``."""
        if not 0 <= flat < self.size:
            raise IndexError(flat)
        digits = []
        for r in reversed(self.radices):
            flat, dgt = divmod(flat, r)
            digits.append(dgt)
        return self._index_from_digits(digits[::-1])

    def unitary(self, index: tuple) -> np.ndarray:
        c, pairs = index
        D = self.blocks.D
        u = np.zeros((self.blocks.dim, self.blocks.dim), dtype=np.complex128)
        for k, (blk, (a, b)) in enumerate(zip(self.blocks.blocks, pairs)):
            d = blk.dim
            local = np.linalg.matrix_power(_shift(d), a) @ np.linalg.matrix_power(_clock(d), b)
            phase = np.exp(2j * np.pi * c * k / D)
            u += phase * (blk.basis @ local @ dagger(blk.basis))
        kern = self.blocks.kernel
        return u + kern @ dagger(kern)

    def member(self, flat: int) -> np.ndarray:
        return self.unitary(self.index_of(flat))

    def __iter__(self) -> Iterator[np.ndarray]:
        for idx in self.indices():
            yield self.unitary(idx)

    def twirl_channels(self) -> list[tuple[str, list[np.ndarray]]]:
        """The commuting factor channels whose composition is the ensemble average.

        Each entry is ``(name, unitaries)``; the channel is the uniform
        conjugation average over ``unitaries``.
        """
        channels = []
        bs = self.blocks
        if self.phases and bs.D > 1:
            fam = [self.unitary((c, tuple((0, 0) for _ in bs.blocks))) for c in range(bs.D)]
            channels.append(("phase", fam))
        for k, blk in enumerate(bs.blocks):
            d = blk.dim
            if d == 1:
                continue
            if self.phases:
                z = _clock(d)
                channels.append((f"z[{k}]", [_embed(bs, k, np.linalg.matrix_power(z, j)) for j in range(d)]))
            x = _shift(d)
            channels.append((f"x[{k}]", [_embed(bs, k, np.linalg.matrix_power(x, j)) for j in range(d)]))
        return channels


def build_ensemble(blocks: BlockStructure, phases: bool = True) -> ScramblingEnsemble:
    return ScramblingEnsemble(blocks, phases)


def _check_marginal(s: BipartiteState, blocks: BlockStructure) -> None:
    if blocks.dim != s.dA:
        raise MarginalMismatchError(f"block structure is for dA={blocks.dim}, state has dA={s.dA}")
    dev = max_abs(marginal(s, "A").matrix - blocks.reconstruct())
    if dev > MARGINAL_TOL:
        raise MarginalMismatchError(
            f"rho_A differs from the block reconstruction by {dev:.3g} > {MARGINAL_TOL:g}"
        )


def apply_unitary_on_a(s: BipartiteState, u: np.ndarray) -> BipartiteState:
    return BipartiteState(local_conjugate(s.matrix, u, s.dA, s.dB), s.dA, s.dB)


def _twirl(rho: np.ndarray, family: list[np.ndarray], dA: int, dB: int) -> np.ndarray:
    acc = np.zeros_like(rho)
    for u in family:
        acc += local_conjugate(rho, u, dA, dB)
    return acc / len(family)


def averaged_state(s: BipartiteState, e: ScramblingEnsemble, order: Sequence[int] | None = None) -> BipartiteState:
    """``(1/N) sum_alpha (U_alpha ⊗ I) rho (U_alpha ⊗ I)^dagger`` via sequential twirls.

    The factor channels from :meth:`ScramblingEnsemble.twirl_channels` are
    applied one after another (in ``order`` if given); they commute, so the
    order does not change the result.
    """
    _check_marginal(s, e.blocks)
    channels = e.twirl_channels()
    if order is None:
        order = range(len(channels))
    elif sorted(order) != list(range(len(channels))):
        raise ValueError(f"order must be a permutation of range({len(channels)})")
    rho = s.matrix
    for i in order:
        rho = _twirl(rho, channels[i][1], s.dA, s.dB)
    return BipartiteState(rho, s.dA, s.dB)


def enumerate_average(s: BipartiteState, e: ScramblingEnsemble, limit: int = ENUMERATION_LIMIT) -> BipartiteState:
    """Brute-force ensemble average over every member."""
    if e.size > limit:
        raise EnsembleTooLargeError(f"ensemble has {e.size} members, enumeration limit is {limit}")
    acc = np.zeros_like(s.matrix)
    for u in e:
        acc += local_conjugate(s.matrix, u, s.dA, s.dB)
    return BipartiteState(acc / e.size, s.dA, s.dB)


def member_ensemble(s: BipartiteState, e: ScramblingEnsemble, limit: int = ENUMERATION_LIMIT) -> StateEnsemble:
    """The explicit ``{1/N, sigma_AB_alpha}`` ensemble."""
    if e.size > limit:
        raise EnsembleTooLargeError(f"ensemble has {e.size} members, enumeration limit is {limit}")
    return StateEnsemble.uniform([apply_unitary_on_a(s, u) for u in e])


def averaged_state_closed_form(s: BipartiteState, blocks: BlockStructure) -> BipartiteState:
    """``sum_K P_K rho_A_K ⊗ rho_B_K``."""
    _check_marginal(s, blocks)
    sigma = np.zeros_like(s.matrix)
    for blk, cond in zip(blocks.blocks, trace_of_blocks_check(s, blocks)):
        sigma += cond.weight * tensor(blk.rho_a, cond.rho_b.matrix)
    return BipartiteState(sigma, s.dA, s.dB)


@dataclass(frozen=True)
class PrivacyReport:
    max_marginal_deviation: float
    max_commutator: float
    members_checked: int
    exhaustive: bool
    seed: int | None

    @property
    def holds(self) -> bool:
        return self.max_marginal_deviation <= 1e-9


def verify_privacy(s: BipartiteState, e, sample_count: int = 256, seed: int = 0) -> PrivacyReport:
    """Check that ensemble members leave rho_A untouched.

    ``e`` is a :class:`ScramblingEnsemble` or any sequence of unitaries on A.
    All members are checked when there are at most ``sample_count`` of them,
    otherwise a pseudorandom subset drawn with ``seed``.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rho_a = marginal(s, "A").matrix
    n = len(e)
    get = e.member if isinstance(e, ScramblingEnsemble) else (lambda i: np.asarray(e[i]))
    if n <= sample_count:
        picks, exhaustive, used_seed = range(n), True, None
    else:
        rng = np.random.default_rng(seed)
        if n < 2**62:
            picks = sorted(int(i) for i in rng.choice(n, size=sample_count, replace=False))
        else:
            picks = [int(i) for i in rng.integers(0, n, size=sample_count)]
        exhaustive, used_seed = False, seed
    dev = comm = 0.0
    for i in picks:
        u = get(i)
        dev = max(dev, max_abs(u @ rho_a @ dagger(u) - rho_a))
        comm = max(comm, max_abs(u @ rho_a - rho_a @ u))
    return PrivacyReport(dev, comm, len(picks), exhaustive, used_seed)


def ensemble_chi(s: BipartiteState, e: ScramblingEnsemble) -> float:
    """Holevo quantity of the unitary ensemble: ``S(sigma_AB) - S(rho_AB)``."""
    return von_neumann_entropy(averaged_state(s, e)) - von_neumann_entropy(s)
