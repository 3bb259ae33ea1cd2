"""Validated quantum states and the conditional operators of a bipartite key."""

from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from .matcore import (
    HERMITIAN_TOL,
    ORTHONORMAL_TOL,
    as_matrix,
    dagger,
    hermiticity_error,
    max_abs,
    partial_trace,
    tensor,
)

if TYPE_CHECKING:
    from .scramble import BlockStructure

PSD_TOL = 1e-9
UNIT_TRACE_TOL = 1e-9


class InvalidStateError(ValueError):
    """A matrix failed a density-operator invariant.

    ``invariant`` names the violated condition and ``margin`` is the amount
    by which it was missed.
    """

    def __init__(self, invariant: str, margin: float, detail: str = ""):
        self.invariant = invariant
        self.margin = float(margin)
        msg = f"{invariant} invariant violated (margin {self.margin:.6g})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NonOrthonormalBasisError(ValueError):
    pass


class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Eigenvalues in ``[-1e-9, 0)`` are clamped to zero; a valid input without
    such eigenvalues is stored bit-identically.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix):
        if isinstance(matrix, DensityOperator):
            self._matrix = matrix._matrix
            return
        m = as_matrix(matrix).copy()
        herr = hermiticity_error(m)
        if herr > HERMITIAN_TOL:
            raise InvalidStateError("hermiticity", herr, f"max |m - m^dagger| > {HERMITIAN_TOL:g}")
        tr = np.trace(m)
        terr = abs(tr - 1.0)
        if terr > UNIT_TRACE_TOL:
            raise InvalidStateError("unit-trace", terr, f"trace = {tr.real:.12g}")
        vals, vecs = np.linalg.eigh(0.5 * (m + dagger(m)))
        lo = float(vals.min())
        if lo < -PSD_TOL:
            raise InvalidStateError("positive-semidefinite", -lo, f"smallest eigenvalue {lo:.6g}")
        if lo < 0:
            vals = np.clip(vals, 0.0, None)
            m = (vecs * vals) @ dagger(vecs)
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._matrix if dtype is None else self._matrix.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, DensityOperator):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self._matrix, other._matrix)

    def __hash__(self):
        return hash(self._matrix.tobytes())

    def __repr__(self):
        return f"DensityOperator(dim={self.dim})"

    def allclose(self, other, atol: float = 1e-9) -> bool:
        return max_abs(self._matrix - np.asarray(other)) <= atol

    @classmethod
    def from_ket(cls, psi) -> "DensityOperator":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, np.conj(psi)))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim) / dim)


class BipartiteState:
    """Density operator on ``C^dA ⊗ C^dB`` (A-major index order)."""

    __slots__ = ("state", "dA", "dB")

    def __init__(self, state, dA: int, dB: int):
        state = DensityOperator(state)
        if dA < 1 or dB < 1 or state.dim != dA * dB:
            raise InvalidStateError(
                "factor-dimension", abs(state.dim - dA * dB), f"dim {state.dim} != dA*dB = {dA}*{dB}"
            )
        self.state = state
        self.dA = int(dA)
        self.dB = int(dB)

    @property
    def matrix(self) -> np.ndarray:
        return self.state.matrix

    @property
    def dim(self) -> int:
        return self.state.dim

    def __array__(self, dtype=None, copy=None):
        return self.state.__array__(dtype)

    def __repr__(self):
        return f"BipartiteState(dA={self.dA}, dB={self.dB})"

    def allclose(self, other, atol: float = 1e-9) -> bool:
        return self.state.allclose(other, atol)

    @classmethod
    def product(cls, rho_a, rho_b) -> "BipartiteState":
        a, b = DensityOperator(rho_a), DensityOperator(rho_b)
        return cls(tensor(a.matrix, b.matrix), a.dim, b.dim)

    @classmethod
    def from_ket(cls, psi, dA: int, dB: int) -> "BipartiteState":
        return cls(DensityOperator.from_ket(psi), dA, dB)


def bell_state() -> BipartiteState:
    """(|00> + |11>)/sqrt(2)."""
    return BipartiteState.from_ket([1, 0, 0, 1], 2, 2)


def marginal(s: BipartiteState, which: str = "A") -> DensityOperator:
    return DensityOperator(partial_trace(s.matrix, s.dA, s.dB, keep=which))


def _check_orthonormal(basis: np.ndarray, dim: int) -> None:
    if basis.shape != (dim, dim):
        raise NonOrthonormalBasisError(f"basis must be {dim}x{dim} (columns are vectors), got {basis.shape}")
    err = max_abs(dagger(basis) @ basis - np.eye(dim))
    if err > ORTHONORMAL_TOL:
        raise NonOrthonormalBasisError(f"basis is not orthonormal: max |V^dagger V - I| = {err:.3g}")


def conditional_blocks(s: BipartiteState, basis_a=None) -> np.ndarray:
    """Partial matrix elements ``w[k, l] = <k_A| rho |l_A>`` as B operators.

    ``basis_a`` holds the A basis vectors as columns (computational basis
    when omitted).  Returns an array of shape ``(dA, dA, dB, dB)`` so that
    ``rho = sum_kl |k><l| ⊗ w[k, l]``.
    """
    if basis_a is None:
        basis_a = np.eye(s.dA)
    basis_a = np.asarray(basis_a, dtype=np.complex128)
    _check_orthonormal(basis_a, s.dA)
    t = s.matrix.reshape(s.dA, s.dB, s.dA, s.dB)
    return np.einsum("ik,ibjc,jl->klbc", np.conj(basis_a), t, basis_a, optimize=True)


def rebuild_from_blocks(w: np.ndarray, basis_a=None) -> np.ndarray:
    """Inverse of :func:`conditional_blocks`: ``sum_kl |k><l| ⊗ w[k, l]``."""
    dA, _, dB, _ = w.shape
    if basis_a is None:
        basis_a = np.eye(dA)
    basis_a = np.asarray(basis_a, dtype=np.complex128)
    t = np.einsum("ik,klbc,jl->ibjc", basis_a, w, np.conj(basis_a), optimize=True)
    return t.reshape(dA * dB, dA * dB)


class ConditionalBlock(NamedTuple):
    weight: float
    rho_b: DensityOperator


def trace_of_blocks_check(s: BipartiteState, blocks: "BlockStructure") -> list[ConditionalBlock]:
    """Block weights ``P_K`` and conditional B states for each eigen-block of rho_A.

    ``rho_B_K = (1/P_K) sum_m w_{Km, Km}``; the mixture ``sum_K P_K rho_B_K``
    reproduces rho_B because the kernel of rho_A carries no weight.
    """
    out = []
    t = s.matrix.reshape(s.dA, s.dB, s.dA, s.dB)
    for blk in blocks.blocks:
        if blk.weight <= 1e-12:
            continue
        v = blk.basis
        acc = np.einsum("im,ibjc,jm->bc", np.conj(v), t, v, optimize=True)
        out.append(ConditionalBlock(blk.weight, DensityOperator(acc / blk.weight)))
    return out
