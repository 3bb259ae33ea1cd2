"""Entropic functionals, in bits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .matcore import max_abs, tensor
from .states import BipartiteState, DensityOperator, marginal

ZERO_EIGENVALUE = 1e-12
PRODUCT_TOL = 1e-6

State = Union[DensityOperator, BipartiteState]


def _entropy_of_spectrum(vals: np.ndarray) -> float:
    p = vals[vals > ZERO_EIGENVALUE]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho) -> float:
    """``S(rho) = -Tr rho log2 rho`` with ``0 log 0 = 0``."""
    m = np.asarray(rho, dtype=np.complex128)
    return _entropy_of_spectrum(np.linalg.eigvalsh(m))


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def binary_entropy(x: float) -> float:
    return shannon_entropy([x, 1.0 - x])


class InvalidEnsembleError(ValueError):
    pass


@dataclass(frozen=True)
class StateEnsemble:
    """Finite ensemble ``{p_alpha, rho_alpha}`` of equal-dimension states."""

    probabilities: tuple
    states: tuple

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        if len(self.states) == 0 or len(self.states) != len(probs):
            raise InvalidEnsembleError("ensemble needs one probability per member and at least one member")
        if np.any(probs < 0):
            raise InvalidEnsembleError(f"negative probability {probs.min():.3g}")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise InvalidEnsembleError(f"probabilities sum to {probs.sum():.12g}, not 1")
        dims = {st.dim for st in self.states}
        if len(dims) != 1:
            raise InvalidEnsembleError(f"member dimensions differ: {sorted(dims)}")
        object.__setattr__(self, "probabilities", tuple(float(p) for p in probs))
        object.__setattr__(self, "states", tuple(self.states))

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple]) -> "StateEnsemble":
        return cls(tuple(p for p, _ in pairs), tuple(s for _, s in pairs))

    @classmethod
    def uniform(cls, states: Sequence[State]) -> "StateEnsemble":
        n = len(states)
        return cls((1.0 / n,) * n, tuple(states))

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(zip(self.probabilities, self.states))


def average_state(e: StateEnsemble) -> State:
    acc = sum(p * np.asarray(st) for p, st in e)
    first = e.states[0]
    if isinstance(first, BipartiteState):
        return BipartiteState(acc, first.dA, first.dB)
    return DensityOperator(acc)


def holevo_chi(e: StateEnsemble) -> float:
    """``S(average) - sum_alpha p_alpha S(rho_alpha)``."""
    avg = von_neumann_entropy(average_state(e))
    return avg - sum(p * von_neumann_entropy(st) for p, st in e if p > 0)


def mutual_information(s: BipartiteState) -> float:
    sa = von_neumann_entropy(marginal(s, "A"))
    sb = von_neumann_entropy(marginal(s, "B"))
    return sa + sb - von_neumann_entropy(s)


def coherent_information(s: BipartiteState) -> float:
    """``S(rho_A) - S(rho_AB)``."""
    return von_neumann_entropy(marginal(s, "A")) - von_neumann_entropy(s)


def product_deviation(s: BipartiteState) -> float:
    """Max-entry distance between ``s`` and the product of its marginals."""
    prod = tensor(marginal(s, "A").matrix, marginal(s, "B").matrix)
    return max_abs(s.matrix - prod)


def is_product_state(s: BipartiteState, tol: float = PRODUCT_TOL) -> bool:
    return product_deviation(s) <= tol
