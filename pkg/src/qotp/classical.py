"""Classical keys: a joint distribution of (X_A, X_B) as a diagonal quantum state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import CapacityReport, capacity_report
from .scramble import DEFAULT_GROUPING_TOL
from .states import BipartiteState

PMF_TOL = 1e-12


class InvalidPMFError(ValueError):
    def __init__(self, invariant: str, margin: float, detail: str = ""):
        self.invariant = invariant
        self.margin = float(margin)
        msg = f"{invariant} invariant violated (margin {self.margin:.6g})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True, eq=False)
class JointPMF:
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 2 or 0 in p.shape:
            raise InvalidPMFError("shape", 0, f"expected a non-empty 2-d table, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InvalidPMFError("finite", 0, "table has non-finite entries")
        if p.min() < 0:
            raise InvalidPMFError("non-negative", -p.min(), f"smallest entry {p.min():.6g}")
        total = p.sum()
        if abs(total - 1.0) > PMF_TOL:
            raise InvalidPMFError("unit-sum", abs(total - 1.0), f"entries sum to {total:.15g}")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def sizeA(self) -> int:
        return self.p.shape[0]

    @property
    def sizeB(self) -> int:
        return self.p.shape[1]

    def marginal_a(self) -> np.ndarray:
        return self.p.sum(axis=1)

    def marginal_b(self) -> np.ndarray:
        return self.p.sum(axis=0)


def classical_mutual_information(j: JointPMF) -> float:
    pa = j.marginal_a()[:, None]
    pb = j.marginal_b()[None, :]
    mask = j.p > 0
    ratio = j.p[mask] / (pa * pb)[mask]
    return float(np.sum(j.p[mask] * np.log2(ratio)))


def embed_quantum(j: JointPMF) -> BipartiteState:
    """``sum_ab p(a, b) |a><a| ⊗ |b><b|`` in the computational bases."""
    return BipartiteState(np.diag(j.p.ravel()).astype(np.complex128), j.sizeA, j.sizeB)


def classical_capacity_report(j: JointPMF, grouping_tol: float = DEFAULT_GROUPING_TOL) -> CapacityReport:
    """Capacity report for a classical key via its diagonal embedding.

    On a diagonal state the block phases and clock operators act trivially,
    so the scrambling ensemble reduces to cyclic relabelings of X_A inside
    each group of equiprobable symbols.
    """
    report = capacity_report(embed_quantum(j), grouping_tol)
    pa = j.marginal_a()
    groups = []
    for blk in report.blocks:
        members = [int(a) for a in np.flatnonzero(np.abs(pa - blk["eigenvalue"]) <= max(grouping_tol, 1e-12))]
        groups.append(members)
    report.notes.append(
        "classical reading (derived): blocks are groups of equiprobable X_A symbols "
        f"{groups}; on the diagonal embedding the ensemble acts as permutations within "
        "each group, phases act trivially"
    )
    return report
