"""Capacity bounds for a one-time-pad key and their asymptotics."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .functionals import StateEnsemble, holevo_chi, mutual_information
from .matcore import dagger, local_conjugate, max_abs
from .scramble import (
    DEFAULT_GROUPING_TOL,
    averaged_state,
    block_decompose,
    build_ensemble,
    ensemble_chi,
    verify_privacy,
)
from .states import BipartiteState, DensityOperator, marginal

BOUND_SLACK = 1e-8
PRIVACY_TOL = 1e-9
COMPOSITION_LIMIT = 10**7


class NotTracePreservingError(ValueError):
    pass


class EnumerationTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class BoundCheck:
    name: str
    holds: bool
    margin: float  # non-negative iff the inequality holds without slack


@dataclass
class CapacityReport:
    I_rho: float
    I_sigma: float
    chiAB: float
    chiA: float
    D: int
    logD: float
    lowerBound: float
    upperBound: float
    ensembleSize: int
    blocks: list = field(default_factory=list)
    satisfied: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.satisfied)

    def to_dict(self) -> dict:
        return asdict(self)


def capacity_report(s: BipartiteState, grouping_tol: float = DEFAULT_GROUPING_TOL, privacy_samples: int = 256) -> CapacityReport:
    """Run the scrambling pipeline on ``s`` and check the bound ladder.

    Checks recorded, each with its margin:
    ``chiAB <= I_rho``, ``chiAB >= I_rho - log2 D``, ``I_sigma <= log2 D``,
    and the privacy deviation of the ensemble members.
    """
    blocks = block_decompose(marginal(s, "A"), grouping_tol)
    ens = build_ensemble(blocks)
    sigma = averaged_state(s, ens)
    i_rho = mutual_information(s)
    i_sigma = mutual_information(sigma)
    chi = ensemble_chi(s, ens)
    log_d = math.log2(blocks.D)
    privacy = verify_privacy(s, ens, privacy_samples)

    margins = [
        ("upper: chiAB <= I_rho", i_rho - chi, BOUND_SLACK),
        ("lower: chiAB >= I_rho - log2 D", chi - (i_rho - log_d), BOUND_SLACK),
        ("I_sigma <= log2 D", log_d - i_sigma, BOUND_SLACK),
        ("privacy: max |U rho_A U^dagger - rho_A| <= 1e-9", PRIVACY_TOL - privacy.max_marginal_deviation, 0.0),
    ]
    checks = [BoundCheck(name, bool(m >= -slack), float(m)) for name, m, slack in margins]
    return CapacityReport(
        I_rho=i_rho,
        I_sigma=i_sigma,
        chiAB=chi,
        chiA=0.0,
        D=blocks.D,
        logD=log_d,
        lowerBound=i_rho - log_d,
        upperBound=i_rho,
        ensembleSize=ens.size,
        blocks=blocks.summary(),
        satisfied=checks,
    )


def _check_kraus(kraus: Sequence[np.ndarray], tol: float = 1e-9) -> list[np.ndarray]:
    ops = [np.asarray(k, dtype=np.complex128) for k in kraus]
    if not ops:
        raise NotTracePreservingError("operation has no operator-sum elements")
    d_in = ops[0].shape[1]
    total = sum(dagger(k) @ k for k in ops)
    err = max_abs(total - np.eye(d_in))
    if err > tol:
        raise NotTracePreservingError(f"sum_i E_i^dagger E_i deviates from identity by {err:.3g} > {tol:g}")
    return ops


def apply_local_channel(s: BipartiteState, kraus: Sequence[np.ndarray]) -> BipartiteState:
    """``(E ⊗ id_B)(rho)`` for a channel on A given by operator-sum elements."""
    ops = _check_kraus(kraus)
    if ops[0].shape[1] != s.dA:
        raise ValueError(f"Kraus input dimension {ops[0].shape[1]} != dA = {s.dA}")
    d_out = ops[0].shape[0]
    out = sum(local_conjugate(s.matrix, k, s.dA, s.dB) for k in ops)
    return BipartiteState(out, d_out, s.dB)


@dataclass(frozen=True)
class InsecureBoundResult:
    chiAB: float
    chiA: float
    I_rho: float
    bound: float
    holds: bool


def insecure_bound_check(s: BipartiteState, ops: Sequence[tuple]) -> InsecureBoundResult:
    """Evaluate ``chiAB <= I_rho + chiA`` for an ensemble of channels on A.

    ``ops`` is a list of ``(probability, kraus_elements)``.  The channels
    need not be unitary.
    """
    probs = np.array([p for p, _ in ops], dtype=float)
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
        raise ValueError(f"operation probabilities must be non-negative and sum to 1, got {probs.sum():.12g}")
    outs = [apply_local_channel(s, k) for _, k in ops]
    chi_ab = holevo_chi(StateEnsemble(tuple(probs), tuple(outs)))
    chi_a = holevo_chi(StateEnsemble(tuple(probs), tuple(marginal(o, "A") for o in outs)))
    i_rho = mutual_information(s)
    bound = i_rho + chi_a
    return InsecureBoundResult(chi_ab, chi_a, i_rho, bound, bool(chi_ab <= bound + BOUND_SLACK))


@dataclass(frozen=True)
class AsymptoticSchedule:
    d: int
    n: int
    I: float
    typeClassBound: float
    rateLowerBound: float
    exactDistinctEigenvalues: int | None = None


def composition_count(n: int, d: int) -> int:
    """Number of type vectors of length-``n`` sequences over ``d`` symbols."""
    return math.comb(n + d - 1, d - 1)


def _type_vectors(n: int, d: int, chunk: int = 500_000):
    """Yield arrays of ``(n_1, ..., n_d)`` rows with entries summing to ``n`` (stars and bars)."""
    if d == 1:
        yield np.array([[n]])
        return
    it = itertools.combinations(range(n + d - 1), d - 1)
    while True:
        bars = np.array(list(itertools.islice(it, chunk)), dtype=np.int64)
        if not len(bars):
            return
        edges = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), n + d - 1)])
        yield np.diff(edges, axis=1) - 1


def count_tensor_eigenvalues(eigenvalues: Sequence[float], n: int, rel_tol: float = 1e-12) -> int:
    """Distinct eigenvalues of ``rho^{⊗n}`` from the spectrum of ``rho``.

    Every eigenvalue of the tensor power is ``prod_i lambda_i^{n_i}`` for a
    type vector ``(n_1, ..., n_d)`` summing to ``n``.  Products equal to
    within ``rel_tol`` relative are counted once; zero is its own value.
    The enumeration guard applies to type vectors over the distinct
    eigenvalues.
    """
    vals = np.sort(np.asarray(eigenvalues, dtype=float))
    if n < 1 or len(vals) < 1:
        raise ValueError("need n >= 1 and at least one eigenvalue")
    # equal eigenvalues give equal products, so enumerate over distinct ones only
    keep = np.ones(len(vals), dtype=bool)
    keep[1:] = np.diff(vals) > rel_tol * np.abs(vals[1:])
    vals = vals[keep]
    d = len(vals)
    if composition_count(n, d) > COMPOSITION_LIMIT:
        raise EnumerationTooLargeError(
            f"{composition_count(n, d)} type vectors for n={n}, d={d} exceeds {COMPOSITION_LIMIT}"
        )
    positive = vals > 0
    logs = np.log(np.where(positive, vals, 1.0))
    seen_zero = False
    parts = []
    for counts in _type_vectors(n, d):
        has_zero = np.any(counts[:, ~positive] > 0, axis=1)
        seen_zero = seen_zero or bool(has_zero.any())
        parts.append(counts[~has_zero] @ logs)
    log_products = np.sort(np.concatenate(parts))
    count = int(seen_zero)
    if log_products.size:
        # a relative gap of rel_tol in the product is a gap of ~rel_tol in its log
        count += 1 + int(np.count_nonzero(np.diff(log_products) > rel_tol))
    return count


def asymptotic_schedule(
    rho_a, I: float, n_max: int, exact_limit: int = 0
) -> list[AsymptoticSchedule]:
    """Per-copy rate lower bound ``I - (d/n) log2(n+1)`` for ``n = 1..n_max``.

    When ``exact_limit > 0`` the exact distinct-eigenvalue count of
    ``rho_a^{⊗n}`` is filled in for every ``n`` whose type-vector count does
    not exceed ``exact_limit``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rho_a = DensityOperator(rho_a)
    d = rho_a.dim
    spectrum = np.linalg.eigvalsh(rho_a.matrix)
    spectrum[spectrum <= 1e-12] = 0.0
    out = []
    for n in range(1, n_max + 1):
        tcb = d * math.log2(n + 1)
        exact = None
        if exact_limit and composition_count(n, d) <= exact_limit:
            exact = count_tensor_eigenvalues(spectrum, n)
        out.append(AsymptoticSchedule(d, n, float(I), tcb, float(I) - tcb / n, exact))
    return out
