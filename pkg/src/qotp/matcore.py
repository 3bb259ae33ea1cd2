"""Dense complex-matrix kernel.

Every operator in the package is a square ``complex128`` numpy array.  The
tensor-product index convention is A-major: the composite row index of
``(i_A, i_B)`` is ``i_A * dB + i_B``, which is what ``np.kron`` produces.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-9
ORTHONORMAL_TOL = 1e-10
TRACE_TOL = 1e-12


class DimensionMismatchError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class HermitianEigenResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite square complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def max_abs(m: np.ndarray) -> float:
    """Max-entry norm; 0.0 for empty arrays."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def tensor(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` under the A-major convention."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dA: int, dB: int, keep: str = "A") -> np.ndarray:
    """Trace out the complementary factor of a ``dA*dB`` square matrix.

    ``keep`` is ``"A"`` or ``"B"``.
    """
    m = as_matrix(m)
    if m.shape[0] != dA * dB:
        raise DimensionMismatchError(f"matrix dimension {m.shape[0]} != dA*dB = {dA}*{dB}")
    t = m.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ibjb->ij", t)
    if keep == "B":
        return np.einsum("aiaj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def hermiticity_error(m: np.ndarray) -> float:
    return max_abs(m - dagger(m))


def _normalize_phase(v: np.ndarray) -> np.ndarray:
    # Largest-magnitude component made real positive; first index wins ties.
    mags = np.abs(v)
    k = int(np.argmax(mags >= mags.max() - 1e-12))
    return v * (np.conj(v[k]) / mags[k])


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> HermitianEigenResult:
    """Eigen-decomposition with eigenvalues in descending order.

    Eigenvectors are phase normalized so their largest-magnitude component
    is real and positive.  Within a degenerate cluster (eigenvalues equal to
    within 1e-12 relative) columns are ordered lexicographically on their
    rounded entries, which makes the output reproducible across runs.
    """
    m = as_matrix(m)
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian: max |m - m^dagger| = {err:.3g} > {tol:g}")
    vals, vecs = np.linalg.eigh(0.5 * (m + dagger(m)))
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    for j in range(vecs.shape[1]):
        vecs[:, j] = _normalize_phase(vecs[:, j])

    scale = max(1.0, float(np.max(np.abs(vals))))
    order: list[int] = []
    start = 0
    n = len(vals)
    while start < n:
        stop = start + 1
        while stop < n and vals[stop - 1] - vals[stop] <= 1e-12 * scale:
            stop += 1
        cluster = list(range(start, stop))
        if len(cluster) > 1:
            def key(j: int):
                col = np.round(vecs[:, j], 9)
                return tuple(-x for pair in zip(col.real, col.imag) for x in pair)
            cluster.sort(key=key)
        order.extend(cluster)
        start = stop
    return HermitianEigenResult(vals[order], vecs[:, order])


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    return max_abs(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def local_conjugate(rho: np.ndarray, u: np.ndarray, dA: int, dB: int) -> np.ndarray:
    """``(u ⊗ I_B) rho (u ⊗ I_B)^dagger`` without forming the Kronecker product.

    ``u`` may be rectangular (``dA_out x dA``), e.g. a single Kraus element.
    """
    t = rho.reshape(dA, dB, dA, dB)
    out = np.einsum("ij,jbkc,lk->iblc", u, t, np.conj(u), optimize=True)
    d_out = u.shape[0]
    return out.reshape(d_out * dB, d_out * dB)
