"""Dense complex linear algebra on small multi-particle Hilbert spaces.

All operators are plain `numpy` arrays of shape ``(dim, dim)``.  The global
index convention is fixed here once and asserted throughout the test suite:
particle 1 is the most significant digit of the basis index, so the basis
ket ``|j_1 j_2 ... j_n>`` has flat index ``sum_i j_i * D**(n-1-i)``.  This is
exactly the ordering produced by `numpy.kron`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_DIM = 10_000

# Absolute Hermiticity tolerance on unit-scale matrices.  Phases come from
# transcendental functions, so exact Hermiticity is not representable.
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class EigenResult:
    """Full Hermitian eigendecomposition, eigenvalues ascending."""

    eigenvalues: np.ndarray   # real, shape (dim,)
    eigenvectors: np.ndarray  # unit-norm columns, shape (dim, dim)


def hermiticity_defect(a: np.ndarray) -> float:
    """Max elementwise |A - A^dag|."""
    return float(np.abs(a - a.conj().T).max())


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    scale = max(1.0, float(np.abs(a).max()))
    return hermiticity_defect(a) <= tol * scale


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A^dag)/2."""
    return (a + a.conj().T) / 2


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with particle 1 as the most significant index.

    Rejects results larger than ``MAX_DIM`` (dense storage only).
    """
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise ValueError(f"tensor product dimension {dim} exceeds {MAX_DIM}")
    return np.kron(a, b)


def _check_dims(rho: np.ndarray, dims: Sequence[int]) -> None:
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(
            f"operator shape {rho.shape} does not match subsystem dims {list(dims)}"
        )


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out all subsystems not in ``keep`` (0-based indices).

    The result is ordered by ascending kept index and preserves the trace.
    """
    dims = list(dims)
    _check_dims(rho, dims)
    n = len(dims)
    keep = sorted(set(keep))
    if not keep or any(i < 0 or i >= n for i in keep):
        raise ValueError(f"invalid subsystem selection {keep} for {n} subsystems")
    t = rho.reshape(dims + dims)
    # contract row/column legs of every traced subsystem pairwise
    src = list(range(2 * n))
    for i in range(n):
        if i not in keep:
            src[n + i] = src[i]
    dest = [src[i] for i in keep] + [src[n + i] for i in keep]
    reduced = np.einsum(t, src, dest)
    dk = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(dk, dk)


def partial_transpose(rho: np.ndarray, dims: Sequence[int], subsystem: int) -> np.ndarray:
    """Transpose a single subsystem's indices, leaving the rest untouched."""
    dims = list(dims)
    _check_dims(rho, dims)
    n = len(dims)
    if not 0 <= subsystem < n:
        raise ValueError(f"subsystem {subsystem} out of range for {n} subsystems")
    t = rho.reshape(dims + dims)
    t = np.swapaxes(t, subsystem, n + subsystem)
    return t.reshape(rho.shape).copy()


def eig_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The input is checked against the Hermiticity tolerance and symmetrized
    before decomposition; dims here never exceed a few hundred, so the dense
    O(N^3) solve is the robust choice.
    """
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a, tol):
        raise ValueError(
            f"matrix is not Hermitian within tolerance: defect {hermiticity_defect(a):.3e}"
        )
    w, v = np.linalg.eigh(hermitize(a))
    return EigenResult(eigenvalues=w, eigenvectors=v)
