"""Entanglement entropy, the PPT criterion, and witness operators.

A separable state keeps a positive semidefinite partial transpose, so a
negative eigenvalue of rho^T certifies entanglement.  The matching witness
is built from the eigenvector |v> of the most negative eigenvalue,

    W = (|v><v|)^T  (partial transpose on the same subsystem),

which gives Tr(W rho) = <v| rho^T |v> = lambda_min when W is rebuilt from
the very state under evaluation ("self" mode).  Separable states satisfy
Tr(W rho) >= 0, so a negative measured expectation certifies entanglement;
the converse does not hold (the test is sufficient, not necessary).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import eig_hermitian, partial_trace, partial_transpose
from .states import DensityMatrix

EIGENVALUE_DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class WitnessOperator:
    """PPT witness: partially transposed projector onto |lambda_min>."""

    n: int
    D: int
    matrix: np.ndarray = field(repr=False)
    transposed_subsystem: int
    source: str = "self"  # "self": built from the evaluated state; "fixed": reference state

    @property
    def dim(self) -> int:
        return self.D**self.n


def entanglement_entropy(rho: DensityMatrix, keep) -> float:
    """Von Neumann entropy (bits) of the reduced state on ``keep``.

    -sum_i lam_i log2(lam_i) over the eigenvalues of the partial trace,
    with 0 log 0 = 0.
    """
    keep = sorted(set(keep))
    if not keep or len(keep) >= rho.n:
        raise ValueError("keep must be a proper nonempty subset of the particles")
    reduced = partial_trace(rho.matrix, rho.dims, keep)
    lam = eig_hermitian(reduced).eigenvalues
    lam = lam[lam > 1e-15]
    return float(-(lam * np.log2(lam)).sum()) + 0.0


def _canonical_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible amplitude is real positive."""
    for a in vec:
        if abs(a) > 1e-12:
            return vec * (abs(a) / a)
    return vec


def ppt_min_eigenpair(rho: DensityMatrix, subsystem: int):
    """Minimum eigenvalue and eigenvector of the partial transpose.

    A negative eigenvalue certifies entanglement across the chosen cut.  If
    the minimum eigenvalue is degenerate, the eigenvector with the
    lexicographically largest absolute-amplitude pattern is selected and its
    global phase fixed, so repeated runs give identical witnesses.
    """
    pt = partial_transpose(rho.matrix, rho.dims, subsystem)
    res = eig_hermitian(pt)
    lam = res.eigenvalues
    scale = max(1.0, float(np.abs(lam).max()))
    candidates = np.nonzero(lam - lam[0] <= EIGENVALUE_DEGENERACY_TOL * scale)[0]
    best = candidates[0]
    if len(candidates) > 1:
        best = max(candidates,
                   key=lambda i: tuple(np.round(np.abs(res.eigenvectors[:, i]), 12)))
    vec = _canonical_phase(res.eigenvectors[:, best])
    return float(lam[0]), vec


def build_witness(rho_ref: DensityMatrix, subsystem: int,
                  source: str = "self") -> WitnessOperator:
    """Witness from the reference state's partial transpose.

    The projector convention is used (Tr W = 1), under which the witness
    expectation on the construction state equals the minimum eigenvalue of
    its partial transpose exactly.
    """
    if source not in ("self", "fixed"):
        raise ValueError(f"source must be 'self' or 'fixed', got {source!r}")
    _, vec = ppt_min_eigenpair(rho_ref, subsystem)
    projector = np.outer(vec, vec.conj())
    w = partial_transpose(projector, rho_ref.dims, subsystem)
    return WitnessOperator(n=rho_ref.n, D=rho_ref.D, matrix=w,
                           transposed_subsystem=subsystem, source=source)


def witness_expectation(w: WitnessOperator, rho: DensityMatrix) -> float:
    """Real part of Tr(W rho); the imaginary residue must be negligible."""
    if w.dim != rho.dim:
        raise ValueError(f"witness dim {w.dim} does not match state dim {rho.dim}")
    value = complex(np.trace(w.matrix @ rho.matrix))
    if abs(value.imag) > 1e-10:
        raise ValueError(f"witness expectation has imaginary residue {value.imag:.3e}")
    return value.real
