"""State preparation, gravitational phase evolution and dephasing.

The protocol starts from the uniform product superposition over all D**n
joint branches, accumulates a branch-dependent phase exp(i * rate * tau),
and (optionally) loses coherence to the environment.  Each particle's
environment record distinguishes its arms, so the off-diagonal element
between row branch b and column branch b' decays as exp(-delta*gamma*tau)
where delta counts the particles whose arm index differs between b and b'.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .geometry import BranchPhaseTable
from .linalg import MAX_DIM

NORM_TOL = 1e-12


@dataclass(frozen=True)
class QuantumState:
    """Pure state over the n-particle, D-level branch basis (MSB-first)."""

    n: int
    D: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace matrix over the branch basis."""

    n: int
    D: int
    matrix: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.D**self.n

    @property
    def dims(self) -> list:
        return [self.D] * self.n


@dataclass(frozen=True)
class DecoherenceSpec:
    """Exponential loss of environment-state overlap at rate gamma."""

    gamma: float  # Hz
    tau: float    # s

    def __post_init__(self):
        if self.gamma < 0 or self.tau < 0:
            raise ValueError("gamma and tau must be non-negative")


def initial_state(n: int, D: int) -> QuantumState:
    """Uniform product superposition: every amplitude D**(-n/2)."""
    dim = D**n
    if dim > MAX_DIM:
        raise ValueError(f"Hilbert dimension {dim} exceeds {MAX_DIM}")
    amps = np.full(dim, D ** (-n / 2), dtype=complex)
    return QuantumState(n=n, D=D, amplitudes=amps)


def evolve(state: QuantumState, table: BranchPhaseTable, tau: float) -> QuantumState:
    """Multiply each branch amplitude by exp(i * rate * tau)."""
    if (state.n, state.D) != (table.n, table.D):
        raise ValueError(
            f"state ({state.n}, {state.D}) does not match "
            f"phase table ({table.n}, {table.D})"
        )
    amps = state.amplitudes * np.exp(1j * table.rates * tau)
    return QuantumState(n=state.n, D=state.D, amplitudes=amps)


def density_matrix(state: QuantumState) -> DensityMatrix:
    """Rank-1 projector |psi><psi|."""
    m = np.outer(state.amplitudes, state.amplitudes.conj())
    return DensityMatrix(n=state.n, D=state.D, matrix=m)


def _mismatch_counts(n: int, D: int) -> np.ndarray:
    """Matrix of per-particle arm-index mismatches between all branch pairs."""
    digits = np.array(list(itertools.product(range(D), repeat=n)))  # (D**n, n)
    return (digits[:, None, :] != digits[None, :, :]).sum(axis=2)


def apply_decoherence(rho: DensityMatrix, spec: DecoherenceSpec) -> DensityMatrix:
    """Dephase in the branch basis: entry (b, b') picks up exp(-delta*gamma*tau).

    delta is the number of particles whose arm index differs between b and
    b'; diagonal entries are untouched, so the state stays unit trace and
    positive semidefinite for any gamma, tau >= 0.
    """
    decay = np.exp(-spec.gamma * spec.tau * _mismatch_counts(rho.n, rho.D))
    return DensityMatrix(n=rho.n, D=rho.D, matrix=rho.matrix * decay)


def evolved_density_matrix(table: BranchPhaseTable, tau: float,
                           gamma: float = 0.0) -> DensityMatrix:
    """Phase evolution and dephasing fused into one closed form.

    Entry (b, b') = (1/D**n) exp(i (rate_b - rate_b') tau) exp(-delta*gamma*tau).
    Equivalent to evolve + density_matrix + apply_decoherence, but builds the
    matrix in one pass; this is the workhorse for parameter sweeps.
    """
    if gamma < 0 or tau < 0:
        raise ValueError("gamma and tau must be non-negative")
    n, D = table.n, table.D
    phase = np.exp(1j * np.subtract.outer(table.rates, table.rates) * tau)
    decay = np.exp(-gamma * tau * _mismatch_counts(n, D))
    return DensityMatrix(n=n, D=D, matrix=phase * decay / D**n)
