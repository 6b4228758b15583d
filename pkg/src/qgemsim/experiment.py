"""Finite-shot simulation of witness measurements and shot-count planning.

Each shot projectively measures one Pauli string (or one whole QWC group,
which costs a single joint measurement but yields an outcome for every
member).  Outcomes are +/-1 eigenvalues; the witness estimate combines the
per-term sample means with the decomposition coefficients,

    <W>   = c_I + sum_P c_P mean_P,
    s_W^2 = sum_P c_P^2 var_P / shots_P   (within-group covariances neglected),

and certification is a one-sided test of the null <W> >= 0: with the large
per-term shot counts used here the t statistic is evaluated against the
standard normal tail, so confidence = Phi(-<W>/s_W).

The minimum budget needed to certify at a target confidence is a stochastic
quantity.  A budget counts as sufficient only when every one of a small
number of independent replicate simulations certifies, which approximates
the point where a confidence-versus-shots curve settles above the target
rather than first touches it; the search brackets by doubling, refines by
binary search with a fresh derived seed per probe, and reports the median
over a seed set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entanglement import build_witness, witness_expectation
from .geometry import PhysicalParams, SetupGeometry, phase_table
from .pauli import MeasurementPlan, PauliDecomposition, group_ldfc, is_identity
from .states import DensityMatrix, evolved_density_matrix

MODES = ("ungrouped", "grouped")

_BASIS_ROTATION = {
    "I": np.eye(2, dtype=complex),
    "Z": np.eye(2, dtype=complex),
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "Y": np.array([[1, -1j], [1, 1j]], dtype=complex) / math.sqrt(2),
}


class NotCertifiableError(RuntimeError):
    """The witness expectation is non-negative: no budget can certify."""


@dataclass(frozen=True)
class TermRecord:
    """Shot statistics of one Pauli string."""

    pauli: str
    shots: int
    outcome_sum: int
    mean: float
    variance: float  # sample variance (ddof=1) of the +/-1 outcomes


@dataclass(frozen=True)
class MeasurementRecord:
    """Per-term statistics of one simulated run plus its total shot cost."""

    entries: dict  # pauli -> TermRecord
    total_shots: int
    rng_seed: int | None = None


@dataclass(frozen=True)
class ConfidenceReport:
    witness_mean: float
    stderr: float
    t_value: float
    p_value: float
    confidence: float
    total_shots: int


def normal_tail(x: float) -> float:
    """P(N(0,1) > x)."""
    return 0.5 * math.erfc(x / math.sqrt(2))


def _pauli_expectation(rho: DensityMatrix, pauli: str) -> float:
    from .pauli import pauli_matrix

    value = float(np.trace(pauli_matrix(pauli) @ rho.matrix).real)
    if abs(value) > 1 + 1e-9:
        raise ValueError(f"|<{pauli}>| = {abs(value)} > 1: invalid state")
    return value


def _stats_from_counts(pauli: str, shots: int, plus_count: int) -> TermRecord:
    outcome_sum = 2 * plus_count - shots
    mean = outcome_sum / shots
    variance = shots * (1 - mean**2) / (shots - 1) if shots > 1 else 0.0
    return TermRecord(pauli=pauli, shots=shots, outcome_sum=outcome_sum,
                      mean=mean, variance=variance)


def sample_term(rho: DensityMatrix, pauli: str, shots: int,
                rng: np.random.Generator) -> TermRecord:
    """Draw +/-1 outcomes of one Pauli string: Pr(+1) = (1 + <P>)/2."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if is_identity(pauli):
        raise ValueError("the identity term is not measured")
    p_plus = min(max((1 + _pauli_expectation(rho, pauli)) / 2, 0.0), 1.0)
    plus = int(rng.binomial(shots, p_plus))
    return _stats_from_counts(pauli, shots, plus)


def _group_outcome_probs(rho: DensityMatrix, basis: str) -> np.ndarray:
    """Joint probabilities of the 2**n outcomes in the rotated product basis."""
    u = np.eye(1, dtype=complex)
    for letter in basis:
        u = np.kron(u, _BASIS_ROTATION[letter])
    probs = np.real(np.diag(u @ rho.matrix @ u.conj().T))
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def _member_parities(pauli: str) -> np.ndarray:
    """+/-1 value of a member string for every joint outcome index."""
    n = len(pauli)
    values = np.ones(2**n)
    outcomes = np.arange(2**n)
    for pos, letter in enumerate(pauli):
        if letter != "I":
            bits = (outcomes >> (n - 1 - pos)) & 1
            values = values * (1 - 2 * bits)
    return values


def sample_group(rho: DensityMatrix, members, basis: str, shots: int,
                 rng: np.random.Generator) -> dict:
    """Jointly measure a QWC group; one shot serves every member string.

    Each shot measures every particle in the group's shared basis letter;
    a member's outcome is the product of its non-identity positions.  The
    marginal statistics of each member match `sample_term` in distribution.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    from .pauli import qwc

    members = list(members)
    for i, p in enumerate(members):
        for q in members[i + 1:]:
            if not qwc(p, q):
                raise ValueError(f"group members {p} and {q} do not qubit-wise commute")
        for pos, letter in enumerate(p):
            if letter != "I" and letter != basis[pos]:
                raise ValueError(f"member {p} is not diagonal in basis {basis}")
    counts = rng.multinomial(shots, _group_outcome_probs(rho, basis))
    records = {}
    for pauli in members:
        values = _member_parities(pauli)
        plus = int(counts[values > 0].sum())
        records[pauli] = _stats_from_counts(pauli, shots, plus)
    return records


def _allocate(budget: int, units: int) -> list:
    """Round-robin split: equal shares, remainder to the earliest units."""
    base, extra = divmod(budget, units)
    return [base + (1 if i < extra else 0) for i in range(units)]


def measure_budget(rho: DensityMatrix, decomp: PauliDecomposition, budget: int,
                   rng: np.random.Generator, plan: MeasurementPlan | None = None,
                   rng_seed: int | None = None) -> MeasurementRecord:
    """Spend a total shot budget on the witness terms.

    Without a plan each non-identity term is sampled separately; with a plan
    each QWC group is sampled jointly and its shot count serves all members.
    """
    if plan is None:
        indices = decomp.non_identity_indices()
        if budget < 2 * len(indices):
            raise ValueError(f"budget {budget} gives fewer than 2 shots to some term")
        entries = {}
        for idx, shots in zip(indices, _allocate(budget, len(indices))):
            pauli = decomp.terms[idx][0]
            entries[pauli] = sample_term(rho, pauli, shots, rng)
    else:
        n_groups = len(plan.groups)
        if budget < 2 * n_groups:
            raise ValueError(f"budget {budget} gives fewer than 2 shots to some group")
        entries = {}
        for g, shots in enumerate(_allocate(budget, n_groups)):
            entries.update(sample_group(rho, plan.group_strings(g), plan.bases[g],
                                        shots, rng))
    return MeasurementRecord(entries=entries, total_shots=budget, rng_seed=rng_seed)


def estimate_witness(decomp: PauliDecomposition,
                     record: MeasurementRecord) -> ConfidenceReport:
    """Combine per-term statistics into the witness estimate and its test.

    The identity term contributes its coefficient exactly with zero
    variance.  Zero total variance is degenerate but allowed: the report
    then has confidence 1 when the mean is negative and 0 otherwise.
    """
    mean = 0.0
    var = 0.0
    for letters, c in decomp.terms:
        if is_identity(letters):
            mean += c
            continue
        entry = record.entries.get(letters)
        if entry is None:
            raise ValueError(f"no measurement record for term {letters}")
        if entry.shots < 2:
            raise ValueError(f"term {letters} has {entry.shots} < 2 shots")
        mean += c * entry.mean
        var += c**2 * entry.variance / entry.shots
    stderr = math.sqrt(var)
    if stderr == 0.0:
        confidence = 1.0 if mean < 0 else 0.0
        return ConfidenceReport(witness_mean=mean, stderr=0.0, t_value=math.inf,
                                p_value=1.0 - confidence, confidence=confidence,
                                total_shots=record.total_shots)
    confidence = normal_tail(mean / stderr)
    return ConfidenceReport(witness_mean=mean, stderr=stderr,
                            t_value=abs(mean) / stderr, p_value=1.0 - confidence,
                            confidence=confidence, total_shots=record.total_shots)


@dataclass(frozen=True)
class WitnessInstance:
    """Everything needed to simulate measurements of one witness."""

    rho: DensityMatrix
    decomposition: PauliDecomposition
    plan: MeasurementPlan = field(repr=False)
    expectation: float

    @property
    def n_terms(self) -> int:
        return len(self.decomposition.non_identity_indices())

    @property
    def n_groups(self) -> int:
        return len(self.plan.groups)


def prepare_instance(setup: SetupGeometry, params: PhysicalParams, subsystem: int,
                     gamma: float, tau: float) -> WitnessInstance:
    """Evolved state, self-witness decomposition and QWC plan for one point."""
    from .pauli import decompose

    rho = evolved_density_matrix(phase_table(setup, params), tau, gamma)
    witness = build_witness(rho, subsystem)
    decomp = decompose(witness.matrix, setup.n)
    return WitnessInstance(rho=rho, decomposition=decomp, plan=group_ldfc(decomp),
                           expectation=witness_expectation(witness, rho))


def simulate_confidence(instance: WitnessInstance, budget: int, mode: str,
                        rng: np.random.Generator) -> ConfidenceReport:
    plan = instance.plan if mode == "grouped" else None
    record = measure_budget(instance.rho, instance.decomposition, budget, rng, plan)
    return estimate_witness(instance.decomposition, record)


def min_shots_single_seed(instance: WitnessInstance, mode: str, target: float,
                          master_seed: int, stability_reps: int = 5,
                          floor_per_unit: int = 8, rel_precision: float = 0.05,
                          max_budget: int = 10**9) -> int:
    """Smallest budget that certifies in all replicate probes, one seed."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    seeds = np.random.SeedSequence(master_seed)

    def probe(budget: int) -> bool:
        for child in seeds.spawn(stability_reps):
            rng = np.random.default_rng(child)
            if simulate_confidence(instance, budget, mode, rng).confidence < target:
                return False
        return True

    units = instance.n_groups if mode == "grouped" else instance.n_terms
    lo = max(2 * units, floor_per_unit * units)
    budget = lo
    while not probe(budget):
        lo = budget
        budget *= 2
        if budget > max_budget:
            raise RuntimeError(f"no certifying budget found below {max_budget}")
    hi = budget
    while hi - lo > max(1, int(rel_precision * lo)):
        mid = (lo + hi) // 2
        if probe(mid):
            hi = mid
        else:
            lo = mid
    return hi


def min_shots_for_confidence(setup: SetupGeometry, params: PhysicalParams,
                             subsystem: int, gamma: float, tau: float,
                             mode: str = "ungrouped", target: float = 0.999,
                             seeds=tuple(range(11)), stability_reps: int = 5,
                             ) -> int:
    """Median over seeds of the minimal certifying shot budget.

    Raises `NotCertifiableError` when the self-witness expectation is not
    negative, since no amount of measuring can then reject separability.
    """
    instance = prepare_instance(setup, params, subsystem, gamma, tau)
    if instance.expectation >= 0:
        raise NotCertifiableError(
            f"witness expectation {instance.expectation:.4g} >= 0 at "
            f"gamma={gamma}, tau={tau}: entanglement not certifiable")
    values = [min_shots_single_seed(instance, mode, target, seed, stability_reps)
              for seed in seeds]
    return int(np.median(values))
