"""Pauli-string decomposition and qubit-wise-commuting measurement groups.

A Hermitian qubit observable expands as O = sum_P c_P P over the 4**n
tensor products of {I, X, Y, Z}, with real c_P = Tr(P O)/2**n.  Strings are
written as plain letter sequences ("ZIX"), particle 1 first.

Two strings qubit-wise commute (QWC) when at every position the letters are
equal or at least one is the identity; a QWC group can be measured jointly
with single-particle basis rotations only.  Groups are built by first-fit
graph coloring of the conflict graph (edge = not QWC).  The default visits
vertices in decomposition order, which reproduces the published group
structure for these witnesses; a largest-degree-first order is available
for comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .entanglement import build_witness
from .geometry import PhysicalParams, SetupGeometry, phase_table
from .states import evolved_density_matrix

PAULI_LETTERS = "IXYZ"
PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DEFAULT_ZERO_THRESHOLD = 1e-9


def pauli_matrix(letters: str) -> np.ndarray:
    """Dense matrix of a Pauli string, particle 1 most significant."""
    m = np.eye(1, dtype=complex)
    for letter in letters:
        m = np.kron(m, PAULI_1Q[letter])
    return m


@lru_cache(maxsize=8)
def _all_strings(n: int) -> tuple:
    """All 4**n Pauli strings in lexicographic (I < X < Y < Z) order."""
    strings = [""]
    for _ in range(n):
        strings = [s + letter for s in strings for letter in PAULI_LETTERS]
    return tuple(strings)


def is_identity(letters: str) -> bool:
    return set(letters) == {"I"}


@dataclass(frozen=True)
class PauliDecomposition:
    """Thresholded expansion of a Hermitian operator in the Pauli basis."""

    n: int
    terms: tuple  # of (letters, coefficient), in lexicographic string order
    zero_threshold: float

    @property
    def identity_coefficient(self) -> float:
        for letters, c in self.terms:
            if is_identity(letters):
                return c
        return 0.0

    def non_identity_indices(self) -> list:
        return [i for i, (letters, _) in enumerate(self.terms) if not is_identity(letters)]

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((2**self.n, 2**self.n), dtype=complex)
        for letters, c in self.terms:
            out += c * pauli_matrix(letters)
        return out


def decompose(op: np.ndarray, n: int,
              zero_threshold: float = DEFAULT_ZERO_THRESHOLD) -> PauliDecomposition:
    """Expand a Hermitian operator over Pauli strings, dropping tiny terms.

    Only qubit registers are supported (dim must be 2**n); qudit operator
    bases are out of scope here.
    """
    dim = 2**n
    if op.shape != (dim, dim):
        raise ValueError(f"operator shape {op.shape} is not 2^{n} square; "
                         "only qubit (D=2) decompositions are supported")
    terms = []
    for letters in _all_strings(n):
        c = complex(np.trace(pauli_matrix(letters) @ op)) / dim
        if abs(c.imag) > 1e-10:
            raise ValueError(f"non-real coefficient for {letters}: {c}")
        if abs(c.real) >= zero_threshold:
            terms.append((letters, c.real))
    return PauliDecomposition(n=n, terms=tuple(terms), zero_threshold=zero_threshold)


def qwc(p: str, q: str) -> bool:
    """Qubit-wise commutation: letters equal or identity at every position."""
    if len(p) != len(q):
        raise ValueError("Pauli strings must have equal length")
    return all(a == b or a == "I" or b == "I" for a, b in zip(p, q))


@dataclass(frozen=True)
class MeasurementPlan:
    """Partition of the non-identity terms into jointly measurable groups.

    ``groups`` holds indices into the decomposition's term list; ``bases``
    gives each group's shared per-particle measurement letter (positions
    where every member is identity default to Z).
    """

    n: int
    groups: tuple  # of tuples of term indices
    bases: tuple   # of letter strings, one per group
    decomposition: PauliDecomposition = field(repr=False)

    def group_strings(self, g: int) -> list:
        return [self.decomposition.terms[i][0] for i in self.groups[g]]


def _shared_basis(members: list, n: int) -> str:
    basis = []
    for pos in range(n):
        letter = "Z"
        for s in members:
            if s[pos] != "I":
                letter = s[pos]
                break
        basis.append(letter)
    return "".join(basis)


def group_ldfc(decomp: PauliDecomposition, order: str = "term") -> MeasurementPlan:
    """Group the non-identity terms by first-fit coloring of the conflict graph.

    order="term" visits vertices in decomposition (lexicographic) order and
    matches the published witness groupings; order="degree" visits in
    descending conflict degree (ties broken lexicographically), the textbook
    largest-degree-first heuristic.  Colors are always tried in ascending
    index, and the identity term is excluded.
    """
    if order not in ("term", "degree"):
        raise ValueError(f"order must be 'term' or 'degree', got {order!r}")
    indices = decomp.non_identity_indices()
    strings = {i: decomp.terms[i][0] for i in indices}
    conflicts = {
        i: {j for j in indices if j != i and not qwc(strings[i], strings[j])}
        for i in indices
    }
    if order == "degree":
        ordering = sorted(indices, key=lambda i: (-len(conflicts[i]), strings[i]))
    else:
        ordering = sorted(indices, key=lambda i: strings[i])

    color: dict = {}
    for i in ordering:
        taken = {color[j] for j in conflicts[i] if j in color}
        c = 0
        while c in taken:
            c += 1
        color[i] = c

    n_groups = max(color.values()) + 1 if color else 0
    groups = [[] for _ in range(n_groups)]
    for i in ordering:
        groups[color[i]].append(i)
    bases = tuple(_shared_basis([strings[i] for i in g], decomp.n) for g in groups)
    return MeasurementPlan(n=decomp.n, groups=tuple(tuple(g) for g in groups),
                           bases=bases, decomposition=decomp)


def witness_decomposition(setup: SetupGeometry, params: PhysicalParams,
                          subsystem: int, gamma: float, tau: float,
                          zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
                          ) -> PauliDecomposition:
    """Decompose the self-witness of the evolved, dephased state."""
    if setup.D != 2:
        raise ValueError("Pauli decomposition requires qubit setups (D = 2)")
    rho = evolved_density_matrix(phase_table(setup, params), tau, gamma)
    w = build_witness(rho, subsystem)
    return decompose(w.matrix, setup.n, zero_threshold)


def operator_counts(setup: SetupGeometry, params: PhysicalParams, subsystem: int,
                    gamma: float = 0.0, tau: float | None = None):
    """(number of Pauli operators, number of QWC groups) for the self-witness.

    The identity term counts as an operator but is never grouped, matching
    the published convention (4 operators / 3 groups for the two-particle
    parallel witness).
    """
    tau = params.tau if tau is None else tau
    decomp = witness_decomposition(setup, params, subsystem, gamma, tau)
    plan = group_ldfc(decomp)
    return len(decomp.terms), len(plan.groups)


def plan_to_dict(plan: MeasurementPlan) -> dict:
    """JSON-ready view: terms, group memberships and shared bases."""
    decomp = plan.decomposition
    return {
        "n": plan.n,
        "zero_threshold": decomp.zero_threshold,
        "terms": [{"letters": letters, "coefficient": c} for letters, c in decomp.terms],
        "groups": [list(g) for g in plan.groups],
        "group_strings": [plan.group_strings(g) for g in range(len(plan.groups))],
        "bases": list(plan.bases),
        "summary": {"operators": len(decomp.terms), "groups": len(plan.groups)},
    }


def plan_to_json(plan: MeasurementPlan, indent: int = 2) -> str:
    return json.dumps(plan_to_dict(plan), indent=indent)
