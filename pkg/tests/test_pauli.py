import itertools
import json

import numpy as np
import pytest

from qgemsim.entanglement import build_witness
from qgemsim.geometry import PhysicalParams, build_setup
from qgemsim.pauli import (decompose, group_ldfc, operator_counts, pauli_matrix,
                           plan_to_dict, plan_to_json, qwc, witness_decomposition)
from qgemsim.states import evolved_density_matrix
from qgemsim.geometry import phase_table

P = PhysicalParams()

# published qubit-wise-commuting partition for the 3-particle parallel witness
REFERENCE_GROUPS = [
    {"IIX", "IXX", "XII", "XXI", "XXX"},
    {"IYY", "YIY", "YYI"},
    {"IYZ", "XYZ"},
    {"IZY", "XZY"},
    {"YIZ", "YXZ"},
    {"YZI", "YZX"},
    {"ZIY", "ZXY"},
    {"ZIZ", "ZXZ"},
    {"ZYI", "ZYX"},
    {"XZZ"},
    {"YXY"},
    {"ZZX"},
]


def witness_matrix(kind, n, gamma=0.0, tau=2.5, subsystem=1):
    rho = evolved_density_matrix(phase_table(build_setup(kind, n, 2, P), P), tau, gamma)
    return build_witness(rho, subsystem).matrix


class TestDecompose:
    def test_two_qubit_witness_terms(self):
        terms = dict(decompose(witness_matrix("parallel", 2), 2).terms)
        assert set(terms) == {"II", "XX", "YZ", "ZY"}
        assert terms["II"] == pytest.approx(0.25, abs=1e-9)
        assert terms["XX"] == pytest.approx(-0.25, abs=1e-9)
        assert abs(terms["YZ"]) == pytest.approx(0.25, abs=1e-9)
        assert abs(terms["ZY"]) == pytest.approx(0.25, abs=1e-9)

    def test_three_qubit_witness_term_count(self):
        decomp = decompose(witness_matrix("parallel", 3), 3)
        assert len(decomp.terms) == 26
        strings = {letters for letters, _ in decomp.terms}
        assert strings == {"III"} | set().union(*REFERENCE_GROUPS)

    def test_identity_operator(self):
        decomp = decompose(np.eye(4, dtype=complex) / 4, 2)
        assert decomp.terms == (("II", 0.25),)

    def test_round_trip(self):
        for kind, n in (("parallel", 2), ("parallel", 3), ("linear", 3), ("star", 3)):
            w = witness_matrix(kind, n)
            decomp = decompose(w, n)
            assert np.abs(decomp.reconstruct() - w).max() < 1e-10

    def test_coefficients_real(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        herm = (a + a.conj().T) / 2
        decomp = decompose(herm, 3, zero_threshold=0.0)
        assert all(isinstance(c, float) for _, c in decomp.terms)
        assert np.abs(decomp.reconstruct() - herm).max() < 1e-10

    def test_threshold_drops_small_terms(self):
        op = 0.5 * pauli_matrix("XX") + 1e-12 * pauli_matrix("ZZ")
        decomp = decompose(op, 2)
        assert dict(decomp.terms) == {"XX": pytest.approx(0.5)}

    def test_qudit_rejected(self):
        with pytest.raises(ValueError, match="qubit"):
            decompose(np.eye(9, dtype=complex), 2)


class TestQwc:
    def test_identity_is_compatible(self):
        assert qwc("IIX", "IXX")
        assert qwc("ZI", "IZ")

    def test_conflicting_letters(self):
        assert not qwc("XX", "YZ")
        assert not qwc("XX", "ZY")
        assert not qwc("YZ", "ZY")

    def test_reflexive_symmetric(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            p = "".join(rng.choice(list("IXYZ"), size=3))
            q = "".join(rng.choice(list("IXYZ"), size=3))
            assert qwc(p, p)
            assert qwc(p, q) == qwc(q, p)

    def test_matrix_commutation_implied(self):
        # QWC strings commute as matrices (the converse need not hold)
        for p, q in (("IIX", "IXX"), ("ZIZ", "ZXZ"), ("YZI", "YZX")):
            mp, mq = pauli_matrix(p), pauli_matrix(q)
            assert np.abs(mp @ mq - mq @ mp).max() < 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            qwc("XX", "XXX")


class TestGrouping:
    def test_mutually_compatible_set_single_group(self):
        op = (0.3 * pauli_matrix("ZI") + 0.2 * pauli_matrix("IZ")
              + 0.1 * pauli_matrix("ZZ"))
        plan = group_ldfc(decompose(op, 2))
        assert len(plan.groups) == 1

    def test_three_qubit_parallel_matches_reference(self):
        decomp = decompose(witness_matrix("parallel", 3), 3)
        plan = group_ldfc(decomp)
        got = {frozenset(plan.group_strings(g)) for g in range(len(plan.groups))}
        assert got == {frozenset(g) for g in REFERENCE_GROUPS}

    def test_groups_are_qwc_valid(self):
        for kind, n in (("parallel", 2), ("linear", 2), ("parallel", 3),
                        ("linear", 3), ("star", 3)):
            plan = group_ldfc(decompose(witness_matrix(kind, n), n))
            for g in range(len(plan.groups)):
                members = plan.group_strings(g)
                for a, b in itertools.combinations(members, 2):
                    assert qwc(a, b)
                # every member is diagonal in the shared basis
                for s in members:
                    assert all(l == "I" or l == plan.bases[g][i]
                               for i, l in enumerate(s))

    def test_partition_covers_non_identity_terms(self):
        decomp = decompose(witness_matrix("star", 3), 3)
        plan = group_ldfc(decomp)
        flat = sorted(i for g in plan.groups for i in g)
        assert flat == decomp.non_identity_indices()

    def test_degree_order_also_valid(self):
        decomp = decompose(witness_matrix("parallel", 3), 3)
        plan = group_ldfc(decomp, order="degree")
        for g in range(len(plan.groups)):
            for a, b in itertools.combinations(plan.group_strings(g), 2):
                assert qwc(a, b)
        assert len(plan.groups) <= len(decomp.non_identity_indices())

    def test_unknown_order(self):
        decomp = decompose(witness_matrix("parallel", 2), 2)
        with pytest.raises(ValueError):
            group_ldfc(decomp, order="random")


class TestOperatorCounts:
    @pytest.mark.parametrize("kind,n,expected", [
        ("parallel", 2, (4, 3)),
        ("linear", 2, (9, 8)),
        ("parallel", 3, (26, 12)),
        ("linear", 3, (47, 22)),
        ("star", 3, (56, 26)),
    ])
    def test_published_counts(self, kind, n, expected):
        setup = build_setup(kind, n, 2, P)
        assert operator_counts(setup, P, 1, gamma=0.0, tau=2.5) == expected

    def test_qudit_rejected(self):
        setup = build_setup("parallel", 2, 3, P)
        with pytest.raises(ValueError):
            operator_counts(setup, P, 1)


class TestPlanExport:
    def test_json_round_trip(self):
        decomp = witness_decomposition(build_setup("parallel", 3, 2, P), P, 1, 0.0, 2.5)
        plan = group_ldfc(decomp)
        payload = json.loads(plan_to_json(plan))
        assert payload["summary"] == {"operators": 26, "groups": 12}
        assert len(payload["terms"]) == 26
        assert payload["groups"] == [list(g) for g in plan.groups]
        assert payload["bases"] == list(plan.bases)
        rebuilt = sum(t["coefficient"] * pauli_matrix(t["letters"])
                      for t in payload["terms"])
        assert np.abs(rebuilt - decomp.reconstruct()).max() < 1e-12

    def test_dict_group_strings(self):
        decomp = witness_decomposition(build_setup("parallel", 2, 2, P), P, 1, 0.0, 2.5)
        payload = plan_to_dict(group_ldfc(decomp))
        assert payload["summary"] == {"operators": 4, "groups": 3}
        assert sorted(map(tuple, payload["group_strings"])) == [("XX",), ("YZ",), ("ZY",)]
