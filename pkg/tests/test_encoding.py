import random
from fractions import Fraction

import pytest

from ltlfmine.encoding import (EncodingError, EncodingInstance, OperatorPool,
                               default_pool)
from ltlfmine.formula import parse_formula
from ltlfmine.maxsat import HARD_UNSAT, OPTIMAL, solve_optimal
from ltlfmine.sample import (omega_uniform, parse_sample, weighted_loss)
from ltlfmine.sat import SatSolver
from helpers import random_sample

BASIC = "1,0;1,1\n0,1\n---\n0,0\n1,0\n"


def instance_for(text, n, pool=None):
    sample = parse_sample(text)
    return EncodingInstance(n, sample, omega_uniform(sample), pool)


class TestOperatorPool:
    def test_default_pool_labels(self):
        pool = default_pool(("p", "q"))
        assert pool.labels == ("p", "q", "!", "X", "F", "G", "|", "&", "->", "U")
        assert pool.is_nullary("p") and not pool.is_nullary("U")

    def test_constants_optional(self):
        pool = OperatorPool(("p",), constants=("true", "false"))
        assert "true" in pool.nullary

    def test_clashing_proposition_rejected(self):
        with pytest.raises(ValueError, match="clash"):
            OperatorPool(("X",))


class TestStructuralClauses:
    def test_label_clause_count_n3_ten_labels(self):
        # one at-least-one clause plus C(10,2) pairwise exclusions per
        # node: 3 * (1 + 45) = 138
        inst = instance_for(BASIC, 3)
        assert len(inst.pool.labels) == 10
        count = (len(inst.structural_groups["label_alo"])
                 + len(inst.structural_groups["label_amo"]))
        assert count == 138

    def test_child_clause_counts(self):
        inst = instance_for(BASIC, 3)
        # node 2: 1 choice, node 3: 2 choices -> ALO 2 clauses each side,
        # AMO only for node 3 (one pair) each side
        assert len(inst.structural_groups["left_alo"]) == 2
        assert len(inst.structural_groups["right_alo"]) == 2
        assert len(inst.structural_groups["left_amo"]) == 1
        assert len(inst.structural_groups["right_amo"]) == 1

    def test_first_node_nullary(self):
        inst = instance_for(BASIC, 2)
        clause = inst.structural_groups["first_node_nullary"][0]
        assert sorted(clause) == sorted(
            inst.x[(1, p)] for p in inst.pool.nullary)

    def test_size_one_has_no_child_variables(self):
        inst = instance_for(BASIC, 1)
        assert inst.l == {} and inst.r == {}

    def test_invalid_size(self):
        with pytest.raises(ValueError):
            instance_for(BASIC, 0)


class TestModels:
    def hard_solver(self, inst):
        solver = SatSolver()
        solver.ensure_var(inst.wcnf.nvars)
        for c in inst.wcnf.hard:
            solver.add_clause(c)
        return solver

    def test_hard_clauses_satisfiable(self):
        for n in (1, 2, 3):
            inst = instance_for(BASIC, n)
            assert self.hard_solver(inst).solve()

    def test_decode_known_structure(self):
        inst = instance_for(BASIC, 2)
        f = parse_formula("F p1", ("p0", "p1"))
        solver = self.hard_solver(inst)
        assert solver.solve(inst.structure_assumptions(f))
        assert inst.decode_model(solver.full_model()) == f

    def test_clamped_structure_valuations_match_semantics(self):
        rng = random.Random(21)
        sample = parse_sample(BASIC)
        inst = EncodingInstance(3, sample, omega_uniform(sample))
        solver = self.hard_solver(inst)
        for text in ("p0 U p1", "! (X p0)", "F (G p1)", "G (p0 -> p0)"):
            f = parse_formula(text, sample.alphabet)
            assert f.size == 3
            assert solver.solve(inst.structure_assumptions(f))
            model = solver.full_model()
            assert inst.decode_model(model) == f
            for t, trace in enumerate(inst.traces):
                for tau in range(len(trace)):
                    assert model[inst.y[(t, inst.n, tau)]] \
                        == bool(f.evaluate(trace, tau))

    def test_decode_rejects_ambiguous_assignment(self):
        inst = instance_for(BASIC, 1)
        bad = {v: True for v in range(1, inst.wcnf.nvars + 1)}
        with pytest.raises(EncodingError):
            inst.decode_model(bad)

    def test_soft_clauses_weighted_by_omega(self):
        sample = parse_sample(BASIC)
        inst = EncodingInstance(1, sample, omega_uniform(sample))
        assert len(inst.wcnf.soft) == sample.size
        assert all(w == Fraction(1, 4) for _, w in inst.wcnf.soft)
        # positive traces get the positive root literal, negatives negated
        for t, (trace, label) in enumerate(sample.entries):
            clause, _ = inst.wcnf.soft[t]
            expected = inst.y[(t, 1, 0)]
            assert clause == [expected if label == 1 else -expected]

    def test_omega_domain_checked(self):
        sample = parse_sample(BASIC)
        with pytest.raises(ValueError):
            EncodingInstance(1, sample, {})


class TestOptimalAgainstEnumeration:
    def test_soft_weight_is_one_minus_loss(self):
        rng = random.Random(33)
        for _ in range(20):
            sample = random_sample(rng, ("p0", "p1"), max_traces=6,
                                   max_len=4)
            omega = omega_uniform(sample)
            for n in (1, 2):
                inst = EncodingInstance(n, sample, omega)
                result = solve_optimal(inst.wcnf)
                assert result.status == OPTIMAL
                f = inst.decode_model(result.assignment)
                assert weighted_loss(sample, f, omega) \
                    == 1 - result.satisfied_soft_weight

    def test_constants_in_pool_allow_trivial_formulas(self):
        sample = parse_sample("1\n0\n---\n")  # all positive
        pool = OperatorPool(sample.alphabet, constants=("true", "false"))
        inst = EncodingInstance(1, sample, omega_uniform(sample), pool)
        result = solve_optimal(inst.wcnf)
        assert result.satisfied_soft_weight == 1
        assert inst.decode_model(result.assignment).to_text() in (
            "true", "p0")


def test_var_comments_cover_all_variables():
    sample = parse_sample(BASIC)
    inst = EncodingInstance(2, sample, omega_uniform(sample),
                            var_comments=True)
    described = {int(line.split()[2]) for line in inst.wcnf.comments
                 if line.startswith("c var ")}
    assert described == set(range(1, inst.wcnf.nvars + 1))
