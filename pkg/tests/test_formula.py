import random

import pytest
from hypothesis import given, settings, strategies as st

from ltlfmine.formula import (Formula, FormulaBuilder, LtlSyntaxError,
                              UnknownPropositionError, from_tree,
                              parse_formula)
from helpers import random_formula, random_trace


def naive_eval(f: Formula, i: int, trace, pos: int) -> bool:
    # Straight transcription of the finite-trace semantics, tree-recursive
    # and memo-free, used as an oracle for the memoized evaluator.
    node = f.node(i)
    op = node.op
    last = len(trace) - 1
    if op == "prop":
        return node.name in trace[pos]
    if op == "true":
        return True
    if op == "false":
        return False
    if op == "!":
        return not naive_eval(f, node.left, trace, pos)
    if op == "X":
        return pos < last and naive_eval(f, node.left, trace, pos + 1)
    if op == "F":
        return any(naive_eval(f, node.left, trace, t)
                   for t in range(pos, last + 1))
    if op == "G":
        return all(naive_eval(f, node.left, trace, t)
                   for t in range(pos, last + 1))
    if op == "|":
        return (naive_eval(f, node.left, trace, pos)
                or naive_eval(f, node.right, trace, pos))
    if op == "&":
        return (naive_eval(f, node.left, trace, pos)
                and naive_eval(f, node.right, trace, pos))
    if op == "->":
        return (not naive_eval(f, node.left, trace, pos)
                or naive_eval(f, node.right, trace, pos))
    assert op == "U"
    return any(
        naive_eval(f, node.right, trace, t)
        and all(naive_eval(f, node.left, trace, s) for s in range(pos, t))
        for t in range(pos, last + 1))


class TestStructure:
    def test_shared_subformula_counted_once(self):
        f = parse_formula("(p U G q) | F G q")
        assert f.size == 6  # G q appears twice but is one node

    def test_sharing_example_size_five(self):
        f = parse_formula("(p U X q) | X q")
        assert f.size == 5

    def test_root_is_last_node_and_children_smaller(self):
        f = parse_formula("(p U G q) | F G q")
        assert f.root == f.size
        for i in range(1, f.size + 1):
            node = f.node(i)
            assert node.left < i and node.right < i

    def test_single_proposition(self):
        f = parse_formula("p")
        assert f.size == 1
        assert f.to_text() == "p"

    def test_canonical_numbering_is_structure_only(self):
        # The same formula built in different construction orders gets
        # identical node arrays.
        a = parse_formula("(p & q) | (q & p)")
        b1 = FormulaBuilder()
        q = b1.prop("q")
        p = b1.prop("p")
        left = b1.binary("&", p, q)
        right = b1.binary("&", q, p)
        b = b1.finish(b1.binary("|", left, right))
        assert a == b
        assert hash(a) == hash(b)

    def test_propositions(self):
        assert parse_formula("(p U G q) | F G q").propositions() == {"p", "q"}


class TestParser:
    def test_round_trip_canonical_text(self):
        texts = ["p", "(! p)", "(p U (G q))", "((p U (G q)) | (F (G q)))",
                 "(p -> (q -> p))", "true", "false", "(X (X p))"]
        for text in texts:
            assert parse_formula(text).to_text() == text

    def test_precedence(self):
        assert (parse_formula("a -> b | c & d U e").to_text()
                == "(a -> (b | (c & (d U e))))")
        assert (parse_formula("! a U b").to_text() == "((! a) U b)")

    def test_right_associativity(self):
        assert (parse_formula("a -> b -> c").to_text() == "(a -> (b -> c))")
        assert (parse_formula("a U b U c").to_text() == "(a U (b U c))")

    def test_left_associativity(self):
        assert parse_formula("a | b | c").to_text() == "((a | b) | c)"
        assert parse_formula("a & b & c").to_text() == "((a & b) & c)"

    def test_unary_chain(self):
        assert parse_formula("!X F G p").to_text() == "(! (X (F (G p))))"

    def test_syntax_error_carries_position(self):
        with pytest.raises(LtlSyntaxError) as exc:
            parse_formula("p | | q")
        assert exc.value.position == 4

    def test_unbalanced_paren(self):
        with pytest.raises(LtlSyntaxError):
            parse_formula("(p | q")

    def test_alphabet_enforced(self):
        with pytest.raises(UnknownPropositionError):
            parse_formula("p | r", alphabet=("p", "q"))
        parse_formula("p | q", alphabet=("p", "q"))

    def test_from_tree(self):
        f = from_tree(("U", ("prop", "p"), ("G", ("prop", "q"))))
        assert f.to_text() == "(p U (G q))"


class TestSemantics:
    def sym(self, *props):
        return frozenset(props)

    def test_strong_next_false_at_last_position(self):
        f = parse_formula("X p")
        assert f.satisfies((self.sym("p"),)) == 0
        assert f.satisfies((self.sym(), self.sym("p"))) == 1

    def test_until_requires_witness(self):
        f = parse_formula("p U q")
        assert f.satisfies((self.sym("p"), self.sym("p"))) == 0
        assert f.satisfies((self.sym("p"), self.sym("q"))) == 1
        assert f.satisfies((self.sym("q"),)) == 1  # right arg immediately

    def test_until_left_must_hold_strictly_before(self):
        f = parse_formula("p U q")
        assert f.satisfies((self.sym(), self.sym("q"))) == 0

    def test_globally_and_eventually(self):
        g = parse_formula("G p")
        e = parse_formula("F p")
        tr = (self.sym("p"), self.sym(), self.sym("p"))
        assert g.satisfies(tr) == 0
        assert e.satisfies(tr) == 1
        assert g.satisfies((self.sym("p"), self.sym("p"))) == 1

    def test_position_out_of_range(self):
        f = parse_formula("p")
        with pytest.raises(IndexError):
            f.evaluate((self.sym("p"),), 1)

    def test_matches_naive_semantics_randomized(self):
        rng = random.Random(11)
        props = ("p", "q")
        for _ in range(300):
            f = random_formula(rng, props, depth=4)
            trace = random_trace(rng, props, max_len=6)
            for pos in range(len(trace)):
                assert f.evaluate(trace, pos) == int(
                    naive_eval(f, f.root, trace, pos))


@st.composite
def formula_texts(draw):
    rng = random.Random(draw(st.integers(0, 10 ** 9)))
    return random_formula(rng, ("p", "q", "r"), depth=draw(st.integers(0, 5)))


@settings(max_examples=150, deadline=None)
@given(formula_texts())
def test_parse_print_round_trip(f):
    assert parse_formula(f.to_text()) == f


@settings(max_examples=150, deadline=None)
@given(formula_texts())
def test_canonicalization_idempotent(f):
    again = Formula._from_nodes(list(f.nodes), f.root)
    assert again.nodes == f.nodes
