"""Shared test oracles: exhaustive formula enumeration and brute-force
weighted MaxSAT, both independent of the code under test's search logic."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from ltlfmine.formula import (BINARY_OPS, Formula, FormulaBuilder, UNARY_OPS)
from ltlfmine.maxsat import WeightedCnf, clause_satisfied
from ltlfmine.sample import LabeledSample, Trace, make_sample


def enumerate_formulas(props, max_n):
    """All distinct canonical formulas representable by a syntax DAG with
    at most max_n nodes, grouped by exact size.

    Enumerates every node table (per node: a label, plus children with
    smaller ids), decodes the root, and dedupes.  A table of size n can
    decode to a smaller formula (sharing, unreachable nodes), so sizes are
    taken from the canonical formula, not the table.
    """
    labels = list(props)

    def node_options(i):
        opts = [(p, 0, 0) for p in labels]
        for op in UNARY_OPS:
            opts += [(op, j, 0) for j in range(1, i)]
        for op in BINARY_OPS:
            opts += [(op, j, k) for j in range(1, i) for k in range(1, i)]
        return opts

    by_size: dict[int, list[Formula]] = {}
    seen = set()
    for n in range(1, max_n + 1):
        for combo in itertools.product(*(node_options(i)
                                         for i in range(1, n + 1))):
            builder = FormulaBuilder()
            ids = {}
            for i, (label, j, k) in enumerate(combo, start=1):
                if label in props:
                    ids[i] = builder.prop(label)
                elif label in UNARY_OPS:
                    ids[i] = builder.unary(label, ids[j])
                else:
                    ids[i] = builder.binary(label, ids[j], ids[k])
            f = builder.finish(ids[n])
            if f.nodes not in seen:
                seen.add(f.nodes)
                by_size.setdefault(f.size, []).append(f)
    return by_size


def brute_minimal_size(sample, kappa, omega, formulas_by_size):
    """Smallest formula size with weighted loss <= kappa, by enumeration."""
    from ltlfmine.sample import weighted_loss

    for n in sorted(formulas_by_size):
        for f in formulas_by_size[n]:
            if weighted_loss(sample, f, omega) <= kappa:
                return n
    return None


def brute_maxsat(wcnf: WeightedCnf):
    """Exhaustive optimum: (best soft weight, assignment) or None if the
    hard clauses are unsatisfiable.  Only for small variable counts."""
    best = None
    for bits in itertools.product([False, True], repeat=wcnf.nvars):
        assignment = {v: bits[v - 1] for v in range(1, wcnf.nvars + 1)}
        if not all(clause_satisfied(c, assignment) for c in wcnf.hard):
            continue
        weight = sum((w for c, w in wcnf.soft
                      if clause_satisfied(c, assignment)), Fraction(0))
        if best is None or weight > best[0]:
            best = (weight, assignment)
    return best


def random_trace(rng: random.Random, props, max_len) -> Trace:
    return tuple(
        frozenset(p for p in props if rng.random() < 0.5)
        for _ in range(rng.randint(1, max_len)))


def random_sample(rng: random.Random, props, max_traces, max_len,
                  require_both_classes=False) -> LabeledSample:
    while True:
        entries = [(random_trace(rng, props, max_len), rng.randint(0, 1))
                   for _ in range(rng.randint(1, max_traces))]
        labels: dict[Trace, int] = {}
        for u, b in entries:
            labels.setdefault(u, b)
        sample = make_sample(props, [(u, labels[u]) for u, _ in entries])
        if not require_both_classes:
            return sample
        if sample.positives() and sample.negatives():
            return sample


def random_formula(rng: random.Random, props, depth) -> Formula:
    builder = FormulaBuilder()

    def build(d) -> int:
        if d == 0 or rng.random() < 0.3:
            return builder.prop(rng.choice(list(props)))
        op = rng.choice(UNARY_OPS + BINARY_OPS)
        if op in UNARY_OPS:
            return builder.unary(op, build(d - 1))
        return builder.binary(op, build(d - 1), build(d - 1))

    return builder.finish(build(depth))
