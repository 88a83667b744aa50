"""Exact partial weighted MaxSAT on top of the CDCL core.

All soft clauses produced by the encoder are unit literals, and the trace
weight functions yield very few distinct weights (one for uniform, two for
rebalanced).  The solver exploits this: soft literals are grouped by
weight, each group gets a totalizer counting its satisfied literals, and
feasibility of a weight target reduces to a small frontier of cardinality
assumptions.  Exactness is the contract; the search strategy is not.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cnf import totalizer
from .sat import SatSolver, SolveTimeout

__all__ = [
    "WeightedCnf", "MaxSatSolution", "SolveTimeout",
    "OPTIMAL", "FEASIBLE", "INFEASIBLE", "HARD_UNSAT",
    "solve_optimal", "solve_decision",
    "export_wcnf", "parse_wcnf", "import_model",
]

OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
HARD_UNSAT = "hard-unsat"


@dataclass
class WeightedCnf:
    """Hard clauses plus weighted soft clauses over variables 1..nvars."""

    nvars: int
    hard: list = field(default_factory=list)              # list[list[int]]
    soft: list = field(default_factory=list)              # list[(clause, Fraction)]
    comments: list = field(default_factory=list)          # extra "c" lines for export
    weight_scale: Optional[int] = None                    # fixed denominator, else lcm

    def add_hard(self, clause: Sequence[int]) -> None:
        self.hard.append(list(clause))

    def add_soft(self, clause: Sequence[int], weight: Fraction) -> None:
        if weight <= 0:
            raise ValueError("soft weights must be positive")
        self.soft.append((list(clause), Fraction(weight)))

    def soft_total(self) -> Fraction:
        return sum((w for _, w in self.soft), Fraction(0))


@dataclass
class MaxSatSolution:
    status: str
    assignment: dict = field(default_factory=dict)  # var -> bool
    satisfied_soft_weight: Fraction = Fraction(0)


def clause_satisfied(clause: Sequence[int], assignment: dict) -> bool:
    return any(assignment.get(abs(l), False) == (l > 0) for l in clause)


def recompute_soft_weight(wcnf: WeightedCnf, assignment: dict) -> Fraction:
    return sum((w for clause, w in wcnf.soft
                if clause_satisfied(clause, assignment)), Fraction(0))


def check_hard(wcnf: WeightedCnf, assignment: dict) -> bool:
    return all(clause_satisfied(c, assignment) for c in wcnf.hard)


class _Engine:
    """Shared state for decision and optimization calls on one instance."""

    def __init__(self, wcnf: WeightedCnf):
        self.wcnf = wcnf
        # Stepwise climbing toward a cardinality goal only pays off when
        # individual solver calls are expensive; on small instances the
        # extra calls dominate and a direct jump per frontier point wins.
        self.prefer_climb = len(wcnf.hard) >= 5000
        self.solver = SatSolver()
        self.solver.ensure_var(wcnf.nvars)
        for clause in wcnf.hard:
            self.solver.add_clause(clause)
        # Reduce every soft clause to a literal: unit softs are used as-is,
        # larger ones get a relaxation variable s with s -> clause.
        soft_lits = []
        for clause, weight in wcnf.soft:
            if len(clause) == 1:
                soft_lits.append((clause[0], weight))
            else:
                s = self.solver.new_var()
                self.solver.add_clause(list(clause) + [-s])
                soft_lits.append((s, weight))
        groups: dict[Fraction, list[int]] = {}
        for lit, weight in soft_lits:
            groups.setdefault(weight, []).append(lit)
            # Bias the polarity toward satisfying the soft literal.
            self.solver.saved_phase[abs(lit)] = 1 if lit > 0 else 0
        # Heaviest group first, so frontier enumeration prefers covering
        # the target with few assumptions.
        self.weights = sorted(groups, reverse=True)
        self.counters = []
        for w in self.weights:
            outs = totalizer(groups[w], self.solver.new_var,
                             self.solver.add_clause)
            self.counters.append(outs)

    def _frontier(self, target: Fraction) -> list[tuple[int, ...]]:
        """Pareto-minimal satisfied-count vectors reaching `target`."""
        sizes = [len(c) for c in self.counters]
        vectors: list[tuple[int, ...]] = []

        def rec(g: int, prefix: tuple[int, ...], remaining: Fraction):
            if remaining <= 0:
                vectors.append(prefix + (0,) * (len(sizes) - g))
                return
            if g == len(sizes) - 1:
                w = self.weights[g]
                k = math.ceil(remaining / w)
                if k <= sizes[g]:
                    vectors.append(prefix + (k,))
                return
            if g >= len(sizes):
                return
            for k in range(sizes[g] + 1):
                rec(g + 1, prefix + (k,), remaining - k * self.weights[g])

        if not sizes:
            return [()] if target <= 0 else []
        rec(0, (), target)
        # Drop dominated vectors.
        minimal = []
        for v in vectors:
            if not any(w != v and all(wi <= vi for wi, vi in zip(w, v))
                       for w in vectors):
                minimal.append(v)
        return sorted(set(minimal))

    def _assumptions(self, counts: tuple[int, ...]) -> list[int]:
        lits = []
        for g, k in enumerate(counts):
            if k >= 1:
                lits.append(self.counters[g][k - 1])
        return lits

    def _counts(self) -> tuple[int, ...]:
        model = self.solver.full_model()
        return tuple(sum(1 for out in outs if model.get(out, False))
                     for outs in self.counters)

    def _climb(self, goal: tuple[int, ...], deadline) -> bool:
        """Solution-guided ascent from the last model to `goal`.

        Every step assumes a count vector componentwise <= goal, so an
        unsatisfiable step proves goal itself unreachable; a satisfiable
        step yields a model whose counts strictly progress toward it.
        Stepping through nearby bounds is much cheaper than one jump
        because phase saving carries each model into the next call.
        """
        current = self._counts()
        while any(c < g for c, g in zip(current, goal)):
            step = tuple(min(c + 1, g) for c, g in zip(current, goal))
            if not self.solver.solve(self._assumptions(step),
                                     deadline=deadline):
                return False
            current = self._counts()
        return True

    def _solution(self, status: str) -> MaxSatSolution:
        model = self.solver.full_model()
        assignment = {v: model.get(v, False)
                      for v in range(1, self.wcnf.nvars + 1)}
        return MaxSatSolution(status, assignment,
                              recompute_soft_weight(self.wcnf, assignment))

    def hard_satisfiable(self, deadline) -> bool:
        return self.solver.solve((), deadline=deadline)

    def decision(self, target: Fraction,
                 deadline: Optional[float] = None,
                 climb: bool = True) -> MaxSatSolution:
        # An unconstrained solve is cheap and, with phases biased toward
        # the soft literals, often meets the target outright; it also
        # detects hard unsatisfiability before any frontier work.
        if not self.solver.solve((), deadline=deadline):
            return MaxSatSolution(HARD_UNSAT)
        candidate = self._solution(FEASIBLE)
        if candidate.satisfied_soft_weight >= target:
            return candidate
        for counts in self._frontier(target):
            if climb and self.prefer_climb:
                verdict = self._climb(counts, deadline)
            else:
                verdict = self.solver.solve(self._assumptions(counts),
                                            deadline=deadline)
            if verdict:
                return self._solution(FEASIBLE)
        return MaxSatSolution(INFEASIBLE)

    def achievable_totals(self) -> list[Fraction]:
        totals = {Fraction(0)}
        for w, outs in zip(self.weights, self.counters):
            totals = {t + k * w for t in totals for k in range(len(outs) + 1)}
            if len(totals) > 4_000_000:
                raise ValueError("too many distinct soft-weight totals")
        return sorted(totals)

    def optimal(self, deadline: Optional[float] = None) -> MaxSatSolution:
        if not self.solver.solve((), deadline=deadline):
            return MaxSatSolution(HARD_UNSAT)
        best = self._solution(OPTIMAL)
        totals = self.achievable_totals()
        # Binary search the largest feasible total; feasibility of
        # "satisfied weight >= t" is monotone in t.
        lo = totals.index(best.satisfied_soft_weight)
        hi = len(totals) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            # Direct jumps: the binary search probes mostly-infeasible
            # targets over many small weight groups, where stepwise
            # climbing multiplies solver calls without paying off.
            result = self.decision(totals[mid], deadline=deadline,
                                   climb=False)
            if result.status == FEASIBLE:
                best = result
                lo = totals.index(result.satisfied_soft_weight)
            else:
                hi = mid - 1
        best.status = OPTIMAL
        return best


def _deadline(timeout: Optional[float]) -> Optional[float]:
    return None if timeout is None else time.monotonic() + timeout


def solve_optimal(wcnf: WeightedCnf,
                  timeout: Optional[float] = None) -> MaxSatSolution:
    """Exact optimum of the partial weighted MaxSAT instance."""
    return _Engine(wcnf).optimal(deadline=_deadline(timeout))


def solve_decision(wcnf: WeightedCnf, target: Fraction,
                   timeout: Optional[float] = None) -> MaxSatSolution:
    """Find any hard-satisfying assignment with soft weight >= target."""
    if target > wcnf.soft_total():
        return MaxSatSolution(INFEASIBLE)
    return _Engine(wcnf).decision(Fraction(target), deadline=_deadline(timeout))


# -- DIMACS WCNF interchange ------------------------------------------------

def weight_denominator(wcnf: WeightedCnf) -> int:
    if wcnf.weight_scale is not None:
        return wcnf.weight_scale
    denom = 1
    for _, w in wcnf.soft:
        denom = denom * w.denominator // math.gcd(denom, w.denominator)
    return denom


def export_wcnf(wcnf: WeightedCnf, target) -> None:
    """Write DIMACS WCNF: soft weights scaled to integers by the common
    denominator (recorded as `c weight-scale <D>`), hard weight = top."""
    denom = weight_denominator(wcnf)
    scaled = []
    for clause, w in wcnf.soft:
        sw = w * denom
        if sw.denominator != 1:
            raise ValueError("weight scale does not clear denominators")
        scaled.append((clause, sw.numerator))
    top = sum(s for _, s in scaled) + 1
    lines = [f"c weight-scale {denom}"]
    lines += wcnf.comments
    nclauses = len(wcnf.hard) + len(scaled)
    lines.append(f"p wcnf {wcnf.nvars} {nclauses} {top}")
    for clause in wcnf.hard:
        lines.append(f"{top} " + " ".join(map(str, clause)) + " 0")
    for clause, sw in scaled:
        lines.append(f"{sw} " + " ".join(map(str, clause)) + " 0")
    text = "\n".join(lines) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", encoding="utf-8") as handle:
            handle.write(text)


def parse_wcnf(source: Union[str, io.TextIOBase]) -> WeightedCnf:
    """Read back the WCNF format written by `export_wcnf`."""
    text = source if isinstance(source, str) else source.read()
    denom = 1
    top = None
    nvars = 0
    hard: list[list[int]] = []
    soft: list[tuple[list[int], Fraction]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c weight-scale "):
            denom = int(line.split()[2])
            continue
        if line.startswith("c"):
            continue
        if line.startswith("p wcnf"):
            parts = line.split()
            nvars = int(parts[2])
            top = int(parts[4])
            continue
        parts = [int(x) for x in line.split()]
        if parts[-1] != 0:
            raise ValueError("clause line must end with 0")
        weight, clause = parts[0], parts[1:-1]
        if top is None:
            raise ValueError("clause before p-line")
        if weight >= top:
            hard.append(clause)
        else:
            soft.append((clause, Fraction(weight, denom)))
    return WeightedCnf(nvars, hard, soft, weight_scale=denom)


def import_model(source, wcnf: WeightedCnf) -> dict:
    """Parse a model file (space-separated signed ints, optionally on
    `v`-prefixed lines) and validate it against the hard clauses."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as handle:
            text = handle.read()
    assignment = {v: False for v in range(1, wcnf.nvars + 1)}
    found = False
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("v "):
            line = line[2:]
        elif line.startswith(("c", "s", "o")):
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                continue
            assignment[abs(lit)] = lit > 0
            found = True
    if not found:
        raise ValueError("model file contains no literals")
    if not check_hard(wcnf, assignment):
        raise ValueError("imported model violates a hard clause")
    return assignment
