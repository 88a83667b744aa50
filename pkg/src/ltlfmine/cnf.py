"""Boolean expression trees, Tseitin conversion to CNF, and totalizer
cardinality networks over literals.

Literals are signed DIMACS-style integers throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union


class BExpr:
    """Base class for boolean expression nodes."""


@dataclass(frozen=True)
class BVar(BExpr):
    var: int  # positive variable id

    def __post_init__(self):
        if self.var <= 0:
            raise ValueError("variable ids must be positive")


@dataclass(frozen=True)
class BNot(BExpr):
    arg: BExpr


@dataclass(frozen=True)
class BAnd(BExpr):
    args: tuple[BExpr, ...]

    def __init__(self, *args: BExpr):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class BOr(BExpr):
    args: tuple[BExpr, ...]

    def __init__(self, *args: BExpr):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class BIff(BExpr):
    left: BExpr
    right: BExpr


def _as_literal(expr: BExpr) -> Union[int, None]:
    if isinstance(expr, BVar):
        return expr.var
    if isinstance(expr, BNot) and isinstance(expr.arg, BVar):
        return -expr.arg.var
    return None


def _is_clause(expr: BExpr) -> bool:
    return (isinstance(expr, BOr)
            and all(_as_literal(a) is not None for a in expr.args))


@dataclass
class TseitinResult:
    clauses: list[list[int]]
    aux_vars: list[int]


def tseitin(expr: BExpr, fresh_from: int) -> TseitinResult:
    """Assert `expr` as an equisatisfiable clause set.

    Conjunctions of literal-disjunctions (i.e. input already in CNF) pass
    through unchanged with no auxiliary variables; anything else gets gate
    definitions over fresh variables starting at `fresh_from`, plus a unit
    clause on the top gate.
    """
    clauses: list[list[int]] = []
    aux: list[int] = []
    next_var = [fresh_from]
    gate_memo: dict[BExpr, int] = {}

    def fresh() -> int:
        v = next_var[0]
        next_var[0] += 1
        aux.append(v)
        return v

    def lit_of(e: BExpr) -> int:
        direct = _as_literal(e)
        if direct is not None:
            return direct
        if isinstance(e, BNot):
            return -lit_of(e.arg)
        if e in gate_memo:
            return gate_memo[e]
        g = fresh()
        gate_memo[e] = g
        if isinstance(e, BAnd):
            child_lits = [lit_of(c) for c in e.args]
            for c in child_lits:
                clauses.append([-g, c])
            clauses.append([g] + [-c for c in child_lits])
        elif isinstance(e, BOr):
            child_lits = [lit_of(c) for c in e.args]
            clauses.append([-g] + child_lits)
            for c in child_lits:
                clauses.append([g, -c])
        elif isinstance(e, BIff):
            a, b = lit_of(e.left), lit_of(e.right)
            clauses.append([-g, -a, b])
            clauses.append([-g, a, -b])
            clauses.append([g, a, b])
            clauses.append([g, -a, -b])
        else:
            raise TypeError(f"unsupported expression {e!r}")
        return g

    if _is_clause(expr):
        clauses.append([_as_literal(a) for a in expr.args])
    elif isinstance(expr, BAnd) and all(_is_clause(a) for a in expr.args):
        for conjunct in expr.args:
            clauses.append([_as_literal(a) for a in conjunct.args])
    elif _as_literal(expr) is not None:
        clauses.append([_as_literal(expr)])
    else:
        clauses.append([lit_of(expr)])
    return TseitinResult(clauses, aux)


def totalizer(lits: list[int], new_var: Callable[[], int],
              add_clause: Callable[[list[int]], None]) -> list[int]:
    """Build a two-sided totalizer over `lits`.

    Returns outputs o[0..len-1] where o[k-1] is true iff at least k of the
    inputs are true (given the emitted clauses are satisfied).
    """
    if not lits:
        return []
    if len(lits) == 1:
        return [lits[0]]
    half = len(lits) // 2
    a = totalizer(lits[:half], new_var, add_clause)
    b = totalizer(lits[half:], new_var, add_clause)
    outs = [new_var() for _ in range(len(a) + len(b))]
    for i in range(len(a) + 1):
        for j in range(len(b) + 1):
            if i + j >= 1:
                clause = [outs[i + j - 1]]
                if i:
                    clause.append(-a[i - 1])
                if j:
                    clause.append(-b[j - 1])
                add_clause(clause)
            if i + j < len(outs):
                clause = [-outs[i + j]]
                if i < len(a):
                    clause.append(a[i])
                if j < len(b):
                    clause.append(b[j])
                add_clause(clause)
    return outs
