"""LTLf formulas as maximally-shared syntax DAGs, with parsing, printing
and finite-trace evaluation.

A formula is stored as an array of nodes numbered 1..n where the root is
node n and every node's children have strictly smaller identifiers.  Two
structurally equal subformulas are always represented by the same node,
so the node count equals the number of unique subformulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

# Operator symbols.  Propositions are nullary operators tagged PROP and
# carry their name separately.
PROP = "prop"
TRUE = "true"
FALSE = "false"
NOT = "!"
NEXT = "X"
EVENTUALLY = "F"
GLOBALLY = "G"
OR = "|"
AND = "&"
IMPLIES = "->"
UNTIL = "U"

UNARY_OPS = (NOT, NEXT, EVENTUALLY, GLOBALLY)
BINARY_OPS = (OR, AND, IMPLIES, UNTIL)
CONSTANTS = (TRUE, FALSE)


def arity(op: str) -> int:
    if op in UNARY_OPS:
        return 1
    if op in BINARY_OPS:
        return 2
    return 0


class LtlSyntaxError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownPropositionError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    op: str
    name: Optional[str] = None  # proposition name when op == PROP
    left: int = 0               # child node ids, 0 = absent
    right: int = 0

    def key(self):
        return (self.op, self.name, self.left, self.right)


class FormulaBuilder:
    """Hash-consing constructor for syntax DAGs.

    Node ids are assigned in creation order, so children always have
    smaller ids than their parents.
    """

    def __init__(self):
        self._nodes: list[Node] = []
        self._intern: dict[tuple, int] = {}

    def _mk(self, op: str, name: Optional[str], left: int, right: int) -> int:
        key = (op, name, left, right)
        idx = self._intern.get(key)
        if idx is None:
            self._nodes.append(Node(op, name, left, right))
            idx = len(self._nodes)
            self._intern[key] = idx
        return idx

    def prop(self, name: str) -> int:
        return self._mk(PROP, name, 0, 0)

    def const(self, value: bool) -> int:
        return self._mk(TRUE if value else FALSE, None, 0, 0)

    def unary(self, op: str, child: int) -> int:
        if arity(op) != 1:
            raise ValueError(f"not a unary operator: {op!r}")
        return self._mk(op, None, child, 0)

    def binary(self, op: str, left: int, right: int) -> int:
        if arity(op) != 2:
            raise ValueError(f"not a binary operator: {op!r}")
        return self._mk(op, None, left, right)

    def node(self, idx: int) -> Node:
        return self._nodes[idx - 1]

    def finish(self, root: int) -> "Formula":
        return Formula._from_nodes(self._nodes, root)


class Formula:
    """An immutable LTLf formula in canonical syntax-DAG form."""

    __slots__ = ("nodes", "_text")

    def __init__(self, nodes: tuple[Node, ...]):
        self.nodes = nodes
        self._text = None

    @classmethod
    def _from_nodes(cls, nodes: list[Node], root: int) -> "Formula":
        # Renumber the sub-DAG reachable from `root` in left-first
        # post-order; this makes the numbering a function of structure
        # alone (canonicalization is idempotent).
        order: list[int] = []
        seen: set[int] = set()

        def visit(i: int) -> None:
            if i in seen:
                return
            seen.add(i)
            node = nodes[i - 1]
            if node.left:
                visit(node.left)
            if node.right:
                visit(node.right)
            order.append(i)

        visit(root)
        remap = {old: new for new, old in enumerate(order, start=1)}
        renumbered = tuple(
            Node(n.op, n.name,
                 remap[n.left] if n.left else 0,
                 remap[n.right] if n.right else 0)
            for n in (nodes[i - 1] for i in order)
        )
        return cls(renumbered)

    # -- structure ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def root(self) -> int:
        return len(self.nodes)

    def node(self, i: int) -> Node:
        return self.nodes[i - 1]

    def propositions(self) -> set[str]:
        return {n.name for n in self.nodes if n.op == PROP}

    def __eq__(self, other) -> bool:
        return isinstance(other, Formula) and self.nodes == other.nodes

    def __hash__(self) -> int:
        return hash(self.nodes)

    def __repr__(self) -> str:
        return f"Formula({self.to_text()!r})"

    # -- printing ----------------------------------------------------------

    def to_text(self) -> str:
        """Fully parenthesized canonical form; parse_formula round-trips."""
        if self._text is None:
            self._text = self.subformula_text(self.root)
        return self._text

    def subformula_text(self, i: int) -> str:
        node = self.node(i)
        if node.op == PROP:
            return node.name
        if node.op in CONSTANTS:
            return node.op
        if arity(node.op) == 1:
            return f"({node.op} {self.subformula_text(node.left)})"
        return (f"({self.subformula_text(node.left)} {node.op} "
                f"{self.subformula_text(node.right)})")

    # -- semantics ---------------------------------------------------------

    def evaluate(self, trace, position: int) -> int:
        """Finite-trace valuation of the formula at `position`.

        Next is strong (false at the last position); Until requires its
        right argument to hold at some position, with the left argument
        holding strictly before.
        """
        if not 0 <= position < len(trace):
            raise IndexError(f"position {position} out of range for trace "
                             f"of length {len(trace)}")
        memo: dict[tuple[int, int], int] = {}
        return self._eval(self.root, trace, position, memo)

    def _eval(self, i: int, trace, pos: int, memo) -> int:
        key = (i, pos)
        if key in memo:
            return memo[key]
        node = self.node(i)
        op = node.op
        last = len(trace) - 1
        if op == PROP:
            val = 1 if node.name in trace[pos] else 0
        elif op == TRUE:
            val = 1
        elif op == FALSE:
            val = 0
        elif op == NOT:
            val = 1 - self._eval(node.left, trace, pos, memo)
        elif op == NEXT:
            val = 0 if pos == last else self._eval(node.left, trace, pos + 1, memo)
        elif op == EVENTUALLY:
            val = 0
            for j in range(pos, last + 1):
                if self._eval(node.left, trace, j, memo):
                    val = 1
                    break
        elif op == GLOBALLY:
            val = 1
            for j in range(pos, last + 1):
                if not self._eval(node.left, trace, j, memo):
                    val = 0
                    break
        elif op == OR:
            val = max(self._eval(node.left, trace, pos, memo),
                      self._eval(node.right, trace, pos, memo))
        elif op == AND:
            val = min(self._eval(node.left, trace, pos, memo),
                      self._eval(node.right, trace, pos, memo))
        elif op == IMPLIES:
            val = max(1 - self._eval(node.left, trace, pos, memo),
                      self._eval(node.right, trace, pos, memo))
        elif op == UNTIL:
            val = 0
            for j in range(pos, last + 1):
                if self._eval(node.right, trace, j, memo):
                    val = 1
                    break
                if not self._eval(node.left, trace, j, memo):
                    break
        else:
            raise ValueError(f"unknown operator {op!r}")
        memo[key] = val
        return val

    def satisfies(self, trace) -> int:
        return self.evaluate(trace, 0)


# -- construction helpers ---------------------------------------------------

def from_tree(tree, builder: Optional[FormulaBuilder] = None) -> Formula:
    """Build a formula from a nested-tuple tree like ("U", ("prop","p"), ...)."""
    builder = builder or FormulaBuilder()

    def build(t) -> int:
        op = t[0]
        if op == PROP:
            return builder.prop(t[1])
        if op in CONSTANTS:
            return builder.const(op == TRUE)
        if arity(op) == 1:
            return builder.unary(op, build(t[1]))
        return builder.binary(op, build(t[1]), build(t[2]))

    return builder.finish(build(tree))


def formula_size(f: Formula) -> int:
    return f.size


def format_formula(f: Formula) -> str:
    return f.to_text()


# -- parser -----------------------------------------------------------------

_TOKEN_OPS = ("->", "(", ")", "!", "|", "&")


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self) -> None:
        text, i = self.text, 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if text.startswith("->", i):
                self.tokens.append(("->", i))
                i += 2
            elif c in "()!|&":
                self.tokens.append((c, i))
                i += 1
            elif c.isalnum() or c == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append((text[i:j], i))
                i = j
            else:
                raise LtlSyntaxError(f"unexpected character {c!r}", i)
        self.tokens.append(("<end>", len(text)))

    def peek(self) -> tuple[str, int]:
        return self.tokens[self.index]

    def next(self) -> tuple[str, int]:
        tok = self.tokens[self.index]
        if tok[0] != "<end>":
            self.index += 1
        return tok


class _Parser:
    """Recursive descent with precedence ->  <  |  <  &  <  U  <  unary."""

    def __init__(self, text: str, alphabet: Optional[Iterable[str]],
                 builder: FormulaBuilder):
        self.toks = _Tokenizer(text)
        self.alphabet = None if alphabet is None else set(alphabet)
        self.b = builder

    def parse(self) -> int:
        root = self._implies()
        tok, pos = self.toks.peek()
        if tok != "<end>":
            raise LtlSyntaxError(f"unexpected token {tok!r}", pos)
        return root

    def _implies(self) -> int:
        left = self._or()
        if self.toks.peek()[0] == "->":
            self.toks.next()
            right = self._implies()  # right-associative
            return self.b.binary(IMPLIES, left, right)
        return left

    def _or(self) -> int:
        node = self._and()
        while self.toks.peek()[0] == "|":
            self.toks.next()
            node = self.b.binary(OR, node, self._and())
        return node

    def _and(self) -> int:
        node = self._until()
        while self.toks.peek()[0] == "&":
            self.toks.next()
            node = self.b.binary(AND, node, self._until())
        return node

    def _until(self) -> int:
        left = self._unary()
        if self.toks.peek()[0] == "U":
            self.toks.next()
            right = self._until()  # right-associative
            return self.b.binary(UNTIL, left, right)
        return left

    def _unary(self) -> int:
        tok, pos = self.toks.peek()
        if tok in (NOT, NEXT, EVENTUALLY, GLOBALLY):
            self.toks.next()
            return self.b.unary(tok, self._unary())
        return self._atom()

    def _atom(self) -> int:
        tok, pos = self.toks.next()
        if tok == "(":
            node = self._implies()
            close, cpos = self.toks.next()
            if close != ")":
                raise LtlSyntaxError("expected ')'", cpos)
            return node
        if tok == TRUE:
            return self.b.const(True)
        if tok == FALSE:
            return self.b.const(False)
        if tok == "<end>":
            raise LtlSyntaxError("unexpected end of input", pos)
        if not (tok[0].isalpha() or tok[0] == "_"):
            raise LtlSyntaxError(f"expected a proposition, got {tok!r}", pos)
        if self.alphabet is not None and tok not in self.alphabet:
            raise UnknownPropositionError(
                f"proposition {tok!r} not in alphabet {sorted(self.alphabet)}")
        return self.b.prop(tok)


def parse_formula(text: str, alphabet: Optional[Iterable[str]] = None) -> Formula:
    """Parse formula text into a maximally shared, canonically numbered DAG.

    Grammar: prefix unary `! X F G`, infix binary `| & -> U`, atoms,
    constants `true`/`false`, parentheses.  When `alphabet` is given,
    every atom must belong to it.
    """
    builder = FormulaBuilder()
    root = _Parser(text, alphabet, builder).parse()
    return builder.finish(root)
