"""Labeled trace samples: file I/O, weight functions and loss computation.

Weights and losses are kept as exact `Fraction`s internally; callers that
want floats can convert at the surface.  This keeps threshold comparisons
("soft weight >= 1 - kappa") immune to float accumulation error.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .formula import Formula

log = logging.getLogger(__name__)

# A trace is a finite sequence of symbols; each symbol is the set of
# propositions holding at that position.
Trace = tuple[frozenset, ...]
WeightFn = dict  # Trace -> Fraction, summing to exactly 1


class SampleError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledSample:
    """A deduplicated set of (trace, label) pairs over a fixed alphabet."""

    alphabet: tuple[str, ...]
    entries: tuple[tuple[Trace, int], ...]

    def __post_init__(self):
        labels: dict[Trace, int] = {}
        props = set(self.alphabet)
        for trace, label in self.entries:
            if len(trace) == 0:
                raise SampleError("empty traces are not allowed")
            if label not in (0, 1):
                raise SampleError(f"label must be 0 or 1, got {label!r}")
            if trace in labels and labels[trace] != label:
                raise SampleError(
                    f"trace {format_trace(trace, self.alphabet)} appears "
                    "with both labels")
            labels[trace] = label
            for symbol in trace:
                unknown = symbol - props
                if unknown:
                    raise SampleError(
                        f"propositions {sorted(unknown)} not in alphabet")

    @property
    def size(self) -> int:
        return len(self.entries)

    def positives(self) -> list[Trace]:
        return [u for u, b in self.entries if b == 1]

    def negatives(self) -> list[Trace]:
        return [u for u, b in self.entries if b == 0]

    def traces(self) -> list[Trace]:
        return [u for u, _ in self.entries]

    def to_text(self) -> str:
        """Canonical serialization; `parse_sample` round-trips it exactly."""
        lines = ["alphabet: " + ",".join(self.alphabet)]
        lines += [format_trace(u, self.alphabet) for u in self.positives()]
        lines.append("---")
        lines += [format_trace(u, self.alphabet) for u in self.negatives()]
        return "\n".join(lines) + "\n"


def make_sample(alphabet: Iterable[str],
                entries: Iterable[tuple[Trace, int]]) -> LabeledSample:
    """Build a sample, collapsing exact duplicate (trace, label) pairs."""
    seen = set()
    unique = []
    for trace, label in entries:
        key = (trace, label)
        if key not in seen:
            seen.add(key)
            unique.append(key)
    return LabeledSample(tuple(alphabet), tuple(unique))


def format_trace(trace: Trace, alphabet: Iterable[str]) -> str:
    return ";".join(
        ",".join("1" if p in symbol else "0" for p in alphabet)
        for symbol in trace)


def parse_trace_row(row: str, alphabet: tuple[str, ...], lineno: int) -> Trace:
    symbols = []
    for chunk in row.split(";"):
        bits = chunk.split(",")
        if len(bits) != len(alphabet):
            raise SampleError(
                f"line {lineno}: expected {len(alphabet)} bits per symbol, "
                f"got {len(bits)}")
        symbol = set()
        for bit, prop in zip(bits, alphabet):
            bit = bit.strip()
            if bit == "1":
                symbol.add(prop)
            elif bit != "0":
                raise SampleError(f"line {lineno}: invalid bit {bit!r}")
        symbols.append(frozenset(symbol))
    if not symbols or row.strip() == "":
        raise SampleError(f"line {lineno}: empty trace")
    return tuple(symbols)


def parse_sample(source: Union[str, io.TextIOBase]) -> LabeledSample:
    """Parse the sample file format.

    Format: an optional `alphabet: p0,p1,...` header, positive trace rows
    (symbols separated by `;`, bit vectors separated by `,`), a `---`
    separator, then negative rows.  `#` starts a comment.  Anything after
    a second `---` is ignored with a warning (compatibility sections).
    """
    if isinstance(source, str):
        text = source
    else:
        text = source.read()
    alphabet: tuple[str, ...] = ()
    entries: list[tuple[Trace, int]] = []
    section = 1  # 1 = positives, 0 = negatives
    seen_separators = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("alphabet:"):
            alphabet = tuple(
                p.strip() for p in line[len("alphabet:"):].split(",") if p.strip())
            continue
        if line == "---":
            seen_separators += 1
            if seen_separators == 1:
                section = 0
                continue
            log.warning("ignoring trailing sections after second '---' "
                        "(line %d)", lineno)
            break
        if not alphabet:
            width = len(line.split(";")[0].split(","))
            alphabet = tuple(f"p{k}" for k in range(width))
        trace = parse_trace_row(line, alphabet, lineno)
        entries.append((trace, section))
    if not entries:
        raise SampleError("sample contains no traces")
    return make_sample(alphabet, entries)


def load_sample(path) -> LabeledSample:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_sample(handle.read())


# -- loss and weights -------------------------------------------------------

def loss(sample: LabeledSample, formula: Formula) -> Fraction:
    """Fraction of sample traces the formula misclassifies."""
    wrong = sum(1 for u, b in sample.entries if formula.satisfies(u) != b)
    return Fraction(wrong, sample.size)


def weighted_loss(sample: LabeledSample, formula: Formula,
                  omega: WeightFn) -> Fraction:
    """Total weight of the misclassified traces under `omega`."""
    _check_domain(sample, omega)
    total = Fraction(0)
    for u, b in sample.entries:
        if formula.satisfies(u) != b:
            total += omega[u]
    return total


def omega_uniform(sample: LabeledSample) -> WeightFn:
    w = Fraction(1, sample.size)
    return {u: w for u, _ in sample.entries}


def omega_rebalanced(sample: LabeledSample) -> WeightFn:
    """Half the weight mass on each class, split uniformly within class."""
    npos = len(sample.positives())
    nneg = len(sample.negatives())
    if npos == 0 or nneg == 0:
        raise SampleError("rebalanced weights need both classes present")
    wpos = Fraction(1, 2 * npos)
    wneg = Fraction(1, 2 * nneg)
    return {u: (wpos if b == 1 else wneg) for u, b in sample.entries}


def invert_labels(sample: LabeledSample) -> LabeledSample:
    return LabeledSample(
        sample.alphabet,
        tuple((u, 1 - b) for u, b in sample.entries))


def _check_domain(sample: LabeledSample, omega: WeightFn) -> None:
    if set(omega) != set(sample.traces()):
        raise SampleError("weight function domain does not match the sample")
