"""Weight data, chamber signatures and walls along affine families.

All arithmetic uses :class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    BlockTooHeavy,
    ParseError,
    TooFewPoints,
    TotalTooSmall,
    UnstableVertex,
    WeightOutOfRange,
)

ONE = Fraction(1)
TWO = Fraction(2)


def to_rational(value) -> Fraction:
    """Exact conversion of ints, Fractions and strings like ``"1/3"`` or ``"0.25"``."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a string or Fraction")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational number: {value!r}") from exc


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class WeightDatum:
    weights: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def __getitem__(self, label: int) -> Fraction:
        """Weight of the 1-based marked point ``label``."""
        return self.weights[label - 1]

    def weight_of(self, labels: Iterable[int]) -> Fraction:
        return sum((self.weights[i - 1] for i in labels), Fraction(0))

    def __str__(self) -> str:
        return ",".join(format_rational(m) for m in self.weights)


def new_weight_datum(values: Iterable) -> WeightDatum:
    ms = tuple(to_rational(v) for v in values)
    if len(ms) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(ms)}")
    for i, m in enumerate(ms, 1):
        if not 0 < m <= 1:
            raise WeightOutOfRange(f"m_{i} = {format_rational(m)} is not in (0, 1]")
    total = sum(ms, Fraction(0))
    if total <= 2:
        raise TotalTooSmall(f"weights sum to {format_rational(total)}, need > 2")
    return WeightDatum(ms)


def parse_weights(text: str) -> WeightDatum:
    """Parse ``"1,1,1/3,1/3"`` into a validated datum."""
    parts = [p.strip() for p in text.split(",")]
    if any(not p for p in parts):
        raise ParseError(f"empty entry in weight list {text!r}")
    return new_weight_datum(parts)


# -- chamber signatures ----------------------------------------------------

def mergeable_subsets(values: Sequence[Fraction]) -> frozenset[frozenset[int]]:
    """All 1-based index sets of size >= 2 whose weights sum to at most 1.

    Works on raw values, so it can be evaluated on points of a family that
    are not valid data.
    """
    order = sorted(range(len(values)), key=lambda i: values[i])
    found: list[frozenset[int]] = []

    # depth-first over index sets in increasing-weight order; prune once the
    # running sum exceeds 1 since later weights are at least as large
    def extend(start: int, chosen: list[int], acc: Fraction) -> None:
        for pos in range(start, len(order)):
            i = order[pos]
            s = acc + values[i]
            if s > 1:
                break
            chosen.append(i + 1)
            if len(chosen) >= 2:
                found.append(frozenset(chosen))
            extend(pos + 1, chosen, s)
            chosen.pop()

    extend(0, [], Fraction(0))
    return frozenset(found)


@dataclass(frozen=True)
class ChamberSignature:
    n: int
    mergeable: frozenset[frozenset[int]]

    def allows(self, labels: Iterable[int]) -> bool:
        """True if the points ``labels`` may coincide (singletons always may)."""
        s = frozenset(labels)
        return len(s) <= 1 or s in self.mergeable

    def as_sorted(self) -> list[list[int]]:
        return sorted((sorted(s) for s in self.mergeable), key=lambda s: (len(s), s))


def chamber_signature(A: WeightDatum) -> ChamberSignature:
    return ChamberSignature(A.n, mergeable_subsets(A.weights))


def same_chamber(A: WeightDatum, B: WeightDatum) -> bool:
    return A.n == B.n and chamber_signature(A) == chamber_signature(B)


def vertex_weight_structure(
    A: WeightDatum, tail_blocks: Iterable[Iterable[int]], edge_count: int
) -> WeightDatum:
    """Weights seen by one vertex: one entry per block, then ``1`` per edge."""
    entries = []
    for block in tail_blocks:
        w = A.weight_of(block)
        if w > 1:
            raise BlockTooHeavy(f"block {sorted(block)} weighs {format_rational(w)} > 1")
        entries.append(w)
    entries.extend([ONE] * edge_count)
    total = sum(entries, Fraction(0))
    if total <= 2:
        raise UnstableVertex(f"vertex weight {format_rational(total)} <= 2")
    return WeightDatum(tuple(entries))


# -- one-parameter families ------------------------------------------------

@dataclass(frozen=True)
class WeightFamily:
    """Affine family ``m_i(eps) = a_i + b_i * eps`` over the interval ``(lo, hi]``.

    Validity is not enforced on the whole interval; :func:`family_point_valid`
    tells which sample points give genuine weight data.
    """

    coefficients: tuple[tuple[Fraction, Fraction], ...]
    lo: Fraction
    hi: Fraction

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def values_at(self, eps) -> tuple[Fraction, ...]:
        eps = to_rational(eps)
        return tuple(a + b * eps for a, b in self.coefficients)

    def at(self, eps) -> WeightDatum:
        return new_weight_datum(self.values_at(eps))

    def is_constant(self) -> bool:
        return all(b == 0 for _, b in self.coefficients)


def family_point_valid(F: WeightFamily, eps) -> bool:
    vals = F.values_at(eps)
    return len(vals) >= 3 and all(0 < m <= 1 for m in vals) and sum(vals) > 2


_TERM = re.compile(r"([+-]?)\s*([^+-]+)")


def _parse_affine(entry: str) -> tuple[Fraction, Fraction]:
    text = entry.replace(" ", "")
    if not text:
        raise ParseError("empty family entry")
    a = b = Fraction(0)
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos:
            raise ParseError(f"cannot parse family entry {entry!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        term = m.group(2)
        if term == "eps":
            b += sign
        elif term.endswith("*eps"):
            b += sign * to_rational(term[:-4])
        elif "eps" in term:
            raise ParseError(f"cannot parse family term {term!r}")
        else:
            a += sign * to_rational(term)
    if pos != len(text):
        raise ParseError(f"cannot parse family entry {entry!r}")
    return a, b


def parse_family(text: str, lo="0", hi="1") -> WeightFamily:
    """Parse ``"1,1,eps,1/2+1/4*eps"``; the interval is ``(lo, hi]``."""
    parts = [p.strip() for p in text.split(",")]
    coeffs = tuple(_parse_affine(p) for p in parts)
    lo_q, hi_q = to_rational(lo), to_rational(hi)
    if lo_q >= hi_q:
        raise ParseError(f"empty range ({lo}, {hi}]")
    if len(coeffs) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(coeffs)}")
    return WeightFamily(coeffs, lo_q, hi_q)


def find_walls(F: WeightFamily) -> list[Fraction]:
    """Parameters strictly inside ``(lo, hi)`` where some subset sum crosses 1."""
    walls = set()
    for r in range(2, F.n + 1):
        for S in combinations(F.coefficients, r):
            a = sum((c[0] for c in S), Fraction(0))
            b = sum((c[1] for c in S), Fraction(0))
            if b == 0:
                continue
            eps = (1 - a) / b
            if F.lo < eps < F.hi:
                walls.add(eps)
    return sorted(walls)


def chamber_intervals(F: WeightFamily) -> list[tuple[Fraction, Fraction]]:
    """Consecutive open intervals between the walls, covering ``(lo, hi)``."""
    cuts = [F.lo, *find_walls(F), F.hi]
    return list(zip(cuts, cuts[1:]))
