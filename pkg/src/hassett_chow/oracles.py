"""Independent checks that share only the strata table with the main pipeline."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NegativeCoefficient
from .strata import StrataTable


@dataclass(frozen=True)
class CountPolynomial:
    coefficients: tuple[int, ...]  # constant term first

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, q: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * q + c
        return acc

    def __str__(self) -> str:
        return format_polynomial(self.coefficients, "q")


def _mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def open_config_count(k: int) -> list[int]:
    """Point count of k distinct points on a line modulo automorphisms.

    Fixing three points leaves ``(q-2)(q-3)...(q-k+2)``.
    """
    poly = [1]
    for i in range(k - 3):
        poly = _mul(poly, [-(2 + i), 1])
    return poly


def point_count_polynomial(T: StrataTable) -> CountPolynomial:
    total = [0] * (T.top_dimension + 1)
    cache: dict[int, list[int]] = {}
    for g in T:
        term = [1]
        for v in g.vertices:
            k = g.marks_count(v)
            if k not in cache:
                cache[k] = open_config_count(k)
            term = _mul(term, cache[k])
        for i, c in enumerate(term):
            total[i] += c
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return CountPolynomial(tuple(total))


def eulerian_numbers(m: int) -> list[int]:
    if m < 1:
        raise ValueError("m must be at least 1")
    row = [1]
    for size in range(2, m + 1):
        prev = row + [0]
        row = [
            (k + 1) * prev[k] + (size - k) * (prev[k - 1] if k else 0)
            for k in range(size)
        ]
    return row


def betti_from_point_count(C: CountPolynomial) -> list[int]:
    if any(c < 0 for c in C.coefficients):
        raise NegativeCoefficient(f"count polynomial {C} has a negative coefficient")
    return list(C.coefficients)


def format_polynomial(coeffs, var: str = "t", step: int = 1) -> str:
    """``[1, 5, 1]`` with step 2 -> ``"1+5*t^2+t^4"``."""
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        e = i * step
        if e == 0:
            mono = str(c)
        else:
            power = var if e == 1 else f"{var}^{e}"
            mono = power if c == 1 else f"{c}*{power}"
        terms.append(mono)
    return "+".join(terms).replace("+-", "-") or "0"
