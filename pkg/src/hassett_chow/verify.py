"""Randomized invariant suite behind ``hassett-chow verify``."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional

from .presentation import RelationFilter, chow_groups, presentation_to_json, verify_presentation
from .strata import StrataTable, enumerate_strata, table_to_json
from .trees import ATree, contract_edge, degenerates_to, identify_tail_blocks, relabel
from .weights import WeightDatum, format_rational, new_weight_datum, same_chamber


def random_datum(rng: random.Random, n: int, max_den: int = 12) -> WeightDatum:
    """Rejection-sample a valid datum with denominators at most ``max_den``."""
    while True:
        ms = []
        for _ in range(n):
            q = rng.randint(1, max_den)
            ms.append(Fraction(rng.randint(1, q), q))
        if sum(ms) > 2:
            return new_weight_datum(ms)


def chamber_twin(rng: random.Random, A: WeightDatum) -> WeightDatum:
    """A different datum with the same chamber signature.

    Every weight is lowered by less than ``1/(2nL)``, where ``L`` is the lcm of
    the denominators; subset sums above 1 (or the total above 2) exceed the
    threshold by at least ``1/L`` and so stay above it, and sums at most 1 stay
    at most 1.
    """
    L = lcm(*(m.denominator for m in A.weights))
    scale = Fraction(1, 2 * A.n * L)
    ms = [m - scale * Fraction(rng.randint(1, 999), 1000) for m in A.weights]
    B = new_weight_datum(ms)
    assert same_chamber(A, B)
    return B


def anchor_data(max_n: int) -> list[WeightDatum]:
    out = []
    for n in range(4, max_n + 1):
        out.append(new_weight_datum([1] * n))
        out.append(new_weight_datum([1, 1] + [Fraction(1, n - 2)] * (n - 2)))
    return out


def random_relabel(rng: random.Random, g: ATree) -> ATree:
    flags = list(g.flags)
    new_flags = rng.sample(range(10 * len(flags) + 10), len(flags))
    verts = list(g.vertices)
    new_verts = rng.sample(range(10 * len(verts) + 10), len(verts))
    return relabel(g, dict(zip(flags, new_flags)), dict(zip(verts, new_verts)))


def check_moves(T: StrataTable, rng: Optional[random.Random] = None, relabelings: int = 3) -> dict[str, bool]:
    contract_ok = identify_ok = closed = order_ok = key_ok = True
    for g in T:
        for f, _ in g.edges:
            h = contract_edge(g, f)
            contract_ok &= h.codimension == g.codimension - 1
            closed &= h in T
            order_ok &= degenerates_to(g, h) and not degenerates_to(h, g)
        for v in g.vertices:
            blocks = g.r_structure[v]
            for k in range(2, len(blocks) + 1):
                for chosen in combinations(blocks, k):
                    if g.weights.weight_of(x for b in chosen for x in b) > 1:
                        continue
                    h = identify_tail_blocks(g, v, chosen)
                    identify_ok &= h.codimension == g.codimension + k - 1
                    closed &= h in T
                    order_ok &= degenerates_to(h, g) and not degenerates_to(g, h)
        if rng is not None:
            for _ in range(relabelings):
                key_ok &= random_relabel(rng, g).key == g.key
    return {
        "contraction_codim": contract_ok,
        "identification_codim": identify_ok,
        "moves_closed": closed,
        "order_strict": order_ok,
        "key_relabel_invariant": key_ok,
    }


def check_datum(
    A: WeightDatum,
    rng: random.Random,
    relation_filter: Optional[RelationFilter] = None,
    moves: bool = True,
) -> dict[str, bool]:
    T = enumerate_strata(A)
    P = chow_groups(A, T, relation_filter=relation_filter)
    checks = verify_presentation(P, T)
    b = P.betti
    checks["extremes_one"] = b[0] == 1 and b[-1] == 1
    B = chamber_twin(rng, A)
    TB = enumerate_strata(B)
    PB = chow_groups(B, TB, relation_filter=relation_filter)
    checks["chamber_invariance"] = (
        _dump(table_to_json(T, with_weights=False)) == _dump(table_to_json(TB, with_weights=False))
        and _dump(presentation_to_json(P, with_weights=False))
        == _dump(presentation_to_json(PB, with_weights=False))
    )
    if moves:
        checks.update(check_moves(T, rng))
    return checks


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


@dataclass
class VerifyReport:
    seed: int
    max_n: int
    trials: int
    cases: list[dict] = field(default_factory=list)

    @property
    def failures(self) -> list[dict]:
        return [c for c in self.cases if not all(c["checks"].values())]

    @property
    def passed(self) -> bool:
        return not self.failures

    def counterexample(self) -> Optional[dict]:
        """Smallest failing case: fewest points, then smallest denominators."""
        bad = self.failures
        if not bad:
            return None
        return min(bad, key=lambda c: (len(c["weights"]), sum(len(w) for w in c["weights"])))

    def to_json(self) -> dict:
        out = {
            "seed": self.seed,
            "max_n": self.max_n,
            "trials": self.trials,
            "cases": len(self.cases),
            "passed": self.passed,
            "failures": len(self.failures),
        }
        if not self.passed:
            out["counterexample"] = self.counterexample()
        return out


def run_verify(
    max_n: int = 5,
    trials: int = 25,
    seed: int = 0,
    relation_filter: Optional[RelationFilter] = None,
    moves: bool = True,
) -> VerifyReport:
    rng = random.Random(seed)
    report = VerifyReport(seed, max_n, trials)
    data = anchor_data(max_n)
    data += [random_datum(rng, rng.randint(4, max_n)) for _ in range(trials)]
    for A in data:
        checks = check_datum(A, rng, relation_filter, moves and A.n <= 6)
        report.cases.append(
            {"weights": [format_rational(m) for m in A.weights], "checks": checks}
        )
    return report
