"""Chow/homology groups as free groups on strata modulo principal relations."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from .linalg import IntegerMatrix, SmithForm, smith_normal_form
from .oracles import betti_from_point_count, format_polynomial, point_count_polynomial
from .relations import RelationVector, all_relations
from .strata import StrataTable, enumerate_strata, stratum_euler_characteristic
from .trees import CanonicalKey
from .weights import WeightDatum, chamber_signature, format_rational

RelationFilter = Callable[[RelationVector], bool]


@dataclass
class DimensionGroup:
    dim: int
    generators: list[CanonicalKey]
    relation_count: int  # after deduplication
    raw_relation_count: int
    smith: SmithForm

    @property
    def betti(self) -> int:
        return len(self.generators) - self.smith.rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.smith.torsion


@dataclass
class ChowPresentation:
    weights: WeightDatum
    groups: list[DimensionGroup]

    @property
    def betti(self) -> list[int]:
        return [g.betti for g in self.groups]

    @property
    def torsion(self) -> dict[int, tuple[int, ...]]:
        return {g.dim: g.torsion for g in self.groups if g.torsion}


def relation_matrix(T: StrataTable, rels: list[RelationVector], d: int) -> IntegerMatrix:
    """Deduplicated relation rows over the dimension-``d`` strata."""
    rows = []
    seen = set()
    for rel in rels:
        row = {T.index[k][1]: c for k, c in rel.terms.items()}
        frozen = tuple(sorted(row.items()))
        if frozen not in seen:
            seen.add(frozen)
            rows.append(row)
    return IntegerMatrix(len(rows), len(T.by_dim.get(d, [])), rows)


def dimension_group(
    T: StrataTable, d: int, relation_filter: Optional[RelationFilter] = None
) -> DimensionGroup:
    gens = [g.key for g in T.by_dim.get(d, [])]
    rels = all_relations(T, d) if d < T.top_dimension else []
    if relation_filter is not None:
        rels = [r for r in rels if relation_filter(r)]
    M = relation_matrix(T, rels, d)
    return DimensionGroup(d, gens, M.nrows, len(rels), smith_normal_form(M))


def _group_worker(args):
    T, d = args
    return dimension_group(T, d)


def chow_groups(
    A: WeightDatum,
    table: Optional[StrataTable] = None,
    jobs: int = 1,
    relation_filter: Optional[RelationFilter] = None,
) -> ChowPresentation:
    T = table if table is not None else enumerate_strata(A)
    dims = list(range(T.top_dimension + 1))
    if jobs > 1 and relation_filter is None and len(dims) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            groups = list(pool.map(_group_worker, [(T, d) for d in dims]))
    else:
        groups = [dimension_group(T, d, relation_filter) for d in dims]
    return ChowPresentation(T.weights, groups)


def poincare_polynomial(P: ChowPresentation) -> list[int]:
    """Coefficients of ``t^0, t^1, ...``; odd degrees are zero."""
    coeffs = [0] * (2 * len(P.groups) - 1)
    for g in P.groups:
        coeffs[2 * g.dim] = g.betti
    return coeffs


def poincare_string(P: ChowPresentation) -> str:
    return format_polynomial(poincare_polynomial(P), "t")


def verify_presentation(P: ChowPresentation, T: StrataTable) -> dict[str, bool]:
    b = P.betti
    top = len(b) - 1
    chi = sum(stratum_euler_characteristic(g) for g in T)
    try:
        oracle = betti_from_point_count(point_count_polynomial(T))
    except ValueError:
        oracle = None
    return {
        "duality": all(b[d] == b[top - d] for d in range(top + 1)),
        "euler": sum(b) == chi,
        "torsion_free": not P.torsion,
        "point_count": oracle is not None and oracle == b,
    }


def presentation_to_json(
    P: ChowPresentation,
    checks: Optional[dict[str, bool]] = None,
    with_weights: bool = True,
) -> dict:
    out = {}
    if with_weights:
        out["weights"] = [format_rational(m) for m in P.weights.weights]
    out["signature"] = chamber_signature(P.weights).as_sorted()
    out["betti"] = P.betti
    out["torsion"] = {str(d): list(t) for d, t in P.torsion.items()}
    out["poincare"] = poincare_string(P)
    out["generators"] = [len(g.generators) for g in P.groups]
    out["relation_counts"] = [g.relation_count for g in P.groups]
    out["relation_ranks"] = [g.smith.rank for g in P.groups]
    if checks is not None:
        out["checks"] = checks
    return out
