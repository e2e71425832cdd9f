"""Enumeration of all strata (isomorphism classes of A-trees) for a datum.

A tail-labelled tree is an A-tree exactly when the tails on either side of
every edge weigh more than 1: summing the vertex inequalities over the
vertices on one side of an edge gives ``w(side) + 2|V| - 1 > 2|V|``, and
conversely a vertex with one edge carries a whole side, with two edges it
has a positive tail, and with three or more it is stable regardless.  So
trees are the cliques of the compatibility graph on admissible splits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

from .errors import UnknownStratum
from .trees import ATree, CanonicalKey, degenerates_to, tree_from_splits, tree_to_json
from .weights import WeightDatum, chamber_signature, format_rational


def set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    """All set partitions of ``items`` (first element anchors a new block)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first], *part]
        for i in range(len(part)):
            yield part[:i] + [[first, *part[i]]] + part[i + 1:]


def admissible_splits(A: WeightDatum) -> list[frozenset[int]]:
    """Sides (not containing label 1) of every split that can be an edge."""
    rest = range(2, A.n + 1)
    full = frozenset(range(1, A.n + 1))
    out = []
    for r in range(2, A.n - 1):
        for side in combinations(rest, r):
            s = frozenset(side)
            if A.weight_of(s) > 1 and A.weight_of(full - s) > 1:
                out.append(s)
    return out


def _compatible(a: frozenset[int], b: frozenset[int]) -> bool:
    # both sides avoid label 1, so the only possible violation is a proper overlap
    return not (a & b) or a <= b or b <= a


def compatible_split_sets(A: WeightDatum) -> Iterator[tuple[frozenset[int], ...]]:
    """Every set of pairwise compatible admissible splits (including the empty set)."""
    splits = admissible_splits(A)
    ok = [[_compatible(a, b) for b in splits] for a in splits]

    def grow(chosen: list[int], start: int):
        yield tuple(splits[i] for i in chosen)
        for j in range(start, len(splits)):
            if all(ok[i][j] for i in chosen):
                chosen.append(j)
                yield from grow(chosen, j + 1)
                chosen.pop()

    yield from grow([], 0)


def r_structures(A: WeightDatum, tails: list[int]) -> Iterator[list[list[int]]]:
    for part in set_partitions(tails):
        if all(len(b) == 1 or A.weight_of(b) <= 1 for b in part):
            yield part


def iter_atrees(A: WeightDatum) -> Iterator[ATree]:
    for splits in compatible_split_sets(A):
        base = tree_from_splits(A, splits, check=False)
        per_vertex = [
            [[b for b in part if len(b) > 1] for part in r_structures(A, base.tails_at(v))]
            for v in base.vertices
        ]
        for choice in product(*per_vertex):
            blocks = [b for bs in choice for b in bs]
            yield tree_from_splits(A, splits, blocks, check=False)


@dataclass
class StrataTable:
    weights: WeightDatum
    by_dim: dict[int, list[ATree]]
    index: dict[CanonicalKey, tuple[int, int]]

    def __contains__(self, g: ATree) -> bool:
        return g.weights == self.weights and g.key in self.index

    def __iter__(self) -> Iterator[ATree]:
        for d in sorted(self.by_dim):
            yield from self.by_dim[d]

    def __len__(self) -> int:
        return len(self.index)

    def locate(self, g: ATree) -> tuple[int, int]:
        try:
            return self.index[g.key]
        except KeyError:
            raise UnknownStratum(f"{g!r} is not a stratum of {self.weights}") from None

    def counts(self) -> dict[int, int]:
        return {d: len(ts) for d, ts in self.by_dim.items()}

    @property
    def top_dimension(self) -> int:
        return self.weights.n - 3


def enumerate_strata(A: WeightDatum) -> StrataTable:
    seen: dict[CanonicalKey, ATree] = {}
    for g in iter_atrees(A):
        seen.setdefault(g.key, g)
    by_dim: dict[int, list[ATree]] = {d: [] for d in range(A.n - 2)}
    for g in seen.values():
        by_dim[g.dimension].append(g)
    index = {}
    for d, ts in by_dim.items():
        ts.sort(key=lambda g: g.key)
        for i, g in enumerate(ts):
            index[g.key] = (d, i)
    return StrataTable(A, by_dim, index)


def closure_strata(T: StrataTable, g: ATree) -> list[ATree]:
    T.locate(g)
    return [h for h in T if h.dimension <= g.dimension and degenerates_to(h, g)]


def stratum_euler_characteristic(g: ATree) -> int:
    chi = 1
    for v in g.vertices:
        k = g.marks_count(v)
        chi *= (-1) ** (k - 3) * math.factorial(k - 3)
    return chi


def covering_pairs(T: StrataTable) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Pairs (lower, upper) of table positions with lower < upper and adjacent dimensions."""
    out = []
    for d in range(T.top_dimension):
        for lo in T.by_dim.get(d, []):
            for hi in T.by_dim.get(d + 1, []):
                if degenerates_to(lo, hi):
                    out.append((T.locate(lo), T.locate(hi)))
    return out


# -- export ------------------------------------------------------------------

def table_to_json(T: StrataTable, dim: int | None = None, with_weights: bool = True) -> dict:
    dims = sorted(T.by_dim) if dim is None else [dim]
    out = {}
    if with_weights:
        out["weights"] = [format_rational(m) for m in T.weights.weights]
    out["signature"] = chamber_signature(T.weights).as_sorted()
    out["dims"] = {str(d): [tree_to_json(g) for g in T.by_dim.get(d, [])] for d in dims}
    out["counts"] = {str(d): len(T.by_dim.get(d, [])) for d in dims}
    return out


def poset_to_dot(T: StrataTable, dim: int | None = None) -> str:
    """Degeneration poset: one node per stratum, arrows along covering relations."""

    def node(pos):
        return f"s{pos[0]}_{pos[1]}"

    lines = ["digraph strata {", "  rankdir=BT;"]
    keep = set(sorted(T.by_dim)) if dim is None else {dim}
    for d in sorted(keep):
        for i, g in enumerate(T.by_dim.get(d, [])):
            splits = " ".join("{" + ",".join(map(str, s)) + "}" for s in g.key.splits)
            merged = [
                "[" + ",".join(map(str, b)) + "]"
                for p in g.r_structure.values() for b in p if len(b) > 1
            ]
            label = f"d={d} #{i}" + (f"\\n{splits}" if splits else "")
            if merged:
                label += "\\n" + " ".join(merged)
            lines.append(f'  {node((d, i))} [label="{label}"];')
    for lo, hi in covering_pairs(T):
        if lo[0] in keep and hi[0] in keep:
            lines.append(f"  {node(lo)} -> {node(hi)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
