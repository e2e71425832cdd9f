"""Principal relations between strata classes of equal dimension.

For a stratum ``g``, a vertex ``v`` and four distinct marks at ``v`` the
relation compares the two ways of separating the marks in pairs by a new
edge.  Where the new edge would leave an unstable side, the two marks on
that side collide instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Union

from .errors import BadPartition, MarksNotDistinct, TooFewMarks
from .strata import StrataTable
from .trees import (
    ATree,
    CanonicalKey,
    EdgeFlag,
    Mark,
    TailBlock,
    _skeleton,
    build_tree,
    identify_tail_blocks,
)

PAIRINGS = ("13|24", "14|23")


@dataclass(frozen=True)
class Stable:
    tree: ATree


@dataclass(frozen=True)
class Unstable:
    side: int  # 1 or 2


Insertion = Union[Stable, Unstable]


@dataclass
class RelationVector:
    dim: int
    terms: dict[CanonicalKey, int]
    source: dict = field(default_factory=dict, compare=False)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self, sign: int = 0) -> set[CanonicalKey]:
        return {k for k, c in self.terms.items() if sign == 0 or c * sign > 0}


def _side_weight(g: ATree, side: Iterable[Mark]):
    # the inserted edge contributes one more flag of weight 1
    return sum((g.mark_weight(m) for m in side), 1)


def insert_edge(g: ATree, v: int, side1: Iterable[Mark], side2: Iterable[Mark]) -> Insertion:
    side1, side2 = list(side1), list(side2)
    marks = g.marks_at(v)
    if sorted(side1 + side2, key=_mark_order) != sorted(marks, key=_mark_order) \
            or len(set(side1) | set(side2)) != len(marks):
        raise BadPartition("sides must partition the marks at the vertex")
    if len(side1) < 2 or len(side2) < 2:
        raise BadPartition("each side needs at least two marks")
    w1, w2 = _side_weight(g, side1), _side_weight(g, side2)
    assert w1 > 2 or w2 > 2, "both sides of an insertion cannot be unstable"
    if w1 <= 2:
        return Unstable(1)
    if w2 <= 2:
        return Unstable(2)

    tails, edges, blocks = _skeleton(g)
    new = max(g.vertices) + 1
    moved_labels = [lab for m in side2 if isinstance(m, TailBlock) for lab in m.labels]
    moved_edges = {m.flag for m in side2 if isinstance(m, EdgeFlag)}
    tails[v] = [lab for lab in tails[v] if lab not in moved_labels]
    tails[new] = moved_labels
    blocks[new] = [list(m.labels) for m in side2 if isinstance(m, TailBlock)]
    blocks[v] = [list(m.labels) for m in side1 if isinstance(m, TailBlock)]
    new_edges = []
    for f, (a, b) in edges.items():
        # ``edges`` is keyed by one flag of each edge; find the flag at v
        if a == v and (f in moved_edges):
            a = new
        elif b == v and (g.involution[f] in moved_edges):
            b = new
        new_edges.append((a, b))
    new_edges.append((v, new))
    return Stable(build_tree(g.weights, tails, new_edges, blocks))


def _mark_order(m: Mark):
    return (1, m.flag, ()) if isinstance(m, EdgeFlag) else (0, 0, m.labels)


def mark_descriptor(g: ATree, m: Mark) -> dict:
    """Id-free description of a mark: its labels, or the labels beyond an edge flag."""
    if isinstance(m, TailBlock):
        return {"tails": list(m.labels)}
    return {"edge": sorted(g.far_tails[m.flag])}


def _descriptor_key(d: dict):
    return (0, d["tails"]) if "tails" in d else (1, d["edge"])


def _side_classes(g, v, pair_a, pair_b, rest) -> set[CanonicalKey]:
    classes = set()
    for r in range(len(rest) + 1):
        for F1 in combinations(rest, r):
            F2 = [m for m in rest if m not in F1]
            side1 = [*pair_a, *F1]
            side2 = [*pair_b, *F2]
            res = insert_edge(g, v, side1, side2)
            if isinstance(res, Stable):
                classes.add(res.tree.key)
                continue
            pair = pair_a if res.side == 1 else pair_b
            assert all(isinstance(m, TailBlock) for m in pair), \
                "an unstable side cannot contain an edge flag"
            merged = identify_tail_blocks(g, v, [m.labels for m in pair])
            classes.add(merged.key)
    return classes


def principal_relation(g: ATree, v: int, marks, pairing: str = "13|24") -> RelationVector:
    marks = list(marks)
    here = g.marks_at(v)
    if len(here) < 4:
        raise TooFewMarks(f"vertex carries {len(here)} marks, need 4")
    if len(marks) != 4 or len(set(marks)) != 4:
        raise MarksNotDistinct("need four distinct marks")
    if any(m not in here for m in marks):
        raise MarksNotDistinct("marks must sit at the chosen vertex")
    if pairing not in PAIRINGS:
        raise ValueError(f"pairing must be one of {PAIRINGS}")
    f1, f2, f3, f4 = marks
    rest = [m for m in here if m not in marks]
    first = _side_classes(g, v, (f1, f2), (f3, f4), rest)
    if pairing == "13|24":
        second = _side_classes(g, v, (f1, f3), (f2, f4), rest)
    else:
        second = _side_classes(g, v, (f1, f4), (f2, f3), rest)
    terms: dict[CanonicalKey, int] = {}
    for k in first:
        terms[k] = terms.get(k, 0) + 1
    for k in second:
        terms[k] = terms.get(k, 0) - 1
    terms = {k: c for k, c in terms.items() if c}
    return RelationVector(
        g.dimension - 1,
        terms,
        {"marks": [mark_descriptor(g, m) for m in marks], "pairing": pairing},
    )


def relations_from(g: ATree) -> list[RelationVector]:
    """All principal relations generated at every vertex of ``g``."""
    out = []
    for v in sorted(g.vertices, key=g.fingerprint):
        here = sorted(g.marks_at(v), key=lambda m: _descriptor_key(mark_descriptor(g, m)))
        if len(here) < 4:
            continue
        for quad in combinations(here, 4):
            for pairing in PAIRINGS:
                rel = principal_relation(g, v, quad, pairing)
                rel.source["vertex"] = [list(p) for p in g.fingerprint(v)]
                out.append(rel)
    return out


def all_relations(T: StrataTable, d: int) -> list[RelationVector]:
    out = []
    for i, g in enumerate(T.by_dim.get(d + 1, [])):
        for rel in relations_from(g):
            if rel.is_zero():
                continue
            rel.source["stratum"] = i
            out.append(rel)
    return out


def relation_to_json(T: StrataTable, rel: RelationVector) -> dict:
    terms = sorted(
        ({"stratum": T.index[k][1], "coeff": c} for k, c in rel.terms.items()),
        key=lambda t: t["stratum"],
    )
    source = {k: rel.source[k] for k in ("stratum", "vertex", "marks", "pairing") if k in rel.source}
    return {"dim": rel.dim, "terms": terms, "source": source}
