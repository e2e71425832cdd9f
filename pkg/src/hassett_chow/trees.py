"""Weighted dual trees with r-structures (A-trees) and their moves.

A tree is stored as flags/vertices with a boundary map and an involution.
Tails carry the 1-based labels of the marked points; the r-structure is a
partition of the tail labels at each vertex into blocks of coinciding
points.  Internal flag and vertex ids are arbitrary: only
:meth:`ATree.key` is meaningful across trees.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import (
    BlockTooHeavy,
    InvalidResidualDatum,
    InvalidTree,
    NotAnEdge,
    NotAtVertex,
    NotSingleton,
    UnstableVertex,
)
from .weights import WeightDatum, format_rational, new_weight_datum, vertex_weight_structure

Block = tuple[int, ...]
Partition = tuple[Block, ...]


def normalize_partition(blocks: Iterable[Iterable[int]]) -> Partition:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


class CanonicalKey(NamedTuple):
    """Complete isomorphism invariant of an A-tree over a fixed datum.

    ``splits`` lists, per edge, the tails on the side away from label 1.
    ``vertex_partitions`` pairs each vertex fingerprint (the partition of all
    labels into the branches around the vertex, own tails as singletons) with
    the r-structure at that vertex.
    """

    splits: tuple[Block, ...]
    vertex_partitions: tuple[tuple[Partition, Partition], ...]


@dataclass(frozen=True, order=True)
class EdgeFlag:
    flag: int


@dataclass(frozen=True, order=True)
class TailBlock:
    labels: Block


Mark = Union[EdgeFlag, TailBlock]


@dataclass(frozen=True)
class PuncturedLine:
    puncture_count: int


@dataclass(frozen=True)
class ProductOfModuli:
    factors: tuple[WeightDatum, ...]


FiberKind = Union[PuncturedLine, ProductOfModuli]


@dataclass(frozen=True, eq=False)
class ATree:
    weights: WeightDatum
    boundary: Mapping[int, int]
    involution: Mapping[int, int]
    tail_label: Mapping[int, int]
    r_structure: Mapping[int, Partition]
    _checked: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self._checked:
            self._validate()

    # -- structure ---------------------------------------------------------

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.boundary.values()) | set(self.r_structure)))

    @cached_property
    def flags(self) -> tuple[int, ...]:
        return tuple(sorted(self.boundary))

    @cached_property
    def _flags_at(self) -> dict[int, list[int]]:
        at = {v: [] for v in self.vertices}
        for f in self.flags:
            at[self.boundary[f]].append(f)
        return at

    def flags_at(self, v: int) -> list[int]:
        return self._flags_at[v]

    def is_tail(self, f: int) -> bool:
        return self.involution[f] == f

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (f, self.involution[f]) for f in self.flags if f < self.involution[f]
        )

    def edge_flags_at(self, v: int) -> list[int]:
        return [f for f in self._flags_at[v] if not self.is_tail(f)]

    def tails_at(self, v: int) -> list[int]:
        return sorted(self.tail_label[f] for f in self._flags_at[v] if self.is_tail(f))

    def blocks_at(self, v: int) -> Partition:
        return self.r_structure[v]

    @cached_property
    def _vertex_of_label(self) -> dict[int, int]:
        return {lab: self.boundary[f] for f, lab in self.tail_label.items()}

    def vertex_of(self, label: int) -> int:
        return self._vertex_of_label[label]

    def block_of(self, label: int) -> Block:
        for b in self.r_structure[self.vertex_of(label)]:
            if label in b:
                return b
        raise KeyError(label)

    def marks_at(self, v: int) -> list[Mark]:
        marks: list[Mark] = [TailBlock(b) for b in self.r_structure[v]]
        marks.extend(EdgeFlag(f) for f in self.edge_flags_at(v))
        return marks

    def mark_weight(self, mark: Mark) -> Fraction:
        if isinstance(mark, EdgeFlag):
            return Fraction(1)
        return self.weights.weight_of(mark.labels)

    def flag_weight(self, f: int) -> Fraction:
        if self.is_tail(f):
            return self.weights[self.tail_label[f]]
        return Fraction(1)

    def vertex_weight(self, v: int) -> Fraction:
        return sum((self.flag_weight(f) for f in self._flags_at[v]), Fraction(0))

    def marks_count(self, v: int) -> int:
        return len(self.r_structure[v]) + len(self.edge_flags_at(v))

    @cached_property
    def far_tails(self) -> dict[int, frozenset[int]]:
        """For each edge flag ``f``: the labels beyond ``f`` as seen from ``boundary[f]``."""
        out: dict[int, frozenset[int]] = {}

        def collect(f: int) -> frozenset[int]:
            if f in out:
                return out[f]
            g = self.involution[f]
            w = self.boundary[g]
            labels = set(self.tails_at(w))
            for h in self.edge_flags_at(w):
                if h != g:
                    labels |= collect(h)
            out[f] = frozenset(labels)
            return out[f]

        for e in self.edges:
            collect(e[0])
            collect(e[1])
        return out

    def split_of(self, f: int) -> Block:
        """Side of the edge through flag ``f`` that does not contain label 1."""
        side = self.far_tails[f]
        if 1 in side:
            side = self.far_tails[self.involution[f]]
        return tuple(sorted(side))

    def fingerprint(self, v: int) -> Partition:
        parts = [(lab,) for lab in self.tails_at(v)]
        parts.extend(tuple(sorted(self.far_tails[f])) for f in self.edge_flags_at(v))
        return tuple(sorted(parts))

    @cached_property
    def key(self) -> CanonicalKey:
        splits = tuple(sorted(self.split_of(f) for f, _ in self.edges))
        vparts = tuple(
            sorted((self.fingerprint(v), self.r_structure[v]) for v in self.vertices)
        )
        return CanonicalKey(splits, vparts)

    @cached_property
    def codimension(self) -> int:
        n_blocks = sum(len(p) for p in self.r_structure.values())
        return len(self.edges) + (self.weights.n - n_blocks)

    @property
    def dimension(self) -> int:
        return self.weights.n - 3 - self.codimension

    def __eq__(self, other):
        if not isinstance(other, ATree):
            return NotImplemented
        return self.weights == other.weights and self.key == other.key

    def __hash__(self):
        return hash((self.weights, self.key))

    def __repr__(self):
        return f"ATree({self.weights}, splits={list(self.key.splits)}, dim={self.dimension})"

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        A = self.weights
        flags = set(self.boundary)
        if set(self.involution) != flags:
            raise InvalidTree("involution and boundary have different domains")
        for f, g in self.involution.items():
            if self.involution.get(g) != f:
                raise InvalidTree("involution is not an involution")
        tails = {f for f in flags if self.involution[f] == f}
        if set(self.tail_label) != tails:
            raise InvalidTree("tail labels must be given exactly on the tails")
        if sorted(self.tail_label.values()) != list(range(1, A.n + 1)):
            raise InvalidTree(f"tail labels must be a bijection onto 1..{A.n}")
        verts = set(self.vertices)
        if set(self.r_structure) != verts:
            raise InvalidTree("r-structure must cover every vertex")
        if len(self.edges) != len(verts) - 1 or not self._connected():
            raise InvalidTree("geometric realization is not a tree")
        for v in verts:
            got = sorted(lab for b in self.r_structure[v] for lab in b)
            if got != self.tails_at(v):
                raise InvalidTree(f"r-structure at {v} is not a partition of its tails")
            for b in self.r_structure[v]:
                if A.weight_of(b) > 1:
                    raise BlockTooHeavy(f"block {list(b)} weighs more than 1")
            if self.vertex_weight(v) <= 2:
                raise UnstableVertex(
                    f"vertex with tails {self.tails_at(v)} and "
                    f"{len(self.edge_flags_at(v))} edges weighs "
                    f"{format_rational(self.vertex_weight(v))} <= 2"
                )

    def _connected(self) -> bool:
        adj = defaultdict(set)
        for f, g in self.edges:
            adj[self.boundary[f]].add(self.boundary[g])
            adj[self.boundary[g]].add(self.boundary[f])
        start = self.vertices[0]
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


# -- construction ------------------------------------------------------------

def build_tree(
    A: WeightDatum,
    tails: Mapping[int, Iterable[int]],
    edges: Iterable[tuple[int, int]],
    blocks: Mapping[int, Iterable[Iterable[int]]] | None = None,
    check: bool = True,
) -> ATree:
    """Assemble an :class:`ATree` from vertex-level data.

    ``tails`` maps each vertex to its labels, ``edges`` lists vertex pairs and
    ``blocks`` gives the r-structure (singletons where omitted).
    """
    boundary: dict[int, int] = {}
    involution: dict[int, int] = {}
    tail_label: dict[int, int] = {}
    r_structure: dict[int, Partition] = {}
    fid = 0
    for v in sorted(tails):
        for lab in sorted(tails[v]):
            boundary[fid] = v
            involution[fid] = fid
            tail_label[fid] = lab
            fid += 1
        given = blocks.get(v) if blocks else None
        r_structure[v] = normalize_partition(
            given if given is not None else ([lab] for lab in tails[v])
        )
    for u, w in edges:
        if u not in tails or w not in tails:
            raise InvalidTree(f"edge ({u}, {w}) uses an unknown vertex")
        boundary[fid], boundary[fid + 1] = u, w
        involution[fid], involution[fid + 1] = fid + 1, fid
        fid += 2
    return ATree(A, boundary, involution, tail_label, r_structure, _checked=check)


def one_vertex_tree(A: WeightDatum, blocks: Iterable[Iterable[int]] | None = None) -> ATree:
    labels = range(1, A.n + 1)
    part = [[i] for i in labels] if blocks is None else [list(b) for b in blocks]
    return build_tree(A, {0: labels}, [], {0: part})


def tree_from_splits(
    A: WeightDatum,
    splits: Iterable[Iterable[int]],
    blocks: Iterable[Iterable[int]] = (),
    check: bool = True,
) -> ATree:
    """Tree whose edges induce the given pairwise compatible splits.

    Each split may be given by either side.  ``blocks`` lists the
    non-singleton r-structure blocks; each must lie at a single vertex.
    """
    full = frozenset(range(1, A.n + 1))
    clusters = []
    for s in splits:
        s = frozenset(s)
        if 1 in s:
            s = full - s
        clusters.append(s)
    if len(set(clusters)) != len(clusters):
        raise InvalidTree("repeated split")
    for i, c in enumerate(clusters):
        if len(c) < 1 or len(c) >= A.n:
            raise InvalidTree("split side must be a proper nonempty subset")
        for d in clusters[i + 1:]:
            if c & d and not (c <= d or d <= c):
                raise InvalidTree(f"splits {sorted(c)} and {sorted(d)} are incompatible")
    # vertex 0 is the root (contains label 1); vertex i+1 sits below cluster i
    order = sorted(range(len(clusters)), key=lambda i: len(clusters[i]))
    parent = {}
    for pos, i in enumerate(order):
        parent[i + 1] = 0
        for j in order[pos + 1:]:
            if clusters[i] < clusters[j]:
                parent[i + 1] = j + 1
                break
    own = {0: set(full)}
    own.update({i + 1: set(c) for i, c in enumerate(clusters)})
    for child, par in parent.items():
        own[par] -= clusters[child - 1]
    vertex_of = {lab: v for v, labs in own.items() for lab in labs}
    part = {v: [[lab] for lab in labs] for v, labs in own.items()}
    for b in blocks:
        b = list(b)
        v = vertex_of[b[0]]
        if any(vertex_of[lab] != v for lab in b):
            raise NotAtVertex(f"block {sorted(b)} spans several vertices")
        part[v] = [p for p in part[v] if p[0] not in b] + [b]
    return build_tree(A, own, [(par, child) for child, par in parent.items()], part, check)


def _skeleton(g: ATree):
    """Mutable vertex-level copy: (tails, edges keyed by flag at u, blocks)."""
    tails = {v: list(g.tails_at(v)) for v in g.vertices}
    edges = {f: (g.boundary[f], g.boundary[h]) for f, h in g.edges}
    blocks = {v: [list(b) for b in g.r_structure[v]] for v in g.vertices}
    return tails, edges, blocks


def relabel(g: ATree, flag_map: Mapping[int, int], vertex_map: Mapping[int, int]) -> ATree:
    """Rename internal flag and vertex ids; tail labels are untouched."""
    return ATree(
        g.weights,
        {flag_map[f]: vertex_map[v] for f, v in g.boundary.items()},
        {flag_map[f]: flag_map[h] for f, h in g.involution.items()},
        {flag_map[f]: lab for f, lab in g.tail_label.items()},
        {vertex_map[v]: p for v, p in g.r_structure.items()},
    )


# -- operations --------------------------------------------------------------

def canonical_key(g: ATree) -> CanonicalKey:
    return g.key


def codimension(g: ATree) -> int:
    return g.codimension


def dimension(g: ATree) -> int:
    return g.dimension


def _edge_flag(g: ATree, e) -> int:
    f = e[0] if isinstance(e, tuple) else e
    if f not in g.involution or g.is_tail(f):
        raise NotAnEdge(f"{e!r} is not an edge")
    if isinstance(e, tuple) and (len(e) != 2 or g.involution[f] != e[1]):
        raise NotAnEdge(f"{e!r} is not an edge")
    return f


def contract_edge(g: ATree, e) -> ATree:
    """Merge the endpoints of edge ``e`` (a flag id or a flag pair)."""
    f = _edge_flag(g, e)
    u, w = g.boundary[f], g.boundary[g.involution[f]]
    tails, edges, blocks = _skeleton(g)
    key = f if f in edges else g.involution[f]
    del edges[key]
    merged = {u: u, w: u}
    new_edges = [(merged.get(a, a), merged.get(b, b)) for a, b in edges.values()]
    tails[u] = tails[u] + tails.pop(w)
    blocks[u] = blocks[u] + blocks.pop(w)
    return build_tree(g.weights, tails, new_edges, blocks)


def identify_tail_blocks(g: ATree, v: int, chosen: Iterable[Iterable[int]]) -> ATree:
    """Let the points of several r-structure blocks at ``v`` coincide."""
    if v not in g.r_structure:
        raise NotAtVertex(f"unknown vertex {v}")
    chosen = normalize_partition(chosen)
    here = set(g.r_structure[v])
    if len(set(chosen)) < 2:
        raise NotAtVertex("need at least two distinct blocks")
    for b in chosen:
        if b not in here:
            raise NotAtVertex(f"{list(b)} is not a block at vertex {v}")
    union = tuple(sorted(lab for b in chosen for lab in b))
    if g.weights.weight_of(union) > 1:
        raise BlockTooHeavy(f"merged block {list(union)} weighs more than 1")
    tails, edges, blocks = _skeleton(g)
    blocks[v] = [list(b) for b in g.r_structure[v] if b not in chosen] + [list(union)]
    return build_tree(g.weights, tails, edges.values(), blocks)


def degenerates_to(g1: ATree, g2: ATree) -> bool:
    """``g1 <= g2``: g1 lies in the closure of the stratum of g2.

    Going up the order only removes edges and splits blocks, and any such
    pair is joined by contractions followed by un-identifications, so the
    test reduces to containment of splits and refinement of blocks.
    """
    if g1.weights != g2.weights:
        return False
    if not set(g2.key.splits) <= set(g1.key.splits):
        return False
    owner = {}
    for part in g1.r_structure.values():
        for b in part:
            for lab in b:
                owner[lab] = b
    for part in g2.r_structure.values():
        for b in part:
            if len({owner[lab] for lab in b}) != 1:
                return False
    return True


def forget_tail(g: ATree, label: int) -> ATree:
    """Drop marked point ``label`` and stabilize; labels above it shift down."""
    B = g.weights
    if not 1 <= label <= B.n:
        raise InvalidResidualDatum(f"no tail labelled {label}")
    try:
        A = new_weight_datum(m for i, m in enumerate(B.weights, 1) if i != label)
    except ValueError as exc:
        raise InvalidResidualDatum(str(exc)) from exc

    def shift(lab: int) -> int:
        return lab - 1 if lab > label else lab

    tails, edges, blocks = _skeleton(g)
    v0 = g.vertex_of(label)
    tails[v0].remove(label)
    blocks[v0] = [[x for x in b if x != label] for b in blocks[v0]]
    blocks[v0] = [b for b in blocks[v0] if b]
    edge_list = list(edges.values())

    def weight(v):
        deg = sum((a == v) + (b == v) for a, b in edge_list)
        return sum((B[x] for x in tails[v]), Fraction(0)) + deg

    while True:
        bad = [v for v in tails if weight(v) <= 2]
        if not bad:
            break
        v = bad[0]
        incident = [e for e in edge_list if v in e]
        if len(incident) == 1:
            (e,) = incident
            nb = e[0] if e[1] == v else e[1]
            # the collapsed component's points all land on the node
            edge_list.remove(e)
            if tails[v]:
                tails[nb] += tails[v]
                blocks[nb].append(list(tails[v]))
        elif len(incident) == 2 and not tails[v]:
            (a1, b1), (a2, b2) = incident
            n1 = a1 if b1 == v else b1
            n2 = a2 if b2 == v else b2
            edge_list.remove(incident[0])
            edge_list.remove(incident[1])
            edge_list.append((n1, n2))
        else:
            raise AssertionError("unstable vertex with an unexpected shape")
        del tails[v]
        del blocks[v]
    tails = {v: [shift(x) for x in t] for v, t in tails.items()}
    blocks = {v: [[shift(x) for x in b] for b in p] for v, p in blocks.items()}
    return build_tree(A, tails, edge_list, blocks)


def classify_fiber(g: ATree, label: int) -> FiberKind:
    """Shape of the fibre over the image stratum when forgetting ``label``."""
    v = g.vertex_of(label)
    if g.block_of(label) != (label,):
        raise NotSingleton(f"tail {label} shares its block with other tails")
    rest = g.vertex_weight(v) - g.weights[label]
    if rest > 2:
        return PuncturedLine(g.marks_count(v) - 1)
    image = forget_tail(g, label)
    # vertex ids survive stabilization, so the collapsed ones are the missing ids
    collapsed = sorted(set(g.vertices) - set(image.vertices))
    return ProductOfModuli(tuple(vertex_datum(g, w) for w in collapsed))


def vertex_datum(g: ATree, v: int) -> WeightDatum:
    return vertex_weight_structure(g.weights, g.r_structure[v], len(g.edge_flags_at(v)))


# -- export ------------------------------------------------------------------

def tree_to_json(g: ATree) -> dict:
    verts = sorted(g.vertices, key=g.fingerprint)
    return {
        "splits": [list(s) for s in g.key.splits],
        "blocks": {str(i): [list(b) for b in g.r_structure[v]] for i, v in enumerate(verts)},
        "dim": g.dimension,
    }


_PALETTE = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "teal"]


def tree_to_dot(g: ATree, name: str = "atree") -> str:
    verts = sorted(g.vertices, key=g.fingerprint)
    idx = {v: i for i, v in enumerate(verts)}
    lines = [f"graph {name} {{"]
    for v in verts:
        lines.append(f'  v{idx[v]} [shape=circle, label=""];')
    for f, h in sorted(g.edges, key=lambda e: g.split_of(e[0])):
        a, b = sorted((idx[g.boundary[f]], idx[g.boundary[h]]))
        lines.append(f"  v{a} -- v{b};")
    colour = 0
    for v in verts:
        for b in g.r_structure[v]:
            attr = ""
            if len(b) > 1:
                attr = f", color={_PALETTE[colour % len(_PALETTE)]}, style=dotted"
                colour += 1
            for lab in b:
                lines.append(f'  t{lab} [shape=plaintext, label="{lab}"];')
                lines.append(f"  v{idx[v]} -- t{lab} [{attr.lstrip(', ')}];"
                             if attr else f"  v{idx[v]} -- t{lab};")
    lines.append("}")
    return "\n".join(lines) + "\n"
