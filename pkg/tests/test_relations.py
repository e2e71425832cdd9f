from itertools import combinations
from math import comb

import pytest

from hassett_chow.errors import BadPartition, MarksNotDistinct, TooFewMarks
from hassett_chow.relations import (
    Stable,
    Unstable,
    all_relations,
    insert_edge,
    principal_relation,
    relation_to_json,
)
from hassett_chow.strata import enumerate_strata
from hassett_chow.trees import EdgeFlag, TailBlock, contract_edge, one_vertex_tree, tree_from_splits
from hassett_chow.weights import parse_weights


def tails(*labels):
    return [TailBlock((x,)) for x in labels]


def test_insert_edge_stable(W):
    A = W("1,1,1,1")
    res = insert_edge(one_vertex_tree(A), 0, tails(1, 2), tails(3, 4))
    assert isinstance(res, Stable)
    assert res.tree.key == tree_from_splits(A, [[3, 4]]).key


def test_insert_edge_unstable(W):
    B = W("1,1,1/4,1/4")
    assert insert_edge(one_vertex_tree(B), 0, tails(3, 4), tails(1, 2)) == Unstable(1)
    assert insert_edge(one_vertex_tree(B), 0, tails(1, 2), tails(3, 4)) == Unstable(2)


def test_insert_edge_bad_partition(W):
    g = one_vertex_tree(W("1,1,1,1"))
    with pytest.raises(BadPartition):
        insert_edge(g, 0, tails(1), tails(2, 3, 4))
    with pytest.raises(BadPartition):
        insert_edge(g, 0, tails(1, 2), tails(3))


def test_insert_edge_moves_edge_flags(W):
    A = W("1,1,1,1,1,1")
    g = tree_from_splits(A, [[5, 6]])
    v = g.vertex_of(1)
    (ef,) = g.edge_flags_at(v)
    res = insert_edge(g, v, tails(1, 2), [*tails(3, 4), EdgeFlag(ef)])
    assert res.tree.key == tree_from_splits(A, [[5, 6], [3, 4, 5, 6]]).key
    # contracting the new edge gives back the original tree
    new_edge = next(f for f, _ in res.tree.edges if res.tree.split_of(f) == (3, 4, 5, 6))
    assert contract_edge(res.tree, new_edge).key == g.key


def test_classical_four_point_relation(W):
    A = W("1,1,1,1")
    rel = principal_relation(one_vertex_tree(A), 0, tails(1, 2, 3, 4), "13|24")
    assert rel.dim == 0
    assert rel.terms == {
        tree_from_splits(A, [[1, 2]]).key: 1,
        tree_from_splits(A, [[1, 3]]).key: -1,
    }


def test_unstable_four_point_relation(W):
    B = W("1,1,1/4,1/4")
    rel = principal_relation(one_vertex_tree(B), 0, tails(1, 2, 3, 4), "13|24")
    assert rel.terms == {
        one_vertex_tree(B, [[1], [2], [3, 4]]).key: 1,
        tree_from_splits(B, [[1, 3]]).key: -1,
    }


def test_principal_relation_errors(W):
    A = W("1,1,1,1")
    T = enumerate_strata(A)
    point = T.by_dim[0][0]
    v = point.vertices[0]
    with pytest.raises(TooFewMarks):
        principal_relation(point, v, point.marks_at(v)[:3] * 2)
    g = one_vertex_tree(A)
    with pytest.raises(MarksNotDistinct):
        principal_relation(g, 0, tails(1, 1, 2, 3))
    with pytest.raises(MarksNotDistinct):
        principal_relation(g, 0, tails(1, 2, 3, 9))


def test_relation_counts(W):
    T4 = enumerate_strata(W("1,1,1,1"))
    assert len(all_relations(T4, 0)) == 2
    T5 = enumerate_strata(W("1,1,1,1,1"))
    assert len(all_relations(T5, 1)) == comb(5, 4) * 2 == 10
    assert len(all_relations(T5, 0)) == 20


@pytest.mark.parametrize("n", [4, 5, 6])
def test_classical_support_is_separating_splits(n):
    A = parse_weights(",".join(["1"] * n))
    top = one_vertex_tree(A)
    full = set(range(1, n + 1))
    for quad in combinations(range(1, n + 1), 4):
        f1, f2, f3, f4 = quad
        rel = principal_relation(top, 0, tails(*quad), "13|24")
        positive = {k.splits[0] for k in rel.support(+1)}
        expected = set()
        for r in range(2, n - 1):
            for side in combinations(sorted(full), r):
                s = set(side)
                if {f1, f2} <= s and not {f3, f4} & s:
                    other = full - s
                    expected.add(tuple(sorted(s if 1 not in s else other)))
        assert positive == expected


@pytest.mark.parametrize(
    "ws", ["1,1,1/4,1/4,1/4", "1,1/2,1/2,1/2,1/3", "1/2,1/2,1/2,1/2,1/2", "1,1,1/3,1/3,1/3,1/3"]
)
def test_relation_invariants(ws):
    A = parse_weights(ws)
    T = enumerate_strata(A)
    for d in range(A.n - 3):
        for rel in all_relations(T, d):
            assert rel.terms
            for k, c in rel.terms.items():
                assert T.index[k][0] == d
                assert c in (-1, 1)


def test_relation_json(W):
    T = enumerate_strata(W("1,1,1/4,1/4"))
    (rel, _) = all_relations(T, 0)
    js = relation_to_json(T, rel)
    assert js["dim"] == 0
    assert sorted(t["coeff"] for t in js["terms"]) == [-1, 1]
    assert js["source"]["pairing"] == "13|24"
    assert js["source"]["marks"] == [{"tails": [1]}, {"tails": [2]}, {"tails": [3]}, {"tails": [4]}]
