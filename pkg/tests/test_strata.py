import random
from itertools import combinations

import pytest

from hassett_chow.errors import HassettError, UnknownStratum
from hassett_chow.oracles import point_count_polynomial
from hassett_chow.strata import (
    closure_strata,
    enumerate_strata,
    poset_to_dot,
    set_partitions,
    stratum_euler_characteristic,
    table_to_json,
)
from hassett_chow.trees import build_tree, one_vertex_tree, tree_from_splits
from hassett_chow.verify import chamber_twin, random_datum
from hassett_chow.weights import parse_weights


def leaf_insertion_trees(n):
    """All trees with tails 1..n and every vertex of degree >= 3, by leaf insertion.

    Each tree is (tails per vertex, edge list); built independently of the
    split-based enumerator.
    """
    trees = [({0: [1, 2, 3]}, [])]
    for k in range(4, n + 1):
        nxt = []
        for tails, edges in trees:
            for v in tails:
                t = {u: list(ls) for u, ls in tails.items()}
                t[v].append(k)
                nxt.append((t, list(edges)))
            new = max(tails) + 1
            for i, (a, b) in enumerate(edges):
                t = {u: list(ls) for u, ls in tails.items()}
                t[new] = [k]
                e = edges[:i] + edges[i + 1:] + [(a, new), (new, b)]
                nxt.append((t, e))
            for v, ls in tails.items():
                for lab in ls:
                    t = {u: list(x) for u, x in tails.items()}
                    t[v].remove(lab)
                    t[new] = [lab, k]
                    nxt.append((t, edges + [(v, new)]))
        trees = nxt
    return trees


def oracle_keys(A):
    keys = set()
    for tails, edges in leaf_insertion_trees(A.n):
        try:
            base = build_tree(A, tails, edges)
        except HassettError:
            continue
        where = {lab: v for v, ls in tails.items() for lab in ls}
        for part in set_partitions(list(range(1, A.n + 1))):
            if any(len({where[x] for x in b}) > 1 or A.weight_of(b) > 1 for b in part):
                continue
            blocks = {v: [b for b in part if where[b[0]] == v] for v in tails}
            keys.add(build_tree(A, tails, edges, blocks).key)
    return keys


def test_leaf_insertion_counts():
    # trees with n labelled leaves and internal degree >= 3: 1, 4, 26, 236
    assert [len(leaf_insertion_trees(n)) for n in (3, 4, 5, 6)] == [1, 4, 26, 236]


@pytest.mark.parametrize(
    "ws",
    ["1,1,1,1", "1,1,1/4,1/4", "1,1/2,1/2,1/2", "1,1,1,1,1", "1,1,1/4,1/4,1/4",
     "1,1/2,1/2,1/2,1/3", "1/2,1/2,1/2,1/2,1/2", "1,1,1,1,1,1", "1,1,1/3,1/3,1/3,1/3",
     "2/3,2/3,1/2,1/2,1/3,1/3"],
)
def test_enumeration_matches_leaf_insertion(ws):
    A = parse_weights(ws)
    T = enumerate_strata(A)
    assert set(T.index) == oracle_keys(A)
    assert len(T.index) == sum(len(ts) for ts in T.by_dim.values())


def test_random_chambers_match_leaf_insertion():
    rng = random.Random(11)
    for _ in range(12):
        A = random_datum(rng, rng.randint(4, 6))
        assert set(enumerate_strata(A).index) == oracle_keys(A), A


def test_enumerated_trees_are_valid_and_sorted():
    T = enumerate_strata(parse_weights("1,1,1/4,1/4,1/4,1/4"))
    for d, ts in T.by_dim.items():
        keys = [g.key for g in ts]
        assert keys == sorted(keys)
        for g in ts:
            assert g.dimension == d
            g._validate()
    assert len(T.by_dim[T.top_dimension]) == 1


def test_n4_chambers():
    A = parse_weights("1,1,1,1")
    T = enumerate_strata(A)
    assert T.counts() == {0: 3, 1: 1}
    assert {g.key.splits for g in T.by_dim[0]} == {((3, 4),), ((2, 4),), ((2, 3),)}

    B = parse_weights("1,1,1/4,1/4")
    TB = enumerate_strata(B)
    expected = {
        tree_from_splits(B, [[1, 3]]).key,
        tree_from_splits(B, [[1, 4]]).key,
        one_vertex_tree(B, [[1], [2], [3, 4]]).key,
    }
    assert {g.key for g in TB.by_dim[0]} == expected

    C = parse_weights("1,1/2,1/2,1/2")
    TC = enumerate_strata(C)
    assert {g.key for g in TC.by_dim[0]} == {
        one_vertex_tree(C, [[1], [i, j], [k]]).key
        for i, j, k in [(2, 3, 4), (2, 4, 3), (3, 4, 2)]
    }


def test_classical_counts():
    assert enumerate_strata(parse_weights("1,1,1,1,1")).counts() == {2: 1, 1: 10, 0: 15}
    for n in (5, 6):
        T = enumerate_strata(parse_weights(",".join(["1"] * n)))
        subsets = sum(1 for r in range(2, n - 1) for _ in combinations(range(n), r)) // 2
        assert len(T.by_dim[n - 4]) == subsets == 2 ** (n - 1) - n - 1


def test_closure_strata():
    A = parse_weights("1,1,1,1,1")
    T = enumerate_strata(A)
    top = T.by_dim[2][0]
    assert len(closure_strata(T, top)) == len(T)
    point = T.by_dim[0][0]
    assert closure_strata(T, point) == [point]
    g = tree_from_splits(A, [[1, 2]])
    below = closure_strata(T, g)
    assert g in below and len(below) == 4
    # the three two-edge refinements split {3,4,5}
    for h in below:
        if h != g:
            assert (3, 4, 5) in h.key.splits and len(h.key.splits) == 2
    with pytest.raises(UnknownStratum):
        closure_strata(T, one_vertex_tree(parse_weights("1,1,1,1,1,1")))


def test_euler_characteristics():
    A4 = parse_weights("1,1,1,1")
    assert stratum_euler_characteristic(one_vertex_tree(A4)) == -1
    assert stratum_euler_characteristic(one_vertex_tree(parse_weights("1,1,1,1,1"))) == 2
    for g in enumerate_strata(A4).by_dim[0]:
        assert stratum_euler_characteristic(g) == 1


@pytest.mark.parametrize("ws", ["1,1,1,1,1", "1,1/2,1/2,1/2,1/3", "1,1,1,1/5,1/5,1/5"])
def test_euler_sum_is_point_count_at_one(ws):
    T = enumerate_strata(parse_weights(ws))
    assert sum(stratum_euler_characteristic(g) for g in T) == point_count_polynomial(T)(1)


def test_chamber_invariance_of_tables():
    rng = random.Random(5)
    for _ in range(10):
        A = random_datum(rng, rng.randint(4, 6))
        B = chamber_twin(rng, A)
        assert A != B
        ja = table_to_json(enumerate_strata(A), with_weights=False)
        jb = table_to_json(enumerate_strata(B), with_weights=False)
        assert ja == jb


def test_poset_dot():
    dot = poset_to_dot(enumerate_strata(parse_weights("1,1,1,1")))
    assert dot.count("[label=") == 4 and dot.count("->") == 3


def test_table_json_shape():
    js = table_to_json(enumerate_strata(parse_weights("1,1,1/4,1/4")))
    assert js["weights"] == ["1", "1", "1/4", "1/4"]
    assert js["counts"] == {"0": 3, "1": 1}
    assert js["dims"]["1"][0]["splits"] == []
