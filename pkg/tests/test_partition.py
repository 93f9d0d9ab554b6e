import pytest

from mccord.homology import simplicial_homology
from mccord.partition import (
    expected_degree,
    expected_rank,
    nerve,
    partition_complex,
    partition_homology,
    partition_poset,
    refines,
    relabel_action_check,
    set_partitions,
)

BELL = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203}


@pytest.mark.parametrize("d", range(1, 7))
def test_bell_numbers(d):
    assert len(set_partitions(tuple(range(1, d + 1)))) == BELL[d]


@pytest.mark.parametrize("d", range(2, 6))
def test_poset_size_and_order_axioms(d):
    P = partition_poset(d)
    assert len(P.elements) == BELL[d] - 2
    P.check()


def test_poset_three_has_no_relations():
    P = partition_poset(3)
    assert len(P.elements) == 3
    assert not any(P.less(x, y) for x in P.elements for y in P.elements)


def test_poset_two_is_empty():
    assert partition_poset(2).elements == []


def test_poset_rejects_small_and_large():
    with pytest.raises(ValueError):
        partition_poset(1)
    with pytest.raises(ValueError):
        partition_poset(7)


def test_refinement():
    assert refines(((1,), (2,), (3, 4)), ((1, 2), (3, 4)))
    assert not refines(((1, 3), (2, 4)), ((1, 2), (3, 4)))


def test_nerve_cells_are_chains():
    P = partition_poset(4)
    X = nerve(P, 2)
    assert len(X.cells[0]) == 13
    for c in X.cells[1]:
        assert P.less(c[0], c[1])
    X.check_identities()


def test_d2_is_s0():
    K = partition_complex(2)
    assert K.census()[0] == 2
    assert partition_homology(2).rank[0] == 1


@pytest.mark.parametrize("d", [3, 4, 5])
def test_homology_concentrated(d):
    H = partition_homology(d)
    deg = expected_degree(d)
    assert H.rank == [expected_rank(d) if n == deg else 0 for n in range(len(H.rank))]
    assert all(not t for t in H.torsion)


def test_expected_values():
    assert [expected_rank(d) for d in range(2, 7)] == [1, 2, 6, 24, 120]
    assert [expected_degree(d) for d in range(2, 7)] == [0, 1, 2, 3, 4]


def test_suspension_structure():
    K = partition_complex(3)
    K.check_identities()
    assert K.basepoint == "N"
    assert simplicial_homology(K, "Z", 0).rank == [0]


@pytest.mark.parametrize("d", [2, 3, 4])
def test_relabeling_action(d):
    assert relabel_action_check(d)
