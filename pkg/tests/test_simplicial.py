import itertools
import json

import pytest

from mccord.homology import simplicial_homology
from mccord.simplicial import (
    GroupAction,
    Simplex,
    SimplicialError,
    SimplicialSet,
    TruncationError,
    add_disjoint_basepoint,
    build_sphere,
    discrete,
    euler_characteristic,
    fat_diagonal_quotient,
    find_isomorphism,
    orbit_quotient,
    point,
    product,
    smash,
    smash_power,
    unreduced_suspension,
    wedge,
)

S0, S1, S2 = build_sphere(0, 3), build_sphere(1, 3), build_sphere(2, 3)


def reduced_ranks(X, top=None):
    H = simplicial_homology(X, "Z", top)
    assert all(not t for t in H.torsion)
    return H.rank


class TestSpheres:
    def test_s0_two_vertices(self):
        assert S0.census() == (2, 0, 0, 0)

    def test_s1_minimal(self):
        assert S1.census() == (1, 1, 0, 0)

    def test_s2_census_to_4(self):
        assert build_sphere(2, 4).census() == (1, 0, 1, 0, 0)

    def test_sphere_above_truncation(self):
        with pytest.raises(TruncationError):
            build_sphere(4, 3)

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_sphere_homology(self, n):
        X = build_sphere(n, 4)
        assert reduced_ranks(X) == [1 if k == n else 0 for k in range(4)]


class TestIdentities:
    @pytest.mark.parametrize(
        "X",
        [S0, S1, S2, wedge(S1, S1), smash(S1, S1), product(S1, S1), smash_power(S1, 2)],
        ids=["S0", "S1", "S2", "S1vS1", "S1^S1", "S1xS1", "S1^2"],
    )
    def test_all_constructors_satisfy_identities(self, X):
        X.check_identities()

    def test_fat_diagonal_identities(self):
        X, G = fat_diagonal_quotient(S1, 2)
        X.check_identities()
        G.check()

    def test_face_count_validated(self):
        with pytest.raises(SimplicialError):
            SimplicialSet(1, [["*"], ["e"]], {"e": [Simplex("*", (), 0)]}, "*")


class TestWedgeSmash:
    def test_figure_eight(self):
        assert wedge(S1, S1).census() == (1, 2, 0, 0)

    def test_wedge_with_point(self):
        assert find_isomorphism(wedge(S1, point(3)), S1) is not None

    def test_wedge_s1_s2_homology(self):
        assert reduced_ranks(wedge(S1, S2)) == [0, 1, 1]

    def test_smash_s1_s1_is_s2(self):
        assert reduced_ranks(smash(S1, S1)) == [0, 0, 1]

    def test_smash_unit(self):
        for K in (S1, S2, wedge(S1, S1)):
            assert find_isomorphism(smash(K, S0), K) is not None

    def test_wedge_needs_basepoint(self):
        L = discrete(["a", "b"], None, 2)
        with pytest.raises(SimplicialError):
            wedge(L, S1)


def shuffle_count(p, q):
    """Nondegenerate (p+q)-simplices of Δ^p x Δ^q: binomial(p+q, p)."""
    from math import comb

    return comb(p + q, p)


class TestProduct:
    def test_torus_two_triangles(self):
        assert product(S1, S1).census()[2] == 2

    def test_product_counts_match_shuffle_oracle(self):
        # minimal circles: nondegenerate cells of S1 x S1 by dimension
        # dim 1: (e, s0 *), (s0 *, e), (e, e) ; dim 2: the two shuffles of (e, e)
        X = product(S1, S1)
        assert X.census()[:3] == (1, 3, shuffle_count(1, 1))

    def test_product_euler(self):
        X = product(S1, S1)
        assert euler_characteristic(X, reduced=False) == 0


class TestFatDiagonal:
    def test_s0_any_d(self):
        for d in (1, 2, 3):
            X, _ = fat_diagonal_quotient(S0, d)
            assert euler_characteristic(X) == (1 if d == 1 else 0)

    def test_d1_is_identity(self):
        X, _ = fat_diagonal_quotient(S1, 1)
        assert find_isomorphism(X, S1) is not None

    @pytest.mark.parametrize("K", [S1, S2, wedge(S1, S1)], ids=["S1", "S2", "S1vS1"])
    @pytest.mark.parametrize("d", [2, 3])
    def test_action_free_off_basepoint(self, K, d):
        _, G = fat_diagonal_quotient(K, d)
        assert G.is_free_off_basepoint()

    def test_mapping_cone_oracle(self):
        # chi(K^(2)) = chi(K^2) - chi(fat diagonal) in reduced terms
        X, _ = fat_diagonal_quotient(S1, 2)
        P = smash_power(S1, 2)
        diag_cells = [
            sum(1 for c in P.cells[n] if c != P.basepoint and len(set(c)) < len(c)) for n in range(P.max_dim + 1)
        ]
        chi_diag = sum((-1) ** n * k for n, k in enumerate(diag_cells))
        assert euler_characteristic(X) == euler_characteristic(P) - chi_diag


class TestOrbits:
    def test_trivial_action(self):
        X = wedge(S1, S1)
        assert find_isomorphism(orbit_quotient(X, GroupAction.trivial(X)), X) is not None

    def test_swap_two_points(self):
        D = discrete(["+", "a", "b"], "+", 2)

        def act(g, c):
            if c == "+" or g == (0, 1):
                return c
            return {"a": "b", "b": "a"}[c]

        Q = orbit_quotient(D, GroupAction(D, 2, [(1, 0)], act))
        assert Q.census()[0] == 2

    def test_orbit_euler_matches_orbit_count(self):
        X, G = fat_diagonal_quotient(S1, 2)
        Q = orbit_quotient(X, G)
        elements = G.elements()
        expected = 0
        for n, level in enumerate(X.cells):
            seen = set()
            for c in level:
                if c == X.basepoint:
                    continue
                seen.add(frozenset(G.act_cell(g, c) for g in elements))
            expected += (-1) ** n * len(seen)
        assert euler_characteristic(Q) == expected


class TestSuspension:
    def test_empty_gives_s0(self):
        E = SimplicialSet(1, [[], []], {}, None)
        S = unreduced_suspension(E)
        assert S.census()[0] == 2 and reduced_ranks(S, 0) == [1]

    def test_suspension_of_two_points_is_circle(self):
        S = unreduced_suspension(discrete(["a", "b"], None, 1))
        assert reduced_ranks(S, 1) == [0, 1]


class TestJson:
    @pytest.mark.parametrize("X", [S0, S1, S2, wedge(S1, S1)], ids=["S0", "S1", "S2", "S1vS1"])
    def test_round_trip(self, X):
        text = X.to_json()
        Y = SimplicialSet.from_json(text)
        assert Y.to_json() == text
        assert find_isomorphism(X, Y) is not None

    def test_unknown_face_target(self):
        bad = {"max_dim": 1, "cells": [["*"], ["e"]], "faces": {"e": [["q", []], ["*", []]]}, "basepoint": "*"}
        with pytest.raises(SimplicialError):
            SimplicialSet.from_json(json.dumps(bad))


def test_disjoint_basepoint():
    L = discrete(["a"], None, 2)
    Lp = add_disjoint_basepoint(L)
    assert Lp.basepoint == "+" and Lp.census()[0] == 2
    with pytest.raises(SimplicialError):
        add_disjoint_basepoint(Lp)


def test_degenerate_simplex_counts():
    # S1 level n has n+1 simplices: n degeneracies of e plus the degenerate basepoint
    for n in range(4):
        assert len(S1.simplices(n)) == (1 if n == 0 else n + 1)
    assert list(itertools.islice(S1.simplices(1), 2))
