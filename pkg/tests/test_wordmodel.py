import json

import pytest

from mccord.coefmonoid import cyclic, direct_product, nilpotent, null_semigroup, one_point_semigroup, truncated_nat
from mccord.homology import simplicial_homology
from mccord.simplicial import Simplex, SimplicialSet, build_sphere, discrete, find_isomorphism, point, smash, wedge
from mccord.wordmodel import (
    ZERO,
    FiltrationLayer,
    WordModel,
    WordModelError,
    adjoin_unit_check,
    filtration_layer,
    group_structure_check,
    layer_iso_check,
    layer_model,
    smash_iteration_check,
    unbased_comparison_check,
    wedge_decomposition_check,
    word_model,
)

S0, S1, S2 = build_sphere(0, 3), build_sphere(1, 3), build_sphere(2, 3)
S1vS1 = wedge(S1, S1)


class TestConstruction:
    def test_s0_levels_are_the_monoid(self):
        W = word_model(S0, cyclic(3), 1)
        assert [W.count(n) for n in range(4)] == [3, 3, 3, 3]

    def test_point_is_trivial(self):
        W = word_model(point(3), cyclic(2), 3)
        assert [W.count(n) for n in range(4)] == [1, 1, 1, 1]

    def test_s1_level_one(self):
        W = word_model(S1, cyclic(2), 3)
        census = W.census()
        assert census[(1, 1)] == 1

    def test_census(self):
        W = word_model(S1, cyclic(2), 2)
        c = {k: v for k, v in W.census().items() if k[0] <= 2}
        assert c == {(0, 0): 1, (1, 0): 1, (1, 1): 1, (2, 0): 1, (2, 1): 2, (2, 2): 1}

    def test_flavor_inference(self):
        assert word_model(S1, cyclic(2), 1).flavor == "unital"
        assert word_model(S1, nilpotent(2), 1).flavor == "reduced"
        L = discrete(["a", "b"], None, 2)
        assert word_model(L, cyclic(2), 1).flavor == "unbased"

    @pytest.mark.parametrize(
        "K,A,flavor",
        [(S1, nilpotent(1), "unital"), (S1, cyclic(2), "reduced"), (S1, cyclic(2), "unbased")],
    )
    def test_flavor_mismatch(self, K, A, flavor):
        with pytest.raises(WordModelError):
            WordModel(K, A, 2, flavor)

    def test_basepoints(self):
        assert word_model(S1, cyclic(2), 1).basepoint == frozenset()
        assert word_model(S1, nilpotent(1), 1).basepoint == ZERO


class TestStructure:
    @pytest.mark.parametrize(
        "W",
        [
            word_model(S1, cyclic(2), 2),
            word_model(S2, cyclic(3), 2),
            word_model(S1vS1, truncated_nat(2), 2),
            word_model(S1, nilpotent(2), 2),
            word_model(S1, null_semigroup(2), 2),
        ],
        ids=["S1-Z2", "S2-Z3", "S1vS1-N2", "S1-nil2", "S1-null2"],
    )
    def test_closed_and_simplicial(self, W):
        assert W.closure_violations() == []
        W.as_simplicial_set().check_identities()

    def test_pushforward_never_raises_filtration(self):
        W = word_model(S1vS1, cyclic(3), 3)
        for n in range(1, 3):
            for w in W.level(n):
                for i in range(n + 1):
                    assert W.filtration(W.face(w, n, i)) <= W.filtration(w)

    @pytest.mark.parametrize("A", [cyclic(2), cyclic(3), direct_product(cyclic(2), cyclic(2))], ids=["Z2", "Z3", "V4"])
    def test_group_levels(self, A):
        assert group_structure_check(word_model(S1, A, None), 2)

    def test_addition_merges_letters(self):
        W = word_model(S1, cyclic(3), None)
        e = Simplex("e", (), 1)
        a = frozenset({(e, 1)})
        assert W.add(a, a) == frozenset({(e, 2)})
        assert W.add(a, frozenset({(e, 2)})) == frozenset()

    def test_filtration_not_standard(self):
        # a single letter with exponent 2 sits in filtration 1, not 2
        W = word_model(S1, truncated_nat(3), 3)
        e = Simplex("e", (), 1)
        assert W.filtration(frozenset({(e, 2)})) == 1

    def test_reduced_collision_to_zero(self):
        W = word_model(S1, nilpotent(1), 2)
        e = Simplex("e", (), 1)
        # both faces of e land on the basepoint vertex, so the word is killed
        assert W.face(frozenset({(e, 1)}), 1, 0) == ZERO

    def test_report_schema(self):
        rep = word_model(S1, cyclic(2), 2).to_report()
        assert rep["schema"] == "mccord.word_model/1"
        json.dumps(rep, default=str)


class TestLayers:
    def test_layer_one_is_k_smash_a(self):
        for K in (S1, S2, S1vS1):
            A = cyclic(3)
            layer = filtration_layer(word_model(K, A, 1), 1)
            counts = [len(layer.cells[n]) - (1 if n == 0 else 0) for n in range(3)]
            expected = [(len(K.cells[n]) - (1 if n == 0 else 0)) * 2 for n in range(3)]
            assert counts == expected

    def test_layer_of_point(self):
        layer = filtration_layer(word_model(point(3), cyclic(2), 2), 2)
        assert layer.census() == (1, 0, 0, 0)

    def test_layer_homology_matches_model(self):
        K, A = S1, cyclic(2)
        layer = filtration_layer(word_model(K, A, 2), 2)
        model = layer_model(K, A, 2).space
        assert simplicial_homology(layer, "Z", 2) == simplicial_homology(model, "Z", 2)

    def test_layer_range(self):
        W = word_model(S1, cyclic(2), 2)
        with pytest.raises(WordModelError):
            FiltrationLayer(W, 3)

    @pytest.mark.parametrize(
        "K,A,d",
        [(S0, cyclic(2), 2), (S1, cyclic(2), 2), (S1vS1, cyclic(3), 3), (S2, cyclic(2), 3)],
        ids=["S0-Z2-2", "S1-Z2-2", "S1vS1-Z3-3", "S2-Z2-3"],
    )
    def test_layer_iso(self, K, A, d):
        v = layer_iso_check(K, A, d)
        assert v, v.counterexample

    @pytest.mark.parametrize("J", [nilpotent(1), nilpotent(2), null_semigroup(2)], ids=["nil1", "nil2", "null2"])
    def test_reduced_layer_iso(self, J):
        for d in (1, 2, 3):
            assert layer_iso_check(S1, J, d)

    def test_verdict_json(self):
        text = layer_iso_check(S1, cyclic(2), 2).to_json()
        data = json.loads(text)
        assert data["schema"] == "mccord.verdict/1" and data["ok"] is True


class TestIdentities:
    def test_wedge_s1_s1(self):
        assert wedge_decomposition_check(S1, S1, cyclic(2), 2)

    def test_wedge_with_point(self):
        assert wedge_decomposition_check(S1, point(3), cyclic(3), 2)

    def test_wedge_s0_s0(self):
        v = wedge_decomposition_check(S0, S0, cyclic(3), 2)
        assert v
        W = word_model(wedge(S0, S0), cyclic(3), 2)
        assert W.count(0) == 9

    def test_smash_unit(self):
        assert smash_iteration_check(S0, S1, cyclic(2), 2)

    def test_smash_s1_s1(self):
        assert smash_iteration_check(S1, S1, cyclic(2), 2)

    def test_smash_with_s0_wedge(self):
        assert smash_iteration_check(S1, wedge(S0, S0), cyclic(3), 2)

    def test_adjoin_unit_point(self):
        assert adjoin_unit_check(S1, one_point_semigroup(), 2)

    def test_adjoin_unit_nilpotent(self):
        v = adjoin_unit_check(S1, nilpotent(1), 2)
        assert v, v.counterexample

    def test_unbased_one_point(self):
        L = discrete(["p"], None, 3)
        assert unbased_comparison_check(L, cyclic(2), 2)

    def test_unbased_two_points(self):
        L = discrete(["p", "q"], None, 3)
        assert unbased_comparison_check(L, cyclic(2), 2)

    def test_unbased_circle(self):
        C = SimplicialSet(3, [["v"], ["e"]], {"e": [Simplex("v", (), 0)] * 2}, None, "C")
        assert unbased_comparison_check(C, cyclic(3), 2)

    def test_unbased_point_matches_s0(self):
        W = word_model(discrete(["p"], None, 3), cyclic(2), 2)
        V = word_model(S0, cyclic(2), 2)
        assert find_isomorphism(W.as_simplicial_set(), V.as_simplicial_set()) is not None


def test_smash_space_word_model_layers():
    assert layer_iso_check(smash(S1, S1), cyclic(2), 2)
