import itertools

import numpy as np
import pytest

from mccord.coefmonoid import all_tables, cyclic, nilpotent, null_semigroup, truncated_nat
from mccord.gammacat import (
    MAX_OBJECT,
    CategoryError,
    FiniteCategory,
    MonoidFunctor,
    PowerFunctor,
    ProductCategory,
    adjunction_check,
    coend,
    coend_vs_word_check,
    digits,
    generated_closure,
    iterated_coend_check,
    kan_lemma_check,
    monoid_functor,
    power_functor,
    product_decomposition_check,
    yoneda_check,
)
from mccord.simplicial import build_sphere, wedge

S0, S1 = build_sphere(0, 2), build_sphere(1, 2)


class TestCategories:
    def test_gamma_two_to_one(self):
        assert len(FiniteCategory("gamma", 3).hom(2, 1)) == 4

    def test_epi_three_to_two(self):
        assert len(FiniteCategory("epi", 3).hom(3, 2)) == 6

    def test_zero_is_terminal(self):
        G = FiniteCategory("gamma", 4)
        assert all(len(G.hom(n, 0)) == 1 for n in G.objects)

    @pytest.mark.parametrize("kind", ["gamma", "epi", "set"])
    def test_counts_match_closed_forms(self, kind):
        C = FiniteCategory(kind, 4)
        for n, m in itertools.product(C.objects, repeat=2):
            assert len(C.hom(n, m)) == C.expected_count(n, m)

    @pytest.mark.parametrize("kind", ["gamma", "epi", "set"])
    def test_laws_and_generators(self, kind):
        C = FiniteCategory(kind, 3)
        C.check_laws()
        assert C.generated_morphisms() == set(C.morphisms())

    def test_epi_has_no_empty_set(self):
        assert FiniteCategory("epi", 3).objects == [1, 2, 3]

    def test_bounds(self):
        with pytest.raises(CategoryError):
            FiniteCategory("gamma", MAX_OBJECT + 1)
        with pytest.raises(CategoryError):
            FiniteCategory("cube", 2)

    def test_product_category_generators_close(self):
        P = ProductCategory(3, lambda a, b: a * b <= 3, "smash")
        closure = generated_closure(P.objects, P.identity, P.generators(), P.compose)
        assert closure == set(P.morphisms())


class TestFunctors:
    def test_monoid_functor_sizes_and_fold(self):
        A = cyclic(2)
        X = monoid_functor(A, 3)
        assert X.size(2) == 4
        fold = X.table((1, 1), 2, 1)
        for code in range(4):
            a, b = digits(2, 2)[code]
            assert fold[code] == (a + b) % 2

    def test_power_functor_counts(self):
        Y = power_functor(2, "times", 4)
        assert [Y.size(n) for n in range(5)] == [1, 2, 4, 8, 16]

    def test_map_to_zero_hits_base(self):
        X = monoid_functor(cyclic(3), 3)
        for n in range(4):
            t = X.table((0,) * n, n, 0)
            assert np.all(X.base_mask(0)[t])

    @pytest.mark.parametrize(
        "F",
        [
            power_functor(3, "times", 3),
            power_functor(3, "smash", 3),
            power_functor(2, "unbased", 3),
            monoid_functor(truncated_nat(2), 3),
            monoid_functor(nilpotent(2), 3),
        ],
        ids=["K-times", "K-smash", "K-unbased", "N2", "nil2"],
    )
    def test_functorial(self, F):
        F.check_functorial()

    def test_unitality_enforced(self):
        with pytest.raises(CategoryError):
            MonoidFunctor(FiniteCategory("epi", 2), cyclic(2))
        with pytest.raises(CategoryError):
            MonoidFunctor(FiniteCategory("gamma", 2), nilpotent(1))


def _partition(q):
    """Canonical form of a class labelling, independent of label names."""
    seen, out = {}, []
    for v in q.labels.tolist():
        out.append(seen.setdefault(v, len(seen)))
    return out


class TestCoend:
    def test_s0_gives_a(self):
        A = cyclic(3)
        X = monoid_functor(A, 3)
        q = coend(PowerFunctor(X.cat, 2), X)
        assert q.nonbase_count == len(A) - 1

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_yoneda(self, n):
        assert yoneda_check(monoid_functor(cyclic(2), 3), n)
        assert yoneda_check(monoid_functor(truncated_nat(2), 3), n)

    def test_generators_equal_all_relations(self):
        X = monoid_functor(cyclic(2), 3)
        Y = PowerFunctor(X.cat, 3)
        assert _partition(coend(Y, X)) == _partition(coend(Y, X, relations="all"))

    def test_order_independent(self):
        from mccord.gammacat import _solve

        X = monoid_functor(truncated_nat(2), 3)
        Y = PowerFunctor(X.cat, 2)
        q = coend(Y, X, relations="all")
        # rebuild with the relation list shuffled edge by edge
        rng = np.random.default_rng(5)
        edges = []
        for alpha, n, m in X.cat.morphisms():
            ystar, xstar = Y.table(alpha, n, m), X.table(alpha, n, m)
            xn, xm = X.size(n), X.size(m)
            left = q.offsets[n] + ystar[:, None] * xn + np.arange(xn)[None, :]
            right = q.offsets[m] + np.arange(Y.size(m))[:, None] * xm + xstar[None, :]
            edges.append((left.ravel(), right.ravel()))
        rng.shuffle(edges)
        base = np.concatenate(
            [
                q.offsets[n] + np.flatnonzero((Y.base_mask(n)[:, None] | X.base_mask(n)[None, :]).ravel())
                for n in X.cat.objects
            ]
        )
        assert _partition(_solve(q.offsets, q.sizes, edges, base)) == _partition(q)


class TestCoendVsWord:
    def test_s0_z3(self):
        assert coend_vs_word_check(build_sphere(0, 2), cyclic(3), 3)

    def test_s1_z2(self):
        r = coend_vs_word_check(build_sphere(1, 2), cyclic(2), 4)
        assert r and all(v["stabilized_at"] <= 3 for v in r.details["levels"].values())

    def test_s1_nilpotent_reduced(self):
        assert coend_vs_word_check(build_sphere(1, 2), nilpotent(1), 3, "reduced")


class TestKan:
    def test_smash_two_point_sets(self):
        assert kan_lemma_check("smash", 2, 2, N=3)

    def test_wedge(self):
        assert kan_lemma_check("wedge", 3, 2, N=4)

    def test_diagonal(self):
        assert kan_lemma_check("diagonal", 3, N=4)

    def test_needs_second_set(self):
        with pytest.raises(CategoryError):
            kan_lemma_check("smash", 2)

    @pytest.mark.parametrize("which", ["a", "m"])
    def test_adjunction(self, which):
        r = adjunction_check(which, 2, 2, 2)
        assert r, r.details

    def test_iterated_coend(self):
        assert iterated_coend_check(2, 3, cyclic(2), 4)


class TestProducts:
    def test_z2_z2(self):
        assert product_decomposition_check(2, cyclic(2), cyclic(2))

    def test_trivial_factor(self):
        assert product_decomposition_check(3, truncated_nat(2), cyclic(1))

    def test_random_small_monoids(self):
        tables = all_tables(3, True)
        rng = np.random.default_rng(1)
        for i, j in rng.integers(0, len(tables), size=(4, 2)):
            assert product_decomposition_check(2, tables[i], tables[j])


def test_reduced_coend_null_semigroup():
    assert coend_vs_word_check(wedge(S1, S1), null_semigroup(1), 3, "reduced", levels=[0, 1])
