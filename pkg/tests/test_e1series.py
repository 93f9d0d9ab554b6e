import json
from collections import Counter

import pytest

from mccord.e1series import (
    DEFAULT_CONVENTION,
    DyerLashofConvention,
    GradedSeries,
    SeriesError,
    admissible_series,
    calibrate,
    calibration_sweep,
    dyer_lashof_free,
    e1_total,
    free_commutative,
    free_lie,
    free_restricted_lie,
    is_power_of_two,
    lyndon_counts,
    lyndon_words,
    milnor_series,
    operation_words,
    pbw_identity_check,
    shift,
    steenrod_series,
)

G = GradedSeries


def one(deg, T=20):
    return G.from_degrees({deg: 1}, T)


class TestShift:
    def test_down(self):
        assert shift(G.from_degrees({0: 1}, 5, weight=0), -1).by_degree() == {-1: 1}

    def test_inverse(self):
        f = G.from_degrees({1: 2, 3: 1}, 8)
        assert shift(shift(f, 3), -3) == f

    def test_t_squared(self):
        assert shift(one(2), 1).by_degree() == {3: 1}

    def test_window_drops(self):
        assert shift(one(5, 5), 1).terms == ()


class TestFreeCommutative:
    def test_even_polynomial(self):
        assert free_commutative(one(2, 10)).dense(0, 10) == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]

    def test_odd_exterior(self):
        assert free_commutative(one(3, 10)).dense(0, 10) == [1, 0, 0, 1] + [0] * 7

    def test_char_two_polynomial(self):
        assert free_commutative(one(1, 4), 2).dense(0, 4) == [1, 1, 1, 1, 1]

    def test_degree_zero_rejected(self):
        with pytest.raises(SeriesError):
            free_commutative(one(0))

    def test_negative_degrees(self):
        assert free_commutative(one(-2, 6)).dense(-6, 0) == [1, 0, 1, 0, 1, 0, 1]

    def test_mixed_signs_need_bound(self):
        f = G.from_degrees({2: 1, -2: 1}, 6)
        with pytest.raises(SeriesError):
            free_commutative(f)
        assert free_commutative(f, max_weight=4).coefficient(0) == 3

    def test_bad_characteristic(self):
        with pytest.raises(SeriesError):
            free_commutative(one(2), 3)


class TestLie:
    def test_two_even_generators_witt(self):
        L = free_lie(G.from_degrees({2: 2}, 12))
        assert [L.coefficient(2 * k) for k in range(1, 7)] == [2, 1, 2, 3, 6, 9]

    def test_single_even_generator_abelian(self):
        assert free_lie(one(2, 20)).by_degree() == {2: 1}

    def test_single_odd_generator_has_square(self):
        assert free_lie(one(1, 20)).by_degree() == {1: 1, 2: 1}

    def test_restricted_one_negative_generator(self):
        L = free_restricted_lie(one(-1, 20))
        assert L.by_degree() == {-16: 1, -8: 1, -4: 1, -2: 1, -1: 1}
        assert all(w == -d for d, w, _ in L.terms)

    def test_restricted_matches_tensor_formally(self):
        L = free_restricted_lie(one(-1, 30))
        prod = Counter({0: 1})
        for d, _, c in L.terms:
            for _ in range(c):
                nxt = Counter(prod)
                for k, v in prod.items():
                    if k + d >= -30:
                        nxt[k + d] += v
                prod = nxt
        assert all(prod[-n] == 1 for n in range(31))

    def test_zero_degree_rejected(self):
        with pytest.raises(SeriesError):
            free_lie(one(0))

    def test_odd_prime_rejected(self):
        with pytest.raises(SeriesError):
            free_restricted_lie(one(1), 3)

    @pytest.mark.parametrize("degs", [[2], [2, 2], [2, 4], [2, 2, 2], [2, 2, 4], [2, 4, 6], [4, 4, 6]])
    def test_lyndon_oracle(self, degs):
        f = G.from_degrees(Counter(degs), 12)
        assert free_lie(f).by_degree() == lyndon_counts(degs, 12)

    def test_lyndon_words_two_letters(self):
        words = list(lyndon_words(2, 4))
        assert Counter(len(w) for w in words) == Counter({1: 2, 2: 1, 3: 2, 4: 3})

    @pytest.mark.parametrize("gens", [{1: 2}, {1: 1, 2: 1}, {2: 2, 3: 1}, {-1: 1}, {-1: 2, -2: 1}, {1: 3}])
    def test_pbw_identity(self, gens):
        f = G.from_degrees(gens, 20)
        assert pbw_identity_check(f, 0)
        assert pbw_identity_check(f, 2)
        assert pbw_identity_check(f, restricted=True)


class TestDyerLashof:
    def test_empty_input(self):
        assert dyer_lashof_free(G.make({}, 10)).terms == ()

    def test_empty_admissible_set(self):
        conv = DyerLashofConvention(min_index=100)
        f = G.from_degrees({0: 1, 3: 2}, 10)
        assert dyer_lashof_free(f, convention=conv) == f

    def test_odd_prime_unsupported(self):
        with pytest.raises(SeriesError):
            dyer_lashof_free(one(0), p=3)

    def test_weights_double(self):
        out = dyer_lashof_free(one(0, 10))
        assert all(is_power_of_two(w) for w in out.weights())

    def test_bounded_functor_is_smaller(self):
        stable = dyer_lashof_free(one(1, 12))
        bounded = dyer_lashof_free(one(1, 12), n=2)
        assert all(bounded.coefficient(d) <= stable.coefficient(d) for d in range(13))
        assert sum(bounded.by_degree().values()) < sum(stable.by_degree().values())

    def test_operation_words_innermost_bound(self):
        words = operation_words(0, DEFAULT_CONVENTION, 6)
        assert words[(0, 0)] == 1 and words[(2, 1)] == 1 and (1, 1) not in words

    def test_convention_validation(self):
        with pytest.raises(SeriesError):
            DyerLashofConvention(form="other")
        with pytest.raises(SeriesError):
            DyerLashofConvention(shift_sign=0)


class TestSteenrod:
    def test_a_series_low_degrees(self):
        assert milnor_series(7) == [1, 1, 1, 2, 2, 2, 3, 4]

    def test_double_enumeration(self):
        assert milnor_series(30) == admissible_series(30)

    def test_mod_sq1(self):
        assert steenrod_series("A_mod_Sq1", 7).dense(0, 7) == [1, 0, 1, 1, 1, 1, 2, 2]

    def test_length_zero(self):
        assert steenrod_series("A_length_le_k", 10, 0).dense(0, 10) == [1] + [0] * 10

    def test_length_one(self):
        assert steenrod_series("A_length_le_k", 5, 1).dense(0, 5) == [1] * 6

    def test_lengths_exhaust(self):
        assert admissible_series(20, 5) == milnor_series(20)

    def test_window_limit(self):
        with pytest.raises(SeriesError):
            milnor_series(65)
        with pytest.raises(SeriesError):
            steenrod_series("B", 5)


class TestE1:
    def test_char0_taq_sphere(self):
        assert e1_total("taq", one(3), 0).terms == ((3, 1, 1),)

    @pytest.mark.parametrize("q,n", [(5, 2), (7, 3), (3, 2)])
    def test_char0_tensor_odd_sphere_is_exterior(self, q, n):
        d = q - n
        out = e1_total("tensor", one(q), 0, n=n)
        assert out.by_degree() == ({0: 1, d: 1} if d % 2 else {k: 1 for k in range(0, 21, d)})

    def test_char0_tensor_even_sphere_has_square(self):
        # q even: the Lie algebra on a class of odd degree q - 1 also has [x, x]
        out = e1_total("tensor", one(4), 0, n=1)
        assert out.by_degree() == {k: 1 for k in range(0, 21, 3)}

    def test_char2_taq_support_powers_of_two(self):
        out = e1_total("taq", one(0), 2)
        assert all(is_power_of_two(w) for w in out.weights())
        assert out.dense(0, 20) == milnor_series(20)

    @pytest.mark.parametrize("target,char,n", [("taq", 0, None), ("tensor", 0, 2), ("taq", 2, None), ("tensor", 2, 2)])
    def test_linear_layer_is_input(self, target, char, n):
        h = G.from_degrees({3: 1, 5: 2}, 20)
        out = e1_total(target, h, char, n=n)
        s = 1 if char == 0 else DEFAULT_CONVENTION.shift_sign
        shift_by = 0 if target == "taq" else -s * n
        assert out.layer(1).by_degree() == shift(h, shift_by).by_degree()

    def test_tensor_needs_n(self):
        with pytest.raises(SeriesError):
            e1_total("tensor", one(2), 0)

    def test_unknown_target(self):
        with pytest.raises(SeriesError):
            e1_total("thh", one(2), 0)


class TestCalibration:
    def test_default_passes(self):
        assert calibrate(DEFAULT_CONVENTION, 20).ok

    def test_sweep_singles_out_default(self):
        passing = [r.convention for r in calibration_sweep(20) if r.ok]
        assert passing == [DEFAULT_CONVENTION]


class TestSeriesType:
    def test_parse(self):
        assert G.parse("0:1, 3:2", 5).by_degree() == {0: 1, 3: 2}
        with pytest.raises(SeriesError):
            G.parse("0-1", 5)

    def test_json_round_trip(self):
        out = e1_total("taq", one(0, 12), 2)
        text = out.to_json()
        assert json.loads(text)["schema"] == "mccord.series/1"
        assert G.from_json(text) == out

    def test_render(self):
        text = e1_total("taq", one(0, 6), 2).render()
        assert text.splitlines()[-1].startswith("total")
