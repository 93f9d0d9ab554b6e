import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mccord.coefmonoid import (
    CoeffMonoid,
    MonoidError,
    adjoin_unit,
    all_tables,
    cyclic,
    direct_product,
    homomorphisms,
    is_homomorphism,
    nilpotent,
    null_semigroup,
    one_point_semigroup,
    parse_coeff,
    truncated_nat,
)


def add(M, x, y):
    return M.label(M.op(M.index(x), M.index(y)))


def test_cyclic_two():
    Z2 = cyclic(2)
    assert add(Z2, 1, 1) == 0
    assert Z2.is_group and Z2.exponent() == 2


def test_truncated_nat_saturates():
    N2 = truncated_nat(2)
    assert add(N2, 1, 2) == 2 and add(N2, 2, 2) == 2
    assert not N2.is_group


def test_klein_four():
    V = direct_product(cyclic(2), cyclic(2))
    assert len(V) == 4 and V.exponent() == 2


@pytest.mark.parametrize("build", [cyclic, truncated_nat])
def test_zero_parameter_rejected(build):
    with pytest.raises(MonoidError):
        build(0)


class TestAdjoinUnit:
    def test_point(self):
        M = adjoin_unit(one_point_semigroup())
        assert len(M) == 2 and M.unital and M.has_zero

    def test_size(self):
        for J in (null_semigroup(2), nilpotent(3)):
            assert len(adjoin_unit(J)) == len(J) + 1

    def test_nilpotent_three_elements(self):
        M = adjoin_unit(nilpotent(1))
        assert len(M) == 3 and not M.violations() and M.unital

    def test_rejects_unital(self):
        with pytest.raises(MonoidError):
            adjoin_unit(cyclic(2))

    def test_unit_acts_as_identity(self):
        J = nilpotent(2)
        M = adjoin_unit(J)
        for a in range(len(M)):
            assert M.op(M.identity, a) == a
        # old products unchanged
        for a, b in itertools.product(range(len(J)), repeat=2):
            assert M.op(a, b) == J.op(a, b)


def test_constructors_pass_axioms():
    for M in (cyclic(5), truncated_nat(4), nilpotent(3), null_semigroup(3), direct_product(cyclic(2), cyclic(3))):
        assert M.violations() == []


def test_nilpotent_products():
    J = nilpotent(3)
    assert add(J, 1, 2) == 3 and add(J, 2, 2) == "*" and J.has_zero and not J.unital


def test_letters_exclude_identity_and_zero():
    assert cyclic(3).letters() == [1, 2]
    assert nilpotent(2).letters() == [1, 2]
    M = adjoin_unit(nilpotent(1))
    assert M.letters() == [1]


def test_all_tables_counts():
    # commutative monoids / zero-semigroups on three labelled points with 0 fixed
    assert len(all_tables(3, True)) == 9
    assert len(all_tables(3, False)) == 14


@st.composite
def random_table(draw, n=3, unital=True):
    t = [[0] * n for _ in range(n)]
    for a in range(n):
        t[0][a] = t[a][0] = a if unital else 0
    for a in range(1, n):
        for b in range(a, n):
            t[a][b] = t[b][a] = draw(st.integers(0, n - 1))
    return tuple(tuple(r) for r in t)


@settings(max_examples=200, deadline=None)
@given(random_table())
def test_checker_agrees_with_brute_force(table):
    n = len(table)
    M = CoeffMonoid(tuple(range(n)), table, 0, 0)
    assoc = all(table[table[a][b]][c] == table[a][table[b][c]] for a, b, c in itertools.product(range(n), repeat=3))
    assert (M.violations() == []) == assoc
    if assoc:
        assert any(M.table == X.table for X in all_tables(3, True))


@settings(max_examples=100, deadline=None)
@given(random_table(unital=False))
def test_checker_rejects_nonassociative_semigroups(table):
    n = len(table)
    M = CoeffMonoid(tuple(range(n)), table, None, 0)
    assoc = all(table[table[a][b]][c] == table[a][table[b][c]] for a, b, c in itertools.product(range(n), repeat=3))
    if not assoc:
        with pytest.raises(MonoidError):
            M.check()


def _small_monoids():
    return [cyclic(1), cyclic(2), truncated_nat(1), truncated_nat(2), cyclic(3), cyclic(4), truncated_nat(3)]


def test_product_is_categorical():
    """Pairing ``Hom(C, A) x Hom(C, B) -> Hom(C, A x B)`` is a bijection for small monoids."""
    small = _small_monoids()
    for A, B in itertools.product(small[:4], repeat=2):
        P = direct_product(A, B)
        pa = [a for a, _ in itertools.product(range(len(A)), range(len(B)))]
        pb = [b for _, b in itertools.product(range(len(A)), range(len(B)))]
        assert is_homomorphism(pa, P, A) and is_homomorphism(pb, P, B)
        for C in (c for c in small if len(c) <= 4):
            pairs = {(f, g) for f in homomorphisms(C, A) for g in homomorphisms(C, B)}
            maps = homomorphisms(C, P)
            projected = {(tuple(pa[x] for x in h), tuple(pb[x] for x in h)) for h in maps}
            assert len(maps) == len(pairs) and projected == pairs


def test_json_round_trip():
    for M in (cyclic(3), nilpotent(2), adjoin_unit(null_semigroup(2))):
        N = CoeffMonoid.from_json(M.to_json(), M.name)
        assert N.table == M.table and N.identity == M.identity and N.basepoint == M.basepoint


def test_from_json_validates():
    bad = '{"elements": [0, 1], "table": [[0, 1], [0, 0]], "identity": 0, "basepoint": 0}'
    with pytest.raises(MonoidError):
        CoeffMonoid.from_json(bad)


@pytest.mark.parametrize(
    "spec,size,unital",
    [("z4", 4, True), ("tnat3", 4, True), ("nil2", 3, False), ("null3", 4, False), ("prod:z2,z3", 6, True), ("unit:nil1", 3, True)],
)
def test_parse_coeff(spec, size, unital):
    M = parse_coeff(spec)
    assert len(M) == size and M.unital == unital


def test_parse_coeff_unknown():
    with pytest.raises(MonoidError):
        parse_coeff("q7")
