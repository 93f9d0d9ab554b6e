"""Word models of a simplicial set with coefficients in a finite monoid.

An ``n``-simplex of the model is a finitely supported function from the
``n``-simplices of ``K`` (degenerate ones included) to the coefficients.  It is
stored as a frozenset of ``(Simplex, letter)`` pairs.  Simplicial operators act
by pushforward: letters on colliding simplices are added, letters landing on
the basepoint simplex are discarded, and identity sums are deleted.

Three flavors are supported:

``unital``
    ``A`` unital.  The empty word is the unit.  If ``A`` has an absorbing
    basepoint distinct from its identity, a letter hitting the base simplex or
    a sum equal to that basepoint sends the whole word to :data:`ZERO`, which
    is then the basepoint of the model.
``reduced``
    ``A`` nonunital with absorbing basepoint.  There is no empty word; the
    basepoint is :data:`ZERO`.
``unbased``
    ``K`` unbased, ``A`` unital; nothing is discarded for hitting a basepoint.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .coefmonoid import CoeffMonoid, adjoin_unit
from .simplicial import (
    GroupAction,
    Simplex,
    SimplicialError,
    SimplicialSet,
    add_disjoint_basepoint,
    diagonal_action,
    discrete,
    discrete_power_action,
    expand,
    fat_diagonal_quotient,
    from_levels,
    orbit_quotient,
    smash,
    smash_power,
    wedge,
)

ZERO = ("ZERO",)
LAYER_BASE = ("LAYER_BASE",)
FLAVORS = ("unital", "reduced", "unbased")


class WordModelError(ValueError):
    pass


@dataclass
class WordModel:
    base: SimplicialSet
    coeff: CoeffMonoid
    d_max: int | None
    flavor: str = "unital"
    _levels: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        A, K = self.coeff, self.base
        if self.flavor not in FLAVORS:
            raise WordModelError(f"unknown flavor {self.flavor!r}")
        if self.d_max is not None and self.d_max < 0:
            raise WordModelError("d_max must be non-negative")
        if self.flavor == "unital" and not (A.unital and K.is_based):
            raise WordModelError("the unital flavor needs a unital monoid and a based simplicial set")
        if self.flavor == "reduced" and (A.unital or not K.is_based):
            raise WordModelError("the reduced flavor needs a nonunital semigroup and a based simplicial set")
        if self.flavor == "unbased" and (not A.unital or K.is_based):
            raise WordModelError("the unbased flavor needs a unital monoid and an unbased simplicial set")

    # structure ------------------------------------------------------------------

    @property
    def max_dim(self) -> int:
        return self.base.max_dim

    @property
    def uses_zero(self) -> bool:
        return self.flavor == "reduced" or self.coeff.has_zero

    @property
    def basepoint(self):
        return ZERO if self.uses_zero else frozenset()

    def letters(self) -> list:
        return self.coeff.letters()

    def support(self, n: int) -> list:
        """The ``n``-simplices that may carry a letter."""
        K = self.base
        return [s for s in K.simplices(n) if not K.is_base(s)]

    def words(self, n: int) -> Iterator:
        """Lazily enumerate level ``n``."""
        if self.uses_zero:
            yield ZERO
        if self.flavor != "reduced":
            yield frozenset()
        simplices = self.support(n)
        letters = self.letters()
        top = len(simplices) if self.d_max is None else min(self.d_max, len(simplices))
        for r in range(1, top + 1):
            for chosen in itertools.combinations(simplices, r):
                for values in itertools.product(letters, repeat=r):
                    yield frozenset(zip(chosen, values))

    def level(self, n: int) -> list:
        if n not in self._levels:
            self._levels[n] = list(self.words(n))
        return self._levels[n]

    def count(self, n: int) -> int:
        """Size of level ``n`` without enumerating it."""
        from math import comb

        m = len(self.support(n))
        q = len(self.letters())
        top = m if self.d_max is None else min(self.d_max, m)
        total = sum(comb(m, r) * q**r for r in range(1, top + 1))
        return total + int(self.uses_zero) + int(self.flavor != "reduced")

    # operators ---------------------------------------------------------------------

    def push(self, word, op):
        """Pushforward of ``word`` along a map ``op`` on simplices of ``K``."""
        if word == ZERO:
            return ZERO
        A, K = self.coeff, self.base
        out: dict = {}
        for s, a in word:
            t = op(s)
            if self.flavor != "unbased" and K.is_base(t):
                if self.uses_zero:
                    return ZERO
                continue
            out[t] = A.op(out[t], a) if t in out else a
        result = []
        for t, a in out.items():
            if a == A.identity:
                continue
            if self.uses_zero and a == A.basepoint:
                return ZERO
            result.append((t, a))
        return frozenset(result)

    def face(self, word, n: int, i: int):
        return self.push(word, lambda s: self.base.face(s, i))

    def degen(self, word, n: int, i: int):
        return self.push(word, lambda s: self.base.degeneracy(s, i))

    def add(self, u, v):
        """Monoid sum of two words on the same level."""
        if u == ZERO or v == ZERO:
            return ZERO
        A = self.coeff
        out = dict(u)
        for s, a in v:
            out[s] = A.op(out[s], a) if s in out else a
        items = []
        for s, a in out.items():
            if a == A.identity:
                continue
            if self.uses_zero and a == A.basepoint:
                return ZERO
            items.append((s, a))
        return frozenset(items)

    @staticmethod
    def filtration(word) -> int:
        """Support size; :data:`ZERO` and the empty word have filtration 0."""
        return 0 if word == ZERO else len(word)

    def is_degenerate(self, word, n: int) -> bool:
        return n > 0 and any(self.degen(self.face(word, n, j), n - 1, j) == word for j in range(n))

    # conversions and reports -------------------------------------------------------

    def as_simplicial_set(self, max_dim: int | None = None) -> SimplicialSet:
        top = self.max_dim if max_dim is None else min(max_dim, self.max_dim)
        return from_levels(self.level, self.face, self.degen, top, self.basepoint, self.name)

    @property
    def name(self) -> str:
        return f"SP({self.base.name},{self.coeff.name})"

    def census(self, top: int | None = None) -> dict:
        """Word counts keyed by ``(dimension, filtration)``."""
        top = self.max_dim if top is None else top
        out: Counter = Counter()
        for n in range(top + 1):
            for w in self.level(n):
                out[(n, self.filtration(w))] += 1
        return dict(sorted(out.items()))

    def closure_violations(self, top: int | None = None) -> list:
        """Operators that leave the model or raise filtration (should be empty)."""
        top = self.max_dim if top is None else top
        bad = []
        for n in range(top + 1):
            for w in self.level(n):
                f = self.filtration(w)
                images = [("d", i, self.face(w, n, i)) for i in range(n + 1)] if n else []
                if n < self.max_dim:
                    images += [("s", i, self.degen(w, n, i)) for i in range(n + 1)]
                for kind, i, x in images:
                    if self.filtration(x) > f:
                        bad.append((n, kind, i, w))
        return bad

    def to_report(self, top: int | None = None) -> dict:
        counts = self.census(top)
        return {
            "schema": "mccord.word_model/1",
            "base": self.base.name,
            "coeff": self.coeff.name,
            "flavor": self.flavor,
            "d_max": self.d_max,
            "counts": [{"dim": n, "filtration": f, "words": c} for (n, f), c in counts.items()],
        }


def word_model(K: SimplicialSet, A: CoeffMonoid, d_max: int | None, flavor: str | None = None) -> WordModel:
    """Build the filtered word model; ``flavor`` is inferred when omitted."""
    if flavor is None:
        if not K.is_based:
            flavor = "unbased"
        else:
            flavor = "unital" if A.unital else "reduced"
    return WordModel(K, A, d_max, flavor)


def word_from_letters(letters: dict) -> frozenset:
    return frozenset(letters.items())


# -- filtration layers --------------------------------------------------------------


class FiltrationLayer:
    """``F_d / F_{d-1}``: words of support exactly ``d`` plus a basepoint."""

    def __init__(self, W: WordModel, d: int):
        if W.d_max is not None and not 1 <= d <= W.d_max:
            raise WordModelError(f"layer {d} outside 1..{W.d_max}")
        if d < 1:
            raise WordModelError("layer index must be at least 1")
        self.W, self.d = W, d

    def level(self, n: int) -> list:
        return [LAYER_BASE] + [w for w in self.W.level(n) if w != ZERO and len(w) == self.d]

    def _clip(self, w):
        return w if (w != ZERO and len(w) == self.d) else LAYER_BASE

    def face(self, w, n: int, i: int):
        return LAYER_BASE if w == LAYER_BASE else self._clip(self.W.face(w, n, i))

    def degen(self, w, n: int, i: int):
        return LAYER_BASE if w == LAYER_BASE else self._clip(self.W.degen(w, n, i))

    def nondegenerate(self, n: int) -> list:
        return [w for w in self.level(n)[1:] if not _degenerate(self, w, n)]

    def as_simplicial_set(self) -> SimplicialSet:
        return from_levels(self.level, self.face, self.degen, self.W.max_dim, LAYER_BASE, f"F{self.d}/F{self.d - 1}")


def _degenerate(obj, w, n: int) -> bool:
    return n > 0 and any(obj.degen(obj.face(w, n, j), n - 1, j) == w for j in range(n))


def filtration_layer(W: WordModel, d: int) -> SimplicialSet:
    return FiltrationLayer(W, d).as_simplicial_set()


# -- layer model --------------------------------------------------------------------


@dataclass
class LayerModel:
    space: SimplicialSet
    d: int
    diagonal_free: bool


def coefficient_set(A: CoeffMonoid, N: int) -> SimplicialSet:
    """``A`` as a discrete pointed set: pointed by the identity, or the zero if present."""
    base = A.basepoint
    return discrete(list(range(len(A))), base, N)


def layer_model(K: SimplicialSet, A: CoeffMonoid, d: int) -> LayerModel:
    """``K^(d)`` smashed with ``A^{smash d}``, modulo the diagonal symmetric group action."""
    if d < 1:
        raise WordModelError("layer index must be at least 1")
    if A.unital and A.has_zero:
        raise WordModelError("layer_model expects a group-like pointing or a nonunital semigroup")
    X, gx = fat_diagonal_quotient(K, d)
    D = coefficient_set(A, K.max_dim)
    Dd = smash_power(D, d)
    gd = discrete_power_action(Dd, d)
    S = smash(X, Dd)
    G = diagonal_action(S, gx, gd)
    return LayerModel(orbit_quotient(S, G), d, G.is_free_off_basepoint())


def _layer_word(K: SimplicialSet, ref: Simplex):
    """Image of a simplex of ``K^(d) smash A^d`` (over a tuple cell) as a word."""
    if ref.cell == "*":
        return LAYER_BASE
    x, a = expand(ref)
    if x.cell == "*" or a.cell == "*":
        return LAYER_BASE
    ks = expand(x)
    coeffs = [s.cell for s in expand(a)]
    return frozenset(zip(ks, coeffs))


@dataclass
class Verdict:
    ok: bool
    check: str
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "mccord.verdict/1",
                "check": self.check,
                "ok": self.ok,
                "details": self.details,
                "counterexample": self.counterexample,
            },
            sort_keys=True,
            default=str,
        )


def layer_iso_check(K: SimplicialSet, A: CoeffMonoid, d: int, top: int | None = None) -> Verdict:
    """Compare ``F_d/F_{d-1}`` of the word model with :func:`layer_model`.

    The map sends the orbit of ``((k_1..k_d), (a_1..a_d))`` to the word
    ``{k_i: a_i}``; it must be well defined on orbits, bijective on
    nondegenerate simplices of every level and commute with faces.
    """
    flavor = "unital" if A.unital else "reduced"
    W = WordModel(K, A, d, flavor)
    layer = FiltrationLayer(W, d)
    LM = layer_model(K, A, d).space
    top = K.max_dim if top is None else min(top, K.max_dim)
    name = "layer_iso"
    counts = {}
    for n in range(top + 1):
        image = {}
        for orb in LM.cells[n]:
            if orb == LM.basepoint:
                continue
            words = {_layer_word(K, Simplex(c, (), n)) for c in orb}
            if len(words) != 1:
                return Verdict(False, name, counterexample={"dim": n, "reason": "not constant on an orbit", "cell": str(orb)})
            (w,) = words
            if w == LAYER_BASE or _degenerate(layer, w, n):
                return Verdict(False, name, counterexample={"dim": n, "reason": "cell lands on a degenerate word", "cell": str(orb)})
            if w in image:
                return Verdict(False, name, counterexample={"dim": n, "reason": "not injective", "cell": str(orb)})
            image[w] = orb
            for i in range(n + 1) if n else ():
                lhs = _orbit_ref_word(K, LM, LM.face(Simplex(orb, (), n), i))
                rhs = layer.face(w, n, i)
                if lhs != rhs:
                    return Verdict(False, name, counterexample={"dim": n, "face": i, "reason": "faces disagree", "cell": str(orb)})
        targets = layer.nondegenerate(n)
        if len(targets) != len(image) or any(t not in image for t in targets):
            return Verdict(False, name, counterexample={"dim": n, "reason": "not surjective", "missing": len(targets) - len(image)})
        counts[n] = len(image)
    return Verdict(True, name, details={"K": K.name, "A": A.name, "d": d, "cells": counts})


def _orbit_ref_word(K: SimplicialSet, LM: SimplicialSet, ref: Simplex):
    if ref.cell == LM.basepoint:
        return LAYER_BASE
    rep = next(iter(ref.cell))
    return _layer_word(K, Simplex(rep, ref.degen, ref.dim))


# -- structural checks ----------------------------------------------------------------


def _operators(n: int, N: int):
    ops = [("d", i) for i in range(n + 1)] if n else []
    if n < N:
        ops += [("s", i) for i in range(n + 1)]
    return ops


def _apply(W: WordModel, w, n: int, op):
    kind, i = op
    return W.face(w, n, i) if kind == "d" else W.degen(w, n, i)


def _compare_maps(name, source: WordModel, phi, target_level, target_apply, top, grading=None) -> Verdict:
    """Shared bijection-and-naturality test for levelwise maps of word models."""
    for n in range(top + 1):
        images = {}
        for w in source.level(n):
            x = phi(w)
            if x in images:
                return Verdict(False, name, counterexample={"dim": n, "reason": "not injective", "word": str(w)})
            images[x] = w
            if grading is not None and not grading(w, x):
                return Verdict(False, name, counterexample={"dim": n, "reason": "grading mismatch", "word": str(w)})
            for op in _operators(n, top):
                if phi(_apply(source, w, n, op)) != target_apply(x, n, op):
                    return Verdict(False, name, counterexample={"dim": n, "op": list(op), "reason": "not natural", "word": str(w)})
        target = target_level(n)
        if len(target) != len(images) or any(t not in images for t in target):
            return Verdict(False, name, counterexample={"dim": n, "reason": "not surjective"})
    return Verdict(True, name)


def wedge_decomposition_check(K: SimplicialSet, L: SimplicialSet, A: CoeffMonoid, d_max: int, top: int | None = None) -> Verdict:
    """Restriction of words on ``K v L`` to pairs of words on ``K`` and ``L``.

    The filtration on pairs is the sum of the two support sizes.  The map is
    also checked to be additive on every level.
    """
    KL = wedge(K, L)
    top = KL.max_dim if top is None else min(top, KL.max_dim)
    W, WK, WL = WordModel(KL, A, d_max), WordModel(K, A, d_max), WordModel(L, A, d_max)

    def restrict(w):
        if w == ZERO:
            return ZERO
        left = frozenset((Simplex(s.cell[1], s.degen, s.dim), a) for s, a in w if s.cell[0] == 0)
        right = frozenset((Simplex(s.cell[1], s.degen, s.dim), a) for s, a in w if s.cell[0] == 1)
        return (left, right)

    def level(n):
        return [
            (u, v)
            for u in WK.level(n)
            for v in WL.level(n)
            if WK.filtration(u) + WL.filtration(v) <= d_max
        ]

    def apply(x, n, op):
        u, v = x
        return (_apply(WK, u, n, op), _apply(WL, v, n, op))

    verdict = _compare_maps(
        "wedge_decomposition",
        W,
        restrict,
        level,
        apply,
        top,
        grading=lambda w, x: W.filtration(w) == len(x[0]) + len(x[1]),
    )
    if not verdict:
        return verdict
    for n in range(min(top, 1) + 1):
        words = W.level(n)
        for u, v in itertools.product(words, repeat=2):
            s = W.add(u, v)
            if W.filtration(s) > d_max:
                continue
            ru, rv, rs = restrict(u), restrict(v), restrict(s)
            if rs != (WK.add(ru[0], rv[0]), WL.add(ru[1], rv[1])):
                return Verdict(False, "wedge_decomposition", counterexample={"dim": n, "reason": "not additive"})
    verdict.details = {"K": K.name, "L": L.name, "A": A.name, "d_max": d_max, "grading": "sum of support sizes"}
    return verdict


def smash_iteration_check(K: SimplicialSet, L: SimplicialSet, A: CoeffMonoid, d_max: int, top: int | None = None) -> Verdict:
    """Currying: words on ``K smash L`` versus words on ``K`` valued in words on ``L``.

    On level ``n`` the inner coefficient monoid is level ``n`` of the word model
    of ``L``.  The filtration on the right is the total inner support.
    """
    KL = smash(K, L)
    top = KL.max_dim if top is None else min(top, KL.max_dim)
    W = WordModel(KL, A, d_max)
    WL = WordModel(L, A, None)
    WK = WordModel(K, A, None)

    def curry(w):
        if w == ZERO:
            return ZERO
        outer: dict = {}
        for s, a in w:
            k, l = expand(s)
            outer.setdefault(k, set()).add((l, a))
        return frozenset((k, frozenset(v)) for k, v in outer.items())

    def level(n):
        inner = [v for v in WL.level(n) if v != ZERO and len(v) >= 1]
        out = [frozenset()]
        ks = WK.support(n)
        for r in range(1, min(d_max, len(ks)) + 1):
            for chosen in itertools.combinations(ks, r):
                for values in itertools.product(inner, repeat=r):
                    if sum(len(v) for v in values) <= d_max:
                        out.append(frozenset(zip(chosen, values)))
        return out

    def apply(x, n, op):
        kind, i = op
        kop = (lambda s: K.face(s, i)) if kind == "d" else (lambda s: K.degeneracy(s, i))
        out: dict = {}
        for k, v in x:
            t = kop(k)
            if K.is_base(t):
                continue
            v2 = _apply(WL, v, n, op)
            out[t] = WL.add(out[t], v2) if t in out else v2
        return frozenset((t, v) for t, v in out.items() if v != frozenset())

    verdict = _compare_maps(
        "smash_iteration",
        W,
        curry,
        level,
        apply,
        top,
        grading=lambda w, x: W.filtration(w) == sum(len(v) for _, v in x),
    )
    verdict.details = {"K": K.name, "L": L.name, "A": A.name, "d_max": d_max}
    return verdict


def adjoin_unit_check(K: SimplicialSet, J: CoeffMonoid, d_max: int, top: int | None = None) -> Verdict:
    """Reduced words on ``(K, J)`` against unital words on ``(K, J with a unit)``.

    Every unital word other than the unit must come from exactly one reduced
    word, with the same filtration, compatibly with all operators; the unit
    must be fixed by all operators.
    """
    Jp = adjoin_unit(J)
    R = WordModel(K, J, d_max, "reduced")
    U = WordModel(K, Jp, d_max, "unital")
    top = K.max_dim if top is None else min(top, K.max_dim)

    def level(n):
        return [w for w in U.level(n) if w != frozenset()]

    verdict = _compare_maps(
        "adjoin_unit",
        R,
        lambda w: w,
        level,
        lambda x, n, op: _apply(U, x, n, op),
        top,
        grading=lambda w, x: R.filtration(w) == U.filtration(x),
    )
    if verdict:
        for n in range(top + 1):
            if any(_apply(U, frozenset(), n, op) != frozenset() for op in _operators(n, top)):
                return Verdict(False, "adjoin_unit", counterexample={"dim": n, "reason": "unit not fixed"})
    verdict.details = {"K": K.name, "J": J.name, "d_max": d_max}
    return verdict


def unbased_comparison_check(L: SimplicialSet, A: CoeffMonoid, d_max: int, top: int | None = None) -> Verdict:
    """Unbased words on ``L`` against based words on ``L_+``, plus the layer formula on ``L_+``."""
    Lp = add_disjoint_basepoint(L)
    U = WordModel(L, A, d_max, "unbased")
    B = WordModel(Lp, A, d_max, "unital")
    top = L.max_dim if top is None else min(top, L.max_dim)
    verdict = _compare_maps(
        "unbased_comparison",
        U,
        lambda w: w,
        B.level,
        lambda x, n, op: _apply(B, x, n, op),
        top,
        grading=lambda w, x: U.filtration(w) == B.filtration(x),
    )
    if not verdict:
        return verdict
    layers = {}
    if not A.has_zero:
        for d in range(1, d_max + 1):
            v = layer_iso_check(Lp, A, d, top)
            layers[d] = v.ok
            if not v:
                return Verdict(False, "unbased_comparison", counterexample={"layer": d, **(v.counterexample or {})})
    verdict.details = {"L": L.name, "A": A.name, "d_max": d_max, "layers": layers}
    return verdict


def group_structure_check(W: WordModel, top: int) -> Verdict:
    """For group coefficients and no truncation: levels are groups, operators homomorphisms."""
    if not W.coeff.is_group or W.d_max is not None:
        raise WordModelError("group_structure_check needs group coefficients and d_max=None")
    for n in range(top + 1):
        words = W.level(n)
        zero = frozenset()
        for u in words:
            if not any(W.add(u, v) == zero for v in words):
                return Verdict(False, "group_structure", counterexample={"dim": n, "reason": "no inverse"})
        for u, v in itertools.product(words, repeat=2):
            s = W.add(u, v)
            if s != W.add(v, u):
                return Verdict(False, "group_structure", counterexample={"dim": n, "reason": "not commutative"})
            for op in _operators(n, top):
                if _apply(W, s, n, op) != W.add(_apply(W, u, n, op), _apply(W, v, n, op)):
                    return Verdict(False, "group_structure", counterexample={"dim": n, "op": list(op)})
    return Verdict(True, "group_structure")
