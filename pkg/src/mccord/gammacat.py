"""Finite index categories, functors on them, coends and left Kan extensions.

Objects of ``Γ``, ``E`` and ``Set`` are integers ``n`` standing for
``{0, 1, ..., n}`` based at 0 (``Γ``) or ``{1, ..., n}`` (``E``, ``Set``).
A morphism ``n -> m`` is the tuple ``(α(1), ..., α(n))``; in ``Γ`` the value
0 is the basepoint.

Functor values are finite sets of integer codes.  Tuple-valued functors use
little-endian mixed radix codes, so morphisms act through numpy gathers and
colimits reduce to connected components of a sparse graph.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .coefmonoid import CoeffMonoid

MAX_OBJECT = 6
KINDS = ("gamma", "epi", "set")


class CategoryError(ValueError):
    pass


# -- categories ----------------------------------------------------------------------


def compose(beta: tuple, alpha: tuple) -> tuple:
    """``beta ∘ alpha`` for tuple morphisms (0 maps to 0)."""
    return tuple(beta[a - 1] if a else 0 for a in alpha)


def _surjective(alpha: tuple, m: int) -> bool:
    return len(set(alpha)) == m


class FiniteCategory:
    """``Γ_{≤N}``, ``E_{≤N}`` or ``Set_{≤N}`` with explicit hom-sets."""

    def __init__(self, kind: str, N: int):
        if kind not in KINDS:
            raise CategoryError(f"unknown category kind {kind!r}")
        if not 0 <= N <= MAX_OBJECT:
            raise CategoryError(f"object bound {N} outside 0..{MAX_OBJECT}")
        if kind == "epi" and N < 1:
            raise CategoryError("E has objects 1..N, so N must be at least 1")
        self.kind, self.N = kind, N
        # E has no empty set; Γ and Set start at 0
        self.objects = list(range(1 if kind == "epi" else 0, N + 1))
        self._hom: dict = {}

    def __repr__(self) -> str:
        return f"FiniteCategory({self.kind!r}, {self.N})"

    def hom(self, n: int, m: int) -> list:
        key = (n, m)
        if key not in self._hom:
            if self.kind == "gamma":
                out = list(itertools.product(range(m + 1), repeat=n))
            else:
                out = list(itertools.product(range(1, m + 1), repeat=n))
                if self.kind == "epi":
                    out = [a for a in out if _surjective(a, m)]
            self._hom[key] = out
        return self._hom[key]

    def expected_count(self, n: int, m: int) -> int:
        if self.kind == "gamma":
            return (m + 1) ** n
        if self.kind == "set":
            return m**n
        return math.factorial(m) * stirling2(n, m)

    @staticmethod
    def identity(n: int) -> tuple:
        return tuple(range(1, n + 1))

    def morphisms(self):
        for n in self.objects:
            for m in self.objects:
                for a in self.hom(n, m):
                    yield a, n, m

    def generators(self) -> list:
        """Generating morphisms ``(α, source, target)``.

        Adjacent transpositions, folding the last two points together, and
        (where the category has them) collapsing the last point to the base
        and including ``n-1`` into ``n``.
        """
        gens = []
        for n in self.objects:
            for i in range(1, n):
                t = list(range(1, n + 1))
                t[i - 1], t[i] = t[i], t[i - 1]
                gens.append((tuple(t), n, n))
            if n >= 2:
                gens.append((tuple(range(1, n)) + (n - 1,), n, n - 1))
            if n >= 1 and self.kind == "gamma":
                gens.append((tuple(range(1, n)) + (0,), n, n - 1))
            if n >= 1 and self.kind != "epi":
                gens.append((tuple(range(1, n)), n - 1, n))
        return gens

    def check_laws(self) -> None:
        """Associativity and identities on every composable triple."""
        for n, m, k in itertools.product(self.objects, repeat=3):
            for a in self.hom(n, m):
                if compose(self.identity(m), a) != a or compose(a, self.identity(n)) != a:
                    raise CategoryError(f"identity law fails at {a}")
                for b in self.hom(m, k):
                    ba = compose(b, a)
                    if ba not in set(self.hom(n, k)):
                        raise CategoryError(f"composite {ba} is not a morphism {n}->{k}")
                    for L in self.objects:
                        for c in self.hom(k, L):
                            if compose(c, ba) != compose(compose(c, b), a):
                                raise CategoryError("composition is not associative")

    def generated_morphisms(self) -> set:
        return generated_closure(self.objects, self.identity, self.generators(), compose)


def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)


def generated_closure(objects, identity, gens, comp) -> set:
    """All composites of generators (as ``(α, source, target)``) plus identities."""
    by_source: dict = {}
    for g, s, t in gens:
        by_source.setdefault(s, []).append((g, t))
    seen = {(identity(x), x, x) for x in objects}
    stack = list(seen)
    while stack:
        a, s, t = stack.pop()
        for g, t2 in by_source.get(t, ()):
            item = (comp(g, a), s, t2)
            if item not in seen:
                seen.add(item)
                stack.append(item)
    return seen


class ProductCategory:
    """A full subcategory of ``Γ × Γ`` on pairs ``(a, b)`` allowed by ``keep``."""

    def __init__(self, N: int, keep, name: str = ""):
        self.base = FiniteCategory("gamma", N)
        self.N = N
        self.name = name
        self.objects = [(a, b) for a in range(N + 1) for b in range(N + 1) if keep(a, b)]
        self._objset = set(self.objects)
        self._gens = None

    def __repr__(self) -> str:
        return f"ProductCategory({self.name or self.N})"

    def hom(self, x, y) -> list:
        return list(itertools.product(self.base.hom(x[0], y[0]), self.base.hom(x[1], y[1])))

    @staticmethod
    def identity(x) -> tuple:
        return (FiniteCategory.identity(x[0]), FiniteCategory.identity(x[1]))

    @staticmethod
    def compose(g, f) -> tuple:
        return (compose(g[0], f[0]), compose(g[1], f[1]))

    def morphisms(self):
        for x in self.objects:
            for y in self.objects:
                for a in self.hom(x, y):
                    yield a, x, y

    def generators(self) -> list:
        """Factorwise generators, completed so their composites give every morphism."""
        if self._gens is None:
            gens = []
            for g, s, t in self.base.generators():
                for x in self.objects:
                    if x[0] == s and (t, x[1]) in self._objset:
                        gens.append(((g, self.base.identity(x[1])), x, (t, x[1])))
                    if x[1] == s and (x[0], t) in self._objset:
                        gens.append(((self.base.identity(x[0]), g), x, (x[0], t)))
            closure = generated_closure(self.objects, self.identity, gens, self.compose)
            missing = [m for m in self.morphisms() if m not in closure]
            while missing:
                gens.append(missing[0])
                closure = generated_closure(self.objects, self.identity, gens, self.compose)
                missing = [m for m in missing if m not in closure]
            self._gens = gens
        return self._gens


# -- functors ----------------------------------------------------------------------------


@lru_cache(maxsize=None)
def digits(q: int, n: int) -> np.ndarray:
    """Array of shape ``(q**n, n)``; row ``c`` lists the base-``q`` digits of ``c``."""
    codes = np.arange(q**n, dtype=np.int64)
    return np.stack([(codes // q**i) % q for i in range(n)], axis=1) if n else np.zeros((1, 0), dtype=np.int64)


def encode(rows: np.ndarray, q: int) -> np.ndarray:
    n = rows.shape[1]
    weights = q ** np.arange(n, dtype=np.int64)
    return rows @ weights if n else np.zeros(rows.shape[0], dtype=np.int64)


class FiniteFunctor:
    """A set-valued functor given by element counts and action tables.

    ``table(α, source, target)`` returns an int array: for a covariant
    functor it maps codes of ``F(source)`` to codes of ``F(target)``; for a
    contravariant one it maps codes of ``F(target)`` to codes of ``F(source)``.
    ``base_mask(x)`` marks elements identified with the basepoint (``None``
    for unbased functors).
    """

    variance = "co"

    def __init__(self, cat):
        self.cat = cat
        self._tables: dict = {}

    def size(self, x) -> int:
        raise NotImplementedError

    def _table(self, alpha, source, target) -> np.ndarray:
        raise NotImplementedError

    def table(self, alpha, source, target) -> np.ndarray:
        key = (alpha, source, target)
        if key not in self._tables:
            self._tables[key] = self._table(alpha, source, target)
        return self._tables[key]

    def base_mask(self, x):
        return None

    def label(self, x, code):
        return code

    def check_functorial(self, objects=None) -> None:
        """Identities and composition, exhaustively over ``objects``."""
        cat = self.cat
        objs = cat.objects if objects is None else objects
        for x in objs:
            idt = self.table(cat.identity(x), x, x)
            if not np.array_equal(idt, np.arange(self.size(x))):
                raise CategoryError(f"identity acts nontrivially at {x}")
        comp = getattr(cat, "compose", None) or compose
        for x, y, z in itertools.product(objs, repeat=3):
            for a in cat.hom(x, y):
                ta = self.table(a, x, y)
                for b in cat.hom(y, z):
                    tb = self.table(b, y, z)
                    tba = self.table(comp(b, a), x, z)
                    lhs = tb[ta] if self.variance == "co" else ta[tb]
                    if not np.array_equal(lhs, tba):
                        raise CategoryError(f"functoriality fails for {b} after {a}")
            mask = self.base_mask(x)
            if mask is not None:
                for a in cat.hom(x, y):
                    ta = self.table(a, x, y)
                    tm = self.base_mask(y)
                    src, dst = (mask, tm) if self.variance == "co" else (tm, mask)
                    if not np.all(dst[ta[src]]):
                        raise CategoryError("basepoint not preserved")


class PowerFunctor(FiniteFunctor):
    """Contravariant ``n -> K^n`` for a finite pointed set ``K = {0..q-1}``.

    ``mode`` is ``"times"`` (based at the constant tuple), ``"smash"``
    (tuples with a base coordinate are identified with the basepoint) or
    ``"unbased"``.
    """

    variance = "contra"

    def __init__(self, cat, q: int, base: int | None = 0, mode: str = "times", labels=None):
        super().__init__(cat)
        if q < 1:
            raise CategoryError("empty value set")
        if mode not in ("times", "smash", "unbased"):
            raise CategoryError(f"unknown mode {mode!r}")
        if (mode == "unbased") != (base is None):
            raise CategoryError("only the unbased mode has no basepoint")
        self.q, self.base, self.mode = q, base, mode
        self.labels = labels

    def size(self, n) -> int:
        return self.q**n

    def _table(self, alpha, n, m):
        D = digits(self.q, m)
        cols = [D[:, a - 1] if a else np.full(D.shape[0], self.base, dtype=np.int64) for a in alpha]
        rows = np.stack(cols, axis=1) if cols else np.zeros((D.shape[0], 0), dtype=np.int64)
        return encode(rows, self.q)

    def base_mask(self, n):
        if self.mode == "unbased":
            return None
        D = digits(self.q, n)
        if self.mode == "times":
            return np.all(D == self.base, axis=1)
        return np.any(D == self.base, axis=1)

    def label(self, n, code):
        t = tuple(int(v) for v in digits(self.q, n)[code])
        return tuple(self.labels[v] for v in t) if self.labels else t


def power_functor(K, kind: str = "times", N: int = 3, labels=None) -> PowerFunctor:
    """``K^×`` over ``Γ``, ``K^∧`` over ``E`` or unbased ``K^×`` over ``Set``.

    ``K`` is the number of points (base 0) or a sequence of labels whose
    first entry is the basepoint.
    """
    if not isinstance(K, int):
        labels = list(K)
        K = len(labels)
    cat = {"times": "gamma", "smash": "epi", "unbased": "set"}[kind]
    return PowerFunctor(FiniteCategory(cat, N), K, None if kind == "unbased" else 0, kind, labels)


class MonoidFunctor(FiniteFunctor):
    """Covariant ``n -> A^n``; morphisms add (or multiply) along fibers.

    Over ``Γ``/``Set`` the monoid is unital and an empty fiber gives the
    identity; coordinates sent to the basepoint are dropped.  Over ``E`` the
    semigroup is nonunital and tuples containing its zero are the basepoint.
    """

    variance = "co"

    def __init__(self, cat, A: CoeffMonoid):
        super().__init__(cat)
        kind = cat.kind
        if kind == "epi" and A.unital:
            raise CategoryError("over E the coefficients must be nonunital")
        if kind != "epi" and not A.unital:
            raise CategoryError("over Γ or Set the coefficients must be unital")
        self.A = A
        self.q = len(A)
        self._T = np.array(A.table, dtype=np.int64)

    def size(self, n) -> int:
        return self.q**n

    def _table(self, alpha, n, m):
        D = digits(self.q, n)
        count = D.shape[0]
        cols = []
        for j in range(1, m + 1):
            fiber = [i for i, a in enumerate(alpha) if a == j]
            if not fiber:
                cols.append(np.full(count, self.A.identity, dtype=np.int64))
                continue
            acc = D[:, fiber[0]]
            for i in fiber[1:]:
                acc = self._T[acc, D[:, i]]
            cols.append(acc)
        rows = np.stack(cols, axis=1) if cols else np.zeros((count, 0), dtype=np.int64)
        return encode(rows, self.q)

    def base_mask(self, n):
        D = digits(self.q, n)
        if self.cat.kind == "epi":
            return np.any(D == self.A.basepoint, axis=1)
        return np.all(D == self.A.identity, axis=1)

    def label(self, n, code):
        return tuple(self.A.elements[int(v)] for v in digits(self.q, n)[code])


def monoid_functor(A: CoeffMonoid, N: int = 3, kind: str | None = None) -> MonoidFunctor:
    kind = kind or ("gamma" if A.unital else "epi")
    return MonoidFunctor(FiniteCategory(kind, N), A)


class ProductFunctor(FiniteFunctor):
    """Objectwise product of two functors with the same variance; based at the pair of bases."""

    def __init__(self, F: FiniteFunctor, G: FiniteFunctor):
        if F.variance != G.variance:
            raise CategoryError("factors must have the same variance")
        super().__init__(F.cat)
        self.F, self.G = F, G
        self.variance = F.variance

    def size(self, x) -> int:
        return self.F.size(x) * self.G.size(x)

    def _table(self, alpha, s, t):
        tf, tg = self.F.table(alpha, s, t), self.G.table(alpha, s, t)
        # codes are f + |F| * g on the domain of the table
        x = t if self.variance == "contra" else s
        y = s if self.variance == "contra" else t
        nf = self.F.size(x)
        codes = np.arange(self.size(x), dtype=np.int64)
        return tf[codes % nf] + self.F.size(y) * tg[codes // nf]

    def base_mask(self, x):
        mf, mg = self.F.base_mask(x), self.G.base_mask(x)
        if mf is None or mg is None:
            return None
        nf = self.F.size(x)
        codes = np.arange(self.size(x), dtype=np.int64)
        return mf[codes % nf] & mg[codes // nf]


class ExternalProduct(FiniteFunctor):
    """``(a, b) -> F(a) × G(b)`` on a subcategory of ``Γ × Γ`` (contravariant)."""

    variance = "contra"

    def __init__(self, cat: ProductCategory, F: FiniteFunctor, G: FiniteFunctor):
        super().__init__(cat)
        self.F, self.G = F, G

    def size(self, x) -> int:
        return self.F.size(x[0]) * self.G.size(x[1])

    def _table(self, alpha, s, t):
        tf = self.F.table(alpha[0], s[0], t[0])
        tg = self.G.table(alpha[1], s[1], t[1])
        nf = self.F.size(t[0])
        codes = np.arange(self.size(t), dtype=np.int64)
        return tf[codes % nf] + self.F.size(s[0]) * tg[codes // nf]

    def base_mask(self, x):
        mf, mg = self.F.base_mask(x[0]), self.G.base_mask(x[1])
        nf = self.F.size(x[0])
        codes = np.arange(self.size(x), dtype=np.int64)
        return mf[codes % nf] & mg[codes // nf]


class Pullback(FiniteFunctor):
    """``f^* Z``: precomposition with a functor ``f`` given on objects and morphisms."""

    def __init__(self, cat, Z: FiniteFunctor, fobj, fmor):
        super().__init__(cat)
        self.Z, self.fobj, self.fmor = Z, fobj, fmor
        self.variance = Z.variance

    def size(self, x) -> int:
        return self.Z.size(self.fobj(x))

    def _table(self, alpha, s, t):
        return self.Z.table(self.fmor(alpha, s, t), self.fobj(s), self.fobj(t))

    def base_mask(self, x):
        return self.Z.base_mask(self.fobj(x))


# -- colimits ------------------------------------------------------------------------------


@dataclass
class Quotient:
    """Equivalence classes on a disjoint union of blocks."""

    offsets: dict
    sizes: dict
    labels: np.ndarray
    count: int
    base_class: int | None

    def cls(self, block, index: int) -> int:
        return int(self.labels[self.offsets[block] + index])

    def block_labels(self, block) -> np.ndarray:
        o = self.offsets[block]
        return self.labels[o : o + self.sizes[block]]

    @property
    def nonbase_count(self) -> int:
        return self.count - (self.base_class is not None)


def _solve(offsets: dict, sizes: dict, edges: list, base_nodes) -> Quotient:
    """Connected components; ``base_nodes`` (or ``None`` when unbased) join an extra base node."""
    total = sum(sizes.values())
    n = total + (base_nodes is not None)
    rows = [e[0] for e in edges]
    cols = [e[1] for e in edges]
    if base_nodes is not None and base_nodes.size:
        rows.append(base_nodes)
        cols.append(np.full(base_nodes.shape[0], total, dtype=np.int64))
    r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    c = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(r.shape[0], dtype=np.int8), (r, c)), shape=(n, n))
    count, labels = connected_components(graph, directed=False)
    base_class = int(labels[total]) if base_nodes is not None else None
    return Quotient(offsets, sizes, labels[:total], int(count), base_class)


def coend(Y: FiniteFunctor, X: FiniteFunctor, relations: str = "generators", smash: bool = True) -> Quotient:
    """``Y ⊗ X``: the quotient of ``⊔ Y(n) × X(n)`` by ``(n, α^*y, x) ~ (m, y, α_*x)``.

    Pairs with a base component are glued to the basepoint (when ``smash``).
    ``relations="all"`` uses every morphism instead of the generators.
    """
    if Y.variance != "contra" or X.variance != "co":
        raise CategoryError("coend needs a contravariant and a covariant functor")
    if Y.cat.objects != X.cat.objects:
        raise CategoryError("functors live on different categories")
    cat = X.cat
    sizes = {n: Y.size(n) * X.size(n) for n in cat.objects}
    offsets, acc = {}, 0
    for n in cat.objects:
        offsets[n] = acc
        acc += sizes[n]
    morphs = cat.generators() if relations == "generators" else list(cat.morphisms())
    edges = []
    for alpha, n, m in morphs:
        ystar = Y.table(alpha, n, m)  # Y(m) -> Y(n)
        xstar = X.table(alpha, n, m)  # X(n) -> X(m)
        xn, xm = X.size(n), X.size(m)
        left = offsets[n] + ystar[:, None] * xn + np.arange(xn, dtype=np.int64)[None, :]
        right = offsets[m] + np.arange(Y.size(m), dtype=np.int64)[:, None] * xm + xstar[None, :]
        edges.append((left.ravel(), right.ravel()))
    base_nodes = []
    if smash:
        for n in cat.objects:
            my, mx = Y.base_mask(n), X.base_mask(n)
            grid = np.zeros((Y.size(n), X.size(n)), dtype=bool)
            if my is not None:
                grid |= my[:, None]
            if mx is not None:
                grid |= mx[None, :]
            base_nodes.append(offsets[n] + np.flatnonzero(grid.ravel()))
    nodes = np.concatenate(base_nodes) if smash else None
    return _solve(offsets, sizes, edges, nodes)


# -- left Kan extensions ------------------------------------------------------------------------


@dataclass
class KanExtension:
    """Pointwise left Kan extension of a contravariant functor, evaluated at ``targets``."""

    f: "IndexFunctor"
    Y: FiniteFunctor
    values: dict  # target object -> Quotient over blocks (d, gamma index)
    homs: dict  # target object -> {d: list of morphisms c -> f(d)}

    def size(self, c) -> int:
        return self.values[c].nonbase_count + 1

    def element(self, c, d, gamma, y) -> int:
        q = self.values[c]
        gi = self.homs[c][d].index(gamma)
        return q.cls(d, gi * self.Y.size(d) + y)


@dataclass
class IndexFunctor:
    """A functor between index categories, on objects and morphisms."""

    name: str
    source: object
    target: object
    obj: callable
    mor: callable  # (alpha, s, t) -> morphism f(s) -> f(t)


def block_sum(alpha, beta, a2: int) -> tuple:
    """``α ⊔ β``: the second block is shifted past the ``a2`` points of the first target."""
    return tuple(alpha) + tuple(b + a2 if b else 0 for b in beta)


def block_smash(alpha, beta, b: int, b2: int) -> tuple:
    """``α ∧ β`` under the lexicographic identification ``(i, j) -> (i-1) b + j``."""
    out = []
    for x in alpha:
        for y in beta:
            out.append((x - 1) * b2 + y if x and y else 0)
    return tuple(out)


@lru_cache(maxsize=None)
def sum_functor(N: int) -> IndexFunctor:
    src = ProductCategory(N, lambda a, b: a + b <= N, "a+b<=N")
    return IndexFunctor(
        "a", src, FiniteCategory("gamma", N), lambda x: x[0] + x[1],
        lambda al, s, t: block_sum(al[0], al[1], t[0]),
    )


@lru_cache(maxsize=None)
def smash_functor(N: int) -> IndexFunctor:
    src = ProductCategory(N, lambda a, b: a * b <= N, "ab<=N")
    return IndexFunctor(
        "m", src, FiniteCategory("gamma", N), lambda x: x[0] * x[1],
        lambda al, s, t: block_smash(al[0], al[1], s[1], t[1]),
    )


@lru_cache(maxsize=None)
def diagonal_functor(N: int, target_bound: int | None = None) -> IndexFunctor:
    tb = N if target_bound is None else target_bound
    return IndexFunctor(
        "diag", FiniteCategory("gamma", N), ProductCategory(max(N, tb), lambda a, b: a <= tb and b <= tb, "box"),
        lambda n: (n, n), lambda al, s, t: (al, al),
    )


def _target_hom(f: IndexFunctor, c, d):
    tgt = f.target
    return tgt.hom(c, f.obj(d))


def _target_compose(f: IndexFunctor):
    return getattr(f.target, "compose", None) if isinstance(f.target, ProductCategory) else compose


def left_kan(f: IndexFunctor, Y: FiniteFunctor, targets) -> KanExtension:
    """``f_* Y`` at each target object ``c``: the colimit over ``c ↓ f``.

    Elements are triples ``(d, γ: c -> f d, y ∈ Y(d))`` with
    ``(d, γ, δ^* y') ~ (d', f(δ) ∘ γ, y')`` for generating ``δ: d -> d'``.
    """
    comp = _target_compose(f)
    src = f.source
    gens = src.generators()
    values, homs = {}, {}
    for c in targets:
        hom = {d: _target_hom(f, c, d) for d in src.objects}
        index = {d: {g: i for i, g in enumerate(hom[d])} for d in src.objects}
        sizes = {d: len(hom[d]) * Y.size(d) for d in src.objects}
        offsets, acc = {}, 0
        for d in src.objects:
            offsets[d] = acc
            acc += sizes[d]
        edges = []
        for delta, d, d2 in gens:
            if not hom[d]:
                continue
            fd = f.mor(delta, d, d2)
            moved = np.array([index[d2][comp(fd, g)] for g in hom[d]], dtype=np.int64)
            ystar = Y.table(delta, d, d2)  # Y(d2) -> Y(d)
            yd, yd2 = Y.size(d), Y.size(d2)
            gi = np.arange(len(hom[d]), dtype=np.int64)
            left = offsets[d] + gi[:, None] * yd + ystar[None, :]
            right = offsets[d2] + moved[:, None] * yd2 + np.arange(yd2, dtype=np.int64)[None, :]
            edges.append((left.ravel(), right.ravel()))
        base_nodes = []
        for d in src.objects:
            mask = Y.base_mask(d)
            if hom[d] and mask is not None:
                grid = np.broadcast_to(mask[None, :], (len(hom[d]), Y.size(d)))
                base_nodes.append(offsets[d] + np.flatnonzero(grid.ravel()))
        nodes = np.concatenate(base_nodes) if base_nodes else np.zeros(0, dtype=np.int64)
        values[c] = _solve(offsets, sizes, edges, nodes)
        homs[c] = hom
    return KanExtension(f, Y, values, homs)


# -- verdicts -------------------------------------------------------------------------------------


@dataclass
class CheckResult:
    ok: bool
    check: str
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


def _compare_classes(q: Quotient, values: dict, expected_codes, name: str) -> CheckResult:
    """``values[block]`` gives the closed-form code of every element; test bijectivity."""
    lo = np.full(q.count + 1, np.iinfo(np.int64).max, dtype=np.int64)
    hi = np.full(q.count + 1, np.iinfo(np.int64).min, dtype=np.int64)
    for block, v in values.items():
        lab = q.block_labels(block)
        np.minimum.at(lo, lab, v)
        np.maximum.at(hi, lab, v)
    used = lo != np.iinfo(np.int64).max
    if np.any(lo[used] != hi[used]):
        bad = int(np.flatnonzero(used & (lo != hi))[0])
        return CheckResult(False, name, counterexample={"reason": "map not constant on a class", "class": bad})
    codes = lo[used]
    if len(np.unique(codes)) != codes.size:
        return CheckResult(False, name, counterexample={"reason": "two classes share an image"})
    expected = np.unique(np.asarray(list(expected_codes), dtype=np.int64))
    if not np.array_equal(np.sort(codes), expected):
        return CheckResult(
            False, name,
            counterexample={"reason": "image differs from the closed form", "classes": int(codes.size), "expected": int(expected.size)},
        )
    return CheckResult(True, name, details={"classes": int(codes.size)})


def _tuple_codes(rows: list, q: int) -> np.ndarray:
    out = np.zeros_like(rows[0]) if rows else np.zeros(1, dtype=np.int64)
    for i, r in enumerate(rows):
        out = out + r * q**i
    return out


def kan_lemma_check(lemma: str, k: int, l: int | None = None, N: int = 5, cmax: int = 2) -> CheckResult:
    """Compare a Kan extension of power functors with its closed form.

    ``k`` and ``l`` are sizes of finite pointed sets (basepoint included).

    * ``smash``: ``m_*(K^× × L^×) ≅ (K ∧ L)^×``, via ``(γ, k, l) -> γ^*(k ∧ l)``;
    * ``wedge``: ``a_*(K^× × L^×) ≅ (K ∨ L)^×``, via ``(γ, k, l) -> γ^*(k ⊔ l)``;
    * ``diagonal``: ``Δ_*(K^×) ≅ K^× × K^×``, via ``((γ1, γ2), y) -> (γ1^* y, γ2^* y)``.
    """
    if lemma not in ("smash", "wedge", "diagonal"):
        raise CategoryError(f"unknown lemma {lemma!r}")
    if lemma == "diagonal":
        f = diagonal_functor(N, cmax)
        Y = PowerFunctor(f.source, k)
        targets = [(c1, c2) for c1 in range(cmax + 1) for c2 in range(cmax + 1)]
    else:
        if l is None:
            raise CategoryError(f"lemma {lemma!r} needs two pointed sets")
        f = smash_functor(N) if lemma == "smash" else sum_functor(N)
        G = FiniteCategory("gamma", N)
        Y = ExternalProduct(f.source, PowerFunctor(G, k), PowerFunctor(G, l))
        targets = list(range(cmax + 1))
    kan = left_kan(f, Y, targets)
    stats = {}
    for c in targets:
        q = kan.values[c]
        values = {}
        for d in f.source.objects:
            hom = kan.homs[c][d]
            if not hom:
                continue
            values[d] = _closed_form(lemma, k, l, c, d, hom, Y)
        expected = _closed_form_codes(lemma, k, l, c)
        res = _compare_classes(q, values, expected, f"kan_{lemma}")
        if not res:
            res.counterexample = {"target": str(c), **(res.counterexample or {})}
            res.details = {"N": N, "k": k, "l": l}
            return res
        stats[str(c)] = res.details["classes"]
    return CheckResult(True, f"kan_{lemma}", details={"N": N, "k": k, "l": l, "classes": stats})


def _closed_form_codes(lemma, k, l, c) -> range:
    if lemma == "smash":
        return range((1 + (k - 1) * (l - 1)) ** c)
    if lemma == "wedge":
        return range((k + l - 1) ** c)
    return range(k ** c[0] * k ** c[1])


def _closed_form(lemma, k, l, c, d, hom, Y) -> np.ndarray:
    """Closed-form code of every element ``(γ, y)`` of block ``d``, flattened."""
    if lemma == "diagonal":
        n = d
        D = digits(k, n)
        out = []
        for g1, g2 in hom:
            first = [D[:, a - 1] if a else np.zeros(D.shape[0], dtype=np.int64) for a in g1]
            second = [D[:, a - 1] if a else np.zeros(D.shape[0], dtype=np.int64) for a in g2]
            code = _tuple_codes(first, k) if first else np.zeros(D.shape[0], dtype=np.int64)
            code2 = _tuple_codes(second, k) if second else np.zeros(D.shape[0], dtype=np.int64)
            out.append(code + k ** c[0] * code2)
        return np.concatenate(out)
    a, b = d
    Dk, Dl = digits(k, a), digits(l, b)
    codes = np.arange(Y.size(d), dtype=np.int64)
    kk = Dk[codes % (k**a)]
    ll = Dl[codes // (k**a)]
    count = codes.shape[0]
    if lemma == "smash":
        q = 1 + (k - 1) * (l - 1)

        def coord(r):
            if r == 0:
                return np.zeros(count, dtype=np.int64)
            i, j = divmod(r - 1, b)
            x, y = kk[:, i], ll[:, j]
            return np.where((x == 0) | (y == 0), 0, 1 + (x - 1) * (l - 1) + (y - 1))
    else:
        q = k + l - 1

        def coord(r):
            if r == 0:
                return np.zeros(count, dtype=np.int64)
            if r <= a:
                return kk[:, r - 1]
            y = ll[:, r - a - 1]
            return np.where(y == 0, 0, y + k - 1)

    out = []
    for g in hom:
        rows = [coord(r) for r in g]
        out.append(_tuple_codes(rows, q) if rows else np.zeros(count, dtype=np.int64))
    return np.concatenate(out)


def kan_stabilization(lemma: str, k: int, l: int | None, N: int, cmax: int = 2) -> bool:
    """The class counts at ``N`` and ``N + 1`` agree for every target object."""
    def counts(n):
        res = kan_lemma_check(lemma, k, l, n, cmax)
        return res.details.get("classes") if res else None

    a, b = counts(N), counts(N + 1)
    return a is not None and a == b


# -- coends versus word models ----------------------------------------------------------------


def coend_vs_word_check(K, A: CoeffMonoid, N: int, flavor: str = "unital", levels=None, budget: int = 3_000_000) -> CheckResult:
    """Coend of ``K_q`` power functors with ``A`` equals the word model, level by level.

    For each simplicial level ``q`` the coend over the index category of size
    ``N`` is compared with words of support at most ``N``, and stabilization is
    located as the least ``M`` where the coends at ``M`` and ``M + 1`` agree.
    Levels whose coend at the stabilization bound would exceed ``budget``
    elements are skipped and listed in the report.
    """
    from .wordmodel import ZERO, WordModel

    if flavor not in ("unital", "reduced"):
        raise CategoryError("flavor must be unital or reduced")
    levels = range(K.max_dim + 1) if levels is None else levels
    report, skipped = {}, []
    for qd in levels:
        simplices = K.simplices(qd)
        base = K.base_simplex(qd)
        alphabet = [base] + [s for s in simplices if s != base]
        nb = len(alphabet) - 1
        top = max(N, nb + 1)
        size = sum((len(alphabet) * len(A)) ** n for n in range(top + 1))
        if size > budget:
            skipped.append(qd)
            continue
        images = {}
        first = 0 if flavor == "unital" else 1
        for M in range(first, top + 1):
            res = _coend_level(alphabet, A, M, flavor, K, qd, WordModel, ZERO)
            if not res:
                res.counterexample = {"level": qd, "N": M, **(res.counterexample or {})}
                return res
            images[M] = res.details["classes"]
        stable = next((M for M in range(first, top) if images[M] == images[M + 1]), None)
        if stable is None or stable > max(nb, first):
            return CheckResult(False, "coend_vs_word", counterexample={"level": qd, "reason": "no stabilization", "counts": images})
        report[qd] = {"classes_at_N": images[N], "stabilized_at": stable}
    return CheckResult(True, "coend_vs_word", details={"N": N, "levels": report, "skipped_levels": skipped})


def _coend_level(alphabet, A, M, flavor, K, qd, WordModel, ZERO) -> CheckResult:
    kind = "gamma" if flavor == "unital" else "epi"
    cat = FiniteCategory(kind, M)
    Y = PowerFunctor(cat, len(alphabet), 0, "times" if flavor == "unital" else "smash")
    X = MonoidFunctor(cat, A)
    q = coend(Y, X)
    T = np.array(A.table, dtype=np.int64)
    nb = len(alphabet) - 1
    qa = len(A)
    e = A.identity if A.unital else None
    values = {}
    for n in cat.objects:
        ky = digits(len(alphabet), n)
        ax = digits(qa, n)
        shape = (ky.shape[0], ax.shape[0])
        zero = np.zeros(shape, dtype=bool)
        present = [np.zeros(shape, dtype=bool) for _ in range(nb)]
        acc = [np.zeros(shape, dtype=np.int64) for _ in range(nb)]
        for i in range(n):
            ks = ky[:, i][:, None]
            av = np.broadcast_to(ax[:, i][None, :], shape)
            if flavor == "reduced":
                zero |= np.broadcast_to(ks == 0, shape)
            for s in range(nb):
                hit = np.broadcast_to(ks == s + 1, shape)
                merged = np.where(present[s], T[acc[s], av], av)
                acc[s] = np.where(hit, merged, acc[s])
                present[s] |= hit
        code = np.zeros(shape, dtype=np.int64)
        for s in range(nb):
            val = np.where(present[s], acc[s], -1)
            if e is not None:
                val = np.where(val == e, -1, val)
            if flavor == "reduced":
                zero |= val == A.basepoint
            code = code + (val + 1) * (qa + 1) ** s
        if flavor == "reduced":
            zero |= np.any(ax == A.basepoint, axis=1)[None, :]
            code = np.where(zero, -1, code)
        values[n] = code.ravel()
    W = WordModel(K, A, M, flavor)
    position = {s: i for i, s in enumerate(alphabet[1:])}
    expected = []
    for w in W.level(qd):
        if w == ZERO:
            expected.append(-1)
            continue
        c = 0
        for s, a in w:
            c += (a + 1) * (qa + 1) ** position[s]
        expected.append(c)
    return _compare_classes(q, values, expected, "coend_vs_word")


# -- further structural checks --------------------------------------------------------------


def yoneda_check(X: FiniteFunctor, n: int) -> CheckResult:
    """``coend(Γ(-, n), X) ≅ X(n)`` via ``x -> [id_n, x]``."""
    cat = X.cat
    Y = PowerFunctor(cat, n + 1, 0, "times")
    q = coend(Y, X)
    ident = sum((i + 1) * (n + 1) ** i for i in range(n))
    images = q.block_labels(n).reshape(Y.size(n), X.size(n))[ident]
    mask = X.base_mask(n)
    nonbase = images[~mask] if mask is not None else images
    ok = len(np.unique(nonbase)) == nonbase.size and nonbase.size == q.nonbase_count
    if mask is not None and np.any(mask):
        ok = ok and np.all(images[mask] == q.base_class) and q.base_class not in set(nonbase.tolist())
    return CheckResult(bool(ok), "yoneda", details={"n": n, "classes": q.count})


def product_decomposition_check(k: int, A: CoeffMonoid, B: CoeffMonoid, N: int = 3) -> CheckResult:
    """``coend(K^×, A^× × B^×) ≅ coend(K^×, A^×) × coend(K^×, B^×)``."""
    cat = FiniteCategory("gamma", N)
    Y = PowerFunctor(cat, k)
    XA, XB = MonoidFunctor(cat, A), MonoidFunctor(cat, B)
    XAB = ProductFunctor(XA, XB)
    qa, qb, qab = coend(Y, XA), coend(Y, XB), coend(Y, XAB)
    values = {}
    for n in cat.objects:
        la = qa.block_labels(n).reshape(Y.size(n), XA.size(n))
        lb = qb.block_labels(n).reshape(Y.size(n), XB.size(n))
        codes = np.arange(XAB.size(n), dtype=np.int64)
        ia, ib = codes % XA.size(n), codes // XA.size(n)
        values[n] = (la[:, ia] + (qa.count) * lb[:, ib]).ravel()
    expected = [a + qa.count * b for a in range(qa.count) for b in range(qb.count)]
    res = _compare_classes(qab, values, expected, "product_decomposition")
    res.details.update({"k": k, "A": A.name, "B": B.name, "N": N})
    return res


def iterated_coend_check(k: int, l: int, A: CoeffMonoid, N: int = 4) -> CheckResult:
    """``(K^× × L^×) ⊗ m^*X ≅ (K ∧ L)^× ⊗ X`` for ``X = A^×``.

    The left side is a coend over the pairs ``(a, b)`` with ``ab <= N``; the
    canonical map sends ``((a, b), (k, l), x)`` to ``[ab, k ∧ l, x]``.
    """
    f = smash_functor(N)
    G = FiniteCategory("gamma", N)
    X = MonoidFunctor(G, A)
    Y = ExternalProduct(f.source, PowerFunctor(G, k), PowerFunctor(G, l))
    left = coend(Y, Pullback(f.source, X, f.obj, f.mor))
    kl = 1 + (k - 1) * (l - 1)
    right = coend(PowerFunctor(G, kl), X)
    values = {}
    for d in f.source.objects:
        ab = f.obj(d)
        y_codes = _closed_form("smash", k, l, ab, d, [FiniteCategory.identity(ab)], Y)
        lab = right.block_labels(ab).reshape(kl**ab, X.size(ab))
        values[d] = lab[y_codes].ravel()
    res = _compare_classes(left, values, range(right.count), "iterated_coend")
    res.details.update({"k": k, "l": l, "A": A.name, "N": N})
    return res


# -- adjunction by counting natural transformations ------------------------------------------------


def count_transformations(F: FiniteFunctor, G: FiniteFunctor, objects, gens) -> int:
    """Number of base-preserving natural transformations ``F -> G`` (contravariant).

    Backtracking: pick an unassigned element in the largest object, try every
    value, and propagate along generating morphisms.
    """
    objs = list(objects)
    down: dict = {}
    for delta, s, t in gens:
        if s in objs and t in objs:
            down.setdefault(t, []).append((delta, s))
    elems = [(x, i) for x in sorted(objs, key=_weight, reverse=True) for i in range(F.size(x))]
    fb = {x: F.base_mask(x) for x in objs}
    gb = {x: G.base_mask(x) for x in objs}
    targets = {x: np.arange(G.size(x)) for x in objs}

    def propagate(assign: dict, x, i, v) -> bool:
        stack = [(x, i, v)]
        while stack:
            x, i, v = stack.pop()
            if (x, i) in assign:
                if assign[(x, i)] != v:
                    return False
                continue
            if fb[x] is not None and fb[x][i] and not gb[x][v]:
                return False
            assign[(x, i)] = v
            for delta, s in down.get(x, ()):
                stack.append((s, int(F.table(delta, s, x)[i]), int(G.table(delta, s, x)[v])))
        return True

    start: dict = {}
    for x in objs:
        if fb[x] is not None:
            bases = np.flatnonzero(gb[x])
            for i in np.flatnonzero(fb[x]):
                if not propagate(start, x, int(i), int(bases[0])):
                    return 0

    def search(assign: dict, pos: int) -> int:
        while pos < len(elems) and elems[pos] in assign:
            pos += 1
        if pos == len(elems):
            return 1
        x, i = elems[pos]
        total = 0
        for v in targets[x]:
            trial = dict(assign)
            if propagate(trial, x, i, int(v)):
                total += search(trial, pos + 1)
        return total

    return search(start, 0)


def _weight(x) -> int:
    return sum(x) if isinstance(x, tuple) else x


class _KanFunctor(FiniteFunctor):
    """A computed Kan extension as a contravariant functor on its target objects."""

    variance = "contra"

    def __init__(self, cat, kan: KanExtension, comp):
        super().__init__(cat)
        self.kan, self.comp = kan, comp
        self._reps = {}
        for c, q in kan.values.items():
            reps = {}
            for d in kan.homs[c]:
                if not kan.homs[c][d]:
                    continue
                lab = q.block_labels(d)
                ny = kan.Y.size(d)
                for idx in range(lab.size):
                    cl = int(lab[idx])
                    if cl not in reps:
                        reps[cl] = (d, idx // ny, idx % ny)
            order = sorted(reps)
            self._reps[c] = (order, reps)

    def size(self, c) -> int:
        return len(self._reps[c][0])

    def _table(self, eps, c2, c):
        order, reps = self._reps[c]
        order2 = {cl: i for i, cl in enumerate(self._reps[c2][0])}
        out = []
        for cl in order:
            d, gi, y = reps[cl]
            gamma = self.kan.homs[c][d][gi]
            out.append(order2[self.kan.element(c2, d, self.comp(gamma, eps), y)])
        return np.array(out, dtype=np.int64)

    def base_mask(self, c):
        order, _ = self._reps[c]
        bc = self.kan.values[c].base_class
        return np.array([cl == bc for cl in order], dtype=bool)


def adjunction_check(which: str, k: int, l: int, z: int, N: int = 2) -> CheckResult:
    """``|Hom(f_* Y, Z)| = |Hom(Y, f^* Z)|`` with ``Y`` a power functor and ``Z = M^×``.

    ``f`` is the block sum (``"a"``) or lexicographic smash (``"m"``) on a
    bounded part of ``Γ × Γ``, with ``Y = K^× × L^×``.  Both sides are counted
    by brute force.
    """
    f = sum_functor(N) if which == "a" else smash_functor(N)
    G = FiniteCategory("gamma", N)
    Y = ExternalProduct(f.source, PowerFunctor(G, k), PowerFunctor(G, l))
    targets = list(range(N + 1))
    kan = left_kan(f, Y, targets)
    FY = _KanFunctor(G, kan, compose)
    Z = PowerFunctor(G, z)
    lhs = count_transformations(FY, Z, targets, G.generators())
    pulled = Pullback(f.source, Z, f.obj, f.mor)
    rhs = count_transformations(Y, pulled, f.source.objects, f.source.generators())
    return CheckResult(lhs == rhs, f"adjunction_{which}", details={"lhs": lhs, "rhs": rhs, "k": k, "l": l, "z": z, "N": N})
