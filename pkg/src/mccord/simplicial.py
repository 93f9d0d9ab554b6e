"""Finite, dimension-truncated simplicial sets.

A simplicial set is stored by its nondegenerate cells and their faces.  Every
simplex, degenerate or not, is addressed by a :class:`Simplex`: a nondegenerate
cell together with a strictly decreasing degeneracy word, i.e. the
Eilenberg-Zilber normal form ``s_{i_1} ... s_{i_r} x`` with ``i_1 > ... > i_r``.

Internally a degeneracy word on an ``n``-simplex over a ``k``-cell is the same
thing as a monotone surjection ``[n] -> [k]``; the word lists the positions
``j`` where the surjection repeats (``sigma(j) == sigma(j + 1)``).  Face and
degeneracy operators are computed by composing with coface/codegeneracy maps
and re-factoring, so the simplicial identities hold by construction as soon as
the face data of the nondegenerate cells satisfies ``d_i d_j = d_{j-1} d_i``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence


class SimplicialError(ValueError):
    """Raised for malformed simplicial data or invalid constructions."""


class TruncationError(SimplicialError):
    pass


class Simplex(NamedTuple):
    """A simplex in normal form: nondegenerate ``cell`` with degeneracies ``degen``."""

    cell: Hashable
    degen: tuple
    dim: int

    def __repr__(self) -> str:
        if not self.degen:
            return f"<{self.cell!r}>"
        word = "".join(f"s{i}" for i in self.degen)
        return f"<{word} {self.cell!r}>"


# -- monotone maps -----------------------------------------------------------

def word_to_surjection(word: Sequence[int], n: int) -> tuple:
    """Surjection ``[n] -> [n - len(word)]`` repeating at the positions in ``word``."""
    rep = set(word)
    sigma = [0] * (n + 1)
    for j in range(1, n + 1):
        sigma[j] = sigma[j - 1] if (j - 1) in rep else sigma[j - 1] + 1
    return tuple(sigma)


def surjection_to_word(sigma: Sequence[int]) -> tuple:
    return tuple(j for j in range(len(sigma) - 2, -1, -1) if sigma[j] == sigma[j + 1])


def compose_degeneracies(outer: Sequence[int], inner: Sequence[int], n: int) -> tuple:
    """Normal form of ``s_outer s_inner x`` for an ``n``-simplex result.

    ``inner`` is a degeneracy word landing in dimension ``n - len(outer)``.
    """
    mid = n - len(outer)
    tau = word_to_surjection(inner, mid)
    eta = word_to_surjection(outer, n)
    return surjection_to_word([tau[eta[j]] for j in range(n + 1)])


def degenerate_at(word: Sequence[int], j: int) -> bool:
    return j in word


# -- the simplicial set --------------------------------------------------------

@dataclass(eq=False)
class SimplicialSet:
    """Nondegenerate cells per dimension plus face references.

    ``cells[n]`` lists the nondegenerate ``n``-cells; ``faces[c]`` holds the
    ``n + 1`` faces of an ``n``-cell as :class:`Simplex` references (empty for
    vertices).  Everything above ``max_dim`` is discarded.
    """

    max_dim: int
    cells: list
    faces: dict
    basepoint: Hashable | None = None
    name: str = ""
    _dim: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.max_dim < 0:
            raise TruncationError("max_dim must be non-negative")
        cells = [list(c) for c in self.cells[: self.max_dim + 1]]
        while len(cells) < self.max_dim + 1:
            cells.append([])
        self.cells = cells
        self._dim = {}
        for n, level in enumerate(self.cells):
            for c in level:
                if c in self._dim:
                    raise SimplicialError(f"duplicate cell id {c!r}")
                self._dim[c] = n
        self.faces = {c: tuple(self.faces.get(c, ())) for c in self._dim}
        if self.basepoint is not None and self._dim.get(self.basepoint) != 0:
            raise SimplicialError(f"basepoint {self.basepoint!r} is not a vertex")
        self._check_face_refs()

    # structure ------------------------------------------------------------

    def dim_of(self, cell) -> int:
        return self._dim[cell]

    def __contains__(self, cell) -> bool:
        return cell in self._dim

    @property
    def is_based(self) -> bool:
        return self.basepoint is not None

    def census(self) -> tuple:
        """Number of nondegenerate cells in each dimension ``0..max_dim``."""
        return tuple(len(level) for level in self.cells)

    def all_cells(self) -> Iterator:
        for level in self.cells:
            yield from level

    def _check_face_refs(self):
        for c, n in self._dim.items():
            fs = self.faces[c]
            if n == 0:
                if fs:
                    raise SimplicialError(f"vertex {c!r} has faces")
                continue
            if len(fs) != n + 1:
                raise SimplicialError(f"cell {c!r} of dim {n} needs {n + 1} faces, got {len(fs)}")
            for f in fs:
                if f.cell not in self._dim:
                    raise SimplicialError(f"face {f!r} of {c!r} references an unknown cell")
                if f.dim != n - 1 or self._dim[f.cell] + len(f.degen) != n - 1:
                    raise SimplicialError(f"face {f!r} of {c!r} has the wrong dimension")
                w = f.degen
                if any(w[i] <= w[i + 1] for i in range(len(w) - 1)) or any(
                    j < 0 or j >= n - 1 for j in w
                ):
                    raise SimplicialError(f"face {f!r} of {c!r} has an invalid degeneracy word")

    # simplices --------------------------------------------------------------

    def simplex(self, cell, degen: Sequence[int] = ()) -> Simplex:
        return Simplex(cell, tuple(degen), self._dim[cell] + len(degen))

    def nondegenerate(self, n: int) -> list:
        return [Simplex(c, (), n) for c in self.cells[n]] if n <= self.max_dim else []

    def simplices(self, n: int) -> list:
        """All ``n``-simplices, degenerate ones included, in a fixed order."""
        if n > self.max_dim:
            raise TruncationError(f"level {n} exceeds max_dim {self.max_dim}")
        out = []
        for k in range(n + 1):
            words = [tuple(sorted(p, reverse=True)) for p in itertools.combinations(range(n), n - k)]
            for c in self.cells[k]:
                out.extend(Simplex(c, w, n) for w in words)
        return out

    def base_simplex(self, n: int) -> Simplex:
        if self.basepoint is None:
            raise SimplicialError("simplicial set is not based")
        return Simplex(self.basepoint, tuple(range(n - 1, -1, -1)), n)

    def is_base(self, s: Simplex) -> bool:
        return self.basepoint is not None and s.cell == self.basepoint

    def face(self, s: Simplex, i: int) -> Simplex:
        n = s.dim
        if not 0 <= i <= n or n == 0:
            raise SimplicialError(f"no face d_{i} on a {n}-simplex")
        sigma = word_to_surjection(s.degen, n)
        tau = [sigma[j if j < i else j + 1] for j in range(n)]
        k = n - len(s.degen)
        image = set(tau)
        if len(image) == k + 1:
            return Simplex(s.cell, surjection_to_word(tau), n - 1)
        (m,) = set(range(k + 1)) - image
        eta = [t - 1 if t > m else t for t in tau]
        f = self.faces[s.cell][m]
        rho = word_to_surjection(f.degen, k - 1)
        return Simplex(f.cell, surjection_to_word([rho[e] for e in eta]), n - 1)

    def degeneracy(self, s: Simplex, i: int) -> Simplex:
        n = s.dim
        if not 0 <= i <= n:
            raise SimplicialError(f"no degeneracy s_{i} on a {n}-simplex")
        if n + 1 > self.max_dim:
            raise TruncationError(f"s_{i} leaves the truncation at dimension {n + 1}")
        sigma = word_to_surjection(s.degen, n)
        new = [sigma[j if j <= i else j - 1] for j in range(n + 2)]
        return Simplex(s.cell, surjection_to_word(new), n + 1)

    # validation -------------------------------------------------------------

    def check_identities(self, exhaustive: bool = True) -> None:
        """Verify the simplicial identities; raises :class:`SimplicialError`.

        With ``exhaustive`` every identity is evaluated on every simplex up to
        ``max_dim``; otherwise only ``d_i d_j = d_{j-1} d_i`` on nondegenerate cells.
        """
        for n in range(2, self.max_dim + 1):
            pool = self.simplices(n) if exhaustive else self.nondegenerate(n)
            for x in pool:
                for j in range(n + 1):
                    for i in range(j):
                        a = self.face(self.face(x, j), i)
                        b = self.face(self.face(x, i), j - 1)
                        if a != b:
                            raise SimplicialError(f"d{i}d{j} != d{j - 1}d{i} on {x!r}")
        if not exhaustive:
            return
        for n in range(self.max_dim):
            for x in self.simplices(n):
                for i in range(n + 1):
                    sx = self.degeneracy(x, i)
                    for j in range(n + 2):
                        if j in (i, i + 1):
                            want = x
                        elif j < i:
                            want = self.degeneracy(self.face(x, j), i - 1)
                        else:
                            want = self.degeneracy(self.face(x, j - 1), i)
                        if self.face(sx, j) != want:
                            raise SimplicialError(f"d{j}s{i} identity fails on {x!r}")
                if n + 2 > self.max_dim:
                    continue
                for j in range(n + 1):
                    for i in range(j + 1):
                        lhs = self.degeneracy(self.degeneracy(x, j), i)
                        rhs = self.degeneracy(self.degeneracy(x, i), j + 1)
                        if lhs != rhs:
                            raise SimplicialError(f"s{i}s{j} != s{j + 1}s{i} on {x!r}")

    # equality / serialization -----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialSet):
            return NotImplemented
        return (
            self.max_dim == other.max_dim
            and self.cells == other.cells
            and self.faces == other.faces
            and self.basepoint == other.basepoint
        )

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"SimplicialSet{label}(max_dim={self.max_dim}, census={self.census()})"

    def relabeled(self, labels: dict | None = None) -> "SimplicialSet":
        """Copy with cells renamed; by default to ``"0", "1", ...`` in storage order."""
        if labels is None:
            labels = {c: str(i) for i, c in enumerate(self.all_cells())}
        faces = {
            labels[c]: [Simplex(labels[f.cell], f.degen, f.dim) for f in fs]
            for c, fs in self.faces.items()
        }
        return SimplicialSet(
            self.max_dim,
            [[labels[c] for c in level] for level in self.cells],
            faces,
            labels[self.basepoint] if self.basepoint is not None else None,
            self.name,
        )

    def to_json(self) -> str:
        X = self if all(isinstance(c, str) for c in self._dim) else self.relabeled()
        payload = {
            "max_dim": X.max_dim,
            "cells": X.cells,
            "faces": {
                c: [[f.cell, list(f.degen)] for f in X.faces[c]]
                for c in X.all_cells()
                if X.faces[c]
            },
            "basepoint": X.basepoint,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "SimplicialSet":
        data = json.loads(text)
        cells = [[str(c) for c in level] for level in data["cells"]]
        dims = {c: n for n, level in enumerate(cells) for c in level}
        faces = {}
        for c, refs in data.get("faces", {}).items():
            if c not in dims:
                raise SimplicialError(f"faces given for unknown cell {c!r}")
            faces[c] = []
            for target, word in refs:
                target = str(target)
                if target not in dims:
                    raise SimplicialError(f"face of {c!r} references unknown cell {target!r}")
                faces[c].append(Simplex(target, tuple(word), dims[target] + len(word)))
        bp = data.get("basepoint")
        return cls(data["max_dim"], cells, faces, None if bp is None else str(bp))


# -- generic conversion from levelwise data -----------------------------------

def normal_form(x, n: int, face: Callable, degen: Callable) -> tuple:
    """Eilenberg-Zilber normal form ``(y, word, k)`` of ``x`` in a levelwise object.

    ``face(x, n, i)`` and ``degen(x, n, i)`` are the operators on level ``n``.
    The criterion ``x == s_j d_j x`` detects degeneracy along ``j``.
    """
    if n == 0:
        return x, (), 0
    for j in range(n - 1, -1, -1):
        y = face(x, n, j)
        if degen(y, n - 1, j) == x:
            z, word, k = normal_form(y, n - 1, face, degen)
            return z, compose_degeneracies((j,), word, n), k
    return x, (), n


def from_levels(
    levels: Callable[[int], Iterable],
    face: Callable,
    degen: Callable,
    max_dim: int,
    basepoint=None,
    name: str = "",
) -> SimplicialSet:
    """Build a :class:`SimplicialSet` from explicit level sets and operators.

    ``basepoint`` is the vertex (a level-0 element) to use as basepoint.  Cell
    ids are the level elements themselves.
    """
    cells: list = []
    faces: dict = {}
    for n in range(max_dim + 1):
        level_cells = []
        for x in levels(n):
            if n > 0 and any(degen(face(x, n, j), n - 1, j) == x for j in range(n)):
                continue
            level_cells.append(x)
            if n > 0:
                refs = []
                for i in range(n + 1):
                    y, word, k = normal_form(face(x, n, i), n - 1, face, degen)
                    refs.append(Simplex(y, word, n - 1))
                faces[x] = refs
        cells.append(level_cells)
    return SimplicialSet(max_dim, cells, faces, basepoint, name)


# -- constructors --------------------------------------------------------------

def point(N: int) -> SimplicialSet:
    return SimplicialSet(N, [["*"]], {}, "*", "pt")


def build_sphere(n: int, N: int) -> SimplicialSet:
    """Minimal based model of ``S^n``: a basepoint and one ``n``-cell, truncated at ``N``."""
    if n < 0:
        raise SimplicialError("sphere dimension must be non-negative")
    if n > N:
        raise TruncationError(f"S^{n} does not fit in truncation {N}")
    if n == 0:
        return SimplicialSet(N, [["*", "x"]], {}, "*", "S0")
    cells = [["*"]] + [[] for _ in range(n - 1)] + [["e"]]
    base = Simplex("*", tuple(range(n - 2, -1, -1)), n - 1)
    return SimplicialSet(N, cells, {"e": [base] * (n + 1)}, "*", f"S{n}")


def discrete(points: Sequence, basepoint, N: int) -> SimplicialSet:
    """A pointed set viewed as a constant simplicial set."""
    if basepoint is not None and basepoint not in points:
        raise SimplicialError("basepoint must be one of the points")
    return SimplicialSet(N, [list(points)], {}, basepoint)


def add_disjoint_basepoint(L: SimplicialSet, base="+") -> SimplicialSet:
    """``L_+``: an unbased simplicial set with a disjoint basepoint adjoined."""
    if L.is_based:
        raise SimplicialError("add_disjoint_basepoint expects an unbased simplicial set")
    if base in L:
        raise SimplicialError(f"basepoint id {base!r} already used")
    cells = [list(level) for level in L.cells]
    cells[0] = [base] + cells[0]
    return SimplicialSet(L.max_dim, cells, dict(L.faces), base, f"{L.name}+")


def forget_basepoint(K: SimplicialSet) -> SimplicialSet:
    return SimplicialSet(K.max_dim, K.cells, K.faces, None, K.name)


def wedge(K: SimplicialSet, L: SimplicialSet) -> SimplicialSet:
    """``K v L`` with cell ids ``(0, k)`` and ``(1, l)``; the basepoint is ``(0, *_K)``."""
    if not (K.is_based and L.is_based):
        raise SimplicialError("wedge needs based inputs")
    N = min(K.max_dim, L.max_dim)
    base = (0, K.basepoint)

    def tag(t, c):
        if t == 1 and c == L.basepoint:
            return base
        return (t, c)

    cells = []
    faces = {}
    for n in range(N + 1):
        level = [tag(0, c) for c in K.cells[n]]
        level += [tag(1, c) for c in L.cells[n] if c != L.basepoint]
        cells.append(level)
        for t, X in ((0, K), (1, L)):
            for c in X.cells[n]:
                if n and X.faces[c]:
                    faces[tag(t, c)] = [Simplex(tag(t, f.cell), f.degen, f.dim) for f in X.faces[c]]
    return SimplicialSet(N, cells, faces, base, f"({K.name}v{L.name})")


def _common_repeats(simplices: Sequence[Simplex]) -> set:
    common = set(simplices[0].degen)
    for s in simplices[1:]:
        common &= set(s.degen)
    return common


def _strip(s: Simplex, positions: set) -> Simplex:
    """Remove common degeneracies: ``s = s_positions s'``; returns ``s'``."""
    n = s.dim
    sigma = word_to_surjection(s.degen, n)
    keep = [j for j in range(n + 1) if (j - 1) not in positions]
    # keep one representative per collapsed block of the common positions
    reduced = [sigma[j] for j in keep]
    return Simplex(s.cell, surjection_to_word(reduced), n - len(positions))


def tuple_face(X_list: Sequence[SimplicialSet], cell: tuple, i: int) -> Simplex:
    """Face of a nondegenerate tuple cell in a product, in normal form."""
    faces = tuple(X.face(s, i) for X, s in zip(X_list, cell))
    return normalize_tuple(faces)


def normalize_tuple(simplices: Sequence[Simplex]) -> Simplex:
    n = simplices[0].dim
    common = _common_repeats(simplices)
    if not common:
        return Simplex(tuple(simplices), (), n)
    stripped = tuple(_strip(s, common) for s in simplices)
    return Simplex(stripped, tuple(sorted(common, reverse=True)), n)


def expand(ref: Simplex) -> tuple:
    """Coordinates ``(s_w a_1, ..., s_w a_d)`` of a simplex over a tuple cell."""
    cell, word, n = ref
    out = []
    for s in cell:
        out.append(Simplex(s.cell, compose_degeneracies(word, s.degen, n), n))
    return tuple(out)


def _tuple_cells(factors: Sequence[SimplicialSet], n: int, keep: Callable[[tuple], bool]) -> list:
    pools = [X.simplices(n) for X in factors]
    out = []
    for combo in itertools.product(*pools):
        if n and _common_repeats(combo):
            continue
        if keep(combo):
            out.append(tuple(combo))
    return out


def _tuple_complex(
    factors: Sequence[SimplicialSet],
    keep: Callable[[tuple], bool],
    collapse: Callable[[tuple], bool] | None,
    base,
    name: str,
) -> SimplicialSet:
    """Product-type complex on tuples; cells failing ``collapse`` go to ``base``."""
    N = min(X.max_dim for X in factors)
    cells = []
    faces = {}
    for n in range(N + 1):
        level = _tuple_cells(factors, n, keep)
        cells.append(([base] if (n == 0 and base is not None) else []) + level)
        if n == 0:
            continue
        for c in level:
            refs = []
            for i in range(n + 1):
                f = tuple_face(factors, c, i)
                if collapse is not None and collapse(expand(f)):
                    refs.append(Simplex(base, tuple(range(n - 2, -1, -1)), n - 1))
                else:
                    refs.append(f)
            faces[c] = refs
    return SimplicialSet(N, cells, faces, base, name)


def product(K: SimplicialSet, L: SimplicialSet) -> SimplicialSet:
    """Categorical product; cells are pairs of simplices with disjoint degeneracies.

    Truncation is ``min(K.max_dim, L.max_dim)``.  The product is based at the
    pair of basepoints when both inputs are based.
    """
    N = min(K.max_dim, L.max_dim)
    X = _tuple_complex((K, L), lambda c: True, None, None, f"({K.name}x{L.name})")
    if K.is_based and L.is_based:
        bp = (Simplex(K.basepoint, (), 0), Simplex(L.basepoint, (), 0))
        X = SimplicialSet(N, X.cells, X.faces, bp, X.name)
    return X


def smash(K: SimplicialSet, L: SimplicialSet) -> SimplicialSet:
    """``K ^ L = (K x L) / (K v L)``; basepoint ``"*"``."""
    if not (K.is_based and L.is_based):
        raise SimplicialError("smash needs based inputs")

    def off_wedge(c):
        return not K.is_base(c[0]) and not L.is_base(c[1])

    def collapse(c):
        return K.is_base(c[0]) or L.is_base(c[1])

    return _tuple_complex((K, L), off_wedge, collapse, "*", f"({K.name}^{L.name})")


def smash_power(K: SimplicialSet, d: int) -> SimplicialSet:
    if d < 1:
        raise SimplicialError("smash power needs d >= 1")

    def off_base(c):
        return not any(K.is_base(s) for s in c)

    def collapse(c):
        return any(K.is_base(s) for s in c)

    return _tuple_complex((K,) * d, off_base, collapse, "*", f"{K.name}^{d}")


def _has_repeat(c) -> bool:
    return len(set(c)) < len(c)


def fat_diagonal_quotient(K: SimplicialSet, d: int):
    """``K^(d)``: the ``d``-fold smash power with the fat diagonal collapsed.

    Returns ``(X, action)`` where ``action`` is the coordinate-permuting
    :class:`GroupAction` of the symmetric group.  ``d = 0`` gives ``S^0`` with
    the trivial action, by convention.
    """
    if not K.is_based:
        raise SimplicialError("fat_diagonal_quotient needs a based input")
    if d < 0:
        raise SimplicialError("d must be non-negative")
    if d == 0:
        S0 = build_sphere(0, K.max_dim)
        return S0, GroupAction.trivial(S0, 0)

    def keep(c):
        return not any(K.is_base(s) for s in c) and not _has_repeat(c)

    def collapse(c):
        return any(K.is_base(s) for s in c) or _has_repeat(c)

    X = _tuple_complex((K,) * d, keep, collapse, "*", f"{K.name}^({d})")
    return X, GroupAction.coordinate_permutations(X, d)


# -- group actions ---------------------------------------------------------------

def compose_perm(g: tuple, h: tuple) -> tuple:
    """``g o h`` as permutations of ``range(d)``."""
    return tuple(g[h[i]] for i in range(len(h)))


def permute(g: tuple, coords: tuple) -> tuple:
    """Left action: the coordinate in slot ``i`` moves to slot ``g[i]``."""
    out = [None] * len(coords)
    for i, c in enumerate(coords):
        out[g[i]] = c
    return tuple(out)


def symmetric_group_generators(d: int) -> list:
    gens = []
    for i in range(d - 1):
        p = list(range(d))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(tuple(p))
    return gens


def group_closure(generators: Sequence[tuple], degree: int) -> list:
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = compose_perm(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen)


@dataclass
class GroupAction:
    """A permutation group acting on the nondegenerate cells of ``space``.

    ``act(g, cell)`` must send nondegenerate cells to nondegenerate cells; it
    is extended to all simplices by keeping the degeneracy word.
    """

    space: SimplicialSet
    degree: int
    generators: list
    act_cell: Callable

    @classmethod
    def trivial(cls, X: SimplicialSet, degree: int = 1) -> "GroupAction":
        return cls(X, degree, [], lambda g, c: c)

    @classmethod
    def coordinate_permutations(cls, X: SimplicialSet, d: int) -> "GroupAction":
        def act(g, c):
            if c == X.basepoint:
                return c
            return permute(g, c)

        return cls(X, d, symmetric_group_generators(d), act)

    def elements(self) -> list:
        return group_closure(self.generators, self.degree)

    def act(self, g, s: Simplex) -> Simplex:
        return Simplex(self.act_cell(g, s.cell), s.degen, s.dim)

    def check(self) -> None:
        X = self.space
        identity = tuple(range(self.degree))
        for c in X.all_cells():
            if self.act_cell(identity, c) != c:
                raise SimplicialError(f"identity moves {c!r}")
        elements = self.elements()
        for g in self.generators:
            for h in elements:
                gh = compose_perm(g, h)
                for c in X.all_cells():
                    if self.act_cell(g, self.act_cell(h, c)) != self.act_cell(gh, c):
                        raise SimplicialError("action violates the composition law")
        for g in self.generators:
            for c in X.all_cells():
                image = self.act_cell(g, c)
                if image not in X or X.dim_of(image) != X.dim_of(c):
                    raise SimplicialError(f"action sends {c!r} outside the nondegenerate cells")
                for i, f in enumerate(X.faces[c]):
                    if self.act(g, f) != X.faces[image][i]:
                        raise SimplicialError(f"action does not commute with d{i} on {c!r}")

    def stabilizer(self, cell) -> list:
        return [g for g in self.elements() if self.act_cell(g, cell) == cell]

    def is_free_off_basepoint(self) -> bool:
        identity = tuple(range(self.degree))
        for c in self.space.all_cells():
            if c == self.space.basepoint:
                continue
            if self.stabilizer(c) != [identity]:
                return False
        return True


def diagonal_action(X: SimplicialSet, first: GroupAction, second: GroupAction) -> GroupAction:
    """Action on a smash/product of two spaces acting factorwise on tuple cells."""
    if first.degree != second.degree:
        raise SimplicialError("actions must be of the same group")

    def act(g, c):
        if c == X.basepoint:
            return c
        a, b = c
        return (first.act(g, a), second.act(g, b))

    return GroupAction(X, first.degree, list(first.generators), act)


def discrete_power_action(D: SimplicialSet, d: int) -> GroupAction:
    """Coordinate permutations on a discrete set of ``d``-tuples."""

    def act(g, c):
        if c == D.basepoint:
            return c
        return permute(g, c)

    return GroupAction(D, d, symmetric_group_generators(d), act)


def orbit_quotient(X: SimplicialSet, G: GroupAction) -> SimplicialSet:
    """``X / G``: orbits of nondegenerate cells, faces induced.

    Cell ids are orbits as frozensets; the orbit of the basepoint is the basepoint.
    """
    G.check()
    elements = G.elements()
    orbit_of = {}
    cells = []
    for level in X.cells:
        out = []
        for c in level:
            if c in orbit_of:
                continue
            orb = frozenset(G.act_cell(g, c) for g in elements)
            for m in orb:
                orbit_of[m] = orb
            out.append(orb)
        cells.append(out)
    faces = {}
    for level in cells:
        for orb in level:
            rep = next(iter(orb))
            if X.faces[rep]:
                faces[orb] = [Simplex(orbit_of[f.cell], f.degen, f.dim) for f in X.faces[rep]]
    bp = orbit_of[X.basepoint] if X.is_based else None
    return SimplicialSet(X.max_dim, cells, faces, bp, f"{X.name}/G")


def quotient(X: SimplicialSet, sub: set, base="*") -> SimplicialSet:
    """Collapse a subcomplex (given by nondegenerate cell ids) to a point."""
    sub = set(sub)
    if X.is_based:
        sub.add(X.basepoint)
    for c in sub:
        for f in X.faces.get(c, ()):
            if f.cell not in sub:
                raise SimplicialError("collapsed cells are not closed under faces")
    cells = [[base]] + [[] for _ in range(X.max_dim)]
    for n, level in enumerate(X.cells):
        cells[n] += [c for c in level if c not in sub]
    faces = {}
    for level in cells[1:]:
        for c in level:
            refs = []
            for f in X.faces[c]:
                if f.cell in sub:
                    refs.append(Simplex(base, tuple(range(f.dim - 1, -1, -1)), f.dim))
                else:
                    refs.append(f)
            faces[c] = refs
    return SimplicialSet(X.max_dim, cells, faces, base, f"{X.name}/A")


# -- cones and suspension ----------------------------------------------------------

def unreduced_suspension(X: SimplicialSet, north="N", south="S") -> SimplicialSet:
    """Two cones on ``X`` glued along ``X``; based at the north cone point.

    The cone on an ``n``-cell ``x`` is the ``(n+1)``-cell ``(pole, x)`` whose
    last face is ``x`` and whose other faces are cones on the faces of ``x``.
    Truncation is ``X.max_dim + 1``.
    """
    N = X.max_dim + 1
    cells = [[north, south] + list(X.cells[0])]
    for n in range(1, N + 1):
        level = list(X.cells[n]) if n <= X.max_dim else []
        for pole in (north, south):
            level += [(pole, c) for c in X.cells[n - 1]]
        cells.append(level)
    faces = dict(X.faces)

    def cone_ref(pole, s: Simplex) -> Simplex:
        return Simplex((pole, s.cell), s.degen, s.dim + 1)

    for pole in (north, south):
        for n in range(X.max_dim + 1):
            for c in X.cells[n]:
                if n == 0:
                    faces[(pole, c)] = [Simplex(pole, (), 0), Simplex(c, (), 0)]
                else:
                    x = Simplex(c, (), n)
                    refs = [cone_ref(pole, X.face(x, i)) for i in range(n + 1)]
                    faces[(pole, c)] = refs + [x]
    return SimplicialSet(N, cells, faces, north, f"S({X.name})")


# -- isomorphism ---------------------------------------------------------------------

def find_isomorphism(X: SimplicialSet, Y: SimplicialSet) -> dict | None:
    """Search for a cell bijection ``X -> Y`` commuting with all face maps.

    Basepoints must correspond.  Backtracking with face-signature pruning; meant
    for desk-scale inputs.
    """
    if X.max_dim != Y.max_dim or X.census() != Y.census() or X.is_based != Y.is_based:
        return None
    order = list(X.all_cells())
    mapping: dict = {}
    used: set = set()
    if X.is_based:
        mapping[X.basepoint] = Y.basepoint
        used.add(Y.basepoint)

    def image(ref: Simplex) -> Simplex:
        return Simplex(mapping[ref.cell], ref.degen, ref.dim)

    def consistent(c, target) -> bool:
        return all(image(f) == g for f, g in zip(X.faces[c], Y.faces[target]))

    def solve(k: int) -> bool:
        if k == len(order):
            return True
        c = order[k]
        if c in mapping:
            return solve(k + 1)
        n = X.dim_of(c)
        for target in Y.cells[n]:
            if target in used or not consistent(c, target):
                continue
            mapping[c] = target
            used.add(target)
            if solve(k + 1):
                return True
            del mapping[c]
            used.discard(target)
        return False

    return dict(mapping) if solve(0) else None


def euler_characteristic(X: SimplicialSet, reduced: bool = True, top: int | None = None) -> int:
    top = X.max_dim if top is None else top
    total = 0
    for n in range(top + 1):
        count = len(X.cells[n])
        if reduced and n == 0 and X.is_based:
            count -= 1
        total += (-1) ** n * count
    return total
