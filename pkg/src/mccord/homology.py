"""Exact homology: Smith normal form, chain complexes over Z and F_p, and oracles.

Homology of a simplicial set truncated at ``max_dim`` is only reported in
degrees ``<= max_dim - 1``; the top degree lacks its incoming boundary.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .coefmonoid import CoeffMonoid
from .simplicial import SimplicialSet, Simplex


class HomologyError(ValueError):
    pass


# -- Smith normal form -----------------------------------------------------------


@dataclass
class SNFCertificate:
    """Log of elementary unimodular operations turning ``M`` into ``D``.

    Entries are ``(kind, axis, i, j, k)``: ``kind`` is ``"swap"``, ``"add"``
    (line ``j`` += ``k`` * line ``i``) or ``"neg"`` (line ``i`` *= -1), and
    ``axis`` is ``"row"`` or ``"col"``.
    """

    ops: list = field(default_factory=list)

    def replay(self, M: Sequence[Sequence[int]]) -> list:
        A = [list(r) for r in M]
        for kind, axis, i, j, k in self.ops:
            _apply_op(A, kind, axis, i, j, k)
        return A


def _apply_op(A: list, kind: str, axis: str, i: int, j: int, k: int) -> None:
    if axis == "row":
        if kind == "swap":
            A[i], A[j] = A[j], A[i]
        elif kind == "add":
            ri, rj = A[i], A[j]
            for c in range(len(rj)):
                if ri[c]:
                    rj[c] += k * ri[c]
        else:
            A[i] = [-x for x in A[i]]
    else:
        if kind == "swap":
            for r in A:
                r[i], r[j] = r[j], r[i]
        elif kind == "add":
            for r in A:
                if r[i]:
                    r[j] += k * r[i]
        else:
            for r in A:
                r[i] = -r[i]


class _SNF:
    """Dense Smith normal form with optional transforms ``U M V = D``."""

    def __init__(self, M, transforms: bool = False, log: bool = False):
        self.A = [list(map(int, r)) for r in M]
        self.m = len(self.A)
        self.n = len(self.A[0]) if self.m else 0
        self.transforms = transforms
        self.cert = SNFCertificate() if log else None
        if transforms:
            self.U = [[int(i == j) for j in range(self.m)] for i in range(self.m)]
            self.V = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
            self.Vinv = [[int(i == j) for j in range(self.n)] for i in range(self.n)]
        self._run()

    def _op(self, kind, axis, i, j=0, k=0):
        _apply_op(self.A, kind, axis, i, j, k)
        if self.cert is not None:
            self.cert.ops.append((kind, axis, i, j, k))
        if not self.transforms:
            return
        if axis == "row":
            _apply_op(self.U, kind, "row", i, j, k)
        else:
            _apply_op(self.V, kind, "col", i, j, k)
            # inverse of a column op on V acts on rows of V^{-1}
            if kind == "add":
                _apply_op(self.Vinv, "add", "row", j, i, -k)
            else:
                _apply_op(self.Vinv, kind, "row", i, j, k)

    def _run(self):
        A = self.A
        t = 0
        while t < min(self.m, self.n):
            piv = None
            for r in range(t, self.m):
                row = A[r]
                for c in range(t, self.n):
                    v = row[c]
                    if v and (piv is None or abs(v) < piv[0]):
                        piv = (abs(v), r, c)
                        if piv[0] == 1:
                            break
                if piv is not None and piv[0] == 1:
                    break
            if piv is None:
                break
            _, r, c = piv
            if r != t:
                self._op("swap", "row", t, r)
            if c != t:
                self._op("swap", "col", t, c)
            while True:
                p = A[t][t]
                dirty = False
                for r in range(t + 1, self.m):
                    if A[r][t]:
                        q = A[r][t] // p
                        if q:
                            self._op("add", "row", t, r, -q)
                        if A[r][t]:
                            dirty = True
                for c in range(t + 1, self.n):
                    if A[t][c]:
                        q = A[t][c] // p
                        if q:
                            self._op("add", "col", t, c, -q)
                        if A[t][c]:
                            dirty = True
                if dirty:
                    best = None
                    for r in range(t + 1, self.m):
                        if A[r][t] and (best is None or abs(A[r][t]) < abs(A[best[0]][best[1]])):
                            best = (r, t)
                    for c in range(t + 1, self.n):
                        if A[t][c] and (best is None or abs(A[t][c]) < abs(A[best[0]][best[1]])):
                            best = (t, c)
                    if best[0] != t:
                        self._op("swap", "row", t, best[0])
                    else:
                        self._op("swap", "col", t, best[1])
                    continue
                bad = None
                for r in range(t + 1, self.m):
                    for c in range(t + 1, self.n):
                        if A[r][c] % p:
                            bad = r
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                self._op("add", "row", bad, t, 1)
            if A[t][t] < 0:
                self._op("neg", "row", t)
            t += 1
        self.rank = t

    @property
    def diagonal(self) -> list:
        return [self.A[i][i] for i in range(self.rank)]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return ``(D, certificate)``; ``certificate.replay(M) == D``."""
    s = _SNF(M, log=True)
    return s.A, s.cert


def smith_with_transforms(M: Sequence[Sequence[int]]):
    """Return ``(D, U, V, V_inverse, rank)`` with ``U M V = D``."""
    s = _SNF(M, transforms=True)
    return s.A, s.U, s.V, s.Vinv, s.rank


def invariant_factors_dense(M) -> list:
    if not M or not M[0]:
        return []
    return _SNF(M).diagonal


# -- sparse elimination -------------------------------------------------------------


def _sparse_reduce(columns: list, nrows: int, p: int | None):
    """Eliminate pivots from a sparse matrix given by columns (dicts row -> value).

    Over ``F_p`` every nonzero entry is a pivot and the result is the rank.
    Over ``Z`` only unit pivots are taken; returns ``(unit_count, residual)``
    where ``residual`` is the dense matrix left over.
    """
    rows: dict = {}
    for c, col in enumerate(columns):
        for r, v in col.items():
            v = v % p if p else v
            if v:
                rows.setdefault(r, {})[c] = v
    cols: dict = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    count = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols):
            if c not in cols or not cols[c]:
                continue
            candidates = [r for r in cols[c] if p or rows[r][c] in (1, -1)]
            if not candidates:
                continue
            r = min(candidates, key=lambda x: (len(rows[x]), x))
            _eliminate(rows, cols, r, c, p)
            count += 1
            progress = True
    if p:
        return count, []
    live_cols = sorted({c for row in rows.values() for c in row})
    index = {c: i for i, c in enumerate(live_cols)}
    residual = []
    for row in rows.values():
        line = [0] * len(live_cols)
        for c, v in row.items():
            line[index[c]] = v
        residual.append(line)
    return count, residual


def _eliminate(rows: dict, cols: dict, r, c, p) -> None:
    prow = rows.pop(r)
    pv = prow[c]
    inv = pow(pv, -1, p) if p else pv  # a unit over Z is its own inverse
    for c2 in prow:
        cols[c2].discard(r)
    for r2 in list(cols[c]):
        row2 = rows[r2]
        f = (row2[c] * inv) % p if p else row2[c] * inv
        for c2, v in prow.items():
            nv = row2.get(c2, 0) - f * v
            if p:
                nv %= p
            if nv:
                if c2 not in row2:
                    cols[c2].add(r2)
                row2[c2] = nv
            elif c2 in row2:
                del row2[c2]
                cols[c2].discard(r2)
        if not row2:
            del rows[r2]
    del cols[c]


def invariant_factors(columns: list, nrows: int) -> list:
    """Nonzero invariant factors of a sparse integer matrix."""
    count, residual = _sparse_reduce(columns, nrows, None)
    return [1] * count + invariant_factors_dense(residual)


def rank_mod_p(columns: list, nrows: int, p: int) -> int:
    return _sparse_reduce(columns, nrows, p)[0]


# -- chain complexes ---------------------------------------------------------------------


@dataclass
class ChainComplex:
    """Free chain complex; ``boundary[n]`` maps degree ``n`` to ``n - 1`` as sparse columns."""

    basis: list  # basis[n] = list of generator labels
    boundary: list  # boundary[n][j] = {row: coefficient}
    ring: int | str = "Z"  # "Z" or a prime p

    def __post_init__(self):
        if len(self.boundary) != len(self.basis):
            raise HomologyError("one boundary map per degree is required")
        for n, cols in enumerate(self.boundary):
            if len(cols) != len(self.basis[n]):
                raise HomologyError(f"boundary {n} has the wrong number of columns")
            rows = len(self.basis[n - 1]) if n else 0
            if any(not 0 <= r < rows for col in cols for r in col):
                raise HomologyError(f"boundary {n} has an out-of-range row")
        self.check_square_zero()

    @property
    def top(self) -> int:
        return len(self.basis) - 1

    def ranks(self) -> list:
        return [len(b) for b in self.basis]

    def check_square_zero(self) -> None:
        p = self.ring if isinstance(self.ring, int) else None
        for n in range(2, len(self.basis)):
            lower = self.boundary[n - 1]
            for j, col in enumerate(self.boundary[n]):
                acc: dict = {}
                for r, v in col.items():
                    for r2, v2 in lower[r].items():
                        acc[r2] = acc.get(r2, 0) + v * v2
                if any((x % p if p else x) for x in acc.values()):
                    raise HomologyError(f"boundary squared is nonzero at degree {n}, generator {j}")

    def dense(self, n: int) -> list:
        rows = len(self.basis[n - 1]) if n else 0
        M = [[0] * len(self.basis[n]) for _ in range(rows)]
        for j, col in enumerate(self.boundary[n]):
            for r, v in col.items():
                M[r][j] = v
        return M

    def with_ring(self, ring) -> "ChainComplex":
        return ChainComplex(self.basis, self.boundary, ring)


@dataclass
class HomologyTable:
    """Per degree: free rank and torsion (Z) or dimension (F_p, stored as rank)."""

    ring: int | str
    rank: list
    torsion: list

    @property
    def degrees(self) -> int:
        return len(self.rank)

    def group(self, n: int) -> tuple:
        return (self.rank[n], tuple(self.torsion[n]))

    def euler(self) -> int:
        return sum((-1) ** n * r for n, r in enumerate(self.rank))

    def truncated(self, top: int) -> "HomologyTable":
        return HomologyTable(self.ring, self.rank[: top + 1], self.torsion[: top + 1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return (
            str(self.ring) == str(other.ring)
            and self.rank == other.rank
            and [normalize_torsion(t) for t in self.torsion] == [normalize_torsion(t) for t in other.torsion]
        )

    def as_dicts(self) -> list:
        return [
            {"degree": n, "rank": r, "torsion": list(t)}
            for n, (r, t) in enumerate(zip(self.rank, self.torsion))
        ]

    def to_json(self) -> str:
        return json.dumps({"schema": "mccord.homology/1", "ring": str(self.ring), "groups": self.as_dicts()})

    def __str__(self) -> str:
        parts = []
        for n, (r, t) in enumerate(zip(self.rank, self.torsion)):
            terms = ([f"Z^{r}" if self.ring == "Z" else f"F{self.ring}^{r}"] if r else []) + [f"Z/{d}" for d in t]
            parts.append(f"H{n}=" + (" + ".join(terms) if terms else "0"))
        return ", ".join(parts)


def normalize_torsion(orders) -> list:
    """Invariant-factor form (divisibility chain) of a product of cyclic groups."""
    primes: dict = {}
    for d in orders:
        d = int(d)
        if d == 1:
            continue
        if d <= 0:
            raise HomologyError("torsion orders must be positive")
        q = 2
        while q * q <= d:
            e = 0
            while d % q == 0:
                d //= q
                e += 1
            if e:
                primes.setdefault(q, []).append(q**e)
            q += 1
        if d > 1:
            primes.setdefault(d, []).append(d)
    for v in primes.values():
        v.sort(reverse=True)
    length = max((len(v) for v in primes.values()), default=0)
    out = []
    for i in range(length):
        out.append(math.prod(v[i] for v in primes.values() if i < len(v)))
    return sorted(out)


def homology(C: ChainComplex, top: int | None = None) -> HomologyTable:
    """Homology in degrees ``0..top`` (default: all but the top chain degree)."""
    top = C.top - 1 if top is None else top
    if top > C.top - 1 and C.top >= 0:
        raise HomologyError(f"homology is only reliable through degree {C.top - 1}")
    p = C.ring if isinstance(C.ring, int) else None
    ranks, factors = [], []
    for n in range(C.top + 1):
        rows = len(C.basis[n - 1]) if n else 0
        if p:
            ranks.append(rank_mod_p(C.boundary[n], rows, p) if n else 0)
            factors.append([])
        else:
            f = invariant_factors(C.boundary[n], rows) if n else []
            ranks.append(len(f))
            factors.append(f)
    rank, torsion = [], []
    for n in range(top + 1):
        r = len(C.basis[n]) - ranks[n] - ranks[n + 1]
        rank.append(r)
        torsion.append(sorted(d for d in factors[n + 1] if d > 1))
    return HomologyTable(C.ring, rank, torsion)


def normalized_chains(X: SimplicialSet, ring: int | str = "Z", N: int | None = None) -> ChainComplex:
    """Nondegenerate non-basepoint simplices; alternating sum of nondegenerate faces."""
    N = X.max_dim if N is None else N
    if N > X.max_dim:
        raise HomologyError(f"N={N} exceeds max_dim {X.max_dim}")
    basis, index = [], []
    for n in range(N + 1):
        cells = [c for c in X.cells[n] if c != X.basepoint]
        basis.append(cells)
        index.append({c: i for i, c in enumerate(cells)})
    boundary = [[{} for _ in basis[0]]]
    for n in range(1, N + 1):
        cols = []
        for c in basis[n]:
            col: dict = {}
            for i, f in enumerate(X.faces[c]):
                if f.degen or f.cell == X.basepoint:
                    continue
                r = index[n - 1][f.cell]
                col[r] = col.get(r, 0) + (-1) ** i
            cols.append({r: v for r, v in col.items() if v})
        boundary.append(cols)
    return ChainComplex(basis, boundary, ring)


def simplicial_homology(X: SimplicialSet, ring: int | str = "Z", top: int | None = None) -> HomologyTable:
    """Reduced homology for based ``X``, ordinary homology for unbased ``X``."""
    return homology(normalized_chains(X, ring), top)


# -- finitely presented complexes ----------------------------------------------------------


def _kernel_basis(M: list, ncols: int) -> list:
    """Integer basis of the kernel of ``M`` (as column vectors of length ``ncols``)."""
    if not M:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    _, _, V, _, r = smith_with_transforms(M)
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def _lattice_basis(gens: list, dim: int) -> list:
    """Basis of the lattice spanned by ``gens`` (vectors of length ``dim``)."""
    if not gens:
        return []
    G = [[g[i] for g in gens] for i in range(dim)]
    _, _, V, _, r = smith_with_transforms(G)
    GV = [[sum(G[i][k] * V[k][j] for k in range(len(gens))) for j in range(r)] for i in range(dim)]
    return [[GV[i][j] for i in range(dim)] for j in range(r)]


def _coordinates(basis: list, vectors: list, dim: int) -> list:
    """Integer coordinates of each vector in ``basis``; columns of the result."""
    B = [[b[i] for b in basis] for i in range(dim)]
    D, U, V, _, r = smith_with_transforms(B)
    out = []
    for v in vectors:
        Uv = [sum(U[i][k] * v[k] for k in range(dim)) for i in range(dim)]
        z = []
        for i in range(r):
            q, rem = divmod(Uv[i], D[i][i])
            if rem:
                raise HomologyError("vector is not in the lattice")
            z.append(q)
        if any(Uv[i] for i in range(r, dim)):
            raise HomologyError("vector is not in the lattice")
        y = [sum(V[i][k] * z[k] for k in range(r)) for i in range(len(basis))]
        out.append(y)
    return out


def presented_homology(orders: list, matrices: list, top: int) -> HomologyTable:
    """Homology of a complex of groups ``C_n = ⊕ Z/orders[n][i]`` (0 meaning Z).

    ``matrices[n]`` is a dense integer matrix lifting ``C_n -> C_{n-1}``.
    """
    rank, torsion = [], []
    for n in range(top + 1):
        g = len(orders[n])
        if g == 0:
            rank.append(0)
            torsion.append([])
            continue
        # cycles: x with d x in the relation lattice of C_{n-1}
        if n == 0 or not orders[n - 1]:
            Z = [[int(i == j) for i in range(g)] for j in range(g)]
        else:
            h = len(orders[n - 1])
            M = [list(matrices[n][i]) + [orders[n - 1][i] if k == i else 0 for k in range(h)] for i in range(h)]
            Z = _lattice_basis([v[:g] for v in _kernel_basis(M, g + h)], g)
        # boundaries plus relations
        rel = [[orders[n][i] if k == i else 0 for k in range(g)] for i in range(g) if orders[n][i]]
        if n + 1 < len(orders) and orders[n + 1]:
            nxt = matrices[n + 1]
            rel += [[nxt[i][j] for i in range(g)] for j in range(len(orders[n + 1]))]
        rel = [v for v in rel if any(v)]
        if not Z:
            rank.append(0)
            torsion.append([])
            continue
        Y = _coordinates(Z, rel, g)
        if Y:
            coords = [[y[i] for y in Y] for i in range(len(Z))]
            diag = invariant_factors_dense(coords)
        else:
            diag = []
        rank.append(len(Z) - len(diag))
        torsion.append(sorted(d for d in diag if d > 1))
    return HomologyTable("Z", rank, torsion)


# -- abelian group structure of a coefficient table -------------------------------------------


@dataclass
class GroupDecomposition:
    orders: list  # cyclic factor orders, each > 1
    generators: list  # element index generating each factor
    coordinates: list  # coordinates[a] = vector in ⊕ Z/orders

    def element(self, vec) -> tuple:
        return tuple(v % d for v, d in zip(vec, self.orders))


def decompose_group(A: CoeffMonoid) -> GroupDecomposition:
    """Write a finite abelian group table as ``⊕ Z/d_i`` with explicit coordinates."""
    if not A.is_group:
        raise HomologyError(f"{A.name or 'coefficients'} is not a group")
    n = len(A)
    e = A.identity
    rels = [[int(k == e) for k in range(n)]]
    for a in range(n):
        for b in range(a, n):
            v = [0] * n
            v[a] += 1
            v[b] += 1
            v[A.op(a, b)] -= 1
            if any(v):
                rels.append(v)
    R = [[r[i] for r in rels] for i in range(n)]
    D, U, _, _, rk = smith_with_transforms(R)
    diag = [D[i][i] if i < rk else 0 for i in range(n)]
    if any(d == 0 for d in diag):
        raise HomologyError("group presentation is not finite")
    keep = [i for i in range(n) if diag[i] > 1]
    orders = [diag[i] for i in keep]
    coords = [[U[i][a] % diag[i] for i in keep] for a in range(n)]
    generators = []
    for j in range(len(keep)):
        target = [int(k == j) for k in range(len(keep))]
        generators.append(next(a for a in range(n) if coords[a] == target))
    return GroupDecomposition(orders, generators, coords)


# -- Moore complex of a word model ---------------------------------------------------------


def moore_homotopy(W, N: int | None = None) -> HomologyTable:
    """Homotopy groups of a word model with group coefficients, degrees ``0..N-1``.

    Each level is generated by one-letter words; after dividing out the
    degenerate ones a basis is (nondegenerate non-base simplex, cyclic factor).
    Faces are computed with the word model's own pushforward.
    """
    A = W.coeff
    if not A.is_group:
        raise HomologyError("moore_homotopy needs group coefficients")
    K = W.base
    N = K.max_dim if N is None else N
    if N > K.max_dim:
        raise HomologyError(f"N={N} exceeds max_dim {K.max_dim}")
    dec = decompose_group(A)
    orders, gens, index = [], [], []
    for n in range(N + 1):
        g = [(s, j) for s in K.nondegenerate(n) if not K.is_base(s) for j in range(len(dec.orders))]
        gens.append(g)
        orders.append([dec.orders[j] for _, j in g])
        index.append({x: i for i, x in enumerate(g)})
    matrices = [[]]
    for n in range(1, N + 1):
        M = [[0] * len(gens[n]) for _ in gens[n - 1]]
        for c, (s, j) in enumerate(gens[n]):
            letter = frozenset({(s, dec.generators[j])})
            for i in range(n + 1):
                image = W.face(letter, n, i)
                for t, b in image:
                    if t.degen:
                        continue
                    for jj, x in enumerate(dec.coordinates[b]):
                        if x:
                            M[index[n - 1][(t, jj)]][c] += (-1) ** i * x
        matrices.append(M)
    return presented_homology(orders, matrices, N - 1)


def uct_homology(K: SimplicialSet, A: CoeffMonoid, top: int | None = None) -> HomologyTable:
    """Reduced ``H_*(K; A)`` from integral homology and universal coefficients."""
    dec = decompose_group(A)
    H = simplicial_homology(K, "Z")
    top = H.degrees - 1 if top is None else top
    rank, torsion = [], []
    for n in range(top + 1):
        parts = []
        for d in dec.orders:
            parts += [d] * H.rank[n]
            parts += [math.gcd(e, d) for e in H.torsion[n]]
            if n:
                parts += [math.gcd(e, d) for e in H.torsion[n - 1]]
        rank.append(0)
        torsion.append(normalize_torsion(parts))
    return HomologyTable("Z", rank, torsion)


# -- bar construction ---------------------------------------------------------------------------


def bar_complex(A: CoeffMonoid, N: int, ring: int | str = "Z") -> ChainComplex:
    """Normalized chains of the nerve of ``A`` as a one-object category, degrees ``0..N``."""
    import itertools

    if not A.is_group:
        raise HomologyError("bar_oracle needs a group")
    e = A.identity
    nonid = [a for a in range(len(A)) if a != e]
    basis = [[()]]
    for n in range(1, N + 1):
        basis.append(list(itertools.product(nonid, repeat=n)))
    index = [{x: i for i, x in enumerate(b)} for b in basis]
    boundary = [[{}]]
    for n in range(1, N + 1):
        cols = []
        for x in basis[n]:
            col: dict = {}
            for i in range(n + 1):
                if i == 0:
                    f = x[1:]
                elif i == n:
                    f = x[:-1]
                else:
                    m = A.op(x[i - 1], x[i])
                    if m == e:
                        continue
                    f = x[: i - 1] + (m,) + x[i + 1 :]
                r = index[n - 1][f]
                col[r] = col.get(r, 0) + (-1) ** i
            cols.append({r: v for r, v in col.items() if v})
        boundary.append(cols)
    return ChainComplex(basis, boundary, ring)


def bar_oracle(A: CoeffMonoid, N: int, ring: int | str = "Z") -> HomologyTable:
    """Unreduced homology of the classifying space of ``A`` through degree ``N``."""
    return homology(bar_complex(A, N + 1, ring), N)


def word_model_homology(W, ring: int | str = "Z", top: int | None = None) -> HomologyTable:
    """Unreduced homology of a word model viewed as a simplicial set."""
    X = W.as_simplicial_set()
    C = normalized_chains(X, ring)
    H = homology(C, top)
    # normalized_chains is relative to the basepoint; restore H_0
    rank = list(H.rank)
    rank[0] += 1
    return HomologyTable(H.ring, rank, H.torsion)
