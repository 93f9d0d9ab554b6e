"""Poset of nontrivial partitions, its nerve, and the partition complexes ``K_d``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial

from .homology import HomologyTable, simplicial_homology
from .simplicial import Simplex, SimplicialError, SimplicialSet, unreduced_suspension

MAX_D = 6


def set_partitions(items: tuple) -> list:
    """All partitions of ``items`` as tuples of sorted blocks, in canonical order."""
    if not items:
        return [()]
    first, rest = items[0], items[1:]
    out = []
    for p in set_partitions(rest):
        out.append(((first,),) + p)
        for i in range(len(p)):
            out.append(p[:i] + ((first,) + p[i],) + p[i + 1 :])
    return sorted(_canon(p) for p in out)


def _canon(p) -> tuple:
    return tuple(sorted(tuple(sorted(b)) for b in p))


def refines(p: tuple, q: tuple) -> bool:
    """Every block of ``p`` lies inside a block of ``q``."""
    return all(any(set(b) <= set(c) for c in q) for b in p)


@dataclass
class Poset:
    elements: list
    leq: dict  # (x, y) -> bool

    def less(self, x, y) -> bool:
        return x != y and self.leq[(x, y)]

    def check(self) -> None:
        E = self.elements
        for x in E:
            if not self.leq[(x, x)]:
                raise ValueError("not reflexive")
        for x, y in itertools.product(E, repeat=2):
            if x != y and self.leq[(x, y)] and self.leq[(y, x)]:
                raise ValueError("not antisymmetric")
        for x, y, z in itertools.product(E, repeat=3):
            if self.leq[(x, y)] and self.leq[(y, z)] and not self.leq[(x, z)]:
                raise ValueError("not transitive")

    def chains(self) -> list:
        """Strict chains ``x_0 < ... < x_k`` grouped by ``k``."""
        out = [[(x,) for x in self.elements]]
        while out[-1]:
            nxt = [c + (y,) for c in out[-1] for y in self.elements if self.less(c[-1], y)]
            out.append(nxt)
        return out[:-1]


def partition_poset(d: int) -> Poset:
    """Partitions of ``{1..d}`` other than the discrete and indiscrete ones, ordered by refinement."""
    if d < 2:
        raise ValueError("partition_poset needs d >= 2")
    if d > MAX_D:
        raise ValueError(f"d <= {MAX_D} is enforced (chain enumeration grows too fast)")
    items = tuple(range(1, d + 1))
    discrete = tuple((i,) for i in items)
    elements = [p for p in set_partitions(items) if p != discrete and p != (items,)]
    leq = {(p, q): refines(p, q) for p in elements for q in elements}
    return Poset(elements, leq)


def nerve(P: Poset, N: int | None = None, name: str = "") -> SimplicialSet:
    """Nerve as an unbased simplicial set: nondegenerate ``k``-cells are strict chains."""
    chains = P.chains()
    top = max(len(chains) - 1, 0) if N is None else N
    cells = [list(chains[k]) if k < len(chains) else [] for k in range(top + 1)]
    faces = {}
    for k in range(1, top + 1):
        for c in cells[k]:
            faces[c] = [Simplex(c[:i] + c[i + 1 :], (), k - 1) for i in range(k + 1)]
    return SimplicialSet(top, cells, faces, None, name)


def partition_complex(d: int) -> SimplicialSet:
    """``K_d``: unreduced suspension of the nerve, based at the north cone point."""
    P = partition_poset(d)
    X = nerve(P, max(d - 2, 1) if d > 2 else 1, f"Pi{d}")
    return unreduced_suspension(X)


def partition_homology(d: int) -> HomologyTable:
    """Reduced integral homology of ``K_d`` in all degrees up to its dimension."""
    K = partition_complex(d)
    # the complex is finite of dimension d-2, so extend the truncation by one
    K1 = _extend(K)
    return simplicial_homology(K1, "Z", K.max_dim)


def _extend(K: SimplicialSet) -> SimplicialSet:
    cells = [list(level) for level in K.cells] + [[]]
    return SimplicialSet(K.max_dim + 1, cells, dict(K.faces), K.basepoint, K.name)


def expected_rank(d: int) -> int:
    return factorial(d - 1)


def expected_degree(d: int) -> int:
    return d - 2


def relabel_action_check(d: int) -> bool:
    """Permutations of ``{1..d}`` act on ``K_d`` compatibly with all faces."""
    K = partition_complex(d)

    def act_partition(g, p):
        return _canon(tuple(tuple(g[i - 1] for i in b) for b in p))

    gens = [tuple(range(2, d + 1)) + (1,)] + ([(2, 1) + tuple(range(3, d + 1))] if d > 1 else [])
    for g in gens:
        for level in K.cells:
            for c in level:
                image = _act(K, g, c, act_partition)
                if image not in K:
                    return False
                if K.faces.get(c):
                    expect = [Simplex(_act(K, g, f.cell, act_partition), f.degen, f.dim) for f in K.faces[c]]
                    if list(K.faces[image]) != expect:
                        return False
    return True


def _act(K: SimplicialSet, g, cell, act_partition):
    """Relabel every partition occurring inside a suspension cell id."""
    if isinstance(cell, tuple):
        return tuple(_act(K, g, x, act_partition) for x in cell) if not _is_partition(cell) else act_partition(g, cell)
    return cell


def _is_partition(x) -> bool:
    return (
        isinstance(x, tuple)
        and len(x) > 0
        and all(isinstance(b, tuple) and b and all(isinstance(i, int) for i in b) for b in x)
    )
