"""Finite commutative coefficient objects.

Two kinds are modeled, both written additively:

* unital monoids, pointed by their identity (stand-ins for abelian monoids
  and augmented algebras);
* nonunital semigroups pointed by an absorbing element ``*`` (stand-ins for
  nonunital algebras).

``adjoin_unit`` produces a third shape: a unital monoid whose basepoint is
an absorbing zero distinct from the identity.  Word models built on it treat the
zero as the smash basepoint and the identity as the unit.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Hashable, Sequence


class MonoidError(ValueError):
    pass


@dataclass(frozen=True)
class CoeffMonoid:
    elements: tuple
    table: tuple  # table[i][j] = index of elements[i] + elements[j]
    identity: int | None
    basepoint: int
    name: str = ""

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise MonoidError("empty monoid")
        if len(set(self.elements)) != n:
            raise MonoidError("duplicate element labels")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise MonoidError("table shape does not match the element list")
        if any(not 0 <= v < n for row in self.table for v in row):
            raise MonoidError("table entry out of range")
        if not 0 <= self.basepoint < n:
            raise MonoidError("basepoint out of range")
        if self.identity is not None and not 0 <= self.identity < n:
            raise MonoidError("identity out of range")

    # basic structure --------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def sum(self, items) -> int | None:
        """Sum of element indices; ``None`` for an empty sum without identity."""
        acc = None
        for x in items:
            acc = x if acc is None else self.table[acc][x]
        if acc is None:
            return self.identity
        return acc

    @property
    def unital(self) -> bool:
        return self.identity is not None

    @property
    def has_zero(self) -> bool:
        """An absorbing basepoint distinct from the identity (or no identity)."""
        return self.identity != self.basepoint

    @property
    def is_group(self) -> bool:
        if not self.unital:
            return False
        e = self.identity
        return all(any(self.table[a][b] == e for b in range(len(self))) for a in range(len(self)))

    def letters(self) -> list:
        """Element indices allowed as word exponents: not the identity, not the zero."""
        return [a for a in range(len(self)) if a != self.identity and a != self.basepoint]

    def label(self, a: int):
        return self.elements[a]

    def index(self, label) -> int:
        return self.elements.index(label)

    def exponent(self) -> int | None:
        """Least ``m >= 1`` with ``m * a = 0`` for all ``a`` (groups only)."""
        if not self.is_group:
            return None
        m = 1
        while True:
            if all(self.multiple(a, m) == self.identity for a in range(len(self))):
                return m
            m += 1

    def multiple(self, a: int, m: int) -> int:
        acc = self.identity
        for _ in range(m):
            acc = self.table[acc][a]
        return acc

    # axioms -------------------------------------------------------------------

    def violations(self) -> list:
        """Human-readable list of failed axioms (empty when valid)."""
        n = len(self)
        t = self.table
        bad = []
        for a, b in itertools.product(range(n), repeat=2):
            if t[a][b] != t[b][a]:
                bad.append(f"not commutative at ({a}, {b})")
                break
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                bad.append(f"not associative at ({a}, {b}, {c})")
                break
        if self.unital:
            e = self.identity
            if any(t[e][a] != a for a in range(n)):
                bad.append("identity law fails")
        if self.has_zero:
            z = self.basepoint
            if any(t[z][a] != z for a in range(n)):
                bad.append("basepoint is not absorbing")
        return bad

    def check(self) -> "CoeffMonoid":
        bad = self.violations()
        if bad:
            raise MonoidError("; ".join(bad))
        return self

    # serialization ---------------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "elements": list(self.elements),
                "table": [list(r) for r in self.table],
                "identity": self.identity,
                "basepoint": self.basepoint,
            }
        )

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "CoeffMonoid":
        data = json.loads(text)
        return cls(
            tuple(data["elements"]),
            tuple(tuple(r) for r in data["table"]),
            data["identity"],
            data["basepoint"],
            name,
        ).check()


def from_function(elements: Sequence[Hashable], op, identity=None, basepoint=None, name="") -> CoeffMonoid:
    elements = tuple(elements)
    idx = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(idx[op(a, b)] for b in elements) for a in elements)
    ident = None if identity is None else idx[identity]
    base = ident if basepoint is None else idx[basepoint]
    if base is None:
        raise MonoidError("a nonunital object needs an explicit basepoint")
    return CoeffMonoid(elements, table, ident, base, name).check()


def cyclic(n: int) -> CoeffMonoid:
    """``Z/n`` under addition, pointed by 0."""
    if n < 1:
        raise MonoidError("cyclic(n) needs n >= 1")
    return from_function(range(n), lambda a, b: (a + b) % n, identity=0, name=f"Z/{n}")


def truncated_nat(t: int) -> CoeffMonoid:
    """``{0, ..., t}`` with saturating addition ``min(a + b, t)``."""
    if t < 1:
        raise MonoidError("truncated_nat(t) needs t >= 1")
    return from_function(range(t + 1), lambda a, b: min(a + b, t), identity=0, name=f"N<={t}")


def direct_product(A: CoeffMonoid, B: CoeffMonoid) -> CoeffMonoid:
    if A.unital != B.unital:
        raise MonoidError("direct_product needs both factors unital or both nonunital")
    pairs = tuple(itertools.product(range(len(A)), range(len(B))))
    idx = {p: i for i, p in enumerate(pairs)}
    table = tuple(
        tuple(idx[(A.table[a][c], B.table[b][d])] for (c, d) in pairs) for (a, b) in pairs
    )
    identity = idx[(A.identity, B.identity)] if A.unital else None
    base = idx[(A.basepoint, B.basepoint)]
    labels = tuple((A.elements[a], B.elements[b]) for a, b in pairs)
    return CoeffMonoid(labels, table, identity, base, f"{A.name}x{B.name}").check()


def semigroup(elements, op, zero, name="") -> CoeffMonoid:
    """A pointed commutative semigroup with absorbing basepoint ``zero``."""
    return from_function(elements, op, identity=None, basepoint=zero, name=name)


def null_semigroup(k: int) -> CoeffMonoid:
    """``{*, a_1, ..., a_k}`` with every product equal to ``*``."""
    elements = ("*",) + tuple(f"a{i}" for i in range(1, k + 1))
    return semigroup(elements, lambda x, y: "*", "*", name=f"null{k}")


def nilpotent(k: int) -> CoeffMonoid:
    """``{*, a, a^2, ..., a^k}`` with ``a^i a^j = a^(i+j)`` and ``a^(k+1) = *``."""
    elements = ("*",) + tuple(range(1, k + 1))

    def op(x, y):
        if x == "*" or y == "*" or x + y > k:
            return "*"
        return x + y

    return semigroup(elements, op, "*", name=f"nil{k}")


def one_point_semigroup() -> CoeffMonoid:
    return semigroup(("*",), lambda x, y: "*", "*", name="pt")


def adjoin_unit(J: CoeffMonoid) -> CoeffMonoid:
    """``J`` with a new identity ``1``; the absorbing ``*`` of ``J`` stays the basepoint."""
    if J.unital:
        raise MonoidError("adjoin_unit expects a nonunital semigroup")
    n = len(J)
    rows = [list(r) + [i] for i, r in enumerate(J.table)]
    rows.append(list(range(n)) + [n])
    label = "1"
    while label in J.elements:
        label += "'"
    return CoeffMonoid(
        J.elements + (label,),
        tuple(tuple(r) for r in rows),
        n,
        J.basepoint,
        f"{J.name}+1",
    ).check()


def is_homomorphism(f: Sequence[int], A: CoeffMonoid, B: CoeffMonoid) -> bool:
    if any(f[A.table[a][b]] != B.table[f[a]][f[b]] for a in range(len(A)) for b in range(len(A))):
        return False
    if A.unital and f[A.identity] != B.identity:
        return False
    return f[A.basepoint] == B.basepoint


def homomorphisms(A: CoeffMonoid, B: CoeffMonoid) -> list:
    """All pointed (and unital, when ``A`` is) homomorphisms, by brute force."""
    return [
        f
        for f in itertools.product(range(len(B)), repeat=len(A))
        if is_homomorphism(f, A, B)
    ]


def all_tables(n: int, unital: bool = True) -> list:
    """Every valid commutative structure on ``{0..n-1}`` with 0 as basepoint.

    Unital: 0 is the identity.  Nonunital: 0 is absorbing.  Brute force over
    symmetric tables with the forced row fixed, so only small ``n`` are feasible.
    """
    out = []
    free = [(a, b) for a in range(1, n) for b in range(a, n)]
    for values in itertools.product(range(n), repeat=len(free)):
        t = [[0] * n for _ in range(n)]
        for a in range(n):
            t[0][a] = t[a][0] = a if unital else 0
        for (a, b), v in zip(free, values):
            t[a][b] = t[b][a] = v
        M = CoeffMonoid(tuple(range(n)), tuple(tuple(r) for r in t), 0 if unital else None, 0)
        if not M.violations():
            out.append(M)
    return out


def parse_coeff(spec: str) -> CoeffMonoid:
    """Built-in coefficient names: ``zN``, ``tnatT``, ``nilK``, ``nullK``, ``prod:A,B``."""
    spec = spec.strip()
    if spec.startswith("prod:"):
        parts = spec[5:].split(",")
        if len(parts) < 2:
            raise MonoidError("prod: needs at least two factors")
        out = parse_coeff(parts[0])
        for p in parts[1:]:
            out = direct_product(out, parse_coeff(p))
        return out
    if spec.startswith("unit:"):
        return adjoin_unit(parse_coeff(spec[5:]))
    for prefix, build in (("tnat", truncated_nat), ("nil", nilpotent), ("null", null_semigroup), ("z", cyclic)):
        if spec.startswith(prefix):
            try:
                k = int(spec[len(prefix):])
            except ValueError:
                break
            return build(k)
    raise MonoidError(f"unknown coefficient spec {spec!r}")
