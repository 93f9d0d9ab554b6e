"""Bigraded Poincaré series for the free functors that build spectral-sequence E1 terms.

A series is a finite table of dimensions indexed by ``(degree, weight)``.
Degree is the internal grading and is truncated to the window ``[-T, T]``.
Weight is the filtration index and is additive under products and brackets.
It doubles under restricted squares and Dyer-Lashof operations.

Free Lie dimensions are solved weight by weight from the PBW identity
``U(L) = T(V)``.  The tensor algebra series is ``1 / (1 - f)``.
"""
from __future__ import annotations

import json
from collections import Counter
from functools import lru_cache
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Iterable, Mapping

SCHEMA = "mccord.series/1"
STEENROD_MAX_T = 64


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class GradedSeries:
    terms: tuple  # sorted (degree, weight, coefficient), coefficients nonzero
    T: int

    @classmethod
    def make(cls, coeffs: Mapping, T: int) -> "GradedSeries":
        kept = sorted((d, w, c) for (d, w), c in coeffs.items() if c and -T <= d <= T)
        return cls(tuple(kept), T)

    @classmethod
    def from_degrees(cls, dims, T: int, weight: int = 1) -> "GradedSeries":
        """From ``{degree: dim}`` (or a list indexed from degree 0), all at one weight."""
        if not isinstance(dims, Mapping):
            dims = dict(enumerate(dims))
        return cls.make({(d, weight): c for d, c in dims.items()}, T)

    @classmethod
    def parse(cls, text: str, T: int) -> "GradedSeries":
        """``"0:1,3:2"`` means one class in degree 0 and two in degree 3."""
        dims: Counter = Counter()
        for part in filter(None, (p.strip() for p in text.split(","))):
            try:
                d, c = part.split(":")
                dims[int(d)] += int(c)
            except ValueError:
                raise SeriesError(f"bad series term {part!r}; expected degree:dim") from None
        return cls.from_degrees(dims, T)

    def as_dict(self) -> dict:
        return {(d, w): c for d, w, c in self.terms}

    def coefficient(self, degree: int, weight: int | None = None) -> int:
        return sum(c for d, w, c in self.terms if d == degree and (weight is None or w == weight))

    def by_degree(self) -> dict:
        out: Counter = Counter()
        for d, _, c in self.terms:
            out[d] += c
        return dict(sorted(out.items()))

    def by_weight(self) -> dict:
        out: dict = {}
        for d, w, c in self.terms:
            out.setdefault(w, {})[d] = c
        return dict(sorted(out.items()))

    def weights(self) -> list:
        return sorted({w for _, w, _ in self.terms})

    def layer(self, weight: int) -> "GradedSeries":
        return GradedSeries(tuple(t for t in self.terms if t[1] == weight), self.T)

    def dense(self, lo: int = 0, hi: int | None = None) -> list:
        hi = self.T if hi is None else hi
        deg = self.by_degree()
        return [deg.get(k, 0) for k in range(lo, hi + 1)]

    def reweight(self, weight: int) -> "GradedSeries":
        return GradedSeries.make(_collect((d, weight, c) for d, _, c in self.terms), self.T)

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        T = min(self.T, other.T)
        return GradedSeries.make(_collect(self.terms + other.terms), T)

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": SCHEMA,
                "window": self.T,
                "terms": [{"degree": d, "weight": w, "dim": c} for d, w, c in self.terms],
                "total": {str(d): c for d, c in self.by_degree().items()},
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "GradedSeries":
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise SeriesError(f"expected schema {SCHEMA}")
        return cls.make({(t["degree"], t["weight"]): t["dim"] for t in data["terms"]}, data["window"])

    def render(self) -> str:
        """Weight-by-degree table; one row per weight plus a total row."""
        degs = sorted({d for d, _, _ in self.terms})
        if not degs:
            return "(zero series)"
        table = self.by_weight()
        width = max(3, *(len(str(c)) for _, _, c in self.terms)) + 1
        lines = ["w\\deg".ljust(7) + "".join(str(d).rjust(width) for d in degs)]
        for w, row in table.items():
            lines.append(str(w).ljust(7) + "".join(str(row.get(d, "")).rjust(width) for d in degs))
        tot = self.by_degree()
        lines.append("total".ljust(7) + "".join(str(tot[d]).rjust(width) for d in degs))
        return "\n".join(lines)


def _collect(triples: Iterable) -> dict:
    out: Counter = Counter()
    for d, w, c in triples:
        out[(d, w)] += c
    return out


def shift(f: GradedSeries, d: int) -> GradedSeries:
    """Move every class up by ``d`` degrees; classes leaving the window are dropped."""
    return GradedSeries.make({(k + d, w): c for k, w, c in f.terms}, f.T)


# ---------------------------------------------------------------------------
# truncated bigraded power series arithmetic


@dataclass(frozen=True)
class _Box:
    W: int  # weight bound
    lo: float  # internal degree bounds
    hi: float

    def keep(self, d: int, w: int) -> bool:
        return w <= self.W and self.lo <= d <= self.hi


def _box(f: GradedSeries, max_weight: int | None, what: str) -> _Box:
    """Truncation box that is exact on the window when degrees have one sign."""
    if not f.terms:
        return _Box(0, 0, 0)
    if any(w < 1 for _, w, _ in f.terms):
        raise SeriesError(f"{what}: generators need weight >= 1")
    degs = [d for d, _, _ in f.terms]
    wmax = max(w for _, w, _ in f.terms)
    if all(d > 0 for d in degs):
        lo, hi = 0, f.T
    elif all(d < 0 for d in degs):
        lo, hi = -f.T, 0
    else:
        if max_weight is None:
            raise SeriesError(
                f"{what}: generators of mixed sign or degree 0 need an explicit max_weight"
            )
        return _Box(max_weight, float("-inf"), float("inf"))
    W = (f.T // min(abs(d) for d in degs)) * wmax
    return _Box(W if max_weight is None else min(W, max_weight), lo, hi)


def _mul(a: Mapping, b: Mapping, box: _Box) -> dict:
    out: Counter = Counter()
    for (d1, w1), c1 in a.items():
        for (d2, w2), c2 in b.items():
            key = (d1 + d2, w1 + w2)
            if box.keep(*key):
                out[key] += c1 * c2
    return {k: v for k, v in out.items() if v}


def _factor_power(P: Mapping, d: int, w: int, n: int, kind: str, box: _Box) -> dict:
    """Multiply ``P`` by ``(1 - x)^-n`` (kind "poly") or ``(1 + x)^n`` (kind "ext"), ``x = t^d s^w``."""
    terms = {(0, 0): 1}
    k = 1
    while k * w <= box.W:
        c = comb(n + k - 1, k) if kind == "poly" else comb(n, k)
        if c == 0:
            break
        if box.keep(k * d, k * w):
            terms[(k * d, k * w)] = c
        elif box.lo != float("-inf"):
            break  # one-sign degrees only move further out
        k += 1
    return _mul(P, terms, box)


def _tensor(f: Mapping, box: _Box) -> dict:
    """``1 / (1 - f)`` truncated to the box."""
    total: Counter = Counter({(0, 0): 1})
    power = {(0, 0): 1}
    while power:
        power = _mul(power, f, box)
        total.update(power)
    return dict(total)


def _product(classes: Mapping, kind_of, box: _Box) -> dict:
    P = {(0, 0): 1}
    for (d, w), n in sorted(classes.items()):
        P = _factor_power(P, d, w, n, kind_of(d), box)
    return P


def _pbw_solve(f: GradedSeries, kind_of, max_weight: int | None, what: str) -> GradedSeries:
    box = _box(f, max_weight, what)
    if any(d == 0 for d, _, _ in f.terms):
        raise SeriesError(f"{what}: generators must sit in nonzero degrees")
    target = _tensor(f.as_dict(), box)
    P = {(0, 0): 1}
    L: dict = {}
    for w in range(1, box.W + 1):
        degs = sorted({d for d, ww in target if ww == w} | {d for d, ww in P if ww == w})
        new = {}
        for d in degs:
            n = target.get((d, w), 0) - P.get((d, w), 0)
            if n < 0:
                raise SeriesError(f"{what}: PBW solve gives negative dimension {n} at (degree {d}, weight {w})")
            if n:
                new[(d, w)] = n
        for (d, ww), n in new.items():
            P = _factor_power(P, d, ww, n, kind_of(d), box)
        L.update(new)
    return GradedSeries.make(L, f.T)


def _sign_kind(d: int) -> str:
    return "poly" if d % 2 == 0 else "ext"


# ---------------------------------------------------------------------------
# free functors


def free_commutative(f: GradedSeries, char: int = 0, max_weight: int | None = None) -> GradedSeries:
    """Free graded-commutative algebra: exterior on odd classes in char 0, polynomial otherwise."""
    _check_char(char)
    if any(d == 0 for d, _, _ in f.terms):
        raise SeriesError("free_commutative: degree-0 classes are not allowed")
    box = _box(f, max_weight, "free_commutative")
    kind_of = _sign_kind if char == 0 else (lambda d: "poly")
    return GradedSeries.make(_product(f.as_dict(), kind_of, box), f.T)


def free_lie(f: GradedSeries, char: int = 0, max_weight: int | None = None) -> GradedSeries:
    """Free graded Lie algebra; char 0 uses the sign-aware PBW basis, char 2 the polynomial one."""
    _check_char(char)
    return _pbw_solve(f, _sign_kind if char == 0 else (lambda d: "poly"), max_weight, "free_lie")


def free_restricted_lie(f: GradedSeries, p: int = 2, max_weight: int | None = None) -> GradedSeries:
    """Free restricted Lie algebra at ``p = 2``: squares live in L, so PBW monomials are square-free."""
    if p != 2:
        raise SeriesError("free_restricted_lie: only p = 2 is supported")
    return _pbw_solve(f, lambda d: "ext", max_weight, "free_restricted_lie")


def pbw_identity_check(f: GradedSeries, char: int = 0, restricted: bool = False) -> bool:
    """Rebuild ``1/(1 - f)`` from the solved Lie series and compare on the truncation box."""
    box = _box(f, None, "pbw_identity_check")
    if restricted:
        L, kind_of = free_restricted_lie(f), (lambda d: "ext")
    else:
        L = free_lie(f, char)
        kind_of = _sign_kind if char == 0 else (lambda d: "poly")
    return _product(L.as_dict(), kind_of, box) == {k: v for k, v in _tensor(f.as_dict(), box).items() if v}


def _check_char(char: int) -> None:
    if char not in (0, 2):
        raise SeriesError(f"characteristic {char} is unsupported (only 0 and 2)")


# ---------------------------------------------------------------------------
# Lyndon-word oracle


def lyndon_words(k: int, n: int):
    """Lyndon words of length ``1..n`` over ``range(k)`` (Duval's algorithm)."""
    if k < 1:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()


def lyndon_counts(degrees: list, T: int) -> dict:
    """Brute-force free Lie dimensions by degree for generators of positive even degrees."""
    if not degrees or min(degrees) < 1:
        raise SeriesError("lyndon_counts needs positive generator degrees")
    out: Counter = Counter()
    for word in lyndon_words(len(degrees), T // min(degrees)):
        deg = sum(degrees[i] for i in word)
        if deg <= T:
            out[deg] += 1
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# Dyer-Lashof operations at p = 2


@dataclass(frozen=True)
class DyerLashofConvention:
    """Which operation words ``Q^{i_1} ... Q^{i_m} y`` count as basis elements.

    ``form="steenrod"``: ``i_j >= ratio * i_{j+1}`` and the innermost index is at
    least ``|y| + excess``.  ``form="dyer-lashof"``: ``i_j <= ratio * i_{j+1}`` and
    every index is at least the degree of its argument plus ``excess``.
    ``shift_sign`` is the direction a suspension moves degrees in the char-2
    pipeline.  For the bounded functor with parameter ``n`` each index obeys
    ``i <= (argument degree) + n + top_offset``.
    """

    form: str = "steenrod"
    ratio: int = 2
    excess: int = 2
    min_index: int = 1
    shift_sign: int = -1
    weight_factor: int = 2
    top_offset: int = -1

    def __post_init__(self):
        if self.form not in ("steenrod", "dyer-lashof"):
            raise SeriesError(f"unknown admissibility form {self.form!r}")
        if self.shift_sign not in (1, -1):
            raise SeriesError("shift_sign must be +1 or -1")
        if self.min_index < 1 or self.ratio < 1 or self.weight_factor < 1:
            raise SeriesError("min_index, ratio and weight_factor must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CONVENTION = DyerLashofConvention()


def operation_words(degree: int, conv: DyerLashofConvention, T: int, n: int | None = None) -> Counter:
    """Count admissible words on one class by ``(final degree, length)``, degrees ``<= T``."""
    @lru_cache(maxsize=None)
    def grow(z: int, prev: int | None) -> Counter:
        # words extending a word that ends at degree z with outermost index prev
        out: Counter = Counter({(z, 0): 1})
        if conv.form == "steenrod":
            lo = degree + conv.excess if prev is None else conv.ratio * prev
            hi = T - z
        else:
            lo = z + conv.excess
            hi = T - z if prev is None else min(T - z, conv.ratio * prev)
        if n is not None:
            hi = min(hi, z + n + conv.top_offset)
        for i in range(max(lo, conv.min_index), hi + 1):
            for (end, length), k in grow(z + i, i).items():
                out[(end, length + 1)] += k
        return out

    return grow(degree, None) if degree <= T else Counter()


def dyer_lashof_free(
    f: GradedSeries,
    n: int | None = None,
    convention: DyerLashofConvention = DEFAULT_CONVENTION,
    p: int = 2,
) -> GradedSeries:
    """Free algebra of operations on ``f`` (``n=None`` is the stable functor)."""
    if p != 2:
        raise SeriesError("Dyer-Lashof series are only supported at p = 2")
    if n is not None and n < 1:
        raise SeriesError("n must be a positive integer or None")
    out: Counter = Counter()
    for d, w, c in f.terms:
        for (z, length), k in operation_words(d, convention, f.T, n).items():
            out[(z, w * convention.weight_factor**length)] += c * k
    return GradedSeries.make(out, f.T)


# ---------------------------------------------------------------------------
# E1 terms


def e1_total(
    target: str,
    h: GradedSeries,
    char: int,
    n: int | None = None,
    convention: DyerLashofConvention = DEFAULT_CONVENTION,
    max_weight: int | None = None,
) -> GradedSeries:
    """E1 term for ``target`` in ``{"taq", "tensor"}`` from the reduced cohomology series ``h``.

    ``tensor`` needs the sphere dimension ``n``.  The result is bigraded by
    (internal degree, filtration weight).
    """
    _check_char(char)
    if target not in ("taq", "tensor"):
        raise SeriesError(f"unknown target {target!r}; use taq or tensor")
    if target == "tensor" and (n is None or n < 1):
        raise SeriesError("tensor target needs n >= 1")
    h = h.reweight(1)
    if char == 0:
        lie = free_lie(shift(h, -1), 0, max_weight)
        if target == "taq":
            return shift(lie, 1)
        return free_commutative(shift(lie, 1 - n), 0, max_weight)
    s = convention.shift_sign
    lie = free_restricted_lie(shift(h, -s), 2, max_weight)
    if target == "taq":
        return dyer_lashof_free(shift(lie, s), None, convention)
    ops = dyer_lashof_free(shift(lie, s * (1 - n)), n, convention)
    return free_commutative(ops, 2, max_weight)


def is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


# ---------------------------------------------------------------------------
# Steenrod algebra oracles


def milnor_series(T: int) -> list:
    """Dimensions of the mod 2 Steenrod algebra in degrees ``0..T`` via Milnor-basis multisets."""
    _check_T(T)
    parts = [2**i - 1 for i in range(1, T.bit_length() + 2) if 2**i - 1 <= T]
    counts = [1] + [0] * T
    for part in parts:
        for k in range(part, T + 1):
            counts[k] += counts[k - part]
    return counts


def admissible_series(T: int, max_length: int | None = None) -> list:
    """Count admissible ``Sq^{i_1}...Sq^{i_m}`` (``i_j >= 2 i_{j+1}``, ``i_m >= 1``) by degree."""
    _check_T(T)
    counts = [0] * (T + 1)

    def grow(total: int, last: int, length: int) -> None:
        counts[total] += 1
        if max_length is not None and length >= max_length:
            return
        lo = 1 if length == 0 else 2 * last
        for i in range(lo, T - total + 1):
            grow(total + i, i, length + 1)

    grow(0, 0, 0)
    return counts


def steenrod_series(kind: str, T: int, k: int | None = None) -> GradedSeries:
    """``A``, ``A_mod_Sq1`` (``A/A Sq^1``) or ``A_length_le_k`` as weight-0 series."""
    if kind == "A":
        dims = milnor_series(T)
    elif kind == "A_mod_Sq1":
        dims = []
        for a in milnor_series(T):
            dims.append(a - (dims[-1] if dims else 0))
    elif kind == "A_length_le_k":
        if k is None or k < 0:
            raise SeriesError("A_length_le_k needs k >= 0")
        dims = admissible_series(T, k)
    else:
        raise SeriesError(f"unknown Steenrod series {kind!r}")
    return GradedSeries.from_degrees(dims, T, weight=0)


def _check_T(T: int) -> None:
    if not 0 <= T <= STEENROD_MAX_T:
        raise SeriesError(f"T must lie in 0..{STEENROD_MAX_T}")


# ---------------------------------------------------------------------------
# calibration of the operation convention


@dataclass
class CalibrationResult:
    convention: DyerLashofConvention
    support_ok: bool
    total_ok: bool
    first_mismatch: int | None = field(default=None)

    @property
    def ok(self) -> bool:
        return self.support_ok and self.total_ok


def calibrate(convention: DyerLashofConvention, T: int = 20) -> CalibrationResult:
    """Score a convention on the mod 2 Eilenberg-MacLane target.

    ``h`` is one class in degree 0.  The E1 total must match the Steenrod
    algebra on the window.  Weights must be powers of 2.
    """
    e1 = e1_total("taq", GradedSeries.from_degrees({0: 1}, T), 2, convention=convention)
    support_ok = all(is_power_of_two(w) for w in e1.weights())
    got = e1.by_degree()
    want = dict(enumerate(milnor_series(T)))
    mismatch = next((d for d in range(-T, T + 1) if got.get(d, 0) != want.get(d, 0)), None)
    return CalibrationResult(convention, support_ok, mismatch is None, mismatch)


def calibration_grid() -> list:
    return [
        DyerLashofConvention(form=form, ratio=ratio, excess=excess, shift_sign=sign)
        for form in ("steenrod", "dyer-lashof")
        for ratio in (1, 2, 3)
        for excess in (0, 1, 2, 3)
        for sign in (1, -1)
    ]


def calibration_sweep(T: int = 20) -> list:
    """All grid conventions with their scores, in grid order."""
    return [calibrate(c, T) for c in calibration_grid()]
