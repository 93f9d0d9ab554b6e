"""Command-line front end.

Every subcommand prints one JSON report with a versioned ``schema`` field and
sorted keys, so identical inputs give byte-identical output.  Exit codes:
0 when every verdict holds, 1 when some verdict fails, 2 on input errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .coefmonoid import CoeffMonoid, MonoidError, parse_coeff
from .e1series import DEFAULT_CONVENTION, GradedSeries, SeriesError, e1_total
from .gammacat import CategoryError, coend_vs_word_check, kan_lemma_check
from .homology import HomologyError, moore_homotopy, uct_homology, word_model_homology
from .partition import MAX_D, expected_degree, expected_rank, partition_homology
from .simplicial import (
    SimplicialError,
    SimplicialSet,
    build_sphere,
    forget_basepoint,
    point,
    smash,
    wedge,
)
from .wordmodel import (
    WordModel,
    WordModelError,
    adjoin_unit_check,
    layer_iso_check,
    smash_iteration_check,
    unbased_comparison_check,
    wedge_decomposition_check,
)

INPUT_ERRORS = (
    SimplicialError,
    MonoidError,
    WordModelError,
    HomologyError,
    CategoryError,
    SeriesError,
    OSError,
    json.JSONDecodeError,
)


class UsageError(ValueError):
    pass


# -- inputs ---------------------------------------------------------------------------------------


def parse_space(spec: str, N: int) -> SimplicialSet:
    """``s0``, ``sK``, ``point``, ``points:K`` (unbased), ``wedge:X,Y``, ``smash:X,Y``.

    Combinators nest to the right: ``wedge:s1,smash:s1,s1``.
    """
    spec = spec.strip()
    for prefix, combine in (("wedge:", wedge), ("smash:", smash)):
        if spec.startswith(prefix):
            left, sep, right = spec[len(prefix):].partition(",")
            if not sep:
                raise UsageError(f"{prefix} needs two spaces separated by a comma")
            return combine(parse_space(left, N), parse_space(right, N))
    if spec == "point":
        return point(N)
    if spec.startswith("points:"):
        k = _int(spec[7:], spec)
        return SimplicialSet(N, [[f"p{i}" for i in range(k)]], {}, None, f"points{k}")
    if spec.startswith("s") and spec[1:].isdigit():
        return build_sphere(int(spec[1:]), N)
    raise UsageError(f"unknown space {spec!r} (try s0, s1, s2, point, points:K, wedge:X,Y, smash:X,Y)")


def _int(text: str, context: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"expected an integer in {context!r}") from None


def load_space(args, which: str = "space") -> SimplicialSet:
    path = getattr(args, f"{which}_file", None)
    if path:
        X = SimplicialSet.from_json(Path(path).read_text())
        return X
    spec = getattr(args, which)
    if spec is None:
        raise UsageError(f"--{which.replace('_', '-')} or --{which.replace('_', '-')}-file is required")
    return parse_space(spec, args.max_dim)


def load_coeff(args) -> CoeffMonoid:
    if args.coeff_file:
        return CoeffMonoid.from_json(Path(args.coeff_file).read_text(), Path(args.coeff_file).stem)
    if args.coeff is None:
        raise UsageError("--coeff or --coeff-file is required")
    return parse_coeff(args.coeff)


def thread_limit() -> int:
    """``MCCORD_THREADS`` caps parallelism; the computations here run on one thread."""
    raw = os.environ.get("MCCORD_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"MCCORD_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("MCCORD_THREADS must be a positive integer")
    return n


# -- subcommands ----------------------------------------------------------------------------------


def _verdict_report(v, **extra) -> dict:
    return {
        "schema": "mccord.verdict/1",
        "check": v.check,
        "ok": v.ok,
        "details": v.details,
        "counterexample": v.counterexample,
        **extra,
    }


def cmd_sp_homology(args) -> tuple:
    K, A = load_space(args), load_coeff(args)
    W = WordModel(K, A, args.d_max, _flavor(K, A))
    ring = "Z" if args.ring == "Z" else _int(args.ring, "--ring")
    H = word_model_homology(W, ring)
    census = {f"{n}:{f}": c for (n, f), c in sorted(W.census().items())}
    return {
        "schema": "mccord.sp_homology/1",
        "space": K.name,
        "coeff": A.name,
        "d_max": args.d_max,
        "flavor": W.flavor,
        "homology": H.as_dicts(),
        "word_counts": census,
        "text": str(H),
    }, True


def cmd_moore(args) -> tuple:
    K, A = load_space(args), load_coeff(args)
    W = WordModel(K, A, None, "unital")
    H = moore_homotopy(W)
    chain = uct_homology(K, A, H.degrees - 1)
    return {
        "schema": "mccord.moore/1",
        "space": K.name,
        "coeff": A.name,
        "homotopy": H.as_dicts(),
        "chain_homology": chain.as_dicts(),
        "agrees": H == chain,
        "text": str(H),
    }, H == chain


def cmd_layer_check(args) -> tuple:
    K, A = load_space(args), load_coeff(args)
    v = layer_iso_check(K, A, args.d)
    return _verdict_report(v, isomorphic=v.ok), v.ok


def cmd_wedge_check(args) -> tuple:
    K, L, A = load_space(args), load_space(args, "space2"), load_coeff(args)
    v = wedge_decomposition_check(K, L, A, args.d_max)
    return _verdict_report(v), v.ok


def cmd_smash_check(args) -> tuple:
    K, L, A = load_space(args), load_space(args, "space2"), load_coeff(args)
    v = smash_iteration_check(K, L, A, args.d_max)
    return _verdict_report(v), v.ok


def cmd_coend_check(args) -> tuple:
    K, A = load_space(args), load_coeff(args)
    r = coend_vs_word_check(K, A, args.N, "unital" if A.unital else "reduced")
    return _verdict_report(r), r.ok


def cmd_kan_check(args) -> tuple:
    r = kan_lemma_check(args.lemma, args.k, args.l, args.N)
    return _verdict_report(r), r.ok


def cmd_reduced_check(args) -> tuple:
    K, J = load_space(args), load_coeff(args)
    if J.unital:
        raise UsageError("reduced-check needs a nonunital coefficient such as nil2 or null2")
    layers = {d: layer_iso_check(K, J, d) for d in range(1, args.d_max + 1)}
    unit = adjoin_unit_check(K, J, args.d_max)
    ok = unit.ok and all(v.ok for v in layers.values())
    return {
        "schema": "mccord.reduced_check/1",
        "space": K.name,
        "coeff": J.name,
        "ok": ok,
        "layers": {str(d): _verdict_report(v) for d, v in layers.items()},
        "adjoin_unit": _verdict_report(unit),
    }, ok


def cmd_unbased_check(args) -> tuple:
    L, A = load_space(args), load_coeff(args)
    if L.is_based:
        L = forget_basepoint(L)
    v = unbased_comparison_check(L, A, args.d_max)
    return _verdict_report(v), v.ok


def cmd_partition(args) -> tuple:
    if not 2 <= args.d <= MAX_D:
        raise UsageError(f"--d must lie in 2..{MAX_D}")
    H = partition_homology(args.d)
    deg, rank = expected_degree(args.d), expected_rank(args.d)
    ok = all(
        (r == (rank if n == deg else 0)) and not t for n, (r, t) in enumerate(zip(H.rank, H.torsion))
    )
    return {
        "schema": "mccord.partition/1",
        "d": args.d,
        "homology": H.as_dicts(),
        "expected": {"degree": deg, "rank": rank},
        "ok": ok,
        "text": str(H),
    }, ok


def cmd_e1(args) -> tuple:
    h = GradedSeries.parse(args.h, args.T)
    series = e1_total(args.target, h, args.char, args.n, DEFAULT_CONVENTION, args.max_weight)
    payload = json.loads(series.to_json())
    return {
        "schema": "mccord.e1/1",
        "target": args.target,
        "char": args.char,
        "n": args.n,
        "h": args.h,
        "convention": DEFAULT_CONVENTION.to_dict() if args.char == 2 else None,
        "series": payload,
        "table": series.render(),
    }, True


def _flavor(K: SimplicialSet, A: CoeffMonoid) -> str:
    if not K.is_based:
        return "unbased"
    return "unital" if A.unital else "reduced"


# -- parser ---------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mccord", description="Filtered McCord models and their checks.")
    p.add_argument("--version", action="version", version=f"mccord {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, space=True, coeff=True, space2=False):
        if space:
            sp.add_argument("--space", help="built-in space name")
            sp.add_argument("--space-file", help="simplicial set JSON")
        if space2:
            sp.add_argument("--space2", help="second built-in space")
            sp.add_argument("--space2-file", help="second simplicial set JSON")
        if coeff:
            sp.add_argument("--coeff", help="coefficients: zN, tnatT, nilK, nullK, prod:A,B, unit:X")
            sp.add_argument("--coeff-file", help="coefficient table JSON")
        sp.add_argument("--max-dim", type=int, default=3, help="simplicial truncation (default 3)")
        sp.add_argument("--output", "-o", help="write the report here instead of stdout")

    sp = sub.add_parser("sp-homology", help="homology of a truncated word model")
    common(sp)
    sp.add_argument("--d-max", type=int, default=2)
    sp.add_argument("--ring", default="Z", help="Z or a prime p")
    sp.set_defaults(func=cmd_sp_homology)

    sp = sub.add_parser("moore", help="homotopy of the word model with group coefficients")
    common(sp)
    sp.set_defaults(func=cmd_moore)

    sp = sub.add_parser("layer-check", help="filtration layer against the orbit model")
    common(sp)
    sp.add_argument("--d", type=int, required=True)
    sp.set_defaults(func=cmd_layer_check)

    for name, func in (("wedge-check", cmd_wedge_check), ("smash-check", cmd_smash_check)):
        sp = sub.add_parser(name, help=f"{name.split('-')[0]} identity for word models")
        common(sp, space2=True)
        sp.add_argument("--d-max", type=int, default=2)
        sp.set_defaults(func=func)

    sp = sub.add_parser("coend-check", help="coend over finite based sets against the word model")
    common(sp)
    sp.add_argument("--N", type=int, default=3)
    sp.set_defaults(func=cmd_coend_check)

    sp = sub.add_parser("kan-check", help="Kan extensions of power functors against closed forms")
    sp.add_argument("--lemma", choices=["smash", "wedge", "diagonal"], required=True)
    sp.add_argument("--k", type=int, required=True, help="size of the first pointed set")
    sp.add_argument("--l", type=int, help="size of the second pointed set")
    sp.add_argument("--N", type=int, default=5)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_kan_check)

    sp = sub.add_parser("reduced-check", help="nonunital layers and unit adjunction")
    common(sp)
    sp.add_argument("--d-max", type=int, default=2)
    sp.set_defaults(func=cmd_reduced_check)

    sp = sub.add_parser("unbased-check", help="unbased model against the disjoint-basepoint model")
    common(sp)
    sp.add_argument("--d-max", type=int, default=2)
    sp.set_defaults(func=cmd_unbased_check)

    sp = sub.add_parser("partition", help="homology of the partition complex")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("e1", help="bigraded E1 series")
    sp.add_argument("--target", choices=["taq", "tensor"], required=True)
    sp.add_argument("--char", type=int, choices=[0, 2], required=True)
    sp.add_argument("--h", required=True, help='reduced cohomology, e.g. "0:1,3:2"')
    sp.add_argument("--T", type=int, default=20, help="degree window [-T, T]")
    sp.add_argument("--n", type=int, help="sphere dimension for the tensor target")
    sp.add_argument("--max-weight", type=int)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_e1)
    return p


def run(argv: list | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    try:
        thread_limit()
        report, ok = args.func(args)
    except (UsageError, *INPUT_ERRORS) as exc:
        print(f"mccord: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
