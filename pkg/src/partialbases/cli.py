"""Command-line entry point.

Every subcommand prints a JSON report (sorted keys) to stdout and, with
``--json PATH``, also writes it to PATH.  Exit codes: 0 success, 1 a
verified failure, 2 a budget ran out, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Sequence

from . import __version__
from .autos import abelianization
from .freegroup import RankError, format_word, parse_tuple
from .orbit import (
    BudgetExceeded,
    DEFAULT_VERTEX_BUDGET,
    extend_to_basis,
    is_partial_basis,
    minimize,
    partial_basis_by_search,
    stabilizer_presentation,
)
from .presentations import ParameterError, THEOREM_FAMILIES, verify_presentation

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _words(args: argparse.Namespace):
    try:
        words = parse_tuple(args.words, args.n)
    except (ValueError, RankError) as e:
        raise InputError(f"--words: {e}") from None
    if not words:
        raise InputError("--words: no words given")
    return words


# -- handlers (each returns (result, exit_code)) -----------------------------------------

def cmd_verify(args) -> tuple[dict, int]:
    rep = verify_presentation(args.theorem, args.n, args.l, args.family or None, allow_large=args.allow_large)
    return rep.to_json(), EXIT_OK if rep.passed else EXIT_FAIL


def cmd_minimize(args) -> tuple[dict, int]:
    words = _words(args)
    reduced, phi = minimize(list(words), args.n)
    return {
        "input": [format_word(w) for w in words],
        "minimized": [format_word(w) for w in reduced],
        "total_length": sum(len(w) for w in reduced),
        "automorphism": phi.to_json(),
    }, EXIT_OK


def cmd_decide(args) -> tuple[dict, int]:
    words = _words(args)
    verdict = is_partial_basis(list(words), args.n)
    out = {"words": [format_word(w) for w in words], "partial_basis": verdict}
    if args.oracle:
        oracle = partial_basis_by_search(list(words), args.n)
        out["oracle"] = oracle
        if oracle != verdict:
            return out, EXIT_FAIL
    return out, EXIT_OK


def cmd_extend(args) -> tuple[dict, int]:
    words = _words(args)
    phi = extend_to_basis(list(words), args.n)
    if phi is None:
        return {"words": [format_word(w) for w in words], "partial_basis": False}, EXIT_FAIL
    return {
        "words": [format_word(w) for w in words],
        "partial_basis": True,
        "automorphism": phi.to_json(),
        "images_of_words": [format_word(phi(w)) for w in sorted(set(words), key=lambda w: w.sort_key())],
        "abelianization": abelianization(phi),
    }, EXIT_OK


def cmd_stabilizer(args) -> tuple[dict, int]:
    words = _words(args)
    reduced, phi = minimize(list(words), args.n)
    sp = stabilizer_presentation(list(reduced), args.n, budget=args.budget)
    check = sp.verify()
    out = {
        "input": [format_word(w) for w in words],
        "conjugator": phi.to_json(),
        "presentation": sp.to_json(),
        "check": check,
    }
    return out, EXIT_OK if check["ok"] else EXIT_FAIL


def cmd_homology(args) -> tuple[dict, int]:
    from .topology import FinitePoset, SimplicialComplex, homology

    if bool(args.complex) == bool(args.poset):
        raise InputError("give exactly one of --complex or --poset")
    try:
        if args.complex:
            K = SimplicialComplex.from_json(_load_json(args.complex))
        else:
            K = FinitePoset.from_json(_load_json(args.poset)).order_complex()
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(str(e)) from None
    cc = K.chain_complex()
    return {
        "dimension": K.dimension,
        "f_vector": K.f_vector(),
        "homology": homology(K).to_json(),
        "d_squared_zero": cc.d_squared_zero(),
    }, EXIT_OK


def _load_map(args, source=None):
    from .quillen import PosetMap

    try:
        return PosetMap.from_json(_load_json(args.map), source=source)
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"{args.map}: {e}") from None


def cmd_quillen_check(args) -> tuple[dict, int]:
    from .quillen import check_spherical_map

    rep = check_spherical_map(_load_map(args), args.n, homological=not args.connectivity)
    code = {"pass": EXIT_OK, "fail": EXIT_FAIL, "unknown": EXIT_BUDGET}[rep.verdict]
    return rep.to_json(), code


def cmd_quillen_basis(args) -> tuple[dict, int]:
    from .quillen import PreconditionError, theorem47_basis, theorem47_decomposition
    from .topology import SimplicialComplex, face_poset

    try:
        K = SimplicialComplex.from_json(_load_json(args.complex))
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"{args.complex}: {e}") from None
    f = _load_map(args, source=face_poset(K))
    try:
        dec = theorem47_decomposition(f, args.n)
        cert = theorem47_basis(f, K, args.n)
    except PreconditionError as e:
        return {"error": str(e), "detail": e.detail}, EXIT_FAIL
    ok = cert.unimodular and cert.epimorphism and cert.remark_holds and dec["holds"]
    return {"decomposition": dec, "certificate": cert.to_json()}, EXIT_OK if ok else EXIT_FAIL


def cmd_quillen_suite(args) -> tuple[dict, int]:
    from .instances import run_suite

    res = run_suite(args.count, args.seed)
    ok = res["admissible"] == res["count"] and res["passed"] == res["admissible"]
    return res, EXIT_OK if ok else EXIT_FAIL


def cmd_pb_build(args) -> tuple[dict, int]:
    from .pbcomplex import build_truncated_pb

    pb = build_truncated_pb(args.n, args.L, force=args.force)
    cx = pb.to_json(args.skeleton)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(cx, sort_keys=True, indent=2) + "\n")
    return {
        "vertices": len(pb.vertices),
        "simplices": len(pb.simplices),
        "dimension": pb.dimension,
        "complex": cx,
    }, EXIT_OK


def _basis_words(args):
    if not args.basis:
        return []
    try:
        return list(parse_tuple(args.basis, args.n))
    except (ValueError, RankError) as e:
        raise InputError(f"--basis: {e}") from None


def cmd_pb_link(args) -> tuple[dict, int]:
    from .pbcomplex import link_in_pb

    try:
        pb = link_in_pb(_basis_words(args), args.n, args.L, force=args.force)
    except ValueError as e:
        raise InputError(str(e)) from None
    return {
        "basis": [format_word(w, args.n) for w in pb.base],
        "vertices": len(pb.vertices),
        "simplices": len(pb.simplices),
        "complex": pb.to_json(),
    }, EXIT_OK


def cmd_pb_experiment(args) -> tuple[dict, int]:
    from .pbcomplex import experiment_sphericity

    try:
        rep = experiment_sphericity(args.n, args.L, _basis_words(args), force=args.force)
    except ValueError as e:
        raise InputError(str(e)) from None
    return rep, EXIT_OK if all(rep["consistent"].values()) else EXIT_FAIL


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partialbases", description="Whitehead algebra, partial bases and poset topology.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, parent=sub, **kw) -> argparse.ArgumentParser:
        sp = parent.add_parser(name, **kw)
        sp.add_argument("--json", metavar="PATH", help="also write the report to PATH")
        sp.set_defaults(handler=handler)
        return sp

    v = add("verify", cmd_verify, help="check a family of relations semantically")
    v.add_argument("--theorem", required=True, choices=sorted(THEOREM_FAMILIES))
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--l", type=int, default=0)
    v.add_argument("--family", action="append", help="restrict to one family (repeatable)")
    v.add_argument("--allow-large", action="store_true", help="permit permutation tables above rank 4")

    for name, handler, help_ in (
        ("minimize", cmd_minimize, "Whitehead-minimize a tuple of words"),
        ("decide-basis", cmd_decide, "decide whether words form a partial basis"),
        ("extend-basis", cmd_extend, "extend a partial basis to an automorphism"),
        ("stabilizer", cmd_stabilizer, "stabilizer presentation of a tuple"),
    ):
        sp = add(name, handler, help=help_)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--words", required=True, help='comma-separated words, e.g. "a b a^-1, b"')
        if name == "decide-basis":
            sp.add_argument("--oracle", action="store_true", help="cross-check with exhaustive search")
        if name == "stabilizer":
            sp.add_argument("--budget", type=int, default=DEFAULT_VERTEX_BUDGET)

    h = add("homology", cmd_homology, help="reduced integral homology")
    h.add_argument("--complex")
    h.add_argument("--poset")

    q = sub.add_parser("quillen", help="spherical poset maps and top-homology bases")
    qs = q.add_subparsers(dest="quillen_command", required=True)
    qc = add("check", cmd_quillen_check, parent=qs)
    qc.add_argument("--map", required=True)
    qc.add_argument("--n", type=int, required=True)
    qc.add_argument("--connectivity", action="store_true", help="check connectivity instead of homology")
    qb = add("basis", cmd_quillen_basis, parent=qs)
    qb.add_argument("--map", required=True)
    qb.add_argument("--complex", required=True)
    qb.add_argument("--n", type=int, required=True)
    qq = add("suite", cmd_quillen_suite, parent=qs)
    qq.add_argument("--count", type=int, default=100)
    qq.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("pb", help="truncated partial-basis complexes")
    bs = b.add_subparsers(dest="pb_command", required=True)
    for name, handler in (("build", cmd_pb_build), ("link", cmd_pb_link), ("experiment", cmd_pb_experiment)):
        sp = add(name, handler, parent=bs)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--L", type=int, required=True)
        sp.add_argument("--force", action="store_true", help="lift the default size limits")
        if name == "build":
            sp.add_argument("--skeleton", type=int)
            sp.add_argument("--out")
        else:
            sp.add_argument("--basis", default="" if name == "experiment" else None, required=name == "link")
    return p


_SKIP = {"handler", "json"}


def run(argv: Sequence[str] | None = None) -> tuple[dict, int]:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in sorted(vars(args).items()) if k not in _SKIP}
    report: dict = {"schema_version": SCHEMA_VERSION, "version": __version__, "config": config,
                    "seed": getattr(args, "seed", None)}
    try:
        result, code = args.handler(args)
        report["result"] = result
    except InputError as e:
        report["error"] = str(e)
        code = EXIT_INPUT
    except (ParameterError, RankError) as e:
        report["error"] = str(e)
        code = EXIT_INPUT
    except BudgetExceeded as e:
        report["error"] = str(e)
        code = EXIT_BUDGET
    report["exit_code"] = code
    if getattr(args, "json", None):
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(dumps(report))
    return report, code


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    report, code = run(argv)
    sys.stdout.write(dumps(report))
    if code == EXIT_INPUT:
        sys.stderr.write(f"error: {report.get('error')}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
