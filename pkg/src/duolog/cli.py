"""Command-line interface.

Exit codes: 0 for success / valid / accepted, 1 for a countermodel, a
rejected proof, or an invalid formula (the witness goes to stdout), 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .claims import format_report, run_claims
from .corpus import CorpusError, load_corpus
from .matrix3 import MatrixError, valid3
from .proof import (
    DeductionError,
    ProofError,
    check_proof,
    deduction_transform,
    dump_proof,
    load_proof,
)
from .search import SearchBounds, bounded_consequence, bounded_valid
from .semantics import (
    EvalError,
    ModelError,
    VARIANTS,
    dump_model,
    evaluate,
    load_model,
    model_to_dict,
)
from .syntax import FRAGMENTS, FragmentError, ParseError, parse_formula, render_formula
from .translate import add_base, add_fresh_root_mpc, box_translate, sup_translate, truncate

USAGE_ERROR, REFUTED, OK = 2, 1, 0


class CliError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(str(exc)) from None


def _parse_formula_arg(text: str, fragment: str | None = None):
    frag = FRAGMENTS[fragment] if fragment else None
    return parse_formula(text, frag)


def _bounds(args) -> SearchBounds:
    rooted = None
    if getattr(args, "rooted", False):
        rooted = True
    if getattr(args, "unrooted", False):
        rooted = False
    atoms = tuple(args.atoms.split(",")) if getattr(args, "atoms", None) else None
    classical = tuple(args.classical_atoms.split(",")) if getattr(args, "classical_atoms", None) else ()
    return SearchBounds(
        variant=args.variant,
        max_worlds=args.max_worlds,
        atoms=atoms,
        rooted=rooted,
        classical_atoms=classical,
    )


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_parse(args) -> int:
    f = _parse_formula_arg(args.formula, args.fragment)
    _emit(args, {"formula": render_formula(f)}, render_formula(f))
    return OK


def _cmd_eval(args) -> int:
    model = load_model(_read(args.model), args.variant)
    f = _parse_formula_arg(args.formula)
    value = evaluate(model, args.world, f, args.variant)
    _emit(args, {"value": value}, str(value))
    return OK if value else REFUTED


def _cmd_valid(args) -> int:
    f = _parse_formula_arg(args.formula)
    result = bounded_valid(f, _bounds(args), jobs=args.jobs)
    if result.valid:
        _emit(
            args,
            {"valid_up_to_bound": True, "models_checked": result.models_checked},
            f"valid up to bound ({result.models_checked} models)",
        )
        return OK
    payload = {
        "valid_up_to_bound": False,
        "countermodel": model_to_dict(result.model),
        "world": result.world,
    }
    _emit(args, payload, f"countermodel at world {result.world}:\n{dump_model(result.model)}")
    return REFUTED


def _cmd_consequence(args) -> int:
    premises = [_parse_formula_arg(t) for t in args.premise]
    conclusion = _parse_formula_arg(args.formula)
    result = bounded_consequence(premises, conclusion, _bounds(args), jobs=args.jobs)
    if result.valid:
        _emit(
            args,
            {"valid_up_to_bound": True, "models_checked": result.models_checked},
            f"consequence holds up to bound ({result.models_checked} models)",
        )
        return OK
    payload = {
        "valid_up_to_bound": False,
        "countermodel": model_to_dict(result.model),
        "world": result.world,
    }
    _emit(args, payload, f"countermodel at world {result.world}:\n{dump_model(result.model)}")
    return REFUTED


def _cmd_check_proof(args) -> int:
    proof = load_proof(_read(args.proof), system=args.system)
    verdict = check_proof(proof)
    if verdict.accepted:
        _emit(
            args,
            {"accepted": True, "steps": len(proof.steps), "conclusion": render_formula(proof.conclusion)},
            f"accepted ({len(proof.steps)} steps, concludes {render_formula(proof.conclusion)})",
        )
        return OK
    payload = {"accepted": False, "failed_step": verdict.failed_step, "reason": verdict.reason}
    _emit(args, payload, f"rejected at step {verdict.failed_step}: {verdict.reason}")
    return REFUTED


def _cmd_deduce(args) -> int:
    proof = load_proof(_read(args.proof), system=args.system)
    hypothesis = _parse_formula_arg(args.hypothesis)
    try:
        transformed = deduction_transform(proof, hypothesis)
    except DeductionError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return REFUTED
    print(dump_proof(transformed))
    return OK


def _cmd_translate(args) -> int:
    f = _parse_formula_arg(args.formula)
    out = box_translate(f) if args.to == "box" else sup_translate(f)
    _emit(args, {"formula": render_formula(out)}, render_formula(out))
    return OK


def _cmd_transform_model(args) -> int:
    model = load_model(_read(args.model))
    if args.op == "add-base":
        out = add_base(model)
    elif args.op == "truncate":
        if not args.world:
            raise CliError("truncate needs --world")
        out = truncate(model, args.world, args.variant or "mpc")
    else:
        out = add_fresh_root_mpc(model)
    _emit(args, model_to_dict(out), dump_model(out))
    return OK


def _cmd_matrix3(args) -> int:
    f = _parse_formula_arg(args.formula)
    refutation = valid3(f)
    if refutation is None:
        _emit(args, {"valid": True}, "valid in the three-valued matrix")
        return OK
    _emit(args, {"valid": False, "assignment": refutation}, f"refuted by {refutation}")
    return REFUTED


def _cmd_paper_verify(args) -> int:
    results = run_claims(max_worlds=args.max_worlds)
    if args.json:
        print(json.dumps([r.to_dict() for r in results]))
    else:
        print(format_report(results))
    return OK if all(r.ok for r in results) else REFUTED


def _cmd_corpus(args) -> int:
    corpus = load_corpus()
    rows = [
        {"name": name, "system": p.system, "steps": len(p.steps), "conclusion": render_formula(p.conclusion)}
        for name, p in corpus.items()
    ]
    if args.json:
        print(json.dumps(rows))
    else:
        for row in rows:
            print(f"{row['name']:14s} {row['system']:14s} {row['steps']:5d} steps  {row['conclusion']}")
    return OK


# ---------------------------------------------------------------------------


def _add_search_flags(sub) -> None:
    sub.add_argument("--variant", default="s", choices=sorted(VARIANTS))
    sub.add_argument("--max-worlds", type=int, default=3)
    sub.add_argument("--atoms", help="comma-separated atom list (default: the formula's atoms)")
    sub.add_argument("--classical-atoms", help="comma-separated classical atoms")
    sub.add_argument("--rooted", action="store_true", help="require a base world")
    sub.add_argument("--unrooted", action="store_true", help="forbid a base world")
    sub.add_argument("--jobs", type=int, default=1, help="parallel search workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="duolog", description=__doc__)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("parse", help="parse and re-print a formula")
    sub.add_argument("formula")
    sub.add_argument("--fragment", choices=sorted(FRAGMENTS))
    sub.set_defaults(fn=_cmd_parse)

    sub = commands.add_parser("eval", help="evaluate a formula at a world of a model")
    sub.add_argument("formula")
    sub.add_argument("--model", required=True, help="model JSON path, or - for stdin")
    sub.add_argument("--world", required=True)
    sub.add_argument("--variant", default="s", choices=sorted(VARIANTS))
    sub.set_defaults(fn=_cmd_eval)

    sub = commands.add_parser("valid", help="bounded validity search")
    sub.add_argument("formula")
    _add_search_flags(sub)
    sub.set_defaults(fn=_cmd_valid)

    sub = commands.add_parser("consequence", help="bounded consequence search")
    sub.add_argument("formula", help="conclusion")
    sub.add_argument("--premise", action="append", default=[])
    _add_search_flags(sub)
    sub.set_defaults(fn=_cmd_consequence)

    sub = commands.add_parser("check-proof", help="check a proof file")
    sub.add_argument("proof", help="proof JSON path, or - for stdin")
    sub.add_argument("--system", help="proof system (overrides the file's field)")
    sub.set_defaults(fn=_cmd_check_proof)

    sub = commands.add_parser("deduce", help="discharge a hypothesis via the deduction theorem")
    sub.add_argument("proof", help="proof JSON path, or - for stdin")
    sub.add_argument("--hypothesis", required=True)
    sub.add_argument("--system")
    sub.set_defaults(fn=_cmd_deduce)

    sub = commands.add_parser("translate", help="translate between the conditional and box languages")
    sub.add_argument("formula")
    sub.add_argument("--to", required=True, choices=("box", "sup"))
    sub.set_defaults(fn=_cmd_translate)

    sub = commands.add_parser("transform-model", help="base addition, truncation, fresh root")
    sub.add_argument("--model", required=True)
    sub.add_argument("--op", required=True, choices=("add-base", "truncate", "add-root"))
    sub.add_argument("--world")
    sub.add_argument("--variant")
    sub.set_defaults(fn=_cmd_transform_model)

    sub = commands.add_parser("matrix3", help="three-valued matrix validity")
    sub.add_argument("formula")
    sub.set_defaults(fn=_cmd_matrix3)

    sub = commands.add_parser("paper-verify", help="run the full claims registry")
    sub.add_argument("--max-worlds", type=int, default=3)
    sub.set_defaults(fn=_cmd_paper_verify)

    sub = commands.add_parser("corpus", help="list the shipped derivation corpus")
    sub.set_defaults(fn=_cmd_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, FragmentError, ModelError, EvalError, MatrixError, ProofError,
            CorpusError, CliError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
