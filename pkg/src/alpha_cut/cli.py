"""alpha-cut: solve, verify, walk, gen and render from the command line.

Exit codes: 0 for a G1 cut (or a clean verify), 2 for GV1, 3 for GV2,
1 for usage, input and budget errors, 4 for internal errors.
"""

import argparse
import json
import os
import sys

from .certificates import InternalError
from .generate import generate_instance
from .instance import ParseError, parse_instance, serialize_instance
from .oracle import BudgetExceeded, DEFAULT_BUDGET, check_weak_general_position, check_well_separation
from .oracle import enumerate_cuts
from .render import UnsupportedDimension, render_svg
from .solver import solve

EXIT_OK, EXIT_USAGE, EXIT_GV1, EXIT_GV2, EXIT_INTERNAL = 0, 1, 2, 3, 4
KIND_EXIT = {"G1": EXIT_OK, "GV1": EXIT_GV1, "GV2": EXIT_GV2}


class UsageError(Exception):
    pass


def _parser():
    ap = argparse.ArgumentParser(prog="alpha-cut", description="Discrete α-ham-sandwich cuts with exact certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        p.add_argument("--input", required=needs_input, help="instance JSON file")
        p.add_argument("--output", help="output file (default: stdout)")
        p.add_argument("--seed", help="64-bit seed; falls back to $ALPHA_CUT_SEED, then 0")
        p.add_argument("--budget", type=int, help="step budget (walk) or check budget (verify)")
        p.add_argument("--trace", action="store_true", help="include the per-step walk trace")

    common(sub.add_parser("solve", help="find a cut or a violation certificate"))
    common(sub.add_parser("verify", help="check both input promises by brute force"))
    common(sub.add_parser("walk", help="emit the line trace, one JSON record per line"))
    gen = sub.add_parser("gen", help="generate a well-separated instance")
    common(gen, needs_input=False)
    gen.add_argument("--dimension", type=int, required=True)
    gen.add_argument("--sizes", required=True, help="comma separated point counts, one per color")
    gen.add_argument("--margin", type=float, default=1.0)
    gen.add_argument("--alpha", help="comma separated target; random when omitted")
    common(sub.add_parser("render", help="draw a planar instance and its certificate as SVG"))
    return ap


def _seed(raw):
    raw = raw if raw is not None else os.environ.get("ALPHA_CUT_SEED")
    if raw is None or raw == "":
        return 0
    try:
        seed = int(raw, 0)
    except ValueError:
        raise UsageError(f"seed must be an integer, got {raw!r}") from None
    if not 0 <= seed < 2**64:
        raise UsageError("seed must fit in 64 unsigned bits")
    return seed


def _read_instance(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_instance(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _dump(doc):
    return json.dumps(doc, indent=2) + "\n"


def _ints(text, what):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{what} must be comma separated integers") from None


def cmd_solve(args, seed):
    inst = _read_instance(args.input)
    result = solve(inst, seed=seed, budget=args.budget, trace=args.trace)
    doc = result.certificate.to_doc()
    if args.trace:
        doc["trace"] = result.trace
    _write(args.output, _dump(doc))
    return KIND_EXIT[result.certificate.kind]


def cmd_walk(args, seed):
    inst = _read_instance(args.input)
    result = solve(inst, seed=seed, budget=args.budget, trace=True)
    lines = [json.dumps(rec) for rec in result.trace]
    lines.append(json.dumps({"result": result.certificate.to_doc()}))
    _write(args.output, "\n".join(lines) + "\n")
    return KIND_EXIT[result.certificate.kind]


def cmd_verify(args, seed):
    inst = _read_instance(args.input)
    budget = DEFAULT_BUDGET if args.budget is None else args.budget
    gp = check_weak_general_position(inst, budget)
    sep = check_well_separation(inst, seed, budget)
    table = enumerate_cuts(inst, budget)
    report = {
        "weak_general_position": {"ok": gp is None, "witness": None if gp is None else [list(r) for r in gp]},
        "well_separation": {
            "ok": sep is None,
            "witness": None if sep is None else {"I": list(sep[0]), "J": list(sep[1]), "point": [str(c) for c in sep[2]]},
        },
        "bijection": table.is_bijection(),
        "cuts": len(table.cuts),
        "degenerate_tuples": len(table.degenerate),
    }
    _write(args.output, _dump(report))
    if gp is not None:
        return EXIT_GV1
    if sep is not None:
        return EXIT_GV2
    return EXIT_OK


def cmd_gen(args, seed):
    sizes = _ints(args.sizes, "sizes")
    alpha = _ints(args.alpha, "alpha") if args.alpha else None
    try:
        inst = generate_instance(args.dimension, sizes, args.margin, seed, alpha)
    except (ValueError, ParseError) as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, serialize_instance(inst) + "\n")
    return EXIT_OK


def cmd_render(args, seed):
    inst = _read_instance(args.input)
    if inst.d != 2:
        raise UsageError("render supports dimension 2 only")
    result = solve(inst, seed=seed, budget=args.budget, trace=args.trace)
    try:
        svg = render_svg(inst, result.certificate.to_doc(), result.trace if args.trace else ())
    except UnsupportedDimension as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, svg)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "walk": cmd_walk, "gen": cmd_gen, "render": cmd_render}


def main(argv=None):
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        seed = _seed(args.seed)
        return COMMANDS[args.command](args, seed)
    except UsageError as exc:
        print(f"alpha-cut: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"alpha-cut: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalError as exc:
        print(f"alpha-cut: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
