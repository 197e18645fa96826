"""Command-line driver: parse, type, evaluate and print a program.

Exit status: 0 on success, 1 on type, scope or evaluation errors, 2 on syntax
errors, 3 when a checked property fails (a non-interference violation, or a
result value that does not inhabit the inferred type).
"""
from __future__ import annotations

import argparse
import io
import sys

from .analysis import check_noninterference
from .errors import CalculusError, InvariantViolation
from .evaluate import DEFAULT_MAX_STEPS, eval_classic, eval_open
from .infer import infer
from .parser import parse, parse_context
from .printer import print_annotated_context, print_term, print_type, print_value, render_derivation
from .runtime import check_value
from .syntax import annotate

HARNESS_FAILURE = 3


def build_parser():
    p = argparse.ArgumentParser(
        prog="openclosure",
        description="Type and evaluate a program of the open closure types calculus.",
    )
    p.add_argument("file", nargs="?", help="source file (default: standard input)")
    p.add_argument("-e", "--expr", help="program text given on the command line")
    p.add_argument("--context", help="typing context for free variables, e.g. 'x:a, y:b'")
    p.add_argument("--strict", action="store_true", help="reject unbound variables instead of auto-binding them")
    p.add_argument("--typing-derivation", action="store_true", help="print the typing derivation")
    p.add_argument("--reduction-derivation", action="store_true", help="print the reduction derivation")
    p.add_argument("--check-noninterference", action="store_true", help="enumerate valuation pairs and check non-interference")
    p.add_argument("--report-format", choices=("text", "jsonl"), default="text", help="non-interference report format")
    p.add_argument("--classic", action="store_true", help="evaluate with the environment-capturing semantics")
    p.add_argument("--self-check", action="store_true", help="check value typing at every substitution step")
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS, metavar="N", help="evaluation budget")
    p.add_argument("--ascii", action="store_true", help="ASCII output (^0, \\, ->, |-)")
    return p


def _unbound_note(names):
    if len(names) == 1:
        (x,) = names
        return (
            f"The variable ({x}) was unbound; we add it to the default\n"
            f"environment with dummy type (ty_{x}) and value\n(val_{x})."
        )
    return (
        f"The variables ({', '.join(names)}) were unbound; we add them to the default\n"
        f"environment with dummy types ({', '.join('ty_' + x for x in names)}) and values\n"
        f"({', '.join('val_' + x for x in names)})."
    )


def _session(args, src, out):
    a = args.ascii
    context = parse_context(args.context) if args.context else ()
    prog = parse(src, context, strict=args.strict)
    ctx, term = prog.context, prog.term
    print(f"Parsed expression: {print_term(term, a)}", file=out)
    if prog.auto_bound:
        print(file=out)
        print(_unbound_note(prog.auto_bound), file=out)

    phi, ty, tderiv = infer(ctx, term)
    vd = "|-" if a else "⊢"
    print(file=out)
    print("Inferred typing:", file=out)
    print(f"  {print_annotated_context(annotate(ctx, phi), a)} {vd}".replace("   ", "  "), file=out)
    print(f"    {print_term(term, a)}", file=out)
    print(f"    : {print_type(ty, a)}", file=out)
    if args.typing_derivation:
        print(file=out)
        print("Typing derivation:", file=out)
        print(render_derivation(tderiv, a), file=out)

    status = 0
    if args.classic:
        value, rderiv = eval_classic(prog.valuation, term, max_steps=args.max_steps)
    else:
        value, rderiv = eval_open(prog.valuation, term, ctx, max_steps=args.max_steps, self_check=args.self_check)
    print(file=out)
    print("Result value:", file=out)
    print(f"    {print_value(value, a)}", file=out)
    if args.reduction_derivation:
        print(file=out)
        print("Reduction derivation:", file=out)
        print(render_derivation(rderiv, a), file=out)
    if not args.classic:
        try:
            check_value(ctx, value, ty)
        except CalculusError as exc:
            raise InvariantViolation(f"result value does not inhabit the inferred type: {exc}")

    if args.check_noninterference:
        report = check_noninterference(ctx, term, max_steps=args.max_steps)
        print(file=out)
        print("Non-interference:", file=out)
        if args.report_format == "jsonl":
            out.write(report.to_jsonl())
            print(f"{report.pairs_tested} pairs tested, {len(report.violations)} violations", file=out)
        else:
            print(report.to_text(a), file=out)
        if not report.ok:
            status = HARNESS_FAILURE
    return status


def run(argv, stdin=None):
    """Run the driver; returns ``(exit status, stdout text, stderr text)``."""
    out, err = io.StringIO(), io.StringIO()
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0), out.getvalue(), err.getvalue()
    if args.expr is not None:
        src = args.expr
    elif args.file and args.file != "-":
        try:
            with open(args.file, encoding="utf-8") as fh:
                src = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=err)
            return 2, out.getvalue(), err.getvalue()
    else:
        src = (stdin if stdin is not None else sys.stdin).read()
    try:
        status = _session(args, src, out)
    except InvariantViolation as exc:
        print(f"error: {exc}", file=err)
        status = HARNESS_FAILURE
    except CalculusError as exc:
        print(f"error: {exc}", file=err)
        status = exc.exit_code
    return status, out.getvalue(), err.getvalue()


def main(argv=None):
    status, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
