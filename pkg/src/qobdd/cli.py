"""Command-line interface.

Exit codes: 0 success, 1 parse or validation failure, 2 usage error,
3 size guard exceeded. Numbers are printed with 12 significant digits and
tables are tab-separated with rows in lexicographic input order.
"""

from __future__ import annotations

import argparse
import ast
import math
import operator
import sys

from . import classical, io, layer_collapse, synthesis
from .errors import GuardExceeded, ValidationError
from .evaluator import all_inputs, acceptance, evaluate, format_bits, parse_bits, truth_map
from .program import build_rotation_program, random_program

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
# exhaustive per-input reports stop here
TABLE_LIMIT = 12


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, ".12g")


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv}


def parse_angle(text: str) -> float:
    """Evaluate ``"pi/2"``, ``"π/4"``, ``"3*pi/8"``, ``"0.3"`` and similar."""
    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise ValueError
    try:
        return ev(ast.parse(text.replace("π", "pi"), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an angle expression: {text!r}") from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_any(path: str):
    """Program or deterministic OBDD, depending on the document kind."""
    text = _read(path)
    if io.document_kind(text) == io.KIND_DET:
        return io.parse_det(text)
    return io.parse_program(text)


def _load_program(path: str):
    return io.parse_program(_read(path))


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        io.write_text(out, text)


def _acceptance_of(obj, bits) -> float:
    if isinstance(obj, classical.DetObdd):
        return 1.0 if classical.eval_det(obj, bits) else 0.0
    return acceptance(obj, bits)


def _check_table_size(n: int) -> None:
    if n > TABLE_LIMIT:
        raise GuardExceeded(f"exhaustive comparison over n={n} variables exceeds limit {TABLE_LIMIT}")


# -- subcommands ------------------------------------------------------------

def cmd_validate(args) -> int:
    obj = _load_any(args.file)
    if isinstance(obj, classical.DetObdd):
        rev = "reversible" if classical.is_reversible(obj) else "not reversible"
        print(f"valid\tdet-obdd\tn={obj.n}\twidth={obj.width}\t{rev}")
    else:
        print(f"valid\tk-qobdd\tn={obj.n}\tk={obj.k}\twidth={obj.width}"
              f"\tlength={obj.length}\tsize={obj.size}")
    return EXIT_OK


def cmd_eval(args) -> int:
    p = _load_program(args.file)
    try:
        bits = parse_bits(args.input)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(bits) != p.n:
        raise UsageError(f"--input has {len(bits)} bits but the program reads {p.n} variables")
    rep = evaluate(p, bits)
    print(f"input\t{format_bits(bits)}")
    print("state\tre\tim\tprobability\taccepting")
    for j, z in enumerate(rep.beta):
        mark = "yes" if j in p.accepting else "no"
        print(f"{j}\t{fmt(z.real)}\t{fmt(z.imag)}\t{fmt(abs(z) ** 2)}\t{mark}")
    print(f"acceptance\t{fmt(rep.acceptance)}")
    print(f"residual_matrix_product\t{fmt(rep.residual_matrix_product)}")
    ps = "skipped" if rep.residual_path_sum is None else fmt(rep.residual_path_sum)
    print(f"residual_path_sum\t{ps}")
    return EXIT_OK


def cmd_truth_table(args) -> int:
    obj = _load_any(args.file)
    print("input\tacceptance\taccept")
    if isinstance(obj, classical.DetObdd):
        if obj.n > 20:
            raise GuardExceeded(f"truth table over n={obj.n} variables exceeds limit 20")
        for bits in all_inputs(obj.n):
            ok = classical.eval_det(obj, bits)
            print(f"{format_bits(bits)}\t{fmt(1.0 if ok else 0.0)}\t{'yes' if ok else 'no'}")
        return EXIT_OK
    for row in truth_map(obj, args.threshold, strict=not args.weak):
        print(f"{format_bits(row.bits)}\t{fmt(row.acceptance)}\t{'yes' if row.accepted else 'no'}")
    return EXIT_OK


def cmd_binary(args) -> int:
    b1, b2 = _load_program(args.file1), _load_program(args.file2)
    op = synthesis.and_synthesis if args.command == "and" else synthesis.or_synthesis
    try:
        out = op(b1, b2)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    io.write_text(args.output, io.serialize_program(out))
    print(f"{args.command}\twidth={out.width}\tlength={out.length}\tsize={out.size}")
    return EXIT_OK


def cmd_not(args) -> int:
    out = synthesis.not_synthesis(_load_program(args.file))
    io.write_text(args.output, io.serialize_program(out))
    print(f"not\twidth={out.width}\tlength={out.length}\tsize={out.size}")
    return EXIT_OK


def cmd_collapse(args) -> int:
    p = _load_program(args.file)
    if args.coherent:
        q, predict, label = layer_collapse.collapse_coherent(p), layer_collapse.coherent_predicted_acceptance, "coherent"
    else:
        q, predict, label = layer_collapse.collapse(p), layer_collapse.predicted_acceptance, "affine"
    io.write_text(args.output, io.serialize_program(q))
    print(f"construction\t{label}")
    print(f"before\twidth={p.width}\tlength={p.length}\tsize={p.size}")
    print(f"after\twidth={q.width}\tlength={q.length}\tsize={q.size}")
    if p.n > TABLE_LIMIT:
        print(f"residuals\tskipped (n > {TABLE_LIMIT})")
        return EXIT_OK
    print("input\toriginal\tcollapsed\tpredicted\tresidual")
    worst = 0.0
    for bits in all_inputs(p.n):
        orig = acceptance(p, bits)
        got = acceptance(q, bits)
        want = predict(orig, p.width, p.k)
        worst = max(worst, abs(got - want))
        print(f"{format_bits(bits)}\t{fmt(orig)}\t{fmt(got)}\t{fmt(want)}\t{fmt(abs(got - want))}")
    print(f"max_residual\t{fmt(worst)}")
    return EXIT_OK


def cmd_lift(args) -> int:
    d = io.parse_det(_read(args.file))
    q = classical.lift_reversible(d)
    io.write_text(args.output, io.serialize_program(q))
    print(f"lift\twidth={q.width}\tlength={q.length}\tsize={q.size}")
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.family == "no_n":
        if len(args.params) != 1:
            raise UsageError("demo no_n takes one argument: N")
        n = _positive_int(args.params[0], "N")
        if n < 2:
            raise UsageError("NO_n needs N >= 2")
        _emit(io.serialize_det(classical.build_no_n(n)), args.output)
        return EXIT_OK
    if len(args.params) != 2:
        raise UsageError("demo parity takes two arguments: N THETA")
    n = _positive_int(args.params[0], "N")
    try:
        theta = parse_angle(args.params[1])
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None
    p = build_rotation_program(n, theta, {1}, k=args.k)
    p = p.with_accepting(p.accepting, f"parity n={n} theta={args.params[1]} k={args.k}")
    _emit(io.serialize_program(p), args.output)
    return EXIT_OK


def cmd_random(args) -> int:
    for name in ("width", "k", "n"):
        if getattr(args, name) < 1:
            raise UsageError(f"--{name} must be positive")
    p = random_program(args.width, args.k, args.n, args.seed, shuffle_ordering=args.shuffle_ordering)
    io.write_text(args.output, io.serialize_program(p))
    print(f"random\twidth={p.width}\tk={p.k}\tn={p.n}\tseed={args.seed}")
    return EXIT_OK


def cmd_compare(args) -> int:
    a, b = _load_any(args.file1), _load_any(args.file2)
    if a.n != b.n:
        raise UsageError(f"programs read different variable counts: {a.n} vs {b.n}")
    _check_table_size(a.n)
    worst, where = -1.0, None
    for bits in all_inputs(a.n):
        diff = abs(_acceptance_of(a, bits) - _acceptance_of(b, bits))
        if diff > worst:
            worst, where = diff, bits
    print(f"max_difference\t{fmt(worst)}")
    print(f"at_input\t{format_bits(where)}")
    return EXIT_OK


def _positive_int(text: str, what: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise UsageError(f"{what} must be an integer, got {text!r}") from None
    if v < 1:
        raise UsageError(f"{what} must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qobdd", description="Simulate, combine and collapse quantum OBDDs and k-QOBDDs.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a program or det-obdd document")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("eval", help="final amplitudes and acceptance on one input")
    s.add_argument("file")
    s.add_argument("--input", required=True, metavar="BITS", help="value of x1..xn, e.g. 0110")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("truth-table", help="acceptance on every input, as TSV")
    s.add_argument("file")
    s.add_argument("--threshold", type=float, default=0.5)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", help="accept iff acceptance > threshold (default)")
    mode.add_argument("--weak", action="store_true", help="accept iff acceptance >= threshold")
    s.set_defaults(func=cmd_truth_table)

    for name in ("and", "or"):
        s = sub.add_parser(name, help=f"{name}-synthesis of two programs")
        s.add_argument("file1")
        s.add_argument("file2")
        s.add_argument("-o", "--output", required=True)
        s.set_defaults(func=cmd_binary)

    s = sub.add_parser("not", help="complement the accepting set")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_not)

    s = sub.add_parser("collapse", help="collapse a k-QOBDD into a QOBDD")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--coherent", action="store_true",
                   help="use the guess-register construction (width w^(2k-1)+2)")
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("lift", help="lift a reversible det-obdd to a QOBDD")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("demo", help="write a demo document: 'no_n N' or 'parity N THETA'")
    s.add_argument("family", choices=["no_n", "parity"])
    s.add_argument("params", nargs="*")
    s.add_argument("--k", type=int, default=1, help="layers for the parity demo")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("random", help="write a seeded random k-QOBDD")
    s.add_argument("--width", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--shuffle-ordering", action="store_true")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_random)

    s = sub.add_parser("compare", help="largest acceptance difference over all inputs")
    s.add_argument("file1")
    s.add_argument("file2")
    s.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "demo" and args.k < 1:
        print("qobdd: error: --k must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qobdd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as exc:
        print(f"qobdd: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValidationError as exc:
        print(f"qobdd: invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
