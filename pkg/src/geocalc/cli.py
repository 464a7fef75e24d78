"""Command-line front end.

One subcommand per operation; numbers use the same decimal-literal
grammar as the library.  `--resolution` switches a supporting
subcommand into device mode: the value is measured on the simulated
instrument and reported with its worst-case half width.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal

from .cascade import divide, geometric_mean, multiply, power, reciprocal
from .diagram import render_svg, write_svg
from .errors import GeocalcError
from .euler import antilog, approximate_e, natural_log
from .exponents import (evaluate_cf, recover_rational_exponent,
                        solve_integer_exponent)
from .mechsim import MeasurementModel, run_op as device_op, run_script
from .numcore import (DEFAULT_POLICY, PrecisionPolicy, SignedScaled,
                      normalize, to_text)
from .roots import RootQuery, nth_root, rational_power
from .trace import TraceRecorder, parse_trace

RESULT_SCHEMA = {
    "type": "object",
    "required": ["op", "inputs", "result"],
    "properties": {
        "op": {"type": "string"},
        "inputs": {"type": "array", "items": {"type": "string"}},
        "result": {"type": "string"},
        "error_bound": {"type": "string"},
        "cf": {"type": "string"},
        "trace_path": {"type": "string"},
    },
    "additionalProperties": False,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _decimal(text: str) -> Decimal:
    try:
        return Decimal(text)
    except ArithmeticError:
        raise ValueError(f"not a decimal: {text!r}")


def _policy(args) -> PrecisionPolicy:
    working = max(30, args.digits + 10)
    return PrecisionPolicy(working_digits=working, oracle_digits=2 * working,
                           rel_tol=args.tol)


def _fmt_decimal(d: Decimal, digits: int) -> str:
    if d == 0:
        return "0"
    return to_text(SignedScaled.from_decimal(d), digits)


def _emit(args, payload: dict, plain: str) -> str:
    if args.json:
        return json.dumps(payload, sort_keys=True)
    return plain


def _finish_trace(args, recorder: TraceRecorder | None, payload: dict):
    if recorder is None:
        return
    if args.emit_trace:
        recorder.write(args.emit_trace)
        payload["trace_path"] = args.emit_trace
    if args.diagram:
        write_svg(recorder.steps, args.diagram)


def _recorder_for(args) -> TraceRecorder | None:
    wants = getattr(args, "emit_trace", None) or getattr(args, "diagram", None)
    if not wants:
        return None
    if getattr(args, "backend", "construction") != "construction":
        raise _UsageError("traces exist only on the construction backend")
    return TraceRecorder()


def _device_result(args, op: str, inputs: list[str]) -> str:
    if getattr(args, "backend", "construction") == "oracle":
        raise _UsageError("device mode implies the construction backend")
    model = MeasurementModel(resolution=args.resolution)
    res = device_op(op, inputs, model, _policy(args))
    value = to_text(res.value, args.digits)
    bound = _fmt_decimal(res.half_width, 3)
    payload = {"op": op, "inputs": inputs, "result": value,
               "error_bound": bound}
    return _emit(args, payload, f"{value} +/- {bound}")


def _engine_result(args, op: str, inputs: list[str], value: SignedScaled,
                   recorder: TraceRecorder | None,
                   extra: dict | None = None) -> str:
    text = to_text(value, args.digits)
    payload = {"op": op, "inputs": inputs, "result": text}
    if extra:
        payload.update(extra)
    _finish_trace(args, recorder, payload)
    return _emit(args, payload, text)


# --- handlers -----------------------------------------------------------

def _h_pow(args):
    if args.resolution is not None:
        return _device_result(args, "pow", [args.x, str(args.n)])
    rec = _recorder_for(args)
    v = power(normalize(args.x), args.n, policy=_policy(args),
              backend=args.backend, recorder=rec)
    return _engine_result(args, "pow", [args.x, str(args.n)], v, rec)


def _h_root(args):
    if args.resolution is not None:
        return _device_result(args, "root", [args.x, str(args.n)])
    rec = _recorder_for(args)
    v = nth_root(RootQuery(normalize(args.x), args.n), policy=_policy(args),
                 backend=args.backend, recorder=rec)
    return _engine_result(args, "root", [args.x, str(args.n)], v, rec)


def _h_powfrac(args):
    rec = _recorder_for(args)
    v = rational_power(normalize(args.x), args.m, args.n,
                       policy=_policy(args), backend=args.backend,
                       recorder=rec)
    return _engine_result(args, "powfrac",
                          [args.x, str(args.m), str(args.n)], v, rec)


def _h_recip(args):
    if args.resolution is not None:
        return _device_result(args, "recip", [args.x])
    rec = _recorder_for(args)
    v = reciprocal(normalize(args.x), policy=_policy(args),
                   backend=args.backend, recorder=rec)
    return _engine_result(args, "recip", [args.x], v, rec)


def _h_mul(args):
    if args.resolution is not None:
        return _device_result(args, "mul", [args.a, args.b])
    rec = _recorder_for(args)
    v = multiply(normalize(args.a), normalize(args.b), policy=_policy(args),
                 backend=args.backend, recorder=rec)
    return _engine_result(args, "mul", [args.a, args.b], v, rec)


def _h_div(args):
    if args.resolution is not None:
        return _device_result(args, "div", [args.a, args.b])
    rec = _recorder_for(args)
    v = divide(normalize(args.a), normalize(args.b), policy=_policy(args),
               backend=args.backend, recorder=rec)
    return _engine_result(args, "div", [args.a, args.b], v, rec)


def _h_gmean(args):
    if args.resolution is not None:
        return _device_result(args, "gmean", [args.a, args.b])
    rec = _recorder_for(args)
    v = geometric_mean(normalize(args.a), normalize(args.b),
                       policy=_policy(args), backend=args.backend,
                       recorder=rec)
    return _engine_result(args, "gmean", [args.a, args.b], v, rec)


def _h_ln(args):
    d = natural_log(normalize(args.a), depth=args.cf_depth,
                    policy=_policy(args))
    text = _fmt_decimal(d, args.digits)
    payload = {"op": "ln", "inputs": [args.a], "result": text}
    return _emit(args, payload, text)


def _h_antilog(args):
    v = antilog(_decimal(args.t), policy=_policy(args))
    text = to_text(v, args.digits)
    payload = {"op": "antilog", "inputs": [args.t], "result": text}
    return _emit(args, payload, text)


def _h_euler(args):
    approx = approximate_e(args.n, policy=_policy(args))
    text = _fmt_decimal(approx.value, args.digits)
    bound = _fmt_decimal(approx.error_bound, 3)
    payload = {"op": "euler", "inputs": [str(args.n)], "result": text,
               "error_bound": bound}
    return _emit(args, payload, f"{text} (error < {bound})")


def _h_solve_n(args):
    n = solve_integer_exponent(normalize(args.x), normalize(args.a),
                               args.max_n, policy=_policy(args))
    payload = {"op": "solve-n", "inputs": [args.x, args.a], "result": str(n)}
    return _emit(args, payload, str(n))


def _h_solve_mn(args):
    if args.resolution is not None:
        return _device_result(args, "cf", [args.x, args.a])
    cf = recover_rational_exponent(normalize(args.x), normalize(args.a),
                                   max_depth=args.cf_depth,
                                   cf_tol=args.cf_tol, policy=_policy(args))
    frac = evaluate_cf(cf)
    result = f"{frac.numerator}/{frac.denominator}"
    payload = {"op": "solve-mn", "inputs": [args.x, args.a],
               "result": result, "cf": cf.to_text()}
    return _emit(args, payload, f"{cf.to_text()} = {result}")


def _h_simulate(args):
    if args.script == "-":
        text = sys.stdin.read()
    else:
        with open(args.script, "r", encoding="ascii") as fh:
            text = fh.read()
    model = MeasurementModel(resolution=args.resolution)
    results = run_script(text, model=model, policy=_policy(args))
    lines = []
    for res in results:
        value = to_text(res.value, args.digits)
        bound = _fmt_decimal(res.half_width, 3)
        if args.json:
            lines.append(json.dumps(
                {"op": "simulate", "inputs": [args.script], "result": value,
                 "error_bound": bound}, sort_keys=True))
        else:
            lines.append(f"{value} +/- {bound}")
    return "\n".join(lines)


def _h_diagram(args):
    with open(args.trace, "r", encoding="ascii") as fh:
        steps = parse_trace(fh.read())
    svg = render_svg(steps, title=args.title)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(svg)
    payload = {"op": "diagram", "inputs": [args.trace], "result": args.out,
               "trace_path": args.trace}
    return _emit(args, payload, args.out)


# --- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=int, default=5,
                        help="significant digits to display (default 5)")
    common.add_argument("--tol", type=_decimal, default=None,
                        help="relative tolerance for searches")
    common.add_argument("--json", action="store_true",
                        help="emit a JSON object instead of plain text")

    backend = _Parser(add_help=False)
    backend.add_argument("--backend", choices=("construction", "oracle"),
                         default="construction")

    trace = _Parser(add_help=False)
    trace.add_argument("--emit-trace", metavar="PATH", default=None,
                       help="write the construction trace to PATH")
    trace.add_argument("--diagram", metavar="PATH", default=None,
                       help="render the construction to an SVG at PATH")

    res = _Parser(add_help=False)
    res.add_argument("--resolution", type=_decimal, default=None,
                     help="graduation size in metres; enables device mode")

    cf = _Parser(add_help=False)
    cf.add_argument("--cf-depth", type=int, default=16)
    cf.add_argument("--cf-tol", type=_decimal, default=Decimal("1e-12"))

    parser = _Parser(prog="geocalc",
                     description="scaled-decimal geometric calculator")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("pow", parents=[common, backend, trace, res],
                       help="integer power x**n")
    p.add_argument("x")
    p.add_argument("n", type=int)
    p.set_defaults(func=_h_pow)

    p = sub.add_parser("root", parents=[common, backend, trace, res],
                       help="principal n-th root")
    p.add_argument("x")
    p.add_argument("n", type=int)
    p.set_defaults(func=_h_root)

    p = sub.add_parser("powfrac", parents=[common, backend, trace],
                       help="rational power x**(m/n)")
    p.add_argument("x")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=_h_powfrac)

    p = sub.add_parser("recip", parents=[common, backend, trace, res],
                       help="reciprocal 1/x")
    p.add_argument("x")
    p.set_defaults(func=_h_recip)

    p = sub.add_parser("mul", parents=[common, backend, trace, res],
                       help="product a*b")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_h_mul)

    p = sub.add_parser("div", parents=[common, backend, trace, res],
                       help="quotient a/b")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_h_div)

    p = sub.add_parser("gmean", parents=[common, backend, trace, res],
                       help="geometric mean of a and b")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_h_gmean)

    p = sub.add_parser("ln", parents=[common, cf],
                       help="natural logarithm")
    p.add_argument("a")
    p.set_defaults(func=_h_ln)

    p = sub.add_parser("antilog", parents=[common],
                       help="exp(t) from a logarithm t")
    p.add_argument("t")
    p.set_defaults(func=_h_antilog)

    p = sub.add_parser("euler", parents=[common],
                       help="(1 + 1/n)**n with its error bound")
    p.add_argument("n", type=int)
    p.set_defaults(func=_h_euler)

    p = sub.add_parser("solve-n", parents=[common],
                       help="integer exponent with x**n == a")
    p.add_argument("--x", required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--max-n", type=int, default=1000)
    p.set_defaults(func=_h_solve_n)

    p = sub.add_parser("solve-mn", parents=[common, cf, res],
                       help="rational exponent m/n with x**(m/n) == a")
    p.add_argument("--x", required=True)
    p.add_argument("--a", required=True)
    p.set_defaults(func=_h_solve_mn)

    p = sub.add_parser("simulate", parents=[common],
                       help="run a device measurement script")
    p.add_argument("script", help="script path, or - for stdin")
    p.add_argument("--resolution", type=_decimal,
                   default=Decimal("1e-5"))
    p.set_defaults(func=_h_simulate)

    p = sub.add_parser("diagram", parents=[common],
                       help="render a saved trace to SVG")
    p.add_argument("trace")
    p.add_argument("out")
    p.add_argument("--title", default=None)
    p.set_defaults(func=_h_diagram)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = args.func(args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except GeocalcError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if out:
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
