"""Command line interface: ``flevel <command> -p P -f EXPR [options]``."""

import argparse
import json
import sys
from fractions import Fraction

from . import diffop, invariants
from .errors import CutoffExceeded, FlevelError
from .field import PrimeField
from .parse import format_operator, parse_operator, parse_poly
from .poly import format_poly

EXIT_OK, EXIT_INPUT, EXIT_CUTOFF = 0, 1, 2

# stable output order; commands fill a subset
FIELDS = (
    "command", "p", "f", "level", "determined", "stabilization_index", "hsl",
    "hasse_witt", "ordinary", "above_cy_bound", "nu", "fpt_lower", "fpt_upper",
    "grid_jump", "chain", "e", "method", "operator", "valid", "proportional_unit",
)


def _frac(x):
    if x is None:
        return None
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _load_poly(args):
    text = args.f
    if args.file:
        with open(args.file) as fh:
            text = fh.read().strip()
    if text is None:
        raise FlevelError("an expression is required (-f EXPR or --file PATH)")
    return parse_poly(text, args.p, args.nvars)


def _cy_fields(f, out):
    if invariants.is_calabi_yau_shape(f):
        hw = invariants.hasse_witt_scalar(f)
        out.update(hasse_witt=hw, ordinary=hw != 0, above_cy_bound=invariants.above_cy_bound(f))
    else:
        out.update(hasse_witt=None, ordinary=None)


def _level_fields(f, args, out):
    ch = invariants.FrobeniusChain(f, args.threads)
    try:
        res = invariants.level(ch, args.cutoff)
    except CutoffExceeded:
        out.update(level=None, determined=False, stabilization_index=None)
        raise
    k = res.stabilization_index
    out.update(level=res.level, determined=True, stabilization_index=k)
    return ch, res


def cmd_level(f, args, out):
    ch, res = _level_fields(f, args, out)
    out["hsl"] = invariants.hsl_number(ch, args.cutoff)
    _cy_fields(f, out)
    k = res.stabilization_index
    out["grid_jump"] = None if k == 0 else _frac(1 - Fraction(1, f.p**k))


def cmd_hsl(f, args, out):
    out["hsl"] = invariants.hsl_number(invariants.FrobeniusChain(f, args.threads), args.cutoff)


def cmd_fpt(f, args, out):
    bounds = invariants.fpt_bounds(f, args.max_e)
    out["nu"] = [b.nu for b in bounds]
    out["fpt_lower"] = _frac(bounds[-1].lower)
    out["fpt_upper"] = _frac(bounds[-1].upper)


def cmd_ordinary(f, args, out):
    hw = invariants.hasse_witt_scalar(f)
    out.update(hasse_witt=hw, ordinary=hw != 0, above_cy_bound=invariants.above_cy_bound(f))


def cmd_chain(f, args, out):
    _, res = _level_fields(f, args, out)
    out["chain"] = [[format_poly(g) for g in J.gens] for J in res.chain]


def cmd_jump(f, args, out):
    _, res = _level_fields(f, args, out)
    k = res.stabilization_index
    out["grid_jump"] = None if k == 0 else _frac(1 - Fraction(1, f.p**k))


def _cert_fields(cert, out):
    out.update(
        e=cert.e,
        method=cert.method or None,
        operator=format_operator(cert.op),
        valid=cert.valid,
        proportional_unit=cert.proportional_unit,
    )


def cmd_operator(args, out):
    if args.action == "fermat":
        if args.n is None:
            raise FlevelError("operator fermat needs -n")
        F = PrimeField(args.p)
        cert = diffop.fermat_level2(args.n, F)
        out["f"] = format_poly(diffop.fermat_poly(args.n, F))
        _cert_fields(cert, out)
        return
    f = _load_poly(args)
    out["f"] = format_poly(f)
    if args.action == "synth":
        cert = diffop.synthesize(f, args.e)
        if cert is None:
            out.update(e=args.e, operator=None, valid=False, proportional_unit=None)
            return
        _cert_fields(cert, out)
    else:
        if not args.op_file:
            raise FlevelError("operator verify needs --op-file")
        with open(args.op_file) as fh:
            op = parse_operator(fh.read())
        cert = diffop.verify_level_operator(op, f, args.e)
        _cert_fields(cert, out)


COMMANDS = {
    "level": cmd_level,
    "hsl": cmd_hsl,
    "fpt": cmd_fpt,
    "ordinary": cmd_ordinary,
    "chain": cmd_chain,
    "jump": cmd_jump,
}


class UsageError(FlevelError):
    code = "usage_error"


class _ArgumentParser(argparse.ArgumentParser):
    # argparse would exit with status 2, which is reserved for CutoffExceeded
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, required=True, help="odd prime characteristic")
    common.add_argument("-f", help="polynomial expression, e.g. 'x^3+y^3+z^3'")
    common.add_argument("--file", help="read the expression from a file")
    common.add_argument("--nvars", type=int, help="number of variables (default: inferred)")
    common.add_argument("--cutoff", type=int, default=invariants.DEFAULT_CUTOFF)
    common.add_argument("--max-e", type=int, default=2, dest="max_e")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--threads", type=int, default=1)

    parser = _ArgumentParser(
        prog="flevel", description="Level, HSL number and F-threshold data of hypersurfaces in characteristic p."
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    op = sub.add_parser("operator", parents=[common])
    op.add_argument("action", choices=["synth", "fermat", "verify"])
    op.add_argument("-e", type=int, default=2, help="operator level")
    op.add_argument("-n", type=int, help="Fermat hypersurface dimension")
    op.add_argument("--op-file", help="operator in canonical text form (verify)")
    return parser


def run(argv):
    """Execute a command; return (exit code, ordered report dict)."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return EXIT_INPUT, {"error": {"code": exc.code, "message": str(exc)}}
    out = {"command": args.command if args.command != "operator" else f"operator {args.action}"}
    code = EXIT_OK
    try:
        out["p"] = PrimeField(args.p).p
        if args.command == "operator":
            cmd_operator(args, out)
        else:
            f = _load_poly(args)
            out["f"] = format_poly(f)
            COMMANDS[args.command](f, args, out)
    except CutoffExceeded as exc:
        out["error"] = {"code": exc.code, "message": str(exc)}
        code = EXIT_CUTOFF
    except (FlevelError, ValueError, OSError) as exc:
        out["error"] = {"code": getattr(exc, "code", "input_error"), "message": str(exc)}
        code = EXIT_INPUT
    ordered = {k: out[k] for k in FIELDS if k in out}
    if "error" in out:
        ordered["error"] = out["error"]
    return code, ordered


def render_text(report):
    lines = []
    for key, value in report.items():
        if key == "operator" and value:
            lines.append("operator:")
            lines.extend("  " + ln for ln in value.rstrip("\n").split("\n"))
        elif key == "chain":
            for e, gens in enumerate(value):
                lines.append(f"J_{e}: ({', '.join(gens)})")
        elif key == "error":
            lines.append(f"error: [{value['code']}] {value['message']}")
        else:
            if isinstance(value, bool):
                value = str(value).lower()
            elif value is None:
                value = "none"
            elif isinstance(value, list):
                value = ", ".join(map(str, value))
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, report = run(argv)
    if "--json" in argv:
        print(json.dumps(report))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
