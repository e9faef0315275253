"""Command-line front end.

    mpfpmul matmul A.txt B.txt [--mode M] [--algorithm classical|strassen|fused] [--counters]
    mpfpmul multiply A B [--mode M]
    mpfpmul modes-report A B
    mpfpmul sweep [--samples N] [--seed S] [--out PATH]

Exit codes: 0 ok, 2 parse/usage/IO error, 3 order mismatch, 4 mode-select error.
"""

import argparse
import sys
from typing import List, Optional, Sequence, TextIO, Tuple

from . import analysis
from .fpformat import PackedOperand, PrecisionMode, bits_to_float, float_to_bits
from .fpmul import multiply
from .matmul import Matrix, ModeSelectError, OrderMismatch, classical_blocked, strassen_blocked, strassen_fused_topdown

EXIT_PARSE = 2
EXIT_ORDER = 3
EXIT_MODE = 4

MODE_CHOICES = ["auto", "8", "16", "23", "36", "52"]
ALGORITHMS = {
    "classical": classical_blocked,
    "strassen": strassen_blocked,
    "fused": strassen_fused_topdown,
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PARSE):
        super().__init__(message)
        self.code = code


def parse_double(text: str) -> int:
    """16 hex digits (``0x`` optional) to a binary64 bit pattern."""
    digits = text.strip().lower()
    if digits.startswith("0x"):
        digits = digits[2:]
    if len(digits) != 16:
        raise ValueError(f"expected 16 hex digits, got {text!r}")
    return int(digits, 16)


def parse_value(token: str) -> Tuple[float, bool]:
    """A matrix entry: ``0x`` + 16 hex digits (bit-exact) or a decimal literal."""
    if token.lower().startswith("0x"):
        return bits_to_float(parse_double(token)), True
    return float(token), False


def read_matrix(path: str) -> Tuple[Matrix, bool]:
    """Parse a matrix file; returns the matrix and whether any entry was hex."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    numbered = [(i + 1, ln.split()) for i, ln in enumerate(lines) if ln.strip()]
    if not numbered:
        raise CliError(f"{path}: empty file")
    lineno, header = numbered[0]
    try:
        (order_tok,) = header
        n = int(order_tok)
    except ValueError:
        raise CliError(f"{path}:{lineno}: header must be a single integer order") from None
    if n < 2 or n & (n - 1):
        raise CliError(f"{path}:{lineno}: order {n} is not a power of two >= 2")
    body = numbered[1:]
    if len(body) != n:
        raise CliError(f"{path}: expected {n} rows, found {len(body)}")
    values: List[float] = []
    any_hex = False
    for lineno, tokens in body:
        if len(tokens) != n:
            raise CliError(f"{path}:{lineno}: expected {n} values, found {len(tokens)}")
        for tok in tokens:
            try:
                v, is_hex = parse_value(tok)
            except ValueError:
                raise CliError(f"{path}:{lineno}: cannot parse value {tok!r}") from None
            values.append(v)
            any_hex |= is_hex
    return Matrix(n, values), any_hex


def format_matrix(m: Matrix, fmt: str) -> str:
    if fmt == "hex":
        cell = lambda x: f"0x{float_to_bits(x):016x}"
    else:
        cell = repr
    lines = [str(m.order)] + [" ".join(cell(x) for x in row) for row in m.rows()]
    return "\n".join(lines) + "\n"


def cmd_matmul(args, out: TextIO) -> int:
    a, hex_a = read_matrix(args.file_a)
    b, hex_b = read_matrix(args.file_b)
    if a.order != b.order:
        raise CliError(f"order mismatch: {a.order} vs {b.order}", EXIT_ORDER)
    mode = PrecisionMode.parse(args.mode)
    try:
        product, counters = ALGORITHMS[args.algorithm](a, b, mode)
    except OrderMismatch as exc:
        raise CliError(str(exc), EXIT_ORDER) from None
    except ModeSelectError:
        raise CliError("mode-select error", EXIT_MODE) from None
    fmt = args.format or ("hex" if hex_a or hex_b else "dec")
    out.write(format_matrix(product, fmt))
    if args.counters:
        out.write(f"multiplications: {counters.multiplications}\n")
        out.write(f"additions: {counters.additions}\n")
    return 0


def parse_operand(text: str, mode: PrecisionMode) -> PackedOperand:
    """17 hex digits carry their own mode bits; 16 hex digits take ``mode``."""
    digits = text.strip().lower()
    if digits.startswith("0x"):
        digits = digits[2:]
    if len(digits) == 17:
        return PackedOperand.from_hex(digits)
    return PackedOperand.pack(mode, parse_double(digits))


def cmd_multiply(args, out: TextIO) -> int:
    mode = PrecisionMode.parse(args.mode)
    try:
        a = parse_operand(args.a, mode)
        b = parse_operand(args.b, mode)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    r = multiply(a, b)
    if r.flag_mode_select_error:
        raise CliError("mode-select error: operand modes differ or are invalid", EXIT_MODE)
    flags = ",".join(analysis.flag_names(r)) or "-"
    out.write(f"{r.product:016x} {analysis.format_decimal(r.product)} mode={r.mode.label} flags={flags}\n")
    return 0


def cmd_modes_report(args, out: TextIO) -> int:
    try:
        a = parse_double(args.a)
        b = parse_double(args.b)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    rows = analysis.mode_report(a, b)
    out.write(f"{'mode':<8} {'product':<16}  {'decimal':<20} {'variation':<12} flags\n")
    for row in rows:
        var = "-" if row.variation is None else f"{row.variation:.9f}"
        flags = ",".join(analysis.flag_names(row.result)) or "-"
        label = row.mode.label
        if row.mode is PrecisionMode.AUTO:
            label += f"->{row.result.mode.label}"
        out.write(f"{label:<8} {row.product_hex:<16}  {row.product_decimal:<20} {var:<12} {flags}\n")
    return 0


def cmd_sweep(args, out: TextIO) -> int:
    if args.samples < 1:
        raise CliError("--samples must be >= 1")
    rows = analysis.sweep(analysis.random_pairs(args.samples, args.seed))
    text = analysis.sweep_csv(rows)
    if args.out in (None, "-"):
        out.write(text)
        return 0
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"{args.out}: {exc.strerror}") from None
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mpfpmul", description="Multi-precision floating-point matrix multiplier model.")
    sub = p.add_subparsers(dest="command", required=True)

    mm = sub.add_parser("matmul", help="multiply two matrix files")
    mm.add_argument("file_a")
    mm.add_argument("file_b")
    mm.add_argument("--mode", choices=MODE_CHOICES, default="52")
    mm.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="strassen")
    mm.add_argument("--counters", action="store_true", help="print multiplication/addition counts")
    mm.add_argument("--format", choices=["hex", "dec"], help="output format (default: hex if any input was hex)")
    mm.set_defaults(func=cmd_matmul)

    mu = sub.add_parser("multiply", help="multiply two scalars")
    mu.add_argument("a", help="17 hex digits (packed, with mode bits) or 16 hex digits (binary64)")
    mu.add_argument("b")
    mu.add_argument("--mode", choices=MODE_CHOICES, default="52", help="mode for 16-digit operands")
    mu.set_defaults(func=cmd_multiply)

    mr = sub.add_parser("modes-report", help="product of two doubles in every precision mode")
    mr.add_argument("a", help="16 hex digits")
    mr.add_argument("b", help="16 hex digits")
    mr.set_defaults(func=cmd_modes_report)

    sw = sub.add_parser(
        "sweep",
        help="relative-error sweep per mode",
        description="Draws random positive operands in [1, 2) (exponent 0) so only mantissa "
        "truncation contributes, and reports per-mode error against the 52-bit product as CSV.",
    )
    sw.add_argument("--samples", type=int, default=10_000)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"mpfpmul: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
