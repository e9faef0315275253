"""Per-mode comparison reports and random relative-error sweeps."""

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple

from .fpformat import (
    EXPONENT_BIAS,
    EXPONENT_MAX,
    FRACTION_BITS,
    FRACTION_MASK,
    MODE_WIDTHS,
    PrecisionMode,
    bits_to_float,
)
from .fpmul import FpResult, multiply_bits

REPORT_MODES = (
    PrecisionMode.AUTO,
    PrecisionMode.M8,
    PrecisionMode.M16,
    PrecisionMode.M23,
    PrecisionMode.M36,
    PrecisionMode.M52,
)
SWEEP_MODES = tuple(PrecisionMode.from_width(w) for w in MODE_WIDTHS)


def significand(bits: int) -> Optional[Tuple[float, int]]:
    """``(s, e)`` with ``value = ±s * 2**e`` for finite nonzero patterns, else None."""
    exp = (bits >> FRACTION_BITS) & EXPONENT_MAX
    frac = bits & FRACTION_MASK
    if exp == EXPONENT_MAX or (exp == 0 and frac == 0):
        return None
    if exp == 0:
        # denormal: renormalize for display
        shift = FRACTION_BITS - frac.bit_length() + 1
        return (frac << shift) / (1 << FRACTION_BITS), 1 - EXPONENT_BIAS - shift
    return 1 + frac / (1 << FRACTION_BITS), exp - EXPONENT_BIAS


def format_decimal(bits: int) -> str:
    """Ten significant digits in ``s x2^e`` form, or the special value's name."""
    sign = "-" if bits >> 63 else ""
    se = significand(bits)
    if se is not None:
        return f"{sign}{se[0]:.9f}x2^{se[1]}"
    exp_field = (bits >> FRACTION_BITS) & EXPONENT_MAX
    if exp_field == 0:
        return f"{sign}0"
    return f"{sign}inf" if bits & FRACTION_MASK == 0 else "nan"


def flag_names(r: FpResult) -> List[str]:
    return [name for name, on in r.flags.items() if on]


@dataclass(frozen=True)
class ModeReportRow:
    mode: PrecisionMode
    result: FpResult
    variation: Optional[float]

    @property
    def product_hex(self) -> str:
        return f"{self.result.product:016x}"

    @property
    def product_decimal(self) -> str:
        return format_decimal(self.result.product)


def mode_report(a_bits: int, b_bits: int) -> List[ModeReportRow]:
    """Multiply one operand pair in every mode; variation is against the 52-bit significand."""
    results = {m: multiply_bits(a_bits, b_bits, m) for m in REPORT_MODES}
    ref = significand(results[PrecisionMode.M52].product)
    rows = []
    for m in REPORT_MODES:
        s = significand(results[m].product)
        if ref is None or s is None:
            variation = 0.0 if results[m].product == results[PrecisionMode.M52].product else None
        else:
            variation = abs(s[0] - ref[0])
        rows.append(ModeReportRow(m, results[m], variation))
    return rows


def random_pairs(samples: int, seed: int) -> Iterator[Tuple[int, int]]:
    """Positive operands in [1, 2): exponent field fixed at the bias, random fraction."""
    rng = random.Random(seed)
    one = EXPONENT_BIAS << FRACTION_BITS
    for _ in range(samples):
        yield one | rng.getrandbits(FRACTION_BITS), one | rng.getrandbits(FRACTION_BITS)


@dataclass(frozen=True)
class SweepRow:
    mode: PrecisionMode
    mean_rel_err: float
    max_rel_err: float


def sweep(pairs: Iterable[Tuple[int, int]]) -> List[SweepRow]:
    """Relative error of each reduced mode measured against the 52-bit product."""
    totals = {m: 0.0 for m in SWEEP_MODES}
    worst = {m: 0.0 for m in SWEEP_MODES}
    count = 0
    for a, b in pairs:
        count += 1
        ref = bits_to_float(multiply_bits(a, b, PrecisionMode.M52).product)
        for m in SWEEP_MODES:
            if m is PrecisionMode.M52:
                continue
            got = bits_to_float(multiply_bits(a, b, m).product)
            err = abs(got - ref) / abs(ref) if ref else abs(got)
            totals[m] += err
            worst[m] = max(worst[m], err)
    if count == 0:
        raise ValueError("sweep needs at least one sample")
    return [SweepRow(m, totals[m] / count, worst[m]) for m in SWEEP_MODES]


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    lines = ["mode,mean_rel_err,max_rel_err"]
    lines += [f"{r.mode.width},{r.mean_rel_err!r},{r.max_rel_err!r}" for r in rows]
    return "\n".join(lines) + "\n"
