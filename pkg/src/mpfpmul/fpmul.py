"""Multi-precision floating-point multiplier.

Both operands are cut to the mode's mantissa width, their significands are
multiplied on the Karatsuba/Urdhva core, and the product is normalized back
into a binary64 pattern together with five status flags.
"""

from dataclasses import dataclass
from typing import Optional

from .bitmul import karatsuba
from .fpformat import (
    EXPONENT_BIAS,
    EXPONENT_MAX,
    FRACTION_BITS,
    FRACTION_MASK,
    FloatClass,
    PackedOperand,
    PrecisionMode,
    UnpackedFloat,
    auto_select,
    bits_to_float,
    classify,
    float_to_bits,
    round_tail,
    truncate_round_mantissa,
)

QUIET_NAN = 0x7FF8000000000000
SIGN_BIT = 1 << 63
_INFINITY_FIELD = EXPONENT_MAX << FRACTION_BITS
_VALID_MODES = frozenset(int(m) for m in PrecisionMode)


@dataclass(frozen=True)
class FpResult:
    product: int
    flag_zero: bool = False
    flag_infinity: bool = False
    flag_nan: bool = False
    flag_denormal: bool = False
    flag_mode_select_error: bool = False
    mode: Optional[PrecisionMode] = None  # resolved mode; None on mode-select error

    @classmethod
    def from_bits(cls, bits: int, mode: Optional[PrecisionMode] = None) -> "FpResult":
        c = classify((bits >> FRACTION_BITS) & EXPONENT_MAX, bits & FRACTION_MASK)
        return cls(
            bits,
            flag_zero=c is FloatClass.ZERO,
            flag_infinity=c is FloatClass.INFINITY,
            flag_nan=c is FloatClass.NAN,
            flag_denormal=c is FloatClass.DENORMAL,
            mode=mode,
        )

    @property
    def value(self) -> float:
        return bits_to_float(self.product)

    @property
    def flags(self) -> dict:
        return {
            "zero": self.flag_zero,
            "infinity": self.flag_infinity,
            "nan": self.flag_nan,
            "denormal": self.flag_denormal,
            "mode_select_error": self.flag_mode_select_error,
        }


MODE_SELECT_ERROR = FpResult(0, flag_mode_select_error=True)


def _post_round(value: int, discard: int, mode: PrecisionMode) -> int:
    # Full double precision truncates after the multiply; narrower modes round up.
    if discard <= 0:
        return value << -discard
    if mode is PrecisionMode.M52:
        return value >> discard
    return round_tail(value, discard)[0]


def _finite_product(sign: int, x: UnpackedFloat, y: UnpackedFloat, mode: PrecisionMode) -> int:
    m = mode.width
    fx, cx = truncate_round_mantissa(x.mantissa, m)
    fy, cy = truncate_round_mantissa(y.mantissa, m)
    exponent = x.biased_exponent + cx + y.biased_exponent + cy - EXPONENT_BIAS

    product = karatsuba((1 << m) | fx, (1 << m) | fy, m + 1)
    frac_bits = 2 * m
    if product >> (2 * m + 1):
        exponent += 1
        frac_bits += 1
    # product now reads as 1.f with frac_bits fraction bits

    sign_field = sign << 63
    if exponent >= 1:
        significand = _post_round(product, frac_bits - FRACTION_BITS, mode)
        if significand >> (FRACTION_BITS + 1):
            significand >>= 1
            exponent += 1
        if exponent >= EXPONENT_MAX:
            return sign_field | _INFINITY_FIELD
        return sign_field | (exponent << FRACTION_BITS) | (significand & FRACTION_MASK)

    # Below the normal range: denormal field holds value / 2^-1074. A round-up
    # that reaches bit 52 yields the smallest normal encoding on its own.
    shift = frac_bits - FRACTION_BITS + 1 - exponent
    return sign_field | _post_round(product, shift, mode)


def multiply(a: PackedOperand, b: PackedOperand) -> FpResult:
    """Multiply two packed operands at their (shared) precision mode."""
    if a.mode_bits != b.mode_bits or a.mode_bits not in _VALID_MODES:
        return MODE_SELECT_ERROR
    mode = PrecisionMode(a.mode_bits)
    x = UnpackedFloat.from_bits(a.bits)
    y = UnpackedFloat.from_bits(b.bits)
    if mode is PrecisionMode.AUTO:
        mode = auto_select(x.mantissa, y.mantissa)
    sign = x.sign ^ y.sign

    kx, ky = x.cls, y.cls
    # denormal inputs are flushed to zero
    if kx is FloatClass.DENORMAL:
        kx = FloatClass.ZERO
    if ky is FloatClass.DENORMAL:
        ky = FloatClass.ZERO

    if kx is FloatClass.NAN or ky is FloatClass.NAN:
        bits = QUIET_NAN
    elif kx is FloatClass.INFINITY or ky is FloatClass.INFINITY:
        if kx is FloatClass.ZERO or ky is FloatClass.ZERO:
            bits = QUIET_NAN
        else:
            bits = (sign << 63) | _INFINITY_FIELD
    elif kx is FloatClass.ZERO or ky is FloatClass.ZERO:
        bits = sign << 63
    else:
        bits = _finite_product(sign, x, y, mode)
    return FpResult.from_bits(bits, mode)


def multiply_bits(x_bits: int, y_bits: int, mode: PrecisionMode) -> FpResult:
    return multiply(PackedOperand.pack(mode, x_bits), PackedOperand.pack(mode, y_bits))


def multiply_floats(x: float, y: float, mode: PrecisionMode = PrecisionMode.M52) -> float:
    """Host-float convenience wrapper; raises if the multiplier reports a mode error."""
    result = multiply_bits(float_to_bits(x), float_to_bits(y), mode)
    if result.flag_mode_select_error:
        raise RuntimeError("mode-select error")
    return result.value
