"""Independent reference models used only by the tests.

Nothing here touches the package's bit-slicing code: significands are handled
as exact rationals and rounding is stated in terms of the discarded remainder.
"""

import math
import struct
from fractions import Fraction

BIAS = 1023
MIN_EXP = -1022


def shift_add(a: int, b: int) -> int:
    """Schoolbook shift-and-add product."""
    acc = 0
    i = 0
    while b:
        if b & 1:
            acc += a << i
        b >>= 1
        i += 1
    return acc


def to_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", x))[0]


def from_bits(b: int) -> float:
    return struct.unpack("<d", struct.pack("<Q", b))[0]


def _floor_log2(q: Fraction) -> int:
    e = q.numerator.bit_length() - q.denominator.bit_length()
    if Fraction(2) ** e > q:
        e -= 1
    return e


def quantize(q: Fraction, frac_bits: int, tie_down: bool) -> Fraction:
    """Keep ``frac_bits`` fraction bits of positive ``q`` (subnormal quantum below 2^-1022).

    tie_down=True rounds up only when the remainder exceeds half a unit;
    tie_down=False truncates.
    """
    e = max(_floor_log2(q), MIN_EXP)
    unit = Fraction(2) ** (e - frac_bits)
    scaled = q / unit
    n = math.floor(scaled)
    if tie_down and scaled - n > Fraction(1, 2):
        n += 1
    return n * unit


def mode_product(x: float, y: float, width: int) -> float:
    """Expected multiplier output for finite normal positive-or-negative operands."""
    sign = math.copysign(1.0, x) * math.copysign(1.0, y)
    fx, fy = abs(Fraction(x)), abs(Fraction(y))
    if width < 52:
        fx = quantize(fx, width, tie_down=True)
        fy = quantize(fy, width, tie_down=True)
    p = quantize(fx * fy, 52, tie_down=width != 52)
    if p >= Fraction(2) ** 1024:
        return sign * math.inf
    return sign * float(p)
