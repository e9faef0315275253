"""67-bit packed operands, precision modes, and mantissa truncation/rounding.

A packed operand carries three mode-select bits above an IEEE-754 binary64
pattern::

    66..64  mode select      63  sign      62..52  exponent      51..0  fraction
"""

import enum
import struct
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

FRACTION_BITS = 52
EXPONENT_BIAS = 1023
EXPONENT_MAX = 2047
FRACTION_MASK = (1 << FRACTION_BITS) - 1
DOUBLE_MASK = (1 << 64) - 1
PACKED_BITS = 67

MODE_WIDTHS = (8, 16, 23, 36, 52)


class InvalidModeEncoding(ValueError):
    """Mode-select bits 110 or 111, which name no precision mode."""


class PrecisionMode(enum.IntEnum):
    AUTO = 0b000
    M8 = 0b001
    M16 = 0b010
    M23 = 0b011
    M36 = 0b100
    M52 = 0b101

    @property
    def width(self) -> Optional[int]:
        """Mantissa width in bits, or None for auto-mode."""
        return None if self is PrecisionMode.AUTO else MODE_WIDTHS[self.value - 1]

    @property
    def label(self) -> str:
        return "auto" if self is PrecisionMode.AUTO else str(self.width)

    @classmethod
    def from_width(cls, width: int) -> "PrecisionMode":
        return cls(MODE_WIDTHS.index(width) + 1)

    @classmethod
    def parse(cls, text: str) -> "PrecisionMode":
        """Accept ``auto``, a width (``8`` .. ``52``) or a member name (``M23``)."""
        t = text.strip()
        if t.lower() == "auto":
            return cls.AUTO
        if t.isdigit() and int(t) in MODE_WIDTHS:
            return cls.from_width(int(t))
        try:
            return cls[t.upper()]
        except KeyError:
            raise ValueError(f"unknown precision mode {text!r}") from None


def decode_mode(bits: int) -> PrecisionMode:
    try:
        return PrecisionMode(bits)
    except ValueError:
        raise InvalidModeEncoding(f"mode-select bits {bits:03b} are not a valid mode") from None


class FloatClass(enum.Enum):
    ZERO = "zero"
    DENORMAL = "denormal"
    NORMAL = "normal"
    INFINITY = "infinity"
    NAN = "nan"


def classify(biased_exponent: int, mantissa: int) -> FloatClass:
    if biased_exponent == 0:
        return FloatClass.ZERO if mantissa == 0 else FloatClass.DENORMAL
    if biased_exponent == EXPONENT_MAX:
        return FloatClass.INFINITY if mantissa == 0 else FloatClass.NAN
    return FloatClass.NORMAL


@dataclass(frozen=True)
class UnpackedFloat:
    sign: int
    biased_exponent: int
    mantissa: int

    @property
    def cls(self) -> FloatClass:
        return classify(self.biased_exponent, self.mantissa)

    @classmethod
    def from_bits(cls, bits: int) -> "UnpackedFloat":
        return cls((bits >> 63) & 1, (bits >> FRACTION_BITS) & EXPONENT_MAX, bits & FRACTION_MASK)

    def to_bits(self) -> int:
        return (self.sign << 63) | (self.biased_exponent << FRACTION_BITS) | self.mantissa


@dataclass(frozen=True)
class PackedOperand:
    """Raw 67-bit operand. Invalid mode bits are representable; ``unpack`` rejects them."""

    raw: int

    def __post_init__(self):
        if not 0 <= self.raw < (1 << PACKED_BITS):
            raise ValueError(f"packed operand must fit in {PACKED_BITS} bits")

    @classmethod
    def pack(cls, mode: int, bits: int) -> "PackedOperand":
        if not 0 <= mode < 8:
            raise ValueError("mode-select field is 3 bits")
        if not 0 <= bits <= DOUBLE_MASK:
            raise ValueError("operand must be a 64-bit pattern")
        return cls((int(mode) << 64) | bits)

    @property
    def mode_bits(self) -> int:
        return self.raw >> 64

    @property
    def bits(self) -> int:
        return self.raw & DOUBLE_MASK

    @classmethod
    def from_hex(cls, text: str) -> "PackedOperand":
        """Parse 17 hex digits (optionally ``0x``-prefixed); the top of the 68 bits must be 0."""
        digits = text.strip().lower()
        if digits.startswith("0x"):
            digits = digits[2:]
        if len(digits) != 17:
            raise ValueError(f"packed operand needs 17 hex digits, got {len(digits)}")
        return cls(int(digits, 16))

    def to_hex(self) -> str:
        return f"{self.raw:017x}"


def unpack(p: PackedOperand) -> Tuple[PrecisionMode, UnpackedFloat]:
    return decode_mode(p.mode_bits), UnpackedFloat.from_bits(p.bits)


def repack(mode: PrecisionMode, value: UnpackedFloat) -> PackedOperand:
    return PackedOperand.pack(mode, value.to_bits())


@dataclass(frozen=True)
class RoundingBits:
    G: int = 0
    R: int = 0
    T: int = 0
    E: int = 0


def extract_rounding_bits(discarded: Sequence[int]) -> RoundingBits:
    """Guard, round and sticky are the first three discarded bits; E is the OR of the rest."""
    d = list(discarded)
    g, r, t = (d + [0, 0, 0])[:3]
    return RoundingBits(g, r, t, int(any(d[3:])))


def tail_rounding_bits(tail: int, width: int) -> RoundingBits:
    """Same as ``extract_rounding_bits`` for a ``width``-bit integer tail, MSB first."""
    if width <= 0:
        return RoundingBits()
    g, r, t = ((tail >> (width - 1 - i)) & 1 if i < width else 0 for i in range(3))
    rest = width - 3
    e = int(rest > 0 and (tail & ((1 << rest) - 1)) != 0)
    return RoundingBits(g, r, t, e)


def round_value(kept_lsb: int, bits: RoundingBits) -> int:
    # kept_lsb does not take part in the decision
    return bits.G & (bits.R | bits.T | bits.E)


def round_tail(value: int, discard: int) -> Tuple[int, int]:
    """Drop the low ``discard`` bits of ``value`` and add the round-up bit.

    Returns ``(kept + rnd, rnd)``; the caller handles any carry out of the kept field.
    """
    if discard <= 0:
        return value, 0
    kept = value >> discard
    rnd = round_value(kept & 1, tail_rounding_bits(value & ((1 << discard) - 1), discard))
    return kept + rnd, rnd


def truncate_round_mantissa(mantissa: int, target_width: int) -> Tuple[int, int]:
    """Cut a 52-bit fraction to ``target_width`` bits with round-up.

    Returns ``(fraction, exponent_carry)``. When rounding overflows an all-ones
    fraction the result is ``(0, 1)``: the significand became 2.0.
    """
    if target_width not in MODE_WIDTHS:
        raise ValueError(f"target width must be one of {MODE_WIDTHS}")
    kept, _ = round_tail(mantissa, FRACTION_BITS - target_width)
    if kept >> target_width:
        return 0, 1
    return kept, 0


def effective_length(mantissa: int) -> int:
    """Number of leading fraction bits up to and including the lowest set bit."""
    if mantissa == 0:
        return 0
    return FRACTION_BITS - ((mantissa & -mantissa).bit_length() - 1)


def auto_select(mantissa_a: int, mantissa_b: int) -> PrecisionMode:
    """Smallest mode whose width holds every significant fraction bit of both operands."""
    need = max(effective_length(mantissa_a), effective_length(mantissa_b))
    for w in MODE_WIDTHS:
        if need <= w:
            return PrecisionMode.from_width(w)
    return PrecisionMode.M52


def float_to_bits(x: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", x))[0]


def bits_to_float(bits: int) -> float:
    return struct.unpack("<d", struct.pack("<Q", bits))[0]
