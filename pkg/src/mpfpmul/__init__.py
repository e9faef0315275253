"""Bit-exact model of a run-time-reconfigurable multi-precision floating-point
matrix multiplier."""

from .bitmul import karatsuba, urdhva4, urdhva8
from .fpformat import (
    InvalidModeEncoding,
    PackedOperand,
    PrecisionMode,
    RoundingBits,
    UnpackedFloat,
    auto_select,
    extract_rounding_bits,
    round_value,
    truncate_round_mantissa,
    unpack,
)
from .fpmul import FpResult, multiply, multiply_bits, multiply_floats
from .matmul import (
    Matrix,
    ModeSelectError,
    OpCounters,
    OrderMismatch,
    classical_2x2,
    classical_blocked,
    classical_reference,
    strassen_2x2,
    strassen_blocked,
    strassen_fused_topdown,
)

__version__ = "0.1.0"
