"""Unsigned binary multipliers: Urdhva Tiryagbhyam base cells and a Karatsuba
recursion built on top of them.

All functions operate on plain non-negative Python ints. Adders are modeled as
integer addition; only the arithmetic function of the hardware is reproduced.
"""

from typing import Dict, List, Tuple

MAX_WIDTH = 64
BASE_WIDTH = 8


def _reverse(x: int, width: int) -> int:
    return int(format(x, f"0{width}b")[::-1], 2)


def urdhva_terms(a: int, b: int, width: int) -> List[int]:
    """Cross-diagonal partial terms t_0 .. t_{2w-2} of a ``width`` x ``width`` product.

    ``t_k`` is the (multi-bit) count of bit products ``a_i b_j`` with ``i + j == k``.
    Each diagonal is the popcount of ``a`` against ``b`` reversed and slid into
    alignment with that diagonal.
    """
    mask = (1 << width) - 1
    rb = _reverse(b, width)
    top = width - 1
    terms = []
    for k in range(2 * width - 1):
        lane = rb >> (top - k) if k <= top else (rb << (k - top)) & mask
        terms.append((a & lane).bit_count())
    return terms


def urdhva4_partial_sums(a: int, b: int) -> Tuple[List[int], int, int, int]:
    """Return ``(t, s1, s2, s3)`` for the 4-bit vertical-and-crosswise product.

    ``s1`` collects bit 0 of every term, ``s2`` bit 1 (shifted one place left
    relative to its term) and ``s3`` the single bit 2 of ``t_3``.
    """
    if not (0 <= a < 16 and 0 <= b < 16):
        raise ValueError(f"urdhva4 operands must be 4-bit, got {a}, {b}")
    t = urdhva_terms(a, b, 4)
    s1 = 0
    s2 = 0
    for k, tk in enumerate(t):
        s1 |= (tk & 1) << k
        s2 |= ((tk >> 1) & 1) << (k + 1)
    s3 = ((t[3] >> 2) & 1) << 5
    return t, s1, s2, s3


def urdhva4(a: int, b: int) -> int:
    """Exact 8-bit product of two 4-bit operands."""
    _, s1, s2, s3 = urdhva4_partial_sums(a, b)
    return s1 + s2 + s3


def urdhva8(a: int, b: int) -> int:
    """Exact 16-bit product of two 8-bit operands via 15 cross-diagonal terms."""
    if not (0 <= a < 256 and 0 <= b < 256):
        raise ValueError(f"urdhva8 operands must be 8-bit, got {a}, {b}")
    product = 0
    for k, tk in enumerate(urdhva_terms(a, b, 8)):
        product += tk << k
    return product


# 8x8 products already evaluated through urdhva8, keyed by (a << 8) | b
_base_products: Dict[int, int] = {}


def _base(key: int) -> int:
    p = _base_products.get(key)
    if p is None:
        p = _base_products[key] = urdhva8(key >> 8, key & 0xFF)
    return p


def split_widths(n: int) -> Tuple[int, int]:
    """Return ``(f, s)``: widths of the high and low parts of an ``n``-bit operand."""
    f = n // 2
    return f, n - f


def _karatsuba(a: int, b: int, n: int) -> int:
    if n <= BASE_WIDTH:
        return _base((a << 8) | b)
    f, s = split_widths(n)
    mask = (1 << s) - 1
    al, ar = a >> s, a & mask
    bl, br = b >> s, b & mask
    p1 = _karatsuba(al, bl, f)
    p2 = _karatsuba(ar, br, s)
    # the sums may carry into bit s, so the middle product runs one bit wider
    p3 = _karatsuba(al + ar, bl + br, s + 1)
    return (p1 << (2 * s)) + ((p3 - p2 - p1) << s) + p2


def karatsuba(a: int, b: int, n: int) -> int:
    """Exact ``2n``-bit product of two ``n``-bit unsigned operands.

    Operands are split into a high part of ``n // 2`` bits and a low part of the
    remaining bits at every level; recursion stops at 8 bits where the Urdhva
    multiplier takes over.
    """
    if not 1 <= n <= MAX_WIDTH:
        raise ValueError(f"operand width must be in 1..{MAX_WIDTH}, got {n}")
    if not (0 <= a < (1 << n) and 0 <= b < (1 << n)):
        raise ValueError(f"operands do not fit in {n} bits")
    return _karatsuba(a, b, n)
