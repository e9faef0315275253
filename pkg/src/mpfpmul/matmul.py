"""Matrix engine: 2x2 kernels, blocked Strassen recursion and the fused
alpha/beta top-down variant.

Every scalar product goes through the reconfigurable multiplier at the engine's
mode; every scalar sum is an ordinary binary64 addition. Each call returns the
product together with an ``OpCounters`` tally.
"""

from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .fpformat import PrecisionMode, bits_to_float, float_to_bits
from .fpmul import FpResult, multiply_bits


class OrderMismatch(ValueError):
    """Operand orders differ, or are not a power of two >= 2."""


class ModeSelectError(RuntimeError):
    """The multiplier rejected an operand pair's mode bits."""


@dataclass(frozen=True)
class OpCounters:
    multiplications: int = 0
    additions: int = 0

    def __add__(self, other: "OpCounters") -> "OpCounters":
        return OpCounters(self.multiplications + other.multiplications, self.additions + other.additions)

    @classmethod
    def total(cls, items: Iterable["OpCounters"]) -> "OpCounters":
        out = cls()
        for c in items:
            out = out + c
        return out


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and n & (n - 1) == 0


class Matrix:
    """Square row-major matrix of binary64 values."""

    __slots__ = ("order", "elements")

    def __init__(self, order: int, elements: Sequence[float]):
        if len(elements) != order * order:
            raise ValueError(f"expected {order * order} elements, got {len(elements)}")
        self.order = order
        self.elements = tuple(float(e) for e in elements)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "Matrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        return cls(n, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, [1.0 if i == j else 0.0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "Matrix":
        return cls(n, [0.0] * (n * n))

    def __getitem__(self, ij: Tuple[int, int]) -> float:
        i, j = ij
        return self.elements[i * self.order + j]

    def rows(self) -> List[List[float]]:
        n = self.order
        return [list(self.elements[i * n:(i + 1) * n]) for i in range(n)]

    def bits(self) -> List[int]:
        return [float_to_bits(x) for x in self.elements]

    def __eq__(self, other) -> bool:
        # bit-level equality: distinguishes -0.0 and compares NaNs by pattern
        return isinstance(other, Matrix) and self.order == other.order and self.bits() == other.bits()

    def __repr__(self) -> str:
        return f"Matrix({self.rows()!r})"

    def quadrants(self) -> Tuple["Matrix", "Matrix", "Matrix", "Matrix"]:
        n, h = self.order, self.order // 2
        def block(r0, c0):
            return Matrix(h, [self.elements[(r0 + i) * n + c0 + j] for i in range(h) for j in range(h)])
        return block(0, 0), block(0, h), block(h, 0), block(h, h)

    @classmethod
    def join(cls, c11: "Matrix", c12: "Matrix", c21: "Matrix", c22: "Matrix") -> "Matrix":
        h = c11.order
        out = []
        for top, bottom in ((c11, c12), (c21, c22)):
            for i in range(h):
                out.extend(top.elements[i * h:(i + 1) * h])
                out.extend(bottom.elements[i * h:(i + 1) * h])
        return cls(2 * h, out)


def element_flags(m: Matrix) -> List[FpResult]:
    """Status flags of each element, classified from its bit pattern."""
    return [FpResult.from_bits(b) for b in m.bits()]


def _check_pair(a: Matrix, b: Matrix) -> int:
    if a.order != b.order:
        raise OrderMismatch(f"orders differ: {a.order} vs {b.order}")
    if not _is_power_of_two(a.order):
        raise OrderMismatch(f"order {a.order} is not a power of two >= 2")
    return a.order


def _scalar_multiplier(mode: PrecisionMode) -> Callable[[float, float], float]:
    mode = PrecisionMode(mode)

    def mul(x: float, y: float) -> float:
        r = multiply_bits(float_to_bits(x), float_to_bits(y), mode)
        # both operands are packed with the same mode bits, so this cannot fire
        if r.flag_mode_select_error:
            raise ModeSelectError(f"mode {mode!r} rejected")
        return bits_to_float(r.product)

    return mul


def _add(a: Matrix, b: Matrix) -> Matrix:
    return Matrix(a.order, [x + y for x, y in zip(a.elements, b.elements)])


def _sub(a: Matrix, b: Matrix) -> Matrix:
    return Matrix(a.order, [x - y for x, y in zip(a.elements, b.elements)])


def classical_2x2(A: Matrix, B: Matrix, mode: PrecisionMode = PrecisionMode.M52) -> Tuple[Matrix, OpCounters]:
    if A.order != 2 or B.order != 2:
        raise OrderMismatch("classical_2x2 needs order-2 operands")
    mul = _scalar_multiplier(mode)
    a11, a12, a21, a22 = A.elements
    b11, b12, b21, b22 = B.elements
    c = [
        mul(a11, b11) + mul(a12, b21),
        mul(a11, b12) + mul(a12, b22),
        mul(a21, b11) + mul(a22, b21),
        mul(a21, b12) + mul(a22, b22),
    ]
    return Matrix(2, c), OpCounters(8, 4)


def _strassen_combine(s1, s2, s3, s4, s5, s6, s7, add, sub):
    p11 = add(sub(add(s1, s4), s5), s7)
    p12 = add(s3, s5)
    p21 = add(s2, s4)
    p22 = add(add(sub(s1, s2), s3), s6)
    return p11, p12, p21, p22


def strassen_2x2(A: Matrix, B: Matrix, mode: PrecisionMode = PrecisionMode.M52) -> Tuple[Matrix, OpCounters]:
    """Seven-multiplication 2x2 product: 10 pre-sums, 7 products, 8 recombination adds."""
    if A.order != 2 or B.order != 2:
        raise OrderMismatch("strassen_2x2 needs order-2 operands")
    mul = _scalar_multiplier(mode)
    a11, a12, a21, a22 = A.elements
    b11, b12, b21, b22 = B.elements
    s1 = mul(a11 + a22, b11 + b22)
    s2 = mul(a21 + a22, b11)
    s3 = mul(a11, b12 - b22)
    s4 = mul(a22, b21 - b11)
    s5 = mul(a11 + a12, b22)
    s6 = mul(a21 - a11, b11 + b12)
    s7 = mul(a12 - a22, b21 + b22)
    p = _strassen_combine(s1, s2, s3, s4, s5, s6, s7, lambda x, y: x + y, lambda x, y: x - y)
    return Matrix(2, p), OpCounters(7, 18)


_KERNELS = {"classical": classical_2x2, "strassen": strassen_2x2}


def _blocked(A: Matrix, B: Matrix, mode, kernel, cutoff, executor=None) -> Tuple[Matrix, OpCounters]:
    n = A.order
    if n == 2:
        return kernel(A, B, mode)
    h = n // 2
    a11, a12, a21, a22 = A.quadrants()
    b11, b12, b21, b22 = B.quadrants()

    if n <= cutoff:
        # classical block recursion: eight half-order products, four block sums
        pairs = [(a11, b11), (a12, b21), (a11, b12), (a12, b22),
                 (a21, b11), (a22, b21), (a21, b12), (a22, b22)]
        prods = _run(pairs, mode, kernel, cutoff, executor)
        c = [_add(prods[2 * k][0], prods[2 * k + 1][0]) for k in range(4)]
        counters = OpCounters.total(p[1] for p in prods) + OpCounters(0, 4 * h * h)
        return Matrix.join(*c), counters

    pairs = [
        (_add(a11, a22), _add(b11, b22)),
        (_add(a21, a22), b11),
        (a11, _sub(b12, b22)),
        (a22, _sub(b21, b11)),
        (_add(a11, a12), b22),
        (_sub(a21, a11), _add(b11, b12)),
        (_sub(a12, a22), _add(b21, b22)),
    ]
    prods = _run(pairs, mode, kernel, cutoff, executor)
    c = _strassen_combine(*(p[0] for p in prods), _add, _sub)
    counters = OpCounters.total(p[1] for p in prods) + OpCounters(0, 18 * h * h)
    return Matrix.join(*c), counters


def _run(pairs, mode, kernel, cutoff, executor: Optional[Executor]):
    """Evaluate independent block products, optionally on ``executor``.

    Results are collected in submission order, so products and counter totals
    do not depend on scheduling.
    """
    if executor is None:
        return [_blocked(x, y, mode, kernel, cutoff) for x, y in pairs]
    futures = [executor.submit(_blocked, x, y, mode, kernel, cutoff) for x, y in pairs]
    return [f.result() for f in futures]


def strassen_blocked(
    A: Matrix,
    B: Matrix,
    mode: PrecisionMode = PrecisionMode.M52,
    base: str = "strassen",
    cutoff: int = 2,
    executor: Optional[Executor] = None,
) -> Tuple[Matrix, OpCounters]:
    """Top-down blocked product of two order-2^p matrices.

    Orders above ``cutoff`` split by Strassen's seven block products; orders
    from ``cutoff`` down to 4 use classical eight-product block recursion; order
    2 runs the ``base`` kernel (``"strassen"`` or ``"classical"``). With
    ``cutoff=n`` and ``base="classical"`` the whole product is classical.

    ``executor`` parallelizes the top-level block products only.
    """
    _check_pair(A, B)
    try:
        kernel = _KERNELS[base]
    except KeyError:
        raise ValueError(f"base must be 'classical' or 'strassen', got {base!r}") from None
    return _blocked(A, B, PrecisionMode(mode), kernel, cutoff, executor)


def classical_blocked(A: Matrix, B: Matrix, mode: PrecisionMode = PrecisionMode.M52) -> Tuple[Matrix, OpCounters]:
    """Classical block recursion all the way down: n^3 multiplies."""
    return strassen_blocked(A, B, mode, base="classical", cutoff=A.order)


def strassen_fused_topdown(A: Matrix, B: Matrix, mode: PrecisionMode = PrecisionMode.M52) -> Tuple[Matrix, OpCounters]:
    """Fused alpha/beta variant: seven length-m sums per 2x2 output block.

    With 0-based indices, alpha values are formed per (i, k) block of A and beta
    values per (k, j) block of B:

        alpha1 = a[2i,2k] + a[2i+1,2k+1]     beta1 = b[2k,2j] + b[2k+1,2j+1]
        alpha2 = a[2i+1,2k] + a[2i+1,2k+1]   beta2 = b[2k,2j+1] - b[2k+1,2j+1]
        alpha3 = a[2i,2k] + a[2i,2k+1]       beta3 = b[2k+1,2j] - b[2k,2j]
        alpha4 = a[2i+1,2k] - a[2i,2k]       beta4 = b[2k,2j] + b[2k,2j+1]
        alpha5 = a[2i,2k+1] - a[2i+1,2k+1]   beta5 = b[2k+1,2j] + b[2k+1,2j+1]

    and the sums accumulate ascending in k.
    """
    if A.order != B.order:
        raise OrderMismatch(f"orders differ: {A.order} vs {B.order}")
    n = A.order
    if n < 2 or n % 2:
        raise OrderMismatch(f"fused variant needs an even order, got {n}")
    m = n // 2
    mul = _scalar_multiplier(mode)
    a = lambda r, c: A.elements[r * n + c]
    b = lambda r, c: B.elements[r * n + c]

    alpha = {}
    beta = {}
    for x in range(m):
        for k in range(m):
            i, r = 2 * x, 2 * k
            alpha[x, k] = (
                a(i, r) + a(i + 1, r + 1),
                a(i + 1, r) + a(i + 1, r + 1),
                a(i, r) + a(i, r + 1),
                a(i + 1, r) - a(i, r),
                a(i, r + 1) - a(i + 1, r + 1),
            )
            beta[k, x] = (
                b(r, i) + b(r + 1, i + 1),
                b(r, i + 1) - b(r + 1, i + 1),
                b(r + 1, i) - b(r, i),
                b(r, i) + b(r, i + 1),
                b(r + 1, i) + b(r + 1, i + 1),
            )

    out = [0.0] * (n * n)
    for i in range(m):
        for j in range(m):
            terms = []
            for k in range(m):
                al, be = alpha[i, k], beta[k, j]
                terms.append((
                    mul(al[0], be[0]),
                    mul(al[1], b(2 * k, 2 * j)),
                    mul(a(2 * i, 2 * k), be[1]),
                    mul(a(2 * i + 1, 2 * k + 1), be[2]),
                    mul(al[2], b(2 * k + 1, 2 * j + 1)),
                    mul(al[3], be[3]),
                    mul(al[4], be[4]),
                ))
            sums = list(terms[0])
            for t in terms[1:]:
                sums = [s + v for s, v in zip(sums, t)]
            p11, p12, p21, p22 = _strassen_combine(*sums, lambda x, y: x + y, lambda x, y: x - y)
            r, c = 2 * i, 2 * j
            out[r * n + c] = p11
            out[r * n + c + 1] = p12
            out[(r + 1) * n + c] = p21
            out[(r + 1) * n + c + 1] = p22

    blocks = m * m
    adds = 10 * m * m + 7 * blocks * (m - 1) + 8 * blocks
    return Matrix(n, out), OpCounters(7 * m * blocks, adds)


def classical_reference(A: Matrix, B: Matrix) -> Matrix:
    """Triple-loop product with host binary64 arithmetic; test oracle only."""
    if A.order != B.order:
        raise OrderMismatch(f"orders differ: {A.order} vs {B.order}")
    n = A.order
    out = []
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += A[i, k] * B[k, j]
            out.append(acc)
    return Matrix(n, out)
