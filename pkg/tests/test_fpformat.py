import itertools

import pytest
from hypothesis import given, strategies as st

from mpfpmul.fpformat import (
    FloatClass,
    InvalidModeEncoding,
    MODE_WIDTHS,
    PackedOperand,
    PrecisionMode,
    RoundingBits,
    UnpackedFloat,
    auto_select,
    effective_length,
    extract_rounding_bits,
    repack,
    round_value,
    truncate_round_mantissa,
    unpack,
)

GOLDEN = 0x4069B130AE804118
GOLDEN_FRACTION = 0x9B130AE804118


def test_mode_encodings():
    assert {m.value: m.width for m in PrecisionMode} == {0: None, 1: 8, 2: 16, 3: 23, 4: 36, 5: 52}


@pytest.mark.parametrize("text, mode", [("auto", PrecisionMode.AUTO), ("23", PrecisionMode.M23), ("m36", PrecisionMode.M36)])
def test_mode_parse(text, mode):
    assert PrecisionMode.parse(text) is mode


def test_unpack_golden_operand():
    mode, f = unpack(PackedOperand.pack(0b101, GOLDEN))
    assert mode is PrecisionMode.M52
    assert (f.sign, f.biased_exponent, f.mantissa, f.cls) == (0, 1030, GOLDEN_FRACTION, FloatClass.NORMAL)


def test_unpack_zero():
    mode, f = unpack(PackedOperand.pack(0b001, 0))
    assert mode is PrecisionMode.M8 and f.cls is FloatClass.ZERO


@pytest.mark.parametrize("bits", [0b110, 0b111])
def test_unpack_invalid_mode(bits):
    with pytest.raises(InvalidModeEncoding):
        unpack(PackedOperand.pack(bits, GOLDEN))


@pytest.mark.parametrize("exp, frac, cls", [
    (0, 0, FloatClass.ZERO), (0, 1, FloatClass.DENORMAL), (1, 0, FloatClass.NORMAL),
    (2047, 0, FloatClass.INFINITY), (2047, 5, FloatClass.NAN),
])
def test_classes(exp, frac, cls):
    assert UnpackedFloat(0, exp, frac).cls is cls


def test_hex_forms():
    p = PackedOperand.from_hex("0x14069b130ae804118")
    assert p.mode_bits == 0b001 and p.bits == GOLDEN
    assert p.to_hex() == "14069b130ae804118"
    with pytest.raises(ValueError):
        PackedOperand.from_hex("4069b130ae804118")
    with pytest.raises(ValueError):
        PackedOperand(1 << 67)


@given(st.integers(0, 5), st.integers(0, (1 << 64) - 1))
def test_pack_unpack_round_trip(mode, bits):
    p = PackedOperand.pack(mode, bits)
    assert repack(*unpack(p)).raw == p.raw
    assert PackedOperand.from_hex(p.to_hex()) == p


@pytest.mark.parametrize("seq, expected", [
    ([], RoundingBits(0, 0, 0, 0)),
    ([1, 0, 0, 0, 0, 1], RoundingBits(1, 0, 0, 1)),
    ([1, 1], RoundingBits(1, 1, 0, 0)),
])
def test_extract_rounding_bits(seq, expected):
    assert extract_rounding_bits(seq) == expected


def test_golden_discarded_bits_at_8():
    tail = GOLDEN_FRACTION & ((1 << 44) - 1)
    seq = [(tail >> (43 - i)) & 1 for i in range(44)]
    assert extract_rounding_bits(seq).G == 0


def test_round_value_truth_table():
    for g, r, t, e in itertools.product((0, 1), repeat=4):
        for lsb in (0, 1):
            assert round_value(lsb, RoundingBits(g, r, t, e)) == int(g and (r or t or e))


@pytest.mark.parametrize("bits, rnd", [((1, 0, 0, 1), 1), ((1, 0, 0, 0), 0), ((0, 1, 1, 1), 0)])
def test_round_value_examples(bits, rnd):
    assert round_value(0, RoundingBits(*bits)) == rnd


@pytest.mark.parametrize("mantissa, width, expected", [
    (GOLDEN_FRACTION, 8, (0x9B, 0)),
    (GOLDEN_FRACTION, 52, (GOLDEN_FRACTION, 0)),
    (0xFFFFFFFFFFFFF, 8, (0x00, 1)),
])
def test_truncate_round_examples(mantissa, width, expected):
    assert truncate_round_mantissa(mantissa, width) == expected


def test_truncate_exact_half_does_not_round():
    # kept 0x01, discard a lone 1 followed by zeros
    m = (0x01 << 44) | (1 << 43)
    assert truncate_round_mantissa(m, 8) == (0x01, 0)
    assert truncate_round_mantissa(m | 1, 8) == (0x02, 0)


def test_truncate_rejects_unknown_width():
    with pytest.raises(ValueError):
        truncate_round_mantissa(0, 12)


@given(st.integers(0, (1 << 52) - 1), st.sampled_from(MODE_WIDTHS))
def test_truncate_zero_tail_is_plain_truncation(m, w):
    m &= ~((1 << (52 - w)) - 1)
    assert truncate_round_mantissa(m, w) == (m >> (52 - w), 0)


@given(st.integers(0, (1 << 52) - 1), st.sampled_from(MODE_WIDTHS), st.sampled_from(MODE_WIDTHS))
def test_truncation_prefix_property(m, w1, w2):
    w1, w2 = sorted((w1, w2))
    # bits kept at the narrower width are all still present at the wider one
    mask1 = ((1 << w1) - 1) << (52 - w1)
    assert (m & mask1) >> (52 - w2) << (52 - w2) == m & mask1
    assert ((m >> (52 - w2)) << (52 - w2)) & mask1 == m & mask1


@pytest.mark.parametrize("a, b, mode", [
    (0, 0, PrecisionMode.M8),
    (GOLDEN_FRACTION, GOLDEN_FRACTION, PrecisionMode.M52),
    (0xFFC0000000000, 0, PrecisionMode.M16),
    (1 << 44, 0, PrecisionMode.M8),
    (1 << 43, 0, PrecisionMode.M16),
    (1 << 29, 0, PrecisionMode.M23),
    (1 << 28, 0, PrecisionMode.M36),
    (1 << 15, 0, PrecisionMode.M52),
])
def test_auto_select(a, b, mode):
    assert auto_select(a, b) is mode


def test_effective_length():
    assert effective_length(0) == 0
    assert effective_length(1 << 51) == 1
    assert effective_length(1) == 52


@given(st.integers(0, (1 << 52) - 1), st.integers(0, (1 << 52) - 1))
def test_auto_select_symmetric_and_idempotent(a, b):
    mode = auto_select(a, b)
    assert auto_select(b, a) is mode
    w = mode.width
    ta, ca = truncate_round_mantissa(a, w)
    tb, cb = truncate_round_mantissa(b, w)
    # the resolved width holds every significant bit: nothing is discarded
    assert (ta << (52 - w), ca) == (a, 0) and (tb << (52 - w), cb) == (b, 0)
    assert auto_select(ta << (52 - w), tb << (52 - w)) is mode
