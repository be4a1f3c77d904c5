import pytest

from prbgkit.bignum import (
    LIMB_BITS,
    HexFormatError,
    MulAlgorithm,
    MulCounter,
    Natural,
    SignedNat,
    UnderflowError,
    add,
    cmp,
    divrem,
    hex_decode,
    hex_encode,
    low_bits,
    mul,
    shift_left,
    shift_right,
    signed_add,
    signed_mul,
    signed_sub,
    square,
    sub,
)
from prbgkit.splitmix import SplitMix64

ALL_ALGS = list(MulAlgorithm)


def rand_nat(stream, max_bits):
    return Natural(stream.next_bits(stream.randbelow(max_bits + 1)))


# ---------------------------------------------------------------------------
# Natural representation invariants

def test_zero_has_no_limbs():
    z = Natural(0)
    assert z.limbs == ()
    assert z.bit_length == 0
    assert not z


def test_limbs_lsw_first_no_leading_zero():
    v = Natural((1 << 64) + 5)
    assert v.limbs == (5, 1)
    assert v.bit_length == 65
    assert Natural(2 ** 192 - 1).limbs == ((1 << 64) - 1,) * 3


def test_from_limbs_roundtrip():
    stream = SplitMix64(11)
    for _ in range(200):
        a = rand_nat(stream, 1000)
        assert Natural.from_limbs(a.limbs) == a


def test_from_limbs_rejects_oversized():
    with pytest.raises(ValueError):
        Natural.from_limbs([1 << 64])


def test_negative_rejected():
    with pytest.raises(ValueError):
        Natural(-1)


def test_bit_length_is_top_set_bit_plus_one():
    stream = SplitMix64(12)
    for _ in range(300):
        a = rand_nat(stream, 500)
        assert a.bit_length == int(a).bit_length()


# ---------------------------------------------------------------------------
# add / sub / cmp

def test_add_identity():
    assert add(Natural(0), Natural(0)) == Natural(0)


def test_add_carry_across_limb():
    got = add(Natural(1), Natural(2 ** 64 - 1))
    assert got == Natural(2 ** 64)
    assert got.limbs == (0, 1)


def test_add_matches_host_oracle():
    stream = SplitMix64(13)
    for _ in range(500):
        a, b = rand_nat(stream, 6144), rand_nat(stream, 6144)
        assert int(add(a, b)) == int(a) + int(b)


def test_sub_self_is_zero():
    a = Natural(123456789)
    assert sub(a, a) == Natural(0)


def test_sub_borrow_across_limbs():
    assert sub(Natural(2 ** 64), Natural(1)) == Natural(2 ** 64 - 1)


def test_sub_matches_host_oracle():
    stream = SplitMix64(14)
    for _ in range(500):
        a, b = rand_nat(stream, 2048), rand_nat(stream, 2048)
        if int(a) < int(b):
            a, b = b, a
        assert int(sub(a, b)) == int(a) - int(b)


def test_sub_underflow():
    with pytest.raises(UnderflowError):
        sub(Natural(1), Natural(2))


def test_cmp_examples():
    assert cmp(Natural(0), Natural(0)) == 0
    assert cmp(Natural(2 ** 100), Natural(2 ** 100 - 1)) == 1


def test_cmp_consistent_with_sub():
    stream = SplitMix64(15)
    for _ in range(500):
        a, b = rand_nat(stream, 300), rand_nat(stream, 300)
        order = cmp(a, b)
        if order < 0:
            with pytest.raises(UnderflowError):
                sub(a, b)
        else:
            sub(a, b)  # must not raise
        assert order == -cmp(b, a)


# ---------------------------------------------------------------------------
# shifts and low bits

def test_shift_examples():
    x = Natural(0xDEADBEEF)
    assert shift_right(x, 0) == x
    assert shift_left(Natural(1), 6144) == Natural(2 ** 6144)


def test_shift_roundtrip():
    stream = SplitMix64(16)
    for _ in range(400):
        a = rand_nat(stream, 2000)
        k = stream.randbelow(500)
        assert shift_right(shift_left(a, k), k) == a


def test_low_bits_examples():
    assert low_bits(Natural(0xFFFF), 0) == Natural(0)
    r = 17
    assert low_bits(Natural(2 ** r + 5), r) == Natural(5)


def test_low_bits_reconstruction():
    stream = SplitMix64(17)
    for _ in range(400):
        a = rand_nat(stream, 2000)
        r = stream.randbelow(2100)
        rebuilt = add(low_bits(a, r), shift_left(shift_right(a, r), r))
        assert rebuilt == a


# ---------------------------------------------------------------------------
# multiplication

def test_mul_by_zero_and_one():
    stream = SplitMix64(18)
    a = rand_nat(stream, 999)
    for alg in ALL_ALGS:
        assert mul(a, Natural(0), alg) == Natural(0)
        assert mul(a, Natural(1), alg) == a


def test_cross_algorithm_equivalence_random():
    stream = SplitMix64(19)
    for _ in range(400):
        a, b = rand_nat(stream, 6144), rand_nat(stream, 6144)
        want = int(a) * int(b)
        for alg in ALL_ALGS:
            assert int(mul(a, b, alg)) == want


def test_cross_algorithm_equivalence_adversarial_shapes():
    shapes = [Natural(0), Natural(1), Natural(2 ** 6143), Natural(2 ** 6144 - 1),
              Natural(2 ** 64 - 1), Natural(2 ** 6144 - 2 ** 64),
              Natural(7), Natural((2 ** 512 - 1) << 1000)]
    for a in shapes:
        for b in shapes:
            want = int(a) * int(b)
            for alg in ALL_ALGS:
                assert int(mul(a, b, alg)) == want


def test_karatsuba1_leaf_structure():
    # two full-width operands: exactly 3 leaves, each at most half width
    stream = SplitMix64(20)
    for n in (1536, 6144):
        a = Natural(stream.next_bits(n) | (1 << (n - 1)))
        b = Natural(stream.next_bits(n) | (1 << (n - 1)))
        counter = MulCounter()
        mul(a, b, MulAlgorithm.KARATSUBA_1, counter)
        assert counter.total_muls() == 3
        assert counter.max_operand_bits() <= n // 2


def test_karatsuba2_leaf_structure():
    stream = SplitMix64(21)
    n = 6144
    a = Natural(stream.next_bits(n) | (1 << (n - 1)))
    b = Natural(stream.next_bits(n) | (1 << (n - 1)))
    counter = MulCounter()
    mul(a, b, MulAlgorithm.KARATSUBA_2, counter)
    assert counter.total_muls() == 9
    assert counter.max_operand_bits() <= n // 4


def test_toom3_leaf_structure():
    stream = SplitMix64(22)
    for n in (1536, 6144):
        a = Natural(stream.next_bits(n) | (1 << (n - 1)))
        b = Natural(stream.next_bits(n) | (1 << (n - 1)))
        counter = MulCounter()
        mul(a, b, MulAlgorithm.TOOM_COOK_3, counter)
        assert counter.total_muls() == 5
        # evaluation points widen thirds by a few bits
        assert counter.max_operand_bits() <= n // 3 + 3


def test_schoolbook_is_one_full_width_leaf():
    counter = MulCounter()
    mul(Natural(2 ** 6143 + 1), Natural(2 ** 6143 + 3), MulAlgorithm.SCHOOLBOOK, counter)
    assert counter.total_muls() == 1
    assert counter.max_operand_bits() == 6144


def test_counter_is_monotonic():
    counter = MulCounter()
    stream = SplitMix64(23)
    last = 0
    for _ in range(50):
        mul(rand_nat(stream, 512), rand_nat(stream, 512), MulAlgorithm.KARATSUBA_1, counter)
        assert counter.total() >= last
        last = counter.total()


# ---------------------------------------------------------------------------
# squaring

def test_square_examples():
    assert square(Natural(0)) == Natural(0)
    assert square(Natural(2 ** 77)) == Natural(2 ** 154)


def test_square_equals_mul_self():
    stream = SplitMix64(24)
    for _ in range(1000):
        a = rand_nat(stream, 3072)
        want = int(a) ** 2
        for alg in ALL_ALGS:
            assert int(square(a, alg)) == want


def test_square_counts_squarings_separately():
    counter = MulCounter()
    a = Natural((1 << 6143) + 12345)
    square(a, MulAlgorithm.KARATSUBA_1, counter)
    assert counter.total_squares() == 2
    assert counter.total_muls() == 1  # the cross term


def test_square_toom_is_five_leaf_squares():
    counter = MulCounter()
    square(Natural((1 << 6143) + 12345), MulAlgorithm.TOOM_COOK_3, counter)
    assert counter.total_squares() == 5
    assert counter.total_muls() == 0
    assert counter.max_operand_bits() <= 2048 + 3


# ---------------------------------------------------------------------------
# division

def test_divrem_examples():
    stream = SplitMix64(25)
    a = rand_nat(stream, 900)
    assert divrem(a, Natural(1)) == (a, Natural(0))
    b = Natural(int(rand_nat(stream, 600)) + 2)
    assert divrem(sub(b, Natural(1)), b) == (Natural(0), sub(b, Natural(1)))


def test_divrem_by_zero():
    with pytest.raises(ZeroDivisionError):
        divrem(Natural(5), Natural(0))


def test_divrem_reconstruction_and_host_oracle():
    stream = SplitMix64(26)
    for _ in range(10_000):
        a = rand_nat(stream, 700)
        b = Natural(stream.next_bits(stream.randbelow(350) + 1) | 1)
        q, r = divrem(a, b)
        assert int(q) * int(b) + int(r) == int(a)
        assert int(r) < int(b)
        assert (int(q), int(r)) == divmod(int(a), int(b))


def test_divrem_adversarial_shapes():
    cases = [(2 ** 4096 - 1, 2 ** 64 - 1), (2 ** 4096, 2 ** 2048),
             (2 ** 2048 - 1, 3), (12345, 2 ** 900), (2 ** 128, 2 ** 64 + 1)]
    for a, b in cases:
        q, r = divrem(Natural(a), Natural(b))
        assert (int(q), int(r)) == divmod(a, b)


# ---------------------------------------------------------------------------
# signed helpers

def test_signed_examples():
    assert signed_mul(SignedNat.from_int(-3), SignedNat.from_int(-4)).to_int() == 12
    got = signed_add(SignedNat.from_int(5), SignedNat.from_int(-5))
    assert got.to_int() == 0
    assert got.negative is False


def test_zero_never_negative():
    assert SignedNat(Natural(0), True).negative is False


def test_signed_ops_match_host_oracle():
    stream = SplitMix64(27)
    for _ in range(500):
        x = int(rand_nat(stream, 400)) * (-1) ** stream.randbelow(2)
        y = int(rand_nat(stream, 400)) * (-1) ** stream.randbelow(2)
        assert signed_add(SignedNat.from_int(x), SignedNat.from_int(y)).to_int() == x + y
        assert signed_sub(SignedNat.from_int(x), SignedNat.from_int(y)).to_int() == x - y
        assert signed_mul(SignedNat.from_int(x), SignedNat.from_int(y)).to_int() == x * y


# ---------------------------------------------------------------------------
# hex serialization

def test_hex_examples():
    assert hex_encode(Natural(0)) == "0"
    assert hex_encode(Natural(255)) == "ff"
    assert hex_decode("0") == Natural(0)
    assert hex_decode("ff") == Natural(255)


def test_hex_roundtrip():
    stream = SplitMix64(28)
    for _ in range(500):
        a = rand_nat(stream, 2000)
        assert hex_decode(hex_encode(a)) == a


@pytest.mark.parametrize("bad", ["", "0x1", "FF", "00", "0a", " 1", "1 ", "g"])
def test_hex_malformed(bad):
    with pytest.raises(HexFormatError):
        hex_decode(bad)


def test_limb_width_constant():
    assert LIMB_BITS == 64
