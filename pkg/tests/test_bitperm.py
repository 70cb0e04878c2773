import numpy as np
import pytest

from wvlt.bitperm import (
    BitReversalTables,
    bit_of,
    bit_reversal_permutation,
    code_width,
    prefix_of,
    reverse_bits,
)


def test_code_width_values():
    assert code_width(0) == 0
    assert code_width(1) == 0
    assert code_width(2) == 1
    assert code_width(3) == 2
    assert code_width(8) == 3
    assert code_width(9) == 4
    assert code_width(256) == 8
    assert code_width(257) == 9
    assert code_width(70000) == 17


def test_code_width_rejects_negative():
    with pytest.raises(ValueError):
        code_width(-1)


def test_bit_of_reads_msb_first():
    # 6 = 110 in three bits
    assert [bit_of(6, k, 3) for k in range(3)] == [1, 1, 0]
    assert [bit_of(1, k, 3) for k in range(3)] == [0, 0, 1]
    with pytest.raises(ValueError):
        bit_of(6, 3, 3)
    with pytest.raises(ValueError):
        bit_of(6, -1, 3)


def test_prefix_of():
    assert prefix_of(6, 0, 3) == 0
    assert prefix_of(6, 1, 3) == 1
    assert prefix_of(6, 2, 3) == 3
    assert prefix_of(6, 3, 3) == 6
    with pytest.raises(ValueError):
        prefix_of(6, 4, 3)


def test_reverse_bits_values():
    assert reverse_bits(0b011, 3) == 0b110
    assert reverse_bits(0b100, 3) == 0b001
    assert reverse_bits(0, 0) == 0
    assert reverse_bits(1, 1) == 1
    with pytest.raises(ValueError):
        reverse_bits(4, 2)
    with pytest.raises(ValueError):
        reverse_bits(1, 0)


def test_reverse_bits_involution(rng):
    for _ in range(200):
        width = int(rng.integers(0, 20))
        v = int(rng.integers(0, 1 << width)) if width else 0
        assert reverse_bits(reverse_bits(v, width), width) == v


def test_permutation_small_tables():
    assert list(bit_reversal_permutation(0)) == [0]
    assert list(bit_reversal_permutation(1)) == [0, 1]
    assert list(bit_reversal_permutation(2)) == [0, 2, 1, 3]
    assert list(bit_reversal_permutation(3)) == [0, 4, 2, 6, 1, 5, 3, 7]


def test_permutation_matches_scalar_reversal():
    for order in range(11):
        t = bit_reversal_permutation(order)
        for i in range(1 << order):
            assert t[i] == reverse_bits(i, order)


def test_permutation_is_involution():
    for order in range(17):
        t = bit_reversal_permutation(order)
        assert np.array_equal(t[t], np.arange(1 << order))


def test_permutation_doubling_recurrence():
    # table of order k+1 is the order-k table doubled, then doubled plus one
    for order in range(16):
        t = bit_reversal_permutation(order)
        up = bit_reversal_permutation(order + 1)
        assert np.array_equal(up, np.concatenate((2 * t, 2 * t + 1)))


def test_permutation_contraction_recurrence():
    # the order-k table is the first half of the order-(k+1) table halved
    for order in range(16):
        up = bit_reversal_permutation(order + 1)
        assert np.array_equal(bit_reversal_permutation(order), up[: 1 << order] >> 1)


def test_permutation_rejects_bad_order():
    with pytest.raises(ValueError):
        bit_reversal_permutation(-1)
    with pytest.raises(ValueError):
        bit_reversal_permutation(33)


def test_table_family_descends():
    fam = BitReversalTables(10)
    for order in (10, 7, 7, 3, 0):
        assert np.array_equal(fam.table(order), bit_reversal_permutation(order))
        assert fam.order == order


def test_table_family_rejects_ascent():
    fam = BitReversalTables(5)
    fam.table(3)
    with pytest.raises(ValueError):
        fam.table(4)
    with pytest.raises(ValueError):
        fam.table(-1)
