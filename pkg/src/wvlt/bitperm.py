"""Bit-level symbol helpers and the bit-reversal permutation.

Symbols are read MSB-first within a fixed code width w = ceil(lg sigma):
bit 0 is the most significant bit, bit w-1 the least significant.  Level k
of a wavelet structure groups symbols by their k-bit prefix; the wavelet
matrix orders those groups by the bit-reversal permutation of order k
instead of numerically, so reversing a prefix converts between the two
orderings.
"""

from __future__ import annotations

import numpy as np

MAX_ORDER = 32


def code_width(sigma: int) -> int:
    """Bits needed to code symbols in [0, sigma): ceil(lg sigma), 0 for sigma <= 1."""
    if sigma < 0:
        raise ValueError("alphabet size must be non-negative")
    return max(sigma - 1, 0).bit_length()


def bit_of(value: int, k: int, width: int) -> int:
    """The k-th bit of value counted from the MSB of a width-bit code."""
    if not 0 <= k < width:
        raise ValueError(f"bit index {k} outside width {width}")
    return (value >> (width - 1 - k)) & 1


def prefix_of(value: int, k: int, width: int) -> int:
    """The k MSBs of a width-bit code, as an integer in [0, 2^k)."""
    if not 0 <= k <= width:
        raise ValueError(f"prefix length {k} outside width {width}")
    return value >> (width - k)


def reverse_bits(value: int, width: int) -> int:
    """Reverse the width-bit representation of value."""
    if width < 0 or (width == 0 and value) or value >> max(width, 0):
        raise ValueError(f"{value} does not fit in {width} bits")
    r = 0
    for _ in range(width):
        r = (r << 1) | (value & 1)
        value >>= 1
    return r


def bit_reversal_permutation(order: int) -> np.ndarray:
    """Table t of length 2^order with t[i] = reverse_bits(i, order).

    Built by the doubling recurrence: the table of order k+1 is the order-k
    table doubled, followed by the order-k table doubled plus one.  The
    result is an involution.
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")
    t = np.zeros(1, dtype=np.int64)
    for _ in range(order):
        t = np.concatenate((2 * t, 2 * t + 1))
    return t


class BitReversalTables:
    """A family of bit-reversal tables served from one shrinking buffer.

    Construction walks levels from deepest to shallowest, so tables are
    requested in non-increasing order.  Going from order k+1 to order k is a
    single in-place halving of the live prefix (the reversal of i within k
    bits is the reversal within k+1 bits shifted right by one), which keeps
    the family at one buffer of 2^top_order entries total.
    """

    def __init__(self, top_order: int):
        self._buf = bit_reversal_permutation(top_order)
        self._order = top_order

    @property
    def order(self) -> int:
        return self._order

    def table(self, order: int) -> np.ndarray:
        if order > self._order:
            raise ValueError(
                f"order {order} above current {self._order}; requests must not increase"
            )
        if order < 0:
            raise ValueError("order must be non-negative")
        while self._order > order:
            self._order -= 1
            half = self._buf[: 1 << self._order]
            half >>= 1
        return self._buf[: 1 << self._order]
