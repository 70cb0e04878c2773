"""Plain and rank/select-augmented bit vectors.

Bits are packed LSB-first into 64-bit words: bit j lives in word j // 64 at
in-word position j % 64.  Unused high bits of the final word are kept zero,
so equal vectors have equal words and serialize to equal bytes.

Wire format: 64-bit little-endian unsigned bit length, then ceil(len / 64)
64-bit little-endian words.

The rank/select support is the usual two-level directory: cumulative zero
counts at 2048-bit superblock boundaries, zero counts per 256-bit block
relative to the enclosing superblock, and word popcounts at query time.
Select keeps sampled positions of every 8192nd zero/one occurrence to bound
a binary search over superblocks.  Support arrays are derived data: rebuilt
whenever needed, never serialized.
"""

from __future__ import annotations

import struct

import numpy as np

WORD_BITS = 64
SUPERBLOCK_BITS = 2048
BLOCK_BITS = 256
BLOCKS_PER_SUPER = SUPERBLOCK_BITS // BLOCK_BITS
WORDS_PER_BLOCK = BLOCK_BITS // WORD_BITS
SELECT_SAMPLE = 8192

_LEN_HEADER = struct.Struct("<Q")


class AbsentOccurrenceError(ValueError):
    """Select asked for an occurrence beyond the number present."""


def _word_count(length: int) -> int:
    return (length + WORD_BITS - 1) // WORD_BITS


class BitVector:
    """Fixed-length mutable bit vector over packed 64-bit words."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise ValueError("length must be non-negative")
        if words is None:
            words = np.zeros(_word_count(length), dtype=np.uint64)
        else:
            if words.dtype != np.uint64 or words.shape != (_word_count(length),):
                raise ValueError("words must be uint64 of exactly ceil(length/64) entries")
        self.length = length
        self.words = words

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        n = arr.shape[0]
        packed = np.packbits(arr, bitorder="little")
        nw = _word_count(n)
        buf = np.zeros(nw * 8, dtype=np.uint8)
        buf[: packed.shape[0]] = packed
        return cls(n, buf.view(np.uint64))

    def to_bits(self) -> np.ndarray:
        if self.length == 0:
            return np.zeros(0, dtype=np.uint8)
        return np.unpackbits(self.words.view(np.uint8), bitorder="little")[: self.length]

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        return int(self.words[i >> 6] >> np.uint64(i & 63)) & 1

    def set(self, i: int, value: int = 1) -> None:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        mask = np.uint64(1) << np.uint64(i & 63)
        if value:
            self.words[i >> 6] |= mask
        else:
            self.words[i >> 6] &= ~mask

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __repr__(self) -> str:
        if self.length <= 80:
            body = "".join(str(self.get(i)) for i in range(self.length))
        else:
            body = "".join(str(self.get(i)) for i in range(77)) + "..."
        return f"BitVector({self.length}, {body!r})"

    def to_bytes(self) -> bytes:
        return _LEN_HEADER.pack(self.length) + self.words.astype("<u8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0) -> tuple["BitVector", int]:
        """Decode one vector starting at offset; returns (vector, next offset)."""
        (length,) = _LEN_HEADER.unpack_from(data, offset)
        offset += _LEN_HEADER.size
        nw = _word_count(length)
        end = offset + 8 * nw
        if end > len(data):
            raise ValueError("truncated bit vector")
        words = np.frombuffer(data, dtype="<u8", count=nw, offset=offset).astype(np.uint64)
        return cls(length, words), end


class RankSelectBitVector:
    """Read-only rank/select view over a BitVector.

    rank(x, i) counts occurrences of bit x in positions [0, i); select(x, j)
    returns the 0-based position of the j-th occurrence (j is 1-based) and
    raises AbsentOccurrenceError when fewer than j occurrences exist.
    """

    __slots__ = (
        "bits", "_nblocks", "_nsuper", "_super_zeros", "_block_zeros",
        "_total_ones", "_total_zeros", "_samples1", "_samples0",
    )

    def __init__(self, bits: BitVector):
        self.bits = bits
        self._build()

    def _build(self) -> None:
        n = self.bits.length
        words = self.bits.words
        ones_per_word = np.bitwise_count(words).astype(np.int64)
        cum1 = np.zeros(words.shape[0] + 1, dtype=np.int64)
        np.cumsum(ones_per_word, out=cum1[1:])
        self._total_ones = int(cum1[-1])
        self._total_zeros = n - self._total_ones

        self._nsuper = (n + SUPERBLOCK_BITS - 1) // SUPERBLOCK_BITS
        self._nblocks = (n + BLOCK_BITS - 1) // BLOCK_BITS
        sup_idx = np.arange(self._nsuper, dtype=np.int64)
        sup_word = sup_idx * (SUPERBLOCK_BITS // WORD_BITS)
        self._super_zeros = sup_idx * SUPERBLOCK_BITS - cum1[sup_word]
        blk_idx = np.arange(self._nblocks, dtype=np.int64)
        blk_word = blk_idx * WORDS_PER_BLOCK
        sup_of_blk = blk_idx // BLOCKS_PER_SUPER
        ones_rel = cum1[blk_word] - cum1[sup_of_blk * (SUPERBLOCK_BITS // WORD_BITS)]
        bits_rel = blk_idx * BLOCK_BITS - sup_of_blk * SUPERBLOCK_BITS
        self._block_zeros = (bits_rel - ones_rel).astype(np.int64)

        if n:
            flat = np.unpackbits(words.view(np.uint8), bitorder="little")[:n]
            ones_pos = np.flatnonzero(flat)
            zeros_pos = np.flatnonzero(flat == 0)
        else:
            ones_pos = zeros_pos = np.zeros(0, dtype=np.int64)
        self._samples1 = ones_pos[::SELECT_SAMPLE].astype(np.int64)
        self._samples0 = zeros_pos[::SELECT_SAMPLE].astype(np.int64)

    def __len__(self) -> int:
        return self.bits.length

    def get(self, i: int) -> int:
        return self.bits.get(i)

    def count(self, x: int) -> int:
        return self._total_ones if x else self._total_zeros

    def rank(self, x: int, i: int) -> int:
        if x not in (0, 1):
            raise ValueError("bit value must be 0 or 1")
        if not 0 <= i <= self.bits.length:
            raise IndexError(f"rank position {i} outside [0, {self.bits.length}]")
        r1 = self._rank1(i)
        return r1 if x else i - r1

    def _rank1(self, i: int) -> int:
        if i == 0:
            return 0
        k = min(i >> 8, self._nblocks - 1)
        zeros = int(self._super_zeros[k >> 3]) + int(self._block_zeros[k])
        r = (k << 8) - zeros
        words = self.bits.words
        w = k << 2
        stop = i >> 6
        while w < stop:
            r += int(words[w]).bit_count()
            w += 1
        rem = i & 63
        if rem:
            r += (int(words[stop]) & ((1 << rem) - 1)).bit_count()
        return r

    def _count_before(self, x: int, boundary_bits: int) -> int:
        # occurrences of x strictly before a superblock boundary, O(1)
        s = boundary_bits >> 11
        zeros = int(self._super_zeros[s]) if s < self._nsuper else self._total_zeros
        if s >= self._nsuper:
            boundary_bits = self.bits.length
        return zeros if x == 0 else boundary_bits - zeros

    def select(self, x: int, j: int) -> int:
        if x not in (0, 1):
            raise ValueError("bit value must be 0 or 1")
        if j < 1:
            raise ValueError("select ordinal is 1-based")
        total = self.count(x)
        if j > total:
            raise AbsentOccurrenceError(f"fewer than {j} occurrences of bit {x}")
        samples = self._samples1 if x else self._samples0
        si = (j - 1) // SELECT_SAMPLE
        lo = int(samples[si]) >> 11
        hi = (int(samples[si + 1]) >> 11) if si + 1 < samples.shape[0] else self._nsuper - 1
        # largest superblock whose boundary holds fewer than j occurrences
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if self._count_before(x, mid << 11) < j:
                lo = mid
            else:
                hi = mid - 1
        s = lo
        base_count = self._count_before(x, s << 11)
        k = s << 3
        last_block = min((s << 3) + BLOCKS_PER_SUPER, self._nblocks) - 1
        # walk blocks inside the superblock
        while k < last_block:
            nxt_zeros = int(self._super_zeros[s]) + int(self._block_zeros[k + 1])
            boundary = (k + 1) << 8
            cnt = nxt_zeros if x == 0 else boundary - nxt_zeros
            if cnt < j:
                k += 1
            else:
                break
        blk_zeros = int(self._super_zeros[s]) + int(self._block_zeros[k])
        cnt = blk_zeros if x == 0 else (k << 8) - blk_zeros
        need = j - cnt
        words = self.bits.words
        w = k << 2
        last_word = (self.bits.length - 1) >> 6
        while True:
            word = int(words[w])
            if w == last_word and (self.bits.length & 63):
                width = self.bits.length & 63
            else:
                width = 64
            if x == 0:
                word = ~word & ((1 << width) - 1)
            c = word.bit_count()
            if need > c:
                need -= c
                w += 1
                continue
            return (w << 6) + _select_in_word(word, need)

    def __repr__(self) -> str:
        return f"RankSelectBitVector({self.bits!r})"


def _select_in_word(word: int, k: int) -> int:
    """0-based position of the k-th (1-based) set bit; word must have >= k."""
    pos = 0
    for half in (32, 16, 8, 4, 2, 1):
        low = word & ((1 << half) - 1)
        c = low.bit_count()
        if k > c:
            k -= c
            word >>= half
            pos += half
        else:
            word = low
    return pos
