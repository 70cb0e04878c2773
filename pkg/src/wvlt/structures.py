"""Level-wise wavelet tree and wavelet matrix with access/rank/select.

Both structures store one bit vector per code bit, most significant first.
Level ell concatenates the ell-th code bits of all symbols grouped by their
ell-bit prefix: the tree keeps groups in numeric prefix order, the matrix
in bit-reversed prefix order, which collapses each level's bookkeeping to a
single number (how many zero bits the level holds).

Rank/select support per level is built lazily on first query and is never
serialized; the wire format carries only the level payloads.
"""

from __future__ import annotations

import struct

import numpy as np

from .bitperm import code_width
from .bitvec import AbsentOccurrenceError, BitVector, RankSelectBitVector

MAGIC = b"WVLT"
FORMAT_VERSION = 1
_KIND_CODES = {"wt": 0, "wm": 1}
_KIND_NAMES = {0: "wt", 1: "wm"}


def zeros_from_histogram(hist) -> int:
    """Zero bits a level will hold, from the histogram one level deeper.

    Prefixes with an even value contribute their whole group as zero bits
    when folded up a level, regardless of group order.
    """
    h = np.asarray(hist, dtype=np.int64)
    return int(np.add.reduce(h[0::2]))


class _LevelStructure:
    """Shared storage, validation and degenerate-alphabet behaviour."""

    kind = ""

    def __init__(self, n: int, sigma: int, levels: list[BitVector]):
        if n < 0:
            raise ValueError("length must be nonnegative")
        if sigma < 1:
            raise ValueError("alphabet size must be at least 1")
        width = code_width(sigma)
        if len(levels) != width:
            raise ValueError(f"alphabet size {sigma} requires {width} levels, got {len(levels)}")
        for ell, vec in enumerate(levels):
            if vec.length != n:
                raise ValueError(f"level {ell} holds {vec.length} bits, expected {n}")
        self.n = n
        self.sigma = sigma
        self.width = width
        self.levels = levels
        self._supports: dict[int, RankSelectBitVector] = {}

    def level_support(self, ell: int) -> RankSelectBitVector:
        sup = self._supports.get(ell)
        if sup is None:
            sup = RankSelectBitVector(self.levels[ell])
            self._supports[ell] = sup
        return sup

    def _check_access(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} out of range for length {self.n}")

    def _check_rank(self, c: int, i: int) -> None:
        if not 0 <= c < self.sigma:
            raise ValueError(f"symbol {c} outside alphabet [0, {self.sigma})")
        if not 0 <= i <= self.n:
            raise IndexError(f"rank prefix length {i} out of range for length {self.n}")

    def _check_select(self, c: int, j: int) -> None:
        if not 0 <= c < self.sigma:
            raise ValueError(f"symbol {c} outside alphabet [0, {self.sigma})")
        if j < 1:
            raise ValueError("occurrence ordinals are 1-based")

    def __eq__(self, other) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return (
            self.n == other.n
            and self.sigma == other.sigma
            and self.levels == other.levels
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, sigma={self.sigma}, width={self.width})"


class LevelWiseWaveletTree(_LevelStructure):
    """Wavelet tree with prefix groups in numeric order.

    A symbol's interval at level ell keeps its global offset when refined:
    the zero-bit children of interval [s, e) occupy [s, s + z) at the next
    level and the one-bit children [s + z, e), with z the zero bits the
    interval holds.  Queries walk these intervals.
    """

    kind = "wt"

    def access(self, i: int) -> int:
        self._check_access(i)
        if self.width == 0:
            return 0
        value = 0
        s, e = 0, self.n
        pos = i
        for ell in range(self.width):
            sup = self.level_support(ell)
            z = sup.rank(0, e) - sup.rank(0, s)
            if sup.get(pos):
                value = (value << 1) | 1
                pos = s + z + (sup.rank(1, pos) - sup.rank(1, s))
                s += z
            else:
                value <<= 1
                pos = s + (sup.rank(0, pos) - sup.rank(0, s))
                e = s + z
        return value

    def rank(self, c: int, i: int) -> int:
        self._check_rank(c, i)
        if self.width == 0:
            return i
        # text[0:i] contributes the first k symbols of every interval on
        # c's path, because refinement is stable
        s, e = 0, self.n
        k = i
        for ell in range(self.width):
            sup = self.level_support(ell)
            z = sup.rank(0, e) - sup.rank(0, s)
            if (c >> (self.width - 1 - ell)) & 1:
                k = sup.rank(1, s + k) - sup.rank(1, s)
                s = s + z
            else:
                k = sup.rank(0, s + k) - sup.rank(0, s)
                e = s + z
        return k

    def select(self, c: int, j: int) -> int:
        self._check_select(c, j)
        if self.width == 0:
            if j > self.n:
                raise AbsentOccurrenceError(f"symbol {c} occurs only {self.n} times")
            return j - 1
        # descend to c's interval, recording every level's interval start
        starts = []
        s, e = 0, self.n
        for ell in range(self.width):
            sup = self.level_support(ell)
            starts.append(s)
            z = sup.rank(0, e) - sup.rank(0, s)
            if (c >> (self.width - 1 - ell)) & 1:
                s, e = s + z, e
            else:
                e = s + z
        count = e - s
        if j > count:
            raise AbsentOccurrenceError(f"symbol {c} occurs only {count} times")
        # ascend: the element is the (offset+1)-th c-bit of each interval
        offset = j - 1
        for ell in range(self.width - 1, -1, -1):
            sup = self.level_support(ell)
            bit = (c >> (self.width - 1 - ell)) & 1
            pos = sup.select(bit, sup.rank(bit, starts[ell]) + offset + 1)
            offset = pos - starts[ell]
        return offset


class WaveletMatrix(_LevelStructure):
    """Wavelet matrix: groups in bit-reversed prefix order, one zero count per level.

    Descending from level ell to ell + 1 sends position i to rank0(i) for a
    zero bit and to zeros[ell] + rank1(i) for a one bit, independent of the
    symbol's interval.
    """

    kind = "wm"

    def __init__(self, n: int, sigma: int, levels: list[BitVector], zeros: list[int]):
        super().__init__(n, sigma, levels)
        if len(zeros) != self.width:
            raise ValueError(f"expected {self.width} zero counts, got {len(zeros)}")
        for ell, z in enumerate(zeros):
            if not 0 <= z <= n:
                raise ValueError(f"zero count {z} at level {ell} out of range")
        self.zeros = [int(z) for z in zeros]

    def __eq__(self, other) -> bool:
        base = super().__eq__(other)
        if base is NotImplemented or base is False:
            return base
        return self.zeros == other.zeros

    def access(self, i: int) -> int:
        self._check_access(i)
        if self.width == 0:
            return 0
        value = 0
        pos = i
        for ell in range(self.width):
            sup = self.level_support(ell)
            if sup.get(pos):
                value = (value << 1) | 1
                pos = self.zeros[ell] + sup.rank(1, pos)
            else:
                value <<= 1
                pos = sup.rank(0, pos)
        return value

    def rank(self, c: int, i: int) -> int:
        self._check_rank(c, i)
        if self.width == 0:
            return i
        s, e = 0, i
        for ell in range(self.width):
            sup = self.level_support(ell)
            if (c >> (self.width - 1 - ell)) & 1:
                s = self.zeros[ell] + sup.rank(1, s)
                e = self.zeros[ell] + sup.rank(1, e)
            else:
                s = sup.rank(0, s)
                e = sup.rank(0, e)
        return e - s

    def select(self, c: int, j: int) -> int:
        self._check_select(c, j)
        if self.width == 0:
            if j > self.n:
                raise AbsentOccurrenceError(f"symbol {c} occurs only {self.n} times")
            return j - 1
        s, e = 0, self.n
        for ell in range(self.width):
            sup = self.level_support(ell)
            if (c >> (self.width - 1 - ell)) & 1:
                s = self.zeros[ell] + sup.rank(1, s)
                e = self.zeros[ell] + sup.rank(1, e)
            else:
                s = sup.rank(0, s)
                e = sup.rank(0, e)
        if j > e - s:
            raise AbsentOccurrenceError(f"symbol {c} occurs only {e - s} times")
        pos = s + j - 1
        for ell in range(self.width - 1, -1, -1):
            sup = self.level_support(ell)
            if (c >> (self.width - 1 - ell)) & 1:
                pos = sup.select(1, pos - self.zeros[ell] + 1)
            else:
                pos = sup.select(0, pos + 1)
        return pos


def dump_structure(structure) -> bytes:
    """Serialize to the wire format.

    Layout: magic, version byte, kind byte, n and sigma as little-endian
    u64, level count as u16, the per-level zero counts (matrix only, u64
    each), then each level bit vector's own byte form.
    """
    kind_code = _KIND_CODES.get(structure.kind)
    if kind_code is None:
        raise ValueError(f"cannot serialize object of type {type(structure).__name__}")
    parts = [
        MAGIC,
        struct.pack("<BB", FORMAT_VERSION, kind_code),
        struct.pack("<QQH", structure.n, structure.sigma, structure.width),
    ]
    if kind_code == _KIND_CODES["wm"]:
        parts.append(struct.pack(f"<{structure.width}Q", *structure.zeros))
    for vec in structure.levels:
        parts.append(vec.to_bytes())
    return b"".join(parts)


def load_structure(data: bytes):
    """Inverse of dump_structure; raises ValueError on malformed input."""
    if len(data) < 24 or data[:4] != MAGIC:
        raise ValueError("not a serialized wavelet structure")
    version, kind_code = struct.unpack_from("<BB", data, 4)
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    kind = _KIND_NAMES.get(kind_code)
    if kind is None:
        raise ValueError(f"unknown structure kind code {kind_code}")
    n, sigma, width = struct.unpack_from("<QQH", data, 6)
    offset = 24
    zeros: list[int] = []
    if kind == "wm":
        if len(data) < offset + 8 * width:
            raise ValueError("truncated zero-count table")
        zeros = list(struct.unpack_from(f"<{width}Q", data, offset))
        offset += 8 * width
    levels = []
    for _ in range(width):
        vec, offset = BitVector.from_bytes(data, offset)
        levels.append(vec)
    if offset != len(data):
        raise ValueError("trailing bytes after structure payload")
    if kind == "wm":
        return WaveletMatrix(n, sigma, levels, zeros)
    return LevelWiseWaveletTree(n, sigma, levels)
