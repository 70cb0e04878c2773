"""Converting a wavelet tree into the wavelet matrix of the same text.

Both structures hold the same level bits, only permuted: level ell groups
symbols by ell-bit prefix either in numeric prefix order (tree) or in
bit-reversed prefix order (matrix).  Given the symbol histogram, a position
in a tree level maps to its matrix position in constant time, so conversion
never touches the original text.

Two ingredients, both derived from the histogram alone:

* a unary histogram code: each symbol's count written as a run of one
  bits, runs separated by single zero bits.  rank/select over it answer
  "which prefix group is tree position i in" and "where does that group
  start" without storing per-level group tables.
* one flat table of matrix-side group start positions for every level,
  2^width - 2 entries total, built by folding the histogram level by level.

Levels 0 and 1 are identical in both structures (the bit reversal of one
bit is itself), so conversion copies them and transports whole prefix
groups for the rest.
"""

from __future__ import annotations

import numpy as np

from . import _kernels as kernels
from .bitperm import bit_reversal_permutation, code_width
from .bitvec import BitVector, RankSelectBitVector
from .levelstats import symbol_histogram
from .structures import LevelWiseWaveletTree, WaveletMatrix, zeros_from_histogram


def unary_histogram(counts) -> BitVector:
    """Counts as runs of ones separated by single zeros.

    For counts (c_0, ..., c_{s-1}) the vector is 1^{c_0} 0 1^{c_1} 0 ...
    1^{c_{s-1}}: n + s - 1 bits.  The number of ones before the k-th zero
    is the number of symbols smaller than k, and the number of zeros before
    the j-th one is the value of the j-th smallest symbol.
    """
    c = np.asarray(counts, dtype=np.int64)
    if c.size < 1:
        raise ValueError("need at least one count")
    if c.size and int(c.min()) < 0:
        raise ValueError("counts must be nonnegative")
    total = int(c.sum()) + c.size - 1
    bits = np.ones(total, dtype=np.uint8)
    if c.size > 1:
        seps = np.cumsum(c[:-1]) + np.arange(c.size - 1)
        bits[seps] = 0
    return BitVector.from_bits(bits)


def interval_start_table(counts, sigma: int) -> np.ndarray:
    """Matrix-side group start positions for every level, flattened.

    Entry (1 << ell) - 2 + q is where the group of ell-bit prefix q starts
    in matrix level ell, for ell in [1, width).  Built from one working
    copy of the padded histogram folded level by level.
    """
    width = code_width(sigma)
    full = 1 << width
    c = np.zeros(full, dtype=np.int64)
    src = np.asarray(counts, dtype=np.int64)
    if src.size > full:
        raise ValueError("histogram longer than the code range")
    c[: src.size] = src
    table = np.zeros(max(full - 2, 0), dtype=np.int64)
    if width >= 2:
        work = c.copy()
        top = bit_reversal_permutation(width - 1)
        for ell in range(width - 1, 0, -1):
            m = 1 << ell
            kernels.fold_pairs(work, m)
            block = table[m - 2 : 2 * m - 2]
            kernels.starts_ordered(work, block, _contract(top, ell, width - 1), m)
    return table


def _contract(top_table: np.ndarray, order: int, top_order: int) -> np.ndarray:
    """Bit reversal table of the given order from the top-order table."""
    if order == top_order:
        return top_table
    return top_table[: 1 << order] >> (top_order - order)


class TreeToMatrixMap:
    """Constant-time mapping of tree level positions to matrix positions.

    Built from the symbol histogram only.  Holds the unary histogram code
    with rank/select support and the flat start table; both are shared by
    every query.
    """

    def __init__(self, counts, sigma: int):
        if sigma < 1:
            raise ValueError("alphabet size must be at least 1")
        c = np.asarray(counts, dtype=np.int64)
        if c.size > (1 << code_width(sigma)):
            raise ValueError("histogram longer than the code range")
        if c.size > sigma and int(c[sigma:].max(initial=0)) > 0:
            raise ValueError("counts above the alphabet bound must be zero")
        if c.size and int(c.min()) < 0:
            raise ValueError("counts must be nonnegative")
        head = np.zeros(sigma, dtype=np.int64)
        head[: min(c.size, sigma)] = c[:sigma]
        self.sigma = sigma
        self.width = code_width(sigma)
        self.n = int(head.sum())
        self.unary = RankSelectBitVector(unary_histogram(head))
        self.starts = interval_start_table(head, sigma)

    def map_position(self, level: int, i: int) -> int:
        """Matrix position of the bit at tree position i on this level."""
        if not 0 <= level < self.width:
            raise IndexError(f"level {level} out of range for width {self.width}")
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} out of range for length {self.n}")
        if level <= 1:
            return i
        u = self.unary
        # value whose sorted rank is i; only its level-bit prefix matters,
        # and that is shared with the actual symbol at tree position i
        value = u.rank(0, u.select(1, i + 1))
        shift = self.width - level
        prefix = value >> shift
        if prefix == 0:
            offset = i
        else:
            # ones before the separator closing value prefix*2^shift - 1
            below = u.rank(1, u.select(0, prefix << shift))
            offset = i - below
        return int(self.starts[(1 << level) - 2 + prefix]) + offset


def recover_histogram(wt: LevelWiseWaveletTree) -> np.ndarray:
    """Symbol histogram reconstructed from the tree itself.

    Splits [0, n) level by level: a prefix group's zero-bit count is the
    size of its left child group.  2^width rank queries in total, no text
    required.  Returns counts padded to the full code range.
    """
    bounds = np.array([0, wt.n], dtype=np.int64)
    for ell in range(wt.width):
        sup = wt.level_support(ell)
        z = np.array(
            [sup.rank(0, int(b)) for b in bounds],
            dtype=np.int64,
        )
        splits = bounds[:-1] + (z[1:] - z[:-1])
        merged = np.empty(2 * bounds.size - 1, dtype=np.int64)
        merged[0::2] = bounds
        merged[1::2] = splits
        bounds = merged
    return np.diff(bounds)


def convert_wt_to_wm(
    wt: LevelWiseWaveletTree,
    text=None,
    histogram=None,
) -> WaveletMatrix:
    """Matrix equivalent of a tree, built without revisiting the text.

    The histogram comes from `histogram` if given, else is counted from
    `text` if given, else is recovered from the tree.  Levels 0 and 1 are
    copied verbatim; deeper levels are assembled by moving each prefix
    group, located via the histogram fold chain, to its bit-reversed rank
    with word-level copies.
    """
    if not isinstance(wt, LevelWiseWaveletTree):
        raise TypeError("conversion starts from a wavelet tree")
    n, sigma, width = wt.n, wt.sigma, wt.width
    full = 1 << width
    if histogram is not None:
        h = np.asarray(histogram, dtype=np.int64)
        if h.size > full:
            raise ValueError("histogram longer than the code range")
        if h.size and int(h.min()) < 0:
            raise ValueError("counts must be nonnegative")
        counts = np.zeros(full, dtype=np.int64)
        counts[: h.size] = h
        if int(counts.sum()) != n:
            raise ValueError("histogram total disagrees with the structure length")
        if int(counts[sigma:].max(initial=0)) > 0:
            raise ValueError("counts above the alphabet bound must be zero")
    elif text is not None:
        arr = np.asarray(text)
        if arr.size != n:
            raise ValueError("text length disagrees with the structure")
        counts = symbol_histogram(arr, sigma) if n else np.zeros(full, dtype=np.int64)
    else:
        counts = recover_histogram(wt)

    levels = [BitVector(n, wt.levels[ell].words.copy()) for ell in range(min(width, 2))]
    zeros = [0] * width
    if width == 0:
        return WaveletMatrix(n, sigma, [], [])

    cur = counts.copy()
    chain: dict[int, np.ndarray] = {}
    for ell in range(width - 1, -1, -1):
        zeros[ell] = zeros_from_histogram(cur[: 2 << ell])
        if ell >= 1:
            kernels.fold_pairs(cur, 1 << ell)
            if ell >= 2:
                chain[ell] = cur[: 1 << ell].copy()

    nwords = (n + 63) >> 6
    for ell in range(2, width):
        h = chain[ell]
        order = bit_reversal_permutation(ell)
        id_starts = np.cumsum(h) - h
        lens = h[order]
        src = id_starts[order]
        keep = lens > 0
        lens = lens[keep]
        src = np.ascontiguousarray(src[keep])
        bounds = np.empty(lens.size + 1, dtype=np.int64)
        bounds[0] = 0
        np.cumsum(lens, out=bounds[1:])
        dst = BitVector(n)
        if n:
            kernels.gather_bits(dst.words, 0, nwords, n, bounds, src, wt.levels[ell].words, 0)
        levels.append(dst)
    return WaveletMatrix(n, sigma, levels, zeros)
