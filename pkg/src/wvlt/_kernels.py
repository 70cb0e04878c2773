"""Compiled inner loops for construction, merging and support building.

Each function is a plain loop over preallocated arrays so numba can compile
it once per dtype and release the GIL while it runs; slicing, phase
barriers and allocation accounting stay in the calling modules.  Worker
threads driving these kernels therefore run truly in parallel.

Conventions: text arrays may be any unsigned (or non-negative signed)
integer dtype and every symbol is widened to uint64 before shifting, so a
prefix shift equal to the full code width is safe for narrow dtypes.
Position/count arrays are int64, bit vector words are uint64 packed
LSB-first.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_SIX = np.uint64(6)
_U64 = np.uint64(64)


@njit(nogil=True, cache=True)
def hist_and_msb_bits(text, hist, words, width):
    """One pass over a text slice: full-width histogram plus level-0 bits.

    `words` is the destination word range for this slice; the slice's first
    symbol must sit at bit offset 0 of words[0] (callers arrange that by
    aligning slices to whole words).
    """
    msb = np.uint64(width - 1)
    for i in range(text.shape[0]):
        v = np.uint64(text[i])
        hist[v] += 1
        if (v >> msb) & _ONE:
            words[i >> 6] |= _ONE << np.uint64(i & 63)


@njit(nogil=True, cache=True)
def full_histogram(text, hist):
    for i in range(text.shape[0]):
        hist[np.uint64(text[i])] += 1


@njit(nogil=True, cache=True)
def fold_pairs(hist, m):
    """hist[i] = hist[2i] + hist[2i+1] for i < m, ascending, so in place."""
    for i in range(m):
        hist[i] = hist[2 * i] + hist[2 * i + 1]


@njit(nogil=True, cache=True)
def starts_identity(hist, starts, m):
    """Zero-based exclusive prefix sum of hist[:m] in numeric order."""
    run = np.int64(0)
    for q in range(m):
        starts[q] = run
        run += hist[q]


@njit(nogil=True, cache=True)
def starts_ordered(hist, starts, order, m):
    """Zero-based exclusive prefix sum of hist[:m] visited in `order`.

    starts stays indexed by prefix value; only the accumulation order (and
    therefore which interval precedes which) follows the permutation.
    """
    run = np.int64(0)
    for r in range(m):
        q = order[r]
        starts[q] = run
        run += hist[q]


@njit(nogil=True, cache=True)
def interleaved_starts_identity(hists, starts, m):
    """Exclusive prefix sum over hists in (prefix, core)-major order.

    hists and starts are (p, K) arrays; the virtual sequence visits core 0's
    count for the first prefix, then core 1's, ... before moving to the next
    prefix, so each core's border for a prefix lands after every earlier
    core's block of the same prefix.
    """
    p = hists.shape[0]
    run = np.int64(0)
    for q in range(m):
        for c in range(p):
            starts[c, q] = run
            run += hists[c, q]


@njit(nogil=True, cache=True)
def interleaved_starts_ordered(hists, starts, order, m):
    p = hists.shape[0]
    run = np.int64(0)
    for r in range(m):
        q = order[r]
        for c in range(p):
            starts[c, q] = run
            run += hists[c, q]


@njit(nogil=True, cache=True)
def interleaved_total_identity(hists, r0, r1):
    """Sum of all cores' counts for prefixes with rank in [r0, r1)."""
    p = hists.shape[0]
    total = np.int64(0)
    for q in range(r0, r1):
        for c in range(p):
            total += hists[c, q]
    return total


@njit(nogil=True, cache=True)
def interleaved_total_ordered(hists, order, r0, r1):
    p = hists.shape[0]
    total = np.int64(0)
    for r in range(r0, r1):
        q = order[r]
        for c in range(p):
            total += hists[c, q]
    return total


@njit(nogil=True, cache=True)
def interleaved_fill_identity(hists, starts, r0, r1, offset):
    p = hists.shape[0]
    run = offset
    for q in range(r0, r1):
        for c in range(p):
            starts[c, q] = run
            run += hists[c, q]


@njit(nogil=True, cache=True)
def interleaved_fill_ordered(hists, starts, order, r0, r1, offset):
    p = hists.shape[0]
    run = offset
    for r in range(r0, r1):
        q = order[r]
        for c in range(p):
            starts[c, q] = run
            run += hists[c, q]


@njit(nogil=True, cache=True)
def scatter_by_prefix(text, lo, hi, shift, cursors, out):
    """Stable counting-sort scatter of text[lo:hi] keyed by prefix.

    cursors holds this caller's next free destination per prefix and is
    advanced in place; destinations are disjoint across callers because the
    interleaved border computation hands each core its own sub-ranges.
    """
    sh = np.uint64(shift)
    for i in range(lo, hi):
        v = np.uint64(text[i])
        q = v >> sh
        pos = cursors[q]
        cursors[q] = pos + 1
        out[pos] = text[i]


@njit(nogil=True, cache=True)
def sort_level_pass(text, prefix_shift, bit_shift, cursors, words):
    """Fused scatter for the sequential builder: place each symbol's level
    bit directly at the next free slot of its prefix interval, no scratch
    text needed.  words must be zeroed (only 1-bits are written)."""
    psh = np.uint64(prefix_shift)
    bsh = np.uint64(bit_shift)
    for i in range(text.shape[0]):
        v = np.uint64(text[i])
        q = v >> psh
        pos = cursors[q]
        cursors[q] = pos + 1
        if (v >> bsh) & _ONE:
            words[pos >> 6] |= _ONE << np.uint64(pos & 63)


@njit(nogil=True, cache=True)
def write_bits_from_symbols(symbols, bit_shift, words, nbits):
    """words[j] = packed level bits of symbols[64j : 64j+64), whole-word
    stores including the zero padding of a trailing partial word.  The
    symbol range must start at bit offset 0 of words[0] and be exclusively
    owned by the caller down to word granularity."""
    bsh = np.uint64(bit_shift)
    i = 0
    while i < nbits:
        end = min(i + 64, nbits)
        acc = np.uint64(0)
        for j in range(i, end):
            acc |= ((np.uint64(symbols[j]) >> bsh) & _ONE) << np.uint64(j - i)
        words[i >> 6] = acc
        i = end


@njit(nogil=True, cache=True)
def gather_bits(dst_words, word_lo, word_hi, n_bits, bounds, src_starts, src_words, t0):
    """Stream bits of ordered source intervals into whole destination words.

    Task t copies src_words bits starting at src_starts[t] into destination
    bit range [bounds[t], bounds[t+1]); the tasks tile [0, n_bits).  The
    caller owns destination words [word_lo, word_hi) exclusively and t0 is
    the task containing bit 64*word_lo, so concurrent callers never touch
    the same destination word even when an interval boundary crosses it.
    """
    t = t0
    for wd in range(word_lo, word_hi):
        base = wd << 6
        nbits = n_bits - base
        if nbits > 64:
            nbits = 64
        acc = np.uint64(0)
        filled = 0
        while filled < nbits:
            here = base + filled
            while bounds[t + 1] <= here:
                t += 1
            avail = bounds[t + 1] - here
            take = nbits - filled
            if avail < take:
                take = avail
            src_pos = src_starts[t] + (here - bounds[t])
            wi = src_pos >> 6
            sh = src_pos & 63
            chunk = src_words[wi] >> np.uint64(sh)
            if sh + take > 64:
                chunk |= src_words[wi + 1] << np.uint64(64 - sh)
            if take < 64:
                chunk &= (_ONE << np.uint64(take)) - _ONE
            acc |= chunk << np.uint64(filled)
            filled += take
        dst_words[wd] = acc
