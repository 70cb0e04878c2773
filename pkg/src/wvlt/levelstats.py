"""Per-level symbol statistics and the prefix counting sort.

A level-ell view of a text groups symbols by their ell-bit prefix.  The
operations here compute the group sizes (histograms), derive them for the
next-shallower level by pairwise folding instead of rescanning the text,
turn them into interval start positions under a chosen group ordering, and
stably rearrange the text into those intervals with a counting sort.

The multi-core variants keep one histogram and one border array per core;
borders come from an exclusive prefix sum over the per-core counts
interleaved so that, within every prefix group, core 0's symbols precede
core 1's and so on.  That makes the parallel counting sort globally stable
without any coordination during the scatter itself.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels as kernels
from .bitperm import code_width

# Aggregate sizes below this run the border scan sequentially; a chunked
# parallel scan only pays off once p * 2^ell is well past cache scale.
PARALLEL_SCAN_THRESHOLD = 1 << 16


def symbol_histogram(text, sigma: int) -> np.ndarray:
    """Occurrence counts padded to the full code range [0, 2^ceil(lg sigma)).

    Entries at and above sigma are zero by construction.
    """
    arr = np.asarray(text)
    if sigma < 1:
        raise ValueError("alphabet size must be at least 1")
    width = code_width(sigma)
    if arr.size == 0:
        return np.zeros(1 << width, dtype=np.int64)
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError("text must hold integers")
    lo = int(arr.min())
    hi = int(arr.max())
    if lo < 0 or hi >= sigma:
        raise ValueError(f"symbols must lie in [0, {sigma})")
    return np.bincount(arr, minlength=1 << width).astype(np.int64)


def fold_histogram(hist) -> np.ndarray:
    """Histogram one level up: counts of i and of i|1 merge into count of i>>1."""
    h = np.asarray(hist, dtype=np.int64)
    if h.size < 2 or h.size % 2:
        raise ValueError("histogram length must be even and at least 2")
    return h[0::2] + h[1::2]


def interval_starts(hist, order=None) -> np.ndarray:
    """Exclusive prefix sum of hist, accumulated in `order` (numeric when None).

    The result stays indexed by prefix value: starts[q] is where prefix q's
    interval begins when intervals are laid out in the given order.
    """
    h = np.ascontiguousarray(hist, dtype=np.int64)
    starts = np.empty_like(h)
    if order is None:
        kernels.starts_identity(h, starts, h.size)
    else:
        o = np.ascontiguousarray(order, dtype=np.int64)
        if o.size != h.size:
            raise ValueError("order must permute exactly the histogram's indices")
        kernels.starts_ordered(h, starts, o, h.size)
    return starts


def interleaved_starts(local_hists, order=None, pool: ThreadPoolExecutor | None = None) -> np.ndarray:
    """Per-core interval starts from per-core histograms.

    local_hists is (p, K); the virtual scanned sequence is core 0's count
    for the first prefix in `order`, then core 1's, ..., then the next
    prefix, so the returned (p, K) starts give each core its own disjoint
    sub-range inside every prefix interval.
    """
    hists = np.ascontiguousarray(local_hists, dtype=np.int64)
    if hists.ndim != 2:
        raise ValueError("local_hists must be a (cores, prefixes) array")
    starts = np.empty_like(hists)
    o = None
    if order is not None:
        o = np.ascontiguousarray(order, dtype=np.int64)
        if o.size != hists.shape[1]:
            raise ValueError("order must permute exactly the histogram's indices")
    interleaved_starts_into(hists, starts, o, hists.shape[1], pool)
    return starts


def interleaved_starts_into(hists, starts, order, m, pool=None) -> None:
    """In-place form of interleaved_starts over the first m prefix columns."""
    p = hists.shape[0]
    if pool is None or p * m < PARALLEL_SCAN_THRESHOLD:
        if order is None:
            kernels.interleaved_starts_identity(hists, starts, m)
        else:
            kernels.interleaved_starts_ordered(hists, starts, order, m)
        return
    # chunked scan: per-block totals, exclusive scan of the totals, then
    # each block fills its range from its offset
    nblocks = getattr(pool, "_max_workers", 2)
    cuts = [(m * b) // nblocks for b in range(nblocks + 1)]
    if order is None:
        futures = [
            pool.submit(kernels.interleaved_total_identity, hists, cuts[b], cuts[b + 1])
            for b in range(nblocks)
        ]
    else:
        futures = [
            pool.submit(kernels.interleaved_total_ordered, hists, order, cuts[b], cuts[b + 1])
            for b in range(nblocks)
        ]
    totals = [f.result() for f in futures]
    offsets = np.concatenate(([0], np.cumsum(totals)))
    if order is None:
        futures = [
            pool.submit(
                kernels.interleaved_fill_identity, hists, starts, cuts[b], cuts[b + 1], offsets[b]
            )
            for b in range(nblocks)
        ]
    else:
        futures = [
            pool.submit(
                kernels.interleaved_fill_ordered, hists, starts, order, cuts[b], cuts[b + 1], offsets[b]
            )
            for b in range(nblocks)
        ]
    for f in futures:
        f.result()


def counting_sort_by_prefix(text, level: int, width: int, starts, slices, out=None) -> np.ndarray:
    """Stable rearrangement of the text into prefix intervals.

    starts is the (p, 2^level) result of interleaved_starts for the same
    slices and is not modified; slices is a list of (lo, hi) ranges tiling
    the text in order, one per core.  Symbols land grouped by ell-bit prefix
    in the interval order baked into starts, original text order within a
    group.
    """
    arr = np.asarray(text)
    if not 0 <= level <= width:
        raise ValueError("prefix length outside code width")
    cursors = np.array(starts, dtype=np.int64, copy=True)
    if cursors.ndim != 2 or cursors.shape[0] != len(slices):
        raise ValueError("starts must have one row per slice")
    if cursors.shape[1] != 1 << level:
        raise ValueError(f"starts must have one column per {level}-bit prefix")
    if out is None:
        out = np.empty_like(arr)
    shift = width - level
    for c, (lo, hi) in enumerate(slices):
        kernels.scatter_by_prefix(arr, lo, hi, shift, cursors[c], out)
    return out
