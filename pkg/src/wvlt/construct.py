"""Bottom-up builders for wavelet trees and wavelet matrices.

All builders share one idea: the histogram of ell-bit prefixes comes from
pairwise-folding the histogram of (ell+1)-bit prefixes, so after a single
text scan every level can be laid out without re-deriving counts.  Levels
are filled top to bottom, each from the original text in one pass.

Five routes:

* pc        sequential; borders double as write cursors, a fused loop
            extracts each symbol's level bit while counting it into place.
* ps        multi-core over p text slices; per-core histograms, interleaved
            per-core borders, a shared scatter into one reused symbol
            buffer, then bit packing per slice.
* levelpar  one worker per level; each worker re-derives its histogram and
            runs the sequential fused pass for just its level.
* ddpc/ddps p independent slice builds (sequential pc or ps inner loop)
            into shared per-level buffers, then a per-level merge that
            moves whole intervals with word-level copies.

Slice boundaries are aligned to SLICE_ALIGNMENT bits so distinct cores
never touch the same output word; merges likewise split the destination at
word boundaries.  Every helper array of position-sized entries is tagged in
the active AllocationLog so tests can pin auxiliary space exactly.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .bitperm import BitReversalTables, bit_reversal_permutation, code_width
from .bitvec import BitVector
from .levelstats import interleaved_starts_into
from .structures import LevelWiseWaveletTree, WaveletMatrix

SLICE_ALIGNMENT = 512

ALGORITHMS = ("pc", "ps", "levelpar", "ddpc", "ddps")
KINDS = ("wt", "wm")


class AllocationLog:
    """Ledger of auxiliary allocations made during one build.

    Categories: "positions" for histogram/border arrays of position-sized
    entries, "symbols" for scratch symbol buffers, "tables" for bit
    reversal tables, "partial_bits" for per-slice partial level storage.
    Peak tracks live bytes across all categories; O(1) locals and the
    output itself are not logged.
    """

    def __init__(self):
        self.events: list[tuple[str, int, int]] = []
        self.peak_bytes = 0
        self._live = 0
        self._lock = threading.Lock()

    def note(self, category: str, entries: int, nbytes: int) -> None:
        with self._lock:
            self.events.append((category, entries, nbytes))
            self._live += nbytes
            if self._live > self.peak_bytes:
                self.peak_bytes = self._live

    def release(self, nbytes: int) -> None:
        with self._lock:
            self._live -= nbytes

    def entries(self, category: str) -> int:
        return sum(e for cat, e, _ in self.events if cat == category)

    def buffers(self, category: str) -> list[int]:
        return [e for cat, e, _ in self.events if cat == category]

    @property
    def position_entries(self) -> int:
        return self.entries("positions")


_active_log: AllocationLog | None = None


@contextmanager
def track_allocations():
    """Collect allocation events from builds run inside the with block."""
    global _active_log
    prev = _active_log
    log = AllocationLog()
    _active_log = log
    try:
        yield log
    finally:
        _active_log = prev


def _alloc(category: str, shape, dtype, zero: bool = True) -> np.ndarray:
    arr = np.zeros(shape, dtype) if zero else np.empty(shape, dtype)
    if _active_log is not None:
        _active_log.note(category, arr.size, arr.nbytes)
    return arr


def _note_copy(category: str, arr: np.ndarray) -> np.ndarray:
    if _active_log is not None:
        _active_log.note(category, arr.size, arr.nbytes)
    return arr


def _release(*arrays) -> None:
    if _active_log is not None:
        for arr in arrays:
            if arr is not None:
                _active_log.release(arr.nbytes)


def _tables_for(width: int) -> BitReversalTables:
    """Reversal-table family for levels below `width`, logged under "tables"."""
    tables = BitReversalTables(width - 1)
    if _active_log is not None:
        _active_log.note("tables", 1 << (width - 1), (1 << (width - 1)) * 8)
    return tables


@dataclass(frozen=True)
class ConstructionPlan:
    """What to build and how: structure kind, algorithm, worker count."""

    kind: str = "wt"
    algorithm: str = "pc"
    threads: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown structure kind {self.kind!r}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.threads < 1:
            raise ValueError("thread count must be at least 1")

    def build(self, text, sigma: int):
        return build_structure(text, sigma, self.kind, self.algorithm, self.threads)


def build_structure(text, sigma: int, kind: str = "wt", algorithm: str = "pc", threads: int = 1):
    """Dispatch to one of the builders; all produce identical structures."""
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    if algorithm == "pc":
        return build_by_prefix_counting(text, sigma, kind)
    if algorithm == "ps":
        return build_by_prefix_sorting(text, sigma, kind, threads)
    if algorithm == "levelpar":
        return build_level_parallel(text, sigma, kind, threads)
    if algorithm == "ddpc":
        return build_domain_decomposed(text, sigma, kind, threads, inner="pc")
    if algorithm == "ddps":
        return build_domain_decomposed(text, sigma, kind, threads, inner="ps")
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _validated(text, sigma: int, kind: str, threads: int = 1):
    if kind not in KINDS:
        raise ValueError(f"unknown structure kind {kind!r}")
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    arr = np.asarray(text)
    if arr.ndim != 1:
        raise ValueError("text must be one-dimensional")
    if not (arr.size == 0 or np.issubdtype(arr.dtype, np.integer)):
        raise ValueError("text must hold integers")
    if sigma == 0:
        if arr.size:
            raise ValueError("alphabet size 0 admits only the empty text")
        sigma = 1
    if sigma < 1:
        raise ValueError("alphabet size must be at least 1")
    if arr.size:
        lo = int(arr.min())
        hi = int(arr.max())
        if lo < 0 or hi >= sigma:
            raise ValueError(f"symbols must lie in [0, {sigma})")
    if arr.size and not arr.flags.c_contiguous:
        arr = np.ascontiguousarray(arr)
    return arr, sigma


def _wrap(kind: str, n: int, sigma: int, levels: list[BitVector], zeros):
    if kind == "wm":
        return WaveletMatrix(n, sigma, levels, zeros)
    return LevelWiseWaveletTree(n, sigma, levels)


def _aligned_slices(n: int, p: int) -> list[tuple[int, int]]:
    """p (lo, hi) ranges tiling [0, n), each but the last a multiple of
    SLICE_ALIGNMENT bits long; trailing slices may be empty."""
    per = -(-n // p) if p else n
    chunk = -(-per // SLICE_ALIGNMENT) * SLICE_ALIGNMENT
    out = []
    for c in range(p):
        lo = min(c * chunk, n)
        hi = min(lo + chunk, n)
        if c == p - 1:
            hi = n
        out.append((lo, hi))
    return out


def _word_ranges(total_words: int, p: int) -> list[tuple[int, int]]:
    """Split [0, total_words) into p contiguous runs, longest first."""
    cuts = [(total_words * c) // p for c in range(p + 1)]
    return [(cuts[c], cuts[c + 1]) for c in range(p)]


@contextmanager
def _pool(threads: int):
    if threads <= 1:
        yield None
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            yield pool


def _run_phase(pool, tasks) -> list:
    """Run all callables; with a pool, submit everything then wait (a
    barrier between phases), otherwise run inline."""
    if pool is None:
        return [task() for task in tasks]
    futures = [pool.submit(task) for task in tasks]
    return [f.result() for f in futures]


def _evensum(hist, m: int) -> int:
    return int(np.add.reduce(hist[0 : 2 * m : 2]))


def _sequential_levels(
    text,
    width: int,
    wm: bool,
    level_words: list[np.ndarray],
    hist: np.ndarray,
    borders: np.ndarray,
    fused: bool,
    scratch,
    retain_chain: bool = False,
    want_zeros: bool = True,
):
    """Single-threaded bottom-up fill of all levels for one text range.

    hist must arrive zeroed; positions are local to the range.  With
    fused=True each level is one combined count-and-write pass over the
    text; otherwise symbols are scattered into `scratch` first and the
    level bits packed from there.  retain_chain keeps a copy of the
    histogram at every level (deepest first) for later merging.

    Returns (zeros, chain).
    """
    n = text.shape[0]
    kernels.hist_and_msb_bits(text, hist, level_words[0], width)
    chain: dict[int, np.ndarray] | None = None
    if retain_chain:
        chain = {width: _note_copy("positions", hist[: 1 << width].copy())}
    zeros = [0] * width if (wm and want_zeros) else None
    tables = _tables_for(width) if (wm and width >= 2) else None
    for ell in range(width - 1, 0, -1):
        m = 1 << ell
        if zeros is not None:
            zeros[ell] = _evensum(hist, m)
        kernels.fold_pairs(hist, m)
        if retain_chain:
            chain[ell] = _note_copy("positions", hist[:m].copy())
        if wm:
            kernels.starts_ordered(hist, borders, tables.table(ell), m)
        else:
            kernels.starts_identity(hist, borders, m)
        if fused:
            kernels.sort_level_pass(text, width - ell, width - 1 - ell, borders, level_words[ell])
        else:
            kernels.scatter_by_prefix(text, 0, n, width - ell, borders, scratch)
            kernels.write_bits_from_symbols(scratch[:n], width - 1 - ell, level_words[ell], n)
    if zeros is not None and width >= 1:
        zeros[0] = int(hist[0]) if width > 1 else n - int(np.count_nonzero(text))
    return zeros, chain


def build_by_prefix_counting(text, sigma: int, kind: str = "wt"):
    """Sequential build: one histogram pass, then one fused pass per level.

    Auxiliary space is exactly two arrays of 2^width position entries (the
    histogram and the borders), reused across levels.
    """
    arr, sigma = _validated(text, sigma, kind)
    n = arr.size
    width = code_width(sigma)
    levels = [BitVector(n) for _ in range(width)]
    zeros: list[int] = [0] * width
    if width:
        hist = _alloc("positions", 1 << width, np.int64)
        borders = _alloc("positions", 1 << width, np.int64, zero=False)
        zs, _ = _sequential_levels(
            arr,
            width,
            kind == "wm",
            [vec.words for vec in levels],
            hist,
            borders,
            fused=True,
            scratch=None,
        )
        if kind == "wm":
            zeros = zs
        _release(hist, borders)
    return _wrap(kind, n, sigma, levels, zeros)


def build_by_prefix_sorting(text, sigma: int, kind: str = "wt", threads: int = 1):
    """Multi-core build over aligned text slices.

    Each core histograms its slice and writes its slice's top-level bits;
    per level, cores fold their own histograms, a shared interleaved border
    scan assigns every core a disjoint sub-range of every interval, cores
    scatter their slices into one shared symbol buffer, then pack their
    slice of the level's bits from it.  Matches the sequential build bit
    for bit at any thread count.
    """
    arr, sigma = _validated(text, sigma, kind, threads)
    n = arr.size
    width = code_width(sigma)
    wm = kind == "wm"
    p = threads
    levels = [BitVector(n) for _ in range(width)]
    zeros: list[int] = [0] * width
    if width:
        slices = _aligned_slices(n, p)
        active = [(c, lo, hi) for c, (lo, hi) in enumerate(slices) if hi > lo]
        hists = _alloc("positions", (p, 1 << width), np.int64)
        cursors = _alloc("positions", (p, 1 << width), np.int64, zero=False)
        scratch = _alloc("symbols", n, arr.dtype, zero=False)
        tables = _tables_for(width) if (wm and width >= 2) else None
        with _pool(p) as pool:
            _run_phase(
                pool,
                [
                    (lambda c=c, lo=lo, hi=hi: kernels.hist_and_msb_bits(
                        arr[lo:hi], hists[c], levels[0].words[lo >> 6 :], width
                    ))
                    for c, lo, hi in active
                ],
            )
            for ell in range(width - 1, 0, -1):
                m = 1 << ell
                if wm:
                    zeros[ell] = int(hists[:, 0 : 2 * m : 2].sum())
                _run_phase(
                    pool,
                    [(lambda c=c: kernels.fold_pairs(hists[c], m)) for c in range(p)],
                )
                order = tables.table(ell) if wm else None
                interleaved_starts_into(hists, cursors, order, m, pool)
                _run_phase(
                    pool,
                    [
                        (lambda c=c, lo=lo, hi=hi: kernels.scatter_by_prefix(
                            arr, lo, hi, width - ell, cursors[c], scratch
                        ))
                        for c, lo, hi in active
                    ],
                )
                _run_phase(
                    pool,
                    [
                        (lambda lo=lo, hi=hi: kernels.write_bits_from_symbols(
                            scratch[lo:hi], width - 1 - ell, levels[ell].words[lo >> 6 :], hi - lo
                        ))
                        for _, lo, hi in active
                    ],
                )
        if wm:
            zeros[0] = int(hists[:, 0].sum()) if width > 1 else n - int(np.count_nonzero(arr))
        _release(hists, cursors, scratch)
    return _wrap(kind, n, sigma, levels, zeros)


def build_level_parallel(text, sigma: int, kind: str = "wm", threads: int = 1):
    """One independent worker per level.

    Level 0 needs no counts and just packs the top bits.  Every deeper
    level re-histograms the text, folds down to its own prefix length, and
    runs the fused counting pass for itself alone.  Total work grows by a
    factor of about width over the sequential build, but no level waits on
    another.
    """
    arr, sigma = _validated(text, sigma, kind, threads)
    n = arr.size
    width = code_width(sigma)
    wm = kind == "wm"
    levels = [BitVector(n) for _ in range(width)]
    zeros: list[int] = [0] * width

    def level_task(ell: int) -> None:
        if ell == 0:
            kernels.write_bits_from_symbols(arr, width - 1, levels[0].words, n)
            if wm and width == 1:
                zeros[0] = n - int(np.count_nonzero(arr))
            return
        hist = _alloc("positions", 1 << width, np.int64)
        kernels.full_histogram(arr, hist)
        for k in range(width - 1, ell - 1, -1):
            if wm and k == ell:
                zeros[ell] = _evensum(hist, 1 << ell)
            kernels.fold_pairs(hist, 1 << k)
        if wm and ell == 1:
            zeros[0] = int(hist[0])
        borders = _alloc("positions", 1 << ell, np.int64, zero=False)
        if wm:
            order = _note_copy("tables", bit_reversal_permutation(ell))
            kernels.starts_ordered(hist, borders, order, 1 << ell)
            _release(order)
        else:
            kernels.starts_identity(hist, borders, 1 << ell)
        kernels.sort_level_pass(arr, width - ell, width - 1 - ell, borders, levels[ell].words)
        _release(hist, borders)

    if width:
        workers = min(threads, width)
        with _pool(workers) as pool:
            _run_phase(pool, [(lambda ell=ell: level_task(ell)) for ell in range(width)])
    return _wrap(kind, n, sigma, levels, zeros)


def build_domain_decomposed(text, sigma: int, kind: str = "wt", threads: int = 1, inner: str = "pc"):
    """Independent per-slice builds followed by a per-level interval merge.

    Each slice builds a complete partial structure of its own text range,
    all slices writing into shared per-level word buffers at their own bit
    offsets (alignment keeps word ownership disjoint).  Slices retain their
    histogram fold chains; the merge lays intervals out globally by walking
    prefixes in interval order and concatenating the per-slice pieces,
    copying bits a word at a time.  Destination words are split across
    cores, so the merge parallelizes without overlap.
    """
    if inner not in ("pc", "ps"):
        raise ValueError(f"unknown inner algorithm {inner!r}")
    arr, sigma = _validated(text, sigma, kind, threads)
    n = arr.size
    width = code_width(sigma)
    wm = kind == "wm"
    p = threads
    levels = [BitVector(n) for _ in range(width)]
    zeros: list[int] = [0] * width
    if width == 0 or n == 0:
        return _wrap(kind, n, sigma, levels, zeros)

    slices = _aligned_slices(n, p)
    active = [(c, lo, hi) for c, (lo, hi) in enumerate(slices) if hi > lo]
    nwords = (n + 63) >> 6
    partial_words = [_alloc("partial_bits", nwords, np.uint64) for _ in range(width)]
    chains: list[dict[int, np.ndarray] | None] = [None] * p

    def slice_task(c: int, lo: int, hi: int) -> None:
        piece = arr[lo:hi]
        m = hi - lo
        views = [words[lo >> 6 : (hi + 63) >> 6] for words in partial_words]
        hist = _alloc("positions", 1 << width, np.int64)
        borders = _alloc("positions", 1 << width, np.int64, zero=False)
        scratch = _alloc("symbols", m, arr.dtype, zero=False) if inner == "ps" else None
        _, chain = _sequential_levels(
            piece,
            width,
            wm,
            views,
            hist,
            borders,
            fused=inner == "pc",
            scratch=scratch,
            retain_chain=True,
            want_zeros=False,
        )
        chains[c] = chain
        _release(hist, borders, scratch)

    with _pool(min(p, len(active))) as pool:
        _run_phase(pool, [(lambda c=c, lo=lo, hi=hi: slice_task(c, lo, hi)) for c, lo, hi in active])

        if wm:
            for ell in range(width):
                zeros[ell] = sum(_evensum(chains[c][ell + 1], 1 << ell) for c, _, _ in active)

        tables = _tables_for(width) if (wm and width >= 2) else None
        slice_lo = np.array([lo for _, lo, _ in active], dtype=np.int64)
        for ell in range(width - 1, -1, -1):
            order = tables.table(ell) if (tables is not None and ell >= 2) else None
            bounds, src_starts = _merge_plan(chains, active, slice_lo, ell, width, order)
            dest = levels[ell].words
            ranges = [(w0, w1) for w0, w1 in _word_ranges(nwords, p) if w1 > w0]

            def merge_task(w0: int, w1: int) -> None:
                t0 = int(np.searchsorted(bounds, 64 * w0, side="right")) - 1
                kernels.gather_bits(dest, w0, w1, n, bounds, src_starts, partial_words[ell], t0)

            _run_phase(pool, [(lambda w0=w0, w1=w1: merge_task(w0, w1)) for w0, w1 in ranges])

    _release(*partial_words)
    for chain in chains:
        if chain:
            _release(*chain.values())
    return _wrap(kind, n, sigma, levels, zeros)


def _merge_plan(chains, active, slice_lo, ell: int, width: int, order):
    """Source intervals for one merged level, in destination order.

    Returns (bounds, src_starts): destination interval r covers global bits
    [bounds[r], bounds[r+1]) and copies from bit src_starts[r] of the
    shared partial buffer.  Intervals walk prefixes in interval order,
    slices in text order within each prefix; empty pieces are dropped.
    """
    q = len(active)
    if ell == 0:
        lens = np.array([hi - lo for _, lo, hi in active], dtype=np.int64)
        src = slice_lo.copy()
    else:
        m = 1 << ell
        stacked = np.empty((q, m), dtype=np.int64)
        for row, (c, _, _) in enumerate(active):
            stacked[row] = chains[c][ell]
        ordered = stacked[:, order] if order is not None else stacked
        local_starts = np.cumsum(ordered, axis=1) - ordered
        lens = ordered.T.ravel()
        src = (slice_lo[:, np.newaxis] + local_starts).T.ravel()
    keep = lens > 0
    lens = lens[keep]
    src = src[keep]
    bounds = np.empty(lens.size + 1, dtype=np.int64)
    bounds[0] = 0
    np.cumsum(lens, out=bounds[1:])
    return bounds, np.ascontiguousarray(src)
