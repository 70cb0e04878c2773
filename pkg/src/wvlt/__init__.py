"""Level-wise wavelet trees and wavelet matrices.

Bottom-up sequential and parallel construction, access/rank/select queries,
and constant-time position translation from the tree layout to the matrix
layout.
"""

from .bitvec import AbsentOccurrenceError, BitVector, RankSelectBitVector
from .bitperm import (
    BitReversalTables,
    bit_of,
    bit_reversal_permutation,
    code_width,
    prefix_of,
    reverse_bits,
)
from .structures import (
    LevelWiseWaveletTree,
    WaveletMatrix,
    dump_structure,
    load_structure,
    zeros_from_histogram,
)
from .construct import (
    ConstructionPlan,
    build_by_prefix_counting,
    build_by_prefix_sorting,
    build_domain_decomposed,
    build_level_parallel,
    build_structure,
    track_allocations,
)
from .wt2wm import TreeToMatrixMap, convert_wt_to_wm, recover_histogram
from .oracle import (
    naive_access,
    naive_rank,
    naive_select,
    naive_structure,
    naive_wm_levels,
    naive_wt_levels,
)

__version__ = "0.1.0"

__all__ = [
    "AbsentOccurrenceError",
    "BitVector",
    "RankSelectBitVector",
    "BitReversalTables",
    "bit_of",
    "bit_reversal_permutation",
    "code_width",
    "prefix_of",
    "reverse_bits",
    "LevelWiseWaveletTree",
    "WaveletMatrix",
    "dump_structure",
    "load_structure",
    "zeros_from_histogram",
    "ConstructionPlan",
    "build_by_prefix_counting",
    "build_by_prefix_sorting",
    "build_domain_decomposed",
    "build_level_parallel",
    "build_structure",
    "track_allocations",
    "TreeToMatrixMap",
    "convert_wt_to_wm",
    "recover_histogram",
    "naive_access",
    "naive_rank",
    "naive_select",
    "naive_structure",
    "naive_wm_levels",
    "naive_wt_levels",
    "__version__",
]
