"""wavealign: exact pairwise local alignment for long sequences.

Three phases, all running on a block-wavefront engine with linear-memory
boundary state: a pruned forward pass finds the optimal score and endpoint,
a banded reverse pass finds the start point, and a divide-and-conquer
reconstruction emits the full path. A dual-worker mode scores the two
halves of the matrix concurrently.
"""
from .engine import AllocationMeter, BlockGrid, WavefrontEngine, plan_grid
from .errors import (
    AlignError,
    CellBudgetExceeded,
    DiscontiguousParts,
    EmptyFile,
    IllegalResidue,
    IncompleteMatrix,
    InputError,
    NoRecords,
    NonInteger,
    NonPositiveMaxScore,
    PathInconsistent,
    RaggedRow,
    ScoreMismatch,
    StartNotFound,
    UnknownSymbol,
    WorkerPanic,
)
from .model import (
    Alphabet,
    AlignmentPath,
    AlignmentSummary,
    Coord,
    Op,
    ScoringScheme,
    Sequence,
    cigar_to_ops,
    path_to_cigar,
    score_of_path,
    validate_scheme,
)
from .oracle import oracle_global, oracle_local
from .phase1 import ScoredEndpoint, best_local, prune_verdict
from .phase2 import BandSpec, compute_band, locate_start
from .phase3 import Subproblem, find_crossing, join_paths, reconstruct
from .pipeline import AlignConfig, align, score_only
from .split import MidCombine, classify_midcase, split_align

__version__ = "0.1.0"

__all__ = [
    "AlignConfig",
    "AlignError",
    "AllocationMeter",
    "Alphabet",
    "AlignmentPath",
    "AlignmentSummary",
    "BandSpec",
    "BlockGrid",
    "CellBudgetExceeded",
    "Coord",
    "DiscontiguousParts",
    "EmptyFile",
    "IllegalResidue",
    "IncompleteMatrix",
    "InputError",
    "MidCombine",
    "NoRecords",
    "NonInteger",
    "NonPositiveMaxScore",
    "Op",
    "PathInconsistent",
    "RaggedRow",
    "ScoreMismatch",
    "ScoredEndpoint",
    "ScoringScheme",
    "Sequence",
    "StartNotFound",
    "Subproblem",
    "UnknownSymbol",
    "WavefrontEngine",
    "WorkerPanic",
    "align",
    "best_local",
    "cigar_to_ops",
    "classify_midcase",
    "compute_band",
    "find_crossing",
    "join_paths",
    "locate_start",
    "oracle_global",
    "oracle_local",
    "path_to_cigar",
    "plan_grid",
    "prune_verdict",
    "reconstruct",
    "score_of_path",
    "score_only",
    "split_align",
    "validate_scheme",
]
