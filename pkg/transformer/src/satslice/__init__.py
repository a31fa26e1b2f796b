"""satslice: a toy-scale SAT/UNSAT transformer classifier with head slicing."""

from .config import SatModelConfig
from .data import (
    Problem,
    TokenBatch,
    load_problems,
    make_batch,
    parse_dimacs_cells,
    read_dimacs_dir,
    read_packed,
)
from .model import PreNormBlock, SatTransformer, head_slice
from .train import StepMetrics, evaluate_accuracy, train

__version__ = "0.1.0"
