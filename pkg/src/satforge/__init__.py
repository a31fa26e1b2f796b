"""satforge: labeled CNF generation with provable SAT/UNSAT labels.

Formulas are generated together with the evidence for their label -- a
satisfying assignment for SAT, a replayable backward-resolution trace for
UNSAT -- and every piece is checkable at desk scale against the exhaustive
oracles in :mod:`satforge.oracle`.
"""

from .core import (
    Assignment,
    Clause,
    Cnf,
    DenseEncoding,
    Label,
    LabeledProblem,
    Literal,
    evaluate,
    from_dense,
    to_dense,
    tokenize,
)
from .dimacs import parse_dimacs, serialize_dimacs
from .dist import (
    Bernoulli,
    BloomWeights,
    ClauseRatioSpec,
    KMinusOneBias,
    LogNormal,
    NormalClipped,
    Pareto,
    PowerLaw,
    UniformIndex,
    UniformNonZeroBias,
    WeightedCategorical,
)
from .errors import (
    CapacityError,
    ConfigError,
    DimacsParseError,
    OracleFaultError,
    SatforgeError,
)
from .mix import GeneratorMixConfig, default_mix, load_mix, sample_problem
from .oracle import (
    OracleResult,
    brute_force_sat,
    check_implication,
    extract_assignment,
    resolution_step_check,
)
from .pipeline import (
    BatchSpec,
    DatasetRecord,
    benchmark_throughput,
    export_dataset,
    generate_records,
    read_packed,
)
from .render import Palette, render_image, write_ppm
from .rng import RngState
from .satgen import SatGenConfig, biased_sat_cover, generate_sat, random_cnf, sat_cover
from .unsatgen import (
    BloomTrace,
    UnsatGenConfig,
    generate_unsat,
    replay_trace,
    res_search,
    unsat_with_sat_tail,
)

__version__ = "0.1.0"
