"""fracoam: fractional-OAM mode overlaps, witnesses, and a virtual bench.

The library characterizes sets of fractional orbital-angular-momentum light
modes through their pairwise overlaps: closed-form overlap evaluation,
basis-independent coherence and dimension witnesses over overlap triples and
n-tuples, a virtual interferometer that recovers an overlap from a single
intensity image, and the numerical searches that locate maximal witness
violations and achievable-region boundaries.
"""

from .bench import (
    BenchConfig,
    FieldGrid,
    GridSpec,
    Interferogram,
    SeparationError,
    extract_overlap,
    extract_overlap_detailed,
    interfere,
    read_interferogram,
    separation_diagnostic,
    synthesize,
    write_interferogram,
)
from .frac_modes import CoeffState, FracModeSpec, coeff_overlap, expand_in_lg, step_phase
from .lg_basis import BeamGeometry, LgIndex, laguerre_poly, lg_amplitude
from .overlaps import (
    OverlapValue,
    complex_overlap,
    overlap_sq,
    overlap_sq_beta0,
    overlap_sq_equal_ell,
    pairwise_overlap_sq,
)
from .search import (
    BoundaryCurve,
    SearchProblem,
    SearchResult,
    maximize,
    scenario_integer_families,
    solve_transcendental,
    trace_boundary,
    violation_functions,
)
from .witnesses import (
    GramMatrix,
    OverlapMatrix,
    OverlapTriple,
    WitnessReport,
    certify_dimension,
    classify_region,
    gram_matrix,
    h_n,
    in_classical,
    in_qubit,
    in_quantum,
    witness_distance_classical,
    witness_distance_qubit,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BeamGeometry",
    "BenchConfig",
    "BoundaryCurve",
    "CoeffState",
    "FieldGrid",
    "FracModeSpec",
    "GramMatrix",
    "GridSpec",
    "Interferogram",
    "LgIndex",
    "OverlapMatrix",
    "OverlapTriple",
    "OverlapValue",
    "SearchProblem",
    "SearchResult",
    "SeparationError",
    "WitnessReport",
    "certify_dimension",
    "classify_region",
    "coeff_overlap",
    "complex_overlap",
    "expand_in_lg",
    "extract_overlap",
    "extract_overlap_detailed",
    "gram_matrix",
    "h_n",
    "in_classical",
    "in_qubit",
    "in_quantum",
    "interfere",
    "laguerre_poly",
    "lg_amplitude",
    "maximize",
    "overlap_sq",
    "overlap_sq_beta0",
    "overlap_sq_equal_ell",
    "pairwise_overlap_sq",
    "read_interferogram",
    "scenario_integer_families",
    "separation_diagnostic",
    "solve_transcendental",
    "step_phase",
    "synthesize",
    "trace_boundary",
    "violation_functions",
    "witness_distance_classical",
    "witness_distance_qubit",
    "write_interferogram",
]
