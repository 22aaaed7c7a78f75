"""Exact sunflower, VC-dimension, spread and threshold tools for small set systems."""

from .errors import HypothesisViolation, InputError, LimitExceeded, PreconditionError
from .setsystem import SetSystem, build, core, minimal_sets, trace, upset_contains
from .vc import ShatterReport, sauer_shelah_bound, shatters, vc_dimension
from .bounds import HalfInteger, er_bound, ell_zero, lambda_d, log_star_smoothed, vc1_threshold
from .sunflower import (
    Inconclusive,
    StructWitness,
    Sunflower,
    disjoint_via_partition,
    extract_er,
    extract_vc1,
    find_sunflower_exact,
    is_sunflower,
    witness_or_sunflower,
)
from .spread import (
    SpreadDecomposition,
    count_bound,
    count_bound_vc1,
    decompose,
    expectation_large_weight_exact,
    reduced_family,
)
from .threshold import (
    CoverCertificate,
    DichotomyReport,
    kk_dichotomy,
    min_cover_weight,
    prob_upset_exact,
    prob_upset_mc,
)
from .gen import GeneratorConfig, pad_to_uniform, random_family, tree_family

__version__ = "0.1.0"
