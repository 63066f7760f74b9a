"""Ternary fat Cantor sets, their Riesz-product Fourier transforms, and Riesz-pair bounds."""

__version__ = "0.1.0"

from .cantor_set import (
    CantorParams,
    DepthExceededError,
    IntervalSet,
    gap_offset,
    interval_length,
    level_set,
    measure,
    symmetric_difference,
    translate,
)
from .riesz_coeffs import (
    FourierTable,
    choose_depth,
    coefficient,
    level_coefficient_direct,
    level_coefficient_exact,
    parseval_partial,
    table,
)
from .spectral_gap import RestrictedGram, alpha_sequence, build_gram, min_eigenpair
from .symbolic_sequences import (
    Arithmetic,
    Explicit,
    IndexSet,
    Shifted,
    ThueMorse,
    is_cover,
    thue_morse_bit,
    truncate,
    upper_beurling_estimate,
)

__all__ = [
    "Arithmetic", "CantorParams", "DepthExceededError", "Explicit", "FourierTable",
    "IndexSet", "IntervalSet", "RestrictedGram", "Shifted", "ThueMorse",
    "alpha_sequence", "build_gram", "choose_depth", "coefficient", "gap_offset",
    "interval_length", "is_cover", "level_coefficient_direct", "level_coefficient_exact",
    "level_set", "measure", "min_eigenpair", "parseval_partial", "symmetric_difference",
    "table", "thue_morse_bit", "translate", "truncate", "upper_beurling_estimate",
]
