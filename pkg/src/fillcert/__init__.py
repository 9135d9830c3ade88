"""Certificates of non-fillability for links of cyclic quotient singularities."""

from .charclass import (
    TruncatedPoly,
    binom_mod_p,
    digit_sets,
    digit_sum_criterion,
    nonzero_chern_indices,
    truncated_total_chern,
)
from .errors import (
    CensusUncertified,
    FillcertError,
    InvalidInput,
    InvariantViolation,
    Refusal,
    ReplayMismatch,
)
from .verdict import decide, replay, scan

__version__ = "0.1.0"
