"""Over-the-air computation of aggregate functions on fading channels.

A simulator for the power-encoding / energy-detection aggregation scheme,
a slotted (TDMA) baseline, finite-blocklength error-probability bounds
under correlated sub-gaussian fading and noise, and a reproducible Monte
Carlo sweep harness with CSV output.
"""

from .baseline import run_tdma, slot_counts
from .bounds import (
    BoundTerms,
    ar_family,
    bound_terms,
    communication_cost,
    cross_user_correlation,
    error_probability_bound,
    error_probability_bound_raw,
    iid_family,
    user_uncorrelated_approximation,
)
from .channel import (
    ChannelRealization,
    CorrelationFileError,
    CorrelationModel,
    SubgaussianKind,
    custom_model,
    expected_noise_energy,
    iid_model,
    load_model,
    sample,
    temporal_ar_model,
    validate_user_uncorrelated,
)
from .dfa import Codeword, DfaConfig, decode, decode_sum, encode, run_dfa, transmit_matrix
from .functions import (
    FmonFunction,
    SpreadSummary,
    evaluate,
    make_constant,
    make_euclidean_norm,
    make_mean,
    make_weighted_sum,
    output_range_width,
    resolve_function,
    spreads,
)
from .harness import (
    SweepConfig,
    SweepResult,
    SweepRow,
    emit_csv,
    generate_messages,
    messages_given_mu,
    run_sweep,
)
from .linalg import frobenius_norm, matmul_transpose, operator_norm

__version__ = "0.1.0"
