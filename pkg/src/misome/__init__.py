"""Secrecy rate computations for multi-antenna Gaussian wiretap channels
with a single-antenna intended receiver: exact capacity via generalized
eigenvalues, masked beamforming rates, converse certificates, large-system
scaling laws, and ergodic fading bounds with Monte Carlo validation.
"""

from .capacity import (
    AsymptoteReport,
    CapacityReport,
    ChannelRealization,
    NoiseCorrelation,
    converse_certificate,
    high_snr_asymptote,
    low_snr_slope,
    masked_beamforming_rate,
    mb_gap_bound,
    optimal_beamformer,
    secrecy_capacity,
    verify_certificate,
)
from .channel_file import (
    ChannelFileError,
    format_channel,
    format_complex,
    parse_channel_file,
    parse_complex,
)
from .ensembles import (
    EnsembleSpec,
    MonteCarloSummary,
    asymptotic_capacity_infinite_snr,
    monte_carlo_scaled_capacity,
    sample_channel,
    sample_lambda_max_rayleigh,
    scaled_capacity_lower_bound,
    xi,
)
from .fading import (
    FadingBoundReport,
    PowerAllocation,
    expected_bounds,
    optimize_allocation,
    rate_ff_lower,
    rate_ff_upper,
)
from .geig import (
    GeigResult,
    lambda_max,
    lambda_max_rank_one,
    null_projector,
    reduce_rank_deficient,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoteReport",
    "CapacityReport",
    "ChannelRealization",
    "ChannelFileError",
    "EnsembleSpec",
    "FadingBoundReport",
    "GeigResult",
    "MonteCarloSummary",
    "NoiseCorrelation",
    "PowerAllocation",
    "asymptotic_capacity_infinite_snr",
    "converse_certificate",
    "expected_bounds",
    "format_channel",
    "format_complex",
    "high_snr_asymptote",
    "lambda_max",
    "lambda_max_rank_one",
    "low_snr_slope",
    "masked_beamforming_rate",
    "mb_gap_bound",
    "monte_carlo_scaled_capacity",
    "null_projector",
    "optimal_beamformer",
    "optimize_allocation",
    "parse_channel_file",
    "parse_complex",
    "rate_ff_lower",
    "rate_ff_upper",
    "reduce_rank_deficient",
    "sample_channel",
    "sample_lambda_max_rayleigh",
    "scaled_capacity_lower_bound",
    "secrecy_capacity",
    "verify_certificate",
    "xi",
]
