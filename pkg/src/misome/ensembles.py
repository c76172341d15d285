"""Rayleigh channel ensembles, large-system scaling laws, and the exact
finite-dimension law of the top generalized eigenvalue.

Channel entries are i.i.d. circularly symmetric complex Gaussian with
unit variance.  Trials use independent, reproducible streams derived
from ``(seed, stream index)``, so Monte Carlo loops parallelize without
coordination and reruns are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import betainc

from .capacity import ChannelRealization, secrecy_capacity


@dataclass(frozen=True)
class EnsembleSpec:
    """A Rayleigh Monte Carlo experiment.

    ``beta`` is the eavesdropper antennas per sender antenna; the received
    SNR ``gamma`` is held fixed by transmitting at power ``gamma / n_t``.
    """

    n_t: int
    beta: float
    gamma: float
    trials: int
    seed: int

    def __post_init__(self):
        if self.n_t < 1:
            raise ValueError("n_t must be positive")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.trials < 2:
            raise ValueError("need at least 2 trials for a standard error")
        if self.beta > 0 and self.n_e < 1:
            raise ValueError(
                f"beta={self.beta} with n_t={self.n_t} rounds to zero "
                "eavesdropper antennas"
            )

    @property
    def n_e(self) -> int:
        # round-half-up keeps n_e = beta * n_t exact whenever it is integral
        return int(math.floor(self.beta * self.n_t + 0.5))


@dataclass(frozen=True)
class MonteCarloSummary:
    """Sample mean with its standard error over independent trials."""

    mean: float
    std_error: float
    trials: int
    quantity_tag: str


class ScaledCapacityRun(NamedTuple):
    """Summaries of one received-SNR-normalized capacity experiment."""

    capacity: MonteCarloSummary
    rank_one_lower: MonteCarloSummary


def summarize(values, quantity_tag: str) -> MonteCarloSummary:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError("need at least 2 values for a standard error")
    return MonteCarloSummary(
        mean=float(values.mean()),
        std_error=float(values.std(ddof=1) / math.sqrt(values.size)),
        trials=int(values.size),
        quantity_tag=quantity_tag,
    )


def trial_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for one (seed, stream) pair."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    )


def _crandn(rng: np.random.Generator, *shape) -> np.ndarray:
    """i.i.d. CN(0,1): real and imaginary parts independent N(0, 1/2)."""
    return (
        rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    ) / math.sqrt(2.0)


def sample_channel(
    n_t: int, n_e: int, seed: int, stream: int = 0
) -> ChannelRealization:
    """Draw one Rayleigh channel realization on a dedicated stream.

    Entries of both gains are i.i.d. CN(0,1).  The same ``(seed, stream)``
    always reproduces the same realization; distinct streams are
    statistically independent.
    """
    rng = trial_rng(seed, stream)
    h = _crandn(rng, n_t)
    He = _crandn(rng, n_e, n_t)
    return ChannelRealization(h_r=h, H_e=He)


def xi(gamma: float, beta: float) -> float:
    """Large-system value of the received-SNR quadratic form.

    As the antenna counts grow with ratio ``beta`` fixed, the statistic
    ``gamma h^H (I + gamma He^H He)^-1 h`` (normalized gains) converges
    almost surely to

        xi = gamma - (1/4) [sqrt(1 + gamma (1 + sqrt(beta))^2)
                            - sqrt(1 + gamma (1 - sqrt(beta))^2)]^2

    the Marchenko-Pastur evaluation of gamma times the eta-transform of
    the eavesdropper Gram matrix.  ``xi(gamma, 0) = gamma``.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    sb = math.sqrt(beta)
    a = math.sqrt(1.0 + gamma * (1.0 + sb) ** 2)
    b = math.sqrt(1.0 + gamma * (1.0 - sb) ** 2)
    return gamma - 0.25 * (a - b) ** 2


def asymptotic_capacity_infinite_snr(beta: float) -> float:
    """Infinite-SNR limit of the scaled secrecy capacity, in bits.

    Zero for ``beta >= 2`` (the eavesdropper blocks secure communication),
    ``-log2(beta - 1)`` for ``1 < beta < 2``, and infinite for
    ``beta <= 1`` (the sender can null the eavesdropper).
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if beta >= 2.0:
        return 0.0
    if beta > 1.0:
        return -math.log2(beta - 1.0)
    return math.inf


def scaled_capacity_lower_bound(gamma: float, beta: float) -> float:
    """Almost-sure lower bound {log2 xi(gamma, beta)}^+ in bits.

    Also lower-bounds the large-system masked beamforming rate, and is
    tight against the infinite-SNR capacity as gamma grows.
    """
    return max(0.0, math.log2(xi(gamma, beta)))


def lambda_max_f_params(n_t: int, n_e: int) -> tuple[int, int, float]:
    """Degrees of freedom and scale of the top-eigenvalue F law.

    For ``n_e > n_t`` the statistic ``h^H (He^H He)^-1 h`` is the ratio of
    independent chi-square variables with ``2 n_t`` and ``2(n_e - n_t + 1)``
    degrees of freedom, i.e. a scaled F variate with those parameters and
    scale ``d1/d2``.
    """
    if n_e <= n_t:
        raise ValueError("the F law requires n_e > n_t")
    d1 = 2 * n_t
    d2 = 2 * (n_e - n_t + 1)
    return d1, d2, d1 / d2


def lambda_max_reference_cdf(x, n_t: int, n_e: int) -> np.ndarray:
    """CDF of the top generalized eigenvalue under Rayleigh fading.

    Evaluated through the regularized incomplete beta function, so the
    reference is fully deterministic.
    """
    d1, d2, scale = lambda_max_f_params(n_t, n_e)
    x = np.asarray(x, dtype=float) / scale
    x = np.maximum(x, 0.0)
    return betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2))


def sample_lambda_max_rayleigh(
    n_t: int, n_e: int, trials: int, seed: int
) -> np.ndarray:
    """Draw the top generalized eigenvalue of (h h^H, He^H He).

    Uses the rank-one form ``h^H (He^H He)^-1 h`` directly; requires
    ``n_e > n_t`` so the Gram matrix is invertible and the F law applies.
    """
    if n_e <= n_t:
        raise ValueError(
            f"n_e must exceed n_t for the eigenvalue law, got {n_e} <= {n_t}"
        )
    vals = np.empty(trials)
    for t in range(trials):
        ch = sample_channel(n_t, n_e, seed, stream=t)
        vals[t] = float(
            np.vdot(ch.h_r, np.linalg.solve(ch.gram(), ch.h_r)).real
        )
    return vals


def rank_one_lower_statistic(P: float, ch: ChannelRealization) -> float:
    """Per-realization lower bound log2(P h^H (I + P He^H He)^-1 h)."""
    B = np.eye(ch.n_t) + P * ch.gram()
    q = float(np.vdot(ch.h_r, np.linalg.solve(B, ch.h_r)).real)
    return math.log2(P * q)


def monte_carlo_scaled_capacity(spec: EnsembleSpec) -> ScaledCapacityRun:
    """Monte Carlo estimate of the received-SNR-normalized capacity.

    Transmits at ``P = gamma / n_t`` per trial and summarizes both the
    exact capacity and the rank-one lower-bound statistic whose mean
    converges to ``log2 xi(gamma, beta)``.  Trials are indexed streams;
    the reduction is ordered by trial, so results do not depend on any
    execution schedule.
    """
    P = spec.gamma / spec.n_t
    caps = np.empty(spec.trials)
    lows = np.empty(spec.trials)
    for t in range(spec.trials):
        ch = sample_channel(spec.n_t, spec.n_e, spec.seed, stream=t)
        caps[t] = secrecy_capacity(P, ch).capacity_bits
        lows[t] = rank_one_lower_statistic(P, ch)
    return ScaledCapacityRun(
        capacity=summarize(caps, "capacity_bits"),
        rank_one_lower=summarize(lows, "rank_one_lower_bits"),
    )
