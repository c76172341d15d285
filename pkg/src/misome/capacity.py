"""Secrecy rates for a multi-antenna sender, single-antenna receiver, and
multi-antenna eavesdropper over fixed complex Gaussian channels.

The exact secrecy capacity at transmit power ``P`` is

    C(P) = {log2 lambda_max(I + P h h^H, I + P He^H He)}^+

achieved by beamforming along the top generalized eigenvector.  This
module also evaluates the masked (artificial noise) beamforming rate,
the gap bracket between the two, high and low SNR asymptotes, and the
genie upper bound in certificate form: an explicit noise correlation
``phi`` whose induced bound provably equals the capacity, which
``verify_certificate`` re-evaluates numerically.

All rates are in bits.  Functions are pure; parallel parameter sweeps
need no locking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .geig import (
    RANK_RTOL,
    GeigResult,
    canonical_phase,
    lambda_max,
    lambda_max_rank_one,
    matrix_rank,
    null_projector,
    reduce_rank_deficient,
)

LN2 = math.log(2.0)

# lambda_max <= 1 + LAMBDA_CLAMP_TOL counts as the zero-capacity branch;
# both branches give capacity 0 at the boundary, so only the certificate
# path needs the tie rule.
LAMBDA_CLAMP_TOL = 1e-12

CASE_LAMBDA_GT_1 = "lambda_gt_1"
CASE_LAMBDA_LE_1_FULL_RANK = "lambda_le_1_full_rank"
CASE_LAMBDA_LE_1_REDUCED = "lambda_le_1_reduced"

REGIME_FINITE_LIMIT = "finite_limit"
REGIME_LOG_GROWTH = "log_growth"


@dataclass(frozen=True)
class ChannelRealization:
    """One realization of the channel gains.

    ``h_r`` is the length-``n_t`` gain vector to the intended receiver and
    ``H_e`` the ``n_e x n_t`` gain matrix to the eavesdropper, both in
    linear units.  ``H_e=None`` means no eavesdropper (``n_e = 0``).
    """

    h_r: np.ndarray
    H_e: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        h = np.asarray(self.h_r, dtype=complex).reshape(-1)
        if h.shape[0] < 1:
            raise ValueError("h_r must have at least one entry")
        H = self.H_e
        if H is None:
            H = np.zeros((0, h.shape[0]), dtype=complex)
        H = np.asarray(H, dtype=complex)
        if H.ndim != 2 or H.shape[1] != h.shape[0]:
            raise ValueError(
                f"H_e must be n_e x {h.shape[0]}, got shape {H.shape}"
            )
        if not (np.all(np.isfinite(h.view(float)))
                and np.all(np.isfinite(H.view(float)))):
            raise ValueError("channel gains must be finite")
        h.setflags(write=False)
        H.setflags(write=False)
        object.__setattr__(self, "h_r", h)
        object.__setattr__(self, "H_e", H)

    @property
    def n_t(self) -> int:
        return self.h_r.shape[0]

    @property
    def n_e(self) -> int:
        return self.H_e.shape[0]

    def gram(self) -> np.ndarray:
        """He^H He as an exactly Hermitian n_t x n_t matrix."""
        G = self.H_e.conj().T @ self.H_e
        return 0.5 * (G + G.conj().T)


@dataclass(frozen=True)
class CapacityReport:
    """Secrecy capacity at one power level.

    ``clamped`` is True exactly when the eigenvalue does not exceed 1, in
    which case no positive secrecy rate exists and ``capacity_bits`` is 0.
    """

    capacity_bits: float
    lambda_max: float
    psi_max: np.ndarray
    clamped: bool
    P: float


@dataclass(frozen=True)
class NoiseCorrelation:
    """Cross-correlation vector certifying the genie upper bound.

    ``phi`` has length ``n_e`` and norm at most 1, making the stacked
    noise covariance [[1, phi^H], [phi, I]] positive semidefinite.  The
    case tag records which closed-form choice produced it.
    """

    phi: np.ndarray
    case_tag: str


@dataclass(frozen=True)
class AsymptoteReport:
    """High and low SNR behavior of the secrecy capacity.

    In the ``finite_limit`` regime the capacity saturates at
    ``limit_bits``; in the ``log_growth`` regime ``C(P) - log2 P``
    converges to ``offset_bits``.  ``low_snr_slope`` is the slope of
    ``C(P)`` at ``P = 0`` in bits per unit linear power.
    """

    regime: str
    limit_bits: Optional[float]
    offset_bits: Optional[float]
    low_snr_slope: float


def _check_power(P: float) -> float:
    P = float(P)
    if not (P > 0.0 and math.isfinite(P)):
        raise ValueError(f"transmit power must be positive and finite, got {P}")
    return P


def _capacity_geig(P: float, ch: ChannelRealization) -> GeigResult:
    """Top generalized eigenpair of (I + P h h^H, I + P He^H He)."""
    n = ch.n_t
    h = ch.h_r
    if ch.n_e == 0:
        # B = I: the pair is exactly (1 + P ||h||^2, h / ||h||).
        nsq = float(np.vdot(h, h).real)
        if nsq == 0.0:
            psi = np.zeros(n, dtype=complex)
            psi[0] = 1.0
            return GeigResult(1.0, psi)
        return GeigResult(1.0 + P * nsq, canonical_phase(h / math.sqrt(nsq)))
    A = np.eye(n) + P * np.outer(h, h.conj())
    B = np.eye(n) + P * ch.gram()
    return lambda_max(A, B)


def secrecy_capacity(P: float, ch: ChannelRealization) -> CapacityReport:
    """Exact secrecy capacity in bits at linear transmit power P.

    Returns the clamped log of the largest generalized eigenvalue of
    ``(I + P h h^H, I + P He^H He)`` together with the achieving
    beamforming direction.  ``clamped`` marks the zero-rate branch.
    """
    P = _check_power(P)
    res = _capacity_geig(P, ch)
    clamped = res.lambda_max <= 1.0 + LAMBDA_CLAMP_TOL
    bits = 0.0 if clamped else math.log2(res.lambda_max)
    return CapacityReport(
        capacity_bits=bits,
        lambda_max=res.lambda_max,
        psi_max=res.psi_max,
        clamped=clamped,
        P=P,
    )


def optimal_beamformer(P: float, ch: ChannelRealization) -> np.ndarray:
    """Unit-norm canonical-phase beamforming direction achieving capacity.

    The log of the Rayleigh quotient of the capacity pair at the returned
    vector equals the capacity whenever the capacity is positive.
    """
    return secrecy_capacity(P, ch).psi_max


def masked_beamforming_rate(P: float, ch: ChannelRealization) -> float:
    """Secrecy rate of isotropic masked beamforming at total power P.

    The sender splits power evenly across antennas, steering the message
    along ``h_r`` and synthesized white noise into the complement.  The
    achievable rate is

        {log2 lambda_max((P/n_t) h h^H, I + (P/n_t) He^H He)
         + log2(1 + n_t / (P ||h||^2))}^+

    computed via the rank-one shortcut.  Requires a nonzero ``h_r``.
    """
    P = _check_power(P)
    nsq = float(np.vdot(ch.h_r, ch.h_r).real)
    if nsq == 0.0:
        raise ValueError("masked beamforming rate is undefined for h_r = 0")
    nt = ch.n_t
    t = P / nt
    B = np.eye(nt) + t * ch.gram()
    lam = lambda_max_rank_one(math.sqrt(t) * ch.h_r, B).lambda_max
    rate = math.log2(lam) + math.log2(1.0 + nt / (P * nsq))
    return max(0.0, rate)


def mb_gap_bound(P: float, ch: ChannelRealization) -> tuple[float, float]:
    """Bracket for C(P/n_t) - R_MB(P): returns (0, upper).

    The upper end is ``log2(1 + n_t / (P |h^H psi|^2))`` with ``psi`` the
    optimal beamformer of the power-(P/n_t) problem; it decays to zero as
    P grows, which is how the masked scheme becomes asymptotically
    optimal up to its fixed n_t power penalty.
    """
    P = _check_power(P)
    psi = secrecy_capacity(P / ch.n_t, ch).psi_max
    ip = abs(np.vdot(ch.h_r, psi)) ** 2
    if ip == 0.0:
        return 0.0, math.inf
    return 0.0, math.log2(1.0 + ch.n_t / (P * ip))


def low_snr_slope(ch: ChannelRealization) -> float:
    """Slope of the capacity at zero power, in bits per unit linear power.

    Equals ``{lambda_max(h h^H - He^H He)}^+ / ln 2`` with a regular
    (not generalized) eigenvalue of the Hermitian difference.
    """
    D = np.outer(ch.h_r, ch.h_r.conj()) - ch.gram()
    D = 0.5 * (D + D.conj().T)
    lam = float(np.linalg.eigvalsh(D)[-1])
    return max(0.0, lam) / LN2


def high_snr_asymptote(ch: ChannelRealization) -> AsymptoteReport:
    """Classify the large-power behavior of the secrecy capacity.

    If ``h_r`` has no component in the null space of ``H_e`` the capacity
    saturates at ``{log2 lambda_max(h h^H, He^H He)}^+``, evaluated on
    the row space of ``H_e`` when the Gram matrix is singular.
    Otherwise the capacity grows like ``log2 P + log2 ||He_perp h||^2``.
    The regime split is a rank decision made with the shared singular
    value tolerance.
    """
    h = ch.h_r
    nsq = float(np.vdot(h, h).real)
    if nsq == 0.0:
        raise ValueError("asymptote is undefined for h_r = 0")
    proj = null_projector(ch.H_e)
    v = proj @ h
    vsq = float(np.vdot(v, v).real)
    slope = low_snr_slope(ch)
    if math.sqrt(vsq) > RANK_RTOL * math.sqrt(nsq):
        return AsymptoteReport(
            regime=REGIME_LOG_GROWTH,
            limit_bits=None,
            offset_bits=math.log2(vsq),
            low_snr_slope=slope,
        )
    # h lies in the row space of H_e, so the limiting eigenvalue is the
    # quadratic form of the (reduced, if necessary) Gram inverse.
    if matrix_rank(ch.H_e) == ch.n_t:
        g, G = h, ch.H_e
    else:
        g, G = reduce_rank_deficient(h, ch.H_e)
    GG = G.conj().T @ G
    GG = 0.5 * (GG + GG.conj().T)
    lam = float(np.vdot(g, cho_solve(cho_factor(GG, lower=True), g)).real)
    return AsymptoteReport(
        regime=REGIME_FINITE_LIMIT,
        limit_bits=max(0.0, math.log2(lam)) if lam > 0.0 else 0.0,
        offset_bits=None,
        low_snr_slope=slope,
    )


def converse_certificate(P: float, ch: ChannelRealization) -> NoiseCorrelation:
    """Worst-case noise cross-correlation certifying the genie bound.

    Case ``lambda_max > 1``: ``phi = He psi / (h^H psi)`` with the optimal
    beamformer ``psi``; its norm is strictly below 1.  Case
    ``lambda_max <= 1`` with full-column-rank ``He``:
    ``phi = He (He^H He)^-1 h``.  When ``He`` is rank deficient the
    channel is first reduced onto its row space, which preserves the
    (zero) capacity.  The minimizing combiner of the induced bound then
    makes the bound collapse onto the capacity; ``verify_certificate``
    checks this numerically.
    """
    P = _check_power(P)
    rep = secrecy_capacity(P, ch)
    if not rep.clamped:
        denom = complex(np.vdot(ch.h_r, rep.psi_max))
        if abs(denom) == 0.0:
            # Impossible for lambda_max > 1: the numerator of the Rayleigh
            # quotient must strictly exceed the denominator.
            raise ValueError("degenerate beamformer with h^H psi = 0")
        phi = (ch.H_e @ rep.psi_max) / denom
        return NoiseCorrelation(phi=phi, case_tag=CASE_LAMBDA_GT_1)
    if ch.n_e > 0 and matrix_rank(ch.H_e) == ch.n_t:
        GG = ch.gram()
        phi = ch.H_e @ cho_solve(cho_factor(GG, lower=True), ch.h_r)
        return NoiseCorrelation(phi=phi, case_tag=CASE_LAMBDA_LE_1_FULL_RANK)
    g, G = reduce_rank_deficient(ch.h_r, ch.H_e)
    if g.shape[0] == 0:
        phi = np.zeros(ch.n_e, dtype=complex)
    else:
        GG = G.conj().T @ G
        GG = 0.5 * (GG + GG.conj().T)
        phi = G @ cho_solve(cho_factor(GG, lower=True), g)
    return NoiseCorrelation(phi=phi, case_tag=CASE_LAMBDA_LE_1_REDUCED)


def verify_certificate(
    P: float, ch: ChannelRealization, nc: NoiseCorrelation
) -> float:
    """Evaluate the certified upper bound and return its gap to capacity.

    For ``lambda_gt_1`` certificates the minimizing combiner

        theta = (I + P He He^H)^-1 (P He h + phi)

    must coincide with ``lambda_max * phi`` (checked to 1e-8 relative);
    the bound is the log of the combiner objective minus the conditional
    noise entropy term, and the returned value is its absolute gap to
    the capacity.  For the clamped cases the ``theta = phi`` substitution
    is evaluated (on the reduced channel where applicable) and returned
    directly; it must be zero.

    Raises
    ------
    ValueError
        If the certificate does not match the channel and power: wrong
        ``phi`` dimension, a case tag inconsistent with the eigenvalue
        branch, or a violated combiner identity.
    """
    P = _check_power(P)
    phi = np.asarray(nc.phi, dtype=complex).reshape(-1)
    if phi.shape[0] != ch.n_e:
        raise ValueError(
            f"certificate/channel mismatch: phi has length {phi.shape[0]}, "
            f"channel has n_e = {ch.n_e}"
        )
    rep = secrecy_capacity(P, ch)
    h, He = ch.h_r, ch.H_e

    if nc.case_tag == CASE_LAMBDA_GT_1:
        if rep.clamped:
            raise ValueError(
                "certificate/channel mismatch: lambda_gt_1 certificate for "
                "a clamped channel"
            )
        lam = rep.lambda_max
        if ch.n_e == 0:
            theta = np.zeros(0, dtype=complex)
        else:
            K = np.eye(ch.n_e) + P * (He @ He.conj().T)
            K = 0.5 * (K + K.conj().T)
            theta = cho_solve(cho_factor(K, lower=True), P * (He @ h) + phi)
        resid = np.linalg.norm(theta - lam * phi)
        if resid > 1e-8 * max(1.0, lam * np.linalg.norm(phi)):
            raise ValueError(
                "certificate/channel mismatch: combiner identity "
                f"theta = lambda*phi violated (residual {resid:.3e})"
            )
        diff = h - He.conj().T @ theta
        objective = (
            P * float(np.vdot(diff, diff).real)
            + 1.0
            + float(np.vdot(theta, theta).real)
            - 2.0 * float(np.vdot(theta, phi).real)
        )
        phi_sq = float(np.vdot(phi, phi).real)
        upper_bits = math.log2(objective) - math.log2(1.0 - phi_sq)
        return abs(upper_bits - rep.capacity_bits)

    if nc.case_tag not in (CASE_LAMBDA_LE_1_FULL_RANK, CASE_LAMBDA_LE_1_REDUCED):
        raise ValueError(f"unknown certificate case tag {nc.case_tag!r}")
    if not rep.clamped:
        raise ValueError(
            "certificate/channel mismatch: clamped-case certificate for a "
            "channel with lambda_max > 1"
        )
    full_rank = ch.n_e > 0 and matrix_rank(He) == ch.n_t
    if nc.case_tag == CASE_LAMBDA_LE_1_FULL_RANK:
        if not full_rank:
            raise ValueError(
                "certificate/channel mismatch: full-rank certificate for a "
                "rank-deficient eavesdropper matrix"
            )
        g, G = h, He
    else:
        if full_rank:
            raise ValueError(
                "certificate/channel mismatch: reduced certificate for a "
                "full-column-rank eavesdropper matrix"
            )
        g, G = reduce_rank_deficient(h, He)
    # theta = phi substitution of the clamped branch.
    diff = g - G.conj().T @ phi
    resid = P * float(np.vdot(diff, diff).real)
    denom = 1.0 - float(np.vdot(phi, phi).real)
    if resid == 0.0:
        return 0.0
    if denom <= 0.0:
        return math.inf
    return math.log2(1.0 + resid / denom)
