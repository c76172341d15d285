"""Secrecy capacity, masked beamforming, gap bracket, and asymptotes."""

import math

import numpy as np
import pytest

from misome.capacity import (
    REGIME_FINITE_LIMIT,
    REGIME_LOG_GROWTH,
    ChannelRealization,
    high_snr_asymptote,
    low_snr_slope,
    masked_beamforming_rate,
    mb_gap_bound,
    optimal_beamformer,
    secrecy_capacity,
)
from misome.cli import example_channel

from conftest import capacity_pair, crandn, random_channel, rayleigh_quotient_max_oracle

# Frozen from the random-search + ascent oracle on the example channel
# (both eavesdropper rows) at P = 10.
EXAMPLE_P10_ORACLE_LAMBDA = 4.53402886061381


def test_no_eavesdropper_reduces_to_miso_log():
    rng = np.random.default_rng(3)
    h = crandn(rng, 3)
    ch = ChannelRealization(h_r=h)
    for P in (0.5, 10.0, 1e4):
        rep = secrecy_capacity(P, ch)
        assert rep.capacity_bits == pytest.approx(
            math.log2(1 + P * np.vdot(h, h).real), rel=1e-12
        )
        assert not rep.clamped


def test_identical_channels_clamp_to_zero():
    rng = np.random.default_rng(4)
    h = crandn(rng, 3)
    ch = ChannelRealization(h_r=h, H_e=h.conj()[None, :])
    rep = secrecy_capacity(7.0, ch)
    assert rep.lambda_max == pytest.approx(1.0, abs=1e-10)
    assert rep.clamped
    assert rep.capacity_bits == 0.0


def test_example_channel_matches_oracle():
    ch = example_channel(2)
    rep = secrecy_capacity(10.0, ch)
    assert rep.lambda_max == pytest.approx(EXAMPLE_P10_ORACLE_LAMBDA, rel=1e-6)
    # cross-check the frozen value against a live oracle run
    A, B = capacity_pair(10.0, ch)
    live = rayleigh_quotient_max_oracle(A, B, np.random.default_rng(2), 20_000)
    assert rep.lambda_max == pytest.approx(live, rel=1e-6)


def test_nonpositive_power_rejected():
    ch = ChannelRealization(h_r=[1.0 + 0j])
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError, match="positive"):
            secrecy_capacity(bad, ch)
        with pytest.raises(ValueError, match="positive"):
            masked_beamforming_rate(bad, ch)
        with pytest.raises(ValueError, match="positive"):
            mb_gap_bound(bad, ch)


class TestOptimalBeamformer:
    def test_no_eavesdropper_aligns_with_receiver(self):
        rng = np.random.default_rng(6)
        h = crandn(rng, 4)
        psi = optimal_beamformer(2.0, ChannelRealization(h_r=h))
        assert abs(np.vdot(psi, h / np.linalg.norm(h))) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_equal_norm_columns_align_with_receiver(self):
        # when the eavesdropper's columns are orthogonal with equal norms,
        # its Gram matrix is a scaled identity and ignoring it is optimal
        rng = np.random.default_rng(8)
        h = crandn(rng, 2)
        He = np.array([[0.7, 0.0], [0.0, 0.7], [0.0, 0.0]], dtype=complex)
        psi = optimal_beamformer(3.0, ChannelRealization(h_r=h, H_e=He))
        assert abs(np.vdot(psi, h / np.linalg.norm(h))) == pytest.approx(1.0, abs=1e-10)

    def test_rayleigh_quotient_at_beamformer_equals_lambda(self):
        ch = example_channel(2)
        rep = secrecy_capacity(10.0, ch)
        A, B = capacity_pair(10.0, ch)
        quotient = (
            np.vdot(rep.psi_max, A @ rep.psi_max).real
            / np.vdot(rep.psi_max, B @ rep.psi_max).real
        )
        assert math.log2(quotient) == pytest.approx(rep.capacity_bits, abs=1e-9)


class TestMaskedBeamforming:
    def test_single_antenna_collapses_to_capacity(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            ch = random_channel(rng, 1, 2)
            for P in (0.1, 1.0, 25.0):
                assert masked_beamforming_rate(P, ch) == pytest.approx(
                    secrecy_capacity(P, ch).capacity_bits, abs=1e-12
                )

    def test_no_eavesdropper_is_capacity_at_reduced_power(self):
        rng = np.random.default_rng(10)
        h = crandn(rng, 4)
        ch = ChannelRealization(h_r=h)
        P = 12.0
        expected = math.log2(1 + P * np.vdot(h, h).real / 4)
        assert masked_beamforming_rate(P, ch) == pytest.approx(expected, rel=1e-12)

    def test_zero_receiver_rejected(self):
        ch = ChannelRealization(h_r=[0.0 + 0j, 0.0 + 0j])
        with pytest.raises(ValueError, match="h_r = 0"):
            masked_beamforming_rate(1.0, ch)

    def test_example_high_snr_loss_single_eavesdropper_row(self):
        # with one eavesdropper antenna the high-power loss approaches
        # log2(n_t) = 1 bit, i.e. 3 dB
        ch = example_channel(1)
        P = 1e4
        gap = secrecy_capacity(P, ch).capacity_bits - masked_beamforming_rate(P, ch)
        assert gap == pytest.approx(1.0, abs=0.05)


class TestGapBound:
    def test_no_eavesdropper_gap_is_zero(self):
        rng = np.random.default_rng(12)
        ch = ChannelRealization(h_r=crandn(rng, 3))
        P = 4.0
        lower, upper = mb_gap_bound(P, ch)
        gap = secrecy_capacity(P / 3, ch).capacity_bits - masked_beamforming_rate(P, ch)
        assert gap == pytest.approx(0.0, abs=1e-12)
        assert lower == 0.0 and upper > 0.0

    def test_example_gap_lies_in_bracket(self):
        ch = example_channel(2)
        P = 1e4
        lower, upper = mb_gap_bound(P, ch)
        gap = (
            secrecy_capacity(P / ch.n_t, ch).capacity_bits
            - masked_beamforming_rate(P, ch)
        )
        assert lower - 1e-12 <= gap <= upper + 1e-12

    def test_upper_bound_decays_with_power(self):
        ch = example_channel(2)
        uppers = [mb_gap_bound(10.0**k, ch)[1] for k in range(2, 7)]
        assert all(b > a for a, b in zip(uppers[1:], uppers[:-1]))
        assert uppers[-1] < 1e-4


class TestHighSnrAsymptote:
    def test_no_eavesdropper_grows_with_receiver_norm_offset(self):
        rng = np.random.default_rng(14)
        h = crandn(rng, 3)
        rep = high_snr_asymptote(ChannelRealization(h_r=h))
        assert rep.regime == REGIME_LOG_GROWTH
        assert rep.offset_bits == pytest.approx(
            math.log2(np.vdot(h, h).real), rel=1e-12
        )

    def test_orthogonal_eavesdropper_zero_offset(self):
        ch = ChannelRealization(h_r=[1.0, 0.0], H_e=[[0.0, 1.0]])
        rep = high_snr_asymptote(ch)
        assert rep.regime == REGIME_LOG_GROWTH
        assert rep.offset_bits == pytest.approx(0.0, abs=1e-12)

    def test_example_channel_saturates(self):
        ch = example_channel(2)
        rep = high_snr_asymptote(ch)
        assert rep.regime == REGIME_FINITE_LIMIT
        cap = secrecy_capacity(1e6, ch).capacity_bits
        assert abs(cap - rep.limit_bits) < 0.02

    def test_zero_receiver_rejected(self):
        with pytest.raises(ValueError, match="h_r = 0"):
            high_snr_asymptote(ChannelRealization(h_r=[0.0 + 0j]))


class TestLowSnrSlope:
    def test_no_eavesdropper(self):
        rng = np.random.default_rng(15)
        h = crandn(rng, 3)
        assert low_snr_slope(ChannelRealization(h_r=h)) == pytest.approx(
            np.vdot(h, h).real / math.log(2), rel=1e-12
        )

    def test_identical_channels_cancel(self):
        rng = np.random.default_rng(16)
        h = crandn(rng, 3)
        ch = ChannelRealization(h_r=h, H_e=h.conj()[None, :])
        assert low_snr_slope(ch) == pytest.approx(0.0, abs=1e-12)

    def test_finite_difference_check(self):
        rng = np.random.default_rng(18)
        ch = random_channel(rng, 3, 1)
        slope = low_snr_slope(ch)
        assert slope > 0
        P = 1e-5
        ratio = secrecy_capacity(P, ch).capacity_bits / P
        assert abs(ratio - slope) / slope < 1e-3


class TestStructuralProperties:
    GRID = [10.0 ** (k / 10.0) for k in range(-30, 61)]  # 1e-3 .. 1e6

    def test_monotone_and_midpoint_concave_in_power(self):
        rng = np.random.default_rng(19)
        for _ in range(4):
            n_t = int(rng.integers(2, 5))
            n_e = int(rng.integers(0, 4))
            ch = random_channel(rng, n_t, n_e)
            caps = [secrecy_capacity(P, ch).capacity_bits for P in self.GRID]
            for a, b in zip(caps, caps[1:]):
                assert b >= a - 1e-9
            for P1, P2, c1, c2 in zip(self.GRID, self.GRID[2:], caps, caps[2:]):
                mid = secrecy_capacity((P1 + P2) / 2, ch).capacity_bits
                assert mid >= (c1 + c2) / 2 - 1e-9

    def test_clamp_exactly_when_lambda_at_most_one(self):
        rng = np.random.default_rng(20)
        for _ in range(40):
            n_t = int(rng.integers(2, 4))
            n_e = int(rng.integers(1, 5))
            ch = random_channel(rng, n_t, n_e)
            rep = secrecy_capacity(float(rng.uniform(0.1, 10)), ch)
            if rep.lambda_max > 1 + 1e-12:
                assert not rep.clamped and rep.capacity_bits > 0
            else:
                assert rep.clamped and rep.capacity_bits == 0.0

    def test_any_unit_direction_never_beats_capacity(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            ch = random_channel(rng, 3, int(rng.integers(0, 5)))
            P = float(rng.uniform(0.1, 50))
            cap = secrecy_capacity(P, ch).capacity_bits
            A, B = capacity_pair(P, ch)
            Z = crandn(rng, 2000, 3)
            num = np.einsum("ij,jk,ik->i", Z.conj(), A, Z).real
            den = np.einsum("ij,jk,ik->i", Z.conj(), B, Z).real
            assert np.log2(num / den).max() <= cap + 1e-9
