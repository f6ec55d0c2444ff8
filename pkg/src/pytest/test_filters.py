"""
Tests for box filters, unsharp masking, high-boost and the HPFA / HFA / HFM methods
"""

import numpy as np
import pytest

from src.python.errors import InvalidArgumentError, InvalidDataError
from src.python.models.raster import Band, MultiBandImage
from src.python.utils.arithmetic import FusionInput
from src.python.utils.filters import (
    HFM_EPSILON,
    Kernel,
    convolve2d,
    fuse_hfa,
    fuse_hfm,
    fuse_hpfa,
    high_boost,
    highpass,
    lowpass,
    modulation_ratio,
    unsharp_mask,
)


def loop_convolve(samples: np.ndarray, kernel: Kernel) -> np.ndarray:
    """Nested-loop correlation with clamp-to-edge indexing, taps summed row-major"""
    height, width = samples.shape
    n = kernel.size
    c = n // 2
    out = np.zeros((height, width))
    for i in range(height):
        for j in range(width):
            acc = 0.0
            for u in range(n):
                for v in range(n):
                    row = min(max(i + u - c, 0), height - 1)
                    col = min(max(j + v - c, 0), width - 1)
                    acc += kernel.weights[u, v] * samples[row, col]
            out[i, j] = kernel.normalization * acc
    return out


def fusion_input(pan: np.ndarray, ms: np.ndarray) -> FusionInput:
    return FusionInput(Band(pan), MultiBandImage.from_array(ms))


@pytest.mark.unit
class TestKernel:
    """Tests for Kernel construction"""

    def test_highpass_weights(self):
        """Test high-pass weights and normalization"""
        kernel = Kernel.highpass(5)
        assert kernel.weights[2, 2] == 24.0
        assert kernel.weights.sum() == 0.0
        assert kernel.normalization == pytest.approx(1 / 25)
        assert Kernel.highpass(3, normalized=False).normalization == 1.0

    def test_lowpass_weights(self):
        """Test low-pass weights and normalization"""
        kernel = Kernel.lowpass(3)
        assert np.array_equal(kernel.weights, np.ones((3, 3)))
        assert kernel.normalization == pytest.approx(1 / 9)

    @pytest.mark.parametrize("n", [0, 1, 2, 4])
    def test_rejects_bad_sizes(self, n):
        """Test even and too-small sizes are rejected"""
        with pytest.raises(InvalidArgumentError):
            Kernel.lowpass(n)

    def test_rejects_non_square(self):
        """Test non-square weights are rejected"""
        with pytest.raises(InvalidArgumentError):
            Kernel(np.ones((3, 5)))


@pytest.mark.unit
class TestConvolve2d:
    """Tests for convolve2d function"""

    @pytest.mark.parametrize("kind", ["lowpass", "highpass", "random"])
    def test_matches_loop_oracle(self, rng, kind):
        """Test against a nested-loop correlation on 100 random bands"""
        for _ in range(100):
            samples = rng.uniform(0, 255, size=(8, 8))
            n = int(rng.choice([3, 5, 7]))
            if kind == "lowpass":
                kernel = Kernel.lowpass(n)
            elif kind == "highpass":
                kernel = Kernel.highpass(n)
            else:
                kernel = Kernel(rng.normal(size=(n, n)), float(rng.uniform(0.1, 2.0)))
            out = convolve2d(Band(samples), kernel).samples
            # relative to the largest possible response, so cancellation near zero is not penalized
            scale = kernel.normalization * np.abs(kernel.weights).sum() * np.abs(samples).max()
            np.testing.assert_allclose(out, loop_convolve(samples, kernel), rtol=1e-12, atol=1e-12 * scale)

    def test_kernel_larger_than_band(self, rng):
        """Test a kernel larger than the band"""
        samples = rng.uniform(0, 255, size=(2, 3))
        kernel = Kernel.lowpass(7)
        np.testing.assert_allclose(convolve2d(Band(samples), kernel).samples, loop_convolve(samples, kernel), rtol=1e-12)

    def test_center_pulse_lowpass(self):
        """Test a centered pulse spreads evenly"""
        samples = np.zeros((3, 3))
        samples[1, 1] = 9.0
        np.testing.assert_allclose(lowpass(Band(samples)).samples, np.ones((3, 3)), rtol=1e-12)

    def test_single_pulse_highpass(self):
        """Test the high-pass response to a single bright pixel"""
        samples = np.zeros((5, 5))
        samples[2, 2] = 9.0
        out = highpass(Band(samples)).samples
        assert out[2, 2] == pytest.approx(8.0)
        assert out[1, 2] == pytest.approx(-1.0)
        assert out[0, 0] == pytest.approx(0.0)

    def test_output_keeps_dimensions(self, rng):
        """Test output dimensions equal input dimensions"""
        band = Band(rng.uniform(size=(5, 9)))
        assert lowpass(band, 5).shape == (5, 9)


@pytest.mark.unit
class TestFilters:
    """Tests for lowpass, highpass, unsharp_mask and high_boost"""

    @pytest.mark.parametrize("n", [3, 5])
    def test_dc_rejection(self, n):
        """Test constant bands give zero detail"""
        band = Band.constant(173.25, width=7, height=6)
        assert np.abs(highpass(band, n).samples).max() < 1e-12
        assert np.abs(unsharp_mask(band, n).samples).max() < 1e-12
        np.testing.assert_allclose(lowpass(band, n).samples, 173.25, rtol=1e-12)

    def test_single_pixel_lowpass_is_unchanged(self):
        """Test a 1x1 band passes through the low-pass"""
        assert lowpass(Band(np.array([[42.0]]))).samples[0, 0] == pytest.approx(42.0)

    def test_highpass_equals_band_minus_lowpass(self, rng):
        """Test highpass equals band minus lowpass"""
        for _ in range(10):
            band = Band(rng.uniform(0, 255, size=(16, 16)))
            np.testing.assert_allclose(
                highpass(band).samples, band.samples - lowpass(band).samples, rtol=1e-9, atol=1e-9
            )

    def test_unsharp_mask_ramp(self):
        """Test the unsharp mask on a hand-computed ramp"""
        out = unsharp_mask(Band(np.array([[0.0, 3.0], [0.0, 3.0]]))).samples
        np.testing.assert_allclose(out, [[-1.0, 1.0], [-1.0, 1.0]], rtol=1e-12, atol=1e-12)

    def test_high_boost_reduces_to_unsharp_mask(self, rng):
        """Test boost 1 is the unsharp mask"""
        band = Band(rng.uniform(0, 255, size=(9, 9)))
        assert np.array_equal(high_boost(band, 1.0).samples, unsharp_mask(band).samples)

    def test_high_boost_zero_is_negative_lowpass(self, rng):
        """Test boost 0 is the negated low-pass"""
        band = Band(rng.uniform(0, 255, size=(9, 9)))
        np.testing.assert_allclose(high_boost(band, 0.0).samples, -lowpass(band).samples, rtol=1e-12)

    @pytest.mark.parametrize("a", [0.0, 0.5, 2.0])
    def test_high_boost_constant(self, a):
        """Test the high-boost response on a constant band"""
        band = Band.constant(40.0, width=4, height=4)
        np.testing.assert_allclose(high_boost(band, a).samples, (a - 1) * 40.0, atol=1e-12)

    def test_high_boost_rejects_negative(self):
        """Test a negative boost is rejected"""
        with pytest.raises(InvalidArgumentError):
            high_boost(Band.constant(1.0, 3, 3), -0.5)


@pytest.mark.unit
class TestHpfa:
    """Tests for fuse_hpfa function"""

    def test_constant_pan_halves_ms(self, rng):
        """Test a flat PAN halves the MS bands"""
        ms = rng.uniform(0, 255, size=(3, 6, 6))
        fused = fuse_hpfa(fusion_input(np.full((6, 6), 90.0), ms)).to_array()
        np.testing.assert_allclose(fused, ms / 2, atol=1e-12)

    def test_zero_ms_gives_half_highpass(self, rng):
        """Test zero MS gives half the high-pass"""
        pan = rng.uniform(0, 255, size=(6, 6))
        fused = fuse_hpfa(fusion_input(pan, np.zeros((2, 6, 6)))).to_array()
        expected = highpass(Band(pan)).samples / 2
        np.testing.assert_allclose(fused, np.stack([expected, expected]), rtol=1e-12, atol=1e-12)

    def test_isolated_bright_pixel(self):
        """Test the response to an isolated bright PAN pixel"""
        pan = np.zeros((5, 5))
        pan[2, 2] = 90.0
        fused = fuse_hpfa(fusion_input(pan, np.full((3, 5, 5), 100.0))).to_array()
        np.testing.assert_allclose(fused[:, 2, 2], (100 + 8 / 9 * 90) / 2, rtol=1e-12)

    def test_unnormalized_kernel(self):
        """Test the kernel without the 1/n^2 factor"""
        pan = np.zeros((5, 5))
        pan[2, 2] = 1.0
        fused = fuse_hpfa(fusion_input(pan, np.zeros((1, 5, 5))), normalized=False).to_array()
        assert fused[0, 2, 2] == pytest.approx(4.0)

    def test_affine_in_ms(self, rng):
        """Test the output is affine in MS"""
        pan = rng.uniform(0, 255, size=(7, 7))
        a = rng.uniform(0, 255, size=(2, 7, 7))
        b = rng.uniform(0, 255, size=(2, 7, 7))
        fa = fuse_hpfa(fusion_input(pan, a)).to_array()
        fb = fuse_hpfa(fusion_input(pan, b)).to_array()
        np.testing.assert_allclose(fa - fb, (a - b) / 2, rtol=1e-9, atol=1e-9)


@pytest.mark.unit
class TestHfa:
    """Tests for fuse_hfa function"""

    def test_constant_pan_is_identity(self, rng):
        """Test a flat PAN leaves MS unchanged"""
        ms = rng.uniform(0, 255, size=(3, 8, 8))
        fused = fuse_hfa(fusion_input(np.full((8, 8), 120.0), ms)).to_array()
        assert np.abs(fused - ms).max() < 1e-12

    def test_zero_ms_gives_unsharp_mask(self, rng):
        """Test zero MS gives the unsharp mask"""
        pan = rng.uniform(0, 255, size=(6, 6))
        fused = fuse_hfa(fusion_input(pan, np.zeros((1, 6, 6)))).to_array()
        np.testing.assert_allclose(fused[0], unsharp_mask(Band(pan)).samples, rtol=1e-12, atol=1e-12)

    def test_same_detail_in_every_band(self, rng):
        """Test every band receives the same detail"""
        pan = rng.uniform(0, 255, size=(8, 8))
        ms = rng.uniform(0, 255, size=(3, 8, 8))
        diff = fuse_hfa(fusion_input(pan, ms)).to_array() - ms
        np.testing.assert_allclose(diff[0], diff[1], atol=1e-9)
        np.testing.assert_allclose(diff[0], diff[2], atol=1e-9)

    def test_boost_adds_scaled_pan(self, rng):
        """Test a boost adds a scaled copy of PAN"""
        pan = rng.uniform(0, 255, size=(6, 6))
        ms = rng.uniform(0, 255, size=(3, 6, 6))
        plain = fuse_hfa(fusion_input(pan, ms)).to_array()
        boosted = fuse_hfa(fusion_input(pan, ms), boost=1.5).to_array()
        np.testing.assert_allclose(boosted - plain, np.stack([0.5 * pan] * 3), rtol=1e-9, atol=1e-9)


@pytest.mark.unit
class TestHfm:
    """Tests for fuse_hfm and modulation_ratio functions"""

    def test_constant_pan_is_identity(self, rng):
        """Test a flat PAN leaves MS unchanged"""
        ms = rng.uniform(0, 255, size=(3, 8, 8))
        fused = fuse_hfm(fusion_input(np.full((8, 8), 77.0), ms)).to_array()
        np.testing.assert_allclose(fused, ms, rtol=1e-12)

    def test_zero_pan_falls_back_to_ms(self, rng):
        """Test a zero PAN falls back to MS"""
        ms = rng.uniform(0, 255, size=(3, 4, 4))
        fused = fuse_hfm(fusion_input(np.zeros((4, 4)), ms)).to_array()
        assert np.array_equal(fused, ms)

    def test_ratio_guard_below_epsilon(self):
        """Test the ratio is 1 where the low-pass is below epsilon"""
        pan = np.zeros((3, 3))
        pan[0, 0] = HFM_EPSILON / 100
        ratio = modulation_ratio(Band(pan)).samples
        assert np.array_equal(ratio, np.ones((3, 3)))

    def test_ratio_is_pan_over_lowpass(self, rng):
        """Test the ratio is PAN over its low-pass"""
        pan = rng.uniform(1, 255, size=(6, 6))
        ratio = modulation_ratio(Band(pan)).samples
        np.testing.assert_allclose(ratio, pan / lowpass(Band(pan)).samples, rtol=1e-12)

    def test_band_ratios_are_preserved(self, rng):
        """Test band ratios survive modulation"""
        pan = rng.uniform(1, 255, size=(8, 8))
        ms = rng.uniform(1, 255, size=(3, 8, 8))
        fused = fuse_hfm(fusion_input(pan, ms)).to_array()
        np.testing.assert_allclose(fused[0] / fused[2], ms[0] / ms[2], rtol=1e-12)

    def test_modulation_scales_each_band(self):
        """Test each band is scaled by the same ratio"""
        pan = np.zeros((3, 3))
        pan[1, 1] = 90.0
        ms = np.stack([np.full((3, 3), v) for v in (10.0, 20.0, 40.0)])
        fused = fuse_hfm(fusion_input(pan, ms)).to_array()
        # P = 90 and P_LPF = 10 at the center pixel
        np.testing.assert_allclose(fused[:, 1, 1], [90.0, 180.0, 360.0], rtol=1e-12)

    def test_mean_ratio_near_one_on_smooth_pan(self):
        """Test the mean ratio is near 1 on a smooth PAN"""
        x = np.arange(64, dtype=np.float64)
        pan = 100.0 + 30.0 * np.sin(2 * np.pi * x / 32.0)[np.newaxis, :] * np.ones((64, 1))
        ratio = modulation_ratio(Band(pan)).samples
        assert 0.99 <= ratio.mean() <= 1.01

    def test_rejects_negative_pan(self):
        """Test a negative PAN is rejected"""
        with pytest.raises(InvalidDataError):
            modulation_ratio(Band(np.array([[-1.0, 2.0]])))
