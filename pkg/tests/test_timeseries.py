import numpy as np
import pytest

from mlcore.errors import (
    InvalidCoefficients,
    InvalidLength,
    InvalidParameter,
    InvalidWindow,
)
from mlcore.timeseries import (
    cwt,
    dtw,
    dwt,
    idwt,
    morlet_scale_for_period,
    udwt,
    wavelet_filter,
)

from oracles import dtw_brute_force


class TestFilters:
    @pytest.mark.parametrize("name", ["haar", "d4"])
    def test_orthonormality(self, name):
        w = wavelet_filter(name)
        h = w.lowpass
        assert h @ h == pytest.approx(1.0, abs=1e-15)
        if h.size > 2:
            assert h[:-2] @ h[2:] == pytest.approx(0.0, abs=1e-15)

    def test_quadrature_mirror(self):
        w = wavelet_filter("d4")
        for k in range(4):
            assert w.highpass[k] == pytest.approx(
                (-1.0) ** k * w.lowpass[3 - k], abs=1e-15
            )

    def test_unknown_name(self):
        with pytest.raises(InvalidParameter):
            wavelet_filter("sym8")


class TestDwt:
    def test_constant_signal_haar(self):
        w = wavelet_filter("haar")
        c = dwt([1.0, 1.0, 1.0, 1.0], w, 1)
        assert np.allclose(c.details[0], 0.0)
        assert np.allclose(c.approximation, np.sqrt(2.0))

    def test_hand_convolution(self):
        w = wavelet_filter("haar")
        c = dwt([1.0, 2.0, 3.0, 4.0], w, 1)
        r2 = np.sqrt(2.0)
        assert np.allclose(c.approximation, [3.0 / r2 * 1.0, 7.0 / r2])
        assert np.allclose(c.details[0], [-1.0 / r2, -1.0 / r2])

    @pytest.mark.parametrize("name", ["haar", "d4"])
    def test_parseval(self, name):
        gen = np.random.default_rng(0)
        w = wavelet_filter(name)
        for n, levels in [(8, 2), (32, 3), (128, 4)]:
            x = gen.normal(size=n)
            c = dwt(x, w, levels)
            total = sum(float(d @ d) for d in c.details) + float(
                c.approximation @ c.approximation
            )
            assert total == pytest.approx(float(x @ x), abs=1e-10)

    def test_coefficient_count_preserved(self):
        w = wavelet_filter("d4")
        c = dwt(np.arange(16.0), w, 3)
        count = sum(d.size for d in c.details) + c.approximation.size
        assert count == 16

    def test_length_validation(self):
        w = wavelet_filter("haar")
        with pytest.raises(InvalidLength):
            dwt(np.arange(6.0), w, 1)  # not a power of two
        with pytest.raises(InvalidLength):
            dwt(np.arange(8.0), w, 4)  # 2**4 > 8


class TestIdwt:
    @pytest.mark.parametrize("name", ["haar", "d4"])
    def test_round_trip(self, name):
        gen = np.random.default_rng(1)
        w = wavelet_filter(name)
        x = gen.normal(size=64)
        c = dwt(x, w, 3)
        assert np.abs(idwt(c, w) - x).max() < 1e-10

    def test_zero_coefficients(self):
        w = wavelet_filter("haar")
        c = dwt(np.zeros(8), w, 2)
        assert np.allclose(idwt(c, w), 0.0)

    def test_approximation_only_constant(self):
        w = wavelet_filter("haar")
        x = np.full(8, 2.5)
        c = dwt(x, w, 2)
        assert all(np.allclose(d, 0.0) for d in c.details)
        assert np.allclose(idwt(c, w), x, atol=1e-12)

    def test_structure_mismatch(self):
        from mlcore.timeseries import DwtCoefficients

        w = wavelet_filter("haar")
        c = dwt(np.arange(8.0), w, 2)
        bad = DwtCoefficients((c.details[0],), c.approximation, 1, 8)
        with pytest.raises(InvalidCoefficients):
            idwt(bad, w)


class TestUdwt:
    def test_constant_signal(self):
        w = wavelet_filter("d4")
        bands = udwt(np.full(10, 3.0), w, 2)
        assert np.allclose(bands[0], 0.0, atol=1e-12)
        assert np.allclose(bands[1], 0.0, atol=1e-12)

    @pytest.mark.parametrize("name", ["haar", "d4"])
    def test_shift_covariance(self, name):
        gen = np.random.default_rng(2)
        w = wavelet_filter(name)
        x = gen.normal(size=24)
        shift = 3
        direct = udwt(np.roll(x, shift), w, 3)
        rolled = [np.roll(band, shift) for band in udwt(x, w, 3)]
        for a, b in zip(direct, rolled):
            assert np.abs(a - b).max() < 1e-10

    def test_level_one_matches_dwt_at_even_phases(self):
        gen = np.random.default_rng(3)
        w = wavelet_filter("d4")
        x = gen.normal(size=32)
        dec = dwt(x, w, 1)
        und = udwt(x, w, 1)
        assert np.allclose(und[0][::2], dec.details[0], atol=1e-12)
        assert np.allclose(und[1][::2], dec.approximation, atol=1e-12)

    def test_all_bands_input_length(self):
        w = wavelet_filter("haar")
        bands = udwt(np.arange(12.0), w, 3)
        assert all(b.size == 12 for b in bands)

    def test_short_signal_rejected(self):
        w = wavelet_filter("d4")
        with pytest.raises(InvalidLength):
            udwt(np.arange(3.0), w, 1)


class TestCwt:
    def test_zero_signal(self):
        out = cwt(np.zeros(32), [1.0, 2.0], "morlet")
        assert np.allclose(out, 0.0)

    def test_sinusoid_peak_scale(self):
        n = 256
        period = 16.0
        t = np.arange(n)
        x = np.sin(2 * np.pi * t / period)
        scales = np.geomspace(2.0, 64.0, 40)
        out = cwt(x, scales, "morlet")
        power = np.abs(out).mean(axis=1)
        peak_scale = scales[int(np.argmax(power))]
        target = morlet_scale_for_period(period)
        step = scales[1] / scales[0]
        assert target / step <= peak_scale <= target * step

    def test_linearity(self):
        gen = np.random.default_rng(4)
        x = gen.normal(size=48)
        scales = [2.0, 5.0]
        for wavelet in ("morlet", "mexican_hat"):
            a = cwt(3.5 * x, scales, wavelet)
            b = 3.5 * cwt(x, scales, wavelet)
            assert np.abs(a - b).max() < 1e-10

    def test_mexican_hat_real(self):
        out = cwt(np.sin(np.arange(32.0)), [3.0], "mexican_hat")
        assert out.dtype == np.float64

    def test_scale_validation(self):
        with pytest.raises(InvalidParameter):
            cwt(np.ones(8), [0.0], "morlet")
        with pytest.raises(InvalidParameter):
            cwt(np.ones(8), [1.0], "daubechies")


class TestDtw:
    def test_identical_signals(self):
        x = np.array([0.0, 1.0, 2.0, 1.0])
        r = dtw(x, x)
        assert r.distance == 0.0
        assert r.path == tuple((i, i) for i in range(4))

    def test_contract_example(self):
        r = dtw([0.0, 1.0, 2.0], [0.0, 2.0])
        assert r.distance == pytest.approx(1.0)
        assert r.path[0] == (0, 0) and r.path[-1] == (2, 1)
        assert dtw_brute_force([0.0, 1.0, 2.0], [0.0, 2.0]) == pytest.approx(1.0)

    def test_symmetry(self):
        gen = np.random.default_rng(5)
        for _ in range(25):
            x = gen.normal(size=int(gen.integers(2, 10)))
            y = gen.normal(size=int(gen.integers(2, 10)))
            assert dtw(x, y).distance == pytest.approx(dtw(y, x).distance, abs=1e-12)

    def test_matches_brute_force(self):
        gen = np.random.default_rng(6)
        for _ in range(40):
            x = gen.normal(size=int(gen.integers(2, 8)))
            y = gen.normal(size=int(gen.integers(2, 8)))
            assert dtw(x, y).distance == pytest.approx(
                dtw_brute_force(x, y), abs=1e-10
            )

    def test_band_monotone(self):
        gen = np.random.default_rng(7)
        for _ in range(20):
            n = int(gen.integers(4, 10))
            x = gen.normal(size=n)
            y = gen.normal(size=n)
            full = dtw(x, y).distance
            banded = dtw(x, y, window=1).distance
            assert banded >= full - 1e-12

    def test_path_steps_monotone(self):
        gen = np.random.default_rng(8)
        x = gen.normal(size=7)
        y = gen.normal(size=5)
        r = dtw(x, y)
        for (i0, j0), (i1, j1) in zip(r.path, r.path[1:]):
            assert (i1 - i0, j1 - j0) in {(1, 0), (0, 1), (1, 1)}

    def test_multivariate_euclidean_cost(self):
        x = np.array([[0.0, 0.0], [1.0, 1.0]])
        y = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 2.0]])
        r = dtw(x, y)
        assert r.distance == pytest.approx(1.0)  # only the (1,1)-(1,2) mismatch

    def test_window_validation(self):
        with pytest.raises(InvalidWindow):
            dtw(np.arange(8.0), np.arange(3.0), window=2)

    def test_zero_distance_iff_alignable(self):
        # stuttered copy aligns at zero cost
        r = dtw([0.0, 1.0, 1.0, 2.0], [0.0, 1.0, 2.0])
        assert r.distance == pytest.approx(0.0)
