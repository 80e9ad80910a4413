import numpy as np
import pytest

from tfbench.core import ComplexSignal, SampledSignal, WindowSpec, make_window
from tfbench.tfd import (
    TFDGrid,
    next_pow2,
    psd_from_tfd,
    pwvd,
    resolution_report,
    spwvd,
    stft,
    wvd,
)


def analytic_tone(freq_hz, fs, n, amp=1.0):
    t = np.arange(n) / fs
    return ComplexSignal(amp * np.exp(2j * np.pi * freq_hz * t), fs)


def test_next_pow2():
    assert next_pow2(1) == 1
    assert next_pow2(2) == 2
    assert next_pow2(3) == 4
    assert next_pow2(320) == 512
    assert next_pow2(1024) == 1024
    assert next_pow2(1280) == 2048


def test_tfd_grid_validation():
    with pytest.raises(ValueError):
        TFDGrid([0.0, 1.0], [0.0, 1.0], np.zeros((3, 2)), "stft")
    with pytest.raises(ValueError):
        TFDGrid([1.0, 0.0], [0.0, 1.0], np.zeros((2, 2)), "stft")
    with pytest.raises(ValueError):
        TFDGrid([0.0, 1.0], [1.0, 1.0], np.zeros((2, 2)), "stft")


def test_stft_grid_axes():
    sig = SampledSignal(np.zeros(320), 320.0)
    g = stft(sig, WindowSpec("hann", 128), 4, 512)
    # frame center of the first window: (128-1)/2 samples in
    assert g.times_s[0] == pytest.approx(63.5 / 320.0)
    assert np.all(np.diff(g.times_s) == pytest.approx(4 / 320.0))
    assert g.freqs_hz[1] - g.freqs_hz[0] == pytest.approx(0.625)
    assert g.freqs_hz[-1] == pytest.approx(160.0)
    assert g.n_times == 49
    assert g.values.shape == (49, 257)
    assert g.method == "stft"
    assert g.meta["analytic_input"] is False


def test_stft_tone_ridge_and_peak_level():
    z = analytic_tone(40.0, 320.0, 320)
    spec = WindowSpec("hann", 128)
    g = stft(z, spec, 4, 512)
    ridge = g.freqs_hz[np.argmax(g.values, axis=1)]
    np.testing.assert_array_equal(ridge, 40.0)
    # on-bin analytic tone: frame peak equals (sum of window)^2
    wsum = make_window(spec).sum()
    np.testing.assert_allclose(np.max(g.values, axis=1), wsum**2, rtol=1e-9)


def test_stft_respects_start_time():
    x = SampledSignal(np.random.default_rng(0).normal(size=256), 128.0)
    y = SampledSignal(x.samples, 128.0, start_time_s=2.0)
    gx = stft(x, WindowSpec("hann", 64), 8, 128)
    gy = stft(y, WindowSpec("hann", 64), 8, 128)
    np.testing.assert_allclose(gy.times_s, gx.times_s + 2.0, atol=1e-12)
    np.testing.assert_array_equal(gy.values, gx.values)


def test_stft_validation():
    sig = SampledSignal(np.zeros(100), 100.0)
    with pytest.raises(ValueError):
        stft(sig, WindowSpec("hann", 128), 4, 512)  # window longer than signal
    with pytest.raises(ValueError):
        stft(sig, WindowSpec("hann", 64), 0, 128)
    with pytest.raises(ValueError):
        stft(sig, WindowSpec("hann", 64), 4, 32)  # window longer than fft


def test_wvd_time_marginal_identity():
    """Summing a WVD row over frequency gives nfft * |z[n]|^2 exactly."""
    rng = np.random.default_rng(3)
    z = ComplexSignal(rng.normal(size=64) + 1j * rng.normal(size=64), 64.0)
    g = wvd(z, 128)
    marginal = g.values.sum(axis=1)
    expected = 128 * np.abs(z.samples) ** 2
    np.testing.assert_allclose(marginal, expected, rtol=1e-10, atol=1e-10)


def test_wvd_tone_concentration():
    z = analytic_tone(80.0, 320.0, 128)
    g = wvd(z, 64)
    # axis spans [0, fs/2) in steps of fs/(2*nfft)
    assert g.freqs_hz[1] - g.freqs_hz[0] == pytest.approx(2.5)
    assert g.freqs_hz[-1] == pytest.approx(157.5)
    ridge = g.freqs_hz[np.argmax(g.values, axis=1)]
    interior = slice(32, -32)
    np.testing.assert_array_equal(ridge[interior], 80.0)
    assert g.meta["folding_hz"] == pytest.approx(160.0)
    assert g.meta["hop_samples"] == 1


def test_wvd_real_input_folding_meta():
    t = np.arange(128) / 320.0
    x = SampledSignal(np.cos(2 * np.pi * 60.0 * t), 320.0)
    g = wvd(x, 128, use_analytic=False)
    assert g.meta["analytic_input"] is False
    assert g.meta["folding_hz"] == pytest.approx(80.0)
    g2 = wvd(x, 128)  # analytic conversion on by default
    assert g2.meta["analytic_input"] is True
    assert g2.meta["folding_hz"] == pytest.approx(160.0)


def test_wvd_validation():
    with pytest.raises(ValueError):
        wvd(SampledSignal(np.ones(3), 8.0), 16)
    with pytest.raises(ValueError):
        wvd(SampledSignal(np.ones(16), 8.0), 0)


def test_pwvd_rectangular_taper_equals_wvd():
    rng = np.random.default_rng(9)
    z = ComplexSignal(rng.normal(size=64) + 1j * rng.normal(size=64), 64.0)
    full_span = WindowSpec("rectangular", 63)  # covers every lag, M = 31
    a = pwvd(z, full_span, 128)
    b = wvd(z, 128)
    np.testing.assert_allclose(a.values, b.values, atol=1e-12 * np.abs(b.values).max())


def test_pwvd_rejects_even_window():
    z = analytic_tone(10.0, 64.0, 64)
    with pytest.raises(ValueError):
        pwvd(z, WindowSpec("hann", 32), 128)


def test_spwvd_degenerate_equals_wvd():
    rng = np.random.default_rng(1)
    z = ComplexSignal(rng.normal(size=64) + 1j * rng.normal(size=64), 64.0)
    a = spwvd(z, WindowSpec("hann", 1), WindowSpec("rectangular", 63), 128)
    b = wvd(z, 128)
    np.testing.assert_allclose(a.values, b.values, atol=1e-9 * np.abs(b.values).max())


def test_spwvd_suppresses_cross_term():
    fs, n = 320.0, 256
    t = np.arange(n) / fs
    z = ComplexSignal(np.exp(2j * np.pi * 20 * t) + np.exp(2j * np.pi * 40 * t), fs)
    raw = wvd(z, 512)
    smooth = spwvd(z, WindowSpec("hann", 31), WindowSpec("hann", 63), 512)
    mid = np.argmin(np.abs(raw.freqs_hz - 30.0))
    interior = slice(n // 4, -n // 4)
    raw_cross = np.abs(raw.values[interior, mid]).mean()
    smooth_cross = np.abs(smooth.values[interior, mid]).mean()
    # normalize by each grid's own peak before comparing
    raw_cross /= np.abs(raw.values[interior]).max()
    smooth_cross /= np.abs(smooth.values[interior]).max()
    assert smooth_cross < 0.2 * raw_cross


def test_spwvd_window_meta():
    z = analytic_tone(20.0, 320.0, 64)
    g = spwvd(z, WindowSpec("hann", 11), WindowSpec("hann", 21), 128)
    assert g.method == "spwvd"
    assert g.meta["time_window"]["length_samples"] == 11
    assert g.meta["freq_window"]["length_samples"] == 21
    with pytest.raises(ValueError):
        spwvd(z, WindowSpec("hann", 10), WindowSpec("hann", 21), 128)


def test_psd_unit_sum_and_nonnegative():
    sig = gen_two_tone()
    g = stft(sig, WindowSpec("hann", 128), 4, 512)
    p = psd_from_tfd(g)
    assert p.power.sum() == pytest.approx(1.0)
    assert np.all(p.power >= 0.0)
    assert not p.all_zero


def test_psd_wvd_uses_magnitude():
    sig = gen_two_tone()
    g = wvd(sig, 1024)
    assert g.values.min() < 0.0  # bilinear grids go negative
    p = psd_from_tfd(g)
    assert np.all(p.power >= 0.0)
    assert p.power.sum() == pytest.approx(1.0)


def test_psd_all_zero_grid():
    g = TFDGrid([0.0, 1.0], [0.0, 1.0], np.zeros((2, 2)), "stft", {})
    p = psd_from_tfd(g)
    assert p.all_zero
    np.testing.assert_array_equal(p.power, 0.0)


def gen_two_tone():
    fs, n = 320.0, 320
    t = np.arange(n) / fs
    return SampledSignal(np.sin(2 * np.pi * 20 * t) + np.sin(2 * np.pi * 40 * t), fs)


def test_resolution_report_values():
    sig = gen_two_tone()
    g = stft(sig, WindowSpec("hann", 128), 4, 512)
    r = resolution_report(g)
    assert r.temporal_resolution_ms == pytest.approx(12.5)
    assert r.spectral_resolution_hz == pytest.approx(0.625)
    assert r.nyquist_hz == pytest.approx(160.0)
    assert r.folding_hz == pytest.approx(160.0)
    gw = wvd(sig, 2048)
    rw = resolution_report(gw)
    assert rw.temporal_resolution_ms == pytest.approx(3.125)
    assert rw.folding_hz == pytest.approx(160.0)  # analytic conversion applied


def test_resolution_report_errors():
    g = TFDGrid([0.0], [0.0, 1.0], np.zeros((1, 2)), "stft", {"sample_rate_hz": 8.0})
    with pytest.raises(ValueError):
        resolution_report(g)
    g2 = TFDGrid([0.0, 1.0], [0.0, 1.0], np.zeros((2, 2)), "stft", {})
    with pytest.raises(ValueError):
        resolution_report(g2)
