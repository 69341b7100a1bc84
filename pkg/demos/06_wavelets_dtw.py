#!/usr/bin/env python3
"""Longitudinal-signal toolbox: wavelet transforms and dynamic time warping."""

import numpy as np

from mlcore import (
    DwtCoefficients,
    cwt,
    dtw,
    dwt,
    idwt,
    morlet_scale_for_period,
    udwt,
    wavelet_filter,
)

gen = np.random.default_rng(3)

# --- decimated transform: denoise by zeroing fine-scale details
t = np.arange(256)
clean = np.sin(2 * np.pi * t / 64) + 0.5 * np.sin(2 * np.pi * t / 16)
noisy = clean + 0.35 * gen.normal(size=256)
w = wavelet_filter("d4")
coeffs = dwt(noisy, w, levels=3)
kept = DwtCoefficients(
    tuple(np.zeros_like(d) for d in coeffs.details[:2]) + coeffs.details[2:],
    coeffs.approximation,
    coeffs.levels,
    coeffs.length,
)
denoised = idwt(kept, w)
print(f"noisy rmse {np.sqrt(np.mean((noisy - clean) ** 2)):.3f}  "
      f"denoised rmse {np.sqrt(np.mean((denoised - clean) ** 2)):.3f}")

roundtrip = np.abs(idwt(coeffs, w) - noisy).max()
print(f"perfect reconstruction gap: {roundtrip:.2e}")

# --- undecimated transform: shift covariance
bands = udwt(noisy, w, levels=2)
shifted = udwt(np.roll(noisy, 5), w, levels=2)
gap = max(np.abs(np.roll(b, 5) - s).max() for b, s in zip(bands, shifted))
print(f"udwt shift-covariance gap: {gap:.2e}")

# --- continuous transform: locate an oscillation's period
period = 32.0
x = np.sin(2 * np.pi * t / period)
scales = np.geomspace(2, 128, 60)
power = np.abs(cwt(x, scales, "morlet")).mean(axis=1)
peak = scales[int(np.argmax(power))]
print(f"cwt peak scale {peak:.1f} vs analytic {morlet_scale_for_period(period):.1f}")

# --- dynamic time warping: align a stretched copy
a = np.sin(np.linspace(0, 3 * np.pi, 40))
b = np.sin(np.linspace(0, 3 * np.pi, 55))
r = dtw(a, b)
naive = float(np.abs(a - b[:40]).sum())
print(f"dtw distance {r.distance:.3f} over a {len(r.path)}-step path "
      f"(pointwise cost without warping: {naive:.3f})")
banded = dtw(a, b, window=20)
print(f"sakoe-chiba radius 20: {banded.distance:.3f} (>= unbanded)")
