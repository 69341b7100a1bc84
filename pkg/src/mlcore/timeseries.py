"""Wavelet transforms and dynamic time warping for longitudinal data.

All transforms use periodic boundary handling, which keeps the decimated
transform orthonormal (Parseval holds to float precision) and makes the
undecimated transform exactly shift-covariant. Filters: Haar and Daubechies-4,
embedded as exact closed-form constants.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidCoefficients,
    InvalidLength,
    InvalidParameter,
    InvalidWindow,
    ShapeMismatch,
)
from .linear import _frozen

_SQRT2 = np.sqrt(2.0)
_SQRT3 = np.sqrt(3.0)

_LOWPASS = {
    "haar": np.array([1.0, 1.0]) / _SQRT2,
    "d4": np.array([1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3])
    / (4.0 * _SQRT2),
}


@dataclass(frozen=True)
class WaveletFilter:
    """Orthonormal analysis pair; highpass is the quadrature mirror of lowpass."""

    name: str
    lowpass: np.ndarray
    highpass: np.ndarray

    @property
    def length(self):
        return self.lowpass.shape[0]


def wavelet_filter(name):
    if name not in _LOWPASS:
        raise InvalidParameter(f"unknown wavelet {name!r}; have {sorted(_LOWPASS)}")
    h = _LOWPASS[name]
    g = np.array([(-1.0) ** k * h[h.size - 1 - k] for k in range(h.size)])
    return WaveletFilter(name, _frozen(h.copy()), _frozen(g))


def _as_signal(x):
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size == 0 or not np.all(np.isfinite(x)):
        raise InvalidLength("signal must be non-empty and finite")
    return x


@dataclass(frozen=True)
class DwtCoefficients:
    """Mallat pyramid output: per-level details plus the final approximation."""

    details: tuple  # level 1 (finest) first
    approximation: np.ndarray
    levels: int
    length: int


def dwt(x, w, levels):
    """Decimated wavelet transform; length must be a power of two >= 2**levels."""
    x = _as_signal(x)
    n = x.size
    if n < 2 or n & (n - 1) != 0:
        raise InvalidLength(f"length {n} is not a power of two")
    if not 1 <= levels or 2 ** levels > n:
        raise InvalidLength(f"{levels} levels need length >= {2 ** levels}")
    details = []
    approx = x
    for _ in range(levels):
        m = approx.size
        idx = (2 * np.arange(m // 2)[:, None] + np.arange(w.length)[None, :]) % m
        windows = approx[idx]
        details.append(_frozen(windows @ w.highpass))
        approx = windows @ w.lowpass
    return DwtCoefficients(tuple(details), _frozen(approx), levels, n)


def idwt(c, w):
    """Perfect-reconstruction inverse of ``dwt``."""
    approx = np.asarray(c.approximation, dtype=np.float64)
    for level in range(c.levels - 1, -1, -1):
        detail = np.asarray(c.details[level], dtype=np.float64)
        if detail.shape != approx.shape:
            raise InvalidCoefficients(
                f"level {level + 1} detail has shape {detail.shape}, expected {approx.shape}"
            )
        m = approx.size * 2
        out = np.zeros(m)
        idx = (2 * np.arange(approx.size)[:, None] + np.arange(w.length)[None, :]) % m
        np.add.at(out, idx, approx[:, None] * w.lowpass + detail[:, None] * w.highpass)
        approx = out
    if approx.size != c.length:
        raise InvalidCoefficients(
            f"coefficients reconstruct length {approx.size}, recorded {c.length}"
        )
    return approx


def udwt(x, w, levels):
    """Undecimated (a trous) transform: per-level arrays all of input length.

    Filters are upsampled by 2**level between stages; the transform commutes
    with circular shifts of the input.
    """
    x = _as_signal(x)
    n = x.size
    if n < w.length:
        raise InvalidLength(f"signal of length {n} shorter than filter ({w.length})")
    if levels < 1:
        raise InvalidParameter("levels must be >= 1")
    details = []
    approx = x
    for level in range(levels):
        dilation = 2 ** level
        idx = (np.arange(n)[:, None] + dilation * np.arange(w.length)[None, :]) % n
        windows = approx[idx]
        details.append(_frozen(windows @ w.highpass))
        approx = windows @ w.lowpass
    return tuple(details) + (_frozen(approx),)


def _morlet(t, omega0=6.0):
    return np.pi ** -0.25 * np.exp(1j * omega0 * t) * np.exp(-0.5 * t * t)


def _mexican_hat(t):
    return 2.0 / (np.sqrt(3.0) * np.pi ** 0.25) * (1.0 - t * t) * np.exp(-0.5 * t * t)


def morlet_scale_for_period(period, omega0=6.0):
    """Scale whose center frequency matches a sinusoid of the given period."""
    return omega0 * period / (2.0 * np.pi)


def cwt(x, scales, wavelet="morlet"):
    """Continuous wavelet transform by direct periodic convolution.

    Returns a scales x time matrix, complex for the Morlet wavelet
    (omega0 = 6) and real for the Mexican hat. Each row uses the
    L2-normalized mother wavelet psi((u - t)/s) / sqrt(s).
    """
    x = _as_signal(x)
    scales = np.atleast_1d(np.asarray(scales, dtype=np.float64))
    if np.any(scales <= 0):
        raise InvalidParameter("scales must be > 0")
    if wavelet == "morlet":
        mother, dtype = _morlet, np.complex128
    elif wavelet == "mexican_hat":
        mother, dtype = _mexican_hat, np.float64
    else:
        raise InvalidParameter(f"unknown wavelet {wavelet!r}")
    n = x.size
    out = np.empty((scales.size, n), dtype=dtype)
    for row, s in enumerate(scales):
        half = int(np.ceil(6.0 * s))
        offsets = np.arange(-half, half + 1)
        taps = np.conj(mother(offsets / s)) / np.sqrt(s)
        idx = (np.arange(n)[:, None] + offsets[None, :]) % n
        out[row] = x[idx] @ taps
    return out


@dataclass(frozen=True)
class WarpResult:
    distance: float
    path: tuple  # ordered (i, j) pairs from (0, 0) to (n-1, m-1)


def _local_cost(x, y):
    if x.ndim == 1:
        return np.abs(x[:, None] - y[None, :])
    if x.shape[1] != y.shape[1]:
        raise ShapeMismatch("multivariate series must share dimensionality")
    d2 = (
        np.sum(x * x, axis=1)[:, None]
        - 2.0 * x @ y.T
        + np.sum(y * y, axis=1)[None, :]
    )
    return np.sqrt(np.maximum(d2, 0.0))


def dtw(x, y, window=None):
    """Dynamic time warping with steps (1,0), (0,1), (1,1).

    Local cost is |a - b| for scalar series and the pointwise Euclidean
    distance for multivariate rows. ``window`` adds a Sakoe-Chiba band of the
    given radius around the diagonal. Backtracking prefers diagonal, then up
    (advance x), then left.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != y.ndim or x.ndim not in (1, 2):
        raise ShapeMismatch("signals must both be 1-d or both 2-d")
    n, m = x.shape[0], y.shape[0]
    if n == 0 or m == 0:
        raise ShapeMismatch("signals must be non-empty")
    if window is not None:
        window = int(window)
        if window < 0 or abs(n - m) > window:
            raise InvalidWindow(
                f"band radius {window} cannot align lengths {n} and {m}"
            )
    cost = _local_cost(x, y)
    acc = np.full((n, m), np.inf)
    inside = (
        np.abs(np.arange(n)[:, None] - np.arange(m)[None, :]) <= window
        if window is not None
        else np.ones((n, m), dtype=bool)
    )
    acc[0, 0] = cost[0, 0]
    for i in range(n):
        for j in range(m):
            if (i == 0 and j == 0) or not inside[i, j]:
                continue
            best = np.inf
            if i > 0 and j > 0:
                best = acc[i - 1, j - 1]
            if i > 0:
                best = min(best, acc[i - 1, j])
            if j > 0:
                best = min(best, acc[i, j - 1])
            acc[i, j] = cost[i, j] + best
    if not np.isfinite(acc[n - 1, m - 1]):
        raise InvalidWindow("band leaves the endpoint unreachable")
    path = [(n - 1, m - 1)]
    i, j = n - 1, m - 1
    while (i, j) != (0, 0):
        candidates = []
        if i > 0 and j > 0:
            candidates.append((acc[i - 1, j - 1], 0, (i - 1, j - 1)))
        if i > 0:
            candidates.append((acc[i - 1, j], 1, (i - 1, j)))
        if j > 0:
            candidates.append((acc[i, j - 1], 2, (i, j - 1)))
        _, _, (i, j) = min(candidates, key=lambda t: (t[0], t[1]))
        path.append((i, j))
    return WarpResult(float(acc[n - 1, m - 1]), tuple(reversed(path)))
