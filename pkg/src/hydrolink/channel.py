"""Underwater acoustic propagation and ambient noise model.

Conventions used throughout:

* frequency ``f`` in kHz unless a name says otherwise,
* range/depth ``l`` in metres, reference distance 1 m,
* absorption in dB/km, path loss in dB, noise PSD in dB re uPa^2/Hz.

The attenuation-noise (AN) product combines path loss and noise into a
single per-frequency figure of merit; its minimiser over a frequency grid
is the operating frequency of a link, and the surrounding 3 dB well is
the usable band.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Environment",
    "FrequencyGrid",
    "DEFAULT_GRID",
    "NarrowBandWarning",
    "thorp_absorption",
    "path_loss_db",
    "noise_psd_db",
    "an_product_db",
    "optimal_frequency",
    "band_3db",
]


class NarrowBandWarning(UserWarning):
    """The 3 dB well around the optimum is narrower than one grid step."""


def _as_freq_array(f_khz) -> np.ndarray:
    f = np.asarray(f_khz, dtype=float)
    if f.size == 0:
        raise ValueError("empty frequency input")
    if not np.all(np.isfinite(f)) or np.any(f <= 0.0):
        raise ValueError("frequency must be finite and > 0 kHz")
    return f


@dataclass(frozen=True)
class Environment:
    """Propagation environment: spreading exponent and noise drivers.

    ``spreading_k`` interpolates between cylindrical (1) and spherical (2)
    spreading; 1.5 is the usual practical value.  ``shipping_s`` is the
    shipping activity factor in [0, 1]; ``wind_w`` the wind speed in m/s.
    """

    spreading_k: float = 1.5
    shipping_s: float = 0.5
    wind_w: float = 0.0

    def __post_init__(self) -> None:
        if not 1.0 <= self.spreading_k <= 2.0:
            raise ValueError(f"spreading_k must be in [1, 2], got {self.spreading_k}")
        if not 0.0 <= self.shipping_s <= 1.0:
            raise ValueError(f"shipping_s must be in [0, 1], got {self.shipping_s}")
        if not (np.isfinite(self.wind_w) and self.wind_w >= 0.0):
            raise ValueError(f"wind_w must be finite and >= 0, got {self.wind_w}")


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform evaluation grid in kHz, inclusive of both endpoints."""

    f_min_khz: float = 0.1
    f_max_khz: float = 200.0
    step_khz: float = 0.1

    def __post_init__(self) -> None:
        if not (0.0 < self.f_min_khz < self.f_max_khz):
            raise ValueError("need 0 < f_min_khz < f_max_khz")
        if self.step_khz <= 0.0:
            raise ValueError("step_khz must be > 0")
        if self.num_points < 10:
            raise ValueError("grid must contain at least 10 points")

    @property
    def num_points(self) -> int:
        span = self.f_max_khz - self.f_min_khz
        return int(np.floor(span / self.step_khz + 1e-9)) + 1

    def frequencies_khz(self) -> np.ndarray:
        return self.f_min_khz + self.step_khz * np.arange(self.num_points)


#: Default grid: 0.1 kHz floor keeps every noise term finite, 200 kHz covers
#: short-range optima, and the 0.1 kHz step resolves a ~1 kHz long-range
#: optimum to about 10%.
DEFAULT_GRID = FrequencyGrid()


def thorp_absorption(f_khz) -> float | np.ndarray:
    """Thorp absorption coefficient in dB/km for ``f`` in kHz.

    Empirical polynomial, valid for roughly 0.1 to a few hundred kHz:
    ``0.11 f^2/(1+f^2) + 44 f^2/(4100+f^2) + 2.75e-4 f^2 + 0.003``.
    """
    f = _as_freq_array(f_khz)
    f2 = f * f
    alpha = (
        0.11 * f2 / (1.0 + f2)
        + 44.0 * f2 / (4100.0 + f2)
        + 2.75e-4 * f2
        + 0.003
    )
    return float(alpha) if np.isscalar(f_khz) else alpha


def path_loss_db(l_m: float, f_khz, env: Environment = Environment()) -> float | np.ndarray:
    """One-way path loss in dB at range ``l_m`` metres (reference 1 m).

    Spreading term ``k * 10 log10(l)`` plus Thorp absorption accumulated
    over the path, ``(l/1000) * alpha(f)``.
    """
    if not (np.isfinite(l_m) and l_m >= 1.0):
        raise ValueError(f"range must be finite and >= 1 m, got {l_m}")
    spreading = env.spreading_k * 10.0 * np.log10(l_m)
    absorption = (l_m / 1000.0) * thorp_absorption(f_khz)
    return spreading + absorption


def noise_psd_db(f_khz, env: Environment = Environment()) -> float | np.ndarray:
    """Ambient noise PSD in dB re uPa^2/Hz at ``f`` kHz.

    Sum of turbulence, shipping, wind and thermal components.  Each source
    is defined in dB; they are summed as linear powers, not dB values.
    """
    f = _as_freq_array(f_khz)
    logf = np.log10(f)
    s, w = env.shipping_s, env.wind_w
    turb = 17.0 - 30.0 * logf
    ship = 40.0 + 20.0 * (s - 0.5) + 26.0 * logf - 60.0 * np.log10(f + 0.03)
    wind = 50.0 + 7.5 * np.sqrt(w) + 20.0 * logf - 40.0 * np.log10(f + 0.4)
    therm = -15.0 + 20.0 * logf
    linear = sum(10.0 ** (x / 10.0) for x in (turb, ship, wind, therm))
    out = 10.0 * np.log10(linear)
    return float(out) if np.isscalar(f_khz) else out


def an_product_db(l_m: float, f_khz, env: Environment = Environment()) -> float | np.ndarray:
    """Attenuation-noise product ``path_loss_db + noise_psd_db`` in dB."""
    return path_loss_db(l_m, f_khz, env) + noise_psd_db(f_khz, env)


def optimal_frequency(
    l_m: float,
    env: Environment = Environment(),
    grid: FrequencyGrid = DEFAULT_GRID,
) -> float:
    """Frequency (kHz) minimising the AN product over ``grid``.

    Ties resolve toward the lower frequency (first minimum on the
    ascending grid).
    """
    freqs = grid.frequencies_khz()
    an = an_product_db(l_m, freqs, env)
    return float(freqs[int(np.argmin(an))])


def band_3db(
    l_m: float,
    env: Environment = Environment(),
    grid: FrequencyGrid = DEFAULT_GRID,
) -> tuple[float, float]:
    """3 dB band ``(f_lo, f_hi)`` in kHz around the AN-product minimum.

    The band is the contiguous run of grid points, containing the
    minimiser, whose AN product stays within 3 dB of the minimum.  If only
    the minimiser itself qualifies, a single-step band is reported and a
    :class:`NarrowBandWarning` is emitted.
    """
    freqs = grid.frequencies_khz()
    an = an_product_db(l_m, freqs, env)
    i_min = int(np.argmin(an))
    within = an <= an[i_min] + 3.0
    lo = i_min
    while lo > 0 and within[lo - 1]:
        lo -= 1
    hi = i_min
    while hi < len(freqs) - 1 and within[hi + 1]:
        hi += 1
    if lo == hi:
        warnings.warn(
            f"3 dB band at l={l_m} m is narrower than one grid step "
            f"({grid.step_khz} kHz); reporting a single-step band",
            NarrowBandWarning,
            stacklevel=2,
        )
        if hi < len(freqs) - 1:
            hi += 1
        else:
            lo -= 1
    return float(freqs[lo]), float(freqs[hi])
