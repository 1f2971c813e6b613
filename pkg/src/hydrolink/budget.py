"""Source level, transmit power and usable bit rate for a single link.

The source level needed to hold a target in-band SNR is
``SL = snr_db + 10 log10( integral of A(l,f) N(f) df )`` with the
integrand in linear units and ``f`` in Hz inside the integral.  Acoustic
power follows from the plane-wave conversion ``P = 10^((SL - 170.8)/10)``
watts; the electrical draw divides by the electroacoustic efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    DEFAULT_GRID,
    Environment,
    FrequencyGrid,
    an_product_db,
    band_3db,
    optimal_frequency,
)

__all__ = [
    "DEFAULT_EFFICIENCY",
    "LinkBudget",
    "required_source_level",
    "acoustic_power_watts",
    "link_budget",
]

#: dB re uPa source level radiating 1 W of acoustic power.
_SL_ONE_WATT_DB = 170.8

#: Default overall electroacoustic conversion efficiency (power amplifier
#: plus projector) used to turn acoustic watts into electrical watts.
DEFAULT_EFFICIENCY = 0.1


@dataclass(frozen=True)
class LinkBudget:
    """Operating point of one acoustic link.

    ``tx_power_w`` is the electrical draw; ``bit_rate_bps`` assumes BPSK
    at 1 bit/s/Hz over the 3 dB band.
    """

    distance_m: float
    f_o_khz: float
    band_khz: tuple[float, float]
    bandwidth_hz: float
    source_level_db: float
    tx_power_w: float
    bit_rate_bps: float

    def __post_init__(self) -> None:
        if self.bandwidth_hz <= 0.0:
            raise ValueError("bandwidth must be positive")
        if self.tx_power_w <= 0.0:
            raise ValueError("tx power must be positive")
        if self.bit_rate_bps != self.bandwidth_hz:
            raise ValueError("BPSK bit rate must equal the bandwidth in Hz")


def required_source_level(
    l_m: float,
    env: Environment,
    band_khz: tuple[float, float],
    snr_db: float,
    grid: FrequencyGrid = DEFAULT_GRID,
) -> float:
    """Source level (dB re uPa) sustaining ``snr_db`` over ``band_khz``.

    The AN product is integrated with the trapezoid rule over the grid
    points falling inside the band, with frequency converted to Hz.
    """
    f_lo, f_hi = band_khz
    freqs = grid.frequencies_khz()
    sel = (freqs >= f_lo - 1e-12) & (freqs <= f_hi + 1e-12)
    if int(np.count_nonzero(sel)) < 2:
        raise ValueError(
            f"band ({f_lo}, {f_hi}) kHz covers fewer than two grid points"
        )
    an_lin = 10.0 ** (an_product_db(l_m, freqs[sel], env) / 10.0)
    integral = np.trapezoid(an_lin, freqs[sel] * 1000.0)
    return float(snr_db + 10.0 * np.log10(integral))


def acoustic_power_watts(source_level_db: float) -> float:
    """Acoustic power in watts radiated at the given source level."""
    return float(10.0 ** ((source_level_db - _SL_ONE_WATT_DB) / 10.0))


def link_budget(
    l_m: float,
    env: Environment = Environment(),
    snr_db: float = 10.0,
    grid: FrequencyGrid = DEFAULT_GRID,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> LinkBudget:
    """Full budget for one link: operating band, SL, power, bit rate."""
    if not 0.0 < efficiency <= 1.0:
        raise ValueError(f"efficiency must be in (0, 1], got {efficiency}")
    f_o = optimal_frequency(l_m, env, grid)
    band = band_3db(l_m, env, grid)
    bandwidth_hz = (band[1] - band[0]) * 1000.0
    sl = required_source_level(l_m, env, band, snr_db, grid)
    tx_power_w = acoustic_power_watts(sl) / efficiency
    return LinkBudget(
        distance_m=float(l_m),
        f_o_khz=f_o,
        band_khz=band,
        bandwidth_hz=bandwidth_hz,
        source_level_db=sl,
        tx_power_w=tx_power_w,
        bit_rate_bps=bandwidth_hz,
    )
