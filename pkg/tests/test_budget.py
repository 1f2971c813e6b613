"""Source level, transmit power, and the 1 km / 100 km contrast."""

import numpy as np
import pytest

from hydrolink.budget import (
    DEFAULT_EFFICIENCY,
    acoustic_power_watts,
    link_budget,
    required_source_level,
)
from hydrolink.channel import DEFAULT_GRID, Environment, FrequencyGrid, band_3db

ENV = Environment()


class TestAcousticPower:
    def test_conversion_anchor(self):
        assert acoustic_power_watts(170.8) == pytest.approx(1.0, rel=1e-12)

    def test_decades(self):
        assert acoustic_power_watts(180.8) == pytest.approx(10.0, rel=1e-12)
        assert acoustic_power_watts(140.8) == pytest.approx(1e-3, rel=1e-12)


class TestRequiredSourceLevel:
    def test_snr_shifts_additively(self):
        band = band_3db(1000.0, ENV)
        sl10 = required_source_level(1000.0, ENV, band, 10.0)
        sl20 = required_source_level(1000.0, ENV, band, 20.0)
        assert sl20 - sl10 == pytest.approx(10.0, abs=1e-12)

    def test_doubling_flat_band_adds_3db(self):
        # around 20 kHz at 1 m the AN product is locally flat, so widening
        # the integration band from 0.4 to 0.8 kHz adds 10 log10(2) dB
        narrow = required_source_level(1.0, ENV, (20.0, 20.4), 10.0)
        wide = required_source_level(1.0, ENV, (20.0, 20.8), 10.0)
        assert wide - narrow == pytest.approx(10.0 * np.log10(2.0), abs=0.1)

    def test_frozen_1km_value(self):
        band = band_3db(1000.0, ENV)
        sl = required_source_level(1000.0, ENV, band, 10.0)
        assert sl == pytest.approx(128.06967922192857, rel=1e-12)

    def test_band_without_grid_support_rejected(self):
        # no two grid points fall inside a band this thin
        with pytest.raises(ValueError):
            required_source_level(1000.0, ENV, (20.01, 20.02), 10.0)


class TestLinkBudget:
    def test_1km_at_20db(self):
        b = link_budget(1000.0, ENV, snr_db=20.0)
        assert b.bandwidth_hz >= 10_000.0
        assert b.tx_power_w < 1.0
        assert b.bit_rate_bps == b.bandwidth_hz
        assert b.source_level_db == pytest.approx(138.0697, abs=1e-3)

    def test_100km_at_20db(self):
        b1 = link_budget(1000.0, ENV, snr_db=20.0)
        b100 = link_budget(100_000.0, ENV, snr_db=20.0)
        assert 300.0 <= b100.bandwidth_hz <= 3000.0
        assert b100.tx_power_w >= 30.0 * b1.tx_power_w
        # order of magnitude of the 30 W regime
        assert 3.0 <= b100.tx_power_w <= 300.0

    def test_power_strictly_increasing_in_distance(self):
        powers = [link_budget(1000.0 * d, ENV, 20.0).tx_power_w for d in (1, 10, 50, 100)]
        assert np.all(np.diff(powers) > 0)

    def test_superlinear_growth_at_the_upper_range(self):
        b50 = link_budget(50_000.0, ENV, 20.0)
        b100 = link_budget(100_000.0, ENV, 20.0)
        dlog = np.log(100_000.0) - np.log(50_000.0)
        power_slope = (np.log(b100.tx_power_w) - np.log(b50.tx_power_w)) / dlog
        inv_bw_slope = (np.log(1.0 / b100.bandwidth_hz) - np.log(1.0 / b50.bandwidth_hz)) / dlog
        assert power_slope > 1.0
        assert inv_bw_slope > 1.0

    def test_grid_refinement_stability(self):
        fine = FrequencyGrid(f_min_khz=0.1, f_max_khz=200.0, step_khz=0.05)
        sl_coarse = link_budget(100_000.0, ENV, 10.0).source_level_db
        sl_fine = link_budget(100_000.0, ENV, 10.0, grid=fine).source_level_db
        assert abs(sl_fine - sl_coarse) <= 0.2

    def test_efficiency_scales_electrical_power(self):
        full = link_budget(1000.0, ENV, 20.0, efficiency=1.0)
        tenth = link_budget(1000.0, ENV, 20.0, efficiency=0.1)
        assert tenth.tx_power_w == pytest.approx(10.0 * full.tx_power_w, rel=1e-12)
        assert DEFAULT_EFFICIENCY == 0.1

    @pytest.mark.parametrize("eff", [0.0, -0.5, 1.5])
    def test_bad_efficiency_rejected(self, eff):
        with pytest.raises(ValueError):
            link_budget(1000.0, ENV, 20.0, efficiency=eff)

    def test_bit_rate_matches_bandwidth_invariant(self):
        for d in (500.0, 5000.0, 50_000.0):
            b = link_budget(d, ENV)
            assert b.bit_rate_bps == b.bandwidth_hz
            assert b.band_khz[0] <= b.f_o_khz <= b.band_khz[1]
