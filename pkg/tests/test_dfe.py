"""Adaptive decision feedback equalizer: taps, steps, and BER runs."""

import numpy as np
import pytest

from hydrolink._kernels import BACKEND
from hydrolink._kernels._dfe_py import dfe_run as dfe_run_py
from hydrolink.dfe import (
    BerResult,
    DfeConfig,
    DfeState,
    ber_sim,
    dfe_init,
    dfe_step,
    qfunc_ber,
    training_symbols_to_mse,
)
from hydrolink.seeding import derive_seed
from hydrolink.sparse import generate_sparse_channel

try:
    from hydrolink._kernels._dfe_cy import dfe_run as dfe_run_cy
except ImportError:
    dfe_run_cy = None


class TestInit:
    def test_unit_tap_estimate_gives_delta(self):
        state = dfe_init(channel_estimate=np.array([1.0 + 0.0j]))
        assert state.ff_taps[0] == pytest.approx(1.0)
        assert np.all(state.ff_taps[1:] == 0)
        assert np.all(state.fb_taps == 0)
        assert state.delay == 0

    def test_two_tap_postcursor_maps_into_feedback(self):
        # h = [1, 0.5]: cursor at tap 0, so ff = delta and the 0.5
        # post-cursor lands in fb[0] with its sign intact
        state = dfe_init(channel_estimate=np.array([1.0, 0.5], dtype=complex))
        assert state.ff_taps[0] == pytest.approx(1.0)
        assert state.fb_taps[0] == pytest.approx(0.5)
        assert np.all(state.fb_taps[1:] == 0)

    def test_cold_start_deterministic_per_seed(self):
        a = dfe_init(seed=4)
        b = dfe_init(seed=4)
        c = dfe_init(seed=5)
        assert np.array_equal(a.ff_taps, b.ff_taps)
        assert not np.array_equal(a.ff_taps, c.ff_taps)
        assert a.delay == (12 - 1) // 2

    def test_zero_energy_estimate_rejected(self):
        with pytest.raises(ValueError):
            dfe_init(channel_estimate=np.zeros(4, dtype=complex))

    @pytest.mark.parametrize("kwargs", [{"n_ff": 0}, {"n_fb": -1}, {"mu": 0.0}, {"mu": 1.0}])
    def test_invalid_shapes_and_mu(self, kwargs):
        base = dict(n_ff=4, n_fb=2, mu=0.01)
        base.update(kwargs)
        with pytest.raises(ValueError):
            dfe_init(**base)


class TestStep:
    def test_zero_input_zero_taps_is_inert(self):
        state = DfeState(
            ff_taps=np.zeros(3, dtype=complex),
            fb_taps=np.zeros(2, dtype=complex),
            step_mu=0.01,
        )
        decision, error = dfe_step(state, 0.0, desired=1.0)
        assert decision == 1.0  # slicer tie goes to +1
        assert error == pytest.approx(1.0)
        assert np.all(state.ff_taps == 0)  # conj(0) window, no movement

    def test_training_convergence_within_500_symbols(self):
        # scalar LMS on an ISI-free unit channel: the error contracts by
        # (1 - 2 mu) per symbol, so |e_500| ~ 0.98^500 ~ 4e-5
        rng = np.random.default_rng(0)
        state = DfeState(
            ff_taps=np.zeros(1, dtype=complex),
            fb_taps=np.zeros(0, dtype=complex),
            step_mu=0.01,
        )
        error = None
        for _ in range(500):
            d = float(2 * rng.integers(0, 2) - 1)
            _, error = dfe_step(state, d, desired=d)
        assert abs(error) < 1e-3

    def test_exact_inverse_taps_make_no_errors(self):
        # channel [1, 0.5] with ff = [1], fb = [0.5]: the feedback removes
        # the post-cursor exactly, so every decision is right and the error
        # stays zero (hence no tap drift even with nonzero mu)
        state = DfeState(
            ff_taps=np.array([1.0 + 0.0j]),
            fb_taps=np.array([0.5 + 0.0j]),
            step_mu=0.05,
            mode="decision_directed",
        )
        rng = np.random.default_rng(3)
        symbols = 2.0 * rng.integers(0, 2, size=400) - 1.0
        rx = np.convolve(symbols, [1.0, 0.5])[:400]
        for k in range(400):
            decision, error = dfe_step(state, rx[k])
            assert decision == symbols[k]
            assert abs(error) < 1e-12
        assert state.fb_taps[0] == pytest.approx(0.5)

    def test_vanishing_mu_leaves_taps_fixed(self):
        state = DfeState(
            ff_taps=np.array([0.3 + 0.1j, -0.2 + 0.0j]),
            fb_taps=np.array([0.1 + 0.0j]),
            step_mu=1e-12,
        )
        ff0 = state.ff_taps.copy()
        rng = np.random.default_rng(1)
        for _ in range(100):
            dfe_step(state, complex(rng.standard_normal(), rng.standard_normal()), desired=1.0)
        assert np.allclose(state.ff_taps, ff0, atol=1e-9)

    def test_training_requires_reference(self):
        state = dfe_init(seed=0)
        with pytest.raises(ValueError):
            dfe_step(state, 1.0 + 0.0j)


class TestKernels:
    def build_workload(self, n_sym=3000, seed=21):
        rng = np.random.default_rng(seed)
        symbols = (2.0 * rng.integers(0, 2, size=n_sym) - 1.0).astype(np.float64)
        h = np.array([0.9, 0.4 + 0.2j, -0.1j])
        x = np.convolve(symbols.astype(complex), h)[: n_sym + 2]
        x += 0.05 * (rng.standard_normal(x.size) + 1j * rng.standard_normal(x.size))
        ff = np.zeros(8, dtype=complex)
        ff[2] = 1.0
        fb = np.zeros(4, dtype=complex)
        return x, symbols, ff, fb

    @pytest.mark.skipif(dfe_run_cy is None, reason="compiled kernel unavailable")
    def test_backends_agree_exactly_on_decisions(self):
        x, symbols, ff, fb = self.build_workload()
        d_py, e_py = dfe_run_py(x.copy(), symbols, 500, ff.copy(), fb.copy(), 0.01, 2)
        d_cy, e_cy = dfe_run_cy(x.copy(), symbols, 500, ff.copy(), fb.copy(), 0.01, 2)
        assert np.array_equal(d_py, d_cy)
        assert np.allclose(e_py, e_cy, rtol=1e-12, atol=1e-14)

    @pytest.mark.skipif(dfe_run_cy is None, reason="compiled kernel unavailable")
    def test_backends_mutate_taps_identically(self):
        x, symbols, ff, fb = self.build_workload()
        ff_py, fb_py = ff.copy(), fb.copy()
        ff_cy, fb_cy = ff.copy(), fb.copy()
        dfe_run_py(x.copy(), symbols, 500, ff_py, fb_py, 0.01, 2)
        dfe_run_cy(x.copy(), symbols, 500, ff_cy, fb_cy, 0.01, 2)
        assert np.allclose(ff_py, ff_cy, rtol=1e-12, atol=1e-14)
        assert np.allclose(fb_py, fb_cy, rtol=1e-12, atol=1e-14)

    def test_kernel_agrees_with_public_step_api(self):
        # zero delay so neither side carries pre-decision history
        n_sym = 400
        rng = np.random.default_rng(8)
        symbols = (2.0 * rng.integers(0, 2, size=n_sym) - 1.0).astype(np.float64)
        x = symbols.astype(complex) + 0.1 * rng.standard_normal(n_sym)
        ff = np.zeros(5, dtype=complex)
        fb = np.zeros(3, dtype=complex)
        d_kernel, _ = dfe_run_py(x.copy(), symbols, 200, ff.copy(), fb.copy(), 0.01, 0)

        state = DfeState(ff_taps=ff.copy(), fb_taps=fb.copy(), step_mu=0.01)
        decisions = np.empty(n_sym)
        for s in range(n_sym):
            if s == 200:
                state.mode = "decision_directed"
            desired = symbols[s] if s < 200 else None
            decisions[s], _ = dfe_step(state, x[s], desired)
        assert np.array_equal(decisions, d_kernel)

    def test_backend_label_is_sane(self):
        assert BACKEND in ("cython", "python")


class TestBerSim:
    def test_noiseless_ideal_channel_is_error_free(self):
        res = ber_sim(np.array([1.0 + 0.0j]), 100.0, n_train=200, n_data=2000, seed=0)
        assert res.ber == 0.0
        assert res.n_errors == 0

    def test_curve_lengths_and_determinism(self):
        cfg = DfeConfig(mu=0.005)
        a = ber_sim(np.array([1.0, 0.2 + 0.1j]), 12.0, 500, 2000, config=cfg, seed=77)
        b = ber_sim(np.array([1.0, 0.2 + 0.1j]), 12.0, 500, 2000, config=cfg, seed=77)
        assert isinstance(a, BerResult)
        assert a.training_mse_curve.size == 500
        assert a.error_sq_curve.size == 2500
        assert a.ber == b.ber
        assert np.array_equal(a.error_sq_curve, b.error_sq_curve)

    def test_ber_nonincreasing_in_snr(self):
        cfg = DfeConfig(mu=0.001)
        bers = [
            ber_sim(np.array([1.0 + 0.0j]), snr, 5000, 20000, config=cfg, seed=42).ber
            for snr in (0.0, 4.0, 8.0, 12.0)
        ]
        assert all(b2 <= b1 for b1, b2 in zip(bers, bers[1:]))

    def test_training_mse_trailing_medians_descend(self):
        ch = generate_sparse_channel(32, 3, decay_tau_taps=8.0, seed=60)
        res = ber_sim(ch, 15.0, n_train=1200, n_data=1000, seed=61)
        blocks = res.training_mse_curve[:1200].reshape(12, 100)
        med = np.median(blocks, axis=1)
        # medians fall until the floor; allow jitter only at the floor level
        floor = med[-3:].mean()
        for a, b in zip(med, med[1:]):
            assert b <= a or (a < 3 * floor and b < 3 * floor)

    def test_small_data_run_rejected(self):
        with pytest.raises(ValueError):
            ber_sim(np.array([1.0 + 0.0j]), 10.0, 100, 500, seed=0)

    def test_zero_channel_rejected(self):
        with pytest.raises(ValueError):
            ber_sim(np.zeros(3, dtype=complex), 10.0, 100, 1000, seed=0)

    def test_qfunc_reference_points(self):
        assert qfunc_ber(8.0) == pytest.approx(1.909077740759931e-4, rel=1e-9)
        assert qfunc_ber(0.0) == pytest.approx(0.0786496035251426, rel=1e-9)


class TestCsInitialization:
    def test_estimate_seeded_run_converges_no_slower(self):
        ch = generate_sparse_channel(32, 3, decay_tau_taps=8.0, seed=14)
        base = dict(n_ff=12, n_fb=8, mu=0.01)
        run_seed = derive_seed(900, "mse-pair")
        cold = training_symbols_to_mse(ch, 15.0, 0.05, DfeConfig(**base), seed=run_seed)
        warm = training_symbols_to_mse(
            ch, 15.0, 0.05, DfeConfig(**base, init_estimate=ch.dense()), seed=run_seed
        )
        assert warm is not None
        assert cold is None or warm <= cold

    def test_unreachable_target_returns_none(self):
        ch = generate_sparse_channel(32, 3, seed=14)
        out = training_symbols_to_mse(ch, 0.0, 1e-9, seed=1, max_symbols=500)
        assert out is None
