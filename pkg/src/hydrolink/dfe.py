"""Adaptive decision-feedback equalization for BPSK streams.

The equalizer combines a feedforward filter over received samples with a
feedback filter over past decisions, adapted by LMS with step ``mu``
(update constant ``2 mu``, so an isolated unit-power tap converges by a
factor ``1 - 2 mu`` per symbol).  A channel estimate, e.g. from
compressed pilot measurements, can seed the taps: the feedforward part
becomes a matched filter to the strongest tap cluster and the feedback
taps cancel the trailing post-cursor response.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import BACKEND, dfe_run
from .seeding import derive_seed
from .sparse import SparseChannel

__all__ = [
    "BACKEND",
    "DfeConfig",
    "DfeState",
    "BerResult",
    "dfe_init",
    "dfe_step",
    "ber_sim",
    "training_symbols_to_mse",
    "qfunc_ber",
]


@dataclass
class DfeConfig:
    """Equalizer hyperparameters for simulation runs."""

    n_ff: int = 12
    n_fb: int = 8
    mu: float = 0.01
    delay: int | None = None
    init_estimate: np.ndarray | None = None


@dataclass
class DfeState:
    """Mutable equalizer state: taps plus input/decision history.

    ``mode`` is either ``"training"`` (errors computed against a provided
    reference symbol) or ``"decision_directed"`` (against the slicer
    output).  The window and decision history are newest-first.
    """

    ff_taps: np.ndarray
    fb_taps: np.ndarray
    step_mu: float
    mode: str = "training"
    delay: int = 0
    window: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    past_decisions: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        if self.ff_taps.size < 1:
            raise ValueError("need at least one feedforward tap")
        if self.fb_taps.size < 0:
            raise ValueError("feedback tap count must be >= 0")
        if not 0.0 < self.step_mu < 1.0:
            raise ValueError(f"step_mu must be in (0, 1), got {self.step_mu}")
        if self.mode not in ("training", "decision_directed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.window.size == 0:
            self.window = np.zeros(self.ff_taps.size, dtype=complex)
        if self.past_decisions.size == 0 and self.fb_taps.size > 0:
            self.past_decisions = np.zeros(self.fb_taps.size)


def dfe_init(
    n_ff: int = 12,
    n_fb: int = 8,
    mu: float = 0.01,
    channel_estimate: np.ndarray | SparseChannel | None = None,
    seed: int | None = None,
    delay: int | None = None,
) -> DfeState:
    """Build an equalizer, cold or seeded from a channel estimate.

    Cold start draws small random taps.  With an estimate ``h`` the
    feedforward taps become the conjugate time-reversed strongest-tap
    cluster (normalized so the cursor gain is one), the decision delay
    lands on the strongest tap, and the feedback taps copy the trailing
    post-cursor response of the partially equalized channel.
    """
    if n_ff < 1:
        raise ValueError("n_ff must be >= 1")
    if n_fb < 0:
        raise ValueError("n_fb must be >= 0")
    if channel_estimate is None:
        rng = np.random.default_rng(seed)
        scale = 1e-2
        ff = scale * (rng.standard_normal(n_ff) + 1j * rng.standard_normal(n_ff)) / math.sqrt(2)
        fb = scale * (rng.standard_normal(n_fb) + 1j * rng.standard_normal(n_fb)) / math.sqrt(2)
        chosen_delay = (n_ff - 1) // 2 if delay is None else delay
        return DfeState(ff_taps=ff, fb_taps=fb, step_mu=mu, delay=chosen_delay)

    h = (
        channel_estimate.dense()
        if isinstance(channel_estimate, SparseChannel)
        else np.asarray(channel_estimate, dtype=complex)
    )
    if h.size == 0 or not np.any(np.abs(h) > 0):
        raise ValueError("channel estimate has no energy")
    p = int(np.argmax(np.abs(h)))
    cluster = h[max(0, p - n_ff + 1) : p + 1]
    energy = float(np.sum(np.abs(cluster) ** 2))
    ff = np.zeros(n_ff, dtype=complex)
    ff[: cluster.size] = np.conj(cluster[::-1]) / energy
    combined = np.convolve(h, ff)
    fb = np.zeros(n_fb, dtype=complex)
    post = combined[p + 1 : p + 1 + n_fb]
    fb[: post.size] = post
    # the matched-filter cursor sits on the strongest tap, so decisions
    # must lag the input by exactly that many samples
    chosen_delay = p if delay is None else delay
    return DfeState(ff_taps=ff, fb_taps=fb, step_mu=mu, delay=chosen_delay)


def dfe_step(state: DfeState, sample: complex, desired: float | None = None) -> tuple[float, complex]:
    """Process one received sample; returns ``(decision, error)``.

    Pushes the sample into the input window, forms the filter output,
    slices a BPSK decision, and applies one LMS update.  In training mode
    ``desired`` must carry the reference symbol aligned with the
    configured latency.
    """
    if state.mode == "training" and desired is None:
        raise ValueError("training mode requires a desired symbol")
    state.window = np.roll(state.window, 1)
    state.window[0] = sample
    z = np.dot(state.ff_taps, state.window)
    if state.fb_taps.size:
        z = z - np.dot(state.fb_taps, state.past_decisions)
    decision = 1.0 if z.real >= 0.0 else -1.0
    ref = desired if state.mode == "training" else decision
    error = ref - z
    g = 2.0 * state.step_mu * error
    state.ff_taps = state.ff_taps + g * np.conj(state.window)
    if state.fb_taps.size:
        state.fb_taps = state.fb_taps - g * state.past_decisions
        state.past_decisions = np.roll(state.past_decisions, 1)
        state.past_decisions[0] = decision
    return decision, error


@dataclass(frozen=True)
class BerResult:
    """Outcome of one equalized transmission."""

    ber: float
    n_errors: int
    n_data: int
    training_mse_curve: np.ndarray
    error_sq_curve: np.ndarray
    delay: int
    backend: str


def _received_stream(
    h: np.ndarray, symbols: np.ndarray, snr_db: float, delay: int, rng: np.random.Generator
) -> np.ndarray:
    """FIR channel output plus complex AWGN, extended by ``delay`` samples."""
    n_total = symbols.size + delay
    x = np.convolve(symbols.astype(complex), h)[:n_total]
    if x.size < n_total:
        x = np.concatenate([x, np.zeros(n_total - x.size, dtype=complex)])
    rx_power = float(np.sum(np.abs(h) ** 2))
    noise_var = rx_power / (10.0 ** (snr_db / 10.0))
    w = rng.standard_normal(n_total) + 1j * rng.standard_normal(n_total)
    return x + math.sqrt(noise_var / 2.0) * w


def ber_sim(
    channel: np.ndarray | SparseChannel,
    snr_db: float,
    n_train: int,
    n_data: int,
    config: DfeConfig | None = None,
    seed: int = 0,
) -> BerResult:
    """BPSK bit error rate through the adaptive equalizer.

    Random +-1 symbols pass through the FIR ``channel`` with complex AWGN
    at ``snr_db`` (received signal power over noise power).  The first
    ``n_train`` symbols adapt against the known sequence, the remaining
    ``n_data`` run decision-directed; BER counts only the data portion.
    """
    if config is None:
        config = DfeConfig()
    if n_train < 0:
        raise ValueError("n_train must be >= 0")
    if n_data < 1000:
        raise ValueError("n_data must be at least 1000 for a meaningful BER")
    h = (
        channel.dense()
        if isinstance(channel, SparseChannel)
        else np.asarray(channel, dtype=complex)
    )
    if not np.any(np.abs(h) > 0):
        raise ValueError("channel has no energy")
    state = dfe_init(
        config.n_ff,
        config.n_fb,
        config.mu,
        channel_estimate=config.init_estimate,
        seed=derive_seed(seed, "dfe-init"),
        delay=config.delay,
    )
    n_sym = n_train + n_data
    rng = np.random.default_rng(derive_seed(seed, "dfe-sim"))
    symbols = (2.0 * rng.integers(0, 2, size=n_sym) - 1.0).astype(np.float64)
    x = _received_stream(h, symbols, snr_db, state.delay, rng)
    ff = np.ascontiguousarray(state.ff_taps, dtype=np.complex128)
    fb = np.ascontiguousarray(state.fb_taps, dtype=np.complex128)
    decisions, err2 = dfe_run(x, symbols, n_train, ff, fb, config.mu, state.delay)
    data = slice(n_train, n_sym)
    n_errors = int(np.count_nonzero(decisions[data] != symbols[data]))
    return BerResult(
        ber=n_errors / n_data,
        n_errors=n_errors,
        n_data=n_data,
        training_mse_curve=err2[:n_train],
        error_sq_curve=err2,
        delay=state.delay,
        backend=BACKEND,
    )


def training_symbols_to_mse(
    channel: np.ndarray | SparseChannel,
    snr_db: float,
    target_mse: float,
    config: DfeConfig | None = None,
    seed: int = 0,
    max_symbols: int = 4000,
    window: int = 25,
) -> int | None:
    """Training symbols needed before the smoothed MSE reaches a target.

    The per-symbol squared error is averaged over a trailing ``window``;
    returns the first symbol count at which that average is at or below
    ``target_mse``, or None within ``max_symbols``.
    """
    if target_mse <= 0:
        raise ValueError("target_mse must be positive")
    result = ber_sim(channel, snr_db, n_train=max_symbols, n_data=1000, config=config, seed=seed)
    curve = result.training_mse_curve
    if curve.size < window:
        return None
    kernel = np.ones(window) / window
    smoothed = np.convolve(curve, kernel, mode="valid")
    hits = np.nonzero(smoothed <= target_mse)[0]
    if hits.size == 0:
        return None
    return int(hits[0]) + window


def qfunc_ber(snr_db: float) -> float:
    """Textbook BPSK error rate ``Q(sqrt(2 SNR))`` for coherent detection."""
    snr = 10.0 ** (snr_db / 10.0)
    return 0.5 * math.erfc(math.sqrt(snr))
