"""Compound-Gaussian sea clutter and amplitude-ratio target detection.

Clutter frames hold ``cells x pulses`` complex returns.  Each cell draws
a texture (local power) from a Gamma distribution with shape ``nu`` and
unit mean, multiplying complex Gaussian speckle; the amplitude is then
K-distributed.  Small ``nu`` gives spiky clutter, large ``nu`` recovers
Rayleigh.  Frames are normalized to unit sample mean power.

Detection uses the ratio of the cell under test's mean amplitude to the
mean amplitude of nearby reference cells (guard cells excluded), with a
threshold calibrated to a target false-alarm probability on clutter-only
ratio samples.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .seeding import derive_seed

__all__ = [
    "ClutterFrame",
    "DetectorModel",
    "CalibrationError",
    "POLARIZATIONS",
    "gen_k_clutter",
    "inject_target",
    "raa_feature",
    "clutter_raa_samples",
    "calibrate_threshold",
    "detect",
    "roc_eval",
    "save_frame",
    "load_frame",
]

POLARIZATIONS = ("HH", "HV", "VH", "VV")

_MAGIC = b"KCF1"
_HEADER = struct.Struct("<4sIII")


class CalibrationError(ValueError):
    """Not enough clutter samples to calibrate the requested Pfa."""


@dataclass(frozen=True)
class ClutterFrame:
    """One coherent dwell of sea clutter (or clutter plus target)."""

    data: np.ndarray
    shape_nu: float
    seed: int | None = None
    polarization: str = "HH"

    def __post_init__(self) -> None:
        if self.data.ndim != 2 or min(self.data.shape) < 1:
            raise ValueError("frame data must be a non-empty 2-D array")
        if self.shape_nu <= 0:
            raise ValueError("shape_nu must be positive")
        if self.polarization not in POLARIZATIONS:
            raise ValueError(f"polarization must be one of {POLARIZATIONS}")

    @property
    def cells(self) -> int:
        return self.data.shape[0]

    @property
    def pulses(self) -> int:
        return self.data.shape[1]


def _speckle(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _k_batch(rng: np.random.Generator, n_frames: int, cells: int, pulses: int, nu: float) -> np.ndarray:
    """Batch of normalized K-clutter frames, shape (n_frames, cells, pulses)."""
    texture = rng.gamma(shape=nu, scale=1.0 / nu, size=(n_frames, cells, 1))
    data = np.sqrt(texture) * _speckle(rng, (n_frames, cells, pulses))
    power = np.mean(np.abs(data) ** 2, axis=(1, 2), keepdims=True)
    return data / np.sqrt(power)


def gen_k_clutter(
    cells: int = 14,
    pulses: int = 2**17,
    nu: float = 5.0,
    seed: int | None = None,
    polarization: str = "HH",
) -> ClutterFrame:
    """Draw one clutter-only frame, normalized to unit mean power."""
    if cells < 1 or pulses < 1:
        raise ValueError("cells and pulses must be >= 1")
    if nu <= 0:
        raise ValueError("nu must be positive")
    rng = np.random.default_rng(seed)
    data = _k_batch(rng, 1, cells, pulses, nu)[0]
    return ClutterFrame(data=data, shape_nu=nu, seed=seed, polarization=polarization)


def inject_target(
    frame: ClutterFrame,
    cell: int,
    scr_db: float,
    seed: int | None = None,
) -> ClutterFrame:
    """Add a constant-amplitude return at one cell; returns a new frame.

    ``scr_db`` is the signal-to-clutter ratio against the frame's unit
    mean clutter power, so the injected cell's expected power becomes
    ``1 + 10^(scr/10)``.  The target phase is drawn once per injection.
    """
    if not 0 <= cell < frame.cells:
        raise ValueError(f"cell {cell} outside frame with {frame.cells} cells")
    if np.isnan(scr_db):
        raise ValueError("scr_db must not be NaN")
    amplitude = 10.0 ** (scr_db / 20.0)
    rng = np.random.default_rng(seed)
    phase = np.exp(2j * np.pi * rng.random())
    data = frame.data.copy()
    data[cell] = data[cell] + amplitude * phase
    return ClutterFrame(
        data=data, shape_nu=frame.shape_nu, seed=frame.seed, polarization=frame.polarization
    )


def _reference_cells(cells: int, cut: int, guard: int, n_ref: int) -> np.ndarray:
    """Indices of the ``n_ref`` nearest non-guard cells, split across both
    sides of the cell under test where possible."""
    if not 0 <= cut < cells:
        raise ValueError(f"cut cell {cut} outside 0..{cells - 1}")
    if guard < 0 or n_ref < 1:
        raise ValueError("guard must be >= 0 and n_ref >= 1")
    chosen: list[int] = []
    dist = guard + 1
    while len(chosen) < n_ref and dist < cells:
        left = cut - dist
        right = cut + dist
        if left >= 0:
            chosen.append(left)
        if right < cells and len(chosen) < n_ref:
            chosen.append(right)
        dist += 1
    if len(chosen) < n_ref:
        raise ValueError(
            f"only {len(chosen)} reference cells available for cut={cut} "
            f"(cells={cells}, guard={guard}, n_ref={n_ref})"
        )
    return np.asarray(sorted(chosen), dtype=int)


def raa_feature(
    frame: ClutterFrame | np.ndarray,
    cut: int,
    guard: int = 1,
    n_ref: int = 8,
) -> float:
    """Ratio of mean amplitude at the cell under test to the reference mean."""
    data = frame.data if isinstance(frame, ClutterFrame) else np.asarray(frame)
    cells = data.shape[0]
    ref = _reference_cells(cells, cut, guard, n_ref)
    amp = np.mean(np.abs(data), axis=1)
    denom = float(np.mean(amp[ref]))
    if denom == 0.0:
        raise ValueError("reference cells have zero mean amplitude")
    return float(amp[cut] / denom)


def _raa_of_batch(batch: np.ndarray, cut: int, guard: int, n_ref: int) -> np.ndarray:
    ref = _reference_cells(batch.shape[1], cut, guard, n_ref)
    amp = np.mean(np.abs(batch), axis=2)
    return amp[:, cut] / np.mean(amp[:, ref], axis=1)


def clutter_raa_samples(
    n_samples: int,
    nu: float,
    seed: int,
    cells: int = 14,
    pulses: int = 64,
    cut: int | None = None,
    guard: int = 1,
    n_ref: int = 8,
    chunk: int = 20_000,
) -> np.ndarray:
    """Clutter-only RAA values, one per independently drawn frame.

    Frames are generated in chunks so large Monte-Carlo runs stay within
    memory; chunk boundaries do not affect the stream (each chunk has its
    own derived seed).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if cut is None:
        cut = cells // 2
    out = np.empty(n_samples)
    done = 0
    idx = 0
    while done < n_samples:
        take = min(chunk, n_samples - done)
        rng = np.random.default_rng(derive_seed(seed, f"clutter-raa-nu{nu}", idx))
        batch = _k_batch(rng, take, cells, pulses, nu)
        out[done : done + take] = _raa_of_batch(batch, cut, guard, n_ref)
        done += take
        idx += 1
    return out


@dataclass(frozen=True)
class DetectorModel:
    """Calibrated amplitude-ratio detector."""

    threshold: float
    target_pfa: float
    guard_cells: int
    reference_cells: int
    n_calibration: int

    def __post_init__(self) -> None:
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")
        if not 0.0 < self.target_pfa < 1.0:
            raise ValueError("target_pfa must be in (0, 1)")
        if self.guard_cells < 0 or self.reference_cells < 1:
            raise ValueError("invalid guard/reference configuration")


def calibrate_threshold(
    clutter: np.ndarray | list[ClutterFrame],
    target_pfa: float,
    cut: int | None = None,
    guard: int = 1,
    n_ref: int = 8,
) -> DetectorModel:
    """Set the detection threshold from clutter-only data.

    ``clutter`` is either an array of RAA samples or a list of clutter
    frames (one RAA per frame, taken at ``cut``, default centre cell).
    The threshold is the order statistic whose expected exceedance
    probability equals ``target_pfa``; at least ``ceil(10 / target_pfa)``
    samples are required.
    """
    if not 0.0 < target_pfa < 1.0:
        raise ValueError("target_pfa must be in (0, 1)")
    if isinstance(clutter, np.ndarray):
        samples = np.asarray(clutter, dtype=float)
    else:
        samples = np.empty(len(clutter))
        for i, frame in enumerate(clutter):
            c = frame.cells // 2 if cut is None else cut
            samples[i] = raa_feature(frame, c, guard, n_ref)
    required = int(np.ceil(10.0 / target_pfa))
    if samples.size < required:
        raise CalibrationError(
            f"need at least {required} clutter RAA samples for "
            f"target_pfa={target_pfa}, got {samples.size}"
        )
    n = samples.size
    k = int(np.ceil((n + 1) * (1.0 - target_pfa)))
    k = min(k, n)
    threshold = float(np.sort(samples)[k - 1])
    return DetectorModel(
        threshold=threshold,
        target_pfa=target_pfa,
        guard_cells=guard,
        reference_cells=n_ref,
        n_calibration=n,
    )


def detect(frame: ClutterFrame, cut: int, model: DetectorModel) -> bool:
    """Target present at ``cut``?  Strict comparison: ties say no."""
    value = raa_feature(frame, cut, model.guard_cells, model.reference_cells)
    return value > model.threshold


def roc_eval(
    nu: float,
    scr_list: list[float],
    target_pfa: float = 1e-3,
    trials: int = 2000,
    seed: int = 0,
    cells: int = 14,
    pulses: int = 64,
    cut: int | None = None,
    guard: int = 1,
    n_ref: int = 8,
    n_calibration: int | None = None,
) -> list[tuple[float, float, float]]:
    """Detection probability versus SCR at a fixed calibrated threshold.

    Calibrates a fresh detector, then reuses one set of clutter draws and
    target phases across all SCR points (common random numbers), so the
    estimated Pd curve is monotone in SCR up to genuine detector
    behaviour.  Returns rows ``(scr_db, empirical_pd, empirical_pfa)``
    where the Pfa estimate comes from the same clutter-only trials.
    """
    if trials < 1000:
        raise ValueError("trials must be at least 1000")
    if cut is None:
        cut = cells // 2
    if n_calibration is None:
        n_calibration = int(np.ceil(50.0 / target_pfa))
    cal = clutter_raa_samples(
        n_calibration, nu, derive_seed(seed, "roc-cal"), cells, pulses, cut, guard, n_ref
    )
    model = calibrate_threshold(cal, target_pfa, cut, guard, n_ref)

    rng = np.random.default_rng(derive_seed(seed, "roc-trials"))
    batch = _k_batch(rng, trials, cells, pulses, nu)
    phases = np.exp(2j * np.pi * rng.random(trials))
    ref = _reference_cells(cells, cut, guard, n_ref)
    ref_amp = np.mean(np.abs(batch[:, ref, :]), axis=(1, 2))
    clutter_cut = batch[:, cut, :]
    pfa_emp = float(np.mean(np.mean(np.abs(clutter_cut), axis=1) / ref_amp > model.threshold))

    rows = []
    for scr_db in scr_list:
        amplitude = 10.0 ** (scr_db / 20.0)
        cut_amp = np.mean(np.abs(clutter_cut + amplitude * phases[:, None]), axis=1)
        pd = float(np.mean(cut_amp / ref_amp > model.threshold))
        rows.append((float(scr_db), pd, pfa_emp))
    return rows


def save_frame(path, frame: ClutterFrame) -> None:
    """Write a frame as little-endian interleaved complex float32.

    Layout: 16-byte header (magic ``KCF1``, cells, pulses, flags) followed
    by row-major cell data.  The flags word stores the polarization index
    in its low bits.
    """
    flags = POLARIZATIONS.index(frame.polarization)
    header = _HEADER.pack(_MAGIC, frame.cells, frame.pulses, flags)
    payload = np.ascontiguousarray(frame.data, dtype="<c8").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_frame(path, shape_nu: float = 5.0) -> ClutterFrame:
    """Read a frame written by :func:`save_frame`.

    The file does not carry the generating shape parameter; pass it via
    ``shape_nu`` when known.
    """
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError("truncated frame header")
        magic, cells, pulses, flags = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ValueError(f"bad frame magic {magic!r}")
        payload = fh.read()
    expected = cells * pulses * 8
    if len(payload) != expected:
        raise ValueError(f"frame payload has {len(payload)} bytes, expected {expected}")
    data = np.frombuffer(payload, dtype="<c8").reshape(cells, pulses).astype(np.complex128)
    pol = POLARIZATIONS[flags & 0x3]
    return ClutterFrame(data=data, shape_nu=shape_nu, polarization=pol)
