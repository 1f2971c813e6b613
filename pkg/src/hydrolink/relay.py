"""Multi-hop relay planning over equal-length acoustic hops.

A chain of ``n`` relays splits total distance ``D`` into ``n + 1`` hops of
``d = D / (n + 1)`` metres.  Packets are store-and-forwarded, so the chain
delay is one propagation time plus ``n + 1`` packet transmission times,
and each hop costs both transmit and receive energy for the duration of
the packet.

Also provides a feasibility table of carrier media for underwater use
(acoustic, EM, optical, magnetic induction) and a rule-based selection
over it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .budget import DEFAULT_EFFICIENCY, LinkBudget, link_budget
from .channel import DEFAULT_GRID, Environment, FrequencyGrid

__all__ = [
    "ChainScenario",
    "HopMetrics",
    "RelayChainReport",
    "MediumSpec",
    "MediumSelection",
    "MEDIA",
    "hop_metrics",
    "chain_delay",
    "chain_energy",
    "sweep_relays",
    "midpoint_comparison",
    "find_relay_threshold",
    "energy_curve_shape",
    "select_medium",
]


@dataclass(frozen=True)
class ChainScenario:
    """End-to-end relay scenario.

    ``packet_bits`` defaults to a short 32-bit frame so that transmission
    time stays negligible against propagation delay across the whole 1 to
    100 km sweep range.
    """

    total_distance_m: float
    n_relays: int = 0
    packet_bits: float = 32.0
    snr_db: float = 10.0
    rx_power_w: float = 2.0
    sound_speed_mps: float = 1500.0
    env: Environment = field(default_factory=Environment)

    def __post_init__(self) -> None:
        if self.total_distance_m < 1.0:
            raise ValueError("total distance must be >= 1 m")
        if self.n_relays < 0 or self.n_relays != int(self.n_relays):
            raise ValueError("n_relays must be a non-negative integer")
        if self.packet_bits <= 0:
            raise ValueError("packet_bits must be positive")
        if self.rx_power_w < 0:
            raise ValueError("rx_power_w must be non-negative")
        if self.sound_speed_mps <= 0:
            raise ValueError("sound speed must be positive")

    @property
    def hop_distance_m(self) -> float:
        return self.total_distance_m / (self.n_relays + 1)


@dataclass(frozen=True)
class HopMetrics:
    """Per-hop figures: transmission time, one-hop latency, energy."""

    budget: LinkBudget
    t_tx_s: float
    delay_s: float
    energy_j: float


@dataclass(frozen=True)
class RelayChainReport:
    """Sweep of one scenario over relay counts 0..n_max."""

    scenario: ChainScenario
    n_relays: np.ndarray
    hop_distance_m: np.ndarray
    delay_s: np.ndarray
    energy_j: np.ndarray
    hop_tx_power_w: np.ndarray
    hop_bit_rate_bps: np.ndarray


def hop_metrics(
    d_m: float,
    env: Environment,
    snr_db: float,
    packet_bits: float,
    rx_power_w: float,
    sound_speed_mps: float = 1500.0,
    grid: FrequencyGrid = DEFAULT_GRID,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> HopMetrics:
    """Metrics of a single hop of ``d_m`` metres."""
    b = link_budget(d_m, env, snr_db, grid, efficiency)
    t_tx = packet_bits / b.bit_rate_bps
    delay = d_m / sound_speed_mps + t_tx
    energy = (b.tx_power_w + rx_power_w) * t_tx
    return HopMetrics(budget=b, t_tx_s=t_tx, delay_s=delay, energy_j=energy)


def _hop(sc: ChainScenario, grid: FrequencyGrid, efficiency: float) -> HopMetrics:
    return hop_metrics(
        sc.hop_distance_m,
        sc.env,
        sc.snr_db,
        sc.packet_bits,
        sc.rx_power_w,
        sc.sound_speed_mps,
        grid,
        efficiency,
    )


def chain_delay(
    sc: ChainScenario,
    grid: FrequencyGrid = DEFAULT_GRID,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> float:
    """End-to-end delay: total propagation plus (n+1) store-and-forward
    transmission times."""
    hop = _hop(sc, grid, efficiency)
    return sc.total_distance_m / sc.sound_speed_mps + (sc.n_relays + 1) * hop.t_tx_s


def chain_energy(
    sc: ChainScenario,
    grid: FrequencyGrid = DEFAULT_GRID,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> float:
    """Total transmit plus receive energy across all hops, in joules."""
    hop = _hop(sc, grid, efficiency)
    return (sc.n_relays + 1) * hop.energy_j


def sweep_relays(
    sc: ChainScenario,
    n_max: int = 10,
    grid: FrequencyGrid = DEFAULT_GRID,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> RelayChainReport:
    """Evaluate the chain for every relay count 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    rows = []
    for n in range(n_max + 1):
        sc_n = replace(sc, n_relays=n)
        hop = _hop(sc_n, grid, efficiency)
        rows.append(
            (
                n,
                sc_n.hop_distance_m,
                sc_n.total_distance_m / sc_n.sound_speed_mps + (n + 1) * hop.t_tx_s,
                (n + 1) * hop.energy_j,
                hop.budget.tx_power_w,
                hop.budget.bit_rate_bps,
            )
        )
    cols = [np.asarray(c) for c in zip(*rows)]
    return RelayChainReport(
        scenario=sc,
        n_relays=cols[0].astype(int),
        hop_distance_m=cols[1],
        delay_s=cols[2],
        energy_j=cols[3],
        hop_tx_power_w=cols[4],
        hop_bit_rate_bps=cols[5],
    )


def midpoint_comparison(
    sc: ChainScenario,
    grid: FrequencyGrid = DEFAULT_GRID,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> tuple[float, float]:
    """Single midpoint relay versus direct transmission.

    Returns ``(energy_reduction_pct, delay_increase_pct)`` where the
    reduction is ``100 * (1 - E(1)/E(0))`` and the increase is
    ``100 * (delay(1) - delay(0)) / delay(0)``.
    """
    direct = replace(sc, n_relays=0)
    relayed = replace(sc, n_relays=1)
    e0 = chain_energy(direct, grid, efficiency)
    e1 = chain_energy(relayed, grid, efficiency)
    d0 = chain_delay(direct, grid, efficiency)
    d1 = chain_delay(relayed, grid, efficiency)
    return 100.0 * (1.0 - e1 / e0), 100.0 * (d1 - d0) / d0


def _relaying_helps(sc: ChainScenario, n_max: int, grid, efficiency) -> bool:
    report = sweep_relays(sc, n_max, grid, efficiency)
    return int(np.argmin(report.energy_j)) >= 1


def find_relay_threshold(
    sc: ChainScenario,
    d_lo_m: float = 1_000.0,
    d_hi_m: float = 100_000.0,
    tol_m: float = 250.0,
    n_max: int = 10,
    grid: FrequencyGrid = DEFAULT_GRID,
    efficiency: float = DEFAULT_EFFICIENCY,
) -> float:
    """Bisect for the distance above which relaying becomes energy-optimal.

    Requires the predicate "argmin over n of chain energy is >= 1" to be
    false at ``d_lo_m`` and true at ``d_hi_m``.
    """
    lo_sc = replace(sc, total_distance_m=d_lo_m)
    hi_sc = replace(sc, total_distance_m=d_hi_m)
    if _relaying_helps(lo_sc, n_max, grid, efficiency):
        raise ValueError(f"relaying already optimal at d_lo={d_lo_m} m")
    if not _relaying_helps(hi_sc, n_max, grid, efficiency):
        raise ValueError(f"relaying not optimal even at d_hi={d_hi_m} m")
    lo, hi = d_lo_m, d_hi_m
    while hi - lo > tol_m:
        mid = 0.5 * (lo + hi)
        if _relaying_helps(replace(sc, total_distance_m=mid), n_max, grid, efficiency):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def energy_curve_shape(energy_j: np.ndarray, rel_tol: float = 1e-9) -> str:
    """Classify an energy-versus-relays curve.

    Returns ``"monotone"`` (non-decreasing or non-increasing throughout),
    ``"unimodal"`` (one sign change, decreasing then increasing), or
    ``"irregular"``.
    """
    e = np.asarray(energy_j, dtype=float)
    if e.size < 3:
        return "monotone"
    diff = np.diff(e)
    tol = rel_tol * float(np.abs(e).max())
    sign = np.where(diff > tol, 1, np.where(diff < -tol, -1, 0))
    sign = sign[sign != 0]
    if sign.size == 0 or np.all(sign == sign[0]):
        return "monotone"
    flips = np.count_nonzero(np.diff(sign) != 0)
    if flips == 1 and sign[0] == -1:
        return "unimodal"
    return "irregular"


# --- carrier medium feasibility -------------------------------------------

@dataclass(frozen=True)
class MediumSpec:
    """One row of the carrier-medium comparison table."""

    name: str
    propagation_speed_mps: float
    rate_class: str  # "Kbps" | "Mbps" | "Gbps"
    range_limit_m: float
    scenarios: tuple[str, ...]


_SPEED_OF_LIGHT_WATER = 3.33e7  # m/s, EM-type carriers in water

MEDIA: tuple[MediumSpec, ...] = (
    MediumSpec(
        "EM",
        _SPEED_OF_LIGHT_WATER,
        "Mbps",
        10.0,
        ("shallow water", "localized network", "cross air-water interface"),
    ),
    MediumSpec(
        "Acoustic",
        1500.0,
        "Kbps",
        20_000.0,
        ("long range", "small volume data"),
    ),
    MediumSpec(
        "Optical",
        _SPEED_OF_LIGHT_WATER,
        "Gbps",
        100.0,
        ("clear water", "line of sight", "real-time"),
    ),
    MediumSpec(
        "MI",
        _SPEED_OF_LIGHT_WATER,
        "Mbps",
        100.0,
        ("oil reservoirs", "water pipelines"),
    ),
)

_RATE_ORDER = {"Kbps": 1, "Mbps": 2, "Gbps": 3}

_CONTEXTS = ("above_surface", "air_sea_boundary", "underwater", "clear_water_los")

# Media usable per context.  Above the surface and across the interface
# EM propagates with negligible absorption, so its underwater range limit
# does not apply there.  Optical needs a clear line of sight; magnetic
# induction is confined to its engineered scenarios but works through
# turbid water at short range.
_APPLICABLE = {
    "above_surface": ("EM",),
    "air_sea_boundary": ("EM",),
    "underwater": ("EM", "Acoustic", "MI"),
    "clear_water_los": ("EM", "Acoustic", "Optical", "MI"),
}


@dataclass(frozen=True)
class MediumSelection:
    """Feasible media ranked by rate class, or a reason when none fit."""

    feasible: tuple[MediumSpec, ...]
    reason: str | None = None


def select_medium(distance_m: float, context: str) -> MediumSelection:
    """Rank carrier media feasible for a link of ``distance_m`` metres.

    Feasible media are ordered by descending rate class (ties keep table
    order).  Underwater contexts enforce each medium's range limit; above
    the surface and across the air-sea boundary EM carries any distance.
    """
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    if context not in _CONTEXTS:
        raise ValueError(f"context must be one of {_CONTEXTS}, got {context!r}")
    names = _APPLICABLE[context]
    in_water = context in ("underwater", "clear_water_los")
    feasible = [
        m
        for m in MEDIA
        if m.name in names and (not in_water or distance_m <= m.range_limit_m)
    ]
    feasible.sort(key=lambda m: -_RATE_ORDER[m.rate_class])
    if not feasible:
        limits = ", ".join(f"{m.name}<={m.range_limit_m:g} m" for m in MEDIA if m.name in names)
        return MediumSelection(
            (),
            f"no medium covers {distance_m:g} m in context {context!r} ({limits})",
        )
    return MediumSelection(tuple(feasible))
