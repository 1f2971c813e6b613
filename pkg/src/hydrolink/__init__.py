"""Underwater acoustic link planning, sparse equalization, and sea-clutter
detection.

The package covers the signal chain of a short acoustic network study:

* :mod:`hydrolink.channel` -- absorption, path loss, ambient noise, and
  the distance-dependent operating band.
* :mod:`hydrolink.budget` -- source level and transmit power for a
  target SNR over that band.
* :mod:`hydrolink.relay` -- multi-hop delay/energy trade-offs and a
  carrier-medium selection table.
* :mod:`hydrolink.sparse` -- sparse channel estimation from compressed
  pilot measurements via orthogonal matching pursuit.
* :mod:`hydrolink.dfe` -- an LMS-adapted decision feedback equalizer,
  optionally initialized from a sparse channel estimate.
* :mod:`hydrolink.clutter` -- K-distributed sea clutter, an
  amplitude-ratio detection feature, and threshold calibration.
* :mod:`hydrolink.cli` -- deterministic CSV-producing experiment runner.
"""

from .budget import (
    DEFAULT_EFFICIENCY,
    LinkBudget,
    acoustic_power_watts,
    link_budget,
    required_source_level,
)
from .channel import (
    DEFAULT_GRID,
    Environment,
    FrequencyGrid,
    NarrowBandWarning,
    an_product_db,
    band_3db,
    noise_psd_db,
    optimal_frequency,
    path_loss_db,
    thorp_absorption,
)
from .clutter import (
    CalibrationError,
    ClutterFrame,
    DetectorModel,
    calibrate_threshold,
    clutter_raa_samples,
    detect,
    gen_k_clutter,
    inject_target,
    load_frame,
    raa_feature,
    roc_eval,
    save_frame,
)
from .config import (
    ConfigError,
    apply_overrides,
    config_hash,
    default_config,
    load_config,
)
from .dfe import (
    BerResult,
    DfeConfig,
    DfeState,
    ber_sim,
    dfe_init,
    dfe_step,
    qfunc_ber,
    training_symbols_to_mse,
)
from .relay import (
    MEDIA,
    ChainScenario,
    MediumSelection,
    MediumSpec,
    RelayChainReport,
    chain_delay,
    chain_energy,
    energy_curve_shape,
    find_relay_threshold,
    hop_metrics,
    midpoint_comparison,
    select_medium,
    sweep_relays,
)
from .seeding import derive_seed, rng_for
from .sparse import (
    OmpResult,
    PilotMatrix,
    SparseChannel,
    check_sparsity_contract,
    generate_sparse_channel,
    load_channel_csv,
    measure,
    nmse,
    omp_reconstruct,
    pilot_matrix,
    pilot_savings_curve,
    save_channel_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # channel / budget
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
    "LinkBudget",
    "DEFAULT_EFFICIENCY",
    "required_source_level",
    "acoustic_power_watts",
    "link_budget",
    # relay
    "ChainScenario",
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
    # sparse estimation
    "SparseChannel",
    "PilotMatrix",
    "OmpResult",
    "generate_sparse_channel",
    "check_sparsity_contract",
    "pilot_matrix",
    "measure",
    "omp_reconstruct",
    "nmse",
    "pilot_savings_curve",
    "save_channel_csv",
    "load_channel_csv",
    # equalizer
    "DfeConfig",
    "DfeState",
    "BerResult",
    "dfe_init",
    "dfe_step",
    "ber_sim",
    "training_symbols_to_mse",
    "qfunc_ber",
    # clutter detection
    "ClutterFrame",
    "DetectorModel",
    "CalibrationError",
    "gen_k_clutter",
    "inject_target",
    "raa_feature",
    "clutter_raa_samples",
    "calibrate_threshold",
    "detect",
    "roc_eval",
    "save_frame",
    "load_frame",
    # config / seeding
    "ConfigError",
    "default_config",
    "load_config",
    "apply_overrides",
    "config_hash",
    "derive_seed",
    "rng_for",
]
