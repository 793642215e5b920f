"""Two-way relay channel with composite decode-forward relaying."""

from ._twrc import (
    InvalidInput,
    LinkGains,
    PowerAllocation,
    TwrcError,
    appendix_case_r2t5,
    best_weighted_point,
    capacity,
    classify,
    compute_constraints,
    gains_from_geometry,
    grid_region,
    hull_contains,
    lemma2_relay_power,
    solve,
    technique_lookup,
)

__all__ = [
    "InvalidInput",
    "LinkGains",
    "PowerAllocation",
    "TwrcError",
    "appendix_case_r2t5",
    "best_weighted_point",
    "capacity",
    "classify",
    "compute_constraints",
    "gains_from_geometry",
    "grid_region",
    "hull_contains",
    "lemma2_relay_power",
    "solve",
    "technique_lookup",
]
