"""Added-mass partitioned rigid-body coupling: exact solutions, solvers and stability analysis."""

from ._core import (
    GrowthSignature,
    InstabilityRegion,
    ModelProblemParams,
    ProbeVerdict,
    RectStabilityParams,
    AnnularStabilityParams,
    SchemeVariant,
    UnstableRoot,
    annular_added_mass,
    dtn_coefficient_eta,
    dump_config,
    probe_mp_ad,
    probe_mp_am,
    probe_mp_ama,
    rotating_disk_eigenvalue,
    run_experiment,
    sliding_block_eigenvalue,
    tp_mp_am_amplification,
    tp_threshold_mbar,
    translating_disk_eigenvalue,
    unstable_roots_annular,
    unstable_roots_rect,
)

__all__ = [
    "GrowthSignature",
    "InstabilityRegion",
    "ModelProblemParams",
    "ProbeVerdict",
    "RectStabilityParams",
    "AnnularStabilityParams",
    "SchemeVariant",
    "UnstableRoot",
    "annular_added_mass",
    "dtn_coefficient_eta",
    "dump_config",
    "probe_mp_ad",
    "probe_mp_am",
    "probe_mp_ama",
    "rotating_disk_eigenvalue",
    "run_experiment",
    "sliding_block_eigenvalue",
    "tp_mp_am_amplification",
    "tp_threshold_mbar",
    "translating_disk_eigenvalue",
    "unstable_roots_annular",
    "unstable_roots_rect",
]
