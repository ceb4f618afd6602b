"""Bell-CHSH tests with a single fixed four-outcome POVM on each particle."""

__version__ = "0.1.0"

from bellsim.linalg import Direction, expectation, projector_from_direction, singlet, tensor
from bellsim.povm import (
    LABELS,
    OutcomeLabel,
    Povm,
    Setting,
    build_epr_povm,
    dilated_probabilities,
    neumark_dilate,
    validate_povm,
)
from bellsim.experiment import (
    ChshResult,
    JointOutcomeTable,
    chsh_value,
    conditional_correlator,
    joint_outcome_table,
    singlet_chsh,
)
from bellsim.sampler import (
    ChshEstimate,
    TrialRecord,
    Trials,
    apply_detection,
    estimate_chsh,
    estimate_from_counts,
    sample_trials,
)
from bellsim.lhv import Strategy, enumerate_strategies, lhv_chsh_max, lhv_sample, strategy_chsh
from bellsim.budget import TimingModel, compare_modes, detection_threshold, min_separation

__all__ = [
    "ChshEstimate", "ChshResult", "Direction", "JointOutcomeTable", "LABELS", "OutcomeLabel",
    "Povm", "Setting", "Strategy", "TimingModel", "TrialRecord", "Trials", "apply_detection",
    "build_epr_povm", "chsh_value", "compare_modes", "conditional_correlator", "detection_threshold",
    "dilated_probabilities", "enumerate_strategies", "estimate_chsh", "estimate_from_counts",
    "expectation", "joint_outcome_table", "lhv_chsh_max", "lhv_sample", "min_separation",
    "neumark_dilate", "projector_from_direction", "sample_trials", "singlet", "singlet_chsh",
    "strategy_chsh", "tensor", "validate_povm",
]
