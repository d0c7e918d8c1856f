"""Empirical tools for Sarnak processes: generators, block statistics,
information measures and the finite-window Sarnak criterion."""

__version__ = "0.1.0"

from .criterion import (
    CriterionReport,
    EpsilonTable,
    chowla_correlation,
    criterion_scan,
    entropy_gap,
    epsilon_table,
    orthogonality_average,
)
from .empirics import (
    BlockDistribution,
    JointDistribution,
    Weighting,
    autocovariance,
    block_distribution,
    joint_block_distribution,
)
from .estimators import (
    Autocovariance,
    BlockFrequencies,
    DifferenceIndicator,
    Doubling,
    SarnakCriterion,
    check_sequence,
)
from .exceptions import ComputationError, NotCenteredWarning, SarnakLabError, ValidationError
from .generators import (
    difference_indicator,
    doubling,
    gen_iid,
    gen_liouville,
    gen_rotation_coding,
    gen_skew_alternating,
    pointwise_product,
    relabel,
    skew_process,
)
from .infometrics import (
    FiniteDistribution,
    FiniteJoint,
    PinskerBounds,
    conditional_entropy,
    kl_divergence,
    mean_conditional_tv,
    pinsker_bounds,
    shannon_entropy,
    total_variation,
)
from .report import emit_report
from .sequences import Alphabet, SkewRealization, SymbolSequence, read_sequence, write_sequence
