"""Discrete closed chain of contours with cluster movement.

Exact simulation, limit-cycle analysis, velocity spectra and brute-force
verification of their structural properties.
"""

from .chain import (
    ChainParams,
    Delay,
    DelayType,
    InadmissibleStateError,
    StepResult,
    blocked,
    decode,
    delta,
    encode,
    is_admissible,
    occupies_left_node,
    occupies_right_node,
    step,
)
from .kernels import BACKEND
from .orbit import (
    BudgetExceededError,
    CycleAnalysis,
    DelayRecord,
    Purity,
    Regime,
    find_cycle,
    velocities,
    verify_delay_structure,
)
from .spectrum import (
    ConstructionError,
    DelayDecomposition,
    InfeasibleDecompositionError,
    SpectrumReport,
    candidate_velocities,
    construct_cycle_state,
    empirical_spectrum,
    mirror_state,
)

__version__ = "0.1.0"
