"""Particle swarm optimisation with coefficient analysis and setting guidelines."""

from .analysis import (
    BehaviorClass,
    CoefficientPoint,
    RootKind,
    TrajectorySpec,
    classify_behavior,
    classify_region,
    converges,
    discriminant,
    region_raster,
    roots,
    trajectory_closed_form,
    trajectory_recurrence,
)
from .advisor import BehaviorProfile, default_vmax, recommend, validate
from .formulations import (
    ClassicalParams,
    ConstrictedParams,
    GeneralParams,
    constricted_to_general,
    general_to_classical,
    sample_classical,
    sample_general,
)
from .objectives import get_objective
from .swarm import RunRecord, SwarmConfig, run
from .topology import TopologySpec

__version__ = "0.1.0"
