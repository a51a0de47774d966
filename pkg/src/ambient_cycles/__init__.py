"""Ambient-cycle classification on model surfaces.

Classifies one-cycles of finite point clouds on four model surfaces
(torus, Klein bottle, projective plane, genus two) by their first
homology class in the ambient surface, using deck-group transition maps
inferred from distances in the universal cover, and samples
class-decomposed four-point Vietoris-Rips persistence measures.
"""

from .abelian import AbelianClass
from .complexes import (
    CycleBasis,
    EpsilonGraph,
    LiftedPointCloud,
    build_epsilon_graph,
    cycle_basis,
)
from .errors import InputError, ResourceLimitError
from .genus2 import GenusTwoConfig
from .kinds import SurfaceKind, parse_kind
from .orbit import base_distance, base_distance_block, enumerate_candidates
from .persistence import (
    MeasurePoint,
    MeasureSample,
    QuadrupleResult,
    classify_quadruple,
    four_point_persistence,
    minimal_cycle_graph,
    principal_persistence_measure,
)
from .surfaces import (
    CoverPoint,
    GroupElement,
    abelianize,
    act,
    canonical_lift,
    cover_distance,
    element_from_payload,
    element_to_payload,
    fundamental_domain_contains,
    generators,
    invert,
    multiply,
    point,
    sample_uniform,
    surface_info,
)
from .transition import (
    CloudClassification,
    CocycleReport,
    TransitionMap,
    classify_cloud,
    compute_transition,
    gauge_transform,
    homology_class,
    loop_monodromy,
    verify_cocycle,
)

__all__ = [
    "AbelianClass",
    "CloudClassification",
    "CocycleReport",
    "CoverPoint",
    "CycleBasis",
    "EpsilonGraph",
    "GenusTwoConfig",
    "GroupElement",
    "InputError",
    "LiftedPointCloud",
    "MeasurePoint",
    "MeasureSample",
    "QuadrupleResult",
    "ResourceLimitError",
    "SurfaceKind",
    "TransitionMap",
    "abelianize",
    "act",
    "base_distance",
    "base_distance_block",
    "build_epsilon_graph",
    "canonical_lift",
    "classify_cloud",
    "classify_quadruple",
    "compute_transition",
    "cover_distance",
    "cycle_basis",
    "element_from_payload",
    "element_to_payload",
    "enumerate_candidates",
    "four_point_persistence",
    "fundamental_domain_contains",
    "gauge_transform",
    "generators",
    "homology_class",
    "invert",
    "loop_monodromy",
    "minimal_cycle_graph",
    "multiply",
    "parse_kind",
    "point",
    "principal_persistence_measure",
    "sample_uniform",
    "surface_info",
    "verify_cocycle",
]

__version__ = "0.1.0"
