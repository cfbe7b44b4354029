"""Research-distance socioplexes and their persistent homology.

Pipeline: agent records -> weighted research distance -> Rips filtration
(the nested socioplexes) -> Z/2 persistence barcodes -> persistent cycles
reported as obstructions to collaboration.
"""
from .agents import AgentRecord, AgentSet, ValidationReport, load_agents, save_agents, validate
from .calibration import CalibrationConfig, enumerate_simplex, fit_weights, score_weights
from .complex import (
    Filtration,
    Simplex,
    SimplicialComplex,
    build_filtration,
    build_socioplex,
    diameter,
    neighborhood,
)
from .errors import (
    AgentIOError,
    CombinatorialBlowup,
    DanglingReference,
    DuplicateId,
    EmptyAgentSet,
    IndexOutOfRange,
    InvalidWeights,
    MissingFace,
    NotACycleInterval,
    ParseError,
    SocioplexError,
)
from .metric import (
    DistanceMatrix,
    MetricReport,
    Weights,
    component_distances,
    distance_matrix,
    r_distance,
    verify_metric,
)
from .obstructions import ObstructionReport, StrengthSummary, find_obstructions, group_strength
from .persistence import (
    BoundaryMatrix,
    Interval,
    PersistenceDiagram,
    barcodes,
    betti_at,
    boundary_matrix,
    reduce,
    representative_cycle,
)
from .render import render_barcode_svg

__version__ = "0.1.0"

__all__ = [
    "AgentIOError",
    "AgentRecord",
    "AgentSet",
    "barcodes",
    "betti_at",
    "boundary_matrix",
    "BoundaryMatrix",
    "build_filtration",
    "build_socioplex",
    "CalibrationConfig",
    "CombinatorialBlowup",
    "component_distances",
    "DanglingReference",
    "diameter",
    "distance_matrix",
    "DistanceMatrix",
    "DuplicateId",
    "EmptyAgentSet",
    "enumerate_simplex",
    "Filtration",
    "find_obstructions",
    "fit_weights",
    "group_strength",
    "IndexOutOfRange",
    "Interval",
    "InvalidWeights",
    "load_agents",
    "MetricReport",
    "MissingFace",
    "neighborhood",
    "NotACycleInterval",
    "ObstructionReport",
    "ParseError",
    "PersistenceDiagram",
    "r_distance",
    "reduce",
    "render_barcode_svg",
    "representative_cycle",
    "save_agents",
    "score_weights",
    "Simplex",
    "SimplicialComplex",
    "SocioplexError",
    "StrengthSummary",
    "validate",
    "ValidationReport",
    "verify_metric",
    "Weights",
]
