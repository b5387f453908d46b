"""Finite copacetic structures: edge-colored forests with parameters that color their vertices.

The package checks the structure axioms, computes closures, runs the
coloring and amalgamation constructions, decides independence over closed
bases, and produces checkable certificates that a vertex's type divides.
"""

from .axioms import ViolationReport, check_c4_coloring, check_closed, check_completeness, verify_copacetic
from .closure import closure_images, closure_of, pair_structure
from .coloring import brute_force_colorings, extend_coloring, interpolate_colorings, path_coloring
from .construct import add_closure_image, complete_budgeted, connect_with_path, forge, free_amalgam, introduce_parameter
from .core import (
    INFINITE,
    STD,
    TRIPLE,
    C4Coloring,
    Embedding,
    Forest,
    Structure,
    SubsetHandle,
    TheoryVariant,
    ball_boundary,
    path_hull,
    set_distance,
    tree_distance,
    unique_path,
)
from .errors import (
    CapacityError,
    CopaceticError,
    HypothesisFailure,
    InvariantBreach,
    ParseError,
    PreconditionError,
    StructureError,
    UnknownIdentifier,
)
from .independence import (
    check_certificate,
    existence_failure_certificate,
    forking_witness,
    inconsistency_degree,
    independent,
    same_type_over,
)
from .serialization import parse_structure, serialize_structure
from .triple import PairData, triple_amalgam

__version__ = "0.1.0"
