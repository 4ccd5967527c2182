"""Exact linear algebra over the rational quaternions.

The main entry points are :func:`decompose_seven` for the simultaneous
decomposition of seven matrices, :class:`SolutionFamily` for the general
solution of the three- and four-term equations, and the ``rank_range_*``
functions for the extremal ranks of their unknowns.
"""
from .completion import (
    HShapeInstance, LShapeInstance, RankRange, TwoCornerInstance, h_shape_rank_range,
    l_shape_min_achiever, l_shape_rank_range, two_corner_min_achiever, two_corner_rank_range,
)
from .errors import (
    BlockIndexError, DimensionError, DivisionByZero, InconsistentSystem, InternalInconsistency,
    ParameterError, PatternError, QMSError, SchemaError, SingularError,
)
from .instance import Dims, Instance, generate, load_instance, save_instance
from .kernels import BACKEND
from .matrix import QMatrix, canonical_form, g_inverse, inverse, rank
from .rank_range import (
    RankPattern, assemble, rank_range_internal_path, rank_range_W_four, rank_range_X_four,
    rank_range_X_three, rank_range_Y_three, rank_range_YZ_four, rank_range_Z_three,
    verify_block_rank_identities,
)
from .scalar import Quaternion
from .seven_decomp import (
    SevenDecomposition, decompose_instance, decompose_seven, extract_block, verify_decomposition,
)
from .solvers import (
    SolutionFamily, assemble_four, assemble_three, check_consistency_four, check_consistency_three,
    general_solution_four, general_solution_three,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BlockIndexError", "DimensionError", "Dims", "DivisionByZero", "HShapeInstance",
    "InconsistentSystem", "Instance", "InternalInconsistency", "LShapeInstance", "ParameterError",
    "PatternError", "QMSError", "QMatrix", "Quaternion", "RankPattern", "RankRange", "SchemaError",
    "SevenDecomposition", "SingularError", "SolutionFamily", "TwoCornerInstance", "assemble",
    "assemble_four", "assemble_three", "canonical_form", "check_consistency_four",
    "check_consistency_three", "decompose_instance", "decompose_seven", "extract_block", "g_inverse",
    "general_solution_four", "general_solution_three", "generate", "h_shape_rank_range", "inverse",
    "l_shape_min_achiever", "l_shape_rank_range", "load_instance", "rank", "rank_range_W_four",
    "rank_range_X_four", "rank_range_X_three", "rank_range_Y_three", "rank_range_YZ_four",
    "rank_range_Z_three", "rank_range_internal_path", "save_instance", "two_corner_min_achiever",
    "two_corner_rank_range", "verify_block_rank_identities", "verify_decomposition",
]
