"""Transverse divergence and tautness analysis for Riemannian foliations.

The toolkit represents foliated models through global orthonormal
frames (either constant structure constants on a compact quotient, or
a periodic chart with expression-valued frame coefficients), computes
connection coefficients, sub-distribution divergences and mean
curvature in that frame, and classifies the sign pattern of the
transverse divergence of basic candidate fields over sample grids as
tautness evidence.
"""

__version__ = "0.1.0"

from .connection import (
    ChristoffelTable,
    MeanCurvatureVector,
    christoffel,
    covariant_derivative,
    divergence_sub,
    full_divergence,
    mean_curvature,
    transverse_divergence,
)
from .catalog import BUILTIN_NAMES, builtin_document, builtin_model
from .expr import (
    DifferentiationError,
    DomainError,
    EvalError,
    Expr,
    ExprError,
    ParseError,
    UnboundVariableError,
    UnknownFunctionError,
    differentiate,
    evaluate,
    parse,
    to_string,
)
from .model import (
    BasicFieldCheck,
    FoliationSplit,
    FrameModel,
    Grid,
    ModelDiagnostics,
    ModelError,
    SchemaError,
    SingularFrameError,
    VectorFieldSpec,
    chart_model,
    check_basic,
    constant_structure_model,
    foliation_split,
    load_field,
    load_model,
    model_to_document,
    sample_grid,
    structure_functions,
    validate_model,
    vector_field,
)
from .spectral import (
    InadmissibleMatrixError,
    IsolatedRoot,
    MatrixDiagnostics,
    SpectralData,
    SpectralError,
    build_suspension,
    char_poly,
    determinant,
    parse_matrix,
    real_eigenvalues,
    spectral_data,
    validate_suspension_matrix,
)
from .tautness import (
    NotBasicError,
    QuadratureReport,
    TautnessClass,
    TautnessVerdict,
    VolumePreservationReport,
    alvarez_candidate,
    classify_divergence,
    covering_projection,
    green_check,
    lift_to_cover,
    volume_preservation_check,
)

__all__ = [
    "BUILTIN_NAMES",
    "BasicFieldCheck",
    "ChristoffelTable",
    "DifferentiationError",
    "DomainError",
    "EvalError",
    "Expr",
    "ExprError",
    "FoliationSplit",
    "FrameModel",
    "Grid",
    "InadmissibleMatrixError",
    "IsolatedRoot",
    "MatrixDiagnostics",
    "MeanCurvatureVector",
    "ModelDiagnostics",
    "ModelError",
    "NotBasicError",
    "ParseError",
    "QuadratureReport",
    "SchemaError",
    "SingularFrameError",
    "SpectralData",
    "SpectralError",
    "TautnessClass",
    "TautnessVerdict",
    "UnboundVariableError",
    "UnknownFunctionError",
    "VectorFieldSpec",
    "VolumePreservationReport",
    "alvarez_candidate",
    "build_suspension",
    "builtin_document",
    "builtin_model",
    "char_poly",
    "chart_model",
    "check_basic",
    "christoffel",
    "classify_divergence",
    "constant_structure_model",
    "covariant_derivative",
    "covering_projection",
    "determinant",
    "differentiate",
    "divergence_sub",
    "evaluate",
    "foliation_split",
    "full_divergence",
    "green_check",
    "lift_to_cover",
    "load_field",
    "load_model",
    "mean_curvature",
    "model_to_document",
    "parse",
    "parse_matrix",
    "real_eigenvalues",
    "sample_grid",
    "spectral_data",
    "structure_functions",
    "to_string",
    "transverse_divergence",
    "validate_model",
    "validate_suspension_matrix",
    "vector_field",
    "volume_preservation_check",
]
