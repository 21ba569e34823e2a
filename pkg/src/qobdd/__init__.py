"""Exact simulation, tensor synthesis and layer collapse for quantum OBDDs."""

from .classical import DetObdd, build_no_n, eval_det, is_reversible, lift_reversible
from .layer_collapse import (
    CollapsedSpace,
    build_v,
    collapse,
    collapse_coherent,
    coherent_predicted_acceptance,
    predicted_acceptance,
    tensor_layer_transforms,
)
from .errors import DimensionError, GuardExceeded, ParseError, QobddError, ValidationError
from .evaluator import (
    EvalReport,
    LayerMatrices,
    acceptance,
    beta_by_matrix_product,
    beta_by_path_sum,
    evaluate,
    final_amplitude,
    layer_matrices,
    layer_unitary,
    path_amplitude,
    run,
    truth_map,
)
from .io import parse_program, serialize_program
from .linalg import complete_unitary, is_unitary, mat_mul, random_unitary, tensor_product
from .program import (
    KQobddProgram,
    QobddProgram,
    TransformationPair,
    build_rotation_program,
    random_program,
    validate,
)
from .synthesis import and_synthesis, not_synthesis, or_synthesis, tensor_programs

__version__ = "0.1.0"
