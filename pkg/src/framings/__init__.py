"""Framings, operator valued measures and dilations in finite dimension."""
from .dilation import (
    Dilation,
    OperatorMap,
    boundedness_constant,
    build_dilation,
    check_positive_definite,
    orbit_eval,
    verify_dilation,
)
from .framing import (
    Framing,
    GeneratorPair,
    check_generator_pair,
    compute_fmax,
    dual_framing,
    generate_framing,
    rescale,
    synthesis_operator,
    verify_reconstruction,
)
from .naimark import POVM, naimark_dilate, povm_to_operator_map, verify_pvm
from .numlin import DEFAULT_TOL, Subspace, Tolerance
from .ovm import FramingOVM, framing_to_povm, ovm_eval, ovm_total_check, ovm_transform_check
from .semigroup import FiniteStarSemigroup, subset_semigroup, validate

__version__ = "0.1.0"
