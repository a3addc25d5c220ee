"""Exact computations with the planar Galilean conformal algebra and its tensor modules."""

from .exactfield import I, ONE, ZERO, Scalar, parse_scalar
from .gca import Generator, LieElement, bracket, grade_of
from .rank1mods import Kind, ModuleParams, Poly2, gamma_act, omega_act
from .spanlab import GenVanSpec, SingularExtraction, genvan_matrix, in_span, lemma2_det, rank, vandermonde_extract
from .tensorprod import (
    NEG_INFINITY,
    TRIVIAL,
    ExpSignature,
    RestrictedModule,
    TensorElement,
    TensorShape,
    TrivialModule,
    VVec,
    compare_sig,
    deg,
    tensor_act,
    top_exponents,
)
from .theorems import (
    compute_dg,
    dt_bounds,
    estimate_dt,
    generation_saturation,
    lemma32_extract,
    recover_parameters,
    simplicity_reduce,
    stable_span,
)

__version__ = "0.1.0"
