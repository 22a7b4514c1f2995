"""Exact computation in the free metabelian Lie algebra M_n.

Elements live in Magnus coordinates (a linear part plus Fox derivatives over
U = K[y1..yn]); endomorphisms are tuples of images; decomposition routines
return generator words that have been checked by exact recomposition.
"""

from .decomp import (ALMOST_TAME, TAME, Chein, CubicResidue, Elementary, GeneratorWord, HypothesisContext,
                     Linear, decompose_B, decompose_chein_monomial, decompose_D, decompose_exponential,
                     decompose_one_row, linear_to_elementary, permutation_to_elementary, reduce_A, verify_word,
                     word_evaluate)
from .endo import (Endomorphism, LinearMap, PolyMatrix, a_map, apply, b_map, chein_C, commutator, compose,
                   conjugate, cubic, d_map, elementary, endo_degrees, exponential_E, invert, is_automorphism,
                   is_chein_valid, is_one_row, jacobian, linear, one_row, quadratic, transposition)
from .errors import (CertificationError, CubicObstructionError, DimensionError, DomainError, HypothesisError,
                     MetabelianError, NotADerivativeError, NotAnAutomorphismError, ParseError)
from .fieldpoly import QQ, Field, Poly, Ring
from .magnus import (BasisCombination, JacobianColumn, MagnusElement, bracket, element_degrees, eval_lie_expr,
                     fox_derivatives, lift_column, module_scale, to_basis)
from .parse import parse_element, parse_endomorphism, parse_expression, parse_poly

__version__ = "0.1.0"

__all__ = [
    "ALMOST_TAME",
    "BasisCombination",
    "CertificationError",
    "Chein",
    "CubicObstructionError",
    "CubicResidue",
    "DimensionError",
    "DomainError",
    "Elementary",
    "Endomorphism",
    "Field",
    "GeneratorWord",
    "HypothesisContext",
    "HypothesisError",
    "JacobianColumn",
    "Linear",
    "LinearMap",
    "MagnusElement",
    "MetabelianError",
    "NotADerivativeError",
    "NotAnAutomorphismError",
    "ParseError",
    "Poly",
    "PolyMatrix",
    "QQ",
    "Ring",
    "TAME",
    "a_map",
    "apply",
    "b_map",
    "bracket",
    "chein_C",
    "commutator",
    "compose",
    "conjugate",
    "cubic",
    "d_map",
    "decompose_B",
    "decompose_D",
    "decompose_chein_monomial",
    "decompose_exponential",
    "decompose_one_row",
    "element_degrees",
    "elementary",
    "endo_degrees",
    "eval_lie_expr",
    "exponential_E",
    "fox_derivatives",
    "invert",
    "is_automorphism",
    "is_chein_valid",
    "is_one_row",
    "jacobian",
    "lift_column",
    "linear",
    "linear_to_elementary",
    "module_scale",
    "one_row",
    "parse_element",
    "parse_endomorphism",
    "parse_expression",
    "parse_poly",
    "permutation_to_elementary",
    "quadratic",
    "reduce_A",
    "to_basis",
    "transposition",
    "verify_word",
    "word_evaluate",
]
