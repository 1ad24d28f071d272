"""Products of involutions in matrix algebras over finite fields."""
from .field import GF, FieldSpec, parse_field
from .poly import Polynomial, factor, parse_poly
from .matrix import Matrix, parse_matrix
from .canonical import elementary_divisors, rcf
from .involution import SetId, in_B, in_C, in_D, in_set

__version__ = "0.1.0"

__all__ = ["GF", "FieldSpec", "parse_field", "Polynomial", "factor", "parse_poly", "Matrix",
           "parse_matrix", "elementary_divisors", "rcf", "SetId", "in_B", "in_C", "in_D",
           "in_set", "__version__"]
