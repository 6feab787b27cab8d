"""Mod-p Hilbert modular forms over real quadratic fields in which p is inert.

The package works with q-expansions of forms with coefficients in a finite field,
the theta, Frobenius and Hasse operators acting on them, eigensystems and their
stabilisations, twists by finite-order characters, and a combinatorial model of the
local lift predicates that govern weight shifting.
"""

from .arith import FieldConfig, QuadElem
from .errors import ContractViolation, SchemaError
from .ffield import GF, FFElem, FiniteField
from .weightlat import Weight

__all__ = ["FieldConfig", "QuadElem", "ContractViolation", "SchemaError", "GF", "FFElem",
           "FiniteField", "Weight"]
__version__ = "0.1.0"
