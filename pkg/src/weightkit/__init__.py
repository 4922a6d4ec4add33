"""Weight structures on bounded complexes, computed exactly."""

from .complexes import ChainMap, Complex, ComplexError, Homotopy
from .linalg import GF, QQ, ZZ, Coefficients, InvariantViolation, Matrix
from .weights import (Window, avoiding_decomposition, kills_weights,
                      truncate, without_weights)

__version__ = "0.1.0"

__all__ = ["ChainMap", "Coefficients", "Complex", "ComplexError", "GF",
           "Homotopy", "InvariantViolation", "Matrix", "QQ", "Window", "ZZ",
           "avoiding_decomposition", "kills_weights", "truncate",
           "without_weights"]
