"""Reversible Clifford+T circuits for AES and LowMC, their resource costs, and
the cost of Grover key search built on them."""

from .circuit import Circuit, Gate
from .estimate import ResourceEstimate, estimate

__version__ = "0.1.0"

__all__ = ["Circuit", "Gate", "ResourceEstimate", "estimate", "__version__"]
