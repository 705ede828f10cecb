"""Clifford-algebra checks of tetrad gravity identities in Cl(1,3)."""
from .kernels import BACKEND
from .stal import Multivector

__version__ = "0.1.0"

__all__ = ["BACKEND", "Multivector", "__version__"]
