"""Finite restriction semigroups, their spectra and germ categories, and the
operator algebras built from them."""
from .errors import RSWorkError
from .kernels import BACKEND
from .rsem import FinRS, PartialMap, validate_axioms
from .cat import FinCat
from .dsl import parse

__version__ = "0.1.0"

__all__ = ["BACKEND", "FinCat", "FinRS", "PartialMap", "RSWorkError", "parse",
           "validate_axioms", "__version__"]
