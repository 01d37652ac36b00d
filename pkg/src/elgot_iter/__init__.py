"""Executable delay monad, Elgot iteration and partiality laws.

Modules:

- :mod:`elgot_iter.delay`: delay machines and bounded bisimilarity
- :mod:`elgot_iter.partial`: the maybe backend, restriction structure, collapse
- :mod:`elgot_iter.algebra`: uniform-iteration algebras and their laws
- :mod:`elgot_iter.elgot`: the Elgot operator, its axioms, Σ operations
- :mod:`elgot_iter.finset`: finite sets, function spaces, the brute-force oracle
- :mod:`elgot_iter.lang`: a while-language with both semantics
"""

from .kernels import BACKEND as KERNEL_BACKEND
from .report import LawReport

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "LawReport", "__version__"]
