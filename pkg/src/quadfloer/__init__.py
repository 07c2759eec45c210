"""Exact-arithmetic toolkit for a deformed symplectic-homology model on the
product of two spheres: truncated Laurent coefficients, graded filtered
chain complexes with their spectral sequences, Floer-generator index and
action bookkeeping, the degree-4 quantum-homology idempotents, and the
semitoric displaceability geometry."""

__version__ = "0.1.0"

from . import bo, complexes, floer, laurent, linalg, quantum, semitoric  # noqa: F401
