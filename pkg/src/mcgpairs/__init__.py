"""Generating pairs of mapping class groups, checked on first homology.

Exact integer symplectic matrices for Dehn twists, straight-line programs
that rebuild the Lickorish generators from (h0, rho_n), the commutator
invariant separating Nielsen classes, and SL(2, Z) normal forms for genus 1.
"""

from .homology import SpMatrix, evaluate, rotation_matrix, transvection, twist
from .words import Word

__all__ = ["SpMatrix", "Word", "evaluate", "rotation_matrix", "transvection", "twist"]
__version__ = "0.1.0"
