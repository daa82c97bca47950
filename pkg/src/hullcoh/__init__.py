"""Exact cohomology of virtually polycyclic groups through invariant Lie algebra cochains."""
from .qkernel import QMatrix, QPoly, Inconsistent, rref, kernel_basis, solve
from .polyform import PolyForm, DegreeMismatch, ValueDimMismatch, integrate_simplex, restrict_face, wedge

__all__ = [
    "QMatrix", "QPoly", "Inconsistent", "rref", "kernel_basis", "solve",
    "PolyForm", "DegreeMismatch", "ValueDimMismatch", "integrate_simplex", "restrict_face", "wedge",
]

__version__ = "0.1.0"
