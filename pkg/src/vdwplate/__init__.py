"""Numerical laboratory for the van der Waals interaction between a small
molecule and a perfectly conducting or dielectric half-space."""

__version__ = "0.1.0"

from .model import E_ELECTRON_PLATE, E_HYDROGEN, Molecule, PlateConfig

__all__ = [
    "__version__",
    "E_ELECTRON_PLATE",
    "E_HYDROGEN",
    "Molecule",
    "PlateConfig",
]
