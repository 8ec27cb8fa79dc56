# pyhtk/core/__init__.py
from .types import Flavor, IntMatrix, VectorConfig, Circuit, ThetaMonomialIdeal
from .elliptic import ModularParam, EllipticPoint, TorusPointE, theta
from .errors import HypertoricError, TruncationWarning
from .lattice import smith_normal_form, hermite_normal_form, kernel_basis, gale_dual, circuits

__all__ = [
    "Flavor",
    "IntMatrix",
    "VectorConfig",
    "Circuit",
    "ThetaMonomialIdeal",
    "ModularParam",
    "EllipticPoint",
    "TorusPointE",
    "theta",
    "HypertoricError",
    "TruncationWarning",
    "smith_normal_form",
    "hermite_normal_form",
    "kernel_basis",
    "gale_dual",
    "circuits",
]
