# pyhtk/__init__.py
__version__ = "0.1.0"

from pyhtk.core.types import Flavor, IntMatrix, VectorConfig, ThetaMonomialIdeal
from pyhtk.core.elliptic import ModularParam, EllipticPoint, TorusPointE
from pyhtk.core.errors import HypertoricError, DegenerateConfig, ParseError
from pyhtk.core.lattice import exact_sequence, gale_dual, circuits, is_unimodular
from pyhtk.runtime.arrangements import build_arrangement, smoothness_report, fixed_points
from pyhtk.runtime.branch_rings import CoulombBranchRing
from pyhtk.runtime.hikita import hikita_verify

__all__ = [
    "__version__",
    "Flavor",
    "IntMatrix",
    "VectorConfig",
    "ThetaMonomialIdeal",
    "ModularParam",
    "EllipticPoint",
    "TorusPointE",
    "HypertoricError",
    "DegenerateConfig",
    "ParseError",
    "exact_sequence",
    "gale_dual",
    "circuits",
    "is_unimodular",
    "build_arrangement",
    "smoothness_report",
    "fixed_points",
    "CoulombBranchRing",
    "hikita_verify",
]
