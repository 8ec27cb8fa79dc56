# pyhtk/runtime/__init__.py
from .arrangements import CombinedArrangement, build_arrangement, fixed_points, smoothness_report
from .branch_rings import CoulombBranchRing, SymbolElement, mul, monomial_oracle_mul
from .hikita import HikitaReport, hikita_verify, hikita_sweep, unimodular_family
from .geometry_checks import CheckResult, e_moment_check, gamma_action, theta_identity_checks

__all__ = [
    "CombinedArrangement",
    "build_arrangement",
    "fixed_points",
    "smoothness_report",
    "CoulombBranchRing",
    "SymbolElement",
    "mul",
    "monomial_oracle_mul",
    "HikitaReport",
    "hikita_verify",
    "hikita_sweep",
    "unimodular_family",
    "CheckResult",
    "e_moment_check",
    "gamma_action",
    "theta_identity_checks",
]
