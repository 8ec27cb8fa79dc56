# pyhtk/parser/__init__.py
from .spec_loader import Options, ProblemSpec, load_spec, loads_spec
from .report import Report

__all__ = ["Options", "ProblemSpec", "load_spec", "loads_spec", "Report"]
