# pyhtk/cli/__init__.py
from .htk import ExitCode, main

__all__ = ["ExitCode", "main"]
