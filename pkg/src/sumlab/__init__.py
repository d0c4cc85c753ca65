"""Numerical two-route verification of Mellin, Poisson and Voronoi-type summation identities."""
from ._jit import USE_NUMBA
from .errors import AccuracyWarning, ConvergenceWarning, SumlabWarning, TailWarning
from .identities import IDENTITIES, run_identity
from .report import VerificationReport
from .transforms import ContourSpec, SeriesSpec, TestFunction, get_function

__version__ = "0.1.0"

__all__ = [
    "AccuracyWarning",
    "ContourSpec",
    "ConvergenceWarning",
    "IDENTITIES",
    "SeriesSpec",
    "SumlabWarning",
    "TailWarning",
    "TestFunction",
    "USE_NUMBA",
    "VerificationReport",
    "get_function",
    "run_identity",
]
