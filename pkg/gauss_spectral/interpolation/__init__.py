from gauss_spectral.interpolation.base import Evaluable, ProgressCallback
from gauss_spectral.interpolation.grid import FunctionSum, GridFunction, chebyshev_nodes
from gauss_spectral.interpolation.periodic import PeriodicFunction

__all__ = [
    "Evaluable",
    "FunctionSum",
    "GridFunction",
    "PeriodicFunction",
    "ProgressCallback",
    "chebyshev_nodes",
]
