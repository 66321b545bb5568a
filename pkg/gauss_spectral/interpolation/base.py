from __future__ import annotations

from collections.abc import Callable
from typing import Protocol

import numpy as np
from numpy.typing import ArrayLike, NDArray

ProgressCallback = Callable[[str], None]


class Evaluable(Protocol):
    """A function the transfer operator can act on.

    ``taylor(order)`` returns f^(m)(0)/m! for m = 0..order. When
    ``exact_jet_radius`` is positive, f coincides with that Taylor
    polynomial on [0, exact_jet_radius]; zero means the jet is only
    asymptotic there.
    """

    domain: tuple[float, float]

    def __call__(self, x: ArrayLike) -> complex | NDArray[np.complex128]:
        """Evaluate at one point or an array of points."""

    def taylor(self, order: int) -> NDArray[np.complex128]:
        """Taylor coefficients at 0 through ``order``."""

    @property
    def exact_jet_radius(self) -> float:
        """Radius below which the Taylor data is exact."""

    @property
    def series_floor(self) -> int:
        """Least number of directly summed branches before the jet may close the tail."""
