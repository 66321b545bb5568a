from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray


def linear_eval(nodes: NDArray[np.float64], values: NDArray[np.complex128], x: ArrayLike) -> NDArray[np.complex128]:
    """Piecewise-linear interpolation; constant beyond the end nodes."""
    x = np.asarray(x, dtype=float)
    return np.interp(x, nodes, values.real) + 1j * np.interp(x, nodes, values.imag)


def first_cell_taylor(
    nodes: NDArray[np.float64], values: NDArray[np.complex128], order: int
) -> NDArray[np.complex128]:
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = values[0]
    if order >= 1:
        coeffs[1] = (values[1] - values[0]) / (nodes[1] - nodes[0])
    return coeffs


def graded_nodes(n: int, power: float = 2.0) -> NDArray[np.float64]:
    """n nodes on [0, 1] clustered at 0 like (j/(n-1))^power."""
    return (np.arange(n) / (n - 1)) ** power

