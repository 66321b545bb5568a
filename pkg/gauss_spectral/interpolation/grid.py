from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gauss_spectral.errors import DomainError
from gauss_spectral.interpolation.base import Evaluable
from gauss_spectral.interpolation.chebyshev import (
    barycentric_eval,
    barycentric_weights,
    chebyshev_nodes,
    taylor_rows,
)
from gauss_spectral.interpolation.piecewise_linear import first_cell_taylor, linear_eval

Rule = Literal["chebyshev", "linear"]
RULES: tuple[str, ...] = ("chebyshev", "linear")
DOMAIN_SLACK = 1e-12
NODE_TOLERANCE = 1e-12


def _unwrap(value: NDArray[np.complex128], scalar: bool) -> complex | NDArray[np.complex128]:
    return complex(value[0]) if scalar else value


@dataclass(frozen=True, slots=True, eq=False)
class GridFunction:
    """Complex samples on [a, M] with a declared interpolation rule.

    ``chebyshev`` expects Chebyshev-Lobatto nodes and evaluates the global
    barycentric interpolant; ``linear`` accepts any strictly increasing
    nodes and interpolates linearly between them.
    """

    domain: tuple[float, float]
    nodes: NDArray[np.float64]
    values: NDArray[np.complex128]
    rule: Rule = "chebyshev"
    _weights: NDArray[np.float64] | None = field(init=False, repr=False, default=None)

    def __post_init__(self) -> None:
        a, b = (float(v) for v in self.domain)
        if not (0.0 <= a < b and np.isfinite(b)):
            raise DomainError(f"GridFunction domain must satisfy 0 <= a < M, got {self.domain}.")
        if self.rule not in RULES:
            raise DomainError(f"Unknown interpolation rule {self.rule!r}; expected one of {RULES}.")
        nodes = np.array(self.nodes, dtype=float)
        values = np.array(self.values, dtype=complex)
        if nodes.ndim != 1 or nodes.size < 2:
            raise DomainError("A GridFunction needs at least two nodes.")
        if values.shape != nodes.shape:
            raise DomainError(f"{values.size} values for {nodes.size} nodes.")
        if np.any(np.diff(nodes) <= 0.0):
            raise DomainError("Grid nodes must be strictly increasing.")
        if abs(nodes[0] - a) > NODE_TOLERANCE or abs(nodes[-1] - b) > NODE_TOLERANCE:
            raise DomainError("Grid nodes must include both domain endpoints.")
        if not np.all(np.isfinite(values)):
            raise DomainError("GridFunction values must be finite.")
        weights = None
        if self.rule == "chebyshev":
            expected = chebyshev_nodes(nodes.size, a, b)
            if np.max(np.abs(expected - nodes)) > NODE_TOLERANCE * max(1.0, b):
                raise DomainError("Chebyshev rule requires Chebyshev-Lobatto nodes on the domain.")
            weights = barycentric_weights(nodes.size)
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_weights", weights)

    @classmethod
    def from_callable(
        cls,
        func: Callable[[NDArray[np.float64]], ArrayLike],
        *,
        n: int = 48,
        domain: tuple[float, float] = (0.0, 1.0),
        rule: Rule = "chebyshev",
        nodes: Sequence[float] | NDArray[np.float64] | None = None,
    ) -> GridFunction:
        if nodes is None:
            if rule == "chebyshev":
                nodes = chebyshev_nodes(n, *domain)
            else:
                nodes = np.linspace(domain[0], domain[1], n)
        nodes = np.asarray(nodes, dtype=float)
        values = np.broadcast_to(np.asarray(func(nodes), dtype=complex), nodes.shape)
        return cls(domain=domain, nodes=nodes, values=values, rule=rule)

    @classmethod
    def constant(cls, value: complex, *, n: int = 48, domain: tuple[float, float] = (0.0, 1.0), rule: Rule = "chebyshev") -> GridFunction:
        return cls.from_callable(lambda x: np.full(x.shape, value, dtype=complex), n=n, domain=domain, rule=rule)

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def exact_jet_radius(self) -> float:
        if self.rule == "linear":
            return float(self.nodes[1] - self.nodes[0])
        return 0.0

    @property
    def series_floor(self) -> int:
        # high Taylor coefficients of a degree-n interpolant carry rounding noise
        # growing like (2 n^2 / M)^m; branches with u < M / n^2 keep it below eps
        return math.ceil((self.size - 1) ** 2 / self.domain[1])

    def with_values(self, values: ArrayLike) -> GridFunction:
        return GridFunction(domain=self.domain, nodes=self.nodes, values=np.asarray(values), rule=self.rule)

    def check_inside(self, x: NDArray[np.float64]) -> None:
        a, b = self.domain
        if x.size and (np.min(x) < a - DOMAIN_SLACK or np.max(x) > b + DOMAIN_SLACK):
            raise DomainError(
                f"Evaluation at [{np.min(x)}, {np.max(x)}] leaves the domain [{a}, {b}]."
            )

    def __call__(self, x: ArrayLike) -> complex | NDArray[np.complex128]:
        scalar = np.ndim(x) == 0
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        self.check_inside(arr)
        if self.rule == "linear":
            out = linear_eval(self.nodes, self.values, arr)
        else:
            out = barycentric_eval(self.nodes, self._weights, self.values, arr)
        return _unwrap(out, scalar)

    def taylor(self, order: int) -> NDArray[np.complex128]:
        """f^(m)(0)/m! for m = 0..order, read off the interpolant at its left endpoint 0."""
        if self.domain[0] != 0.0:
            raise DomainError("Taylor data at 0 needs a grid that starts at 0.")
        if self.rule == "linear":
            return first_cell_taylor(self.nodes, self.values, order)
        return taylor_rows(self.size, *self.domain, order) @ self.values

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def normalized_at_zero(self) -> GridFunction:
        value = self(self.domain[0])
        if abs(value) == 0.0:
            raise DomainError("Cannot normalise: the function vanishes at the left endpoint.")
        return self.with_values(self.values / value)

    def _compatible(self, other: GridFunction) -> None:
        if self.rule != other.rule or self.domain != other.domain or not np.array_equal(self.nodes, other.nodes):
            raise DomainError("GridFunctions must share rule, domain and nodes.")

    def __add__(self, other: GridFunction) -> GridFunction:
        self._compatible(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: GridFunction) -> GridFunction:
        self._compatible(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> GridFunction:
        return self.with_values(self.values * complex(scalar))

    __rmul__ = __mul__


class FunctionSum:
    """Pointwise sum of evaluables, restricted to the intersection of their domains."""

    def __init__(self, *parts: Evaluable) -> None:
        if not parts:
            raise DomainError("FunctionSum needs at least one part.")
        self.parts = parts
        self.domain = (
            max(p.domain[0] for p in parts),
            min(p.domain[1] for p in parts),
        )

    def __call__(self, x: ArrayLike) -> complex | NDArray[np.complex128]:
        total = self.parts[0](x)
        for part in self.parts[1:]:
            total = total + part(x)
        return total

    def taylor(self, order: int) -> NDArray[np.complex128]:
        return sum((np.asarray(p.taylor(order), dtype=complex) for p in self.parts), np.zeros(order + 1, dtype=complex))

    @property
    def exact_jet_radius(self) -> float:
        return min(p.exact_jet_radius for p in self.parts)

    @property
    def series_floor(self) -> int:
        return max(p.series_floor for p in self.parts)


__all__ = ["FunctionSum", "GridFunction", "chebyshev_nodes"]
