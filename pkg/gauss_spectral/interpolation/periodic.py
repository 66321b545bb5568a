from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from gauss_spectral.errors import DomainError

PARITY_TOLERANCE = 1e-12


def _as_coeffs(values) -> NDArray[np.complex128]:
    arr = np.array(values, dtype=complex).ravel()
    if not np.all(np.isfinite(arr)):
        raise DomainError("Fourier coefficients must be finite.")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, slots=True, eq=False)
class PeriodicFunction:
    """Q(z) = c + sum_m a_m cos(2 pi m z) + b_m sin(2 pi m z), m = 1..degree."""

    constant: complex = 0.0
    cos: NDArray[np.complex128] = ()
    sin: NDArray[np.complex128] = ()

    def __post_init__(self) -> None:
        cos = _as_coeffs(self.cos)
        sin = _as_coeffs(self.sin)
        degree = max(cos.size, sin.size)
        cos = np.pad(cos, (0, degree - cos.size))
        sin = np.pad(sin, (0, degree - sin.size))
        cos.setflags(write=False)
        sin.setflags(write=False)
        constant = complex(self.constant)
        if not (math.isfinite(constant.real) and math.isfinite(constant.imag)):
            raise DomainError("Fourier constant must be finite.")
        object.__setattr__(self, "constant", constant)
        object.__setattr__(self, "cos", cos)
        object.__setattr__(self, "sin", sin)

    domain = (-math.inf, math.inf)

    @property
    def degree(self) -> int:
        return int(self.cos.size)

    @property
    def exact_jet_radius(self) -> float:
        return 0.0

    @property
    def series_floor(self) -> int:
        return 1

    @property
    def is_zero(self) -> bool:
        return self.constant == 0 and not np.any(self.cos) and not np.any(self.sin)

    def is_odd(self, tol: float = PARITY_TOLERANCE) -> bool:
        return abs(self.constant) <= tol and bool(np.all(np.abs(self.cos) <= tol))

    def is_even(self, tol: float = PARITY_TOLERANCE) -> bool:
        return bool(np.all(np.abs(self.sin) <= tol))

    def sup_bound(self) -> float:
        """Upper bound for sup |Q| from the coefficients."""
        return float(abs(self.constant) + np.abs(self.cos).sum() + np.abs(self.sin).sum())

    def coefficients(self) -> NDArray[np.complex128]:
        return np.concatenate(([self.constant], self.cos, self.sin))

    def __call__(self, x: ArrayLike) -> complex | NDArray[np.complex128]:
        scalar = np.ndim(x) == 0
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if self.degree == 0:
            out = np.full(arr.shape, self.constant, dtype=complex)
        else:
            # reduce mod 1 first so Q(z) and Q(z+1) see the same argument
            phase = 2.0 * np.pi * np.outer(np.mod(arr, 1.0), np.arange(1, self.degree + 1))
            out = self.constant + np.cos(phase) @ self.cos + np.sin(phase) @ self.sin
        return complex(out[0]) if scalar else out

    def taylor(self, order: int) -> NDArray[np.complex128]:
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = self.constant
        omega = 2.0 * np.pi * np.arange(1, self.degree + 1)
        for j in range(order + 1):
            # d^j/dz^j cos = omega^j cos(z + j pi/2), likewise for sin
            c, s = round(math.cos(j * math.pi / 2)), round(math.sin(j * math.pi / 2))
            coeffs[j] += np.sum(omega**j * (c * self.cos + s * self.sin)) / math.factorial(j)
        return coeffs

    def __add__(self, other: PeriodicFunction) -> PeriodicFunction:
        degree = max(self.degree, other.degree)
        pad = lambda v: np.pad(v, (0, degree - v.size))  # noqa: E731
        return PeriodicFunction(
            self.constant + other.constant,
            pad(self.cos) + pad(other.cos),
            pad(self.sin) + pad(other.sin),
        )

    def __mul__(self, scalar: complex) -> PeriodicFunction:
        return PeriodicFunction(self.constant * scalar, self.cos * scalar, self.sin * scalar)

    __rmul__ = __mul__

    def max_coefficient_gap(self, other: PeriodicFunction) -> float:
        return float(np.max(np.abs((self + other * -1.0).coefficients())))

    @classmethod
    def fit(cls, samples: ArrayLike, degree: int) -> tuple[PeriodicFunction, float]:
        """Least-squares trigonometric fit of samples taken at z_k = k/S, k < S.

        Returns the fitted function and the max residual at the samples.
        """
        values = np.asarray(samples, dtype=complex)
        count = values.size
        if count <= 2 * degree:
            raise DomainError(f"Need more than {2 * degree} samples to fit degree {degree}, got {count}.")
        spectrum = np.fft.fft(values) / count
        m = np.arange(1, degree + 1)
        plus, minus = spectrum[m], spectrum[-m]
        fitted = cls(spectrum[0], plus + minus, 1j * (plus - minus))
        residual = float(np.max(np.abs(fitted(np.arange(count) / count) - values)))
        return fitted, residual

    @classmethod
    def random(
        cls,
        degree: int,
        *,
        seed: int | np.random.SeedSequence | None = None,
        parity: str | None = None,
        decay: float = 1.0,
    ) -> PeriodicFunction:
        """Real random Fourier series with coefficients ~ N(0, m^(-2 decay))."""
        rng = np.random.default_rng(seed)
        scale = np.arange(1, degree + 1, dtype=float) ** (-decay)
        cos = rng.standard_normal(degree) * scale
        sin = rng.standard_normal(degree) * scale
        constant = float(rng.standard_normal())
        if parity == "even":
            sin = np.zeros(degree)
        elif parity == "odd":
            cos = np.zeros(degree)
            constant = 0.0
        elif parity is not None:
            raise DomainError(f"parity must be 'even', 'odd' or None, got {parity!r}.")
        return cls(constant, cos, sin)
