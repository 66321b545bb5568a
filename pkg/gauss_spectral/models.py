from __future__ import annotations

import math
from dataclasses import dataclass, field

from gauss_spectral.errors import ConvergenceError, DomainError, PoleError

POLE_TOLERANCE = 1e-9


@dataclass(frozen=True, slots=True)
class Limits:
    max_dim: int = 512
    max_words: int = 2_000_000
    max_partition_points: int = 400_000
    max_series_terms: int = 2_000_000
    max_power_iterations: int = 500


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True, slots=True)
class Word:
    """Continued-fraction digits n_1..n_k indexing the branch psi_{n_1..n_k}."""

    digits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        digits = tuple(int(d) for d in self.digits)
        if any(d < 1 for d in digits):
            raise DomainError(f"Continued-fraction digits must be >= 1, got {digits}.")
        object.__setattr__(self, "digits", digits)

    @property
    def depth(self) -> int:
        return len(self.digits)

    def tail(self) -> Word:
        return Word(self.digits[1:])

    def extend(self, digit: int) -> Word:
        return Word(self.digits + (digit,))

    def suffixes(self) -> list[Word]:
        return [Word(self.digits[j:]) for j in range(len(self.digits))]


@dataclass(frozen=True, slots=True)
class PartitionSpec:
    l: int  # noqa: E741
    N: int
    digit_cutoff: int

    def __post_init__(self) -> None:
        if self.l < 0:
            raise DomainError(f"Composition depth l must be >= 0, got {self.l}.")
        if self.N < 1:
            raise DomainError(f"Grid resolution N must be >= 1, got {self.N}.")
        if self.digit_cutoff < 1:
            raise DomainError(f"Digit cutoff must be >= 1, got {self.digit_cutoff}.")

    def estimated_size(self) -> int:
        return 1 + sum(self.N * self.digit_cutoff**depth for depth in range(self.l + 1))


def in_pole_set(value: complex, *, tol: float = POLE_TOLERANCE) -> bool:
    twice = 2.0 * complex(value)
    nearest = round(twice.real)
    return nearest <= 1 and abs(twice - nearest) < 2.0 * tol


@dataclass(frozen=True, slots=True)
class BetaParam:
    """Parameter beta of L_beta together with the continuation order k."""

    value: complex
    k: int = 0

    def __post_init__(self) -> None:
        value = complex(self.value)
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise DomainError(f"beta must be finite, got {value}.")
        if self.k < 0:
            raise DomainError(f"Continuation order must be >= 0, got {self.k}.")
        if in_pole_set(value):
            raise PoleError(f"beta={value} lies in the pole set {{1/2, 0, -1/2, ...}}.")
        object.__setattr__(self, "value", value)

    @classmethod
    def auto(cls, value: complex | float) -> BetaParam:
        """Smallest continuation order that reaches Re(value)."""
        value = complex(value)
        k = 0 if value.real > 0 else int(math.floor(-2.0 * value.real)) + 1
        return cls(value, k)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def two_beta(self) -> complex:
        return 2.0 * self.value

    def check_continuation(self) -> None:
        if not self.value.real > -self.k / 2.0:
            raise ConvergenceError(
                f"Re(beta)={self.value.real} needs continuation order > {-2.0 * self.value.real}; "
                f"got k={self.k}."
            )


@dataclass(slots=True)
class SeriesEvaluation:
    value: complex
    error: float
    terms: list[complex] = field(default_factory=list)


@dataclass(slots=True)
class ScanRecord:
    beta: complex
    det_minus: complex
    det_plus: complex
    selberg_Z: complex
    dim_used: int
    error: str | None = None

    @property
    def r(self) -> float:
        return self.beta.imag

    @property
    def ok(self) -> bool:
        return self.error is None
