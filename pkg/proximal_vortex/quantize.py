"""
Fixed power-of-ten grid for feature values and planar coordinates.

Every real value read into the package is rounded onto the grid
``k / 10**decimals`` and stored as the integer numerator ``k``. Equality of
quantized values is exact integer equality, hence transitive.
"""
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Tuple, Union

import numpy as np

DEFAULT_DECIMALS = 6

# Numerators must fit an int64 so probe tables can live in numpy arrays.
_INT64 = np.iinfo(np.int64)

Number = Union[str, int, float, Decimal, Fraction]


class QuantizationError(ValueError):
    pass


@dataclass(frozen=True)
class Quantum:
    """The grid ``10**-decimals``."""

    decimals: int = DEFAULT_DECIMALS

    def __post_init__(self) -> None:
        if not 0 <= self.decimals <= 18:
            raise QuantizationError(f"decimals must be within 0..18, got {self.decimals}")

    @property
    def denominator(self) -> int:
        return 10**self.decimals

    @classmethod
    def parse(cls, text: str) -> "Quantum":
        """Read a quantum written as a decimal power of ten, e.g. ``"0.001"``."""
        try:
            value = Decimal(str(text))
        except InvalidOperation as e:
            raise QuantizationError(f"quantum {text!r} is not a decimal") from e
        if value <= 0:
            raise QuantizationError(f"quantum {text!r} must be positive")
        exponent = -value.log10()
        if exponent != exponent.to_integral_value() or exponent < 0:
            raise QuantizationError(f"quantum {text!r} is not 10^-k for k >= 0")
        return cls(int(exponent))

    def text(self) -> str:
        return "1" if self.decimals == 0 else "0." + "0" * (self.decimals - 1) + "1"

    def quantize(self, value: Number) -> int:
        """Round ``value`` half-even onto the grid and return its numerator."""
        if isinstance(value, Fraction):
            scaled = value * self.denominator
            k = round(scaled)
        else:
            try:
                dec = Decimal(str(value)) if not isinstance(value, Decimal) else value
                scaled_dec = (dec * self.denominator).quantize(
                    Decimal(1), rounding=ROUND_HALF_EVEN
                )
            except InvalidOperation as e:
                raise QuantizationError(f"{value!r} is not a finite decimal") from e
            if not scaled_dec.is_finite():
                raise QuantizationError(f"{value!r} is not finite")
            k = int(scaled_dec)
        if not _INT64.min <= k <= _INT64.max:
            raise QuantizationError(
                f"{value!r} overflows the quantized range at 10^-{self.decimals}"
            )
        return int(k)

    def to_fraction(self, numerator: int) -> Fraction:
        return Fraction(numerator, self.denominator)

    def to_text(self, numerator: int) -> str:
        """Exact decimal string of a grid value (round-trips through ``quantize``)."""
        if self.decimals == 0:
            return str(numerator)
        sign = "-" if numerator < 0 else ""
        whole, frac = divmod(abs(numerator), self.denominator)
        return f"{sign}{whole}.{frac:0{self.decimals}d}"


DEFAULT_QUANTUM = Quantum()


@dataclass(frozen=True, order=True)
class FeatureVector:
    """A quantized feature vector; ``components`` are grid numerators."""

    components: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.components) < 1:
            raise QuantizationError("feature vectors need dimension >= 1")

    @property
    def dimension(self) -> int:
        return len(self.components)

    @classmethod
    def from_values(
        cls, values: Iterable[Number], quantum: Quantum = DEFAULT_QUANTUM
    ) -> "FeatureVector":
        return cls(tuple(quantum.quantize(v) for v in values))

    def as_text(self, quantum: Quantum = DEFAULT_QUANTUM) -> Tuple[str, ...]:
        return tuple(quantum.to_text(c) for c in self.components)
