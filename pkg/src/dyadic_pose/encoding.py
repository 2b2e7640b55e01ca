"""Pixel coordinates as 2-adic integers via nested interval halving.

Digit 0 of an encoded coordinate is the coarsest split (left half = 0,
right half = 1), so reducing mod 2**k keeps the cell at resolution k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import OutOfRange
from .padic import TruncatedPadic, digits


def depth_for(size: int) -> int:
    """Smallest m >= 1 with size <= 2**m."""
    if size < 1:
        raise ValueError(f"image dimension must be positive, got {size}")
    return max(1, (size - 1).bit_length())


@dataclass(frozen=True)
class PixelGrid:
    width: int
    height: int
    m: int = field(init=False)
    h: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "m", depth_for(self.width))
        object.__setattr__(self, "h", depth_for(self.height))

    @classmethod
    def parse(cls, spec: str) -> PixelGrid:
        try:
            w, h = spec.lower().split("x")
            return cls(int(w), int(h))
        except ValueError as exc:
            raise ValueError(f"grid must look like 640x480, got {spec!r}") from exc


@dataclass(frozen=True)
class EncodedPoint:
    r: TruncatedPadic
    s: TruncatedPadic


@dataclass(frozen=True)
class DyadicRational:
    """numerator / 2**exponent, kept in lowest terms."""

    numerator: int
    exponent: int

    def __post_init__(self):
        n, e = self.numerator, self.exponent
        while e > 0 and n % 2 == 0:
            n //= 2
            e -= 1
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)
        if not 0 <= n < 2 ** (e + 1):
            raise ValueError("dyadic value outside [0, 2)")

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 2**self.exponent)

    def __float__(self):
        return self.numerator / 2**self.exponent


def _reverse_bits(x: int, m: int) -> int:
    out = 0
    for _ in range(m):
        out = (out << 1) | (x & 1)
        x >>= 1
    return out


def encode_coord(x: int, m: int) -> TruncatedPadic:
    if m < 1:
        raise ValueError(f"depth must be >= 1, got {m}")
    if not 0 <= x < 2**m:
        raise OutOfRange(f"coordinate {x} outside [0, 2^{m})")
    return TruncatedPadic(2, m, _reverse_bits(x, m))


def decode_coord(r: TruncatedPadic, m: int) -> int:
    if r.prime != 2 or r.precision != m:
        raise ValueError(f"expected a 2-adic value of precision {m}")
    return _reverse_bits(r.residue, m)


def iota(a: TruncatedPadic) -> DyadicRational:
    """Map sum(d_v 2**v) to sum(d_v 2**-v), exactly."""
    if a.prime != 2:
        raise ValueError("iota is defined for p = 2 only")
    e = a.precision - 1
    num = sum(d << (e - v) for v, d in enumerate(digits(a)))
    return DyadicRational(num, e)


def encode_pixel(x: int, y: int, grid: PixelGrid) -> EncodedPoint:
    if not 0 <= x < grid.width:
        raise OutOfRange(f"x = {x} outside image width {grid.width}")
    if not 0 <= y < grid.height:
        raise OutOfRange(f"y = {y} outside image height {grid.height}")
    return EncodedPoint(encode_coord(x, grid.m), encode_coord(y, grid.h))
