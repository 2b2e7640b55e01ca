"""Truncated p-adic integers: residues modulo p**N with explicit precision."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonUnit, PrimeMismatch


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class PadicNorm:
    """|a|_p = p**(-exponent).

    ``at_precision_floor`` marks a value that is zero at its precision, so
    the norm is only known to be at most p**(-N).
    """

    exponent: int
    at_precision_floor: bool = False

    def as_fraction(self, p: int = 2) -> Fraction:
        return Fraction(1, p**self.exponent)


@dataclass(frozen=True)
class TruncatedPadic:
    """An element of Z_p / p^N Z_p.

    Results of binary operations carry the smaller of the two operand
    precisions.
    """

    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError(f"precision must be >= 1, got {self.precision}")
        if not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if not 0 <= self.residue < self.prime**self.precision:
            raise ValueError(
                f"residue {self.residue} outside [0, {self.prime}^{self.precision})"
            )

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def _coerce(self, other) -> TruncatedPadic:
        if isinstance(other, TruncatedPadic):
            if other.prime != self.prime:
                raise PrimeMismatch(f"cannot combine p={self.prime} with p={other.prime}")
            return other
        if isinstance(other, int):
            return from_integer(other, self.prime, self.precision)
        return NotImplemented

    def _binary(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.precision, other.precision)
        mod = self.prime**n
        return TruncatedPadic(self.prime, n, op(self.residue, other.residue) % mod)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedPadic(self.prime, self.precision, -self.residue % self.modulus)

    def __int__(self):
        return self.residue

    def truncate(self, k: int) -> TruncatedPadic:
        if not 1 <= k <= self.precision:
            raise ValueError(f"cannot truncate precision {self.precision} to {k}")
        return TruncatedPadic(self.prime, k, self.residue % self.prime**k)

    def agrees_with(self, other: TruncatedPadic) -> bool:
        """Equality at the common (minimum) precision."""
        if other.prime != self.prime:
            raise PrimeMismatch(f"cannot compare p={self.prime} with p={other.prime}")
        mod = self.prime ** min(self.precision, other.precision)
        return (self.residue - other.residue) % mod == 0

    def is_unit(self) -> bool:
        return self.residue % self.prime != 0

    def valuation(self) -> PadicNorm:
        return valuation(self)

    def inverse(self) -> TruncatedPadic:
        return invert_unit(self)

    def digits(self) -> list[int]:
        return digits(self)

    def __str__(self):
        return to_digit_string(self)


def from_integer(n: int, p: int = 2, N: int = 32) -> TruncatedPadic:
    if N < 1:
        raise ValueError(f"precision must be >= 1, got {N}")
    return TruncatedPadic(p, N, n % p**N)


def arith(a: TruncatedPadic, b: TruncatedPadic | None, op: str) -> TruncatedPadic:
    """Dispatch form of the ring operations; ``op`` is add, sub, mul or neg."""
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def valuation_of_int(n: int, p: int, cap: int) -> int:
    """Largest k <= cap with p**k | n (cap when n == 0)."""
    if n == 0:
        return cap
    if p == 2:
        return min((n & -n).bit_length() - 1, cap)
    k = 0
    while k < cap and n % p == 0:
        n //= p
        k += 1
    return k


def valuation(a: TruncatedPadic) -> PadicNorm:
    if a.residue == 0:
        return PadicNorm(a.precision, at_precision_floor=True)
    return PadicNorm(valuation_of_int(a.residue, a.prime, a.precision))


def invert_unit(a: TruncatedPadic) -> TruncatedPadic:
    if a.residue % a.prime == 0:
        raise NonUnit(f"{a.residue} is divisible by {a.prime}")
    return TruncatedPadic(a.prime, a.precision, pow(a.residue, -1, a.modulus))


def digits(a: TruncatedPadic) -> list[int]:
    out = []
    r = a.residue
    for _ in range(a.precision):
        r, d = divmod(r, a.prime)
        out.append(d)
    return out


def from_digits(ds, p: int = 2) -> TruncatedPadic:
    ds = list(ds)
    residue = 0
    for d in reversed(ds):
        if not 0 <= d < p:
            raise ValueError(f"digit {d} out of range for p={p}")
        residue = residue * p + d
    return TruncatedPadic(p, len(ds), residue)


def to_digit_string(a: TruncatedPadic) -> str:
    """Serialize as ``"p:N:d0d1..."``, least-significant digit first."""
    if a.prime > 10:
        raise ValueError("digit strings need single-character digits (p <= 10)")
    return f"{a.prime}:{a.precision}:" + "".join(str(d) for d in digits(a))


def from_digit_string(s: str) -> TruncatedPadic:
    try:
        p_s, n_s, body = s.strip().split(":")
        p, n = int(p_s), int(n_s)
        ds = [int(c) for c in body]
    except ValueError as exc:
        raise ValueError(f"malformed digit string {s!r}") from exc
    if len(ds) != n:
        raise ValueError(f"digit string {s!r} has {len(ds)} digits, expected {n}")
    return from_digits(ds, p)
