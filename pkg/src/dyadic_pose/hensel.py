"""Integer polynomials and Hensel lifting of simple roots from mod 2 to mod 2^N."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import RankDeficient
from .padic import valuation_of_int
from .residue_linalg import rref_mod2, solve_affine_mod2


class IntPolynomial:
    """Sparse polynomial in ``nvars`` variables with integer coefficients.

    Coefficients are arbitrary-size ints and are never reduced; reduction
    happens only in :meth:`eval_mod`.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has wrong length for {nvars} variables")
            if c:
                clean[exps] = clean.get(exps, 0) + int(c)
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def constant(cls, c: int, nvars: int = 1) -> IntPolynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i: int, nvars: int) -> IntPolynomial:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> IntPolynomial:
        """Univariate polynomial from a0, a1, ... (lowest degree first)."""
        return cls(1, {(i,): c for i, c in enumerate(coeffs)})

    def coeffs(self) -> list[int]:
        if self.nvars != 1:
            raise ValueError("coeffs() is for univariate polynomials")
        if not self.terms:
            return [0]
        out = [0] * (self.degree() + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    def degree(self, var: int | None = None) -> int:
        """Total degree, or the degree in one variable; -1 for zero."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        return max(e[var] for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _lift(self, other) -> IntPolynomial:
        if isinstance(other, IntPolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, int):
            return IntPolynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return IntPolynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return IntPolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = IntPolynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial.constant(other, self.nvars)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "IntPolynomial(0)"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(
                f"X{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"{self.terms[e]}" + (f"*{mono}" if mono else ""))
        return "IntPolynomial(" + " + ".join(parts) + ")"

    def diff(self, var: int) -> IntPolynomial:
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                d = list(e)
                d[var] -= 1
                out[tuple(d)] = c * e[var]
        return IntPolynomial(self.nvars, out)

    def __call__(self, *x: int) -> int:
        return self.evaluate(x)

    def evaluate(self, x: Sequence[int]) -> int:
        if len(x) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(x)}")
        total = 0
        for e, c in self.terms.items():
            term = c
            for xi, k in zip(x, e):
                if k:
                    term *= xi**k
            total += term
        return total

    def eval_mod(self, x: Sequence[int], modulus: int) -> int:
        if len(x) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(x)}")
        total = 0
        for e, c in self.terms.items():
            term = c
            for xi, k in zip(x, e):
                if k:
                    term = term * pow(xi, k, modulus) % modulus
            total += term
        return total % modulus

    def reduce(self, modulus: int) -> IntPolynomial:
        return IntPolynomial(self.nvars, {e: c % modulus for e, c in self.terms.items()})

    def partial_eval(self, var: int, value: int, modulus: int | None = None) -> IntPolynomial:
        """Substitute a value for one variable and drop it."""
        out: dict[tuple[int, ...], int] = {}
        for e, c in self.terms.items():
            v = pow(value, e[var], modulus) if modulus else value ** e[var]
            rest = e[:var] + e[var + 1:]
            out[rest] = out.get(rest, 0) + c * v
        p = IntPolynomial(self.nvars - 1, out)
        return p.reduce(modulus) if modulus else p

    def content_valuation(self, cap: int) -> int:
        """Largest k <= cap with 2**k dividing every coefficient."""
        if not self.terms:
            return cap
        return min(valuation_of_int(c, 2, cap) for c in self.terms.values())


def eval_mod(f: IntPolynomial, x: Sequence[int], k: int) -> int:
    """Evaluate f at x modulo 2**k."""
    return f.eval_mod(x, 1 << k)


class PolySystem:
    """m polynomials in n shared variables, m <= n."""

    def __init__(self, polys: Iterable[IntPolynomial]):
        self.polys = tuple(polys)
        if not self.polys:
            raise ValueError("empty system")
        n = self.polys[0].nvars
        if any(p.nvars != n for p in self.polys):
            raise ValueError("all polynomials must share the same variables")
        if len(self.polys) > n:
            raise ValueError(f"{len(self.polys)} equations in {n} unknowns; need m <= n")
        self.nvars = n
        self.jacobian = tuple(tuple(p.diff(j) for j in range(n)) for p in self.polys)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def eval_mod(self, x: Sequence[int], modulus: int) -> list[int]:
        return [p.eval_mod(x, modulus) for p in self.polys]

    def perturbed(self, other: PolySystem, scale: int) -> PolySystem:
        """F + scale * G, equation by equation."""
        return PolySystem(f + g * scale for f, g in zip(self.polys, other.polys))


def jacobian_mod2(F: PolySystem, x: Sequence[int]) -> np.ndarray:
    return np.array(
        [[d.eval_mod(x, 2) for d in row] for row in F.jacobian], dtype=np.uint8
    ).reshape(len(F), F.nvars)


@dataclass(frozen=True)
class LiftTrace:
    """x^(1), x^(2), ..., with x^(k) solving F mod 2^k, plus the corrections."""

    solutions: tuple[tuple[int, ...], ...]
    corrections: tuple[tuple[int, ...], ...]

    @property
    def solution(self) -> tuple[int, ...]:
        return self.solutions[-1]

    @property
    def precision(self) -> int:
        return len(self.solutions)

    @property
    def steps(self) -> int:
        return len(self.corrections)


def _step(F: PolySystem, x: Sequence[int], k: int) -> tuple[list[int], list[int]]:
    if k < 2:
        raise ValueError("lift steps start at k = 2")
    mod = 1 << k
    half = 1 << (k - 1)
    values = F.eval_mod(x, mod)
    if any(v % half for v in values):
        raise ValueError(f"x does not solve the system mod 2^{k - 1}")
    a = [v // half for v in values]
    t = solve_affine_mod2(jacobian_mod2(F, x), a)
    return [(xi + half * ti) % mod for xi, ti in zip(x, t)], t


def lift_step(F: PolySystem, x: Sequence[int], k: int) -> list[int]:
    """Refine a solution mod 2^(k-1) to one mod 2^k."""
    return _step(F, x, k)[0]


def lift(F: PolySystem, seed: Sequence[int], N: int) -> LiftTrace:
    x = [int(v) % 2 for v in seed]
    if len(x) != F.nvars:
        raise ValueError(f"seed has {len(x)} entries, system has {F.nvars} unknowns")
    if any(F.eval_mod(x, 2)):
        raise ValueError("seed is not a solution mod 2")
    if rref_mod2(jacobian_mod2(F, x))[1] < len(F):
        raise RankDeficient("Jacobian at the seed is rank deficient mod 2")
    solutions = [tuple(x)]
    corrections = []
    for k in range(2, N + 1):
        x, t = _step(F, x, k)
        solutions.append(tuple(x))
        corrections.append(tuple(t))
    return LiftTrace(tuple(solutions), tuple(corrections))


class RootMod2(NamedTuple):
    value: int
    simple: bool


def univariate_roots_mod2(g: IntPolynomial) -> list[RootMod2]:
    """Roots of g in F_2 from coefficient parities.

    g(0) = a0, g(1) = sum a_i, g'(0) = a1, g'(1) = sum of odd-index a_i.
    """
    a = [c & 1 for c in g.coeffs()]
    roots = []
    if a[0] == 0:
        roots.append(RootMod2(0, len(a) > 1 and a[1] == 1))
    if sum(a) % 2 == 0:
        roots.append(RootMod2(1, sum(a[1::2]) % 2 == 1))
    return roots


def lift_root(g: IntPolynomial, z0: int, N: int) -> LiftTrace:
    """Univariate specialisation of :func:`lift`."""
    return lift(PolySystem([g]), [z0], N)
