"""Determinants of matrices with univariate integer-polynomial entries."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import DegreeAnomaly
from ..hensel import IntPolynomial

PolyMatrix = Sequence[Sequence[IntPolynomial]]


def bareiss_det(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k]), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def evaluate_matrix(C: PolyMatrix, z: int) -> list[list[int]]:
    return [[p.evaluate((z,)) for p in row] for row in C]


def interpolate(points: Sequence[int], values: Sequence[int]) -> list[int]:
    """Integer coefficients (low to high) of the polynomial through the samples."""
    n = len(points)
    dd = [Fraction(v) for v in values]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (points[i] - points[i - level])
    coeffs = [Fraction(0)] * n
    # Horner on the Newton form
    for k in range(n - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [s - points[k] * c for s, c in zip(shifted, coeffs)]
        coeffs[0] += dd[k]
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("interpolated polynomial has non-integer coefficients")
        out.append(int(c))
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def entry_degree_bound(C: PolyMatrix) -> int:
    """Sum over columns of the largest entry degree, a bound on deg det."""
    n = len(C)
    return sum(max(max(C[i][j].degree(), 0) for i in range(n)) for j in range(n))


def det_poly(C: PolyMatrix, max_degree: int = 10, entry_degree: int = 3) -> IntPolynomial:
    """det C(z) exactly, via evaluation at n * entry_degree + 1 integers.

    Raises DegreeAnomaly if the result has degree above ``max_degree``.
    """
    n = len(C)
    if any(p.degree() > entry_degree for row in C for p in row):
        raise ValueError(f"entries must have degree <= {entry_degree}")
    count = n * entry_degree + 1
    half = count // 2
    points = list(range(-half, count - half))
    values = [bareiss_det(evaluate_matrix(C, z)) for z in points]
    g = IntPolynomial.from_coeffs(interpolate(points, values))
    if g.degree() > max_degree:
        raise DegreeAnomaly(f"det C(z) has degree {g.degree()} > {max_degree}")
    return g
