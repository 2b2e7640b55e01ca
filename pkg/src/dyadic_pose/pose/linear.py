"""8- and 7-point solvers: nullspace lifting, plus the pencil cubic for 7 points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from ..errors import NoLiftableRoot, RankDrop, RankTestFailed
from ..hensel import IntPolynomial, lift_root
from ..padic import TruncatedPadic
from ..residue_linalg import LiftedBasis, ResidueMatrix, lift_nullspace, nullspace_mod2
from .epipolar import Correspondence, EssentialCandidate, build_epipolar_matrix
from .matrix3 import combine, det3, reshape9


@dataclass(frozen=True)
class PencilBasis:
    """Lifted nullspace basis matrices, each solving the epipolar system mod 2^N."""

    matrices: tuple[tuple[tuple[int, ...], ...], ...]
    seeds: tuple[tuple[int, ...], ...]
    precision: int
    iterations: int

    @classmethod
    def from_lift(cls, lifted: LiftedBasis) -> PencilBasis:
        mats = tuple(tuple(tuple(r) for r in reshape9(v)) for v in lifted.vectors)
        return cls(mats, lifted.seeds, lifted.precision, lifted.iterations)

    def __len__(self):
        return len(self.matrices)


def lift_pencil(A: ResidueMatrix, expected_rank: int) -> PencilBasis:
    B = nullspace_mod2(A.mod2())
    rank = A.cols - len(B)
    if rank != expected_rank:
        raise RankDrop(f"epipolar matrix has rank {rank} mod 2, need {expected_rank}; resample points")
    return PencilBasis.from_lift(lift_nullspace(A, B))


def _system(corrs_or_matrix, N: int | None) -> ResidueMatrix:
    if isinstance(corrs_or_matrix, ResidueMatrix):
        A = corrs_or_matrix
        return A if N is None or N == A.precision else A.reduce(N)
    return build_epipolar_matrix(list(corrs_or_matrix), N)


def solve_8pt(corrs: Sequence[Correspondence] | ResidueMatrix, N: int | None = None) -> EssentialCandidate:
    """The single lifted nullspace vector of an 8x9 system of mod-2 rank 8.

    Raises RankTestFailed (carrying the candidate) when E has no rank-2 witness.
    """
    A = _system(corrs, N)
    if A.rows != 8:
        raise ValueError(f"8-point solver needs 8 correspondences, got {A.rows}")
    pencil = lift_pencil(A, 8)
    cand = EssentialCandidate.build(
        pencil.matrices[0], A.precision, "eightpt", pencil.seeds[0], pencil.iterations
    )
    if not cand.valid:
        raise RankTestFailed("lifted E has no rank-2 witness", candidate=cand)
    return cand


@dataclass(frozen=True)
class CubicCoeffs:
    a: TruncatedPadic
    b: TruncatedPadic
    c: TruncatedPadic
    d: TruncatedPadic

    @classmethod
    def from_ints(cls, a: int, b: int, c: int, d: int, N: int = 1) -> CubicCoeffs:
        mod = 1 << N
        return cls(*(TruncatedPadic(2, N, v % mod) for v in (a, b, c, d)))

    def polynomial(self) -> IntPolynomial:
        return IntPolynomial.from_coeffs([self.d.residue, self.c.residue, self.b.residue, self.a.residue])


def pencil_cubic(E1, E2, N: int) -> CubicCoeffs:
    """Coefficients of det(x E1 + (1 - x) E2) = a x^3 + b x^2 + c x + d."""
    x = IntPolynomial.variable(0, 1)
    h = det3(combine([x, 1 - x], [E1, E2]))
    coeffs = (h.coeffs() + [0, 0, 0, 0])[:4]
    d, c, b, a = coeffs
    return CubicCoeffs.from_ints(a, b, c, d, N)


class LiftableRoot(NamedTuple):
    root: int
    condition: str


def cubic_root_conditions(h: CubicCoeffs) -> list[LiftableRoot]:
    """Simple roots of h mod 2 from the parities of a, b, c, d.

    d even: 0 is a simple root iff c is odd.
    d odd, a odd: 1 is a simple root iff b, c are both even.
    d odd, a even: 1 is a simple root iff b is even and c odd.
    For d even the root 1 is also checked (h(1) even and h'(1) = a + c odd),
    which the three cases above leave open.
    """
    a, b, c, d = (v.residue & 1 for v in (h.a, h.b, h.c, h.d))
    out = []
    if d == 0:
        if c == 1:
            out.append(LiftableRoot(0, "d even, c odd"))
        if (a + b + c) % 2 == 0 and (a + c) % 2 == 1:
            out.append(LiftableRoot(1, "d even, a + b + c even, a + c odd"))
    elif a == 1:
        if b == 0 and c == 0:
            out.append(LiftableRoot(1, "d odd, a odd, b and c even"))
    elif b == 0 and c == 1:
        out.append(LiftableRoot(1, "d odd, a even, b even, c odd"))
    return out


def solve_7pt(corrs: Sequence[Correspondence] | ResidueMatrix, N: int | None = None) -> list[EssentialCandidate]:
    A = _system(corrs, N)
    if A.rows != 7:
        raise ValueError(f"7-point solver needs 7 correspondences, got {A.rows}")
    N = A.precision
    mod = 1 << N
    pencil = lift_pencil(A, 7)
    E1, E2 = pencil.matrices
    h = pencil_cubic(E1, E2, N)
    roots = cubic_root_conditions(h)
    if not roots:
        raise NoLiftableRoot("pencil cubic has no simple root mod 2")
    out, rejected = [], []
    poly = h.polynomial()
    for r in roots:
        trace = lift_root(poly, r.root, N)
        x = trace.solution[0]
        E = [[(x * E1[i][j] + (1 - x) * E2[i][j]) % mod for j in range(3)] for i in range(3)]
        cand = EssentialCandidate.build(
            E, N, "sevenpt", (r.root,), pencil.iterations + trace.steps,
            x=x, condition=r.condition,
        )
        (out if cand.valid else rejected).append(cand)
    if not out:
        raise RankTestFailed("no candidate has a rank-2 witness", candidate=rejected[0])
    return out
