"""Correspondences, the epipolar system, and candidate bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..errors import TooManyPoints
from ..padic import TruncatedPadic, from_integer, to_digit_string
from ..residue_linalg import ResidueMatrix
from .matrix3 import MINOR_INDICES, det3, minor2


@dataclass(frozen=True)
class Correspondence:
    """Homogeneous image points u (second view) and u' (first view), u^T E u' = 0."""

    u: tuple[TruncatedPadic, TruncatedPadic, TruncatedPadic]
    u_prime: tuple[TruncatedPadic, TruncatedPadic, TruncatedPadic]

    def __post_init__(self):
        for name, pt in (("u", self.u), ("u'", self.u_prime)):
            if len(pt) != 3:
                raise ValueError(f"{name} must have 3 homogeneous components")
            if not any(c.is_unit() for c in pt):
                raise ValueError(f"{name} has no unit component; rescale before encoding")

    @classmethod
    def from_ints(cls, u: Sequence[int], u_prime: Sequence[int], N: int) -> Correspondence:
        return cls(
            tuple(from_integer(int(c), 2, N) for c in u),
            tuple(from_integer(int(c), 2, N) for c in u_prime),
        )

    @property
    def precision(self) -> int:
        return min(c.precision for c in self.u + self.u_prime)

    def ints(self) -> tuple[list[int], list[int]]:
        return [c.residue for c in self.u], [c.residue for c in self.u_prime]


def epipolar_row(c: Correspondence) -> list[int]:
    """Coefficients of vec(E) (row-major) in u^T E u'."""
    mod = 1 << c.precision
    u, v = c.ints()
    return [u[i] * v[j] % mod for i in range(3) for j in range(3)]


def build_epipolar_matrix(corrs: Sequence[Correspondence], N: int | None = None) -> ResidueMatrix:
    if len(corrs) > 9:
        raise TooManyPoints(f"{len(corrs)} correspondences; at most 9 are supported")
    if N is None:
        N = min((c.precision for c in corrs), default=32)
    return ResidueMatrix.from_rows([epipolar_row(c) for c in corrs], N, cols=9)


def rank2_witness(E: Sequence[Sequence[int]], N: int) -> tuple[bool, tuple | None]:
    """(det E == 0 mod 2^N, first 2x2 minor index that is odd or None)."""
    det_ok = det3(E) % (1 << N) == 0
    for idx in MINOR_INDICES:
        if minor2(E, *idx) & 1:
            return det_ok, idx
    return det_ok, None


@dataclass(frozen=True)
class EssentialCandidate:
    E: tuple[tuple[TruncatedPadic, ...], ...]
    method: str
    seed: tuple
    iterations: int
    minor: tuple | None = None
    det_zero: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, E: Sequence[Sequence[int]], N: int, method: str, seed, iterations: int, **extra):
        mod = 1 << N
        rows = [[int(v) % mod for v in row] for row in E]
        det_ok, minor = rank2_witness(rows, N)
        return cls(
            tuple(tuple(TruncatedPadic(2, N, v) for v in row) for row in rows),
            method,
            tuple(seed),
            iterations,
            minor,
            det_ok,
            extra,
        )

    @property
    def precision(self) -> int:
        return self.E[0][0].precision

    @property
    def valid(self) -> bool:
        return self.det_zero and self.minor is not None

    def residues(self) -> list[list[int]]:
        return [[c.residue for c in row] for row in self.E]

    def reduce(self, k: int) -> list[list[int]]:
        return [[c.residue % (1 << k) for c in row] for row in self.E]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "precision": self.precision,
            "E": self.residues(),
            "digits": [[to_digit_string(c) for c in row] for row in self.E],
            "seed": list(self.seed),
            "iterations": self.iterations,
            "rank2_minor": [list(p) for p in self.minor] if self.minor else None,
            "det_zero": self.det_zero,
        }


def equal_up_to_unit(E, F, N: int) -> tuple[bool, int | None]:
    """Is E == lam * F mod 2^N for a unit lam? Returns (answer, lam).

    lam is read off the first unit entry of F.
    """
    mod = 1 << N
    E = [[int(v) % mod for v in row] for row in _ints(E)]
    F = [[int(v) % mod for v in row] for row in _ints(F)]
    for i in range(3):
        for j in range(3):
            if F[i][j] & 1:
                lam = E[i][j] * pow(F[i][j], -1, mod) % mod
                if not lam & 1:
                    return False, None
                ok = all((E[a][b] - lam * F[a][b]) % mod == 0 for a in range(3) for b in range(3))
                return ok, (lam if ok else None)
    raise ValueError("reference matrix has no unit entry")


def _ints(M):
    if isinstance(M, EssentialCandidate):
        return M.residues()
    return [[c.residue if isinstance(c, TruncatedPadic) else c for c in row] for row in M]


def candidate_residuals(cand: EssentialCandidate, corrs: Sequence[Correspondence]) -> list[int]:
    N = cand.precision
    E = cand.residues()
    mod = 1 << N
    out = []
    for c in corrs:
        u, v = c.ints()
        out.append(sum(u[i] * E[i][j] * v[j] for i in range(3) for j in range(3)) % mod)
    return out
