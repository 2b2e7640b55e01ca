"""Exact linear algebra over GF(2) and Z/2^N.

Bit matrices are ``numpy.uint8`` arrays holding 0/1. Residue matrices keep
plain Python ints so precisions beyond 64 bits work unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import RankDeficient, RankDrop
from .padic import TruncatedPadic

BitMatrix = np.ndarray


def as_bits(rows, cols: int | None = None) -> BitMatrix:
    """Reduce an integer matrix (any int size) mod 2."""
    rows = [[int(v) & 1 for v in row] for row in rows]
    if not rows:
        return np.zeros((0, cols or 0), dtype=np.uint8)
    return np.array(rows, dtype=np.uint8)


@dataclass(frozen=True)
class ResidueMatrix:
    entries: tuple[tuple[int, ...], ...]
    cols: int
    precision: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], precision: int, cols: int | None = None):
        mod = 1 << precision
        entries = tuple(tuple(int(v) % mod for v in row) for row in rows)
        if cols is None:
            if not entries:
                raise ValueError("column count needed for an empty matrix")
            cols = len(entries[0])
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged rows")
        return cls(entries, cols, precision)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def modulus(self) -> int:
        return 1 << self.precision

    def entry(self, i: int, j: int) -> TruncatedPadic:
        return TruncatedPadic(2, self.precision, self.entries[i][j])

    def mod2(self) -> BitMatrix:
        return as_bits(self.entries, self.cols).reshape(self.rows, self.cols)

    def reduce(self, k: int) -> ResidueMatrix:
        return ResidueMatrix.from_rows(self.entries, k, self.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        mod = self.modulus
        return [sum(a * b for a, b in zip(row, v)) % mod for row in self.entries]


@dataclass(frozen=True)
class BitBasis:
    """Nullspace basis read off the staircase form.

    ``pivots[i]`` is the coordinate where ``vectors[i]`` has its leading 1;
    every other basis vector vanishes there and the sequence increases.
    """

    vectors: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]
    length: int

    def __len__(self):
        return len(self.vectors)

    def as_matrix(self) -> BitMatrix:
        """Basis vectors as columns."""
        if not self.vectors:
            return np.zeros((self.length, 0), dtype=np.uint8)
        return np.array(self.vectors, dtype=np.uint8).T


def rref_mod2(A: BitMatrix) -> tuple[BitMatrix, int, list[int]]:
    R = (np.array(A, dtype=np.uint8) & 1).copy()
    if R.ndim != 2:
        raise ValueError("expected a 2-D bit matrix")
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(R[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        mask = R[:, c].astype(bool)
        mask[r] = False
        R[mask] ^= R[r]
        pivots.append(c)
        r += 1
    return R, r, pivots


def nullspace_mod2(A: BitMatrix) -> BitBasis:
    A = np.asarray(A, dtype=np.uint8)
    cols = A.shape[1]
    R, rank, pivots = rref_mod2(A)
    free = [c for c in range(cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = int(R[i, f])
        vectors.append(tuple(v))
    return BitBasis(tuple(vectors), tuple(free), cols)


def solve_affine_mod2(J: BitMatrix, a: Sequence[int]) -> list[int]:
    """Solve J t = a over GF(2) with free components of t set to 0.

    J must have full row rank; anything less raises RankDeficient.
    """
    J = np.asarray(J, dtype=np.uint8) & 1
    m, n = J.shape
    a = np.asarray(a, dtype=np.int64).reshape(m) & 1
    aug = np.concatenate([J, a.astype(np.uint8)[:, None]], axis=1)
    R, rank, pivots = rref_mod2(aug)
    if rank < m or (pivots and pivots[-1] == n):
        raise RankDeficient(f"rank of {m}x{n} system mod 2 is below {m}")
    t = [0] * n
    for i, p in enumerate(pivots):
        t[p] = int(R[i, n])
    return t


def unit_pivot_rref(A: ResidueMatrix) -> tuple[list[list[int]], list[int]]:
    """Reduced echelon form over Z/2^N using odd pivots only.

    Returns the nonzero rows and their pivot columns. Raises RankDrop if a
    row survives elimination without any odd entry: then the rank of A mod 2
    is smaller than the rank of A at this precision.
    """
    mod = A.modulus
    work = [list(r) for r in A.entries]
    pivots = []
    r = 0
    for c in range(A.cols):
        p = next((i for i in range(r, len(work)) if work[i][c] & 1), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        inv = pow(work[r][c], -1, mod)
        work[r] = [v * inv % mod for v in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(v - f * w) % mod for v, w in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    for row in work[r:]:
        if any(row):
            raise RankDrop("elimination over Z/2^N needs an even pivot; resample points")
    return work[:r], pivots


@dataclass(frozen=True)
class LiftedBasis:
    vectors: tuple[tuple[int, ...], ...]
    seeds: tuple[tuple[int, ...], ...]
    precision: int
    iterations: int

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]


def lift_nullspace(A: ResidueMatrix, B: BitBasis | None = None, N: int | None = None) -> LiftedBasis:
    """Lift a mod-2 nullspace basis of A to solutions mod 2^N.

    Each basis vector goes through N - 1 correction steps x += 2^(k-1) t,
    where t solves the staircase system mod 2 against the current defect.
    """
    N = A.precision if N is None else N
    if N > A.precision:
        raise ValueError(f"matrix known to precision {A.precision}, asked for {N}")
    if N < A.precision:
        A = A.reduce(N)
    R, pivots = unit_pivot_rref(A)
    A2 = A.mod2()
    if B is None:
        B = nullspace_mod2(A2)
    elif len(B) != A.cols - len(pivots):
        raise RankDrop(f"seed basis has {len(B)} vectors, nullity is {A.cols - len(pivots)}")
    J = as_bits(R, A.cols).reshape(len(R), A.cols)
    lifted = []
    iterations = 0
    for b in B.vectors:
        x = list(b)
        steps = 0
        for k in range(2, N + 1):
            mod = 1 << k
            half = 1 << (k - 1)
            defect = [sum(a * v for a, v in zip(row, x)) % mod for row in R]
            a = [d // half for d in defect]
            t = solve_affine_mod2(J, a) if R else [0] * A.cols
            x = [(v + half * ti) % mod for v, ti in zip(x, t)]
            steps += 1
        lifted.append(tuple(x))
        iterations = steps
    out = LiftedBasis(tuple(lifted), B.vectors, N, iterations)
    for v in out.vectors:
        if any(A.apply(v)):
            raise AssertionError("lifted vector does not solve the system")
    return out
