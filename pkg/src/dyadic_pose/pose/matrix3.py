"""3x3 matrix helpers generic over the entry ring (ints or IntPolynomial)."""

from __future__ import annotations

from typing import Sequence

Mat = Sequence[Sequence]


def transpose(A: Mat) -> list[list]:
    return [[A[j][i] for j in range(3)] for i in range(3)]


def matmul(A: Mat, B: Mat) -> list[list]:
    return [
        [A[i][0] * B[0][j] + A[i][1] * B[1][j] + A[i][2] * B[2][j] for j in range(3)]
        for i in range(3)
    ]


def det3(A: Mat):
    return (
        A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
        - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
        + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0])
    )


def minor2(A: Mat, rows: tuple[int, int], cols: tuple[int, int]):
    (i, k), (j, l) = rows, cols
    return A[i][j] * A[k][l] - A[i][l] * A[k][j]


MINOR_INDICES = [
    ((i, k), (j, l)) for i in range(3) for k in range(i + 1, 3) for j in range(3) for l in range(j + 1, 3)
]


def skew(t: Sequence[int]) -> list[list[int]]:
    return [[0, -t[2], t[1]], [t[2], 0, -t[0]], [-t[1], t[0], 0]]


def trace_condition(E: Mat) -> list:
    """Entries of 2 E E^T E - tr(E E^T) E, row-major."""
    EEt = matmul(E, transpose(E))
    tr = EEt[0][0] + EEt[1][1] + EEt[2][2]
    M = matmul(EEt, E)
    return [M[i][j] * 2 - tr * E[i][j] for i in range(3) for j in range(3)]


def reshape9(v: Sequence) -> list[list]:
    return [list(v[0:3]), list(v[3:6]), list(v[6:9])]


def flatten(A: Mat) -> list:
    return [A[i][j] for i in range(3) for j in range(3)]


def combine(coeffs: Sequence, mats: Sequence[Mat]) -> list[list]:
    """sum_k coeffs[k] * mats[k], entrywise."""
    out = [[0] * 3 for _ in range(3)]
    for c, M in zip(coeffs, mats):
        for i in range(3):
            for j in range(3):
                out[i][j] = M[i][j] * c + out[i][j]
    return out
