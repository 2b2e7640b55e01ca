"""Exact synthetic two-view scenes with ground-truth essential matrices.

Rotations come from integer quaternions q. The entries of the rotation
numerator are always divisible by the 2-part of |q|^2, so after cancelling
it every denominator is odd (a 2-adic unit). Odd |q|^2 alone would force
R = I mod 2, and sampling W = 1 for every point would make u an affine
function of u' mod 2; either one keeps the epipolar matrix below rank 7
mod 2, so both are varied here. The first camera is [I | 0] and produces u';
the second is [R | t] and produces u, giving u^T skew(t) R u' = 0.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .pose.matrix3 import matmul, skew, trace_condition
from .pose.epipolar import Correspondence


def rotation_numerator(q: Sequence[int]) -> tuple[list[list[int]], int]:
    """Integer matrix R_num and odd n with R = R_num / n."""
    a, b, c, d = q
    n = a * a + b * b + c * c + d * d
    if n == 0:
        raise ValueError("zero quaternion")
    R = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ]
    while n % 2 == 0:
        n //= 2
        R = [[v // 2 for v in row] for row in R]
    return R, n


@dataclass(frozen=True)
class CameraMatrix:
    """3x4 rational camera: numerator / denominator with an odd denominator."""

    numerator: tuple[tuple[int, ...], ...]
    denominator: int

    def __post_init__(self):
        if self.denominator % 2 == 0:
            raise ValueError("camera denominator must be odd")
        if _rank_3x4(self.numerator) != 3:
            raise ValueError("camera matrix must have rank 3")

    def project(self, U: Sequence[int]) -> list[int]:
        """Image of a homogeneous point, scaled by the (odd) denominator."""
        return [sum(r * u for r, u in zip(row, U)) for row in self.numerator]


def _rank_3x4(M) -> int:
    from fractions import Fraction

    rows = [[Fraction(v) for v in row] for row in M]
    rank = 0
    for c in range(4):
        p = next((i for i in range(rank, 3) if rows[i][c]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        for i in range(3):
            if i != rank and rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class Scene:
    q: tuple[int, int, int, int]
    t: tuple[int, int, int]
    cameras: tuple[CameraMatrix, CameraMatrix]
    points: tuple[tuple[int, int, int, int], ...]
    E_true: tuple[tuple[int, ...], ...]
    denominator: int
    correspondences: tuple[tuple[tuple[int, int, int], tuple[int, int, int]], ...]
    seed: int | None = field(default=None, compare=False)

    def corrs(self, N: int, count: int | None = None) -> list[Correspondence]:
        pairs = self.correspondences if count is None else self.correspondences[:count]
        return [Correspondence.from_ints(u, v, N) for u, v in pairs]

    def ground_truth_json(self) -> dict:
        return {
            "seed": self.seed,
            "q": list(self.q),
            "t": list(self.t),
            "denominator": self.denominator,
            "E_true": [list(r) for r in self.E_true],
            "cameras": [
                {"numerator": [list(r) for r in cam.numerator], "denominator": cam.denominator}
                for cam in self.cameras
            ],
            "points": [list(p) for p in self.points],
        }

    def correspondence_lines(self) -> list[str]:
        return [json.dumps({"u": list(u), "v": list(v)}) for u, v in self.correspondences]


def _has_odd(v: Sequence[int]) -> bool:
    return any(c % 2 for c in v)


def _sample_quaternion(rng: random.Random, bound: int) -> tuple[int, int, int, int]:
    while True:
        q = tuple(rng.randint(-bound, bound) for _ in range(4))
        if any(q):
            return q


def _sample_translation(rng: random.Random, bound: int) -> tuple[int, int, int]:
    while True:
        t = tuple(rng.randint(-bound, bound) for _ in range(3))
        if _has_odd(t):
            return t


def make_scene(
    q: Sequence[int],
    t: Sequence[int],
    points: Sequence[Sequence[int]],
    seed: int | None = None,
) -> Scene:
    """Build a scene from explicit motion and 3D points (W = 1 appended if absent)."""
    q = tuple(int(c) for c in q)
    t = tuple(int(c) for c in t)
    R, n = rotation_numerator(q)
    if not _has_odd(t):
        raise ValueError("translation needs an odd entry")
    cam1 = CameraMatrix(((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)), 1)
    cam2 = CameraMatrix(tuple(tuple(R[i]) + (n * t[i],) for i in range(3)), n)
    E = matmul(skew(t), R)
    pts, corrs = [], []
    for P in points:
        U = tuple(int(c) for c in P) + ((1,) if len(P) == 3 else ())
        u_prime = cam1.project(U)
        u = cam2.project(U)
        if not (_has_odd(u) and _has_odd(u_prime)):
            raise ValueError(f"point {U} projects without a unit coordinate")
        lhs = sum(u[i] * E[i][j] * u_prime[j] for i in range(3) for j in range(3))
        if lhs != 0:
            raise AssertionError("epipolar identity violated")
        pts.append(U)
        corrs.append((tuple(u), tuple(u_prime)))
    return Scene(
        q, t, (cam1, cam2), tuple(pts), tuple(tuple(r) for r in E), n, tuple(corrs), seed
    )


def gen_scene(
    seed: int,
    n_points: int = 8,
    bound: int = 64,
    motion_bound: int = 8,
    w_bound: int = 8,
    q: Sequence[int] | None = None,
    t: Sequence[int] | None = None,
) -> Scene:
    rng = random.Random(seed)
    q = tuple(q) if q is not None else _sample_quaternion(rng, motion_bound)
    t = tuple(t) if t is not None else _sample_translation(rng, motion_bound)
    R, n = rotation_numerator(q)
    points = []
    while len(points) < n_points:
        U = tuple(rng.randint(-bound, bound) for _ in range(3)) + (rng.randint(1, w_bound),)
        u_prime = U[:3]
        u = [sum(R[i][j] * U[j] for j in range(3)) + n * t[i] * U[3] for i in range(3)]
        # both views need a unit coordinate
        if _has_odd(u) and _has_odd(u_prime) and U not in points:
            points.append(U)
    return make_scene(q, t, points, seed=seed)


def is_essential_exact(E) -> bool:
    return all(v == 0 for v in trace_condition(E))
