"""Seeded scene pools shared by the test modules."""

from functools import lru_cache

from dyadic_pose.errors import SolverFailure
from dyadic_pose.pose import POINTS, SOLVERS
from dyadic_pose.scene import gen_scene


def outcome(scene, method, N):
    try:
        out = SOLVERS[method](scene.corrs(N, POINTS[method]), N)
    except SolverFailure as exc:
        return exc.status, exc
    return "ok", out if isinstance(out, list) else [out]


@lru_cache(maxsize=None)
def solved(method, N, count, start=0, limit=4000, points=8):
    """First ``count`` seeds from ``start`` whose scene the method solves at N."""
    hits = []
    for seed in range(start, start + limit):
        scene = gen_scene(seed, n_points=points)
        status, out = outcome(scene, method, N)
        if status == "ok":
            hits.append((scene, out))
            if len(hits) == count:
                break
    return tuple(hits)
