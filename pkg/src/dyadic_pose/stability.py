"""Perturbation by multiples of 2^N and the digit-stability experiment.

Noise added to the data is divisible by 2^N, so it is invisible mod 2^N.
The experiment solves the clean and the perturbed problem at a higher
working precision N + guard and reports the lowest digit where any
matched candidate differs. For the linear solvers that digit is never
below N. For the 5-point solver the certified precision is N - v, where
2^v is the content of g, and divergence is bounded by that instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import RankTestFailed, SolverFailure
from .hensel import IntPolynomial, lift_root, univariate_roots_mod2
from .pose import POINTS, SOLVERS
from .pose.epipolar import EssentialCandidate
from .pose.fivepoint import build_hidden_var_system
from .pose.linear import cubic_root_conditions, lift_pencil, pencil_cubic
from .residue_linalg import ResidueMatrix
from .scene import Scene

TARGETS = ("matrix", "cubic", "g")


@dataclass(frozen=True)
class PerturbationSpec:
    """Noise 2^N * r with r uniform in [-bound, bound], drawn from ``seed``."""

    precision: int
    target: str = "matrix"
    seed: int = 0
    bound: int = 1 << 16

    def __post_init__(self):
        if self.precision < 0:
            raise ValueError("precision must be nonnegative")
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")


class Perturbation(NamedTuple):
    original: list
    perturbed: list
    noise: list


def perturb(values, spec: PerturbationSpec) -> Perturbation:
    """Add 2^N * r to every entry of a flat or nested integer list."""
    rng = random.Random(spec.seed)
    scale = 1 << spec.precision

    def walk(v):
        if isinstance(v, (list, tuple)):
            pairs = [walk(x) for x in v]
            return [p for p, _ in pairs], [r for _, r in pairs]
        r = rng.randint(-spec.bound, spec.bound)
        return int(v) + scale * r, r

    original = _copy(values)
    perturbed, noise = walk(values)
    return Perturbation(original, perturbed, noise)


def _copy(v):
    return [_copy(x) for x in v] if isinstance(v, (list, tuple)) else int(v)


def epipolar_integers(scene: Scene, count: int) -> list[list[int]]:
    """Unreduced integer rows u_i u'_j of the epipolar system."""
    return [[u[i] * v[j] for i in range(3) for j in range(3)] for u, v in scene.correspondences[:count]]


def first_divergent_digit(xs: Sequence[int], ys: Sequence[int]) -> int | None:
    """Lowest bit index at which some pair differs, or None if all agree."""
    diffs = [x ^ y for x, y in zip(xs, ys) if x != y]
    if not diffs:
        return None
    return min((d & -d).bit_length() - 1 for d in diffs)


@dataclass
class StabilityReport:
    method: str
    target: str
    precision: int
    working_precision: int
    bound: int
    first_divergent: int | None
    status: str = "ok"
    compared: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return self.status == "ok" and (self.first_divergent is None or self.first_divergent >= self.bound)

    def line(self) -> str:
        if self.status != "ok":
            return f"{self.method}: {self.status}"
        digit = self.first_divergent
        if digit is None or digit >= self.precision:
            where = f"≥ {self.precision}"
        elif digit >= self.bound:
            where = f"{digit} (certified only to {self.bound})"
        else:
            where = f"{digit} (below the certified {self.bound})"
        return f"{self.method}: first divergent digit: {where}"


def _flat(cands: Sequence[EssentialCandidate]) -> dict:
    return {c.seed: [v for row in c.residues() for v in row] for c in cands}


def _as_list(out) -> list[EssentialCandidate]:
    return out if isinstance(out, list) else [out]


def _solve_digits(solver, A: ResidueMatrix) -> list[EssentialCandidate]:
    """Candidates for digit comparison, including ones the rank test rejects.

    Perturbed data is essential only mod 2^N, so above that digit det E need
    not vanish; the digits below it are what the experiment is about.
    """
    try:
        return _as_list(solver(A))
    except RankTestFailed as exc:
        if exc.candidate is None:
            raise
        return [exc.candidate]


def _compare(a: dict, b: dict) -> tuple[int | None, int]:
    first, compared = None, 0
    for seed in a.keys() & b.keys():
        d = first_divergent_digit(a[seed], b[seed])
        compared += 1
        if d is not None and (first is None or d < first):
            first = d
    if a.keys() != b.keys():
        # a candidate that exists on one side only diverges at the seed digit
        first = 0
    return first, compared


def run_matrix(scene: Scene, method: str, N: int, guard: int = 16, seed: int = 0) -> StabilityReport:
    """Clean vs perturbed epipolar matrix, both solved at N + guard."""
    W = N + guard
    rows = epipolar_integers(scene, POINTS[method])
    pert = perturb(rows, PerturbationSpec(N, "matrix", seed))
    solver = SOLVERS[method]
    try:
        clean = _solve_digits(solver, ResidueMatrix.from_rows(pert.original, W, cols=9))
        noisy = _solve_digits(solver, ResidueMatrix.from_rows(pert.perturbed, W, cols=9))
    except SolverFailure as exc:
        return StabilityReport(method, "matrix", N, W, N, None, exc.status)
    bound = N
    content = max((c.extra.get("content", 0) for c in clean + noisy), default=0)
    if method == "5pt":
        bound = N - content
    first, compared = _compare(_flat(clean), _flat(noisy))
    return StabilityReport(method, "matrix", N, W, bound, first, "ok", compared, {"content": content})


def run_coefficients(scene: Scene, method: str, N: int, guard: int = 16, seed: int = 0) -> StabilityReport:
    """Perturb the cubic h (7-point) or g / 2^v (5-point) and compare lifted roots."""
    W = N + guard
    target = "cubic" if method == "7pt" else "g"
    if method not in ("7pt", "5pt"):
        raise ValueError("coefficient perturbation applies to 7pt and 5pt")
    rows = epipolar_integers(scene, POINTS[method])
    A = ResidueMatrix.from_rows(rows, W, cols=9)
    try:
        if method == "7pt":
            pencil = lift_pencil(A, 7)
            h = pencil_cubic(*pencil.matrices, W)
            roots = [r.root for r in cubic_root_conditions(h)]
            poly = h.polynomial()
        else:
            pencil = lift_pencil(A, 5)
            g = build_hidden_var_system(pencil).g
            v = g.content_valuation(W)
            poly = IntPolynomial(1, {e: c >> v for e, c in g.terms.items()})
            roots = [r.value for r in univariate_roots_mod2(poly) if r.simple]
    except SolverFailure as exc:
        return StabilityReport(method, target, N, W, N, None, exc.status)
    coeffs = poly.coeffs()
    pert = perturb(coeffs, PerturbationSpec(N, target, seed))
    noisy = IntPolynomial.from_coeffs(pert.perturbed)
    first, compared = None, 0
    for z0 in roots:
        a = lift_root(poly, z0, W)
        b = lift_root(noisy, z0, W)
        # every intermediate solution of the trace, not just the last one
        for xa, xb in zip(a.solutions, b.solutions):
            d = first_divergent_digit(xa, xb)
            if d is not None and (first is None or d < first):
                first = d
        compared += 1
    if not roots:
        return StabilityReport(method, target, N, W, N, None, "NoLiftableRoot")
    return StabilityReport(method, target, N, W, N, first, "ok", compared)


def run_exact(scene: Scene, method: str, N: int, seed: int = 0) -> bool:
    """Solve at exactly N on clean and perturbed data: residues must be bit-identical."""
    rows = epipolar_integers(scene, POINTS[method])
    pert = perturb(rows, PerturbationSpec(N, "matrix", seed))
    solver = SOLVERS[method]
    outs = []
    for data in (pert.original, pert.perturbed):
        try:
            outs.append(_flat(_as_list(solver(ResidueMatrix.from_rows(data, N, cols=9)))))
        except SolverFailure as exc:
            outs.append(exc.status)
    return outs[0] == outs[1]
