"""5-point solver: trace condition, hidden-variable matrix C(z), det C(z) = g(z).

With E = x E1 + y E2 + z E3 + E4, the nine trace-condition entries and
det E are cubics in (x, y, z). Collecting them against the ten monomials
in (x, y) gives C(z) X = 0 with C(z) square, so g(z) = det C(z) vanishes at
every solution.

Every trace entry reduces mod 2 to (sum of entries of E)^2 times an entry of
E, so C(z) has rank at most 4 mod 2 and g always has even coefficients.
The solver therefore lifts roots of g / 2^v, where 2^v is the largest power
of two dividing g at the data precision. This costs v digits: candidates
are certified to precision N - v, and their ``precision`` says so.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

import numpy as np

from ..errors import NoLiftableRoot, RankDeficient, RankDrop, XYRecoveryFailed
from ..hensel import IntPolynomial, PolySystem, jacobian_mod2, lift, lift_root, univariate_roots_mod2
from ..residue_linalg import ResidueMatrix, rref_mod2
from .epipolar import Correspondence, EssentialCandidate
from .linear import PencilBasis, _system, lift_pencil
from .matrix3 import combine, det3, matmul, trace_condition, transpose
from .polymat import det_poly

# (deg x, deg y) of x^3, y^3, x^2 y, x y^2, x^2, y^2, x y, x, y, 1
MONOMIALS: tuple[tuple[int, int], ...] = (
    (3, 0), (0, 3), (2, 1), (1, 2), (2, 0), (0, 2), (1, 1), (1, 0), (0, 1), (0, 0),
)

_X, _Y, _Z = (IntPolynomial.variable(i, 3) for i in range(3))


def pencil_matrix(pencil: Sequence) -> list[list[IntPolynomial]]:
    """x E1 + y E2 + z E3 + E4 with polynomial entries."""
    E1, E2, E3, E4 = pencil
    return combine([_X, _Y, _Z, IntPolynomial.constant(1, 3)], [E1, E2, E3, E4])


def cross_quartics(E) -> list[IntPolynomial]:
    """e_ab (E E^T E)_cd - e_cd (E E^T E)_ab for all index pairs.

    Each equals (e_ab T_cd - e_cd T_ab) / 2 for the trace entries T, so it
    vanishes on every solution of the trace condition, yet it is not
    degenerate mod 2.
    """
    M = matmul(matmul(E, transpose(E)), E)
    flat_E = [E[i][j] for i in range(3) for j in range(3)]
    flat_M = [M[i][j] for i in range(3) for j in range(3)]
    return [flat_E[p] * flat_M[q] - flat_E[q] * flat_M[p] for p, q in combinations(range(9), 2)]


@dataclass(frozen=True)
class HiddenVarSystem:
    equations: tuple[IntPolynomial, ...]
    C: tuple[tuple[IntPolynomial, ...], ...]
    g: IntPolynomial
    monomials: tuple[tuple[int, int], ...] = MONOMIALS

    def C_at(self, z: int) -> list[list[int]]:
        return [[p.evaluate((z,)) for p in row] for row in self.C]

    def reassemble(self) -> list[IntPolynomial]:
        """sum_j C_ij(z) X_j as polynomials in (x, y, z)."""
        out = []
        for row in self.C:
            terms = {}
            for (a, b), p in zip(self.monomials, row):
                for (c,), coeff in p.terms.items():
                    terms[(a, b, c)] = coeff
            out.append(IntPolynomial(3, terms))
        return out


def collect_hidden(equations: Sequence[IntPolynomial]) -> list[list[IntPolynomial]]:
    index = {m: k for k, m in enumerate(MONOMIALS)}
    C = []
    for f in equations:
        row = [dict() for _ in MONOMIALS]
        for (a, b, c), coeff in f.terms.items():
            if (a, b) not in index:
                raise ValueError(f"monomial x^{a} y^{b} outside the hidden-variable basis")
            row[index[(a, b)]][(c,)] = coeff
        C.append([IntPolynomial(1, r) for r in row])
    return C


def build_hidden_var_system(pencil: PencilBasis | Sequence) -> HiddenVarSystem:
    mats = pencil.matrices if isinstance(pencil, PencilBasis) else pencil
    if len(mats) != 4:
        raise ValueError("the 5-point pencil has four basis matrices")
    E = pencil_matrix(mats)
    equations = tuple(trace_condition(E)) + (det3(E),)
    C = collect_hidden(equations)
    return HiddenVarSystem(equations, tuple(tuple(r) for r in C), det_poly(C))


def _xy_candidates(eqs_xy: list[IntPolynomial], pool: list[IntPolynomial], prec: int):
    """Mod-2 seeds (x, y) of all ten equations, each lifted on a pair of equations
    whose Jacobian has rank 2 mod 2 at the seed."""
    found = []
    for seed in product((0, 1), repeat=2):
        if any(f.eval_mod(seed, 2) for f in eqs_xy):
            continue
        for i, j in combinations(range(len(pool)), 2):
            pair = PolySystem([pool[i], pool[j]])
            if any(pair.eval_mod(seed, 2)):
                continue
            if rref_mod2(jacobian_mod2(pair, seed))[1] < 2:
                continue
            trace = lift(pair, seed, prec)
            found.append((seed, (i, j), trace))
            break
    return found


def solve_5pt(
    corrs: Sequence[Correspondence] | ResidueMatrix,
    N: int | None = None,
    use_quartics: bool = True,
) -> list[EssentialCandidate]:
    """Candidates E = x E1 + y E2 + z E3 + E4 at precision N - v.

    The returned candidates satisfy the epipolar constraints, all nine
    trace-condition entries and det E = 0 at their own precision.
    """
    A = _system(corrs, N)
    if A.rows != 5:
        raise ValueError(f"5-point solver needs 5 correspondences, got {A.rows}")
    N = A.precision
    pencil = lift_pencil(A, 5)
    system = build_hidden_var_system(pencil)
    g = system.g
    v = g.content_valuation(N)
    if v >= N:
        raise NoLiftableRoot(f"det C(z) vanishes mod 2^{N}")
    prec = N - v
    g_red = IntPolynomial(1, {e: c >> v for e, c in g.terms.items()})
    roots = [r for r in univariate_roots_mod2(g_red) if r.simple]
    if not roots:
        raise NoLiftableRoot(f"g / 2^{v} has no simple root mod 2")
    mod = 1 << prec
    E_poly = pencil_matrix(pencil.matrices)
    quartics = cross_quartics(E_poly) if use_quartics else []
    out = []
    for r in roots:
        ztrace = lift_root(g_red, r.value, prec)
        z = ztrace.solution[0]
        eqs_xy = [f.partial_eval(2, z, mod) for f in system.equations]
        pool = eqs_xy + [f.partial_eval(2, z, mod) for f in quartics]
        for seed, pair, xytrace in _xy_candidates(eqs_xy, pool, prec):
            x, y = xytrace.solution
            if any(f.eval_mod((x, y), mod) for f in eqs_xy):
                continue
            E = combine([x, y, z, 1], pencil.matrices)
            cand = EssentialCandidate.build(
                E, prec, "fivept", (r.value, *seed), pencil.iterations + ztrace.steps + xytrace.steps,
                x=x, y=y, z=z, content=v, pair=pair,
            )
            if cand.valid and cand.residues() not in [c.residues() for c in out]:
                out.append(cand)
    if not out:
        raise XYRecoveryFailed(f"no (x, y) lifted to a verified candidate at precision {prec}")
    return out


def raw_root_test(g: IntPolynomial) -> list:
    """Simple roots of g itself mod 2, without removing its 2-power content."""
    return [r for r in univariate_roots_mod2(g) if r.simple]


def det_mod_2_64_oracle(system: HiddenVarSystem, zs: Sequence[int]) -> np.ndarray:
    """det C(z) mod 2^64 at each z by a division-free word-size determinant."""
    from .. import _kernels

    mats = _kernels.to_words([system.C_at(z) for z in zs])
    return _kernels.det_mod_2_64(mats)
