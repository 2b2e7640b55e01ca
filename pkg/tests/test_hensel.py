import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyadic_pose.errors import RankDeficient
from dyadic_pose.hensel import (
    IntPolynomial,
    PolySystem,
    eval_mod,
    jacobian_mod2,
    lift,
    lift_root,
    lift_step,
    univariate_roots_mod2,
)

X = IntPolynomial.variable(0, 1)
QUAD = X**2 + X + 2
X1, X2 = IntPolynomial.variable(0, 2), IntPolynomial.variable(1, 2)


def test_eval_mod_examples():
    assert eval_mod(QUAD, [0], 1) == 0
    assert eval_mod(QUAD, [1], 2) == 0
    assert eval_mod(IntPolynomial.constant(1, 3), [5, 6, 7], 4) == 1
    with pytest.raises(ValueError):
        eval_mod(QUAD, [1, 2], 3)


def test_jacobian_examples():
    assert jacobian_mod2(PolySystem([QUAD]), [0]).tolist() == [[1]]
    assert jacobian_mod2(PolySystem([X1 * X2]), [0, 0]).tolist() == [[0, 0]]
    F = PolySystem([X1 + X2, X2])
    for x in itertools.product(range(4), repeat=2):
        assert jacobian_mod2(F, x).tolist() == [[1, 1], [0, 1]]


def test_lift_step_examples():
    F = PolySystem([QUAD])
    assert lift_step(F, [0], 2) == [2]
    assert lift_step(F, [2], 3) == [2]
    with pytest.raises(RankDeficient):
        lift_step(PolySystem([X**2]), [0], 2)


def test_lift_examples():
    # brute force: X^2 + X + 2 = 0 mod 16
    assert [x for x in range(16) if (x * x + x + 2) % 16 == 0] == [5, 10]
    F = PolySystem([QUAD])
    assert lift(F, [0], 4).solution == (10,)
    assert lift(F, [1], 4).solution == (5,)
    assert lift(PolySystem([X - 7]), [1], 3).solution == (7,)
    assert lift(F, [0], 4).steps == 3


def test_lift_rejects_bad_seed():
    with pytest.raises(ValueError):
        lift(PolySystem([X - 1]), [0], 4)
    with pytest.raises(RankDeficient):
        lift(PolySystem([X**2]), [0], 4)


def test_roots_mod2_examples():
    assert univariate_roots_mod2(X**2 + X) == [(0, True), (1, True)]
    assert univariate_roots_mod2(X**2) == [(0, False)]
    # g(1) = 4 is even too, and g'(1) = 11 is odd
    g = X**10 + X + 2
    assert univariate_roots_mod2(g) == [(0, True), (1, True)]


def test_toy_degree_ten_lift():
    # brute force oracle on z^10 + z + 2 mod 8
    g = X**10 + X + 2
    assert [z for z in range(8) if g(z) % 8 == 0] == [5, 6]
    tr = lift_root(g, 0, 3)
    assert [s[0] for s in tr.solutions] == [0, 2, 6]
    assert lift_root(g, 1, 3).solution == (5,)


def test_underdetermined_system_takes_one_branch():
    F = PolySystem([X1 * X1 + X2 - 3])
    tr = lift(F, [1, 0], 10)
    assert F.eval_mod(tr.solution, 1 << 10) == [0]


def test_system_shape_checks():
    with pytest.raises(ValueError):
        PolySystem([X, X, X])
    with pytest.raises(ValueError):
        PolySystem([X, X1])
    with pytest.raises(ValueError):
        PolySystem([])


def test_polynomial_algebra():
    p = (X1 + 2 * X2 - 1) ** 3
    assert p(2, 5) == (2 + 10 - 1) ** 3
    assert (p - p).is_zero()
    assert p.degree() == 3 and p.degree(0) == 3
    assert IntPolynomial.from_coeffs([2, 1, 1]) == QUAD
    assert QUAD.coeffs() == [2, 1, 1]
    assert (3 - X)(1) == 2
    q = (X1 * X2 + 3).partial_eval(1, 5)
    assert q == 5 * X + 3 or q == IntPolynomial(1, {(1,): 5, (0,): 3})
    assert IntPolynomial(1, {(0,): 12, (2,): 40}).content_valuation(10) == 2
    assert IntPolynomial(1).content_valuation(7) == 7


small = st.integers(-8, 8)


@st.composite
def polys2(draw, degree=3):
    terms = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            terms[(a, b)] = draw(small)
    return IntPolynomial(2, terms)


@given(polys2(), polys2(), st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 9))
def test_derivatives_match_taylor(f, g, x, y, h):
    # h^2 divides f(x + h e_j) - f(x) - h df/dX_j(x)
    assert (f(x + h, y) - f(x, y) - h * f.diff(0)(x, y)) % (h * h) == 0
    assert (f(x, y + h) - f(x, y) - h * f.diff(1)(x, y)) % (h * h) == 0
    assert (f * g).diff(0) == f.diff(0) * g + f * g.diff(0)
    assert (f**3).diff(1) == 3 * f**2 * f.diff(1)


def random_square_system(rng, degree=2):
    def poly():
        return IntPolynomial(
            2, {(a, b): rng.randint(-8, 8) for a in range(degree + 1) for b in range(degree + 1 - a)}
        )

    while True:
        F = PolySystem([poly(), poly()])
        seed = [rng.randint(0, 1), rng.randint(0, 1)]
        # plant the mod-2 root by fixing constant parities
        polys = []
        for f in F:
            v = f.eval_mod(seed, 2)
            polys.append(f - v if abs(f.terms.get((0, 0), 0) - v) <= 8 else f + v)
        F = PolySystem(polys)
        J = jacobian_mod2(F, seed)
        if (int(J[0, 0]) * int(J[1, 1]) + int(J[0, 1]) * int(J[1, 0])) % 2:
            return F, seed


def brute_roots(F, N):
    mod = 1 << N
    return [x for x in itertools.product(range(mod), repeat=2) if not any(F.eval_mod(x, mod))]


@given(st.integers(0, 10**6), st.integers(2, 6))
def test_square_lift_is_the_unique_root(s, N):
    F, seed = random_square_system(random.Random(s))
    tr = lift(F, seed, N)
    same_class = [x for x in brute_roots(F, N) if [v % 2 for v in x] == seed]
    assert same_class == [tr.solution]


@given(st.integers(0, 10**6), st.integers(2, 12))
def test_trace_is_a_compatible_chain(s, N):
    F, seed = random_square_system(random.Random(s))
    tr = lift(F, seed, N)
    for k, x in enumerate(tr.solutions, 1):
        assert not any(F.eval_mod(x, 1 << k))
        for j in range(1, k):
            assert all((a - b) % (1 << j) == 0 for a, b in zip(x, tr.solutions[j - 1]))


@given(st.integers(0, 10**6), st.integers(2, 16), st.data())
def test_perturbation_by_2n_keeps_the_trace(s, N, data):
    rng = random.Random(s)
    F, seed = random_square_system(rng)
    G, _ = random_square_system(rng)
    scale = data.draw(st.sampled_from([1, -1, 3])) << N
    tr = lift(F, seed, N)
    assert lift(F.perturbed(G, scale), seed, N) == tr
