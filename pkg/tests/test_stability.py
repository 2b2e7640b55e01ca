import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyadic_pose.stability import (
    PerturbationSpec,
    first_divergent_digit,
    perturb,
    run_coefficients,
    run_exact,
    run_matrix,
)

from helpers import solved


def test_perturb_examples():
    p = perturb([3], PerturbationSpec(4, seed=1))
    (r,) = p.noise
    assert p.perturbed == [3 + 16 * r] and p.original == [3]
    nested = [[1, 2], [3, 4]]
    p = perturb(nested, PerturbationSpec(8, seed=2))
    assert p.original == nested and nested == [[1, 2], [3, 4]]
    assert all((a - b) % 256 == 0 for ra, rb in zip(p.perturbed, nested) for a, b in zip(ra, rb))


def test_perturb_is_seeded():
    a = perturb(list(range(10)), PerturbationSpec(5, seed=3))
    b = perturb(list(range(10)), PerturbationSpec(5, seed=3))
    assert a == b


def test_spec_validation():
    with pytest.raises(ValueError):
        PerturbationSpec(4, target="everything")
    with pytest.raises(ValueError):
        PerturbationSpec(-1)


@given(st.lists(st.integers(0, 2**40), min_size=1, max_size=5), st.integers(0, 39))
def test_first_divergent_digit(xs, k):
    assert first_divergent_digit(xs, xs) is None
    ys = [x ^ (1 << k) for x in xs]
    assert first_divergent_digit(xs, ys) == k


@pytest.mark.parametrize("method", ["8pt", "7pt", "5pt"])
@pytest.mark.parametrize("N", [8, 16])
def test_digits_below_n_never_move(method, N):
    for sc, _ in solved(method, 32, 3):
        rep = run_matrix(sc, method, N, guard=16, seed=N)
        assert rep.status == "ok"
        assert rep.stable
        assert rep.compared >= 1


@pytest.mark.parametrize("method", ["7pt", "5pt"])
def test_coefficient_perturbation(method):
    for sc, _ in solved(method, 32, 3):
        rep = run_coefficients(sc, method, 12, guard=12)
        assert rep.status == "ok" and rep.stable
        assert rep.first_divergent is None or rep.first_divergent >= 12


@pytest.mark.parametrize("method", ["8pt", "7pt", "5pt"])
def test_exact_precision_is_bit_identical(method):
    for sc, _ in solved(method, 32, 3):
        assert run_exact(sc, method, 32)


def test_report_line():
    sc, _ = solved("8pt", 32, 1)[0]
    assert run_matrix(sc, "8pt", 16).line() == "8pt: first divergent digit: ≥ 16"
