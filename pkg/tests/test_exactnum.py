from fractions import Fraction

import pytest

from soliton_obstruction import published
from soliton_obstruction.errors import (
    DivisionByZero,
    InconsistentSystem,
    PoleAtPoint,
    SingularMatrix,
    ZeroPolynomial,
)
from soliton_obstruction.exactnum import (
    ONE,
    ZERO,
    MatN,
    PolyN,
    RatN,
    integer_roots,
    mat_solve,
    rat,
    rat_str,
    ratn,
    ratn_arith,
    ratn_eval,
)


@pytest.mark.parametrize("value, expected", [(3, Fraction(3)), ("3/4", Fraction(3, 4)), (" -6/8 ", Fraction(-3, 4))])
def test_rat_parses_exact_values(value, expected):
    assert rat(value) == expected


def test_rat_rejects_garbage():
    with pytest.raises(ValueError):
        rat("three")
    with pytest.raises(ValueError):
        rat("1/0")
    with pytest.raises(TypeError):
        rat(None)


def test_rat_str():
    assert rat_str(Fraction(-3, 4)) == "-3/4"
    assert rat_str(5) == "5"


def test_polyn_coefficients_and_evaluation():
    p = PolyN.from_coefficients([1, 0, 2])
    assert p.coefficients == [1, 0, 2]
    assert p.degree == 2
    assert p.evaluate(3) == 19
    assert p.evaluate("1/2") == Fraction(3, 2)


def test_zero_polynomial():
    p = PolyN.from_coefficients([0, 0])
    assert p.is_zero
    assert p.degree == -1
    with pytest.raises(ZeroPolynomial):
        integer_roots(p)


@pytest.mark.parametrize(
    "coefficients, roots",
    [
        ([-6, 1, 1], {2, -3}),
        ([0, -5, 1], {0, 5}),
        ([-1, 2], set()),
        (["1/2", "-1/2"], {1}),
        ([0, 0, 0, 1], {0}),
        ([6, -5, 1], {2, 3}),
    ],
)
def test_integer_roots(coefficients, roots):
    assert integer_roots(PolyN.from_coefficients(coefficients)) == roots


def test_published_b1_numerator_has_no_integer_roots():
    assert integer_roots(PolyN.from_coefficients(published.B1_NUMERATOR)) == frozenset()


def test_ratn_is_canonical():
    assert ratn("(n**2 - 1)/(n - 1)") == ratn("n + 1")
    assert ratn("2*n/(4*n)") == Fraction(1, 2)
    assert RatN.of(Fraction(1, 3)) == Fraction(1, 3)
    assert hash(ratn("(n**2 - 1)/(n - 1)")) == hash(ratn("n + 1"))


def test_ratn_evaluation():
    assert ratn("-(13*n - 38)/60").evaluate(4) == Fraction(-7, 30)
    value = ratn("(n - 2)/(6*n)")
    assert value.num.evaluate(4) / value.den.evaluate(4) == Fraction(1, 12)


def test_pole_at_point():
    with pytest.raises(PoleAtPoint) as info:
        ratn_eval(ratn("n/(n - 1)"), 1)
    assert info.value.point == "1"


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ratn("n") / 0


@pytest.mark.parametrize(
    "op, expected",
    [("add", "n + 1"), ("sub", "n - 1"), ("mul", "n"), ("div", "n")],
)
def test_ratn_arith(op, expected):
    assert ratn_arith(ratn("n"), ONE, op) == ratn(expected)


def test_matrix_basics():
    A = MatN.from_rows([[1, 2], [3, 4]])
    assert A.det() == -2
    assert A.apply([1, 1]) == (ratn("3"), ratn("7"))
    assert MatN.identity(2).shift(3) == MatN.identity(2).scale(4)
    assert MatN.identity(2).with_entry(0, 1, 5).entry(0, 1) == 5
    assert MatN.from_columns([[1, 3], [2, 4]]) == A


def test_mat_solve_over_rational_functions():
    n = RatN.n()
    A = MatN.from_rows([[2, 0], [0, n]])
    assert mat_solve(A, [4, n * n]) == (ratn("2"), n)


def test_mat_solve_mixed_system():
    n = RatN.n()
    A = MatN.from_rows([[n, 1], [1, n]])
    x = mat_solve(A, [n + 1, n + 1])
    assert x == (ONE, ONE)


def test_mat_solve_singular():
    with pytest.raises(SingularMatrix):
        mat_solve(MatN.from_rows([[1, 1], [1, 1]]), [1, 2])


def test_masked_solve():
    A = MatN.from_rows([[1, 0], [0, 0]])
    assert mat_solve(A, [3, 0], mask=[0]) == (ratn("3"), ZERO)


def test_masked_solve_detects_inconsistency():
    A = MatN.from_rows([[1, 0], [1, 0]])
    with pytest.raises(InconsistentSystem):
        mat_solve(A, [3, 5], mask=[0])


def test_mat_solve_needs_square_matrix():
    with pytest.raises(ValueError):
        mat_solve(MatN.from_rows([[1, 2]]), [1])


def random_ratn(rng) -> RatN:
    """Random element of Q(n) whose denominator n² + k has no rational root."""
    num = PolyN.from_coefficients([int(c) for c in rng.integers(-9, 10, size=3)] + [1])
    den = PolyN.from_coefficients([int(rng.integers(1, 6)), 0, 1])
    return RatN.from_polys(num, den)


def test_ratn_round_trips(rng):
    for _ in range(25):
        a, b = random_ratn(rng), random_ratn(rng)
        assert (a + b) - b == a
        assert (a * b) / b == a


def test_ratn_eval_is_multiplicative(rng):
    for _ in range(25):
        a, b = random_ratn(rng), random_ratn(rng)
        x = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8)))
        assert ratn_eval(a * b, x) == ratn_eval(a, x) * ratn_eval(b, x)
        assert ratn_eval(a + b, x) == ratn_eval(a, x) + ratn_eval(b, x)


def test_integer_roots_of_random_products(rng):
    n = RatN.n()
    for _ in range(25):
        roots = [int(r) for r in rng.integers(-20, 21, size=int(rng.integers(1, 5)))]
        p = n * 2 + 1
        for r in roots:
            p = p * (n - r)
        assert integer_roots(p.num) == set(roots)
