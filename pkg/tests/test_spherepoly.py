from fractions import Fraction

import pytest

from soliton_obstruction.spherepoly import (
    KernelVector,
    SpherePoly,
    grad_inner,
    instantiate_kernel,
    laplacian,
    laplacian_factor,
    canonicalize,
    mean_integral,
    raw_poly,
    sphere_ring,
)


def coords(factors=1, b=0):
    return tuple(SpherePoly.coordinate(factors, b, axis) for axis in ("x", "y", "z"))


def test_canonical_form_eliminates_z_squared():
    x, y, z = coords()
    assert z * z == 1 - x * x - y * y
    assert (z ** 3).terms == (z - x * x * z - y * y * z).terms


def test_from_terms_matches_arithmetic():
    x, y, z = coords()
    p = SpherePoly.from_terms(1, {(2, 0, 0): 3, (0, 0, 2): "1/2", (0, 0, 0): -1})
    assert p == 3 * x * x + Fraction(1, 2) * z * z - 1


def test_constant_comparison():
    assert SpherePoly.constant(2, 5) == 5
    assert SpherePoly.constant(1, 0).is_zero


def test_to_json():
    x, _, _ = coords()
    assert x.to_json() == [{"exponents": [1, 0, 0], "coeff": "1"}]


def test_coordinates_are_first_eigenfunctions():
    for p in coords():
        assert laplacian(p) == -2 * p


def test_laplacian_of_quadratic():
    x, y, _ = coords()
    assert laplacian(x * x) == 2 - 6 * x * x
    assert laplacian(x * y) == -6 * x * y
    assert laplacian(SpherePoly.constant(1, 7)).is_zero


def test_laplacian_splits_over_factors():
    x1 = SpherePoly.coordinate(2, 0)
    x2 = SpherePoly.coordinate(2, 1)
    p = x1 * x2
    assert laplacian_factor(p, 0) == -2 * p
    assert laplacian_factor(p, 1) == -2 * p
    assert laplacian(p) == -4 * p


def test_grad_inner():
    x, y, _ = coords()
    assert grad_inner(x, x) == 1 - x * x
    assert grad_inner(x, y) == -1 * x * y


def test_relation_multiples_vanish_under_calculus():
    _, _, relations = sphere_ring(1)
    q = raw_poly(1, {(1, 2, 0): 3, (0, 0, 1): 1})
    raw = relations[0] * q
    assert laplacian_factor(raw, 0, 1).is_zero
    assert grad_inner(raw, coords()[0].poly, 1).is_zero


@pytest.mark.parametrize(
    "terms, mean",
    [
        ({(0, 0, 0): 1}, 1),
        ({(2, 0, 0): 1}, Fraction(1, 3)),
        ({(0, 0, 4): 1}, Fraction(1, 5)),
        ({(2, 2, 0): 1}, Fraction(1, 15)),
        ({(1, 0, 0): 1}, 0),
        ({(2, 2, 2): 1}, Fraction(1, 105)),
    ],
)
def test_sphere_moments(terms, mean):
    assert mean_integral(SpherePoly.from_terms(1, terms)) == mean


def test_product_moment():
    p = SpherePoly.from_terms(2, {(2, 0, 0, 2, 0, 0): 1})
    assert mean_integral(p) == Fraction(1, 9)


def test_kernel_vector():
    kv = KernelVector((2, 3))
    assert kv.factors == 2
    assert kv.sigma(2) == 13
    assert kv.sigma(4) == 97
    v = instantiate_kernel(kv)
    assert laplacian(v) == -2 * v
    assert mean_integral(v * v) == Fraction(13, 3)


def test_trivial_kernel_vector():
    kv = KernelVector((0, 0))
    assert kv.is_trivial
    assert instantiate_kernel(kv).is_zero


def test_kernel_vector_rejects_bad_axes():
    with pytest.raises(ValueError):
        KernelVector((1, 1), ("x",))
    with pytest.raises(ValueError):
        KernelVector((1,), ("w",))


def test_factor_index_is_checked():
    with pytest.raises(ValueError):
        laplacian_factor(SpherePoly.constant(1, 1), 1)
    with pytest.raises(ValueError):
        SpherePoly.coordinate(2, 2)


def test_canonicalize_raw_polynomial():
    _, (z, x, y), _ = sphere_ring(1)
    sx, sy, _ = coords()
    assert canonicalize(z**2 + x, 1) == 1 - sx * sx - sy * sy + sx
