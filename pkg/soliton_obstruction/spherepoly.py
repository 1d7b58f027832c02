"""
Polynomial functions on products of round 2-spheres.

A polynomial in the ambient coordinates (x_b, y_b, z_b) of each factor is
reduced modulo the sphere relations x_b² + y_b² + z_b² = 1. The generators are
ordered z_b before x_b, y_b under a graded order, so the relations form a
Gröbner basis with leading terms z_b² and the remainder of sympy's multivariate
division is the canonical form (z_b exponent 0 or 1).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Dict, Tuple, Union

from sympy import factorial2
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

from .exactnum import rat, rat_str

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z")
# slot of each axis inside a factor's block of ring generators
_SLOT = {"z": 0, "x": 1, "y": 2}


@lru_cache(maxsize=None)
def sphere_ring(factors: int):
    """Polynomial ring, generators and sphere relations for (S²)^factors."""
    if factors < 1:
        raise ValueError(f"need at least one S² factor, got {factors}")
    names = ",".join(f"z{b},x{b},y{b}" for b in range(1, factors + 1))
    R, *gens = ring(names, QQ, grlex)
    relations = [
        gens[3 * b] ** 2 + gens[3 * b + 1] ** 2 + gens[3 * b + 2] ** 2 - 1
        for b in range(factors)
    ]
    return R, tuple(gens), tuple(relations)


def _gen(factors: int, b: int, axis: str) -> PolyElement:
    _, gens, _ = sphere_ring(factors)
    return gens[3 * b + _SLOT[axis]]


@dataclass(frozen=True, eq=False)
class SpherePoly:
    """A function on (S²)^factors, stored as its canonical representative."""

    factors: int
    poly: PolyElement = field(repr=False)

    @classmethod
    def constant(cls, factors: int, c=1) -> "SpherePoly":
        R, _, _ = sphere_ring(factors)
        return cls(factors, R(QQ(rat(c).numerator, rat(c).denominator)))

    @classmethod
    def coordinate(cls, factors: int, b: int, axis: str = "x") -> "SpherePoly":
        if not 0 <= b < factors:
            raise ValueError(f"factor index {b} out of range for {factors} factor(s)")
        return cls(factors, _gen(factors, b, axis))

    @classmethod
    def from_terms(cls, factors: int, terms: Dict[Tuple[int, ...], object]) -> "SpherePoly":
        """Canonicalize a raw map from (x_b, y_b, z_b)-exponents to coefficients."""
        return canonicalize(raw_poly(factors, terms), factors)

    @property
    def is_zero(self) -> bool:
        return not self.poly

    @property
    def terms(self) -> Dict[Tuple[int, ...], Fraction]:
        """Exponents in (x_b, y_b, z_b) order per factor."""
        out = {}
        for monom, coeff in self.poly.terms():
            out[_to_xyz(monom, self.factors)] = rat(coeff)
        return out

    def _wrap(self, poly) -> "SpherePoly":
        return canonicalize(poly, self.factors)

    def _lift(self, other):
        if isinstance(other, SpherePoly):
            if other.factors != self.factors:
                raise ValueError("factor counts differ")
            return other.poly
        value = rat(other)
        return self.poly.ring(QQ(value.numerator, value.denominator))

    def __add__(self, other):
        return self._wrap(self.poly + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.poly - self._lift(other))

    def __rsub__(self, other):
        return self._wrap(self._lift(other) - self.poly)

    def __mul__(self, other):
        return self._wrap(self.poly * self._lift(other))

    __rmul__ = __mul__

    def __neg__(self):
        return SpherePoly(self.factors, -self.poly)

    def __pow__(self, k: int):
        return reduce(lambda acc, _: acc * self, range(k), SpherePoly.constant(self.factors))

    def __eq__(self, other):
        if isinstance(other, SpherePoly):
            return self.factors == other.factors and self.poly == other.poly
        if isinstance(other, (int, Fraction)):
            return self.poly == self._lift(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.factors, self.poly))

    def __str__(self):
        return str(self.poly.as_expr()) if self.poly else "0"

    def to_json(self) -> list:
        return [
            {"exponents": list(exps), "coeff": rat_str(c)}
            for exps, c in sorted(self.terms.items(), reverse=True)
        ]


def _to_xyz(monom, factors):
    out = []
    for b in range(factors):
        out.extend((monom[3 * b + _SLOT["x"]], monom[3 * b + _SLOT["y"]], monom[3 * b + _SLOT["z"]]))
    return tuple(out)


def raw_poly(factors: int, terms: Dict[Tuple[int, ...], object]) -> PolyElement:
    """Unreduced ring element from (x_b, y_b, z_b)-ordered exponents."""
    R, _, _ = sphere_ring(factors)
    data = {}
    for exps, coeff in terms.items():
        if len(exps) != 3 * factors:
            raise ValueError(f"expected {3 * factors} exponents, got {len(exps)}")
        monom = [0] * (3 * factors)
        for b in range(factors):
            for a, axis in enumerate(AXES):
                monom[3 * b + _SLOT[axis]] = exps[3 * b + a]
        value = rat(coeff)
        key = tuple(monom)
        data[key] = data.get(key, QQ(0)) + QQ(value.numerator, value.denominator)
    return R.from_dict({k: v for k, v in data.items() if v})


def canonicalize(p: PolyElement, factors: int) -> SpherePoly:
    _, _, relations = sphere_ring(factors)
    return SpherePoly(factors, p.rem(list(relations)))


def _representative(p: Union[SpherePoly, PolyElement]) -> PolyElement:
    return p.poly if isinstance(p, SpherePoly) else p


def laplacian_factor(p: Union[SpherePoly, PolyElement], b: int, factors: int = None) -> SpherePoly:
    """
    Spherical Laplacian in factor b.

    Each monomial is homogeneous of some degree d in the b-coordinates, where the
    Laplace-Beltrami operator is the ambient Laplacian minus d(d+1).
    """
    factors = p.factors if isinstance(p, SpherePoly) else factors
    if not 0 <= b < factors:
        raise ValueError(f"factor index {b} out of range for {factors} factor(s)")
    poly = _representative(p)
    R = poly.ring
    axes = [_gen(factors, b, axis) for axis in AXES]
    slots = [3 * b + _SLOT[axis] for axis in AXES]
    out = R.zero
    for monom, coeff in poly.terms():
        term = R.from_dict({monom: coeff})
        d = sum(monom[s] for s in slots)
        out += sum((term.diff(g).diff(g) for g in axes), R.zero) - term * (d * (d + 1))
    return canonicalize(out, factors)


def laplacian(p: Union[SpherePoly, PolyElement], factors: int = None) -> SpherePoly:
    """Total Laplacian, the sum over all factors."""
    factors = p.factors if isinstance(p, SpherePoly) else factors
    return reduce(
        lambda acc, b: acc + laplacian_factor(p, b, factors),
        range(factors),
        SpherePoly.constant(factors, 0),
    )


def grad_inner(p: Union[SpherePoly, PolyElement], q: Union[SpherePoly, PolyElement], factors: int = None) -> SpherePoly:
    """⟨dp, dq⟩ from the tangential projection of ambient gradients."""
    factors = p.factors if isinstance(p, SpherePoly) else factors
    P, Q = _representative(p), _representative(q)
    R = P.ring
    out = R.zero
    for b in range(factors):
        axes = [_gen(factors, b, axis) for axis in AXES]
        dP = [P.diff(g) for g in axes]
        dQ = [Q.diff(g) for g in axes]
        radial_p = sum((g * d for g, d in zip(axes, dP)), R.zero)
        radial_q = sum((g * d for g, d in zip(axes, dQ)), R.zero)
        out += sum((a * c for a, c in zip(dP, dQ)), R.zero) - radial_p * radial_q
    return canonicalize(out, factors)


@lru_cache(maxsize=None)
def _sphere_moment(a: int, b: int, c: int) -> Fraction:
    if a % 2 or b % 2 or c % 2:
        return Fraction(0)
    num = factorial2(a - 1) * factorial2(b - 1) * factorial2(c - 1)
    return Fraction(int(num), int(factorial2(a + b + c + 1)))


def mean_integral(p: SpherePoly) -> Fraction:
    """Mean value over (S²)^B, so that the mean of 1 is 1."""
    total = Fraction(0)
    for exps, coeff in p.terms.items():
        weight = Fraction(1)
        for b in range(p.factors):
            weight *= _sphere_moment(*exps[3 * b:3 * b + 3])
            if not weight:
                break
        total += coeff * weight
    return total


@dataclass(frozen=True)
class KernelVector:
    """v = Σ_b α_b·(one coordinate of factor b), an element of ker(Δ+2)."""

    alphas: Tuple[Fraction, ...]
    axes: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(rat(a) for a in self.alphas))
        if not self.axes:
            object.__setattr__(self, "axes", ("x",) * len(self.alphas))
        if len(self.axes) != len(self.alphas) or any(a not in AXES for a in self.axes):
            raise ValueError(f"axes {self.axes} do not match alphas {self.alphas}")

    @property
    def factors(self) -> int:
        return len(self.alphas)

    @property
    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.alphas)

    def sigma(self, k: int) -> Fraction:
        return sum((a ** k for a in self.alphas), Fraction(0))

    def component(self, b: int) -> SpherePoly:
        """v_b = α_b·θ^b."""
        return SpherePoly.coordinate(self.factors, b, self.axes[b]) * self.alphas[b]


def instantiate_kernel(kv: KernelVector) -> SpherePoly:
    return reduce(
        lambda acc, b: acc + kv.component(b),
        range(kv.factors),
        SpherePoly.constant(kv.factors, 0),
    )
