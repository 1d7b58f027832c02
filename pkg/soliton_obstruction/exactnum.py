"""
Exact arithmetic tower: rationals, polynomials and rational functions in the
dimension symbol n, and dense linear algebra over Q(n).

Rationals are ``fractions.Fraction``. Polynomials and rational functions wrap the
sparse ``PolyElement``/``FracElement`` types of sympy's ``QQ.frac_field(n)``,
which keeps every value reduced (gcd and content cancelled, denominator with a
positive leading coefficient), so equality is structural.
"""
import logging
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from sympy import Symbol, divisors, factor, sympify
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from .errors import DivisionByZero, InconsistentSystem, PoleAtPoint, SingularMatrix, ZeroPolynomial

logger = logging.getLogger(__name__)

N_SYMBOL = Symbol("n")
FIELD = QQ.frac_field(N_SYMBOL)
_FRAC = FIELD.field
_POLY = _FRAC.ring
_N = _POLY.gens[0]

Rat = Fraction
Number = Union[int, Fraction]


def rat(value) -> Fraction:
    """Parse an exact rational from an int, Fraction or a "p/q" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {value!r}") from None
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"not an exact rational: {value!r}")


def rat_str(value: Fraction) -> str:
    """'p/q', or 'p' for integers."""
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _qq(value: Number):
    value = rat(value)
    return QQ(value.numerator, value.denominator)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


@dataclass(frozen=True, eq=False)
class PolyN:
    """A polynomial in n with rational coefficients."""

    poly: object

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[Number]) -> "PolyN":
        """Build from coefficients listed low to high degree."""
        terms = {(k,): _qq(c) for k, c in enumerate(coefficients) if rat(c) != 0}
        return cls(_POLY.from_dict(terms) if terms else _POLY.zero)

    @property
    def coefficients(self) -> list:
        if not self.poly:
            return []
        out = [Fraction(0)] * (self.degree + 1)
        for (k,), c in self.poly.terms():
            out[k] = _to_fraction(c)
        return out

    @property
    def degree(self) -> int:
        return -1 if not self.poly else self.poly.degree()

    @property
    def is_zero(self) -> bool:
        return not self.poly

    def evaluate(self, x: Number) -> Fraction:
        x = rat(x)
        return reduce(lambda acc, c: acc * x + c, reversed(self.coefficients), Fraction(0))

    def integer_coefficients(self) -> list:
        """Coefficients scaled by the lcm of their denominators, low to high."""
        coeffs = self.coefficients
        scale = reduce(lcm, (c.denominator for c in coeffs), 1)
        return [int(c * scale) for c in coeffs]

    def to_json(self) -> list:
        return [rat_str(c) for c in self.coefficients]

    def __eq__(self, other):
        return isinstance(other, PolyN) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __str__(self):
        return str(self.poly.as_expr())


def integer_roots(p: PolyN) -> frozenset:
    """Integer roots of p by the rational-root theorem, each verified by exact evaluation."""
    if p.is_zero:
        raise ZeroPolynomial("integer_roots of the zero polynomial")
    coeffs = p.integer_coefficients()
    roots = set()
    low = next(k for k, c in enumerate(coeffs) if c != 0)
    if low > 0:
        roots.add(0)
    reduced = PolyN.from_coefficients(coeffs[low:])
    trailing = abs(coeffs[low])
    for d in divisors(trailing):
        for candidate in (int(d), -int(d)):
            if reduced.evaluate(candidate) == 0:
                roots.add(candidate)
    logger.debug("integer roots of %s: %s", p, sorted(roots))
    return frozenset(roots)


@dataclass(frozen=True, eq=False)
class RatN:
    """An element of Q(n)."""

    value: object

    @classmethod
    def of(cls, x) -> "RatN":
        if isinstance(x, RatN):
            return x
        if isinstance(x, PolyN):
            return cls(_FRAC.new(x.poly))
        if isinstance(x, str):
            return cls(FIELD.from_sympy(sympify(x, locals={"n": N_SYMBOL})))
        return cls(_FRAC.ground_new(_qq(x)))

    @classmethod
    def n(cls) -> "RatN":
        return cls(_FRAC.new(_N))

    @classmethod
    def from_polys(cls, num: PolyN, den: PolyN) -> "RatN":
        if den.is_zero:
            raise DivisionByZero("zero denominator")
        return cls(_FRAC.new(num.poly, den.poly))

    @property
    def num(self) -> PolyN:
        return PolyN(self.value.numer)

    @property
    def den(self) -> PolyN:
        return PolyN(self.value.denom)

    @property
    def is_zero(self) -> bool:
        return not self.value

    def evaluate(self, x: Number) -> Fraction:
        return ratn_eval(self, x)

    def to_sympy(self):
        return FIELD.to_sympy(self.value)

    def __add__(self, other):
        return RatN(self.value + _coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RatN(self.value - _coerce(other))

    def __rsub__(self, other):
        return RatN(_coerce(other) - self.value)

    def __mul__(self, other):
        return RatN(self.value * _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        divisor = _coerce(other)
        if not divisor:
            raise DivisionByZero(f"division of {self} by zero")
        return RatN(self.value / divisor)

    def __rtruediv__(self, other):
        return RatN.of(other) / self

    def __neg__(self):
        return RatN(-self.value)

    def __eq__(self, other):
        if isinstance(other, (RatN, int, Fraction)):
            return self.value == _coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return str(factor(self.to_sympy()))

    __repr__ = __str__


def _coerce(x):
    return RatN.of(x).value


ZERO = RatN.of(0)
ONE = RatN.of(1)


def ratn(text: str) -> RatN:
    """Parse a rational function of n, e.g. "-(13*n - 38)/60"."""
    return RatN.of(text)


_ARITH = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def ratn_arith(a: RatN, b: RatN, op: str) -> RatN:
    return _ARITH[op](RatN.of(a), RatN.of(b))


def ratn_eval(a: RatN, x: Number) -> Fraction:
    a = RatN.of(a)
    x = rat(x)
    if a.den.evaluate(x) == 0:
        raise PoleAtPoint(a, rat_str(x))
    return a.num.evaluate(x) / a.den.evaluate(x)


Vector = Sequence[RatN]


def vector(values) -> tuple:
    return tuple(RatN.of(v) for v in values)


@dataclass(frozen=True, eq=False)
class MatN:
    """Dense matrix over Q(n)."""

    dm: DomainMatrix

    def __post_init__(self):
        # DomainMatrix arithmetic refuses to mix sparse and dense operands
        object.__setattr__(self, "dm", self.dm.to_dense())

    @classmethod
    def from_rows(cls, rows) -> "MatN":
        rows = [[_coerce(x) for x in row] for row in rows]
        return cls(DomainMatrix(rows, (len(rows), len(rows[0])), FIELD))

    @classmethod
    def from_columns(cls, columns) -> "MatN":
        columns = list(columns)
        return cls.from_rows([[col[i] for col in columns] for i in range(len(columns[0]))])

    @classmethod
    def identity(cls, size: int) -> "MatN":
        return cls(DomainMatrix.eye(size, FIELD))

    @property
    def rows(self) -> int:
        return self.dm.shape[0]

    @property
    def cols(self) -> int:
        return self.dm.shape[1]

    def entry(self, i: int, j: int) -> RatN:
        return RatN(self.dm[i, j].element)

    @property
    def entries(self) -> list:
        return [RatN(e) for e in self.dm.to_list_flat()]

    def column(self, j: int) -> tuple:
        return tuple(self.entry(i, j) for i in range(self.rows))

    def apply(self, vec: Vector) -> tuple:
        col = DomainMatrix([[_coerce(v)] for v in vec], (len(vec), 1), FIELD)
        return tuple(RatN(e) for e in self.dm.matmul(col).to_list_flat())

    def shift(self, c) -> "MatN":
        """c·I + self."""
        return MatN.identity(self.rows).scale(c) + self

    def scale(self, c) -> "MatN":
        return MatN(self.dm.scalarmul(_coerce(c)))

    def det(self) -> RatN:
        return RatN(self.dm.det())

    def with_entry(self, i: int, j: int, value) -> "MatN":
        flat = self.dm.to_list_flat()
        flat[i * self.cols + j] = _coerce(value)
        return MatN(DomainMatrix.from_list_flat(flat, self.dm.shape, FIELD))

    def __add__(self, other: "MatN") -> "MatN":
        return MatN(self.dm.add(other.dm))

    def __sub__(self, other: "MatN") -> "MatN":
        return MatN(self.dm.sub(other.dm))

    def __matmul__(self, other: "MatN") -> "MatN":
        return MatN(self.dm.matmul(other.dm))

    def __eq__(self, other):
        return isinstance(other, MatN) and self.dm == other.dm

    def __hash__(self):
        return hash(tuple(self.dm.to_list_flat()))


def mat_solve(A: MatN, rhs: Vector, mask: Optional[Iterable[int]] = None) -> tuple:
    """
    Solve A·x = rhs exactly over Q(n).

    With a mask, only the principal block on the masked indices is solved and
    the remaining unknowns are zero; the full system is then checked by
    back-substitution.
    """
    if A.rows != A.cols:
        raise ValueError(f"mat_solve needs a square matrix, got {A.rows}x{A.cols}")
    rhs = vector(rhs)
    idx = list(range(A.rows)) if mask is None else sorted(set(mask))
    k = len(idx)
    block = A.dm.extract(idx, idx)
    if not block.det():
        raise SingularMatrix(f"determinant vanishes in Q(n) on indices {idx}")

    column = DomainMatrix([[rhs[i].value] for i in idx], (k, 1), FIELD)
    _, cleared = block.hstack(column).clear_denoms_rowwise(convert=True)
    lhs, col = cleared[:, :k], cleared[:, k:]
    try:
        xnum, xden = lhs.solve_den(col, method="rref")
    except DMNonInvertibleMatrixError as exc:
        raise SingularMatrix(str(exc)) from exc

    den = FIELD.convert_from(xden, lhs.domain)
    solved = [FIELD.convert_from(e, lhs.domain) / den for e in xnum.to_list_flat()]
    x = [ZERO] * A.rows
    for i, value in zip(idx, solved):
        x[i] = RatN(value)

    residual = [a - b for a, b in zip(A.apply(x), rhs)]
    if any(not r.is_zero for r in residual):
        raise InconsistentSystem(f"masked solution on {idx} leaves residual {residual}")
    return tuple(x)
