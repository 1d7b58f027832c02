"""
Eigenvalue bookkeeping for round spheres and their products.

Conventions: an eigenvalue λ means Δu = -λu, so spectra are bounded below.
On S^n (dimension n ≥ 2):

    λ⁰_k = k(k+n-1)/(n-1)                 k ≥ 0
    λ¹_k = (k(k+n-1) + n-2)/(n-1)         k ≥ 1
    λ²_k = (k(k+n-1) + 2(n-1))/(n-1)      k ≥ 2

and the spectra are Δ₀: {λ⁰_k}, Δ₁: {λ⁰_k - 1}_{k≥1} ∪ {λ¹_k - 1}_{k≥1} and
Δ_E: {λ⁰_k - 2}_{k≥0} ∪ {λ¹_k - 2}_{k≥2} ∪ {λ²_k - 2}_{k≥2}.
"""
import logging
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional, Tuple

from .errors import AssumptionNotAsserted, DomainError
from .exactnum import RatN, rat, rat_str

logger = logging.getLogger(__name__)

FAMILY_FLOOR = {"λ0": 0, "λ1": 1, "λ2": 2}
FAMILY_ALIASES = {"lambda0": "λ0", "lambda1": "λ1", "lambda2": "λ2", "l0": "λ0", "l1": "λ1", "l2": "λ2"}
OPERATORS = ("functions", "one-forms", "einstein")

# (family, shift, first k) making up each sphere operator
_SPHERE_RULES = {
    "functions": (("λ0", 0, 0),),
    "one-forms": (("λ0", 1, 1), ("λ1", 1, 1)),
    "einstein": (("λ0", 2, 0), ("λ1", 2, 2), ("λ2", 2, 2)),
}
# families whose Δ_E eigentensors are trace-free and divergence-free on the sphere
_TT_FAMILIES = {"λ2"}


def _family(name: str) -> str:
    name = FAMILY_ALIASES.get(name, name)
    if name not in FAMILY_FLOOR:
        raise DomainError(f"unknown eigenvalue family {name!r}")
    return name


def eigenvalue_formula(family: str, k: int) -> RatN:
    """λ^family_k as a rational function of the sphere dimension n."""
    family = _family(family)
    if k < FAMILY_FLOOR[family]:
        raise DomainError(f"{family} is defined for k ≥ {FAMILY_FLOOR[family]}, got k = {k}")
    n = RatN.n()
    base = k * (k + n - 1)
    extra = {"λ0": RatN.of(0), "λ1": n - 2, "λ2": 2 * (n - 1)}[family]
    return (base + extra) / (n - 1)


def sphere_eigenvalue(family: str, k: int, n: int) -> Fraction:
    if n < 2:
        raise DomainError(f"sphere dimension must be at least 2, got {n}")
    return eigenvalue_formula(family, k).evaluate(n)


def function_multiplicity(k: int, n: int) -> int:
    """Dimension of degree-k spherical harmonics on S^n."""
    if k < 0 or n < 2:
        raise DomainError(f"multiplicity needs k ≥ 0 and n ≥ 2, got k={k}, n={n}")
    return comb(n + k, n) - (comb(n + k - 2, n) if k >= 2 else 0)


@dataclass(frozen=True)
class SpectrumEntry:
    value: Fraction
    operator: str
    origins: Tuple[str, ...]
    multiplicity: Optional[int] = None
    # families of each origin, kept for the kernel classification
    families: Tuple[str, ...] = field(default=(), compare=False)


def _raw_sphere_terms(operator: str, dim: int, bound: Fraction):
    """(value, origin, family, multiplicity) for one sphere, all values ≤ bound."""
    if operator not in _SPHERE_RULES:
        raise DomainError(f"unknown operator {operator!r}; expected one of {OPERATORS}")
    out = []
    for family, shift, first in _SPHERE_RULES[operator]:
        k = first
        while True:
            value = sphere_eigenvalue(family, k, dim) - shift
            if value > bound:
                break
            mult = function_multiplicity(k, dim) if operator == "functions" else None
            tag = f"{family}_{k}" + (f"-{shift}" if shift else "")
            out.append((value, tag, family, mult))
            k += 1
    return out


def _merge(entries, operator: str) -> List[SpectrumEntry]:
    merged = OrderedDict()
    for value, origin, family, mult in sorted(entries, key=lambda e: e[0]):
        slot = merged.setdefault(value, {"origins": [], "families": [], "mult": 0 if mult is not None else None})
        slot["origins"].append(origin)
        slot["families"].append(family)
        if mult is not None:
            slot["mult"] += mult
    return [
        SpectrumEntry(value, operator, tuple(s["origins"]), s["mult"], tuple(s["families"]))
        for value, s in merged.items()
    ]


def sphere_spectrum(operator: str, dim: int, cutoff) -> List[SpectrumEntry]:
    """Spectrum of one round S^dim up to the cutoff."""
    return _merge(_raw_sphere_terms(operator, dim, rat(cutoff)), operator)


def _spectrum_floor(operator: str, dim: int) -> Fraction:
    return min(sphere_eigenvalue(family, first, dim) - shift for family, shift, first in _SPHERE_RULES[operator])


def _combine(rules, left: int, right: int, cutoff: Fraction, operator: str) -> List[SpectrumEntry]:
    combined = []
    for left_op, right_op, label in rules:
        left_terms = _raw_sphere_terms(left_op, left, cutoff - _spectrum_floor(right_op, right))
        right_terms = _raw_sphere_terms(right_op, right, cutoff - _spectrum_floor(left_op, left))
        for lv, lo, lf, lm in left_terms:
            for rv, ro, rf, rm in right_terms:
                value = lv + rv
                if value > cutoff:
                    continue
                mult = lm * rm if operator == "functions" else None
                # a tensor family counts for the classification, constants do not
                family = lf if left_op != "functions" else rf
                if left_op == right_op == "one-forms":
                    family = "mixed"
                combined.append((value, f"{label}[{lo} + {ro}]", family, mult))
    entries = _merge(combined, operator)
    logger.debug("%s spectrum of S^%d x S^%d up to %s: %d distinct values", operator, left, right, cutoff, len(entries))
    return entries


def product_function_spectrum(left: int, right: int, cutoff) -> List[SpectrumEntry]:
    """Δ₀ spectrum of S^left × S^right: pairwise sums."""
    return _combine([("functions", "functions", "Δ0+Δ0")], left, right, rat(cutoff), "functions")


def product_one_form_spectrum(left: int, right: int, cutoff) -> List[SpectrumEntry]:
    rules = [("one-forms", "functions", "Δ1(L)+Δ0(R)"), ("functions", "one-forms", "Δ0(L)+Δ1(R)")]
    return _combine(rules, left, right, rat(cutoff), "one-forms")


def product_einstein_spectrum(left: int, right: int, cutoff) -> List[SpectrumEntry]:
    """Δ_E spectrum of S^left × S^right from the three combination rules."""
    rules = [
        ("einstein", "functions", "ΔE(L)+Δ0(R)"),
        ("functions", "einstein", "Δ0(L)+ΔE(R)"),
        ("one-forms", "one-forms", "Δ1(L)+Δ1(R)"),
    ]
    return _combine(rules, left, right, rat(cutoff), "einstein")


def product_spectrum(operator: str, left: int, right: int, cutoff) -> List[SpectrumEntry]:
    builders = {
        "functions": product_function_spectrum,
        "one-forms": product_one_form_spectrum,
        "einstein": product_einstein_spectrum,
    }
    if operator not in builders:
        raise DomainError(f"unknown operator {operator!r}; expected one of {OPERATORS}")
    return builders[operator](left, right, cutoff)


def _multiplicity_of(entries: List[SpectrumEntry], value) -> int:
    value = rat(value)
    return next((e.multiplicity for e in entries if e.value == value), 0)


@dataclass(frozen=True)
class ManifoldDescriptor:
    kind: str
    m: int = 2
    n: int = 2
    asserted_dagger: bool = False
    lambda1_lower_bound: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in ("s2xs2", "smxsn", "s2xN"):
            raise DomainError(f"unknown manifold kind {self.kind!r}")
        if self.kind == "s2xs2":
            object.__setattr__(self, "m", 2)
            object.__setattr__(self, "n", 2)
        if self.kind == "smxsn" and (self.m < 3 or self.n < 3):
            raise DomainError(f"smxsn needs m, n ≥ 3 for the kernel argument, got m={self.m}, n={self.n}")
        if self.lambda1_lower_bound is not None:
            object.__setattr__(self, "lambda1_lower_bound", rat(self.lambda1_lower_bound))


@dataclass(frozen=True)
class KernelReport:
    dim_conformal_kernel: int
    dim_tt_kernel: int
    notes: Tuple[str, ...] = ()

    @property
    def dim_K1(self) -> int:
        return self.dim_conformal_kernel


def _tt_candidates(left: int, right: int) -> List[str]:
    """Origins of the eigenvalue 0 of Δ_E on a product that could carry TT tensors."""
    zero = next((e for e in product_einstein_spectrum(left, right, 0) if e.value == 0), None)
    if zero is None:
        return []
    # pure trace (λ0) and Lie-derivative (λ1) families are never TT on the product
    return [o for o, f in zip(zero.origins, zero.families) if f in _TT_FAMILIES or f == "mixed"]


def kernel_dims(m: ManifoldDescriptor) -> KernelReport:
    if m.kind == "s2xN":
        if not m.asserted_dagger:
            raise AssumptionNotAsserted("S²×N needs assumption (†) on N asserted")
        if m.lambda1_lower_bound is not None and m.lambda1_lower_bound <= 2:
            raise AssumptionNotAsserted(
                f"(†) needs λ₁(N) > 2, the asserted bound is {rat_str(m.lambda1_lower_bound)}"
            )
        # eigenvalue 2 only from the S² coordinate functions paired with constants on N
        conformal = function_multiplicity(1, 2)
        report = KernelReport(conformal, 0, ("ker_TT(Δ_L+2) = 0 follows from the asserted (†)",))
        logger.info("✅ kernel dims for S²×N: %s", report)
        return report

    functions = product_function_spectrum(m.m, m.n, 2)
    conformal = _multiplicity_of(functions, 2)
    candidates = _tt_candidates(m.m, m.n)
    if candidates:
        raise DomainError(f"TT multiplicities are not tracked; candidate origins {candidates}")
    notes = []
    if m.kind == "s2xs2":
        notes.append("dim ker(Δ+2) = 6 is derived from the coordinate-function eigenspaces, not quoted")
    report = KernelReport(conformal, 0, tuple(notes))
    logger.info("✅ kernel dims for %s(%d,%d): %s", m.kind, m.m, m.n, report)
    return report
