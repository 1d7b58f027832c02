"""
Brute-force cross-checks of the pipeline on (S²)² at n = 4.

Every ansatz function is instantiated as a concrete SpherePoly for a given
kernel element v = α₁θ¹ + α₂θ², and the matrices, moment tables, defining
equations and integrated quantities are recomputed by polynomial calculus.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence

from .config import ORACLE_FACTORS, ORACLE_N
from .errors import ConfigError
from .exactnum import rat, rat_str
from .reports import CheckResult
from .spherepoly import (
    AXES,
    KernelVector,
    SpherePoly,
    grad_inner,
    instantiate_kernel,
    laplacian,
    laplacian_factor,
    mean_integral,
    raw_poly,
    sphere_ring,
)
from .varengine import (
    AB2,
    BASIS,
    EVEN,
    LINEAR_MOMENTS,
    PLAIN_MOMENTS,
    S_V,
    SIGMA2,
    SUM_B_VVB_MOMENTS,
    V2,
    V2_MEAN,
    VB2,
    VVB,
    AnsatzFn,
    Pipeline,
    default_pipeline,
)

logger = logging.getLogger(__name__)


def basis_poly(i: int, kv: KernelVector, b: int = 0) -> SpherePoly:
    """Basis function i of the ansatz, indexed functions read in factor b."""
    v = instantiate_kernel(kv)
    vb = kv.component(b)
    if i == V2:
        return v * v
    if i == S_V:
        return sum((kv.component(c) * kv.component(c) for c in range(kv.factors)), SpherePoly.constant(kv.factors, 0))
    if i == SIGMA2:
        return SpherePoly.constant(kv.factors, kv.sigma(2))
    if i == VVB:
        return v * vb
    if i == VB2:
        return vb * vb
    if i == AB2:
        return SpherePoly.constant(kv.factors, kv.alphas[b] ** 2)
    raise IndexError(f"no basis function {i}")


def instantiate(fn: AnsatzFn, kv: KernelVector, b: int = 0, n=ORACLE_N) -> SpherePoly:
    """The ansatz function fn as a polynomial on (S²)^B at dimension n."""
    total = SpherePoly.constant(kv.factors, 0)
    for i, coeff in enumerate(fn):
        if not coeff.is_zero:
            total = total + basis_poly(i, kv, b) * coeff.evaluate(n)
    return total


class _Instance:
    """The second-order solutions of one pipeline, instantiated for one α."""

    def __init__(self, kv: KernelVector, pipeline: Pipeline):
        self.kv = kv
        self.p = pipeline
        self.n = Fraction(ORACLE_N)
        self.v = instantiate_kernel(kv)
        self.grad_v = grad_inner(self.v, self.v)
        self.mean_v2 = mean_integral(self.v * self.v)
        self.tau = (self.n - 2) / (2 * self.n) * self.mean_v2
        self.F = instantiate(pipeline.f_ss, kv)
        self.U_tilde = instantiate(pipeline.u_tilde, kv)
        self.U = instantiate(pipeline.u, kv)
        self.H = [instantiate(pipeline.h_b, kv, b) for b in range(kv.factors)]

    def trace(self) -> SpherePoly:
        n = self.n
        twice = n * self.tau + laplacian(self.F) - 4 * (n - 1) * self.v * self.v + (3 * n - 2) / 2 * self.grad_v
        return twice * Fraction(1, 2)

    def sigma_value(self, quad) -> Fraction:
        return quad.value(self.n, self.kv.sigma(2), self.kv.sigma(4))


def _label(kv: KernelVector) -> str:
    return "oracle[" + ",".join(rat_str(a) for a in kv.alphas) + "]"


def check_laplacian_matrices(kv: KernelVector, pipeline: Pipeline) -> CheckResult:
    bad = []
    for j, name in enumerate(BASIS):
        for b in range(kv.factors):
            fn = basis_poly(j, kv, b)
            if laplacian(fn) != instantiate(AnsatzFn(pipeline.lap.M.column(j)), kv, b):
                bad.append(f"M[{name}]@b={b + 1}")
            if laplacian_factor(fn, b) != instantiate(AnsatzFn(pipeline.lap.M_b.column(j)), kv, b):
                bad.append(f"M_b[{name}]@b={b + 1}")
    return CheckResult.from_bool(f"{_label(kv)} laplacian matrices", not bad, ", ".join(bad))


def check_moments(kv: KernelVector) -> CheckResult:
    s2, s4 = kv.sigma(2), kv.sigma(4)
    bad = []
    for (i, j), quad in PLAIN_MOMENTS.items():
        if mean_integral(basis_poly(i, kv) * basis_poly(j, kv)) != quad.value(ORACLE_N, s2, s4):
            bad.append(f"∫{BASIS[i]}·{BASIS[j]}")
    for j, quad in SUM_B_VVB_MOMENTS.items():
        total = sum(
            (mean_integral(basis_poly(VVB, kv, b) * basis_poly(j, kv, b)) for b in range(kv.factors)),
            Fraction(0),
        )
        if total != quad.value(ORACLE_N, s2, s4):
            bad.append(f"Σ_b ∫v·v_b·{BASIS[j]}")
    for i in EVEN:
        if mean_integral(basis_poly(i, kv)) != LINEAR_MOMENTS[i].evaluate(ORACLE_N) * s2:
            bad.append(f"∫{BASIS[i]}")
    if mean_integral(basis_poly(V2, kv)) != V2_MEAN.evaluate(ORACLE_N) * s2:
        bad.append("∫v² = σ₂/3")
    # per-factor sphere moments: x⁴ averages to 1/5, x_a²x_b² to 1/9
    for a in range(kv.factors):
        va = kv.component(a)
        if mean_integral(va ** 4) != kv.alphas[a] ** 4 / 5:
            bad.append(f"∫v_{a}⁴")
        for b in range(a + 1, kv.factors):
            vb = kv.component(b)
            if mean_integral(va * va * vb * vb) != (kv.alphas[a] * kv.alphas[b]) ** 2 / 9:
                bad.append(f"∫v_{a}²v_{b}²")
    return CheckResult.from_bool(f"{_label(kv)} moments", not bad, ", ".join(bad))


def _equations(inst: _Instance) -> List[CheckResult]:
    n, v, kv = inst.n, inst.v, inst.kv
    label = _label(kv)
    out = []

    # ---- f_ss: (1+Δ)f = n v² - (3n-2)/4 |dv|² - n τ ----
    lhs = inst.F + laplacian(inst.F)
    rhs = n * v * v - (3 * n - 2) / 4 * inst.grad_v - n * inst.tau
    out.append(CheckResult.from_bool(f"{label} f_ss equation", lhs == rhs))

    # ---- ũ: (2+Δ)(n+(n-1)Δ)ũ = 2 tr D²Φ, and u = (1+Δ)ũ ----
    inner = n * inst.U_tilde + (n - 1) * laplacian(inst.U_tilde)
    lhs = 2 * inner + laplacian(inner)
    out.append(CheckResult.from_bool(f"{label} u_tilde equation", lhs == 2 * inst.trace()))
    out.append(CheckResult.from_bool(f"{label} u = (1+Δ)ũ", inst.U == inst.U_tilde + laplacian(inst.U_tilde)))

    # ---- h̃_b ----
    bad = []
    for b in range(kv.factors):
        vb = kv.component(b)
        lhs = 2 * inst.H[b] + laplacian(inst.H[b])
        shifted = laplacian_factor(inst.U_tilde, b) - 2 * inst.U
        rhs = (
            2 * shifted + laplacian(shifted)
            + laplacian_factor(inst.F, b)
            + 2 * inst.tau
            - 2 * (n - 2) * v * vb
            + (n - 2) / 2 * grad_inner(vb, vb)
            - 4 * v * v
            + 2 * inst.grad_v
        )
        if lhs != rhs:
            bad.append(f"b={b + 1}")
    out.append(CheckResult.from_bool(f"{label} h_b equation", not bad, ", ".join(bad)))

    trace_h = sum(inst.H, SpherePoly.constant(kv.factors, 0))
    out.append(CheckResult.from_bool(f"{label} Σ_b h_b = 0", trace_h.is_zero, str(trace_h)))

    trace = inst.trace()
    leaks = [
        f"{axis}{b + 1}"
        for b in range(kv.factors)
        for axis in AXES
        if mean_integral(SpherePoly.coordinate(kv.factors, b, axis) * trace) != 0
    ]
    out.append(CheckResult.from_bool(f"{label} trace ⟂ ker(Δ+2)", not leaks, ", ".join(leaks)))
    return out


def gauge_fields(factors: int = ORACLE_FACTORS) -> List[List[SpherePoly]]:
    """Three distinct choices of (φ_1, ..., φ_B), each φ_b ∈ ker(Δ+2)."""
    x = [SpherePoly.coordinate(factors, b, "x") for b in range(factors)]
    y = [SpherePoly.coordinate(factors, b, "y") for b in range(factors)]
    z = [SpherePoly.coordinate(factors, b, "z") for b in range(factors)]
    last = factors - 1
    return [
        [x[0] + 2 * y[last] for _ in range(factors)],
        [z[b] * (b + 1) - x[last] for b in range(factors)],
        [Fraction(3, 2) * y[0] - 5 * z[last] + x[b] for b in range(factors)],
    ]


def _tt_integral(inst: _Instance, phis: Optional[Sequence[SpherePoly]] = None) -> Fraction:
    kv, v, n = inst.kv, inst.v, inst.n
    total = Fraction(0)
    for b in range(kv.factors):
        h = inst.H[b] if phis is None else inst.H[b] + phis[b]
        total += mean_integral(v * kv.component(b) * h)
    return -(n - 2) / 4 * total


def _integrals(inst: _Instance) -> List[CheckResult]:
    n, v, label = inst.n, inst.v, _label(inst.kv)
    out = []

    base = _tt_integral(inst)
    expected = inst.sigma_value(inst.p.cross_tt)
    out.append(CheckResult.from_bool(f"{label} cross_tt integral", base == expected, f"{base} vs {expected}"))
    bad = []
    for k, phis in enumerate(gauge_fields(inst.kv.factors)):
        if any(laplacian(phi) != -2 * phi for phi in phis):
            bad.append(f"φ#{k + 1} not in ker(Δ+2)")
        elif _tt_integral(inst, phis) != base:
            bad.append(f"φ#{k + 1} changes the integral")
    out.append(CheckResult.from_bool(f"{label} cross_tt gauge invariance", not bad, ", ".join(bad)))

    # ∫vΔf = 2∫v(1+Δ)f for v ∈ ker(Δ+2), so f_st enters through its source only
    st_source = v * (laplacian(inst.U_tilde) * Fraction(1, 2) - (n - 1) / 2 * laplacian(inst.U)) + grad_inner(
        -(n - 2) / 4 * inst.U_tilde - n * n / 4 * inst.U, v
    )
    conformal = mean_integral(
        n * n / 4 * v * grad_inner(inst.U, v)
        - (n - 1) * inst.U * v * v
        + (n - 2) / 4 * v * grad_inner(inst.U_tilde, v)
        + (n - 1) / 2 * v * v * laplacian(inst.U)
        + v * st_source
    )
    expected = inst.sigma_value(inst.p.cross_conformal)
    out.append(CheckResult.from_bool(f"{label} cross_conformal integral", conformal == expected, f"{conformal} vs {expected}"))

    sss_source = v * (
        -3 * (n - 2) * inst.tau
        + 3 * laplacian(inst.F)
        - 3 * (3 * n - 2) * v * v
        - (12 * n * n - 75 * n + 66) / 4 * inst.grad_v
    ) + grad_inner(-3 * (n - 2) / 2 * inst.F, v)
    third = mean_integral(
        6 * (n - 1) * v ** 4
        - (9 * n * n - 18 * n - 24) / 4 * v * v * inst.grad_v
        + 3 * (n - 2) / 4 * v * grad_inner(inst.F, v)
        + v * sss_source
    ) + 3 * (n - 2) / 2 * inst.mean_v2 ** 2
    expected = inst.sigma_value(inst.p.third_variation)
    out.append(CheckResult.from_bool(f"{label} third variation integral", third == expected, f"{third} vs {expected}"))
    return out


def run_oracle(alphas: Sequence, pipeline: Optional[Pipeline] = None) -> List[CheckResult]:
    """Every oracle identity for one kernel element on (S²)², at n = 4."""
    alphas = tuple(rat(a) for a in alphas)
    if len(alphas) != ORACLE_FACTORS:
        raise ConfigError(
            f"the oracle runs on (S²)² only (B = {ORACLE_FACTORS}); got {len(alphas)} coefficient(s)"
        )
    pipeline = pipeline or default_pipeline()
    kv = KernelVector(alphas)
    if kv.is_trivial:
        logger.warning("⚠️ α = 0: v vanishes and every oracle identity is vacuous")
    inst = _Instance(kv, pipeline)
    results = [check_laplacian_matrices(kv, pipeline), check_moments(kv)]
    results += _equations(inst)
    results += _integrals(inst)
    failed = [r.name for r in results if r.status == "fail"]
    if failed:
        logger.warning("❌ oracle failures: %s", failed)
    else:
        logger.info("✅ oracle %s: %d identities exact", _label(kv), len(results))
    return results


# ---- property suites ----
def _random_terms(rng, factors: int, count: int, max_exp: int = 2) -> dict:
    terms = {}
    for _ in range(count):
        exps = tuple(int(e) for e in rng.integers(0, max_exp + 1, size=3 * factors))
        terms[exps] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    return terms


def representative_independence(rng, count: int, factors: int = ORACLE_FACTORS) -> CheckResult:
    """Adding (|x_b|²-1)·q to a representative changes neither Δ nor ⟨d·, d·⟩."""
    _, _, relations = sphere_ring(factors)
    bad = 0
    for _ in range(count):
        p = SpherePoly.from_terms(factors, _random_terms(rng, factors, 4))
        r = SpherePoly.from_terms(factors, _random_terms(rng, factors, 3))
        q = raw_poly(factors, _random_terms(rng, factors, 3))
        b = int(rng.integers(0, factors))
        perturbed = p.poly + relations[b] * q
        same = all(laplacian_factor(perturbed, c, factors) == laplacian_factor(p, c) for c in range(factors))
        same = same and grad_inner(perturbed, r.poly, factors) == grad_inner(p, r)
        bad += not same
    return CheckResult.from_bool("representative independence", bad == 0, f"{bad} of {count} random q differ")


def random_alphas(rng, factors: int = ORACLE_FACTORS) -> tuple:
    return tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(factors))


def kernel_identities(rng, count: int, factors: int = ORACLE_FACTORS) -> CheckResult:
    """|dv|² = σ₂ - S_v and Δ(v²) = 2σ₂ - 4v² - 2S_v for random kernel elements."""
    bad = []
    for _ in range(count):
        axes = tuple(str(a) for a in rng.choice(AXES, size=factors))
        kv = KernelVector(random_alphas(rng, factors), axes)
        v = instantiate_kernel(kv)
        s_v = basis_poly(S_V, kv)
        sigma2 = kv.sigma(2)
        if grad_inner(v, v) != sigma2 - s_v or laplacian(v * v) != 2 * sigma2 - 4 * v * v - 2 * s_v:
            bad.append(_label(kv))
    return CheckResult.from_bool("kernel identities", not bad, ", ".join(bad))
