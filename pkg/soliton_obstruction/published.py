"""
Published closed forms of the obstruction computation, and the errata found
when they are recomputed from their defining equations.

Every expression is a rational function of the total dimension n, written in
sympy syntax and parsed into Q(n).
"""
from dataclasses import dataclass
from typing import Dict, Tuple

from .exactnum import RatN, ratn

# ---- second-order solutions ----
F_SS = ("-n/3", "-(n - 6)/60", "-(13*n - 38)/60", "0", "0", "0")
F_SS_RHS = ("n", "(3*n - 2)/4", "-(11*n - 10)/12", "0", "0", "0")
U_TILDE_RHS_CONSTANT = ("-4*(n - 1)", "-(3*n - 2)/2", "(5*n - 4)/3", "0", "0", "0")
U_TILDE = (
    "-2*(2*n - 3)/(3*(3*n - 4))",
    "(247*n**2 - 678*n + 456)/(60*(3*n - 4)*(5*n - 6))",
    "-(n - 6)*(4*n - 5)/(30*n*(5*n - 6))",
    "0", "0", "0",
)
U = (
    "2*(2*n - 3)/(3*n - 4)",
    "-(29*n**2 - 82*n + 56)/(4*(3*n - 4)*(5*n - 6))",
    "-(11*n**2 - 19*n + 6)/(6*n*(5*n - 6))",
    "0", "0", "0",
)
H_B_RHS_CONSTANT = ("-4", "-2", "(7*n - 2)/(3*n)", "-2*(n - 2)", "-(n - 2)/2", "(n - 2)/2")
H_B = (
    "-2*(n - 2)/(3*n - 4)",
    "(n - 2)*(7*n - 8)/((3*n - 4)*(5*n - 6))",
    "(n - 2)*(17*n - 18)/(6*n*(5*n - 6))",
    "n*(n - 2)/(3*n - 4)",
    "-n*(n - 2)*(7*n - 8)/(2*(3*n - 4)*(5*n - 6))",
    "-(n - 1)*(n - 2)/(5*n - 6)",
)
TAU_SS = "(n - 2)/(6*n)"

# ---- integrated quantities, as (σ₂² coefficient, σ₄ coefficient) ----
CROSS_CONFORMAL = (
    "-(87*n**3 - 265*n**2 + 186*n + 24)/(108*n*(3*n - 4))",
    "(2235*n**3 - 9866*n**2 + 14364*n - 6888)/(675*(3*n - 4)*(5*n - 6))",
)
# the printed σ₂² cubic reads "29n^3-59n+90n-72"; the n² reading is used
CROSS_TT = (
    "(n - 2)**2*(29*n**3 - 59*n**2 + 90*n - 72)/(72*n*(3*n - 4)*(5*n - 6))",
    "-(n - 2)**2*(41*n**2 + 40*n - 104)/(180*(3*n - 4)*(5*n - 6))",
)
THIRD_VARIATION = (
    "-(19*n**3 - 87*n**2 + 36*n + 12)/(18*n)",
    "(383*n**2 - 174*n + 732)/900",
)
Q4 = "(4515*n**4 - 19054*n**3 + 10364*n**2 + 28056*n - 25056)/(900*(3*n - 4)*(5*n - 6))"
Q2 = "-(483*n**5 - 2659*n**4 + 3584*n**3 + 492*n**2 - 3120*n + 1152)/(36*n*(3*n - 4)*(5*n - 6))"
B1_COMBINED = "-(840*n**4 - 4149*n**3 + 3272*n**2 + 2612*n - 2400)/(300*n*(5*n - 6))"
B1_NUMERATOR = (-2400, 2612, 3272, -4149, 840)

N4_Q4 = "2959/1575"
N4_Q2 = "-311/126"
N4_SUM = "-619/1050"


def parse(forms) -> Tuple[RatN, ...]:
    return tuple(ratn(f) for f in forms)


@dataclass(frozen=True)
class Erratum:
    """A published value that does not follow from its defining equation."""

    key: str
    quantity: str
    published: str
    corrected: str
    note: str

    @property
    def corrected_value(self) -> RatN:
        return ratn(self.corrected)

    @property
    def published_value(self) -> RatN:
        return ratn(self.published)


ERRATA: Dict[str, Erratum] = {
    e.quantity: e
    for e in (
        Erratum(
            "hb-sigma2",
            "h_b.sigma2",
            H_B[2],
            "2*(n - 1)*(n - 2)/(n*(5*n - 6))",
            "solves the h̃_b equation; Σ_b h̃_b = 0 when Ñ is a point",
        ),
        Erratum(
            "tt-cross",
            "cross_tt.c22",
            CROSS_TT[0],
            "-(n - 2)**2*(5*n**3 - 11*n**2 - 14*n + 24)/(36*n*(3*n - 4)*(5*n - 6))",
            "recomputed from -(n-2)/4 Σ_b ∫ v v_b h_b",
        ),
        Erratum(
            "tt-cross",
            "cross_tt.c4",
            CROSS_TT[1],
            "(n - 2)**2*(113*n**2 - 410*n + 328)/(360*(3*n - 4)*(5*n - 6))",
            "recomputed from -(n-2)/4 Σ_b ∫ v v_b h_b",
        ),
        Erratum(
            "third-sigma4",
            "third_variation.c4",
            THIRD_VARIATION[1],
            "(383*n**2 - 1740*n + 732)/900",
            "printed 174n; Q₄ needs 1740n",
        ),
    )
}

# totals shifted by six times the TT cross-term erratum
DERIVED_FROM_TT = {"Q2": "cross_tt.c22", "Q4": "cross_tt.c4"}
