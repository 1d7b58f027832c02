from fractions import Fraction

import pytest

from soliton_obstruction import published
from soliton_obstruction.errors import SingularMatrix, UnsupportedDegree
from soliton_obstruction.exactnum import ZERO, mat_solve, ratn
from soliton_obstruction.varengine import (
    AB2,
    F_SS_OPERATOR,
    H_B_OPERATOR,
    S_V,
    SIGMA2,
    V2,
    VB2,
    VVB,
    AnsatzFn,
    IbpKind,
    PairingSum,
    Pipeline,
    SigmaQuad,
    e,
    ibp_reduce,
    laplacian_matrices,
    ledger,
    mean_linear,
    moment,
    obstruction,
    sigma4_adjudication,
    solve_f_ss,
    solve_h_b,
    solve_u_tilde,
    tau_ss,
    trace_over_factors,
    verify_back_substitution,
)


def frac(*values):
    return tuple(Fraction(v) for v in values)


def test_laplacian_matrix_columns():
    lap = laplacian_matrices()
    assert lap.M.column(V2) == tuple(ratn(str(c)) for c in (-4, -2, 2, 0, 0, 0))
    assert lap.M_b.column(VVB) == tuple(ratn(str(c)) for c in (0, 0, 0, -2, -4, 2))
    assert lap.apply(e(SIGMA2)) == AnsatzFn.zero()


def test_shifted_operator_determinants():
    M = laplacian_matrices().M
    assert H_B_OPERATOR.matrix(M).det() == 256
    assert F_SS_OPERATOR.matrix(M).det() != 0
    assert M.det() == 0
    with pytest.raises(SingularMatrix):
        mat_solve(M, e(V2).coefficients)


def test_ansatz_function_validation():
    with pytest.raises(ValueError):
        AnsatzFn((1, 2, 3))
    assert e(VVB).has_b_part
    assert not e(S_V).has_b_part


def test_tau_ss():
    assert tau_ss() == ratn(published.TAU_SS)
    assert tau_ss(4) == Fraction(1, 12)


def test_f_ss(pipeline):
    assert pipeline.f_ss_rhs == AnsatzFn.parse(published.F_SS_RHS)
    assert pipeline.f_ss == AnsatzFn.parse(published.F_SS)
    assert pipeline.f_ss.evaluate(4) == frac("-4/3", "1/30", "-7/30", 0, 0, 0)
    assert verify_back_substitution(pipeline.f_ss, F_SS_OPERATOR, pipeline.f_ss_rhs)


def test_perturbed_solution_fails_back_substitution(pipeline):
    perturbed = pipeline.f_ss + e(V2)
    assert not verify_back_substitution(perturbed, F_SS_OPERATOR, pipeline.f_ss_rhs)


def test_u_tilde_and_u(pipeline):
    assert pipeline.u_tilde == AnsatzFn.parse(published.U_TILDE)
    assert pipeline.u == AnsatzFn.parse(published.U)
    assert pipeline.u_tilde.evaluate(4) == frac("-5/12", "53/210", "11/840", 0, 0, 0)
    assert pipeline.u.evaluate(4) == frac("5/4", "-3/7", "-53/168", 0, 0, 0)
    assert pipeline.u_tilde_rhs == pipeline.second_variation_trace * 2


def test_h_b(pipeline):
    h = pipeline.h_b
    expected = AnsatzFn.parse(published.H_B)
    for i in (V2, S_V, VVB, VB2, AB2):
        assert h[i] == expected[i]
    assert h[SIGMA2] == published.ERRATA["h_b.sigma2"].corrected_value
    assert h[SIGMA2] != expected[SIGMA2]
    assert h.evaluate(4) == frac("-1/2", "5/14", "3/14", 1, "-5/7", "-3/7")
    assert verify_back_substitution(h, H_B_OPERATOR, pipeline.h_b_rhs)


def test_h_b_is_trace_free_for_two_spheres(pipeline):
    assert trace_over_factors(pipeline.h_b, 2).evaluate(4) == frac(0, 0, 0, 0, 0, 0)


def test_plain_moments():
    assert moment(e(V2), e(V2)) == SigmaQuad(ratn("1/3"), ratn("-2/15"))
    assert moment(e(SIGMA2), e(SIGMA2)) == SigmaQuad(ratn("1"), ZERO)
    assert moment(e(V2), e(S_V)) == moment(e(S_V), e(V2))
    assert mean_linear(e(S_V)) == Fraction(1, 3)


def test_moment_degree_errors():
    with pytest.raises(UnsupportedDegree):
        moment(e(VVB), e(V2))
    with pytest.raises(UnsupportedDegree):
        moment(e(V2), e(V2), "sum_b_vvb")
    with pytest.raises(UnsupportedDegree):
        mean_linear(e(AB2))
    with pytest.raises(ValueError):
        moment(e(V2), e(V2), "cubic")


def test_sum_b_moments():
    assert moment(e(VVB), e(VB2), "sum_b_vvb") == SigmaQuad(ZERO, ratn("1/5"))
    assert moment(e(VVB), e(AB2), "sum_b_vvb") == SigmaQuad(ZERO, ratn("1/3"))


def test_sigma_quad_value():
    quad = SigmaQuad(ratn("1/3"), ratn("-2/15"))
    assert quad.value(4, 2, 2) == Fraction(16, 15)


def test_ibp_reduce():
    assert ibp_reduce(IbpKind.V_LAP, e(V2)).integrate() == SigmaQuad()
    assert ibp_reduce("v²Δφ", e(SIGMA2)).integrate() == ibp_reduce(IbpKind.V2_LAP, e(SIGMA2)).integrate()
    lap = laplacian_matrices()
    for j in (V2, S_V, SIGMA2):
        pairing = PairingSum.single(e(V2), lap.apply(e(j)))
        assert pairing.integrate() == ibp_reduce(IbpKind.V2_LAP, e(j)).integrate()


def test_integrated_quantities(pipeline):
    assert pipeline.cross_conformal == SigmaQuad.parse(published.CROSS_CONFORMAL)
    assert pipeline.cross_conformal.evaluate(4) == frac("-131/216", "4469/9450")
    assert pipeline.cross_tt.evaluate(4) == frac("-1/36", "31/630")
    assert pipeline.cross_tt.c22 == published.ERRATA["cross_tt.c22"].corrected_value
    assert pipeline.cross_tt.c4 == published.ERRATA["cross_tt.c4"].corrected_value
    third = pipeline.third_variation
    assert third.c22 == SigmaQuad.parse(published.THIRD_VARIATION).c22
    assert third.c4 == published.ERRATA["third_variation.c4"].corrected_value
    assert third.evaluate(4) == frac("5/18", "-1/9")


def test_obstruction_form(pipeline):
    form = pipeline.obstruction_form
    assert form.evaluate(4) == frac("-127/36", "4759/1575")
    assert (form.c4 + form.c22).evaluate(4) == Fraction(-1063, 2100)


def test_obstruction_for_two_spheres():
    report = obstruction(2)
    assert report.verdicts == {
        "n4_sum_negative": True,
        "n4_q4_nonnegative": True,
        "b1_numerator_integer_root_free": True,
    }
    assert report.holds
    assert report.unexplained == []
    assert {d.quantity for d in report.discrepancies} == {
        "h_b.sigma2",
        "cross_tt.c22",
        "cross_tt.c4",
        "third_variation.c4",
        "Q2",
        "Q4",
    }
    assert report.Q4.evaluate(4) == Fraction(2959, 1575)
    assert report.Q2.evaluate(4) == Fraction(-311, 126)


def test_obstruction_for_one_sphere():
    assert obstruction(1).holds
    with pytest.raises(ValueError):
        obstruction(3)


def test_sigma4_adjudication(pipeline):
    adj = sigma4_adjudication(pipeline)
    assert adj["matches_obstruction_formula"]
    assert not adj["matches_third_variation_display"]
    assert adj["implied_by_obstruction_formula"].evaluate(4) == Fraction(-1, 9)


def test_corrupted_matrix_reaches_the_ledger(corrupted_lap):
    entries = ledger(Pipeline(corrupted_lap))
    assert any(d.quantity.startswith("f_ss.") and not d.explained for d in entries)


def test_module_level_solvers(pipeline):
    assert solve_f_ss() == pipeline.f_ss
    assert solve_u_tilde() == (pipeline.u_tilde, pipeline.u)
    assert solve_h_b() == pipeline.h_b
