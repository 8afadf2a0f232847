import pytest

from geolin3.ansatz import AnsatzWindow
from geolin3.cas import RationalFunction as RF, var
from geolin3.geometry import GeodesicSystem2
from geolin3.reduction import (
    QuinticForm,
    SecondOrderCubic,
    SemilinearForm,
    extract_degenerate,
    extract_quintic,
    extract_semilinear,
    project,
    scalar_of,
    third_quintic,
    third_semilinear,
)
import oracles

x, y, k, l = var("x"), var("y"), var("k"), var("l")
EX3 = SecondOrderCubic(-x / y**2, 1 / y, 2 / x, 0)
EX2 = SecondOrderCubic(x, 0, 2 / x, 0)
EQ45 = QuinticForm(3 * x**2 / y**4, -3 * x / y**3, -6 / y**2, 6 / (x * y), 6 / x**2, 0)


def test_projection_of_example_gauges():
    ex3 = GeodesicSystem2(0, 0, -x / y**2, 0, -1 / x, 1 / y)
    ex2 = GeodesicSystem2(0, 0, x, 0, -1 / x, 0)
    assert scalar_of(project(ex3.connection())) == EX3
    assert scalar_of(project(ex2.connection())) == EX2
    assert scalar_of(project(GeodesicSystem2.zero().connection())) == SecondOrderCubic(0, 0, 0, 0)


def test_semilinear_of_example2():
    s = third_semilinear(EX2)
    assert (s.A2, s.A1, s.A0) == (3 * x, 0, 2 / x)
    # the exact total derivative keeps c_x * y'^3 = y'^3
    assert (s.B4, s.B3, s.B2, s.B1, s.B0) == (0, -1, 0, 2 / x**2, 0)
    assert s.lhs() == (RF.var("y'''") + (3 * x * RF.var("y'") ** 2 + 2 / x) * RF.var("y''")
                       + RF.var("y'") ** 3 - 2 / x**2 * RF.var("y'"))
    assert third_semilinear(SecondOrderCubic(0, 0, 0, 0)).lhs() == RF.var("y'''")


def test_quintic_of_examples():
    assert third_quintic(EX2) == QuinticForm(3 * x**2, 0, 7, 0, 6 / x**2, 0)
    assert third_quintic(EX3) == EQ45


def test_example1_forward_values():
    q = third_quintic(SecondOrderCubic(0, 2 / y, k, l * y))
    assert q == QuinticForm(0, 0, 6 / y**2, 6 * k / y, k**2 + 5 * l, k * l * y)
    # the alternate values are not what the forward map gives
    assert q.delta != 8 * k / y and q.epsilon != k**2 - 5 * l


def test_example1_oracle():
    ks, ls = oracles.sp.symbols("k l")
    third = oracles.eliminated_third(0, 2 / oracles.y, ks, ls * oracles.y)
    poly = oracles.sp.Poly(third, oracles.p)
    # y''' = gamma*y'^3 - delta*y'^2 + epsilon*y' - phi
    assert oracles.is_zero(poly.coeff_monomial(oracles.p**2) + 6 * ks / oracles.y)
    assert oracles.is_zero(poly.coeff_monomial(oracles.p) - ks**2 - 5 * ls)


@pytest.mark.parametrize("eq2", [EX2, EX3, SecondOrderCubic(x * y, 1 / x, y, x**2),
                                 SecondOrderCubic(1 / y, x, 0, 1 / (x * y))])
def test_total_derivative_oracle(eq2):
    c, g, h, d = (oracles.to_sympy(v) for v in eq2.as_tuple())
    lhs2 = oracles.q + c * oracles.p**3 - g * oracles.p**2 + h * oracles.p - d
    semi = oracles.to_sympy(third_semilinear(eq2).lhs())
    assert oracles.is_zero(semi - oracles.total_derivative(lhs2))
    quint = oracles.to_sympy(third_quintic(eq2).lhs())
    assert oracles.is_zero(quint - (oracles.t - oracles.eliminated_third(c, g, h, d)))


def test_extract_quintic_branches_for_eq45():
    ext = extract_quintic(EQ45)
    plus, minus = ext.candidates
    assert plus.sign == "+" and plus.eq2.g == -1 / (5 * y) and plus.eq2.h == -33 / (25 * x)
    assert "epsilon_match" in plus.failing()
    assert minus.passed and minus.eq2 == EX3


def test_extract_quintic_for_eq44():
    plus, minus = extract_quintic(third_quintic(EX2)).candidates
    assert plus.passed and plus.eq2 == EX2
    assert not minus.passed


def test_extract_quintic_outside_class():
    assert extract_quintic(QuinticForm(x, 0, 0, 0, 0, 0)).status == "not-in-class"
    assert extract_quintic(QuinticForm(0, x, 0, 0, 0, 0)).status == "not-in-class"
    assert extract_quintic(QuinticForm(0, 0, 1, 0, 0, 0)).status == "degenerate"


def test_extract_degenerate_with_hint():
    q = third_quintic(SecondOrderCubic(0, 2 / y, k, l * y))
    ext = extract_degenerate(q, SecondOrderCubic(0, 2 / y, k, l * y))
    [cand] = ext.candidates
    assert cand.passed and len(cand.residuals) == 4
    bad = extract_degenerate(q, SecondOrderCubic(0, 2 / y, k, l))
    assert not bad.candidates[0].passed


def test_extract_degenerate_trivial_and_search():
    zero = QuinticForm(0, 0, 0, 0, 0, 0)
    assert extract_degenerate(zero, SecondOrderCubic(0, 0, 0, 0)).candidates[0].passed
    q = third_quintic(SecondOrderCubic(0, 2 / y, 0, 0))
    ext = extract_degenerate(q, window=AnsatzWindow((0, 0), (-2, 2)))
    assert any(c.eq2.g == 2 / y for c in ext.candidates)


def test_extract_semilinear_round_trip():
    ext = extract_semilinear(third_semilinear(EX2))
    assert ext.status == "ok" and ext.candidate.passed
    assert ext.candidate.eq2 == EX2


def test_extract_semilinear_tampered():
    s = third_semilinear(EX3)
    tampered = SemilinearForm(*s.as_tuple()[:3], s.B4 + 1, *s.as_tuple()[4:])
    ext = extract_semilinear(tampered)
    assert "B4_match" in ext.candidate.failing()


def test_extract_semilinear_of_y3_zero():
    ext = extract_semilinear(SemilinearForm(0, 0, 0, 0, 0, 0, 0, 0))
    assert ext.candidate.eq2 == SecondOrderCubic(0, 0, 0, 0)
