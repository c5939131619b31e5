"""Divided power representation checks."""

import pytest

from cubicnorm import cnp, dpr
from cubicnorm.modules import generic_elements
from cubicnorm.rings import ZZ


@pytest.fixture(scope="module")
def ideal():
    return cnp.builtin_instance("ideal")


@pytest.fixture(scope="module")
def reps(ideal):
    return dpr.DPRep(ideal, "+"), dpr.DPRep(ideal, "-")


def test_rho_at_zero_is_identity(ideal, reps):
    plus, minus = reps
    j = ideal.J.zero()
    assert plus.rho(j, 1) == dpr.BlockEndo.identity(ZZ, plus.dims)
    k = ideal.Jp.zero()
    assert minus.rho(k, 1) == dpr.BlockEndo.identity(ZZ, minus.dims)


def test_rho3_top_corner_is_norm(ideal, reps):
    plus, _ = reps
    j = ideal.J.element([1])
    comp = plus.rho_i(j, 3)
    # the only degree-3 entry sends the last summand to N(j) in the first
    assert comp.rows[0][3] == ZZ(1)
    assert sum(1 for row in comp.rows for c in row if not c.is_zero()) == 1


def test_binomial_product_law(ideal, reps):
    plus, minus = reps
    assert dpr.check_binomial(plus).ok
    assert dpr.check_binomial(minus).ok


def test_binomial_fails_for_scaled_norm():
    # the mutant is the ideal pair with N doubled on one side; the product
    # law breaks in the degree-3 corner block (1,4).
    mutant = cnp.builtin_instance("mutant")
    report = dpr.check_binomial(dpr.DPRep(mutant, "+"))
    assert not report.ok
    assert "(1, 4)" in report.failures[0].detail


def test_binomial_minus_trivial():
    triv = cnp.builtin_instance("trivial")
    assert dpr.check_binomial(dpr.DPRep(triv, "-")).ok


def test_binomial_coefficient_law(reps):
    plus, minus = reps
    assert dpr.check_binomial_coefficient_law(plus).ok
    assert dpr.check_binomial_coefficient_law(minus).ok


def test_dp_eq_ideal(ideal, reps):
    plus, minus = reps
    report = dpr.check_dp_eq(plus, minus)
    assert report.ok, str(report)
    names = [item.name for item in report.items]
    assert "side + (6,3) sum = rho_3(Q_u v)" in names
    assert "side - (4,1) sum = 0" in names


def test_dp_eq_trivial_and_mat3():
    for tag in ("trivial", "mat3-det"):
        pair = cnp.builtin_instance(tag)
        report = dpr.check_dp_eq(dpr.DPRep(pair, "+"), dpr.DPRep(pair, "-"))
        assert report.ok, str(report)


def test_rho_homogeneity(ideal, reps):
    plus, _ = reps
    S, (u,) = generic_elements([ideal.J], ("u",), extra=("lam", "t"))
    lam, t = S.var("lam"), S.var("t")
    assert plus.rho(u.scale(lam), t) == plus.rho(u, lam * t)


def test_tkk_scalar_pair():
    jp = dpr.JordanPair.scalar(ZZ)
    rho_p, rho_m = dpr.tkk_rep(jp)
    y = dpr.TKKElement(jp, jp.Vm.element([5]), (), jp.Vp.zero(), ZZ)
    x = jp.Vp.element([2])
    out = rho_p(x, 1, y)
    # V- part carried along, V+ part is t^2 Q_x y = x^2 y = 20
    assert out.vm == jp.Vm.element([5])
    assert out.vp == jp.Vp.element([20])
    assert len(out.ders) == 1
    ident = rho_p(jp.Vp.zero(), 1, y)
    assert ident.vp.is_zero() and ident.vm == y.vm
    assert ident.der_on_plus(jp.Vp.element([1])).is_zero()


def test_tkk_matches_q_operator(ideal):
    jp = dpr.JordanPair.from_cubic(ideal)
    rho_p, _ = dpr.tkk_rep(jp)
    x = ideal.J.element([3])
    y = ideal.Jp.element([4])
    start = dpr.TKKElement(jp, y, (), ideal.J.zero(), ZZ)
    out = rho_p(x, 1, start)
    assert out.vp == cnp.q_operator(ideal, x, y)


def test_tkk_binomial(ideal):
    assert dpr.check_tkk_binomial(dpr.JordanPair.from_cubic(ideal)).ok
    assert dpr.check_tkk_binomial(dpr.JordanPair.scalar(ZZ)).ok
