"""Cubic norm pair suites against the builtin catalog."""

import pytest

from cubicnorm import cnp
from cubicnorm.errors import NotAUnit, PreconditionViolated, UnknownTag
from cubicnorm.rings import QQ, ZZ, ModRing


@pytest.fixture(scope="module")
def ideal():
    return cnp.builtin_instance("ideal")


@pytest.fixture(scope="module")
def ideal_q():
    return cnp.builtin_instance("ideal", QQ)


@pytest.fixture(scope="module")
def trivial():
    return cnp.builtin_instance("trivial", ModRing(5))


@pytest.fixture(scope="module")
def mat3():
    return cnp.builtin_instance("mat3-det")


@pytest.fixture(scope="module")
def mutant():
    return cnp.builtin_instance("mutant")


def test_axioms_pass_on_catalog(ideal, trivial, mat3):
    for pair in (ideal, trivial, mat3):
        report = cnp.check_axioms(pair)
        assert report.ok, str(report)


def test_axiom_one_fails_with_wrong_trace():
    # ideal pair with T = ij instead of 3ij: N^(1,2)(a,b) = 3ab^2 != ab^2.
    bad = cnp.rank_one_pair("bad-trace", ZZ, "i^3", "i^2", "j^3", "j^2", 1)
    report = cnp.check_axioms(bad)
    assert not report.ok
    failed = {item.name for item in report.failures}
    assert any("(1)" in name for name in failed)
    assert all("witness" in item.detail for item in report.failures)


def test_q_operator_values(ideal):
    a = ideal.J.element([2])
    c = ideal.Jp.element([3])
    assert cnp.q_operator(ideal, a, c) == ideal.J.element([12])
    zero = ideal.J.zero()
    assert cnp.q_operator(ideal, zero, c).is_zero()


def test_q_operator_is_a_squared_c_symbolically(ideal):
    from cubicnorm.modules import law_from_function, laws_equal, PolyLaw

    q_law = law_from_function(
        (ideal.J, ideal.Jp),
        ideal.J,
        (2, 1),
        lambda a, c: cnp.q_operator(ideal, a, c),
    )
    expected = PolyLaw(
        (ideal.J, ideal.Jp), ideal.J, (2, 1), ["i^2 * j_2"],
        var_blocks=(("i",), ("j_2",)),
    )
    equal, witness = laws_equal(q_law, expected)
    assert equal and witness is None


def test_basic_properties(ideal, trivial, mat3):
    for pair in (ideal, trivial, mat3):
        report = cnp.check_basic_properties(pair)
        assert report.ok, str(report)


def test_trace_of_sharp_values(ideal, mat3):
    a = ideal.J.element([2])
    assert ideal.T(a, ideal.sharp(a)) == ZZ(24)
    d = mat3.J.element([1, 0, 0, 0, 2, 0, 0, 0, 3])
    # adjugate of diag(1,2,3) is diag(6,3,2); trace pairing gives 18 = 3 det.
    assert mat3.T(d, mat3.sharp(d)) == QQ(18)


def test_sharp_endo(ideal, trivial, mat3):
    for pair in (ideal, trivial, mat3):
        report = cnp.check_sharp_endo(pair)
        assert report.ok, str(report)


def test_well_behaved(ideal, trivial, mat3, mutant):
    for pair in (ideal, trivial, mat3):
        flag, witness = cnp.is_well_behaved(pair)
        assert flag and witness is None
    flag, witness = cnp.is_well_behaved(mutant)
    assert not flag
    assert witness is not None


def test_lin_nvsharp(ideal, mat3, mutant):
    for pair in (ideal, mat3):
        report = cnp.check_lin_nvsharp(pair)
        assert report.ok, str(report)
    with pytest.raises(PreconditionViolated):
        cnp.check_lin_nvsharp(mutant)


def test_isotope_at_unit_matches_original(ideal_q):
    one = ideal_q.J.element([1])
    structure = cnp.isotope(ideal_q, one)
    assert structure.report.ok
    x = ideal_q.J.element([5])
    assert structure.norm(x) == ideal_q.norm(x)
    assert structure.sharp(x).coords == ideal_q.sharp(x).coords
    y = ideal_q.J.element([7])
    assert structure.T(x, y) == ideal_q.T(x, ideal_q.Jp.element([7]))


def test_isotope_at_two(ideal_q):
    a = ideal_q.J.element([2])
    structure = cnp.isotope(ideal_q, a)
    assert structure.report.ok
    b = ideal_q.Jp.element([3])
    qa = cnp.q_operator(ideal_q, a, b)
    back = cnp.q_operator(ideal_q.swapped(), ideal_q.sharp(a), qa)
    # Q_{a^#} Q_a b = N(a)^2 b with N(2) = 8.
    assert back == ideal_q.Jp.element([192])


def test_isotope_requires_unit(ideal):
    with pytest.raises(NotAUnit):
        cnp.isotope(ideal, ideal.J.element([2]))


def test_unknown_tag():
    with pytest.raises(UnknownTag):
        cnp.builtin_instance("nonesuch")


def test_jordan_pair_axioms(ideal, trivial, mat3):
    for pair in (ideal, trivial, mat3):
        report = cnp.jordan_pair_axioms(pair)
        assert report.ok, str(report)


def test_jordan_degenerate_zero(ideal):
    zero = ideal.J.zero()
    c = ideal.Jp.element([4])
    assert cnp.q_operator(ideal, zero, c).is_zero()
    assert cnp.d_operator(ideal, zero, c, zero).is_zero()
