"""Tests for the five-graded Lie algebra over a cubic norm pair."""

import pytest

from cubicnorm import cnp, lie, stru
from cubicnorm.rings import ZZ, ModRing


@pytest.fixture(scope="module")
def ideal():
    return cnp.builtin_instance("ideal")


@pytest.fixture(scope="module")
def trivial():
    return cnp.builtin_instance("trivial", ModRing(5))


@pytest.fixture(scope="module")
def mat3():
    return cnp.builtin_instance("mat3-det")


def test_root_lattice():
    short = lie.Root(1, 1)
    long = lie.Root(0, 1)
    assert short.is_short() and not short.is_long()
    assert long.is_long() and not long.is_short()
    assert short + lie.Root(2, 1) == lie.Root(3, 2)
    assert (-long) == lie.Root(0, -1)
    assert not lie.Root(1, 2).is_root()
    assert len(lie.SUPPORT) == 13
    assert sum(1 for k in lie.SUPPORT if lie.Root(*k).is_root()) == 12


def _module_fill(module, ring, start):
    return module.element(
        [ring(((start + i) % 5) - 2) for i in range(module.rank)], ring
    )


def _mixed_element(pair):
    ring = pair.ring
    t1 = stru.t_element(pair, ring)
    up = stru.StructurableElement(
        pair, ring(2), _module_fill(pair.J, ring, 1), _module_fill(pair.Jp, ring, 2), ring(-1), ring
    )
    dn = stru.StructurableElement(
        pair, ring(1), _module_fill(pair.J, ring, 3), _module_fill(pair.Jp, ring, 4), ring(4), ring
    )
    x = lie.from_sp2(pair, ring(2)) + lie.from_sm2(pair, ring(-3))
    x = x + lie.from_ap1(up) + lie.from_am1(dn)
    v = _module_fill(pair.J, ring, 0)
    return x + lie.from_gens(pair, [(t1, stru.embed_j(pair, v))])


def test_bracket_alternating(ideal, mat3):
    for pair in (ideal, mat3):
        x = _mixed_element(pair)
        assert lie.bracket(x, x).is_zero()


def test_bracket_antisymmetric(ideal):
    x = _mixed_element(ideal)
    y = lie.bracket(x, lie.from_ap1(stru.t_element(ideal)))
    assert (lie.bracket(x, y) + lie.bracket(y, x)).is_zero()


def test_top_corner_bracket(ideal):
    # [t_1, tbar_1] = -(t - tbar)_2 and the diagonal lines commute.
    t1 = lie.from_ap1(stru.t_element(ideal))
    tb1 = lie.from_ap1(stru.tbar_element(ideal))
    assert lie.bracket(t1, tb1) == lie.from_sp2(ideal, ZZ(-1))
    assert lie.bracket(t1, t1).is_zero()


def test_skew_line_bracket_scales(ideal):
    # [2_2, 3_-2] is 6 times the long grading derivation, so bracketing it
    # against t_1 multiplies by 6 (t sits at (3, 1), pairing 1 with (3, 2)).
    z = lie.bracket(lie.from_sp2(ideal, ZZ(2)), lie.from_sm2(ideal, ZZ(3)))
    zeta = lie.grading_derivation((3, 2))(ideal)
    assert (z - zeta.scale(ZZ(6))).is_zero()
    t1 = lie.from_ap1(stru.t_element(ideal))
    assert lie.bracket(z, t1) == t1.scale(ZZ(6))


def test_grade_decompose_resums(ideal):
    x = _mixed_element(ideal)
    parts = lie.grade_decompose(x)
    total = lie.zero(ideal)
    for part in parts.values():
        total = total + part
    assert (total - x).is_zero()
    assert not parts[(3, 2)].is_zero()
    assert not parts[(1, 0)].is_zero()
    assert parts[(-1, 0)].is_zero()


def test_eigenvalue_table():
    for key in lie.SUPPORT:
        m, n = key
        assert lie.eigenvalue((3, 2), key) == n
        assert lie.eigenvalue((0, 1), key) + lie.eigenvalue((3, 1), key) == n


def test_grading_derivation_eigenvalues(ideal):
    zeta = lie.grading_derivation((0, 1))(ideal)
    tb1 = lie.from_ap1(stru.tbar_element(ideal))
    assert lie.bracket(zeta, tb1) == tb1.scale(ZZ(2))
    t1 = lie.from_ap1(stru.t_element(ideal))
    assert lie.bracket(zeta, t1) == t1.scale(ZZ(-1))


def test_jacobi(ideal, trivial):
    for pair in (ideal, trivial):
        report = lie.check_jacobi(pair)
        assert report.ok, str(report)
        assert len(report.items) == 35


def test_g2_closure(ideal, trivial):
    for pair in (ideal, trivial):
        report = lie.check_g2_closure(pair)
        assert report.ok, str(report)
        assert len(report.items) == 91


def test_grading_derivations(ideal, trivial):
    for pair in (ideal, trivial):
        report = lie.check_grading_derivations(pair)
        assert report.ok, str(report)


def test_x0_span(ideal, trivial, mat3):
    for pair in (ideal, trivial, mat3):
        report = lie.check_x0_span(pair)
        assert report.ok, str(report)


def test_long_jordan_line(ideal, mat3):
    for pair in (ideal, mat3):
        report = lie.check_long_jordan_line(pair)
        assert report.ok, str(report)
