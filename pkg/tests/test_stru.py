"""Tests for the structurable algebra built on a cubic norm pair."""

import pytest

from cubicnorm import cnp, stru
from cubicnorm.modules import FreeModule
from cubicnorm.rings import ZZ, El, EtaleRing, ModRing


@pytest.fixture(scope="module")
def ideal():
    return cnp.builtin_instance("ideal")


@pytest.fixture(scope="module")
def trivial():
    return cnp.builtin_instance("trivial", ModRing(5))


@pytest.fixture(scope="module")
def mat3():
    return cnp.builtin_instance("mat3-det")


def test_idempotents(ideal):
    t = stru.t_element(ideal)
    tb = stru.tbar_element(ideal)
    assert stru.multiply(t, t) == t
    assert stru.multiply(tb, tb) == tb
    assert stru.multiply(t, tb).is_zero()
    assert stru.multiply(tb, t).is_zero()


def test_off_diagonal_product(ideal):
    x = stru.element(ideal, 0, [2], [0], 0)
    y = stru.element(ideal, 0, [0], [3], 0)
    assert stru.multiply(x, y) == stru.element(ideal, 18, [0], [0], 0)
    assert stru.multiply(y, x) == stru.element(ideal, 0, [0], [0], 18)


def test_conjugate_is_involution(ideal):
    t = stru.t_element(ideal)
    assert stru.conjugate(t) == stru.tbar_element(ideal)
    x = stru.element(ideal, 5, [2], [7], -1)
    assert stru.conjugate(stru.conjugate(x)) == x


def test_conjugate_is_anti_automorphism(ideal, mat3):
    for pair in (ideal, mat3):
        S, (x, y), _ = stru.generic_matrices(pair, ("x", "y"))
        lhs = stru.conjugate(stru.multiply(x, y))
        rhs = stru.multiply(stru.conjugate(y), stru.conjugate(x))
        assert all(
            (p - q).is_zero() for p, q in zip(lhs.coords, rhs.coords)
        )


def test_skew_part(ideal):
    x = stru.element(ideal, 5, [2], [7], -1)
    s = stru.skew_part(x)
    assert s.r == ZZ(6)
    assert x - stru.conjugate(x) == s.as_element()
    assert s.conjugate().r == ZZ(-6)
    assert s.conjugate().as_element() == -s.as_element()


def test_v_operator_examples(ideal):
    S, (y,), (w,) = stru.generic_matrices(
        ideal, ("y",), more_modules=[ideal.Jp], more_prefixes=("w",)
    )
    t = stru.t_element(ideal, S)
    tb = stru.tbar_element(ideal, S)
    we = stru.embed_jp(ideal, w)
    lhs = stru.v_operator(t, tb, y)
    rhs = stru.multiply(t, y) + stru.multiply(y, t - tb)
    assert all((p - q).is_zero() for p, q in zip(lhs.coords, rhs.coords))
    assert stru.v_operator(t, we, y).is_zero()


def test_v_table(ideal, trivial, mat3):
    for pair in (ideal, trivial, mat3):
        report = stru.check_v_table(pair)
        assert report.ok, str(report)
        assert len(report.items) >= 13


def test_kantor_triple(ideal, trivial):
    for pair in (ideal, trivial):
        report = stru.check_kantor_triple(pair)
        assert report.ok, str(report)


def test_kantor_triple_mat3(mat3):
    report = stru.check_kantor_triple(mat3)
    assert report.ok, str(report)


def test_k_operator_vanishes_on_diagonal(ideal):
    S, (x, z), _ = stru.generic_matrices(ideal, ("x", "z"))
    assert stru.k_operator(x, x, z).is_zero()


def test_structurable_conditions(ideal, trivial, mat3):
    for pair in (ideal, trivial, mat3):
        report = stru.check_structurable_conditions(pair)
        assert report.ok, str(report)


class _RankOneHermitian:
    """A minimal hermitian structure over the split quadratic extension,
    with norm j -> j * j * conj(j) on a rank-one module."""

    def __init__(self):
        self.ring = EtaleRing(ZZ, 0)
        self.module = FreeModule(self.ring, ("x",))

    def conj(self, k):
        return El(self.ring, self.ring.conj(k.data))

    def T(self, j, jp):
        return self.ring(3) * j.coords[0] * self.conj(jp.coords[0])

    def sharp(self, j):
        c = self.conj(j.coords[0])
        return self.module.element([c * c], self.ring)

    def cross(self, j, jp):
        s = self.sharp(j + jp) - self.sharp(j) - self.sharp(jp)
        return s


@pytest.fixture(scope="module")
def hstruct():
    return _RankOneHermitian()


def test_b_multiply_unit(hstruct):
    K = hstruct.ring
    one = stru.BElement(hstruct, K(1), hstruct.module.zero(K))
    x = stru.BElement(hstruct, K("2 + 5*t"), hstruct.module.element(["7"], K))
    assert stru.b_multiply(one, x) == x
    assert stru.b_multiply(x, one) == x


def test_b_multiply_module_part(hstruct):
    K = hstruct.ring
    zero = K(0)
    j = hstruct.module.element(["2 + t"], K)
    jp = hstruct.module.element(["5"], K)
    x = stru.BElement(hstruct, zero, j)
    y = stru.BElement(hstruct, zero, jp)
    prod = stru.b_multiply(x, y)
    assert prod.k == hstruct.T(j, jp)
    assert prod.j == hstruct.cross(j, jp)


def test_b_conjugate(hstruct):
    K = hstruct.ring
    x = stru.BElement(hstruct, K("1 + 2*t"), hstruct.module.element(["3"], K))
    assert stru.b_conjugate(stru.b_conjugate(x)) == x
    assert stru.b_conjugate(x).k == hstruct.conj(x.k)
