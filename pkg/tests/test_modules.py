import itertools

import pytest

from cubicnorm.errors import BadSplit, ShapeMismatch
from cubicnorm.modules import (
    BilinearForm,
    FreeModule,
    PolyLaw,
    generic_elements,
    law_from_function,
    laws_equal,
    linearize,
    linearize_multi,
    polarize,
    scalar_module,
)
from cubicnorm.rings import QQ, ZZ, PolyRing, extend_scalars


def ideal_laws(ring=ZZ):
    J = FreeModule(ring, ("i",))
    R1 = scalar_module(ring)
    N = PolyLaw(J, R1, 3, ["i^3"])
    sharp = PolyLaw(J, J, 2, ["i^2"])
    return J, R1, N, sharp


def test_apply_examples():
    J, R1, N, sharp = ideal_laws()
    assert N(J.element([2])).coords[0] == 8
    assert N(J.zero()).is_zero()
    S = extend_scalars(ZZ, ["lam"])
    x = J.element([S("3*lam")], S)
    assert sharp(x).coords[0] == S("9*lam^2")


def test_apply_homogeneity():
    J, R1, N, sharp = ideal_laws()
    S, (x,) = generic_elements([J], ["g_"], extra=["lam"])
    lam = S.var("lam")
    assert N(x.scale(lam)).coords[0] == lam**3 * N(x).coords[0]


def test_linearize_examples():
    J, R1, N, sharp = ideal_laws()
    cross = linearize(sharp, (1, 1))
    u = J.element([5])
    v = J.element([7])
    assert cross(u, v).coords[0] == 2 * 5 * 7
    n12 = linearize(N, (1, 2))
    assert n12(u, v).coords[0] == 3 * 5 * 49
    full = linearize(N, (3, 0))
    ok, _ = laws_equal(
        full,
        law_from_function((J, J), R1, (3, 0), lambda a, b: N(a)),
    )
    assert ok


def test_linearize_sum_identity():
    J, R1, N, sharp = ideal_laws()
    S, (u, v) = generic_elements([J, J], ["u_", "v_"], extra=["lam", "mu"])
    lam, mu = S.var("lam"), S.var("mu")
    lhs = N(u.scale(lam) + v.scale(mu)).coords[0]
    rhs = S(0)
    for k in range(4):
        part = linearize(N, (k, 3 - k))(u, v).coords[0]
        rhs = rhs + lam**k * mu ** (3 - k) * part
    assert lhs == rhs


def test_full_linearization_symmetric():
    J, R1, N, sharp = ideal_laws()
    tri = linearize_multi(N, (1, 1, 1))
    S, args = generic_elements([J] * 3, ["a_", "b_", "c_"])
    vals = [tri(*(args[i] for i in perm)).coords[0] for perm in itertools.permutations(range(3))]
    assert all(v == vals[0] for v in vals)


def test_bad_split():
    J, R1, N, sharp = ideal_laws()
    with pytest.raises(BadSplit):
        linearize(N, (2, 2))


def test_polarize():
    J, R1, N, sharp = ideal_laws()
    cross = polarize(sharp)
    S, (u, v) = generic_elements([J, J], ["u_", "v_"])
    assert cross(u, v).coords[0] == 2 * u.coords[0] * v.coords[0]
    assert cross(u, v).coords[0] == cross(v, u).coords[0]


def test_laws_equal_witness():
    J, R1, N, sharp = ideal_laws()
    ok, witness = laws_equal(N, N)
    assert ok and witness is None
    Nsq = PolyLaw(J, R1, 3, ["2*i^3"])
    ok, witness = laws_equal(N, Nsq)
    assert not ok
    assert witness is not None
    x = J.element([witness["i"]])
    assert N(x).coords[0] != Nsq(x).coords[0]


def test_laws_equal_shape_mismatch():
    J, R1, N, sharp = ideal_laws()
    with pytest.raises(ShapeMismatch):
        laws_equal(N, sharp)


def test_homogeneity_enforced():
    J, R1, N, _ = ideal_laws()
    with pytest.raises(ShapeMismatch):
        PolyLaw(J, R1, 3, ["i^2"])


def test_naturality_of_apply():
    # evaluating coordinates first then applying equals applying then evaluating
    J, R1, N, sharp = ideal_laws()
    S = extend_scalars(ZZ, ["s"])
    x = J.element([S("2*s + 1")], S)
    y = N(x).coords[0]
    evaluated = S.evaluate(y.data, {"s": 3}, ZZ)
    assert evaluated == N(J.element([7])).coords[0]


def test_bilinear_form():
    ring = QQ
    J = FreeModule(ring, ("a", "b"))
    T = BilinearForm(J, J, [[1, 2], [0, 1]])
    u = J.element([1, 1])
    v = J.element([3, 5])
    assert T(u, v) == QQ(3 + 10 + 5)
    Tt = T.transpose()
    assert Tt(v, u) == T(u, v)


def test_law_from_function_matches_direct():
    J, R1, N, sharp = ideal_laws()
    N2 = law_from_function(J, R1, 3, lambda x: N(x))
    ok, _ = laws_equal(N, N2)
    assert ok
