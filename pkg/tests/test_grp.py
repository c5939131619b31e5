"""Tests for the positive unipotent group and its vector-group structure."""

import pytest

from cubicnorm import aut, cnp, grp, rings, stru
from cubicnorm.errors import BadMode, BadOrder, ConstraintViolated


@pytest.fixture(scope="module")
def ideal():
    return cnp.builtin_instance("ideal")


@pytest.fixture(scope="module")
def S(ideal):
    return rings.extend_scalars(
        ideal.ring, ("gk", "gm", "gl", "gj", "gw", "gr", "gs")
    )


@pytest.fixture(scope="module")
def generic_point(ideal, S):
    j = ideal.J.basis(S)[0].scale(S.var("gj"))
    w = ideal.Jp.basis(S)[0].scale(S.var("gw"))
    return grp.from_root_factors(
        ideal,
        [
            ((0, 1), S.var("gk")),
            ((1, 1), j),
            ((3, 2), S.var("gm")),
            ((2, 1), w),
            ((3, 1), S.var("gl")),
        ],
        S,
    )


@pytest.fixture(scope="module")
def second_point(ideal, S):
    w = ideal.Jp.basis(S)[0].scale(S.var("gs"))
    return grp.from_root_factors(
        ideal, [((0, 1), S.var("gr")), ((2, 1), w)], S
    )


def test_constraint_validation(ideal):
    R = ideal.ring
    x = stru.element(ideal, 1, ideal.J.zero(R), ideal.Jp.zero(R), 0, R)
    with pytest.raises(ConstraintViolated):
        grp.GPlusElement(ideal, x, x, R)


def test_skew_product_adds(ideal, S, generic_point):
    s = grp.skew_element(ideal, S.var("gr"), S)
    prod = grp.group_law(generic_point, s)
    assert prod.x == generic_point.x
    assert prod.y == generic_point.y + s.y


def test_inverse(generic_point):
    assert grp.group_law(generic_point, grp.inverse(generic_point)).is_identity()
    assert grp.group_law(grp.inverse(generic_point), generic_point).is_identity()


def test_commutator_is_central(ideal, generic_point, second_point):
    c = grp.commutator(generic_point, second_point)
    assert c.x.is_zero()
    assert c.y.b.is_zero() and c.y.c.is_zero()
    assert (c.y.a + c.y.d).is_zero()


def test_degree_one_commutator_lands_in_skew(ideal, S):
    j = grp.root_image(ideal, (1, 1), ideal.J.basis(S)[0].scale(S.var("gj")), S)
    w = grp.root_image(ideal, (2, 1), ideal.Jp.basis(S)[0].scale(S.var("gw")), S)
    c = grp.commutator(j, w)
    assert c.x.is_zero()
    assert not c.y.is_zero()


def test_single_factor_images(ideal, S):
    r = S.var("gr")
    long_mid = grp.root_image(ideal, (3, 2), r, S)
    assert long_mid.x.is_zero()
    assert long_mid.y.a == -r and long_mid.y.d == r
    j = ideal.J.basis(S)[0].scale(S.var("gj"))
    short = grp.root_image(ideal, (1, 1), j, S)
    assert short.x.b == j
    assert short.y.c == ideal.sharp(j)


def test_from_root_factors_rejects_bad_order(ideal, S):
    j = ideal.J.basis(S)[0]
    with pytest.raises(BadOrder):
        grp.from_root_factors(ideal, [((1, 1), j), ((0, 1), S.var("gk"))], S)
    with pytest.raises(BadOrder):
        grp.from_root_factors(
            ideal, [((0, 1), S.var("gk")), ((0, 1), S.var("gl"))], S
        )
    with pytest.raises(BadOrder):
        grp.from_root_factors(ideal, [((-1, -1), ideal.Jp.basis(S)[0])], S)


def test_factor_round_trip(generic_point, ideal, S):
    params = grp.factor_parameters(generic_point)
    assert [r for r, _ in params] == list(grp.CANONICAL_ORDER)
    assert grp.from_root_factors(ideal, params, S) == generic_point


def test_automorphism_round_trip(generic_point, ideal, S):
    endo = grp.to_automorphism(generic_point, S)
    assert grp.from_automorphism(ideal, endo, S) == generic_point


def test_group_law_matches_composition(ideal, S, generic_point, second_point):
    composed = grp.to_automorphism(generic_point, S) @ grp.to_automorphism(
        second_point, S
    )
    assert grp.from_automorphism(ideal, composed, S) == grp.group_law(
        generic_point, second_point
    )


def test_from_automorphism_rejects_negative_parts(ideal, S):
    endo = aut.exp_root(ideal, (0, -1), S.var("gr"), 1, S)
    with pytest.raises(ConstraintViolated):
        grp.from_automorphism(ideal, endo, S)


def test_scalar_actions(ideal, S, generic_point):
    lam = S.var("gr")
    scaled = grp.scalar_actions(lam, 1, generic_point)
    assert scaled.x == generic_point.x.scale(lam)
    assert scaled.y == generic_point.y.scale(lam * lam)
    assert grp.scalar_actions(S(1), 1, generic_point) == generic_point
    assert grp.scalar_actions(S(0), 1, generic_point).is_identity()
    sk = grp.skew_element(ideal, S.var("gm"), S)
    assert grp.scalar_actions(lam, 2, sk).y == sk.y.scale(lam)
    with pytest.raises(BadMode):
        grp.scalar_actions(lam, 2, generic_point)
    with pytest.raises(BadMode):
        grp.scalar_actions(lam, 3, generic_point)


def test_zero_first_component_is_skew(ideal, S):
    point = grp.skew_element(ideal, S.var("gm"), S)
    assert point.y.b.is_zero() and point.y.c.is_zero()
    assert (point.y.a + point.y.d).is_zero()
    assert point.skew_part() == S.var("gm")


def test_vector_group_psi_matches_group_law(ideal, S, generic_point, second_point):
    spec = grp.vector_group_of_pair(ideal)
    psi_val = spec.psi(S, generic_point.x.coords, second_point.x.coords)
    direct = stru.multiply(generic_point.x, stru.conjugate(second_point.x))
    assert tuple(psi_val) == direct.coords
    assert spec.contains(S, generic_point.x.coords, generic_point.y.coords)


def test_niceness_block(ideal):
    assert grp.check_niceness(grp.vector_group_of_pair(ideal)).ok


def test_niceness_split_etale():
    spec = grp.etale_vector_group(rings.IntegerRing(), 1, 0, "split")
    rep = grp.check_niceness(spec)
    assert rep.ok
    assert len(spec.g2_basis()) == 1


def test_niceness_mod_five():
    M5 = rings.ModRing(5)
    rep = grp.check_niceness(grp.etale_vector_group(M5, 0, M5(-1), "unit disc"))
    assert rep.ok


def test_positive_filtration_sampled(ideal):
    words = grp.default_filtration_words(ideal, seed=3)
    subset = words[:6] + words[6:26:5]
    rep = grp.check_positive_filtration(ideal, words=subset)
    assert rep.ok
    assert len(rep.items) == len(subset)


def test_filtration_detects_negative_word(ideal, S):
    words = [("negative", S, [((0, -1), S.var("gr"))])]
    rep = grp.check_positive_filtration(ideal, words=words)
    assert not rep.ok
