"""Exponential automorphisms, commutator relations, coefficient
extraction, and the grading automorphism."""

import pytest

from cubicnorm import aut, cnp, lie, stru
from cubicnorm.errors import BadRoot, NotAUnit
from cubicnorm.modules import generic_elements
from cubicnorm.rings import ModRing, extend_scalars


@pytest.fixture(scope="module")
def ideal():
    return cnp.builtin_instance("ideal")


@pytest.fixture(scope="module")
def trivial5():
    return cnp.builtin_instance("trivial", ring=ModRing(5))


@pytest.fixture(scope="module")
def mat3():
    return cnp.builtin_instance("mat3-det")


LONG_ROOTS = ((3, 2), (-3, -2), (3, 1), (-3, -1), (0, 1), (0, -1))
SHORT_ROOTS = ((2, 1), (-2, -1), (1, 1), (-1, -1), (1, 0), (-1, 0))


def _short_param(pair, key, S):
    mod = pair.J if key in ((1, 1), (-2, -1), (1, 0)) else pair.Jp
    return mod.element([S((i % 3) + 1) for i in range(mod.rank)], S)


def test_exp_long_automorphism_generic(ideal):
    for key in LONG_ROOTS:
        S = extend_scalars(ideal.ring, ("r_", "t_"))
        g = aut.exp_long(ideal, key, S.var("r_"), S.var("t_"), S)
        report = aut.check_automorphism(g)
        assert report.ok, f"{key}: {report}"


def test_exp_long_binomial(ideal):
    S = extend_scalars(ideal.ring, ("r_", "s_"))
    r, s = S.var("r_"), S.var("s_")
    g = aut.exp_long(ideal, (3, 1), r, S(1), S)
    h = aut.exp_long(ideal, (3, 1), s, S(1), S)
    assert (g @ h).equals(aut.exp_long(ideal, (3, 1), r + s, S(1), S))


def test_exp_long_inverse(ideal):
    S = extend_scalars(ideal.ring, ("r_",))
    g = aut.exp_long(ideal, (0, -1), S.var("r_"), S(1), S)
    prod = g @ g.inverse()
    assert prod.equals(aut.LieEndo.identity(ideal, S))


def test_exp_short_automorphism_generic(ideal):
    for key in ((2, 1), (-2, -1)):
        mod = ideal.Jp if key == (2, 1) else ideal.J
        S, (j,) = generic_elements([mod], ("j",), base=ideal.ring)
        g = aut.exp_short(ideal, key, j, S(1), S)
        report = aut.check_automorphism(g)
        assert report.ok, f"{key}: {report}"


def test_exp_short_secondary_automorphism(ideal):
    for key in ((1, 1), (-1, 0)):
        S = extend_scalars(ideal.ring, ("x_",))
        param = _short_param(ideal, key, S).scale(S.var("x_"))
        g = aut.exp_short(ideal, key, param, S(1), S)
        report = aut.check_automorphism(g)
        assert report.ok, f"{key}: {report}"


def test_exp_short_degree_one_is_ad(ideal):
    for key in SHORT_ROOTS:
        S = extend_scalars(ideal.ring, ("e_",), truncation={"e_": 1})
        eps = S.var("e_")
        param = _short_param(ideal, key, S)
        g = aut.exp_short(ideal, key, param, eps, S)
        p_el = aut.root_embed(ideal, key, param, S)
        for x in aut.spanning_set(ideal, S):
            want = x + lie.bracket(p_el, x).scale(eps)
            assert (g(x) - want).is_zero(), key


def test_exp_short_trivial_pair_char5(trivial5):
    S, (j,) = generic_elements([trivial5.J], ("j",), base=trivial5.ring)
    g = aut.exp_short(trivial5, (-2, -1), j, S(1), S)
    assert aut.check_automorphism(g).ok


def test_exp_long_mat3(mat3):
    S = extend_scalars(mat3.ring, ("r_",))
    g = aut.exp_long(mat3, (3, 2), S.var("r_"), S(1), S)
    x = lie.from_sm2(mat3, S.var("r_"), S)
    y = lie.from_am1(stru.t_element(mat3, S))
    assert (g(lie.bracket(x, y)) - lie.bracket(g(x), g(y))).is_zero()


def test_bad_roots_rejected(ideal):
    with pytest.raises(BadRoot):
        aut.exp_long(ideal, (2, 1), ideal.ring(1), 1, ideal.ring)
    with pytest.raises(BadRoot):
        aut.exp_short(ideal, (3, 2), ideal.J.zero(), 1, ideal.ring)


def test_tau_swaps_lines(ideal):
    S = extend_scalars(ideal.ring, ("r_",))
    r = S.var("r_")
    for key in ((3, 2), (3, 1), (0, 1)):
        tg = aut.tau(ideal, key, S)
        neg = (-key[0], -key[1])
        plus = aut.long_element(ideal, key, r, S)
        minus = aut.long_element(ideal, neg, r, S)
        assert (tg(plus) - minus).is_zero()
        assert (tg(minus) - plus).is_zero()


def test_tau_inverse(ideal):
    S = ideal.ring
    tg = aut.tau(ideal, (3, 2), S)
    tgi = aut.tau_inverse(ideal, (3, 2), S)
    assert (tg @ tgi).equals(aut.LieEndo.identity(ideal, S))


def test_tau_square_frozen(ideal):
    report = aut.check_tau_square(ideal)
    assert report.ok, str(report)


def test_tau_square_pattern_is_parity(ideal):
    got = aut.tau_square_signs(ideal, (3, 2))
    for key, sign in got.items():
        assert sign == (-1) ** (lie.eigenvalue((3, 2), key) % 2)


def test_commutator_relations(ideal):
    report = aut.check_commutator_relations(ideal)
    assert report.ok, str(report)


def test_commutator_relations_mutant_gated():
    mutant = cnp.builtin_instance("mutant")
    report = aut.check_commutator_relations(mutant)
    names = [item.name for item in report.items]
    assert any("skipped" in name for name in names)


def test_exp_suite(ideal):
    report = aut.check_exp_suite(ideal)
    assert report.ok, str(report)


def test_nu_extract_long_pair(ideal):
    base = ideal.ring
    xs = aut.exp_series(ideal, (3, 2), base(1))
    ys = aut.exp_series(ideal, (-3, -2), base(1))
    table = aut.nu_extract(ideal, xs, ys, 4, base)
    assert (1, 1) in table.entries and (2, 2) in table.entries
    assert table.check_reconstruction().ok


def test_nu_root_targets(ideal):
    report = aut.check_nu_root_targets(ideal, (3, 2), (-3, -2), 4)
    assert report.ok, str(report)
    report = aut.check_nu_root_targets(ideal, (-2, -1), (3, 1), 4)
    assert report.ok, str(report)


def test_tabulated_endo_matches_raw(ideal):
    S = ideal.ring
    d = lie.grading_derivation((3, 2))(ideal, S)
    raw = lambda x: lie.bracket(d, x)
    tab = aut.TabulatedEndo(ideal, S, raw)
    probe = (
        lie.from_sp2(ideal, S(2), S)
        + lie.from_am1(stru.t_element(ideal, S))
        + lie.from_gens(
            ideal,
            [(stru.t_element(ideal, S), stru.tbar_element(ideal, S))],
            S,
        )
    )
    assert (tab(probe) - raw(probe)).is_zero()


def test_phi_grading_requires_unit(ideal):
    with pytest.raises(NotAUnit):
        aut.phi_grading(ideal, ideal.ring(1), ideal.ring(1), ideal.ring)


def test_phi_suite(ideal):
    report = aut.check_phi(ideal)
    assert report.ok, str(report)
