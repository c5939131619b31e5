"""Operator Kantor pair structure on the positive and negative groups.

The commutator of a positive one-parameter family x(s) against a
negative family y(t) factors into slope-ordered pieces o_{i,j}.  The
slope-2 chain is the one-parameter representation of a group point
Q_x y, the slope-3 chain of a central point T_x y, the bidegree (3, 2)
piece determines a coset P_x y modulo the central part, and every other
piece of slope above 2 vanishes.  This module implements the operators
Q, T, and P, the axiom checker built on the commutator-coefficient
table, and the 3-by-3 unitriangular pair P+/P- that realizes the
long-root subgroups over any commutative associative algebra.
"""

from __future__ import annotations

from . import aut, grp, lie, rings, stru
from .errors import AxiomFailure, BadComponent, ConstraintViolated
from .reports import CheckReport

#: Canonical factor order for the negative group, mirroring the
#: positive canonical order.
NEGATIVE_ORDER = ((0, -1), (-1, -1), (-3, -2), (-2, -1), (-3, -1))

#: Block slot carrying the parameter of each degree -1 root.
_NEGATIVE_SLOTS = {(0, -1): "a", (-3, -1): "d", (-2, -1): "b", (-1, -1): "c"}


def q_op(g, z):
    """Q_g z = (x conj(z)) x - y z, for g = (x, y) and a block element z.

    This is the degree +2 part of the automorphism of g, read as a map
    from the degree -1 copy of the block algebra to the degree +1 copy.
    """
    x, y = _components(g)
    return stru.multiply(stru.multiply(x, stru.conjugate(z)), x) - stru.multiply(
        y, z
    )


def t_op(g, z):
    """T_g z as a skew element: the degree +3 part of the automorphism
    of g applied to z placed in degree -1, landing in the degree +2
    line of the Lie algebra."""
    if isinstance(g, grp.GPlusElement):
        endo = grp.to_automorphism(g)
        pair, ring = g.pair, g.ring
    else:
        pair, ring, endo = g
    image = endo(lie.from_am1(z))
    return stru.SkewElement(pair, image.sp2, ring)


def skew_bracket(b, c):
    """[b, c] = skew part of b conj(c) - c conj(b), in the convention of
    the degree +2 Lie line (matching :func:`t_op`)."""
    m = stru.multiply(c, stru.conjugate(b)) - stru.multiply(b, stru.conjugate(c))
    return stru.SkewElement(b.pair, m.a, b.ring)


def p_op(g, h, bound=5):
    """P_g h modulo the central part: the block element whose adjoint
    action in degree +1 is the commutator coefficient of bidegree (3, 2)
    of the families of g and h."""
    pair, ring, xs = _series_of(g)
    _, _, ys = _series_of(h)
    table = aut.nu_extract(pair, xs, ys, bound, ring)
    nu = table.nu(3, 2)
    zeta = lie.grading_derivation((3, 2))(pair, ring)
    return -nu(zeta).ap1


def _components(g):
    if isinstance(g, grp.GPlusElement):
        return g.x, g.y
    return g


def _series_of(g):
    if isinstance(g, grp.GPlusElement):
        return g.pair, g.ring, factor_series(g.pair, grp.factor_parameters(g))
    pair, ring, factors = g
    return pair, ring, factor_series(pair, factors)


def factor_series(pair, factors):
    """The one-parameter family of a product of root exponentials under
    the vector-group scaling: degree-1 parameters scale linearly in the
    family variable, the central parameter quadratically."""
    factors = [(tuple(root), param) for root, param in factors]

    def lift(ring, param, key):
        value = ring(param) if key in aut._LONG_UNITS else pair.lift(param, ring)
        return value

    def scaled(ring, param, key, t):
        value = lift(ring, param, key)
        weight = t * t if abs(key[1]) == 2 else t
        if hasattr(value, "scale"):
            return value.scale(weight)
        return value * weight

    def build(ring, t):
        out = None
        for key, param in factors:
            factor = aut.exp_root(pair, key, scaled(ring, param, key, t), 1, ring)
            out = factor if out is None else out @ factor
        return out or aut.LieEndo.identity(pair, ring)

    def build_inv(ring, t):
        out = None
        for key, param in reversed(factors):
            value = scaled(ring, param, key, t)
            value = -value if not hasattr(value, "scale") else value.scale(ring(-1))
            factor = aut.exp_root(pair, key, value, 1, ring)
            out = factor if out is None else out @ factor
        return out or aut.LieEndo.identity(pair, ring)

    return aut.SeriesAut(pair, build, build_inv)


def negative_first_component(pair, factors, ring):
    """The block element collecting the degree -1 parameters of a
    negative canonical factor list."""
    a = d = ring(0)
    b, c = pair.J.zero(ring), pair.Jp.zero(ring)
    for root, param in factors:
        slot = _NEGATIVE_SLOTS.get(tuple(root))
        if slot == "a":
            a = a + ring(param)
        elif slot == "d":
            d = d + ring(param)
        elif slot == "b":
            b = b + pair.lift(param, ring)
        elif slot == "c":
            c = c + pair.lift(param, ring)
    return stru.StructurableElement(pair, a, b, c, d, ring)


def graded_part(pair, endo, k, ring):
    """The part of an endomorphism raising the integer grading by k."""

    def fn(x):
        out = lie.zero(pair, ring)
        for key, comp in lie.grade_decompose(x).items():
            if comp.is_zero():
                continue
            image = endo(comp)
            for key2, comp2 in lie.grade_decompose(image).items():
                if comp2.is_zero():
                    continue
                if key2[1] - key[1] == k:
                    out = out + comp2
        return out

    return aut.LieEndo(pair, ring, fn)


def _adjoint(pair, elem, ring):
    return aut.LieEndo(pair, ring, lambda x: lie.bracket(elem, x))


def _generic_factor_lists(pair, S):
    """Distinct-parameter canonical factor lists for a positive and a
    negative point."""
    nj = pair.J.rank
    njp = pair.Jp.rank

    def jel(module, start, step):
        return module.element(
            [S((start + step * i) % 7 + 1) for i in range(module.rank)], S
        )

    xfac = [
        ((0, 1), S(2)),
        ((1, 1), jel(pair.J, 1, 2)),
        ((3, 2), S(3)),
        ((2, 1), jel(pair.Jp, 2, 3)),
        ((3, 1), S(5)),
    ]
    yfac = [
        ((0, -1), S(3)),
        ((-1, -1), jel(pair.Jp, 4, 2)),
        ((-3, -2), S(2)),
        ((-2, -1), jel(pair.J, 5, 3)),
        ((-3, -1), S(7)),
    ]
    return xfac, yfac


def check_okp_axioms(pair, bound=9, symbolic_bound=5):
    """Verify the operator Kantor pair conditions on the commutator
    table of a generic positive point against a generic negative point.

    The slope-2 chain must be the representation of a group point whose
    first component is Q, the slope-3 chain the representation of the
    central point of T, every steeper slope must vanish, and the (3, 2)
    coefficient must be an adjoint action from degree +1.  Runs once
    with distinct integer parameters to the full bound, and once with
    nilpotent symbolic parameters to a smaller bound.
    """
    report = CheckReport(f"operator Kantor pair axioms [{pair.name}]")
    S = pair.ring
    xfac, yfac = _generic_factor_lists(pair, S)
    _axiom_phase(report, pair, S, xfac, yfac, bound, "integer")
    names = tuple(
        f"okv{i}" for i in range(3 + pair.J.rank + pair.Jp.rank)
    )
    T = rings.extend_scalars(
        pair.ring, names, {n: symbolic_bound for n in names}
    )
    it = iter(names)

    def var():
        return T.var(next(it))

    xfac = [
        ((0, 1), var()),
        ((1, 1), pair.J.element([var() for _ in range(pair.J.rank)], T)),
        ((3, 2), var()),
        ((2, 1), pair.Jp.element([var() for _ in range(pair.Jp.rank)], T)),
        ((3, 1), var()),
    ]
    yfac = [
        ((0, -1), T(3)),
        ((-1, -1), pair.Jp.element([T(2)] * pair.Jp.rank, T)),
        ((-3, -2), T(5)),
        ((-2, -1), pair.J.element([T(3)] * pair.J.rank, T)),
        ((-3, -1), T(2)),
    ]
    _axiom_phase(report, pair, T, xfac, yfac, symbolic_bound, "symbolic")
    return report


def _axiom_phase(report, pair, S, xfac, yfac, bound, label):
    xs = factor_series(pair, xfac)
    ys = factor_series(pair, yfac)
    table = aut.nu_extract(pair, xs, ys, bound, S)
    span = aut.spanning_set(pair, S)
    zeta = lie.grading_derivation((3, 2))(pair, S)
    unit = stru.element(pair, 1, pair.J.zero(S), pair.Jp.zero(S), 1, S)

    def endos_equal(a, b):
        return all((a(v) - b(v)).is_zero() for v in span)

    # the positive point and the first component of the negative point
    x_point = grp.from_root_factors(pair, xfac, S)
    z_neg = negative_first_component(pair, yfac, S)

    # slope-2 chain: the representation of the group point of Q
    x_q = -table.nu(2, 1)(zeta).ap1
    report.add(
        f"[{label}] (2,1) coefficient is the Q formula",
        x_q == q_op(x_point, z_neg),
    )
    if (4, 2) in table.entries:
        y_q = stru.multiply(x_q, x_q) - table.nu(4, 2)(lie.from_am1(unit)).ap1
        try:
            q_point = grp.GPlusElement(pair, x_q, y_q, S)
        except ConstraintViolated:
            report.add(f"[{label}] Q lands in the positive group", False)
            q_point = None
        if q_point is not None:
            report.add(f"[{label}] Q lands in the positive group", True)
            q_endo = grp.to_automorphism(q_point, S)
            for k in range(1, bound // 3 + 1):
                if (2 * k, k) not in table.entries:
                    continue
                report.add(
                    f"[{label}] slope-2 chain at ({2 * k},{k}) matches the "
                    "Q-point part",
                    endos_equal(
                        table.nu(2 * k, k), graded_part(pair, q_endo, k, S)
                    ),
                )

    # slope-3 chain: the representation of the central point of T
    t_val = t_op((pair, S, xs.at(S, S(1))), z_neg)
    t_endo = aut.exp_long(pair, (3, 2), t_val.r, 1, S)
    for k in (1, 2):
        if (3 * k, k) not in table.entries:
            continue
        report.add(
            f"[{label}] slope-3 chain at ({3 * k},{k}) matches the "
            "T-point part",
            endos_equal(
                table.nu(3 * k, k), graded_part(pair, t_endo, 2 * k, S)
            ),
        )

    # steeper slopes vanish
    for (i, j) in sorted(table.entries):
        if i > 2 * j and i != 3 * j and (i, j) != (1, 1):
            vanishes = all(table.nu(i, j)(v).is_zero() for v in span)
            report.add(f"[{label}] coefficient ({i},{j}) vanishes", vanishes)

    # the (3, 2) coefficient is an adjoint action from degree +1
    if (3, 2) in table.entries:
        p1 = -table.nu(3, 2)(zeta).ap1
        report.add(
            f"[{label}] (3,2) coefficient is adjoint from degree +1",
            endos_equal(
                table.nu(3, 2), _adjoint(pair, lie.from_ap1(p1), S)
            ),
        )
    return report


# -- the 3x3 unitriangular long-root pair -----------------------------------


class PPairElement:
    """A point of the unitriangular pair over an associative algebra K:
    sign +1 is the upper triangular copy with rows (1, k1, -k3),
    (0, 1, -k2), (0, 0, 1); sign -1 the transpose-shaped lower copy.

    Equivalently a pair (k1 t + k2 tbar, k3 t + (k1 k2 - k3) tbar) over
    K[t]/(t^2 - t).
    """

    __slots__ = ("ring", "sign", "k1", "k2", "k3")

    def __init__(self, ring, sign, k1, k2, k3):
        if sign not in (1, -1):
            raise BadComponent("sign must be +1 or -1")
        self.ring = ring
        self.sign = sign
        self.k1 = ring(k1)
        self.k2 = ring(k2)
        self.k3 = ring(k3)

    def split_pair(self):
        """The (x, y) form over K[t]/(t^2 - t), with coordinates
        (t-coefficient, tbar-coefficient)."""
        return (
            (self.k1, self.k2),
            (self.k3, self.k1 * self.k2 - self.k3),
        )

    def matrix(self):
        zero, one = self.ring(0), self.ring(1)
        if self.sign == 1:
            return [
                [one, self.k1, -self.k3],
                [zero, one, -self.k2],
                [zero, zero, one],
            ]
        return [
            [one, zero, zero],
            [-self.k2, one, zero],
            [-self.k3, self.k1, one],
        ]

    def __eq__(self, other):
        if not isinstance(other, PPairElement):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.sign == other.sign
            and self.k1 == other.k1
            and self.k2 == other.k2
            and self.k3 == other.k3
        )

    def __repr__(self):
        tag = "+" if self.sign == 1 else "-"
        return f"PPairElement({tag}; {self.k1}, {self.k2}, {self.k3})"


class PPair:
    """The unitriangular pair over an associative base ring: elements,
    the group law, the Q and T operators, and the three embedded copies
    of the rank-one Jordan pair."""

    def __init__(self, ring):
        self.ring = ring
        z = ring(0)
        self.subpairs = (
            ("t-line", lambda k: PPairElement(ring, 1, k, z, z),
             lambda k: PPairElement(ring, -1, z, k, z)),
            ("tbar-line", lambda k: PPairElement(ring, 1, z, k, z),
             lambda k: PPairElement(ring, -1, k, z, z)),
            ("central line", lambda k: PPairElement(ring, 1, z, z, k),
             lambda k: PPairElement(ring, -1, z, z, k)),
        )

    def element(self, sign, k1, k2, k3):
        return PPairElement(self.ring, sign, k1, k2, k3)

    def identity(self, sign=1):
        z = self.ring(0)
        return PPairElement(self.ring, sign, z, z, z)

    def multiply(self, g, h):
        return p_multiply(g, h)

    def inverse(self, g):
        return PPairElement(
            self.ring, g.sign, -g.k1, -g.k2, g.k1 * g.k2 - g.k3
        )

    def q_op(self, g, z):
        return p_q_op(g, z)

    def t_op(self, g, z):
        return p_t_op(g, z)

    def check(self):
        return check_p_pair(self.ring)


def p_pair(K):
    """The validated unitriangular pair instance over K."""
    instance = PPair(K)
    report = check_p_pair(K)
    if not report.ok:
        raise AxiomFailure(f"unitriangular pair over {K} failed:\n{report}")
    return instance


def p_multiply(g, h):
    """The group product; matches the matrix product of the realizations."""
    if g.sign != h.sign:
        raise BadComponent("cannot multiply opposite-sign points")
    return PPairElement(
        g.ring,
        g.sign,
        g.k1 + h.k1,
        g.k2 + h.k2,
        g.k3 + h.k3 + g.k1 * h.k2,
    )


def _split_mul(a, b):
    return (a[0] * b[0], a[1] * b[1])


def _split_conj(a):
    return (a[1], a[0])


def _split_sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def p_q_op(g, z):
    """Q_{(x,y)} z = x conj(z) x - y z over K[t]/(t^2 - t)."""
    x, y = g.split_pair()
    return _split_sub(
        _split_mul(_split_mul(x, _split_conj(z)), x), _split_mul(y, z)
    )


def p_t_op(g, z):
    """T_{(x,y)} z = x conj(z) conj(y) - y z conj(x); a skew multiple of
    t - tbar, returned as its t-coefficient."""
    x, y = g.split_pair()
    val = _split_sub(
        _split_mul(_split_mul(x, _split_conj(z)), _split_conj(y)),
        _split_mul(_split_mul(y, z), _split_conj(x)),
    )
    return val


def _mat_mul(a, b, ring):
    return [
        [
            sum((a[i][k] * b[k][j] for k in range(3)), ring(0))
            for j in range(3)
        ]
        for i in range(3)
    ]


def _mat_scale_family(g, s, ring):
    """The matrix of the one-parameter family s . g."""
    return PPairElement(
        ring, g.sign, ring(g.k1) * s, ring(g.k2) * s, ring(g.k3) * s * s
    ).matrix()


def _mat_inv_family(g, s, ring):
    inv = PPairElement(ring, g.sign, -g.k1, -g.k2, g.k1 * g.k2 - g.k3)
    return _mat_scale_family(inv, s, ring)


def check_p_pair(K):
    """Validate the unitriangular pair over an associative base: group
    law versus matrix product, the T formula versus the coefficient
    extracted from the matrix commutator, and the three embedded copies
    of the rank-one Jordan pair."""
    report = CheckReport("unitriangular long-root pair")
    S = rings.extend_scalars(K, ("pa", "pb", "pc", "pd", "pe", "pf"))
    g = PPairElement(S, 1, S.var("pa"), S.var("pb"), S.var("pc"))
    h = PPairElement(S, 1, S.var("pd"), S.var("pe"), S.var("pf"))
    prod = p_multiply(g, h)
    report.add(
        "group law matches the matrix product",
        prod.matrix() == _mat_mul(g.matrix(), h.matrix(), S),
    )
    report.add(
        "products stay unitriangular",
        all(prod.matrix()[i][i] == S(1) for i in range(3))
        and all(
            prod.matrix()[i][j].is_zero() for i in range(3) for j in range(i)
        ),
    )

    # T formula against the (3, 1) coefficient of the matrix commutator
    B = rings.extend_scalars(
        S, ("ps", "pt"), {"ps": 3, "pt": 1}
    )
    s, t = B.var("ps"), B.var("pt")
    y = PPairElement(S, -1, S.var("pd"), S.var("pe"), S.var("pf"))
    zmat = _mat_mul(
        _mat_mul(_mat_inv_family(y, t, B), _mat_scale_family(g, s, B), B),
        _mat_mul(_mat_scale_family(y, t, B), _mat_inv_family(g, s, B), B),
        B,
    )
    tval = p_t_op(g, _neg_first_split(y))
    report.add("T lands on the skew line", tval[1] == -tval[0])
    coeff = _coefficient(zmat[0][2], B, {"ps": 3, "pt": 1})
    # the central point (0, m(t - tbar)) has matrix entry -m at (1, 3)
    sign = "+" if coeff == -tval[0] else ("-" if coeff == tval[0] else "?")
    report.add(
        "T formula matches the matrix-extracted coefficient up to sign",
        sign in ("+", "-"),
        f"sign {sign}",
    )

    # the three rank-one Jordan copies: Q_k l = k^2 l (up to a sign,
    # which is reported rather than normalized)
    k, l = S.var("pa"), S.var("pb")
    split_cases = [
        ("t-line", PPairElement(S, 1, k, S(0), S(0)), (S(0), l),
         (k * k * l, S(0))),
        ("tbar-line", PPairElement(S, 1, S(0), k, S(0)), (l, S(0)),
         (S(0), k * k * l)),
    ]
    for name, g_k, z, expect in split_cases:
        report.add(f"copy {name}: Q_k l = k^2 l", p_q_op(g_k, z) == expect)
    up = _nilpotent_part(PPairElement(S, 1, S(0), S(0), k).matrix(), S)
    low = _nilpotent_part(PPairElement(S, -1, S(0), S(0), -l).matrix(), S)
    nmn = _mat_mul(_mat_mul(up, low, S), up, S)
    plus = _nilpotent_part(PPairElement(S, 1, S(0), S(0), k * k * l).matrix(), S)
    minus = _nilpotent_part(
        PPairElement(S, 1, S(0), S(0), -(k * k * l)).matrix(), S
    )
    sign = "+" if nmn == plus else ("-" if nmn == minus else "?")
    report.add(
        "copy central line: Q_k l = k^2 l up to sign",
        sign in ("+", "-"),
        f"sign {sign}",
    )
    return report


def _nilpotent_part(mat, ring):
    one = ring(1)
    return [
        [mat[i][j] - one if i == j else mat[i][j] for j in range(3)]
        for i in range(3)
    ]


def _neg_first_split(y):
    """First component of a lower point over K[t]/(t^2 - t)."""
    return (y.k1, y.k2)


def _coefficient(el, ring, exps):
    """The coefficient of the monomial with the given variable degrees,
    as an element of the base of the extension."""
    key = tuple(exps.get(n, 0) for n in ring.names)
    payload = el.data.get(key)
    if payload is None:
        return ring.base(0)
    return rings.El(ring.base, payload)
