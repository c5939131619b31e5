"""The 5-graded Lie algebra built on the structurable algebra of a pair.

Elements live in S_{-2} + A_{-1} + instr(A)_0 + A_1 + S_2: two skew
lines, two copies of the block algebra, and the inner-structure part
spanned by operator pairs (V_{x,y}, -V_{y,x}).  The 0-part is stored
extensionally as a list of generating (x, y) pairs; equality of 0-parts
is equality of both component actions on the standard basis of
A_1 + A_{-1}, which is faithful because the even part is defined by its
block action.

The integer grading refines to a lattice grading whose nonzero
components form a G2 root system: writing roots as m*alpha + n*beta, the
A_1 components sit at beta, beta+alpha, beta+2*alpha, beta+3*alpha (for
the tbar-scalar, J, J', and t-scalar blocks), their negatives in A_{-1},
the skew lines at +-(2*beta + 3*alpha), and the 0-part splits as
L_J at alpha, L_{J'} at -alpha, and a residual piece X0 at the origin.
"""

from __future__ import annotations

import weakref

from . import stru
from .errors import BadRoot, ExtensionMismatch
from .modules import generic_elements
from .reports import CheckReport


class Root:
    """A lattice vector m*alpha + n*beta in the G2 labelling."""

    __slots__ = ("m", "n")

    _SHORT = {(1, 0), (1, 1), (2, 1), (-1, 0), (-1, -1), (-2, -1)}
    _LONG = {(0, 1), (3, 1), (3, 2), (0, -1), (-3, -1), (-3, -2)}

    def __init__(self, m, n):
        self.m = m
        self.n = n

    def key(self):
        return (self.m, self.n)

    def is_short(self):
        return self.key() in self._SHORT

    def is_long(self):
        return self.key() in self._LONG

    def is_root(self):
        return self.is_short() or self.is_long()

    def __add__(self, other):
        return Root(self.m + other.m, self.n + other.n)

    def __neg__(self):
        return Root(-self.m, -self.n)

    def __eq__(self, other):
        if not isinstance(other, Root):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Root({self.m}, {self.n})"


BETA = Root(0, 1)
BETA_3ALPHA = Root(3, 1)
TWOBETA_3ALPHA = Root(3, 2)
ALPHA = Root(1, 0)
ZERO = Root(0, 0)

#: Support of the lattice grading: the 12 roots plus the origin (X0).
SUPPORT = tuple(
    sorted(Root._SHORT | Root._LONG | {(0, 0)})
)


class LieElement:
    """An element of the 5-graded Lie algebra.

    ``sm2`` and ``sp2`` are scalars r meaning r(t - tbar) in degrees -2
    and +2 (no root-normalization sign is baked in); ``am1`` and ``ap1``
    are block elements; ``gens`` is a tuple of (x, y) block-element
    pairs standing for the sum of the operator pairs (V_{x,y}, -V_{y,x}).
    """

    __slots__ = ("pair", "ring", "sm2", "am1", "gens", "ap1", "sp2")

    def __init__(self, pair, ring, sm2, am1, gens, ap1, sp2):
        self.pair = pair
        self.ring = ring
        self.sm2 = ring(sm2)
        self.am1 = am1
        gens = tuple(gens)
        if len(gens) >= 8:
            gens = _compact_gens(pair, ring, gens)
        self.gens = gens
        self.ap1 = ap1
        self.sp2 = ring(sp2)

    def _check(self, other):
        if self.pair is not other.pair or self.ring != other.ring:
            raise ExtensionMismatch("elements of different Lie algebras")

    def __add__(self, other):
        self._check(other)
        return LieElement(
            self.pair,
            self.ring,
            self.sm2 + other.sm2,
            self.am1 + other.am1,
            self.gens + other.gens,
            self.ap1 + other.ap1,
            self.sp2 + other.sp2,
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = self.ring(scalar)
        return LieElement(
            self.pair,
            self.ring,
            self.sm2 * scalar,
            self.am1.scale(scalar),
            tuple((x.scale(scalar), y) for x, y in self.gens),
            self.ap1.scale(scalar),
            self.sp2 * scalar,
        )

    def d0_plus(self, z):
        """The 0-part acting on z in A_1."""
        out = stru.zero(self.pair, self.ring)
        for x, y in self.gens:
            out = out + stru.v_operator(x, y, z)
        return out

    def d0_minus(self, z):
        """The 0-part acting on z in A_{-1}."""
        out = stru.zero(self.pair, self.ring)
        for x, y in self.gens:
            out = out - stru.v_operator(y, x, z)
        return out

    def d0_matrix(self):
        """Coordinates of both component actions on the standard basis."""
        rows = []
        for e in a_basis(self.pair, self.ring):
            rows.append(self.d0_plus(e).coords)
            rows.append(self.d0_minus(e).coords)
        return tuple(rows)

    def coords(self):
        """All defining coordinates, with the 0-part taken extensionally."""
        out = [self.sm2]
        out.extend(self.am1.coords)
        for row in self.d0_matrix():
            out.extend(row)
        out.extend(self.ap1.coords)
        out.append(self.sp2)
        return tuple(out)

    def is_zero(self):
        return all(c.is_zero() for c in self.coords())

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("extensional elements are unhashable")

    def __repr__(self):
        return (
            f"LieElement(sm2={self.sm2}, am1={self.am1!r}, "
            f"gens={len(self.gens)}, ap1={self.ap1!r}, sp2={self.sp2})"
        )


_A_BASIS_CACHE = weakref.WeakKeyDictionary()


def a_basis(pair, ring):
    """The standard basis of the block algebra: t, tbar, J, then J'."""
    per_ring = _A_BASIS_CACHE.setdefault(pair, {})
    got = per_ring.get(ring)
    if got is None:
        got = [stru.t_element(pair, ring), stru.tbar_element(pair, ring)]
        got.extend(stru.embed_j(pair, v) for v in pair.J.basis(ring))
        got.extend(stru.embed_jp(pair, w) for w in pair.Jp.basis(ring))
        per_ring[ring] = got
    return got


def _slot_coords(elem):
    """Nonzero coordinates of a block element in the standard basis."""
    out = []
    if not elem.a.is_zero():
        out.append((0, elem.a))
    if not elem.d.is_zero():
        out.append((1, elem.d))
    for i, c in enumerate(elem.b.coords, start=2):
        if not c.is_zero():
            out.append((i, c))
    base = 2 + len(elem.b.coords)
    for i, c in enumerate(elem.c.coords, start=base):
        if not c.is_zero():
            out.append((i, c))
    return out


def gens_cells(pair, ring, gens):
    """Coefficients of a 0-part generator list over ordered basis cells.

    Each (x, y) pair distributes over the standard block basis by
    bilinearity, so the list is extensionally the sum over cells (p, q)
    of the returned coefficient times the (basis p, basis q) pair.
    """
    cells = {}
    for x, y in gens:
        for p, cx in _slot_coords(x):
            for q, cy in _slot_coords(y):
                c = cx * cy
                prev = cells.get((p, q))
                cells[(p, q)] = c if prev is None else prev + c
    return {key: c for key, c in cells.items() if not c.is_zero()}


def _compact_gens(pair, ring, gens):
    """Rewrite a 0-part generator list using bilinearity; returns the
    cell form when it is shorter, the original otherwise."""
    cells = gens_cells(pair, ring, gens)
    if len(cells) >= len(gens):
        return gens
    basis = a_basis(pair, ring)
    return tuple(
        (basis[p].scale(c), basis[q]) for (p, q), c in sorted(cells.items())
    )


def zero(pair, ring=None):
    ring = ring or pair.ring
    z = stru.zero(pair, ring)
    return LieElement(pair, ring, 0, z, (), z, 0)


def from_sp2(pair, r, ring=None):
    ring = ring or pair.ring
    z = stru.zero(pair, ring)
    return LieElement(pair, ring, 0, z, (), z, r)


def from_sm2(pair, r, ring=None):
    ring = ring or pair.ring
    z = stru.zero(pair, ring)
    return LieElement(pair, ring, r, z, (), z, 0)


def from_ap1(elem):
    z = stru.zero(elem.pair, elem.ring)
    return LieElement(elem.pair, elem.ring, 0, z, (), elem, 0)


def from_am1(elem):
    z = stru.zero(elem.pair, elem.ring)
    return LieElement(elem.pair, elem.ring, 0, elem, (), z, 0)


def from_gens(pair, gens, ring=None):
    ring = ring or pair.ring
    z = stru.zero(pair, ring)
    return LieElement(pair, ring, 0, z, tuple(gens), z, 0)


def _skew_matrix(pair, r, ring):
    return stru.SkewElement(pair, r, ring).as_element()


def bracket(x, y):
    """The graded Lie bracket."""
    x._check(y)
    pair, ring = x.pair, x.ring
    t1 = stru.t_element(pair, ring)
    tb1 = stru.tbar_element(pair, ring)

    # degree +2: [A1, A1] and [0-part, S2]
    m = stru.multiply(y.ap1, stru.conjugate(x.ap1)) - stru.multiply(
        x.ap1, stru.conjugate(y.ap1)
    )
    sp2 = m.a
    sp2 = sp2 + _d_on_sp2(x, y.sp2) - _d_on_sp2(y, x.sp2)

    # degree -2: [A-1, A-1] and [0-part, S-2]
    m = stru.multiply(y.am1, stru.conjugate(x.am1)) - stru.multiply(
        x.am1, stru.conjugate(y.am1)
    )
    sm2 = m.a
    sm2 = sm2 + _d_on_sm2(x, y.sm2) - _d_on_sm2(y, x.sm2)

    # degree +1: [0-part, A1] and [S2, A-1]
    ap1 = x.d0_plus(y.ap1) - y.d0_plus(x.ap1)
    ap1 = ap1 + stru.multiply(_skew_matrix(pair, x.sp2, ring), y.am1)
    ap1 = ap1 - stru.multiply(_skew_matrix(pair, y.sp2, ring), x.am1)

    # degree -1: [0-part, A-1] and [S-2, A1]
    am1 = x.d0_minus(y.am1) - y.d0_minus(x.am1)
    am1 = am1 + stru.multiply(_skew_matrix(pair, x.sm2, ring), y.ap1)
    am1 = am1 - stru.multiply(_skew_matrix(pair, y.sm2, ring), x.ap1)

    # degree 0: [A1, A-1], [S2, S-2], and [0-part, 0-part]
    gens = [(x.ap1.scale(-1), y.am1), (y.ap1, x.am1)]
    rr = x.sp2 * y.sm2 - y.sp2 * x.sm2
    if not rr.is_zero():
        gens.append((t1.scale(rr), tb1))
        gens.append((tb1.scale(rr), t1))
    for gx, gy in x.gens:
        for hu, hv in y.gens:
            gens.append((stru.v_operator(gx, gy, hu), hv))
            gens.append((hu.scale(-1), stru.v_operator(gy, gx, hv)))

    return LieElement(pair, ring, sm2, am1, gens, ap1, sp2)


def _d_on_sp2(d, r):
    """The scalar r' with [0-part of d, r(t-tbar)_2] = r'(t-tbar)_2."""
    if not d.gens or r.is_zero():
        return d.ring(0)
    pair, ring = d.pair, d.ring
    one = stru.t_element(pair, ring) + stru.tbar_element(pair, ring)
    s = _skew_matrix(pair, r, ring)
    out = d.d0_plus(s) - stru.multiply(s, d.d0_minus(one))
    return out.a


def _d_on_sm2(d, r):
    """The scalar r' with [0-part of d, r(t-tbar)_{-2}] = r'(t-tbar)_{-2}."""
    if not d.gens or r.is_zero():
        return d.ring(0)
    pair, ring = d.pair, d.ring
    one = stru.t_element(pair, ring) + stru.tbar_element(pair, ring)
    s = _skew_matrix(pair, r, ring)
    out = d.d0_minus(s) - stru.multiply(s, d.d0_plus(one))
    return out.a


# -- the lattice grading ----------------------------------------------------

#: Roots of the A_1 blocks in coordinate order (t-scalar, tbar-scalar, J, J').
_A1_ROOTS = {"a": (3, 1), "d": (0, 1), "b": (1, 1), "c": (2, 1)}
_AM1_ROOTS = {"a": (0, -1), "d": (-3, -1), "b": (-2, -1), "c": (-1, -1)}


def _block_component(pair, elem, slot, ring):
    """elem with all blocks but ``slot`` zeroed."""
    zj = pair.J.zero(ring)
    zjp = pair.Jp.zero(ring)
    z = ring(0)
    parts = {
        "a": (elem.a, zj, zjp, z),
        "b": (z, elem.b, zjp, z),
        "c": (z, zj, elem.c, z),
        "d": (z, zj, zjp, elem.d),
    }
    a, b, c, d = parts[slot]
    return stru.StructurableElement(pair, a, b, c, d, ring)


def grade_decompose(x):
    """The lattice-homogeneous decomposition, keyed by (m, n) with the
    0-part residue at (0, 0); the parts sum back to x."""
    pair, ring = x.pair, x.ring
    out = {key: zero(pair, ring) for key in SUPPORT}
    out[(3, 2)] = out[(3, 2)] + from_sp2(pair, x.sp2, ring)
    out[(-3, -2)] = out[(-3, -2)] + from_sm2(pair, x.sm2, ring)
    for slot, key in _A1_ROOTS.items():
        out[key] = out[key] + from_ap1(_block_component(pair, x.ap1, slot, ring))
    for slot, key in _AM1_ROOTS.items():
        out[key] = out[key] + from_am1(_block_component(pair, x.am1, slot, ring))
    if x.gens:
        t1 = stru.t_element(pair, ring)
        tb1 = stru.tbar_element(pair, ring)
        v = x.d0_plus(tb1).b
        w = x.d0_plus(t1).c
        lv = from_gens(pair, [(t1, stru.embed_j(pair, v))], ring)
        lw = from_gens(pair, [(tb1, stru.embed_jp(pair, w))], ring)
        out[(1, 0)] = out[(1, 0)] + lv
        out[(-1, 0)] = out[(-1, 0)] + lw
        out[(0, 0)] = out[(0, 0)] + from_gens(
            pair, x.gens + tuple((gx.scale(-1), gy) for e in (lv, lw) for gx, gy in e.gens), ring
        )
    return out


def grading_derivation(gamma):
    """The inner grading derivation for gamma in {beta, beta+3alpha,
    2beta+3alpha}, as a 0-part element; bracketing with it scales each
    lattice component by the pairing integer of :func:`eigenvalue`."""
    key = gamma.key() if isinstance(gamma, Root) else tuple(gamma)

    def build(pair, ring=None):
        ring = ring or pair.ring
        t1 = stru.t_element(pair, ring)
        tb1 = stru.tbar_element(pair, ring)
        if key == (0, 1):
            return from_gens(pair, [(tb1, t1)], ring)
        if key == (3, 1):
            return from_gens(pair, [(t1, tb1)], ring)
        if key == (3, 2):
            return from_gens(pair, [(tb1, t1), (t1, tb1)], ring)
        raise BadRoot(f"no grading derivation for {key}")

    if key not in {(0, 1), (3, 1), (3, 2)}:
        raise BadRoot(f"no grading derivation for {key}")
    return build


def eigenvalue(gamma, root):
    """The integer by which the gamma grading derivation scales the
    ``root`` component."""
    key = gamma.key() if isinstance(gamma, Root) else tuple(gamma)
    m, n = root if not isinstance(root, Root) else root.key()
    if key == (3, 2):
        return n
    if key == (3, 1):
        return m - n
    if key == (0, 1):
        return 2 * n - m
    raise BadRoot(f"no grading derivation for {key}")


# -- generic homogeneous elements ------------------------------------------


def _generic_homogeneous(pair):
    """One generic element per lattice component, over a fresh extension."""
    J, Jp = pair.J, pair.Jp
    mods = [J, J, J, J, Jp, Jp, Jp, Jp]
    prefs = ("vA", "vB", "vC", "vD", "wA", "wB", "wC", "wD")
    scalars = ("sA", "sB", "sC", "sD", "rP", "rM", "x1", "x2")
    S, elems = generic_elements(mods, prefs, base=pair.ring, extra=scalars)
    v_up, v_dn, v_lv, v_x0 = elems[0:4]
    w_up, w_dn, w_lw, w_x0 = elems[4:8]
    sv = {name: S.var(name) for name in scalars}
    t1 = stru.t_element(pair, S)
    tb1 = stru.tbar_element(pair, S)
    zj, zjp = J.zero(S), Jp.zero(S)

    def blk(a, b, c, d):
        return stru.StructurableElement(pair, a, b, c, d, S)

    comps = {
        (0, 1): from_ap1(blk(S(0), zj, zjp, sv["sA"])),
        (1, 1): from_ap1(blk(S(0), v_up, zjp, S(0))),
        (2, 1): from_ap1(blk(S(0), zj, w_up, S(0))),
        (3, 1): from_ap1(blk(sv["sB"], zj, zjp, S(0))),
        (0, -1): from_am1(blk(sv["sC"], zj, zjp, S(0))),
        (-2, -1): from_am1(blk(S(0), v_dn, zjp, S(0))),
        (-1, -1): from_am1(blk(S(0), zj, w_dn, S(0))),
        (-3, -1): from_am1(blk(S(0), zj, zjp, sv["sD"])),
        (3, 2): from_sp2(pair, sv["rP"], S),
        (-3, -2): from_sm2(pair, sv["rM"], S),
        (1, 0): from_gens(pair, [(t1, stru.embed_j(pair, v_lv))], S),
        (-1, 0): from_gens(pair, [(tb1, stru.embed_jp(pair, w_lw))], S),
        (0, 0): from_gens(
            pair,
            [
                (stru.embed_jp(pair, w_x0).scale(-1), stru.embed_j(pair, v_x0)),
                (t1.scale(sv["x1"]), tb1),
                (tb1.scale(sv["x2"]), t1),
            ],
            S,
        ),
    }
    return S, comps


def check_g2_closure(pair):
    """Brackets of generic homogeneous components land in the component
    of the summed root (and vanish when that leaves the support)."""
    report = CheckReport(f"lattice grading closure [{pair.name}]")
    _, comps = _generic_homogeneous(pair)
    keys = list(comps)
    for i, gk in enumerate(keys):
        for dk in keys[i:]:
            target = (gk[0] + dk[0], gk[1] + dk[1])
            z = bracket(comps[gk], comps[dk])
            name = f"[{gk}, {dk}] in {target}"
            if target in comps:
                parts = grade_decompose(z)
                stray = [k for k in parts if k != target and not parts[k].is_zero()]
                resum = parts[target]
                for k in stray:
                    resum = resum + parts[k]
                if stray:
                    report.add(name, False, f"stray components {stray}")
                elif not (resum - z).is_zero():
                    report.add(name, False, "decomposition does not re-sum")
                else:
                    report.add(name, True)
            else:
                report.add(
                    f"[{gk}, {dk}] = 0 (outside support)",
                    z.is_zero(),
                    "" if z.is_zero() else "nonzero bracket outside support",
                )
    return report


def check_jacobi(pair):
    """Jacobi identity over generic elements, one per integer grade; the
    generic element of each grade carries all its lattice components at
    once, so every homogeneous component triple is covered."""
    report = CheckReport(f"Jacobi identity [{pair.name}]")
    S, (p, mmat, gx, gy), _ = stru.generic_matrices(
        pair, ("p", "m", "x", "y"), extra=("rp", "rm")
    )
    graded = {
        2: from_sp2(pair, S.var("rp"), S),
        1: from_ap1(p),
        0: from_gens(pair, [(gx, gy)], S),
        -1: from_am1(mmat),
        -2: from_sm2(pair, S.var("rm"), S),
    }
    degrees = sorted(graded)
    for i, di in enumerate(degrees):
        for j, dj in enumerate(degrees[i:], start=i):
            for dk in degrees[j:]:
                x, y, z = graded[di], graded[dj], graded[dk]
                total = (
                    bracket(bracket(x, y), z)
                    + bracket(bracket(y, z), x)
                    + bracket(bracket(z, x), y)
                )
                report.add(
                    f"jacobi ({di}, {dj}, {dk})",
                    total.is_zero(),
                    "" if total.is_zero() else "cyclic sum nonzero",
                )
    return report


def check_grading_derivations(pair):
    """The three grading derivations act diagonally by their pairing
    integers, and the long one is the sum of the other two."""
    report = CheckReport(f"grading derivations [{pair.name}]")
    S, comps = _generic_homogeneous(pair)
    for gamma in ((0, 1), (3, 1), (3, 2)):
        zeta = grading_derivation(gamma)(pair, S)
        for key, elem in comps.items():
            got = bracket(zeta, elem)
            want = elem.scale(eigenvalue(gamma, key))
            report.add(
                f"zeta_{gamma} on {key} = {eigenvalue(gamma, key)} * id",
                (got - want).is_zero(),
            )
    zb = grading_derivation((0, 1))(pair)
    zl = grading_derivation((3, 1))(pair)
    zs = grading_derivation((3, 2))(pair)
    report.add(
        "zeta_beta + zeta_{beta+3alpha} = zeta_{2beta+3alpha}",
        ((zb + zl) - zs).is_zero(),
    )
    return report


def check_x0_span(pair):
    """X0 is spanned both ways by the three bracket families
    [J'_1, J_{-1}], [t_1, tbar_{-1}], [tbar_1, t_{-1}]."""
    report = CheckReport(f"X0 spanning families [{pair.name}]")
    S, (v, w) = generic_elements([pair.J, pair.Jp], ("v", "w"), base=pair.ring)
    tvw = pair.T(v, w)
    t1 = stru.t_element(pair, S)
    tb1 = stru.tbar_element(pair, S)
    ve, we = stru.embed_j(pair, v), stru.embed_jp(pair, w)
    alpha_vw = from_gens(pair, [(ve, we)], S)
    beta_vw = from_gens(pair, [(we, ve)], S)
    gamma = from_gens(pair, [(t1, tb1)], S)
    delta = from_gens(pair, [(tb1, t1)], S)

    fam_wv = bracket(from_ap1(we), from_am1(ve))
    fam_t = bracket(from_ap1(t1), from_am1(tb1))
    fam_tb = bracket(from_ap1(tb1), from_am1(t1))
    report.add("[w_1, v_-1] = -beta(v,w)", (fam_wv + beta_vw).is_zero())
    report.add("[t_1, tbar_-1] = -gamma", (fam_t + gamma).is_zero())
    report.add("[tbar_1, t_-1] = -delta", (fam_tb + delta).is_zero())
    report.add(
        "alpha(v,w) = T(v,w)(gamma + delta) - beta(v,w)",
        (alpha_vw - ((gamma + delta).scale(tvw) - beta_vw)).is_zero(),
    )
    return report


def check_long_jordan_line(pair):
    """The skew lines form the rank-one Jordan pair: with the root
    normalization r_{-(2b+3a)} = -r(t-tbar)_{-2}, twice the quadratic
    operator of r on s is 2 r^2 s."""
    report = CheckReport(f"long root line [{pair.name}]")
    S, _ = generic_elements([pair.J], ("z",), base=pair.ring, extra=("r", "s"))
    r, s = S.var("r"), S.var("s")
    x = from_sp2(pair, r, S)
    y = from_sm2(pair, -s, S)
    got = bracket(x, bracket(x, y))
    want = from_sp2(pair, 2 * r * r * s, S)
    report.add(
        "[r_2, [r_2, s_-2]] = 2 r^2 s (t - tbar)_2",
        (got - want).is_zero(),
    )
    return report
