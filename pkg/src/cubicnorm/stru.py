"""The structurable algebra attached to a cubic norm pair.

Elements are 2x2 blocks (a b; c d) with scalars on the diagonal and the
two pair modules off the diagonal.  The product is a closed formula in
the trace pairing and the cross maps; no ambient matrix algebra is ever
materialized.  The conjugation swaps the diagonal, and the V and K
operators built from it turn the algebra into a Kantor triple system,
which :func:`check_kantor_triple` verifies over generic coordinates.

The hermitian variant (a scalar part in a quadratic etale extension plus
one module over it) lives in :class:`BElement`; its product shape is the
same and the two meet in the split case, which is exercised by the
hermitian-structure module rather than assumed here.
"""

from __future__ import annotations

import itertools

from .cnp import _witness, d_operator
from .errors import ExtensionMismatch
from .modules import generic_elements
from .reports import CheckReport


class StructurableElement:
    """A block element (a b; c d): scalars a, d and b in J, c in J'."""

    __slots__ = ("pair", "a", "b", "c", "d", "ring")

    def __init__(self, pair, a, b, c, d, ring=None):
        self.pair = pair
        self.ring = ring if ring is not None else a.ring
        self.a = self.ring(a)
        self.b = b
        self.c = c
        self.d = self.ring(d)

    @property
    def coords(self):
        return (self.a,) + tuple(self.b.coords) + tuple(self.c.coords) + (self.d,)

    def __add__(self, other):
        self._check(other)
        return StructurableElement(
            self.pair,
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.d + other.d,
            self.ring,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return StructurableElement(
            self.pair, -self.a, -self.b, -self.c, -self.d, self.ring
        )

    def scale(self, scalar):
        scalar = self.ring(scalar)
        return StructurableElement(
            self.pair,
            self.a * scalar,
            self.b.scale(scalar),
            self.c.scale(scalar),
            self.d * scalar,
            self.ring,
        )

    def is_zero(self):
        return all(x.is_zero() for x in self.coords)

    def __eq__(self, other):
        if not isinstance(other, StructurableElement):
            return NotImplemented
        return (
            self.pair is other.pair
            and self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.d == other.d
        )

    def __hash__(self):
        return hash((id(self.pair), self.coords))

    def _check(self, other):
        if self.pair is not other.pair or self.ring != other.ring:
            raise ExtensionMismatch("elements of different algebras")

    def __repr__(self):
        return f"({self.a} {self.b.coords}; {self.c.coords} {self.d})"


def element(pair, a, b, c, d, ring=None):
    """The block element (a b; c d) of the algebra of ``pair``."""
    ring = ring or pair.ring
    if not hasattr(b, "coords"):
        b = pair.J.element(b, ring)
    if not hasattr(c, "coords"):
        c = pair.Jp.element(c, ring)
    return StructurableElement(pair, ring(a), b, c, ring(d), ring)


def zero(pair, ring=None):
    ring = ring or pair.ring
    return element(pair, 0, pair.J.zero(ring), pair.Jp.zero(ring), 0, ring)


def t_element(pair, ring=None):
    """The idempotent t = (1 0; 0 0)."""
    ring = ring or pair.ring
    return element(pair, 1, pair.J.zero(ring), pair.Jp.zero(ring), 0, ring)


def tbar_element(pair, ring=None):
    """The complementary idempotent (0 0; 0 1)."""
    ring = ring or pair.ring
    return element(pair, 0, pair.J.zero(ring), pair.Jp.zero(ring), 1, ring)


def embed_j(pair, v):
    """v in J placed in the upper-right block."""
    ring = v.ring
    return StructurableElement(pair, ring(0), v, pair.Jp.zero(ring), ring(0), ring)


def embed_jp(pair, w):
    """w in J' placed in the lower-left block."""
    ring = w.ring
    return StructurableElement(pair, ring(0), pair.J.zero(ring), w, ring(0), ring)


def multiply(x, y):
    """(a b; c d)(e f; g h) = (ae + T(b,g), af + bh + c x' g; ce + dg + b x f, dh + T(c,f))."""
    x._check(y)
    pair = x.pair
    a, b, c, d = x.a, x.b, x.c, x.d
    e, f, g, h = y.a, y.b, y.c, y.d
    return StructurableElement(
        pair,
        a * e + pair.T(b, g),
        f.scale(a) + b.scale(h) + pair.crossp(c, g),
        c.scale(e) + g.scale(d) + pair.cross(b, f),
        d * h + pair.Tp(c, f),
        x.ring,
    )


def conjugate(x):
    """(a b; c d) -> (d b; c a); an involutory anti-automorphism."""
    return StructurableElement(x.pair, x.d, x.b, x.c, x.a, x.ring)


class SkewElement:
    """r(t - tbar) = (r 0; 0 -r), the general skew element x + conj(x) = 0."""

    __slots__ = ("pair", "r", "ring")

    def __init__(self, pair, r, ring=None):
        self.pair = pair
        self.ring = ring if ring is not None else r.ring
        self.r = self.ring(r)

    def as_element(self):
        return element(
            self.pair,
            self.r,
            self.pair.J.zero(self.ring),
            self.pair.Jp.zero(self.ring),
            -self.r,
            self.ring,
        )

    def conjugate(self):
        return SkewElement(self.pair, -self.r, self.ring)

    def __eq__(self, other):
        if not isinstance(other, SkewElement):
            return NotImplemented
        return self.pair is other.pair and self.r == other.r

    def __hash__(self):
        return hash((id(self.pair), self.r))

    def __repr__(self):
        return f"SkewElement({self.r})"


def skew_part(x):
    """x - conj(x) as a SkewElement; always lands in skew form."""
    return SkewElement(x.pair, x.a - x.d, x.ring)


def v_operator(x, y, z):
    """V_{x,y} z = (x conj(y)) z + (z conj(y)) x - (z conj(x)) y."""
    ybar = conjugate(y)
    return (
        multiply(multiply(x, ybar), z)
        + multiply(multiply(z, ybar), x)
        - multiply(multiply(z, conjugate(x)), y)
    )


def k_operator(x, z, y):
    """K_{x,z} y = V_{x,y} z - V_{z,y} x."""
    return v_operator(x, y, z) - v_operator(z, y, x)


def generic_matrices(pair, prefixes, extra=(), more_modules=(), more_prefixes=()):
    """Generic block elements, one per prefix, over a fresh extension.

    Returns ``(S, matrices, others)`` where ``others`` holds generic
    elements of ``more_modules`` built over the same extension.
    """
    mods, prefs, scalars = [], [], []
    for p in prefixes:
        mods.extend([pair.J, pair.Jp])
        prefs.extend([f"{p}b", f"{p}c"])
        scalars.extend([f"{p}a", f"{p}d"])
    mods.extend(more_modules)
    prefs.extend(more_prefixes)
    S, elems = generic_elements(
        mods, prefs, base=pair.ring, extra=tuple(scalars) + tuple(extra)
    )
    matrices = [
        StructurableElement(
            pair, S.var(f"{p}a"), elems[2 * i], elems[2 * i + 1], S.var(f"{p}d"), S
        )
        for i, p in enumerate(prefixes)
    ]
    return S, matrices, elems[2 * len(prefixes) :]


def _record_block(report, name, lhs, rhs, S, base):
    diff = [p - q for p, q in zip(lhs.coords, rhs.coords)]
    if all(d.is_zero() for d in diff):
        report.add(name, True)
        return
    asn = _witness(diff, S, base)
    detail = "sides differ generically"
    if asn is not None:
        shown = ", ".join(f"{k}={v}" for k, v in sorted(asn.items()))
        detail = f"witness {shown}"
    report.add(name, False, detail)


def check_v_table(pair):
    """The thirteen V-operator identities, as operator equalities on
    a generic block element."""
    report = CheckReport(f"V-operator table [{pair.name}]")
    base = pair.ring
    S, (y,), (v, v2, w, w2) = generic_matrices(
        pair,
        ("y",),
        more_modules=[pair.J, pair.J, pair.Jp, pair.Jp],
        more_prefixes=("v", "p", "w", "q"),
    )
    t = t_element(pair, S)
    tb = tbar_element(pair, S)
    ve = embed_j(pair, v)
    v2e = embed_j(pair, v2)
    we = embed_jp(pair, w)
    w2e = embed_jp(pair, w2)
    x = ve + we
    rec = lambda name, lhs, rhs: _record_block(report, name, lhs, rhs, S, base)

    rec("(1) R_x R_t = R_tbar R_x", multiply(multiply(y, t), x), multiply(multiply(y, x), tb))
    rec("(2) R_x R_tbar = R_t R_x", multiply(multiply(y, tb), x), multiply(multiply(y, x), t))
    xtb = multiply(x, tb)
    rec("(3) V_{t,x} = L_{x tbar}", v_operator(t, x, y), multiply(xtb, y))
    rec("(3) V_{x,t} = L_{x tbar}", v_operator(x, t, y), multiply(xtb, y))
    xt = multiply(x, t)
    rec("(4) V_{tbar,x} = L_{x t}", v_operator(tb, x, y), multiply(xt, y))
    rec("(4) V_{x,tbar} = L_{x t}", v_operator(x, tb, y), multiply(xt, y))
    z = zero(pair, S)
    rec("(5) V_{t,t} = 0", v_operator(t, t, y), z)
    rec("(5) V_{t,w} = 0", v_operator(t, we, y), z)
    rec("(5) V_{w,t} = 0", v_operator(we, t, y), z)
    rec("(5) V_{tbar,v} = 0", v_operator(tb, ve, y), z)
    rec("(5) V_{v,tbar} = 0", v_operator(ve, tb, y), z)
    rec("(5) V_{tbar,tbar} = 0", v_operator(tb, tb, y), z)
    rec(
        "(6) V_{t,tbar} = L_t + R_{t - tbar}",
        v_operator(t, tb, y),
        multiply(t, y) + multiply(y, t - tb),
    )
    rec(
        "(7) V_{tbar,t} = L_tbar + R_{tbar - t}",
        v_operator(tb, t, y),
        multiply(tb, y) + multiply(y, tb - t),
    )
    rec("(8) V_{t,v} = L_v", v_operator(t, ve, y), multiply(ve, y))
    rec("(8) V_{v,t} = L_v", v_operator(ve, t, y), multiply(ve, y))
    wxw = embed_j(pair, pair.crossp(w, w2))
    rec("(9) V_{w,w'} = L_{w x' w'}", v_operator(we, w2e, y), multiply(wxw, y))
    rec("(10) V_{tbar,w} = L_w", v_operator(tb, we, y), multiply(we, y))
    rec("(10) V_{w,tbar} = L_w", v_operator(we, tb, y), multiply(we, y))
    vxv = embed_jp(pair, pair.cross(v, v2))
    rec("(11) V_{v,v'} = L_{v x v'}", v_operator(ve, v2e, y), multiply(vxv, y))
    tvw = pair.T(v, w)
    dvw_b = d_operator(pair, v, w, y.b)
    dwv_c = d_operator(pair.swapped(), w, v, y.c)
    rec(
        "(12) V_{v,w} (a b; c d) = (0, D_{v,w} b; T(v,w)c - D_{w,v} c, T(v,w) d)",
        v_operator(ve, we, y),
        StructurableElement(
            pair, S(0), dvw_b, y.c.scale(tvw) - dwv_c, y.d * tvw, S
        ),
    )
    rec(
        "(13) V_{w,v} (a b; c d) = (T(v,w) a, T(v,w)b - D_{v,w} b; D_{w,v} c, 0)",
        v_operator(we, ve, y),
        StructurableElement(
            pair, y.a * tvw, y.b.scale(tvw) - dvw_b, dwv_c, S(0), S
        ),
    )
    return report


def check_kantor_triple(pair):
    """The two Kantor triple-system axioms for (A, V), plus the closed
    form K_{x,z} = L_{x conj(z) - z conj(x)} that feeds the Lie bracket."""
    report = CheckReport(f"Kantor triple system [{pair.name}]")
    base = pair.ring
    S, (x, y, u, v, z), _ = generic_matrices(pair, ("x", "y", "u", "v", "z"))
    rec = lambda name, lhs, rhs: _record_block(report, name, lhs, rhs, S, base)

    vuv_z = v_operator(u, v, z)
    vxy_z = v_operator(x, y, z)
    rec(
        "[V_{x,y}, V_{u,v}] = V_{V_{x,y}u, v} - V_{u, V_{y,x}v}",
        v_operator(x, y, vuv_z) - v_operator(u, v, vxy_z),
        v_operator(v_operator(x, y, u), v, z)
        - v_operator(u, v_operator(y, x, v), z),
    )
    kxy_z = k_operator(x, y, z)
    rec(
        "K_{x,y} V_{v,u} + V_{u,v} K_{x,y} = K_{K_{x,y}v, u}",
        k_operator(x, y, v_operator(v, u, z)) + v_operator(u, v, kxy_z),
        k_operator(k_operator(x, y, v), u, z),
    )
    bracket = multiply(x, conjugate(y)) - multiply(y, conjugate(x))
    rec(
        "K_{x,z} = L_{x conj(z) - z conj(x)}",
        kxy_z,
        multiply(bracket, z),
    )
    rec("K_{x,x} = 0", k_operator(x, x, z), zero(pair, S))
    return report


def _multilinear_component(fn, gens, module, S):
    """The fully multilinear part of a homogeneous map, by inclusion-exclusion
    over sums of subsets of the generic arguments."""
    n = len(gens)
    total = module.zero(S)
    for size in range(1, n + 1):
        sign = 1 if (n - size) % 2 == 0 else -1
        for subset in itertools.combinations(gens, size):
            part = subset[0]
            for g in subset[1:]:
                part = part + g
            val = fn(part)
            total = total + (val if sign == 1 else -val)
    return total


def check_structurable_conditions(pair):
    """The three conditions under which the block algebra is structurable.

    The trilinear form T(a, b x c) must be cyclically symmetric, and the
    fully linearized forms of the two sharp axioms must hold.  All three
    are consequences of the pair axioms, but they are what the algebra
    structure actually uses, so they are certified directly.
    """
    report = CheckReport(f"structurable conditions [{pair.name}]")
    base = pair.ring
    S, (a, b, c) = generic_elements(
        [pair.J, pair.J, pair.J], ("a", "b", "c"), base=base
    )
    from .cnp import _record

    _record(
        report,
        "T(a, b x c) = T(b, c x a)",
        pair.T(a, pair.cross(b, c)),
        pair.T(b, pair.cross(c, a)),
        S,
        base,
    )
    _record(
        report,
        "T(b, c x a) = T(c, a x b)",
        pair.T(b, pair.cross(c, a)),
        pair.T(c, pair.cross(a, b)),
        S,
        base,
    )

    S4, gens4 = generic_elements(
        [pair.J] * 4, ("a", "b", "c", "e"), base=base
    )
    diff2 = _multilinear_component(
        lambda u: pair.sharpp(pair.sharp(u)) - u.scale(pair.norm(u)),
        gens4,
        pair.J,
        S4,
    )
    _record(
        report,
        "full linearization of (a^#)^#' = N(a) a",
        diff2,
        pair.J.zero(S4),
        S4,
        base,
    )

    S3, elems = generic_elements(
        [pair.J] * 3 + [pair.Jp], ("a", "b", "c", "w"), base=base
    )
    gens3, wv = elems[:3], elems[3]

    def axiom3_defect(u):
        return (
            pair.cross(pair.crossp(pair.sharp(u), wv), u)
            - wv.scale(pair.norm(u))
            - pair.sharp(u).scale(pair.T(u, wv))
        )

    diff3 = _multilinear_component(axiom3_defect, gens3, pair.Jp, S3)
    _record(
        report,
        "(1,1,1)-linearization in a of (a^# x' c) x a = N(a)c + T(a,c) a^#",
        diff3,
        pair.Jp.zero(S3),
        S3,
        base,
    )
    return report


# -- hermitian-flavoured elements ------------------------------------------


class BElement:
    """An element (k, j) of the hermitian algebra: a scalar in the etale
    extension K and a module element over K."""

    __slots__ = ("structure", "k", "j")

    def __init__(self, structure, k, j):
        self.structure = structure
        self.k = structure.ring(k)
        self.j = j

    def __add__(self, other):
        if self.structure is not other.structure:
            raise ExtensionMismatch("elements of different algebras")
        return BElement(self.structure, self.k + other.k, self.j + other.j)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BElement(self.structure, -self.k, -self.j)

    def __eq__(self, other):
        if not isinstance(other, BElement):
            return NotImplemented
        return (
            self.structure is other.structure
            and self.k == other.k
            and self.j == other.j
        )

    def __hash__(self):
        return hash((id(self.structure), self.k, tuple(self.j.coords)))

    def is_zero(self):
        return self.k.is_zero() and self.j.is_zero()

    def __repr__(self):
        return f"BElement({self.k}, {self.j.coords})"


def b_multiply(x, y):
    """(k, j)(k', j') = (kk' + T(j, j'), kj' + conj(k')j + j x j')."""
    if x.structure is not y.structure:
        raise ExtensionMismatch("elements of different algebras")
    H = x.structure
    k, j = x.k, x.j
    kp, jp = y.k, y.j
    return BElement(
        H,
        k * kp + H.T(j, jp),
        jp.scale(k) + j.scale(H.conj(kp)) + H.cross(j, jp),
    )


def b_conjugate(x):
    """(k, j) -> (conj(k), j)."""
    return BElement(x.structure, x.structure.conj(x.k), x.j)
