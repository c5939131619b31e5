"""The positive unipotent group of a cubic norm pair.

The automorphisms built from the five positively graded root
exponentials form a group G+ isomorphic to a vector group U sitting
inside A x A, where A is the block algebra: an element is a pair
(x, y) with

    x = a tbar + v + w + b t,      y = c tbar + (bv + w#) + (aw + v#) + d t,

subject to the constraint c + d = ab + T(v, w), and with multiplication
(x, y)(u, v) = (x + u, y + v + x conj(u)).  This module implements the
group law, the isomorphism with products of root exponentials in
canonical order, the two scalar actions, niceness certification for
vector groups, and the positive-filtration property: any product of
positive and negative root exponentials that acts as 1 + (positively
graded parts) on the Lie algebra already lies in G+.
"""

from __future__ import annotations

import random

from . import aut, lie, rings, stru
from .errors import (
    BadMode,
    BadOrder,
    BadRoot,
    ConstraintViolated,
    NotAUnit,
)
from .reports import CheckReport

#: The canonical factor order for products of positive root exponentials.
CANONICAL_ORDER = ((0, 1), (1, 1), (3, 2), (2, 1), (3, 1))

#: Roots carrying ring parameters (the other two carry module parameters).
_RING_ROOTS = {(0, 1), (3, 2), (3, 1)}


class GPlusElement:
    """A point (x, y) of the vector group U attached to a pair.

    Both components are block elements; the second is determined by the
    first up to a skew summand, through the membership constraint.
    """

    __slots__ = ("pair", "ring", "x", "y")

    def __init__(self, pair, x, y, ring=None):
        self.pair = pair
        self.ring = ring or x.ring
        self.x = x
        self.y = y
        defect = constraint_defect(x, y)
        if any(not c.is_zero() for c in defect.coords):
            raise ConstraintViolated(
                "the second component does not match the first"
            )

    def __eq__(self, other):
        if not isinstance(other, GPlusElement):
            return NotImplemented
        return (
            self.pair is other.pair
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash((id(self.pair), self.x, self.y))

    def is_identity(self):
        return self.x.is_zero() and self.y.is_zero()

    def skew_part(self):
        """The skew parameter r with y = r(t - tbar) when x = 0."""
        return self.y.a

    def __repr__(self):
        return f"GPlusElement(x={self.x.coords}, y={self.y.coords})"


def constraint_defect(x, y):
    """The membership defect of (x, y); zero exactly on group points.

    The three conditions are block-wise: the J block of y must be
    (t-coefficient of x) * v + w#, the J' block must be
    (tbar-coefficient of x) * w + v#, and the trace of y must equal
    ab + T(v, w).
    """
    pair, ring = x.pair, x.ring
    b_defect = y.b - x.b.scale(x.a) - pair.sharpp(x.c)
    c_defect = y.c - x.c.scale(x.d) - pair.sharp(x.b)
    tr_defect = y.a + y.d - x.a * x.d - pair.T(x.b, x.c)
    return stru.StructurableElement(pair, tr_defect, b_defect, c_defect, ring(0), ring)


def element(pair, x, y, ring=None):
    """A validated group point with components ``x`` and ``y``."""
    return GPlusElement(pair, x, y, ring)


def identity(pair, ring=None):
    ring = ring or pair.ring
    z = stru.zero(pair, ring)
    return GPlusElement(pair, z, z, ring)


def skew_element(pair, r, ring=None):
    """The central point (0, r(t - tbar))."""
    ring = ring or (r.ring if hasattr(r, "ring") else pair.ring)
    r = ring(r)
    return GPlusElement(
        pair,
        stru.zero(pair, ring),
        stru.element(pair, r, pair.J.zero(ring), pair.Jp.zero(ring), -r, ring),
        ring,
    )


def group_law(g, h):
    """(x, y)(u, v) = (x + u, y + v + x conj(u))."""
    if g.pair is not h.pair or g.ring != h.ring:
        raise ConstraintViolated("operands live over different instances")
    x, y = g.x, g.y
    u, v = h.x, h.y
    return GPlusElement(
        g.pair, x + u, y + v + stru.multiply(x, stru.conjugate(u)), g.ring
    )


def inverse(g):
    """The unique (u, v) with g (u, v) = identity."""
    u = -g.x
    v = -g.y + stru.multiply(g.x, stru.conjugate(g.x))
    return GPlusElement(g.pair, u, v, g.ring)


def commutator(g, h):
    """g h g^-1 h^-1; always a skew (central) point."""
    return group_law(group_law(g, h), inverse(group_law(h, g)))


def scalar_actions(lam, mode, g):
    """The two scalar actions of a vector group.

    Mode 1 is lam . (x, y) = (lam x, lam^2 y); mode 2 acts only on
    points with zero first component, by (0, y) -> (0, lam y).
    """
    lam = g.ring(lam)
    if mode == 1:
        return GPlusElement(
            g.pair, g.x.scale(lam), g.y.scale(lam * lam), g.ring
        )
    if mode == 2:
        if not g.x.is_zero():
            raise BadMode("mode 2 requires a zero first component")
        return GPlusElement(g.pair, g.x, g.y.scale(lam), g.ring)
    raise BadMode(f"unknown scalar action mode {mode!r}")


# -- root factors -----------------------------------------------------------


def root_image(pair, root, param, ring=None):
    """The group point of a single positive root exponential.

    The ring-parameter roots map r to (r tbar, 0), (0, -r(t - tbar)),
    and (r t, 0); the module-parameter roots map j to (j, j#).
    """
    key = tuple(root)
    if key in _RING_ROOTS:
        ring = ring or (param.ring if hasattr(param, "ring") else pair.ring)
        r = ring(param)
        zj, zjp = pair.J.zero(ring), pair.Jp.zero(ring)
        if key == (0, 1):
            x = stru.element(pair, 0, zj, zjp, r, ring)
            return GPlusElement(pair, x, stru.zero(pair, ring), ring)
        if key == (3, 1):
            x = stru.element(pair, r, zj, zjp, 0, ring)
            return GPlusElement(pair, x, stru.zero(pair, ring), ring)
        return skew_element(pair, -r, ring)
    ring = ring or param.ring
    if key == (1, 1):
        x = stru.embed_j(pair, param)
        y = stru.embed_jp(pair, pair.sharp(param))
        return GPlusElement(pair, x, y, ring)
    if key == (2, 1):
        x = stru.embed_jp(pair, param)
        y = stru.embed_j(pair, pair.sharpp(param))
        return GPlusElement(pair, x, y, ring)
    raise BadRoot(f"{key} is not a positive root with a group image")


def from_root_factors(pair, factors, ring=None):
    """The group point of a product of root exponentials supplied in the
    canonical order (0,1), (1,1), (3,2), (2,1), (3,1); omissions are
    allowed, repetitions and transpositions are not."""
    factors = list(factors)
    last = -1
    for root, _ in factors:
        key = tuple(root)
        if key not in CANONICAL_ORDER:
            raise BadOrder(f"{key} is not a positive root")
        pos = CANONICAL_ORDER.index(key)
        if pos <= last:
            raise BadOrder(
                "factors must follow the canonical order "
                f"{CANONICAL_ORDER} without repetition"
            )
        last = pos
    if ring is None:
        for root, param in factors:
            if hasattr(param, "ring"):
                ring = param.ring
                break
        ring = ring or pair.ring
    out = identity(pair, ring)
    for root, param in factors:
        out = group_law(out, root_image(pair, root, param, ring))
    return out


def factor_parameters(g):
    """The canonical factorization of a group point, as the list of
    (root, parameter) pairs whose ordered product recovers it."""
    x = g.x
    partial = from_root_factors(
        g.pair,
        [((0, 1), x.d), ((1, 1), x.b), ((2, 1), x.c), ((3, 1), x.a)],
        g.ring,
    )
    s = g.y - partial.y
    m = -s.a
    return [
        ((0, 1), x.d),
        ((1, 1), x.b),
        ((3, 2), m),
        ((2, 1), x.c),
        ((3, 1), x.a),
    ]


def to_automorphism(g, ring=None):
    """The Lie algebra automorphism of a group point: the composition of
    its canonical root-exponential factors."""
    ring = ring or g.ring
    out = None
    for root, param in factor_parameters(g):
        factor = aut.exp_root(g.pair, root, param, 1, ring)
        out = factor if out is None else out @ factor
    return out


def from_automorphism(pair, endo, ring=None):
    """The group point of an automorphism of the shape 1 + (positive parts).

    The first component is read off from the action on the grading
    derivation zeta of the long root (3, 2), through
    endo(zeta) = zeta - x + z; the second from the action on the unit
    placed in degree -1, whose degree +1 image is x conj(x) - y.
    Raises ``ConstraintViolated`` when the automorphism carries
    non-positive graded parts.
    """
    ring = ring or endo.ring
    zeta = lie.grading_derivation((3, 2))(pair, ring)
    defect = endo(zeta) - zeta
    for key, comp in lie.grade_decompose(defect).items():
        if key[1] <= 0 and not comp.is_zero():
            raise ConstraintViolated(
                f"the automorphism moves the grading derivation into {key}"
            )
    x = -defect.ap1
    unit = stru.element(pair, 1, pair.J.zero(ring), pair.Jp.zero(ring), 1, ring)
    image = endo(lie.from_am1(unit))
    if not (image.am1 - unit).is_zero():
        raise ConstraintViolated(
            "the automorphism moves the degree -1 unit within degree -1"
        )
    y = stru.multiply(x, x) - image.ap1
    return GPlusElement(pair, x, y, ring)


# -- vector groups and niceness ---------------------------------------------


class VectorGroupSpec:
    """A subgroup of A x B under (a1,b1)(a2,b2) = (a1+a2, b1+b2+psi(a1,a2)),
    in coordinates over a base ring.

    ``psi(ring, a, u)`` multiplies coordinate vectors; ``contains``
    decides membership; ``g2_rows(ring)`` are the linear forms cutting
    out the central part G2 = {b : (0, b) in G} inside B.
    """

    __slots__ = ("name", "base", "dim_a", "dim_b", "psi", "contains", "g2_rows")

    def __init__(self, name, base, dim_a, dim_b, psi, contains, g2_rows):
        self.name = name
        self.base = base
        self.dim_a = dim_a
        self.dim_b = dim_b
        self.psi = psi
        self.contains = contains
        self.g2_rows = g2_rows

    def g2_basis(self, ring=None):
        """A basis of the central part over ``ring`` (defaults to base)."""
        ring = ring or self.base
        return _kernel(self.g2_rows(ring), self.dim_b, ring)


def vector_group_of_pair(pair):
    """The group G+ of a pair as a vector group in block coordinates
    (t-coefficient, J block, J' block, tbar-coefficient)."""
    base = pair.ring
    dim = 2 + len(pair.J.basis(base)) + len(pair.Jp.basis(base))

    def unpack(ring, coords):
        nj = len(pair.J.basis(ring))
        a, rest = coords[0], coords[1:]
        b = pair.J.element(list(rest[:nj]), ring)
        c = pair.Jp.element(list(rest[nj:-1]), ring)
        return stru.StructurableElement(pair, a, b, c, coords[-1], ring)

    def psi(ring, a_coords, u_coords):
        x = unpack(ring, a_coords)
        u = unpack(ring, u_coords)
        return stru.multiply(x, stru.conjugate(u)).coords

    def contains(ring, a_coords, b_coords):
        defect = constraint_defect(unpack(ring, a_coords), unpack(ring, b_coords))
        return all(c.is_zero() for c in defect.coords)

    def g2_rows(ring):
        zero, one = ring(0), ring(1)
        rows = []
        for i in range(1, dim - 1):
            row = [zero] * dim
            row[i] = one
            rows.append(row)
        trace = [zero] * dim
        trace[0] = one
        trace[-1] = one
        rows.append(trace)
        return rows

    return VectorGroupSpec(
        "block", base, dim, dim, psi, contains, g2_rows
    )


def etale_vector_group(base, trace, norm, name="etale"):
    """The rank-one group U of a quadratic algebra K = base[u]/(u^2 - su + p)
    with conjugation u -> s - u: points (x, y) in K x K with
    y + conj(y) = x conj(x), coordinates (p, q) for p + q u."""
    s = base(trace)
    p = base(norm)

    def mul(ring, a, b):
        sr, pr = ring(s), ring(p)
        return (
            a[0] * b[0] - pr * a[1] * b[1],
            a[0] * b[1] + a[1] * b[0] + sr * a[1] * b[1],
        )

    def conj(ring, a):
        return (a[0] + ring(s) * a[1], -a[1])

    def psi(ring, a, u):
        return mul(ring, a, conj(ring, u))

    def contains(ring, a, b):
        bb = conj(ring, b)
        na = mul(ring, a, conj(ring, a))
        return all(
            (b[i] + bb[i] - na[i]).is_zero() for i in range(2)
        )

    def g2_rows(ring):
        return [[ring(2), ring(s)]]

    return VectorGroupSpec(name, base, 2, 2, psi, contains, g2_rows)


def _row_reduce(rows, dim, ring):
    """Gauss-Jordan elimination with unit pivots; returns the reduced
    rows and the pivot columns.  Raises ``NotAUnit`` when a nonzero row
    has no invertible entry, in which case no certificate is produced."""
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(dim):
        pivot_row = None
        for i in range(rank, len(rows)):
            if rows[i][col].is_zero():
                continue
            if ring.try_invert(rows[i][col].data) is not None:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        inv = ring.elem(ring.try_invert(rows[rank][col].data))
        rows[rank] = [e * inv for e in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not rows[i][col].is_zero():
                factor = rows[i][col]
                rows[i] = [
                    rows[i][j] - factor * rows[rank][j] for j in range(dim)
                ]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(rows)):
        if any(not e.is_zero() for e in rows[i]):
            raise NotAUnit("a residual row has no invertible pivot")
    return rows[:rank], pivots


def _kernel(rows, dim, ring):
    """A basis of the solution module of the homogeneous system."""
    reduced, pivots = _row_reduce(rows, dim, ring)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for col in free:
        vec = [ring(0)] * dim
        vec[col] = ring(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -reduced[i][col]
        basis.append(vec)
    return basis


def _in_span(vec, gens, ring):
    """Whether ``vec`` is a ring-linear combination of ``gens``."""
    if not gens:
        return all(e.is_zero() for e in vec)
    dim = len(vec)
    rows = [[g[k] for g in gens] + [vec[k]] for k in range(dim)]
    try:
        reduced, pivots = _row_reduce(rows, len(gens) + 1, ring)
    except NotAUnit:
        return False
    return len(gens) not in pivots


def check_niceness(spec, probes=None):
    """Certify that the central part of a vector group commutes with base
    change: for each probe extension L, the base solutions of the
    central equations generate all solutions over L."""
    report = CheckReport(f"niceness of the vector group {spec.name}")
    base = spec.base
    if probes is None:
        probes = default_probes(base)
    try:
        base_basis = spec.g2_basis(base)
    except NotAUnit:
        report.add("central equations solvable over the base", False)
        return report
    report.add("central equations solvable over the base", True,
               f"rank {len(base_basis)}")
    for label, build in probes:
        L = build(base)
        rows = spec.g2_rows(L)
        coerced = [[_coerce(L, e) for e in vec] for vec in base_basis]
        still_solutions = all(
            all(
                sum((row[k] * vec[k] for k in range(spec.dim_b)), L(0)).is_zero()
                for row in rows
            )
            for vec in coerced
        )
        report.add(f"[{label}] base solutions stay solutions", still_solutions)
        try:
            ker = _kernel(rows, spec.dim_b, L)
        except NotAUnit:
            report.add(f"[{label}] solutions computable", False)
            continue
        report.add(
            f"[{label}] rank preserved", len(ker) == len(base_basis)
        )
        spanned = all(_in_span(vec, coerced, L) for vec in ker)
        report.add(
            f"[{label}] every solution comes from the base", spanned
        )
    return report


def _coerce(ring, el):
    """Carry an element of the base into an extension or quotient."""
    try:
        return ring(el)
    except Exception:
        return ring(el.data)


def default_probes(base):
    """The fixed probe list: the base itself, a square-zero variable, a
    cube-zero variable, and (over the integers) two modular quotients."""
    probes = [
        ("base", lambda R: R),
        ("square-zero", lambda R: rings.extend_scalars(R, ("nprb",), {"nprb": 1})),
        ("cube-zero", lambda R: rings.extend_scalars(R, ("nprc",), {"nprc": 2})),
    ]
    if isinstance(base, rings.IntegerRing):
        probes.append(("mod 4", lambda R: rings.ModRing(4)))
        probes.append(("mod 9", lambda R: rings.ModRing(9)))
    return probes


# -- the positive filtration property ---------------------------------------


def _phi_word(pair, k, l, uinv, ring):
    """A word in the two long opposite root groups whose product is the
    diagonal grading automorphism at 1 - kl."""
    return [
        ((-3, -2), -(l * uinv)),
        ((3, 2), k),
        ((-3, -2), l),
        ((3, 2), -(k * uinv)),
    ]


def default_filtration_words(pair, seed=0):
    """Sampled words in positive and negative root exponentials whose
    products act as 1 + (positive parts): single positive factors, a
    cancelling negative pair, and twenty conjugates of positive
    generators by diagonal automorphisms built from mixed words."""
    rng = random.Random(seed)
    S = rings.extend_scalars(pair.ring, ("wk", "wl"), {"wk": 1, "wl": 1})
    k, l = S.var("wk"), S.var("wl")
    u_inv = S(1) + k * l
    u_inv2 = S(1) - k * l

    def param_for(root, scale=None):
        c = S(scale if scale is not None else rng.randrange(1, 6))
        if tuple(root) in _RING_ROOTS or tuple(root) in {(0, -1), (-3, -1), (-3, -2)}:
            return c
        module = pair.J if tuple(root) in {(1, 1), (-2, -1)} else pair.Jp
        basis = module.basis(S)
        out = basis[0].scale(c)
        for v in basis[1:]:
            out = out + v.scale(S(rng.randrange(0, 4)))
        return out

    words = []
    for root in CANONICAL_ORDER:
        words.append((f"single {root}", S, [(root, param_for(root))]))
    wneg = param_for((-2, -1))
    words.append(
        ("cancelling negative pair", S, [((-2, -1), wneg), ((-2, -1), -wneg)])
    )
    for root in CANONICAL_ORDER:
        for trial in range(4):
            word = list(_phi_word(pair, k, l, u_inv, S))
            word.append((root, param_for(root)))
            word.extend(_phi_word(pair, -(k * u_inv), l, u_inv2, S))
            words.append((f"conjugated {root} #{trial}", S, word))
    return words


def check_positive_filtration(pair, words=None, seed=0):
    """For each sampled word whose product acts as 1 + (positive parts),
    extract the group point and confirm the product is exactly the
    canonical positive factorization of that point."""
    report = CheckReport("positive filtration")
    if words is None:
        words = default_filtration_words(pair, seed)
    for label, ring, word in words:
        endo = None
        for root, param in word:
            factor = aut.exp_root(pair, root, param, 1, ring)
            endo = factor if endo is None else endo @ factor
        try:
            point = from_automorphism(pair, endo, ring)
        except ConstraintViolated as exc:
            report.add(label, False, f"not positively filtered: {exc}")
            continue
        rebuilt = to_automorphism(point, ring)
        report.add(label, endo.equals(rebuilt), "product is the canonical one")
    return report
