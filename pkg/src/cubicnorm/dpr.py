"""Divided power representations on the four-block module R + J' + J + R.

Each cubic norm pair acts on the direct sum R + J' + J + R through an
upper-triangular representation of J and a lower-triangular one of J'.
These satisfy a binomial product law, a binomial coefficient law, and the
divided-power compatibility equation with respect to the Q operator, which
is verified case by case at every diagonal offset.
"""

from __future__ import annotations

import math

from .cnp import q_operator, _record
from .errors import AxiomFailure, BadComponent, ShapeMismatch
from .modules import FreeModule, generic_elements
from .reports import CheckReport


class BlockEndo:
    """A square matrix over an extension ring, indexed by the four blocks
    R, J', J, R of the representation module."""

    __slots__ = ("ring", "dims", "rows")

    def __init__(self, ring, dims, rows):
        self.ring = ring
        self.dims = tuple(dims)
        self.rows = tuple(tuple(ring(c) for c in row) for row in rows)
        n = sum(self.dims)
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ShapeMismatch(f"expected a {n} x {n} matrix")

    @classmethod
    def identity(cls, ring, dims):
        n = sum(dims)
        rows = [
            [ring(1) if i == j else ring(0) for j in range(n)]
            for i in range(n)
        ]
        return cls(ring, dims, rows)

    @classmethod
    def zero(cls, ring, dims):
        n = sum(dims)
        return cls(ring, dims, [[ring(0)] * n for _ in range(n)])

    def __add__(self, other):
        return BlockEndo(
            self.ring,
            self.dims,
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other):
        return BlockEndo(
            self.ring,
            self.dims,
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ],
        )

    def __neg__(self):
        return self.scale(self.ring(-1))

    def scale(self, c):
        c = self.ring(c)
        return BlockEndo(
            self.ring, self.dims, [[c * a for a in row] for row in self.rows]
        )

    def __matmul__(self, other):
        n = sum(self.dims)
        zero = self.ring(0)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    a = self.rows[i][k]
                    if a.is_zero():
                        continue
                    b = other.rows[k][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return BlockEndo(self.ring, self.dims, rows)

    def __eq__(self, other):
        return (
            isinstance(other, BlockEndo)
            and self.ring == other.ring
            and self.dims == other.dims
            and self.rows == other.rows
        )

    def is_zero(self):
        return all(c.is_zero() for row in self.rows for c in row)

    def block_offsets(self):
        offsets = []
        pos = 0
        for d in self.dims:
            offsets.append(pos)
            pos += d
        return offsets

    def nonzero_blocks(self):
        """Block positions (i, j), 1-based, holding a nonzero entry."""
        offsets = self.block_offsets()
        out = set()
        for r, row in enumerate(self.rows):
            for c, val in enumerate(row):
                if val.is_zero():
                    continue
                bi = max(k for k, o in enumerate(offsets) if o <= r)
                bj = max(k for k, o in enumerate(offsets) if o <= c)
                out.add((bi + 1, bj + 1))
        return sorted(out)


class DPRep:
    """One side of the divided power representation of a cubic norm pair.

    ``side`` is "+" (upper triangular, acting for J) or "-" (lower
    triangular, acting for J').  ``rho_i`` is homogeneous of degree i and
    vanishes for i > 3; ``rho(j, t)`` assembles the full sum.
    """

    def __init__(self, pair, side):
        if side not in ("+", "-"):
            raise BadComponent(f"side must be '+' or '-', got {side!r}")
        self.pair = pair
        self.side = side
        self.dims = (1, pair.Jp.rank, pair.J.rank, 1)

    @property
    def source(self):
        return self.pair.J if self.side == "+" else self.pair.Jp

    def rho(self, j, t):
        out = self.rho_i(j, 0)
        t = j.ring(t)
        power = t
        for i in (1, 2, 3):
            out = out + self.rho_i(j, i).scale(power)
            power = power * t
        return out

    def rho_i(self, j, i):
        ring = j.ring
        if j.module != self.source:
            raise ShapeMismatch("element from the wrong side of the pair")
        if i == 0:
            return BlockEndo.identity(ring, self.dims)
        if i > 3:
            return BlockEndo.zero(ring, self.dims)
        if self.side == "+":
            return self._plus_component(j, i)
        return self._minus_component(j, i)

    def _plus_component(self, j, i):
        pair, ring = self.pair, j.ring
        np_, n = pair.Jp.rank, pair.J.rank
        out = BlockEndo.zero(ring, self.dims)
        rows = [list(r) for r in out.rows]
        top, jp0, j0, bot = 0, 1, 1 + np_, 1 + np_ + n
        if i == 1:
            for b, e in enumerate(pair.Jp.basis(ring)):
                rows[top][jp0 + b] = pair.T(j, e)
            for b, e in enumerate(pair.J.basis(ring)):
                col = pair.cross(j, e)
                for r in range(np_):
                    rows[jp0 + r][j0 + b] = col.coords[r]
            for r in range(n):
                rows[j0 + r][bot] = j.coords[r]
        elif i == 2:
            jsharp = pair.sharp(j)
            for b, e in enumerate(pair.J.basis(ring)):
                rows[top][j0 + b] = pair.Tp(jsharp, e)
            for r in range(np_):
                rows[jp0 + r][bot] = jsharp.coords[r]
        else:
            rows[top][bot] = pair.norm(j)
        return BlockEndo(ring, self.dims, rows)

    def _minus_component(self, k, i):
        pair, ring = self.pair, k.ring
        np_, n = pair.Jp.rank, pair.J.rank
        out = BlockEndo.zero(ring, self.dims)
        rows = [list(r) for r in out.rows]
        top, jp0, j0, bot = 0, 1, 1 + np_, 1 + np_ + n
        if i == 1:
            for r in range(np_):
                rows[jp0 + r][top] = -k.coords[r]
            for b, e in enumerate(pair.Jp.basis(ring)):
                col = pair.crossp(k, e)
                for r in range(n):
                    rows[j0 + r][jp0 + b] = -col.coords[r]
            for b, e in enumerate(pair.J.basis(ring)):
                rows[bot][j0 + b] = -pair.T(e, k)
        elif i == 2:
            ksharp = pair.sharpp(k)
            for r in range(n):
                rows[j0 + r][top] = ksharp.coords[r]
            for b, e in enumerate(pair.Jp.basis(ring)):
                rows[bot][jp0 + b] = pair.T(ksharp, e)
        else:
            rows[bot][top] = -pair.normp(k)
        return BlockEndo(ring, self.dims, rows)


def rho_plus(pair, j, t):
    """The upper-triangular representation matrix of j at parameter t."""
    return DPRep(pair, "+").rho(j, t)


def rho_minus(pair, k, t):
    """The lower-triangular representation matrix of k at parameter t."""
    return DPRep(pair, "-").rho(k, t)


def check_binomial(rep):
    """rho(j, t) rho(k, t) = rho(j + k, t) over generic coordinates."""
    pair = rep.pair
    report = CheckReport(
        f"binomial product law [{pair.name}, side {rep.side}]"
    )
    src = rep.source
    S, (j, k) = generic_elements(
        [src, src], ("j", "k"), base=pair.ring, extra=("t",)
    )
    t = S.var("t")
    diff = rep.rho(j, t) @ rep.rho(k, t) - rep.rho(j + k, t)
    if diff.is_zero():
        report.add("rho(j) rho(k) = rho(j+k)", True)
    else:
        report.add(
            "rho(j) rho(k) = rho(j+k)",
            False,
            f"nonzero at blocks {diff.nonzero_blocks()}",
        )
    return report


def check_binomial_coefficient_law(rep):
    """rho_i(u) rho_j(u) = C(i+j, i) rho_{i+j}(u) for 0 <= i, j <= 3."""
    pair = rep.pair
    report = CheckReport(
        f"binomial coefficient law [{pair.name}, side {rep.side}]"
    )
    S, (u,) = generic_elements([rep.source], ("u",), base=pair.ring)
    comps = [rep.rho_i(u, i) for i in range(7)]
    for i in range(4):
        for j in range(4):
            expected = comps[i + j].scale(S(math.comb(i + j, i)))
            diff = comps[i] @ comps[j] - expected
            report.add(
                f"rho_{i} rho_{j} = C({i + j},{i}) rho_{i + j}",
                diff.is_zero(),
                "" if diff.is_zero() else f"blocks {diff.nonzero_blocks()}",
            )
    return report


# The complete case list for the compatibility equation: every (k, l) with
# k >= 2l > 0 and |k - l| <= 3 that four-component triangular matrices can
# reach; all other cases vanish for shape reasons.
DP_EQ_CASES = ((2, 1), (3, 1), (4, 1), (4, 2), (6, 3))


def check_dp_eq(rep_plus, rep_minus, pair=None):
    """The compatibility sum against Q, at every case and both orientations.

    For each (k, l) the alternating sum over a + b = k of
    rho^+_a(u) rho^-_l(v) rho^+_b(u) (-1)^b must be rho^+_l(Q_u v) when
    k = 2l and must vanish when k > 2l; then the same with + and -
    reversed.  Full matrices are compared, which covers every block
    position at diagonal offset k - l.
    """
    pair = pair or rep_plus.pair
    if rep_minus.pair is not pair or rep_plus.pair is not pair:
        raise ShapeMismatch("representations of different pairs")
    report = CheckReport(f"divided power compatibility [{pair.name}]")
    sides = [
        (rep_plus, rep_minus, pair, "+"),
        (rep_minus, rep_plus, pair.swapped(), "-"),
    ]
    for outer, inner, view, tag in sides:
        S, (u, v) = generic_elements(
            [view.J, view.Jp], ("u", "v"), base=view.ring
        )
        for (k, l) in DP_EQ_CASES:
            acc = None
            for a in range(k + 1):
                b = k - a
                if a > 3 or b > 3:
                    continue
                term = (
                    outer.rho_i(u, a)
                    @ inner.rho_i(v, l)
                    @ outer.rho_i(u, b)
                )
                if b % 2 == 1:
                    term = -term
                acc = term if acc is None else acc + term
            if acc is None:
                acc = BlockEndo.zero(S, outer.dims)
            if k == 2 * l:
                expected = outer.rho_i(q_operator(view, u, v), l)
            else:
                expected = BlockEndo.zero(S, outer.dims)
            diff = acc - expected
            label = "= 0" if k > 2 * l else f"= rho_{l}(Q_u v)"
            report.add(
                f"side {tag} ({k},{l}) sum {label}",
                diff.is_zero(),
                "" if diff.is_zero() else f"blocks {diff.nonzero_blocks()}",
            )
    return report


# -- TKK representation for quadratic Jordan pairs -------------------------


class JordanPair:
    """A quadratic Jordan pair (V+, V-, Q, Q') given by its Q operators."""

    def __init__(self, name, Vp, Vm, q, qp):
        self.name = name
        self.Vp = Vp
        self.Vm = Vm
        self.q = q
        self.qp = qp

    @classmethod
    def from_cubic(cls, pair):
        return cls(
            pair.name,
            pair.J,
            pair.Jp,
            lambda x, y: q_operator(pair, x, y),
            lambda y, x: q_operator(pair.swapped(), y, x),
        )

    @classmethod
    def scalar(cls, ring):
        """(R, R) with Q_x y = x^2 y."""
        Vp = FreeModule(ring, ("p",))
        Vm = FreeModule(ring, ("m",))

        def q(x, y):
            return Vp.element([x.coords[0] * x.coords[0] * y.coords[0]], x.ring)

        def qp(y, x):
            return Vm.element([y.coords[0] * y.coords[0] * x.coords[0]], y.ring)

        return cls("scalar", Vp, Vm, q, qp)

    def d(self, x, y, z):
        """D_{x,y} z = Q_{x+z} y - Q_x y - Q_z y on the plus side."""
        return self.q(x + z, y) - self.q(x, y) - self.q(z, y)

    def dp(self, y, x, w):
        return self.qp(y + w, x) - self.qp(y, x) - self.qp(w, x)


class TKKElement:
    """An element of V- + D + V+ where D is a formal span of inner
    derivations delta_{x,y} (x in V+, y in V-)."""

    __slots__ = ("jp", "vm", "ders", "vp", "ring")

    def __init__(self, jp, vm, ders, vp, ring):
        self.jp = jp
        self.vm = vm
        self.ders = tuple(ders)
        self.vp = vp
        self.ring = ring

    def __add__(self, other):
        return TKKElement(
            self.jp,
            self.vm + other.vm,
            self.ders + other.ders,
            self.vp + other.vp,
            self.ring,
        )

    def der_on_plus(self, z):
        """The derivation part evaluated on z in V+."""
        out = self.jp.Vp.zero(self.ring)
        for coeff, x, y in self.ders:
            out = out + self.jp.d(x, y, z).scale(coeff)
        return out

    def der_on_minus(self, z):
        """The derivation part evaluated on z in V-, with the TKK sign."""
        out = self.jp.Vm.zero(self.ring)
        for coeff, x, y in self.ders:
            out = out - self.jp.dp(y, x, z).scale(coeff)
        return out


def tkk_rho(jp, side, x, t, elem):
    """Apply rho_[t](x) = 1 + t ad x + t^2 Q_x to a TKK element.

    For side "+" (x in V+): the V- part spawns a derivation delta_{x, vm}
    at order t and lands in V+ at order t^2 through Q_x; the derivation
    part feeds V+ at order t; V+ is fixed.  Side "-" is the mirror image.
    """
    ring = elem.ring
    t = ring(t)
    t2 = t * t
    if side == "+":
        vm = elem.vm
        ders = list(elem.ders) + [(t, x, elem.vm)]
        vp = (
            elem.vp
            + elem.der_on_plus(x).scale(t)
            + jp.q(x, elem.vm).scale(t2)
        )
        return TKKElement(jp, vm, ders, vp, ring)
    vp = elem.vp
    ders = list(elem.ders) + [(-t, elem.vp, x)]
    vm = (
        elem.vm
        + elem.der_on_minus(x).scale(t)
        + jp.qp(x, elem.vp).scale(t2)
    )
    return TKKElement(jp, vm, ders, vp, ring)


def tkk_rep(jp, validate=True):
    """The pair of TKK divided power representations of a Jordan pair.

    Returns ``(rho_plus, rho_minus)`` where each takes (x, t, elem).  When
    ``validate`` is set, the binomial product law is certified on generic
    elements first; its failure means the Q operators do not satisfy the
    Jordan pair axioms.
    """
    plus = lambda x, t, elem: tkk_rho(jp, "+", x, t, elem)
    minus = lambda x, t, elem: tkk_rho(jp, "-", x, t, elem)
    if validate:
        report = check_tkk_binomial(jp)
        if not report.ok:
            raise AxiomFailure(
                f"TKK representation of {jp.name} is inconsistent:\n{report}"
            )
    return plus, minus


def check_tkk_binomial(jp):
    """rho_[t](x) rho_[t](k) = rho_[t](x + k) extensionally.

    Both sides are compared on a generic element of V- (side +) and V+
    (side -), reading the V-parts and evaluating the derivation parts on
    further generic elements.
    """
    report = CheckReport(f"TKK binomial law [{jp.name}]")
    ring = jp.Vp.ring
    for side in ("+", "-"):
        acting = jp.Vp if side == "+" else jp.Vm
        carried = jp.Vm if side == "+" else jp.Vp
        S, (a1, a2, y, zpg, zmg) = generic_elements(
            [acting, acting, carried, jp.Vp, jp.Vm],
            ("x", "k", "y", "zp", "zm"),
            base=ring,
            extra=("t",),
        )
        t = S.var("t")
        if side == "+":
            start = TKKElement(jp, y, (), jp.Vp.zero(S), S)
        else:
            start = TKKElement(jp, jp.Vm.zero(S), (), y, S)
        lhs = tkk_rho(jp, side, a1, t, tkk_rho(jp, side, a2, t, start))
        rhs = tkk_rho(jp, side, a1 + a2, t, start)
        same = (
            lhs.vp == rhs.vp
            and lhs.vm == rhs.vm
            and (lhs.der_on_plus(zpg) - rhs.der_on_plus(zpg)).is_zero()
            and (lhs.der_on_minus(zmg) - rhs.der_on_minus(zmg)).is_zero()
        )
        report.add(f"side {side} rho(x) rho(k) = rho(x+k)", same)
    return report
