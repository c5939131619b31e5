"""Cubic norm pairs: axioms, derived operators, and a builtin catalog.

A cubic norm pair couples two modules J and J' by cubic norms N, N',
quadratic sharp maps going back and forth, and a trace pairing T, subject
to four axioms that must hold over every scalar extension.  All checks
here work with generic polynomial coordinates, so a passing check is a
certificate for every extension at once.
"""

from __future__ import annotations

import itertools
import random

from .errors import AxiomFailure, PreconditionViolated, UnknownTag
from .modules import (
    BilinearForm,
    FreeModule,
    ModuleElement,
    PolyLaw,
    generic_elements,
    law_from_function,
    linearize,
    polarize,
    scalar_module,
)
from .reports import CheckReport
from .rings import QQ, ZZ, El, PolyRing


class CubicNormPair:
    """The data (J, J', N, N', sharp, sharp', T) with derived operators.

    ``T`` is a BilinearForm J x J' -> ring.  The polarizations ``cross``
    (of sharp) and ``crossp`` (of sharp'), the flipped pairing ``Tp``, and
    the (1,2)-linearizations of both norms are computed once and cached.
    """

    def __init__(self, name, J, Jp, N, Np, sharp, sharpp, T, _swapped=None):
        self.name = name
        self.J = J
        self.Jp = Jp
        self.N = N
        self.Np = Np
        self.sharp = sharp
        self.sharpp = sharpp
        self.T = T
        self.Tp = T.transpose()
        self.cross = polarize(sharp)
        self.crossp = polarize(sharpp)
        self.n12 = linearize(N, (1, 2))
        self.np12 = linearize(Np, (1, 2))
        self._swapped = _swapped

    @property
    def ring(self):
        return self.J.ring

    def swapped(self):
        """The same pair with the roles of J and J' reversed."""
        if self._swapped is None:
            self._swapped = CubicNormPair(
                f"{self.name}-swapped",
                self.Jp,
                self.J,
                self.Np,
                self.N,
                self.sharpp,
                self.sharp,
                self.Tp,
                _swapped=self,
            )
        return self._swapped

    def norm(self, a):
        """N(a) as a ring element, for a in J (over any extension)."""
        return self.N(a).coords[0]

    def normp(self, c):
        return self.Np(c).coords[0]

    def lift(self, elem, ring):
        """Rewrite an element of J or J' over an extension ring."""
        return elem.module.element([ring(c) for c in elem.coords], ring)

    def __repr__(self):
        return f"CubicNormPair({self.name!r})"


def q_operator(pair, a, c):
    """Q_a c = T(a,c) a - a^sharp x' c, for a in J and c in J'."""
    if a.is_zero():
        return pair.J.zero(a.ring)
    return a.scale(pair.T(a, c)) - pair.crossp(pair.sharp(a), c)


def d_operator(pair, x, y, z):
    """D_{x,y} z = Q_{x+z} y - Q_x y - Q_z y, for x, z in J and y in J'."""
    return q_operator(pair, x + z, y) - q_operator(pair, x, y) - q_operator(pair, z, y)


# -- generic identity checking --------------------------------------------


def _coerce_coords(value, S):
    if isinstance(value, ModuleElement):
        return value.coords
    return (value,)


def _witness(diff_coords, S, base, seed=0, tries=200):
    """A small-integer assignment separating the two sides, if any."""
    names = S.names
    rng = random.Random(seed)
    candidates = itertools.chain(
        [dict.fromkeys(names, 1)],
        ({n: rng.randint(-3, 3) for n in names} for _ in range(tries)),
    )
    for asn in candidates:
        vals = {n: base(v) for n, v in asn.items()}
        evaluated = [S.evaluate(d.data, vals, base) for d in diff_coords]
        if any(not v.is_zero() for v in evaluated):
            return asn
    return None


def _record(report, name, lhs, rhs, S, base):
    lc = _coerce_coords(lhs, S)
    rc = _coerce_coords(rhs, S)
    diff = [a - b for a, b in zip(lc, rc)]
    if all(d.is_zero() for d in diff):
        report.add(name, True)
        return
    asn = _witness(diff, S, base)
    detail = "sides differ generically"
    if asn is not None:
        shown = ", ".join(f"{k}={v}" for k, v in sorted(asn.items()))
        detail = f"witness {shown}"
    report.add(name, False, detail)


# -- verification suites ---------------------------------------------------


def check_axioms(pair):
    """The four defining axioms, in both orientations."""
    report = CheckReport(f"cubic norm pair axioms [{pair.name}]")
    for view, side in ((pair, "J"), (pair.swapped(), "J'")):
        S, (a, b, c) = generic_elements(
            [view.J, view.J, view.Jp], ("a", "b", "c"), base=view.ring
        )
        base = view.ring
        na = view.norm(a)
        asharp = view.sharp(a)
        _record(
            report,
            f"{side} (1) T(a, b^#) = N^(1,2)(a, b)",
            view.T(a, view.sharp(b)),
            view.n12(a, b).coords[0],
            S,
            base,
        )
        _record(
            report,
            f"{side} (2) (a^#)^#' = N(a) a",
            view.sharpp(asharp),
            a.scale(na),
            S,
            base,
        )
        _record(
            report,
            f"{side} (3) (a^# x' c) x a = N(a) c + T(a,c) a^#",
            view.cross(view.crossp(asharp, c), a),
            c.scale(na) + asharp.scale(view.T(a, c)),
            S,
            base,
        )
        _record(
            report,
            f"{side} (4) N(Q_a c) = N(a)^2 N'(c)",
            view.norm(q_operator(view, a, c)),
            na * na * view.normp(c),
            S,
            base,
        )
    return report


def check_basic_properties(pair):
    """The nine derived identities that follow from the axioms."""
    report = CheckReport(f"basic properties [{pair.name}]")
    for view, side in ((pair, "J"), (pair.swapped(), "J'")):
        S, (a, b, c) = generic_elements(
            [view.J, view.J, view.J], ("a", "b", "c"),
            base=view.ring, extra=("s",),
        )
        base = view.ring
        s = S.var("s")
        na, nb = view.norm(a), view.norm(b)
        asharp, bsharp = view.sharp(a), view.sharp(b)
        checks = [
            ("(1) (s a)^# = s^2 a^#", view.sharp(a.scale(s)), asharp.scale(s * s)),
            ("(2) N(s a) = s^3 N(a)", view.norm(a.scale(s)), s * s * s * na),
            (
                "(3) T(a x b, c) = T(a, b x c)",
                view.Tp(view.cross(a, b), c),
                view.T(a, view.cross(b, c)),
            ),
            (
                "(4) (a+b)^# = a^# + a x b + b^#",
                view.sharp(a + b),
                asharp + view.cross(a, b) + bsharp,
            ),
            (
                "(5) N(a+b) = N(a) + T(a^#,b) + T(a,b^#) + N(b)",
                view.norm(a + b),
                na + view.Tp(asharp, b) + view.T(a, bsharp) + nb,
            ),
            ("(6) T(a, a^#) = 3 N(a)", view.T(a, asharp), na.ring(3) * na),
            ("(7) a^## = N(a) a", view.sharpp(asharp), a.scale(na)),
            (
                "(8) a^# x (a x b) = N(a) b + T(a^#,b) a",
                view.crossp(asharp, view.cross(a, b)),
                b.scale(na) + a.scale(view.Tp(asharp, b)),
            ),
            (
                "(9) a^# x b^# + (a x b)^# = T(a^#,b) b + T(a,b^#) a",
                view.crossp(asharp, bsharp) + view.sharpp(view.cross(a, b)),
                b.scale(view.Tp(asharp, b)) + a.scale(view.T(a, bsharp)),
            ),
        ]
        for name, lhs, rhs in checks:
            _record(report, f"{side} {name}", lhs, rhs, S, base)
    return report


def check_sharp_endo(pair):
    """(Q_j k)^# = Q_{j^#} k^#, in both orientations."""
    report = CheckReport(f"sharp of Q [{pair.name}]")
    for view, side in ((pair, "J"), (pair.swapped(), "J'")):
        S, (j, k) = generic_elements(
            [view.J, view.Jp], ("j", "k"), base=view.ring
        )
        _record(
            report,
            f"{side} (Q_j k)^# = Q_(j^#) k^#",
            view.sharp(q_operator(view, j, k)),
            q_operator(view.swapped(), view.sharp(j), view.sharpp(k)),
            S,
            view.ring,
        )
    return report


def is_well_behaved(pair):
    """Whether N(v^#) = N(v)^2 holds generically on both sides.

    Returns ``(flag, witness)`` where the witness, present on failure when
    one exists, assigns small integers to the generic coordinates.
    """
    for view, side in ((pair, "J"), (pair.swapped(), "J'")):
        S, (v,) = generic_elements([view.J], ("v",), base=view.ring)
        nv = view.norm(v)
        diff = view.normp(view.sharp(v)) - nv * nv
        if not diff.is_zero():
            return False, _witness([diff], S, view.ring)
    return True, None


def check_lin_nvsharp(pair):
    """N(v x w) = -N(v)N(w) + T(v,w^#) T(w,v^#), for well-behaved pairs."""
    flag, _ = is_well_behaved(pair)
    if not flag:
        raise PreconditionViolated(f"{pair.name} is not well behaved")
    report = CheckReport(f"norm of cross [{pair.name}]")
    for view, side in ((pair, "J"), (pair.swapped(), "J'")):
        S, (v, w) = generic_elements([view.J, view.J], ("v", "w"), base=view.ring)
        _record(
            report,
            f"{side} N(v x w) = -N(v)N(w) + T(v,w^#)T(w,v^#)",
            view.normp(view.cross(v, w)),
            -(view.norm(v) * view.norm(w))
            + view.T(v, view.sharp(w)) * view.T(w, view.sharp(v)),
            S,
            view.ring,
        )
    return report


def jordan_pair_axioms(pair):
    """JP1-JP3 for (J, J', Q) and for (R, R) with Q_x y = x^2 y."""
    report = CheckReport(f"quadratic Jordan pair axioms [{pair.name}]")
    for view, side in ((pair, "(J,J')"), (pair.swapped(), "(J',J)")):
        S, (a, b, c, z) = generic_elements(
            [view.J, view.Jp, view.Jp, view.J], ("a", "b", "c", "z"),
            base=view.ring,
        )
        base = view.ring
        op = view.swapped()
        qa = lambda x: q_operator(view, a, x)
        qb = lambda x: q_operator(op, b, x)
        _record(
            report,
            f"{side} JP1 Q_a D'_(b,a) = D_(a,b) Q_a",
            qa(d_operator(op, b, a, c)),
            d_operator(view, a, b, qa(c)),
            S,
            base,
        )
        _record(
            report,
            f"{side} JP2 D_(Q_a b, b) = D_(a, Q'_b a)",
            d_operator(view, qa(b), b, z),
            d_operator(view, a, qb(a), z),
            S,
            base,
        )
        _record(
            report,
            f"{side} JP3 Q_a Q'_b Q_a = Q_(Q_a b)",
            qa(qb(qa(c))),
            q_operator(view, qa(b), c),
            S,
            base,
        )
    S = PolyRing(pair.ring, ("a", "b", "c"))
    a, b, c = S.var("a"), S.var("b"), S.var("c")
    two = S(2)
    q = lambda x, y: x * x * y
    d = lambda x, y, z: two * x * z * y
    scalar_checks = [
        ("(R,R) JP1", q(a, d(b, a, c)), d(a, b, q(a, c))),
        ("(R,R) JP2", d(q(a, b), b, c), d(a, q(b, a), c)),
        ("(R,R) JP3", q(a, q(b, q(a, c))), q(q(a, b), c)),
    ]
    for name, lhs, rhs in scalar_checks:
        _record(report, name, lhs, rhs, S, pair.ring)
    return report


# -- cubic norm structures and isotopes ------------------------------------


class CubicNormStructure:
    """A module with a cubic norm, a sharp into itself, a symmetric trace
    form, and a distinguished unit element."""

    def __init__(self, name, module, N, sharp, T, unit):
        self.name = name
        self.module = module
        self.N = N
        self.sharp = sharp
        self.T = T
        self.unit = unit
        self.cross = polarize(sharp)
        self.n12 = linearize(N, (1, 2))

    @property
    def ring(self):
        return self.module.ring

    def norm(self, x):
        return self.N(x).coords[0]

    def check_axioms(self):
        report = CheckReport(f"cubic norm structure [{self.name}]")
        S, (x, y) = generic_elements(
            [self.module, self.module], ("x", "y"), base=self.ring
        )
        base = self.ring
        one = self.module.element([S(c) for c in self.unit.coords], S)
        _record(
            report,
            "x^## = N(x) x",
            self.sharp(self.sharp(x)),
            x.scale(self.norm(x)),
            S,
            base,
        )
        _record(
            report,
            "T(x, y^#) = N^(1,2)(x, y)",
            self.T(x, self.sharp(y)),
            self.n12(x, y).coords[0],
            S,
            base,
        )
        _record(report, "N(1) = 1", self.norm(one), S(1), S, base)
        _record(report, "1^# = 1", self.sharp(one), one, S, base)
        _record(
            report,
            "T(1,y) 1 - 1 x y = y",
            one.scale(self.T(one, y)) - self.cross(one, y),
            y,
            S,
            base,
        )
        return report


def isotope(pair, a):
    """The cubic norm structure on J attached to a with N(a) invertible.

    The new operators are N'(x) = N(x)/N(a), x^#' = Q_a x^# / N(a), and
    T'(x,y) = T(x, Q_{a^#} y) / N(a)^2, with a as the unit.  The identity
    Q_{a^#} Q_a b = N(a)^2 b and the unit laws are re-verified; the report
    is attached as ``structure.report``.
    """
    ring = pair.ring
    na = pair.norm(a)
    inv = El(ring, ring.invert(na.data))
    inv2 = inv * inv
    asharp = pair.sharp(a)
    swapped = pair.swapped()

    def new_norm(x):
        target = scalar_module(ring, "r")
        return target.element([pair.norm(x) * x.ring(inv)], x.ring)

    def new_sharp(x):
        return q_operator(pair, pair.lift(a, x.ring), pair.sharp(x)).scale(inv)

    N1 = law_from_function(pair.J, scalar_module(ring, "r"), 3, new_norm)
    sharp1 = law_from_function(pair.J, pair.J, 2, new_sharp)
    gram = []
    for e in pair.J.basis():
        row = []
        for f in pair.J.basis():
            row.append(pair.T(e, q_operator(swapped, asharp, f)) * inv2)
        gram.append(row)
    T1 = BilinearForm(pair.J, pair.J, gram)
    structure = CubicNormStructure(
        f"{pair.name}-isotope", pair.J, N1, sharp1, T1, a
    )
    report = structure.check_axioms()
    S, (b,) = generic_elements([pair.Jp], ("b",), base=ring)
    _record(
        report,
        "Q_(a^#) Q_a b = N(a)^2 b",
        q_operator(swapped, pair.lift(asharp, S), q_operator(pair, pair.lift(a, S), b)),
        b.scale(na * na),
        S,
        ring,
    )
    structure.report = report
    if not report.ok:
        raise AxiomFailure(
            f"isotope of {pair.name} failed verification:\n{report}"
        )
    return structure


# -- builtin catalog -------------------------------------------------------


def rank_one_pair(name, ring, nj, sharpj, nk, sharpk, t_coeff):
    """A pair with rank-1 modules and one-variable operator polynomials."""
    J = FreeModule(ring, ("i",))
    Jp = FreeModule(ring, ("j",))
    R1 = scalar_module(ring)
    N = PolyLaw(J, R1, 3, [nj])
    sharp = PolyLaw(J, Jp, 2, [sharpj])
    Np = PolyLaw(Jp, R1, 3, [nk])
    sharpp = PolyLaw(Jp, J, 2, [sharpk])
    T = BilinearForm(J, Jp, [[t_coeff]])
    return CubicNormPair(name, J, Jp, N, Np, sharp, sharpp, T)


def _mat3_entries(x):
    c = x.coords
    return [[c[0], c[1], c[2]], [c[3], c[4], c[5]], [c[6], c[7], c[8]]]


def _mat3_det(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _mat3_adjugate(m):
    def minor(i, j):
        rows = [r for r in range(3) if r != i]
        cols = [c for c in range(3) if c != j]
        return (
            m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
            - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
        )

    adj = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            sign = 1 if (i + j) % 2 == 0 else -1
            cof = minor(j, i)
            adj[i][j] = cof if sign == 1 else -cof
    return adj


def _mat3_pair(ring):
    labels = tuple(f"x{i}{j}" for i in range(1, 4) for j in range(1, 4))
    M = FreeModule(ring, labels)
    R1 = scalar_module(ring)

    def det_law(x):
        return R1.element([_mat3_det(_mat3_entries(x))], x.ring)

    def adj_law(x):
        adj = _mat3_adjugate(_mat3_entries(x))
        return M.element([adj[i][j] for i in range(3) for j in range(3)], x.ring)

    N = law_from_function(M, R1, 3, det_law)
    sharp = law_from_function(M, M, 2, adj_law)
    # T(x, y) = tr(xy): pairs the (i,j) entry with the (j,i) entry.
    gram = [[ring(0)] * 9 for _ in range(9)]
    for i in range(3):
        for j in range(3):
            gram[3 * i + j][3 * j + i] = ring(1)
    T = BilinearForm(M, M, gram)
    return CubicNormPair("mat3-det", M, M, N, N, sharp, sharp, T)


_BUILTIN_CACHE = {}


def builtin_instance(tag, ring=None, validate=True):
    """A named instance from the catalog, validated against the axioms.

    Tags: ``trivial``, ``ideal``, ``mat3-det``, ``mutant`` (a deliberately
    broken negative control that is never validated), and
    ``split-of-hermitian:<tag>`` for the split pair of a hermitian
    structure.
    """
    if ring is None:
        ring = QQ if tag == "mat3-det" else ZZ
    key = (tag, repr(ring.spec()))
    if key in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[key]
    if tag == "trivial":
        pair = rank_one_pair("trivial", ring, 0, 0, 0, 0, 0)
    elif tag == "ideal":
        pair = rank_one_pair("ideal", ring, "i^3", "i^2", "j^3", "j^2", 3)
    elif tag == "mutant":
        # The ideal pair with N scaled on one side only.  This deliberately
        # violates the pair axioms and well-behavedness; it exists so the
        # operator suites have a negative control, and is never validated.
        pair = rank_one_pair("mutant", ring, "2*i^3", "i^2", "j^3", "j^2", 3)
        validate = False
    elif tag == "mat3-det":
        pair = _mat3_pair(ring)
    elif isinstance(tag, str) and tag.startswith("split-of-hermitian"):
        from . import herm

        _, _, sub = tag.partition(":")
        pair = herm.split_pair(herm.builtin_structure(sub or "herm-ideal", ring))
    else:
        raise UnknownTag(f"unknown builtin cubic norm pair {tag!r}")
    if validate:
        report = check_axioms(pair)
        if not report.ok:
            raise AxiomFailure(
                f"builtin instance {tag!r} failed validation:\n{report}"
            )
    _BUILTIN_CACHE[key] = pair
    return pair
