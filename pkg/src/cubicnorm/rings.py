"""Exact arithmetic over a closed catalog of commutative unital rings.

The catalog: integers, rationals, integers mod n, multivariate polynomial
rings (optionally truncated per variable), and quadratic etale extensions
R[t]/(t^2 - t + alpha).  Every element is kept in a canonical normal form,
so equality of elements is representational equality.

Rings operate on raw payloads (ints, Fractions, dicts, pairs); the thin
:class:`El` wrapper carries the ring alongside the payload and provides
operator sugar.  All values are immutable after construction.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from .errors import (
    MissingAssignment,
    NameClash,
    NotAUnit,
    ParseError,
    SpecMismatch,
)


class El:
    """A ring element: a payload tagged with its ring."""

    __slots__ = ("ring", "data")

    def __init__(self, ring, data):
        self.ring = ring
        self.data = data

    def _coerce(self, other):
        if isinstance(other, El):
            if other.ring == self.ring:
                return other.data
            return self.ring.embed(other.ring, other.data)
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, Fraction):
            return self.ring.from_fraction(other)
        raise SpecMismatch(f"cannot coerce {other!r} into {self.ring}")

    def __add__(self, other):
        return El(self.ring, self.ring.add(self.data, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return El(self.ring, self.ring.sub(self.data, self._coerce(other)))

    def __rsub__(self, other):
        return El(self.ring, self.ring.sub(self._coerce(other), self.data))

    def __mul__(self, other):
        return El(self.ring, self.ring.mul(self.data, self._coerce(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return El(self.ring, self.ring.neg(self.data))

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = self.ring.one()
        base = self.data
        for _ in range(k):
            out = self.ring.mul(out, base)
        return El(self.ring, out)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = El(self.ring, self._coerce(other))
            except SpecMismatch:
                return NotImplemented
        if not isinstance(other, El):
            return NotImplemented
        return self.ring == other.ring and self.data == other.data

    def __hash__(self):
        data = self.data
        if isinstance(data, dict):
            data = frozenset(data.items())
        return hash((self.ring, data))

    def is_zero(self):
        return self.data == self.ring.zero()

    def __repr__(self):
        return f"El({self.ring}, {self.ring.to_str(self.data)})"

    def __str__(self):
        return self.ring.to_str(self.data)


class Ring:
    """Abstract commutative unital ring operating on raw payloads."""

    def elem(self, data):
        return El(self, data)

    def __call__(self, x):
        if isinstance(x, El):
            if x.ring is self or x.ring == self:
                return x
            return El(self, self.embed(x.ring, x.data))
        if isinstance(x, int):
            return El(self, self.from_int(x))
        if isinstance(x, Fraction):
            return El(self, self.from_fraction(x))
        if isinstance(x, str):
            return El(self, self.parse(x))
        raise SpecMismatch(f"cannot coerce {x!r} into {self}")

    # -- payload-level interface ------------------------------------------
    def zero(self):
        try:
            return self._zero_payload
        except AttributeError:
            self._zero_payload = self.from_int(0)
            return self._zero_payload

    def one(self):
        try:
            return self._one_payload
        except AttributeError:
            self._one_payload = self.from_int(1)
            return self._one_payload

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def from_fraction(self, q):
        if q.denominator == 1:
            return self.from_int(q.numerator)
        inv = self.try_invert(self.from_int(q.denominator))
        if inv is None:
            raise NotAUnit(f"{q.denominator} is not invertible in {self}")
        return self.mul(self.from_int(q.numerator), inv)

    def embed(self, source, data):
        """Embed a payload from ``source`` into this ring, or raise."""
        if source == self:
            return data
        raise SpecMismatch(f"no embedding of {source} into {self}")

    def try_invert(self, a):
        """Return the inverse payload, or None."""
        raise NotImplementedError

    def invert(self, a):
        inv = self.try_invert(a)
        if inv is None:
            raise NotAUnit(f"{self.to_str(a)} is not a unit in {self}")
        return inv

    def is_unit(self, a):
        return self.try_invert(a) is not None

    def parse(self, text):
        """Parse an element from a string (constants only by default)."""
        return _parse_scalar(self, text)

    def sample(self, rng):
        """A deterministic small sample element, for witness searches."""
        return self.from_int(rng.randint(-3, 3))

    def spec(self):
        """A JSON-friendly description of the ring."""
        raise NotImplementedError


class IntegerRing(Ring):
    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def try_invert(self, a):
        return a if a in (1, -1) else None

    def to_str(self, a):
        return str(a)

    def spec(self):
        return {"type": "integers"}


class RationalRing(Ring):
    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    _small = {n: Fraction(n) for n in range(-16, 17)}

    def from_int(self, n):
        f = self._small.get(n)
        return f if f is not None else Fraction(n)

    def from_fraction(self, q):
        return q

    def embed(self, source, data):
        if source == self:
            return data
        if isinstance(source, IntegerRing):
            f = self._small.get(data)
            return f if f is not None else Fraction(data)
        raise SpecMismatch(f"no embedding of {source} into QQ")

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def try_invert(self, a):
        return 1 / a if a else None

    def to_str(self, a):
        return str(a)

    def spec(self):
        return {"type": "rationals"}


class ModRing(Ring):
    """Integers modulo n, n >= 2 (n may be composite)."""

    def __init__(self, n):
        if not isinstance(n, int) or n < 2:
            raise ValueError("modulus must be an integer >= 2")
        self.n = n

    def __eq__(self, other):
        return isinstance(other, ModRing) and other.n == self.n

    def __hash__(self):
        return hash(("Zmod", self.n))

    def __repr__(self):
        return f"Z/{self.n}"

    def from_int(self, k):
        return k % self.n

    def embed(self, source, data):
        if source == self:
            return data
        if isinstance(source, IntegerRing):
            return data % self.n
        raise SpecMismatch(f"no embedding of {source} into {self}")

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def try_invert(self, a):
        try:
            return pow(a, -1, self.n)
        except ValueError:
            return None

    def to_str(self, a):
        return str(a)

    def spec(self):
        return {"type": "mod", "n": self.n}


ZZ = IntegerRing()
QQ = RationalRing()


class PolyRing(Ring):
    """Sparse multivariate polynomials over a base ring.

    ``caps[i]`` bounds the retained exponent of variable i: monomials with
    any exponent exceeding its cap are dropped (quotient by x^(cap+1)).
    A cap of None means no truncation.

    Payload: dict mapping exponent tuples to nonzero base payloads.
    """

    def __init__(self, base, names, caps=None):
        if len(set(names)) != len(names):
            raise NameClash(f"duplicate variable names in {names}")
        clash = set(names) & set(all_var_names(base))
        if clash:
            raise NameClash(f"variables {sorted(clash)} already used in {base}")
        self.base = base
        self.names = tuple(names)
        if caps is None:
            caps = (None,) * len(self.names)
        self.caps = tuple(caps)
        if len(self.caps) != len(self.names):
            raise ValueError("caps length must match names length")

    def __eq__(self, other):
        if other is self:
            return True
        return (
            isinstance(other, PolyRing)
            and other.names == self.names
            and other.caps == self.caps
            and other.base == self.base
        )

    def __hash__(self):
        return hash(("Poly", self.base, self.names, self.caps))

    def __repr__(self):
        vs = ",".join(self.names)
        if any(c is not None for c in self.caps):
            vs = ",".join(
                n if c is None else f"{n}<={c}"
                for n, c in zip(self.names, self.caps)
            )
        return f"{self.base}[{vs}]"

    # -- construction -----------------------------------------------------
    def _trim(self, d):
        caps = self.caps
        bad = [
            e
            for e in d
            if any(c is not None and k > c for k, c in zip(e, caps))
        ]
        for e in bad:
            del d[e]
        return d

    def from_int(self, n):
        c = self.base.from_int(n)
        if c == self.base.zero():
            return {}
        return {(0,) * len(self.names): c}

    def from_fraction(self, q):
        c = self.base.from_fraction(q)
        if c == self.base.zero():
            return {}
        return {(0,) * len(self.names): c}

    def lift(self, c):
        """Constant polynomial from a base payload."""
        if c == self.base.zero():
            return {}
        return {(0,) * len(self.names): c}

    def var(self, name):
        i = self.names.index(name)
        e = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return El(self, self._trim({e: self.base.one()}))

    def gens(self):
        return [self.var(n) for n in self.names]

    def embed(self, source, data):
        if source == self:
            return data
        if isinstance(source, IntegerRing):
            return self.from_int(data)
        try:
            return self.lift(self.base.embed(source, data))
        except SpecMismatch:
            pass
        if isinstance(source, PolyRing) and set(source.names) <= set(
            self.names
        ):
            # same variables (possibly fewer) over an embeddable base
            idx = [self.names.index(n) for n in source.names]
            out = {}
            zero = (0,) * len(self.names)
            for e, c in data.items():
                ne = list(zero)
                for j, k in zip(idx, e):
                    ne[j] = k
                cc = self.base.embed(source.base, c)
                if cc != self.base.zero():
                    out[tuple(ne)] = cc
            return self._trim(out)
        raise SpecMismatch(f"no embedding of {source} into {self}")

    # -- arithmetic -------------------------------------------------------
    def add(self, a, b):
        out = dict(a)
        base = self.base
        zero = base.zero()
        for e, c in b.items():
            s = base.add(out.get(e, zero), c)
            if s == zero:
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def neg(self, a):
        base = self.base
        return {e: base.neg(c) for e, c in a.items()}

    def mul(self, a, b):
        if len(a) > len(b):
            a, b = b, a
        base = self.base
        zero = base.zero()
        caps = self.caps
        trunc = any(c is not None for c in caps)
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if trunc and any(
                    c is not None and k > c for k, c in zip(e, caps)
                ):
                    continue
                p = base.mul(ca, cb)
                s = base.add(out.get(e, zero), p)
                if s == zero:
                    out.pop(e, None)
                else:
                    out[e] = s
        return out

    def try_invert(self, a):
        zexp = (0,) * len(self.names)
        c0 = a.get(zexp, self.base.zero())
        c0inv = self.base.try_invert(c0)
        if c0inv is None:
            return None
        rest = {e: c for e, c in a.items() if e != zexp}
        if not rest:
            return self.lift(c0inv)
        if any(c is None for c in self.caps):
            # nonconstant elements are units only in fully truncated rings
            return None
        # a = c0 (1 + n) with n nilpotent: invert by a finite Neumann series
        n = self.mul(self.lift(c0inv), rest)
        bound = sum(c for c in self.caps) * max(
            1, len(self.names)
        )  # safe upper bound on the nilpotency index
        term = self.one()
        acc = self.one()
        for _ in range(bound):
            term = self.neg(self.mul(term, n))
            if not term:
                break
            acc = self.add(acc, term)
        return self.mul(self.lift(c0inv), acc)

    # -- structure --------------------------------------------------------
    def coeff(self, a, name, k):
        """Coefficient of name**k, as a payload of this ring (degree 0 in name)."""
        i = self.names.index(name)
        out = {}
        for e, c in a.items():
            if e[i] == k:
                ne = e[:i] + (0,) + e[i + 1 :]
                out[ne] = c
        return out

    def max_degree(self, a, name):
        i = self.names.index(name)
        return max((e[i] for e in a), default=0)

    def evaluate(self, a, assignment, target):
        """Evaluation homomorphism into ``target``.

        ``assignment`` maps variable names to El values over ``target``.
        Every variable of this ring must be assigned.
        """
        return self.evaluate_many([a], assignment, target)[0]

    def evaluate_many(self, payloads, assignment, target):
        """Evaluate several payloads under one assignment, sharing the
        per-variable power cache."""
        missing = [n for n in self.names if n not in assignment]
        if missing:
            raise MissingAssignment(f"unassigned variables {missing}")
        vals = [target(assignment[n]).data for n in self.names]
        tzero = target.zero()
        iszero = [v == tzero for v in vals]
        # cache powers per variable
        pows = [{0: target.one()} for _ in vals]

        def power(i, k):
            p = pows[i]
            if k not in p:
                p[k] = target.mul(power(i, k - 1), vals[i])
            return p[k]

        results = []
        for a in payloads:
            out = tzero
            for e, c in sorted(a.items()):
                if any(k and iszero[i] for i, k in enumerate(e)):
                    continue
                term = target.embed(self.base, c)
                for i, k in enumerate(e):
                    if k:
                        term = target.mul(term, power(i, k))
                out = target.add(out, term)
            results.append(El(target, out))
        return results

    def to_str(self, a):
        if not a:
            return "0"
        parts = []
        for e in sorted(a, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = a[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}"
                for n, k in zip(self.names, e)
                if k
            )
            cs = self.base.to_str(c)
            if mono:
                if cs == "1":
                    parts.append(mono)
                elif cs == "-1":
                    parts.append(f"-{mono}")
                else:
                    if ("+" in cs[1:]) or ("-" in cs[1:]) or (" " in cs):
                        cs = f"({cs})"
                    parts.append(f"{cs}*{mono}")
            else:
                parts.append(cs)
        s = parts[0]
        for p in parts[1:]:
            s += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return s

    def parse(self, text):
        return _parse_poly(self, text)

    def sample(self, rng):
        out = self.zero()
        for _ in range(rng.randint(0, 2)):
            e = tuple(rng.randint(0, 1) for _ in self.names)
            out = self.add(out, self._trim({e: self.base.sample(rng)}) or {})
        return out

    def spec(self):
        return {
            "type": "poly",
            "base": self.base.spec(),
            "vars": list(self.names),
            "caps": list(self.caps),
        }


class EtaleRing(Ring):
    """Quadratic etale extension base[t]/(t^2 - t + alpha), 1 - 4*alpha a unit.

    Payload: pair (a, b) of base payloads, meaning a + b*t.  Conjugation
    sends t to 1 - t; the norm and trace land in the base ring.
    """

    def __init__(self, base, alpha, name="t"):
        if isinstance(alpha, El):
            alpha = base.embed(alpha.ring, alpha.data) if alpha.ring != base else alpha.data
        elif isinstance(alpha, int):
            alpha = base.from_int(alpha)
        if name in all_var_names(base):
            raise NameClash(f"variable {name!r} already used in {base}")
        disc = base.sub(base.one(), base.mul(base.from_int(4), alpha))
        if not base.is_unit(disc):
            raise NotAUnit(f"1 - 4*alpha = {base.to_str(disc)} is not a unit in {base}")
        self.base = base
        self.alpha = alpha
        self.name = name

    def __eq__(self, other):
        return (
            isinstance(other, EtaleRing)
            and other.base == self.base
            and other.alpha == self.alpha
            and other.name == self.name
        )

    def __hash__(self):
        a = self.alpha
        if isinstance(a, dict):
            a = frozenset(a.items())
        return hash(("Etale", self.base, a, self.name))

    def __repr__(self):
        return f"{self.base}[{self.name}]/({self.name}^2-{self.name}+{self.base.to_str(self.alpha)})"

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero())

    def from_fraction(self, q):
        return (self.base.from_fraction(q), self.base.zero())

    def lift(self, c):
        return (c, self.base.zero())

    def gen(self):
        return El(self, (self.base.zero(), self.base.one()))

    def embed(self, source, data):
        if source == self:
            return data
        if isinstance(source, IntegerRing):
            return self.from_int(data)
        if (
            isinstance(source, EtaleRing)
            and source.name == self.name
        ):
            try:
                a = self.base.embed(source.base, data[0])
                b = self.base.embed(source.base, data[1])
                alpha = self.base.embed(source.base, source.alpha)
                if alpha == self.alpha:
                    return (a, b)
            except SpecMismatch:
                pass
        try:
            return self.lift(self.base.embed(source, data))
        except SpecMismatch:
            raise SpecMismatch(f"no embedding of {source} into {self}")

    def add(self, x, y):
        return (self.base.add(x[0], y[0]), self.base.add(x[1], y[1]))

    def neg(self, x):
        return (self.base.neg(x[0]), self.base.neg(x[1]))

    def mul(self, x, y):
        a, b = x
        c, d = y
        base = self.base
        bd = base.mul(b, d)
        re = base.sub(base.mul(a, c), base.mul(bd, self.alpha))
        im = base.add(base.add(base.mul(a, d), base.mul(b, c)), bd)
        return (re, im)

    def conj(self, x):
        a, b = x
        return (self.base.add(a, b), self.base.neg(b))

    def norm(self, x):
        """x * conj(x), as a base payload."""
        return self.mul(x, self.conj(x))[0]

    def trace(self, x):
        """x + conj(x), as a base payload."""
        return self.base.add(self.base.add(x[0], x[0]), x[1])

    def try_invert(self, x):
        n = self.norm(x)
        ninv = self.base.try_invert(n)
        if ninv is None:
            return None
        return self.mul(self.lift(ninv), self.conj(x))

    def to_str(self, x):
        a, b = x
        base = self.base
        if b == base.zero():
            return base.to_str(a)
        bs = base.to_str(b)
        if ("+" in bs[1:]) or ("-" in bs[1:]) or (" " in bs):
            bs = f"({bs})"
        ts = self.name if bs == "1" else (f"-{self.name}" if bs == "-1" else f"{bs}*{self.name}")
        if a == base.zero():
            return ts
        as_ = base.to_str(a)
        return f"{as_} - {ts[1:]}" if ts.startswith("-") else f"{as_} + {ts}"

    def parse(self, text):
        return _parse_poly(self, text)

    def sample(self, rng):
        return (self.base.sample(rng), self.base.sample(rng))

    def spec(self):
        alpha = self.alpha
        return {
            "type": "etale",
            "base": self.base.spec(),
            "alpha": self.base.to_str(alpha),
            "var": self.name,
        }


def all_var_names(ring):
    """Every variable name used anywhere in the ring tower."""
    names = []
    while True:
        if isinstance(ring, PolyRing):
            names.extend(ring.names)
            ring = ring.base
        elif isinstance(ring, EtaleRing):
            names.append(ring.name)
            ring = ring.base
        else:
            return names


def extend_scalars(ring, fresh_vars, truncation=None):
    """Polynomial scalar extension with fresh indeterminates.

    ``truncation`` maps variable names to maximum retained degree; a
    variable with bound d satisfies x^(d+1) = 0.  Returns the extension;
    elements embed via ``extension(element)``.
    """
    fresh_vars = tuple(fresh_vars)
    caps = tuple(
        (truncation or {}).get(n) for n in fresh_vars
    )
    return PolyRing(ring, fresh_vars, caps)


def evaluate_hom(elem, assignment, target):
    """Apply the evaluation homomorphism determined by ``assignment``.

    ``elem`` is an El over a PolyRing; assignment maps each variable name
    to a value coercible into ``target``.
    """
    ring = elem.ring
    if not isinstance(ring, PolyRing):
        return target(elem)
    return ring.evaluate(elem.data, assignment, target)


# -- polynomial / scalar parsing ------------------------------------------


def _parse_scalar(ring, text):
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc}") from None
    return _eval_node(ring, node, text).data


def _parse_poly(ring, text):
    try:
        node = ast.parse(text.strip().replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc}") from None
    return _eval_node(ring, node, text).data


def _eval_node(ring, node, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return ring(node.value)
        raise ParseError(f"bad constant {node.value!r} in {text!r}")
    if isinstance(node, ast.Name):
        r = ring
        while True:
            if isinstance(r, PolyRing) and node.id in r.names:
                return ring(r.var(node.id))
            if isinstance(r, EtaleRing) and node.id == r.name:
                return ring(r.gen())
            if isinstance(r, (PolyRing, EtaleRing)):
                r = r.base
            else:
                raise ParseError(f"unknown variable {node.id!r} in {text!r}")
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            if not (
                isinstance(node.right, ast.Constant)
                and isinstance(node.right.value, int)
                and node.right.value >= 0
            ):
                raise ParseError(f"bad exponent in {text!r}")
            return _eval_node(ring, node.left, text) ** node.right.value
        left = _eval_node(ring, node.left, text)
        right = _eval_node(ring, node.right, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            inv = right.ring.try_invert(right.data)
            if inv is None:
                raise ParseError(f"division by non-unit in {text!r}")
            return left * El(right.ring, inv)
        raise ParseError(f"unsupported operator in {text!r}")
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return -_eval_node(ring, node.operand, text)
        if isinstance(node.op, ast.UAdd):
            return _eval_node(ring, node.operand, text)
    raise ParseError(f"unsupported syntax in {text!r}")


def ring_from_spec(spec):
    """Rebuild a ring from its JSON description (see ``Ring.spec``)."""
    kind = spec.get("type")
    if kind == "integers":
        return ZZ
    if kind == "rationals":
        return QQ
    if kind == "mod":
        return ModRing(spec["n"])
    if kind == "poly":
        base = ring_from_spec(spec["base"])
        return PolyRing(base, tuple(spec["vars"]), tuple(spec.get("caps") or [None] * len(spec["vars"])))
    if kind == "etale":
        base = ring_from_spec(spec["base"])
        alpha = base.parse(str(spec["alpha"]))
        return EtaleRing(base, El(base, alpha), spec.get("var", "t"))
    raise ParseError(f"unknown ring spec {spec!r}")
