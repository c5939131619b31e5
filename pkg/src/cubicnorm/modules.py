"""Free modules with chosen bases and homogeneous polynomial laws.

A ``PolyLaw`` stores a homogeneous polynomial map between free modules
intensionally, as one coordinate polynomial per target coordinate in the
generic coordinates of its source(s).  Identity checking is canonical-form
equality of those polynomials, which certifies the identity over every
scalar extension of the base ring.
"""

from __future__ import annotations

import itertools
import random

from .errors import (
    BadSplit,
    ExtensionMismatch,
    NotQuadratic,
    ShapeMismatch,
)
from .rings import El, PolyRing, extend_scalars


class FreeModule:
    """A free module of finite rank with a fixed ordered basis."""

    def __init__(self, ring, basis_labels):
        self.ring = ring
        self.basis_labels = tuple(basis_labels)
        self.rank = len(self.basis_labels)

    def __eq__(self, other):
        return (
            isinstance(other, FreeModule)
            and other.ring == self.ring
            and other.basis_labels == self.basis_labels
        )

    def __hash__(self):
        return hash((self.ring, self.basis_labels))

    def __repr__(self):
        return f"FreeModule({self.ring}, {list(self.basis_labels)})"

    def element(self, coords, ring=None):
        ring = ring or self.ring
        coords = tuple(ring(c) for c in coords)
        if len(coords) != self.rank:
            raise ExtensionMismatch(
                f"expected {self.rank} coordinates, got {len(coords)}"
            )
        return ModuleElement(self, coords, ring)

    def zero(self, ring=None):
        ring = ring or self.ring
        return self.element((ring(0),) * self.rank, ring)

    def basis_vector(self, i, ring=None):
        ring = ring or self.ring
        coords = [ring(0)] * self.rank
        coords[i] = ring(1)
        return self.element(coords, ring)

    def basis(self, ring=None):
        return [self.basis_vector(i, ring) for i in range(self.rank)]


class ModuleElement:
    """A coordinate vector over the module ring or one of its extensions."""

    __slots__ = ("module", "coords", "ring")

    def __init__(self, module, coords, ring):
        self.module = module
        self.coords = tuple(coords)
        self.ring = ring

    def __add__(self, other):
        if other.module != self.module:
            raise ExtensionMismatch("elements of different modules")
        return ModuleElement(
            self.module,
            tuple(a + b for a, b in zip(self.coords, other.coords)),
            self.ring,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ModuleElement(
            self.module, tuple(-a for a in self.coords), self.ring
        )

    def scale(self, scalar):
        scalar = self.ring(scalar)
        return ModuleElement(
            self.module, tuple(scalar * a for a in self.coords), self.ring
        )

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return (
            self.module == other.module
            and self.ring == other.ring
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.module, self.ring, self.coords))

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def __repr__(self):
        inner = ", ".join(str(c) for c in self.coords)
        return f"[{inner}]"


def arg_var_names(sources):
    """Generic coordinate names, one block per argument.

    A single argument uses the source's basis labels verbatim; with several
    arguments, block k >= 1 appends ``_k`` to keep names distinct.
    """
    if len(sources) == 1:
        return (tuple(sources[0].basis_labels),)
    blocks = []
    for k, src in enumerate(sources):
        suffix = "" if k == 0 else f"_{k + 1}"
        blocks.append(tuple(f"{lbl}{suffix}" for lbl in src.basis_labels))
    return tuple(blocks)


class PolyLaw:
    """A homogeneous polynomial map between free modules.

    ``sources`` is a tuple of FreeModules (usually one); ``degrees`` gives
    the homogeneity degree in each argument.  ``coord_polys`` holds one El
    over ``PolyRing(base, flattened generic names)`` per target coordinate.
    """

    def __init__(self, sources, target, degrees, coord_polys, var_blocks=None):
        if isinstance(sources, FreeModule):
            sources = (sources,)
        if isinstance(degrees, int):
            degrees = (degrees,)
        self.sources = tuple(sources)
        self.target = target
        self.degrees = tuple(degrees)
        self.var_blocks = (
            tuple(tuple(b) for b in var_blocks)
            if var_blocks is not None
            else arg_var_names(self.sources)
        )
        flat = tuple(itertools.chain.from_iterable(self.var_blocks))
        self.poly_ring = PolyRing(self.base_ring, flat)
        self.coord_polys = tuple(self.poly_ring(p) for p in coord_polys)
        if len(self.coord_polys) != target.rank:
            raise ShapeMismatch("one coordinate polynomial per target basis vector")
        for p in self.coord_polys:
            self._check_homogeneous(p)

    @property
    def base_ring(self):
        return self.sources[0].ring

    @property
    def degree(self):
        return sum(self.degrees)

    def _check_homogeneous(self, p):
        offsets = []
        pos = 0
        for b in self.var_blocks:
            offsets.append((pos, pos + len(b)))
            pos += len(b)
        for e in p.data:
            for (lo, hi), d in zip(offsets, self.degrees):
                if sum(e[lo:hi]) != d:
                    raise ShapeMismatch(
                        f"{self.poly_ring.to_str(p.data)} is not homogeneous "
                        f"of degrees {self.degrees}"
                    )

    def __call__(self, *args):
        return self.apply(*args)

    def apply(self, *args):
        if len(args) != len(self.sources):
            raise ShapeMismatch(
                f"law takes {len(self.sources)} arguments, got {len(args)}"
            )
        ring = args[0].ring
        for a, src in zip(args, self.sources):
            if a.module != src:
                raise ExtensionMismatch("argument from the wrong module")
            if a.ring != ring:
                raise ExtensionMismatch("arguments over different extensions")
        assignment = {}
        for block, a in zip(self.var_blocks, args):
            for name, c in zip(block, a.coords):
                assignment[name] = c
        coords = self.poly_ring.evaluate_many(
            [p.data for p in self.coord_polys], assignment, ring
        )
        return self.target.element(coords, ring)

    def rename(self, var_blocks):
        """The same law written in different generic variable names."""
        var_blocks = tuple(tuple(b) for b in var_blocks)
        new_flat = tuple(itertools.chain.from_iterable(var_blocks))
        new_ring = PolyRing(self.base_ring, new_flat)
        polys = [
            El(new_ring, dict(p.data)) for p in self.coord_polys
        ]  # same exponent layout, new names
        return PolyLaw(self.sources, self.target, self.degrees, polys, var_blocks)

    def __repr__(self):
        polys = ", ".join(str(p) for p in self.coord_polys)
        return f"PolyLaw[deg {self.degrees}]({polys})"


def scalar_module(ring, label="r"):
    """Rank-1 module used as the target of norms and trace forms."""
    return FreeModule(ring, (label,))


def law_from_function(sources, target, degrees, fn, var_blocks=None):
    """Build a PolyLaw by evaluating ``fn`` on generic elements.

    ``fn`` receives one ModuleElement per source over the generic
    polynomial extension and must return a ModuleElement of ``target``.
    """
    if isinstance(sources, FreeModule):
        sources = (sources,)
    if isinstance(degrees, int):
        degrees = (degrees,)
    blocks = (
        tuple(tuple(b) for b in var_blocks)
        if var_blocks is not None
        else arg_var_names(sources)
    )
    flat = tuple(itertools.chain.from_iterable(blocks))
    S = extend_scalars(sources[0].ring, flat)
    args = [
        src.element([S.var(n) for n in block], S)
        for src, block in zip(sources, blocks)
    ]
    out = fn(*args)
    return PolyLaw(sources, target, degrees, list(out.coords), blocks)


def linearize(f, split):
    """The (k, l)-linearization: f(lam*u + mu*v) = sum lam^k mu^l f^(k,l)(u, v)."""
    if len(f.sources) != 1:
        raise BadSplit("linearize expects a one-argument law")
    (k, l) = split
    if k < 0 or l < 0 or k + l != f.degrees[0]:
        raise BadSplit(f"bad split {split} for degree {f.degrees[0]}")
    return linearize_multi(f, (k, l))


def linearize_multi(f, splits):
    """The full multilinearization f^(a_1,...,a_n) for a composition of deg f."""
    if len(f.sources) != 1:
        raise BadSplit("linearize expects a one-argument law")
    splits = tuple(splits)
    if any(a < 0 for a in splits) or sum(splits) != f.degrees[0]:
        raise BadSplit(f"bad splits {splits} for degree {f.degrees[0]}")
    src = f.sources[0]
    n = len(splits)
    sources = (src,) * n
    blocks = arg_var_names(sources)
    lam_names = tuple(f"lam{i + 1}" for i in range(n))
    flat = tuple(itertools.chain.from_iterable(blocks))
    S = PolyRing(f.base_ring, lam_names + flat)
    lams = [S.var(nm) for nm in lam_names]
    args = [
        src.element([S.var(nm) for nm in block], S)
        for block in blocks
    ]
    total = src.zero(S)
    for lam, a in zip(lams, args):
        total = total + a.scale(lam)
    image = f.apply(total)
    target_ring = PolyRing(f.base_ring, flat)
    polys = []
    for c in image.coords:
        b = c.data
        for i in range(n):
            b = S.coeff(b, lam_names[i], splits[i])
        # strip the lambda block (all-zero exponents there now)
        stripped = {e[n:]: v for e, v in b.items()}
        polys.append(El(target_ring, stripped))
    return PolyLaw(sources, f.target, splits, polys, blocks)


def polarize(q):
    """The symmetric bilinear polarization (u, v) -> q(u+v) - q(u) - q(v)."""
    if q.degrees != (2,):
        raise NotQuadratic(f"polarize expects a quadratic law, got {q.degrees}")
    return linearize(q, (1, 1))


def laws_equal(f, g, seed=0, tries=200):
    """Canonical-form equality of two laws, with a witness on failure.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness maps
    generic variable names to small integers at which the laws differ (or is
    None when no small-integer witness separates them).
    """
    if (
        f.sources != g.sources
        or f.target != g.target
        or f.degrees != g.degrees
    ):
        raise ShapeMismatch("laws of different shapes")
    g = g.rename(f.var_blocks)
    if all(p.data == q.data for p, q in zip(f.coord_polys, g.coord_polys)):
        return True, None
    witness = _witness_search(f, g, seed, tries)
    return False, witness


def _witness_search(f, g, seed, tries):
    base = f.base_ring
    rng = random.Random(seed)
    names = f.poly_ring.names
    candidates = itertools.chain(
        [dict.fromkeys(names, 1)],
        (
            {n: rng.randint(-3, 3) for n in names}
            for _ in range(tries)
        ),
    )
    for asn in candidates:
        vals = {n: base(v) for n, v in asn.items()}
        diff = [
            f.poly_ring.evaluate(p.data, vals, base)
            != f.poly_ring.evaluate(q.data, vals, base)
            for p, q in zip(f.coord_polys, g.coord_polys)
        ]
        if any(diff):
            return asn
    return None


class BilinearForm:
    """A bilinear form given by its Gram matrix over the base ring."""

    def __init__(self, left, right, matrix):
        self.left = left
        self.right = right
        self.matrix = tuple(
            tuple(left.ring(c) for c in row) for row in matrix
        )
        if len(self.matrix) != left.rank or any(
            len(row) != right.rank for row in self.matrix
        ):
            raise ShapeMismatch("matrix shape must be left.rank x right.rank")

    def __call__(self, u, v):
        ring = u.ring
        if v.ring != ring:
            raise ExtensionMismatch("arguments over different extensions")
        try:
            entries = self._entries
        except AttributeError:
            entries = self._entries = [
                (i, j, mij)
                for i, row in enumerate(self.matrix)
                for j, mij in enumerate(row)
                if not mij.is_zero()
            ]
        cache = getattr(self, "_embed_cache", None)
        if cache is None or cache[0] is not ring:
            cache = (ring, {(i, j): ring(mij) for i, j, mij in entries})
            self._embed_cache = cache
        out = ring(0)
        uc, vc = u.coords, v.coords
        for i, j, _ in entries:
            ui, vj = uc[i], vc[j]
            if ui.is_zero() or vj.is_zero():
                continue
            out = out + ui * cache[1][(i, j)] * vj
        return out

    def transpose(self):
        rows = [
            [self.matrix[i][j] for i in range(self.left.rank)]
            for j in range(self.right.rank)
        ]
        return BilinearForm(self.right, self.left, rows)


def generic_elements(modules, prefixes, base=None, extra=(), truncation=None):
    """Fresh generic elements for identity checking.

    Returns ``(S, elements)`` where S is the polynomial extension with one
    fresh variable per coordinate per module (named prefix + label) plus the
    ``extra`` variables, and elements[k] is the generic element of
    modules[k] over S.
    """
    base = base or modules[0].ring
    names = []
    blocks = []
    for prefix, mod in zip(prefixes, modules):
        block = tuple(f"{prefix}{lbl}" for lbl in mod.basis_labels)
        blocks.append(block)
        names.extend(block)
    names.extend(extra)
    S = extend_scalars(base, names, truncation)
    elements = [
        mod.element([S.var(n) for n in block], S)
        for mod, block in zip(modules, blocks)
    ]
    return S, elements
