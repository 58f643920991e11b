"""Hochschild cochains of a finite linear category over a field, and first-order deformations.

An n-cochain assigns to every object string (x0, ..., xn) a multilinear map
𝔟(x1, x0) ⊗ ... ⊗ 𝔟(xn, x_{n-1}) → 𝔟(xn, x0).  Its arguments are read as the
composable string f1∘f2∘...∘fn.  The differential is

    dc(g1, ..., g_{n+1}) = g1·c(g2, ...) + Σ (−1)^i c(..., g_i g_{i+1}, ...) + (−1)^{n+1} c(..., g_n)·g_{n+1}.

A cochain is normalized when it vanishes as soon as one argument is an identity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .lincat import (LinCategory, LinFunctor, LinearDeformation, NatTransform, identity_functor,
                     reduction_functor, validate_deformation, verify_deformation_equivalence)
from .ring import dual_numbers, residue_map

_LETTERS = "abcdefghijklmnop"


class NotACocycle(ValueError):
    def __init__(self, where):
        self.where = where
        super().__init__(f"not a cocycle: dc is nonzero on objects {where[0]} at entry {where[1]}")


class FieldRequired(ValueError):
    pass


def _require_field(cat: LinCategory):
    if cat.ring.dim != 1:
        raise FieldRequired("Hochschild cochains are computed over a field")


# -- layout -------------------------------------------------------------------------


@dataclass(frozen=True)
class Layout:
    """Positions of the blocks of Cⁿ in its flattened coordinate vector."""

    degree: int
    tuples: tuple
    shapes: dict
    offsets: dict
    dim: int


def layout(cat: LinCategory, n: int) -> Layout:
    cache = cat.__dict__.setdefault("_hh_layouts", {})
    if n in cache:
        return cache[n]
    tuples, shapes, offsets = [], {}, {}
    off = 0
    for t in itertools.product(range(cat.n_objects), repeat=n + 1):
        shape = tuple(cat.rank(t[i], t[i - 1]) for i in range(1, n + 1)) + (cat.rank(t[n], t[0]),)
        if 0 in shape:
            continue
        size = int(np.prod(shape))
        tuples.append(t)
        shapes[t] = shape
        offsets[t] = off
        off += size
    lay = Layout(n, tuple(tuples), shapes, offsets, off)
    cache[n] = lay
    return lay


@dataclass(eq=False)
class Cochain:
    category: LinCategory
    degree: int
    blocks: dict

    @classmethod
    def zero(cls, cat: LinCategory, n: int) -> "Cochain":
        lay = layout(cat, n)
        return cls(cat, n, {t: cat.field.zeros(lay.shapes[t]) for t in lay.tuples})

    @classmethod
    def from_vector(cls, cat: LinCategory, n: int, vec) -> "Cochain":
        lay = layout(cat, n)
        vec = np.asarray(vec).reshape(-1)
        if vec.shape[0] != lay.dim:
            raise ValueError(f"cochain vector has length {vec.shape[0]}, expected {lay.dim}")
        blocks = {}
        for t in lay.tuples:
            size = int(np.prod(lay.shapes[t]))
            blocks[t] = cat.field.reduce(vec[lay.offsets[t]:lay.offsets[t] + size].reshape(lay.shapes[t]))
        return cls(cat, n, blocks)

    @classmethod
    def random(cls, cat: LinCategory, n: int, rng: np.random.Generator) -> "Cochain":
        return cls.from_vector(cat, n, cat.field.random(rng, (layout(cat, n).dim,)))

    @property
    def vector(self) -> np.ndarray:
        f = self.category.field
        lay = layout(self.category, self.degree)
        if lay.dim == 0:
            return f.zeros((0,))
        return np.concatenate([np.asarray(self.blocks[t]).reshape(-1) for t in lay.tuples])

    def block(self, *objs) -> np.ndarray:
        t = tuple(self.category.obj(o) for o in objs)
        return self.blocks[t]

    def _combine(self, other, sign):
        if other.category is not self.category or other.degree != self.degree:
            raise ValueError("cochains live in different complexes")
        f = self.category.field
        return Cochain(self.category, self.degree,
                       {t: f.reduce(b + sign * other.blocks[t]) for t, b in self.blocks.items()})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, s) -> "Cochain":
        f = self.category.field
        s = f.scalar(s)
        return Cochain(self.category, self.degree, {t: f.reduce(b * s) for t, b in self.blocks.items()})

    def is_zero(self) -> bool:
        return all(not np.any(b != 0) for b in self.blocks.values())

    def first_nonzero(self):
        for t, b in self.blocks.items():
            nz = np.argwhere(b != 0)
            if len(nz):
                return t, tuple(int(i) for i in nz[0])
        return None


# -- the differential -----------------------------------------------------------------


def _table(cat: LinCategory, x, y, z):
    return cat.table(x, y, z)[..., 0]


def _apply(cat: LinCategory, n: int, blocks: dict, batch: int) -> dict:
    """d on cochains whose blocks carry a trailing batch axis; returns degree n+1 blocks."""
    f = cat.field
    lay = layout(cat, n + 1)
    L = _LETTERS[:n + 1]
    out = {}
    for t in lay.tuples:
        acc = f.zeros(lay.shapes[t] + (batch,))
        # g1 · c(g2, ..., g_{n+1})
        c = blocks.get(t[1:])
        if c is not None:
            term = np.einsum(f"{L[0]}xy,{L[1:]}xz->{L}yz", _table(cat, t[n + 1], t[1], t[0]), c)
            acc = acc + term
        # (−1)^i c(..., g_i g_{i+1}, ...)
        for i in range(1, n + 1):
            c = blocks.get(t[:i] + t[i + 1:])
            if c is None:
                continue
            tab = _table(cat, t[i + 1], t[i], t[i - 1])
            term = np.einsum(f"{L[i - 1]}{L[i]}x,{L[:i - 1]}x{L[i + 1:]}yz->{L}yz", tab, c)
            acc = acc + term if i % 2 == 0 else acc - term
        # (−1)^{n+1} c(g1, ..., g_n) · g_{n+1}
        c = blocks.get(t[:-1])
        if c is not None:
            term = np.einsum(f"x{L[n]}y,{L[:n]}xz->{L}yz", _table(cat, t[n + 1], t[n], t[0]), c)
            acc = acc - term if n % 2 == 0 else acc + term
        out[t] = f.reduce(acc)
    return out


def differential(c: Cochain) -> Cochain:
    cat = c.category
    _require_field(cat)
    blocks = {t: b[..., None] for t, b in c.blocks.items()}
    out = _apply(cat, c.degree, blocks, 1)
    return Cochain(cat, c.degree + 1, {t: b[..., 0] for t, b in out.items()})


def differential_matrix(cat: LinCategory, n: int) -> np.ndarray:
    """The matrix of d: Cⁿ → Cⁿ⁺¹ in the flattened coordinates."""
    _require_field(cat)
    cache = cat.__dict__.setdefault("_hh_dmat", {})
    if n in cache:
        return cache[n]
    f = cat.field
    src, tgt = layout(cat, n), layout(cat, n + 1)
    eye = f.eye(src.dim)
    blocks = {}
    for t in src.tuples:
        size = int(np.prod(src.shapes[t]))
        blocks[t] = eye[src.offsets[t]:src.offsets[t] + size].reshape(src.shapes[t] + (src.dim,))
    out = _apply(cat, n, blocks, src.dim)
    mat = f.zeros((tgt.dim, src.dim))
    for t in tgt.tuples:
        size = int(np.prod(tgt.shapes[t]))
        mat[tgt.offsets[t]:tgt.offsets[t] + size] = out[t].reshape(size, src.dim)
    cache[n] = mat
    return mat


def normalized_basis(cat: LinCategory, n: int) -> np.ndarray:
    """Columns spanning the normalized cochains inside Cⁿ."""
    f = cat.field
    lay = layout(cat, n)
    if n == 0:
        return f.eye(lay.dim)
    rows = []
    for t in lay.tuples:
        shape = lay.shapes[t]
        size = int(np.prod(shape))
        for i in range(1, n + 1):
            if t[i] != t[i - 1]:
                continue
            ident = cat.identity[t[i]][:, 0]
            # contract argument i with the identity: one constraint per remaining index
            idx = np.arange(size).reshape(shape)
            moved = np.moveaxis(idx, i - 1, -1).reshape(-1, shape[i - 1])
            for row_idx in moved:
                row = f.zeros((lay.dim,))
                row[lay.offsets[t] + row_idx] = ident
                rows.append(row)
    if not rows:
        return f.eye(lay.dim)
    return f.nullspace(np.stack(rows))


# -- cohomology -------------------------------------------------------------------------


@dataclass
class HHClass:
    degree: int
    representative: Cochain
    coboundary_basis: np.ndarray = dc_field(repr=False)


@dataclass
class HHResult:
    degree: int
    dim: int
    classes: list
    cocycle_dim: int
    coboundary_dim: int
    normalized: bool


def _restricted(cat, n, normalized):
    f = cat.field
    basis = normalized_basis(cat, n) if normalized else f.eye(layout(cat, n).dim)
    if basis.shape[1] == 0:
        return basis, f.zeros((layout(cat, n + 1).dim, 0))
    return basis, f.dot(differential_matrix(cat, n), basis)


def hh(cat: LinCategory, n: int, normalized: bool = True) -> HHResult:
    """HHⁿ with class representatives; the full complex is available as an oracle."""
    _require_field(cat)
    f = cat.field
    basis, dn = _restricted(cat, n, normalized)
    if dn.shape[1]:
        z = f.dot(basis, f.nullspace(dn))
    else:
        z = basis
    if n > 0:
        pb, dprev = _restricted(cat, n - 1, normalized)
        bnd = f.colspace(dprev) if dprev.shape[1] else f.zeros((basis.shape[0], 0))
    else:
        bnd = f.zeros((basis.shape[0], 0))
    span = bnd
    reps = []
    for j in range(z.shape[1]):
        cand = np.concatenate([span, z[:, j:j + 1]], axis=1)
        if f.rank(cand) > span.shape[1]:
            span = cand
            reps.append(HHClass(n, Cochain.from_vector(cat, n, z[:, j]), bnd))
    return HHResult(n, len(reps), reps, z.shape[1], bnd.shape[1], normalized)


def hh_dim(cat: LinCategory, n: int, normalized: bool = True) -> int:
    return hh(cat, n, normalized).dim


def is_coboundary(c: Cochain) -> np.ndarray | None:
    """A degree n−1 cochain g with dg = c, or None."""
    cat = c.category
    f = cat.field
    if c.degree == 0:
        return None if not c.is_zero() else f.zeros((layout(cat, 0).dim,))
    sol = f.solve(differential_matrix(cat, c.degree - 1), c.vector)
    return sol


# -- deformations -----------------------------------------------------------------------


def first_order_deformation(cat: LinCategory, c: Cochain, name: str = "") -> LinearDeformation:
    """Composition m + εc over S[ε]/(ε²); the unit becomes 1 − εc(1, 1)."""
    _require_field(cat)
    if c.degree != 2 or c.category is not cat:
        raise ValueError("a first-order deformation needs a 2-cochain on the same category")
    dc = differential(c)
    bad = dc.first_nonzero()
    if bad is not None:
        raise NotACocycle((tuple(cat.objects[i] for i in bad[0]), bad[1]))
    f = cat.field
    R = dual_numbers(f)
    comp = {}
    for (x, y, z), tab in cat.comp.items():
        t = f.zeros(tab.shape[:3] + (2,))
        t[..., 0] = tab[..., 0]
        blk = c.blocks.get((z, y, x))
        if blk is not None:
            t[..., 1] = blk
        comp[(x, y, z)] = t
    ident = {}
    for x in range(cat.n_objects):
        e = f.zeros((cat.rank(x, x), 2))
        e[:, 0] = cat.identity[x][:, 0]
        blk = c.blocks.get((x, x, x))
        if blk is not None:
            one = cat.identity[x][:, 0]
            e[:, 1] = f.reduce(-f.einsum("a,b,abc->c", one, one, blk))
        ident[x] = e
    ranks = {(x, y): cat.rank(x, y) for x in range(cat.n_objects) for y in range(cat.n_objects)}
    total = LinCategory(R, cat.objects, ranks, comp, ident, dict(cat.hom_labels), name=name or cat.name)
    theta = residue_map(R)
    return LinearDeformation(theta, total, cat, reduction_functor(total, theta, cat), True, True,
                             name or "first-order")


@dataclass
class Equivalence:
    equivalent: bool
    witness: Cochain | None = None
    functor: LinFunctor | None = None
    verified: bool = False


def deformation_functor(d1: LinearDeformation, d2: LinearDeformation, g: Cochain) -> LinFunctor:
    """The functor 1 + εg between two first-order deformations of the same category."""
    cat = g.category
    f = cat.field
    maps = {}
    for x in range(cat.n_objects):
        for y in range(cat.n_objects):
            r = cat.rank(x, y)
            m = f.zeros((r, r, 2))
            for i in range(r):
                m[i, i, 0] = f.scalar(1)
            blk = g.blocks.get((y, x))
            if blk is not None:
                m[:, :, 1] = blk.T
            maps[(x, y)] = m
    return LinFunctor(d1.total, d2.total, list(range(cat.n_objects)), maps)


def are_equivalent(c1: Cochain, c2: Cochain, verify: bool = True) -> Equivalence:
    """Solve dg = c1 − c2; on success 1 + εg is an isomorphism from the c1- to the c2-deformation."""
    cat = c1.category
    if c2.category is not cat or c1.degree != 2 or c2.degree != 2:
        raise ValueError("both cocycles must be 2-cochains on the same category")
    sol = is_coboundary(c1 - c2)
    if sol is None:
        return Equivalence(False)
    g = Cochain.from_vector(cat, 1, sol)
    if not verify:
        return Equivalence(True, g)
    d1 = first_order_deformation(cat, c1)
    d2 = first_order_deformation(cat, c2)
    phi = deformation_functor(d1, d2, g)
    eta = NatTransform(d1.functor, phi.then(d2.functor),
                       {x: cat.identity_morphism(x) for x in range(cat.n_objects)})
    rep = verify_deformation_equivalence(d1, d2, phi, eta)
    inverse = deformation_functor(d2, d1, g.scale(-1))
    ident_ok = phi.then(inverse).equals(identity_functor(d1.total)) and \
        inverse.then(phi).equals(identity_functor(d2.total))
    return Equivalence(True, g, phi, rep.valid and ident_ok)


@dataclass
class Classification:
    category: LinCategory
    hh2: HHResult
    hh1: HHResult
    deformations: list
    pairwise_inequivalent: bool
    all_valid: bool

    @property
    def rigid(self) -> bool:
        return self.hh2.dim == 0


def classify(cat: LinCategory) -> Classification:
    """The trivial deformation and one deformation per basis class of HH²."""
    _require_field(cat)
    h2 = hh(cat, 2)
    h1 = hh(cat, 1)
    cocycles = [Cochain.zero(cat, 2)] + [cl.representative for cl in h2.classes]
    names = ["trivial"] + [f"class {i + 1}" for i in range(h2.dim)]
    defs = [first_order_deformation(cat, c, name=nm) for c, nm in zip(cocycles, names)]
    valid = all(validate_deformation(d).valid for d in defs)
    ineq = all(not are_equivalent(cocycles[i], cocycles[j], verify=False).equivalent
               for i in range(len(cocycles)) for j in range(i + 1, len(cocycles)))
    for d, c in zip(defs, cocycles):
        d.cocycle = c
    return Classification(cat, h2, h1, defs, ineq, valid)


# -- module categories of first-order deformations --------------------------------------------


@dataclass
class ModReport:
    flat: bool
    representables_ok: bool
    presentation_ok: bool
    flat_dimension_ok: bool
    details: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.flat and self.representables_ok and self.presentation_ok and self.flat_dimension_ok


def mod_of_deformation(d: LinearDeformation, battery=None) -> ModReport:
    """Compare mod(total) with mod(reduced) through S ⊗_R −."""
    from . import algebra as alg
    from . import funmod as fm
    from .basechange import BaseChange

    rep = validate_deformation(d)
    if not rep.info.get("flat", rep.valid):
        raise ValueError("mod_of_deformation needs a flat deformation")
    B = BaseChange.of_deformation(d)
    ratio_num, ratio_den = d.theta.source.dim, d.theta.target.dim
    details = []
    reps_ok = True
    for x in range(d.total.n_objects):
        up = B.tensor_up(fm.representable(d.total, x))
        target = fm.representable(d.reduced, x)
        if not alg.is_isomorphic(up.module, target.module):
            reps_ok = False
            details.append(f"representable at {d.total.objects[x]} does not reduce to a representable")
    if battery is None:
        battery = [fm.representable(d.total, x) for x in range(d.total.n_objects)]
    pres_ok = True
    dim_ok = True
    for F in battery:
        a, b = B.tensor_up(F), B.tensor_up_presentation(F)
        if not alg.is_isomorphic(a.module, b.module):
            pres_ok = False
            details.append("tensoring the presentation disagrees with S ⊗ F")
        if fm.is_flat_functor(F):
            if [v * ratio_den for v in F.dims()] != [v * ratio_num for v in a.dims()]:
                dim_ok = False
                details.append(f"flat module dims {F.dims()} vs reduction {a.dims()}")
    return ModReport(bool(rep.valid), reps_ok, pres_ok, dim_ok, details)
