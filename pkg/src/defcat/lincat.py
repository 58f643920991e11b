"""Finite R-linear categories with free Hom-modules, functors and deformations.

Objects are indexed ``0..n-1`` (labels are kept for display and I/O).  The
Hom-module ``Hom(x, y)`` is free over R with a chosen basis of rank
``rank(x, y)``; a morphism is an ``(r, d)`` array of R-coordinates.

Composition tables follow ``comp[(x, y, z)][a, b, c, :]`` = R-coordinates of
basis element ``c`` of Hom(x, z) in ``g_a ∘ f_b`` for ``g_a`` in Hom(y, z) and
``f_b`` in Hom(x, y).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import algebra as alg
from .ring import (BaseRing, MalformedInput, RingMismatch, RingSurjection, ValidationReport,
                   rmat_from_k, rmat_identity, rmat_inverse, rmat_mul, rmat_to_k)


class CategoryError(ValueError):
    pass


class LinCategory:
    def __init__(self, ring: BaseRing, objects, ranks, comp, identity, hom_labels=None, name: str = ""):
        self.ring = ring
        self.objects = [str(o) for o in objects]
        n = len(self.objects)
        if len(set(self.objects)) != n:
            raise MalformedInput("duplicate object labels")
        f = ring.field
        d = ring.dim
        self.ranks = np.zeros((n, n), dtype=int)
        for (x, y), r in dict(ranks).items():
            if not (0 <= x < n and 0 <= y < n) or int(r) < 0:
                raise MalformedInput(f"bad Hom rank entry at ({x}, {y})")
            self.ranks[x, y] = int(r)
        self.comp = {}
        for x, y, z in itertools.product(range(n), repeat=3):
            shape = (self.ranks[y, z], self.ranks[x, y], self.ranks[x, z], d)
            if 0 in shape[:3]:
                continue
            if (x, y, z) not in comp:
                raise MalformedInput(f"missing composition table for objects ({x}, {y}, {z})")
            t = f.array(comp[(x, y, z)])
            if t.shape != shape:
                raise MalformedInput(f"composition table ({x}, {y}, {z}) has shape {t.shape}, expected {shape}")
            self.comp[(x, y, z)] = t
        self.identity = {}
        for x in range(n):
            r = self.ranks[x, x]
            t = f.array(identity[x]) if r else f.zeros((0, d))
            if t.shape != (r, d):
                raise MalformedInput(f"identity of object {x} has shape {t.shape}, expected {(r, d)}")
            self.identity[x] = t
        self.hom_labels = hom_labels or {}
        self.name = name

    def __repr__(self):
        return f"LinCategory({self.name or self.objects}, over {self.ring!r})"

    # -- basic access -------------------------------------------------------

    @property
    def field(self):
        return self.ring.field

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def obj(self, label) -> int:
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool):
            if 0 <= label < self.n_objects:
                return int(label)
        try:
            return self.objects.index(str(label))
        except ValueError:
            raise KeyError(f"unknown object {label!r}") from None

    def rank(self, x: int, y: int) -> int:
        return int(self.ranks[x, y])

    def table(self, x: int, y: int, z: int) -> np.ndarray:
        if (x, y, z) in self.comp:
            return self.comp[(x, y, z)]
        return self.field.zeros((self.ranks[y, z], self.ranks[x, y], self.ranks[x, z], self.ring.dim))

    def basis_label(self, x: int, y: int, a: int) -> str:
        labels = self.hom_labels.get((x, y))
        if labels:
            return labels[a]
        return f"{self.objects[x]}->{self.objects[y]}#{a}"

    def kcomp(self, x: int, y: int, z: int) -> np.ndarray:
        """k-linear composition tensor on flattened coordinates (index a*d + t)."""
        key = (x, y, z)
        cache = self.__dict__.setdefault("_kcomp", {})
        if key not in cache:
            f, d, rc = self.field, self.ring.dim, self.ring.constants
            t = self.table(x, y, z)
            if t.size:
                k = f.einsum("stu,abcv,uvw->asbtcw", rc, t, rc)
            else:
                k = f.zeros((t.shape[0], d, t.shape[1], d, t.shape[2], d))
            cache[key] = k.reshape(t.shape[0] * d, t.shape[1] * d, t.shape[2] * d)
        return cache[key]

    # -- morphisms ------------------------------------------------------------

    def morphism(self, x, y, coords=None) -> "Morphism":
        x, y = self.obj(x), self.obj(y)
        shape = (self.rank(x, y), self.ring.dim)
        if coords is None:
            c = self.field.zeros(shape)
        else:
            c = self.field.array(coords)
            if c.ndim == 1 and c.size == shape[0] * shape[1]:
                c = c.reshape(shape)
            if c.shape != shape:
                raise MalformedInput(f"morphism coordinates have shape {c.shape}, expected {shape}")
        return Morphism(self, x, y, c)

    def basis_morphism(self, x, y, a: int, ring_basis: int = 0) -> "Morphism":
        m = self.morphism(x, y)
        m.coords[a, ring_basis] = self.field.scalar(1)
        return m

    def identity_morphism(self, x) -> "Morphism":
        x = self.obj(x)
        return Morphism(self, x, x, self.identity[x].copy())

    def zero_morphism(self, x, y) -> "Morphism":
        return self.morphism(x, y)

    def compose(self, g: "Morphism", f: "Morphism") -> "Morphism":
        if g.source != f.target:
            raise CategoryError("morphisms are not composable")
        x, y, z = f.source, f.target, g.target
        k = self.kcomp(x, y, z)
        vec = self.field.einsum("i,j,ijl->l", g.vector, f.vector, k) if k.size else self.field.zeros(k.shape[2])
        return Morphism(self, x, z, vec.reshape(self.rank(x, z), self.ring.dim))

    def post_matrix(self, g: "Morphism", x: int) -> np.ndarray:
        """k-matrix of f ↦ g∘f on Hom(x, source g)."""
        k = self.kcomp(x, g.source, g.target)
        if not k.size:
            return self.field.zeros((k.shape[2], k.shape[1]))
        return self.field.einsum("i,ijl->lj", g.vector, k)

    def pre_matrix(self, f: "Morphism", z: int) -> np.ndarray:
        """k-matrix of g ↦ g∘f on Hom(target f, z)."""
        k = self.kcomp(f.source, f.target, z)
        if not k.size:
            return self.field.zeros((k.shape[2], k.shape[0]))
        return self.field.einsum("j,ijl->li", f.vector, k)

    # -- category algebra ----------------------------------------------------

    @cached_property
    def hom_offsets(self) -> dict:
        """Slice of each Hom(x, y) in the category algebra basis (source-major order)."""
        out = {}
        off = 0
        d = self.ring.dim
        for x in range(self.n_objects):
            for y in range(self.n_objects):
                size = self.rank(x, y) * d
                out[(x, y)] = slice(off, off + size)
                off += size
        return out

    @cached_property
    def algebra(self) -> alg.Algebra:
        """Λ = ⊕ Hom(x, y) with product g·f = g∘f; left Λe_x is the representable Hom(x, −)."""
        f = self.field
        d = self.ring.dim
        n = sum(self.rank(x, y) for x in range(self.n_objects) for y in range(self.n_objects)) * d
        mult = f.zeros((n, n, n))
        off = self.hom_offsets
        for (x, y, z) in self.comp:
            k = self.kcomp(x, y, z)
            mult[off[(y, z)], off[(x, y)], off[(x, z)]] = k
        unit = f.zeros(n)
        central = f.zeros((d, n))
        source = np.zeros(n, dtype=int)
        target = np.zeros(n, dtype=int)
        labels = []
        rc = self.ring.constants
        for x in range(self.n_objects):
            for y in range(self.n_objects):
                sl = off[(x, y)]
                source[sl] = x
                target[sl] = y
                for a in range(self.rank(x, y)):
                    for t in range(d):
                        labels.append(f"{self.ring.labels[t]}*{self.basis_label(x, y, a)}")
            if self.rank(x, x):
                unit[off[(x, x)]] = self.identity[x].reshape(-1)
                central[:, off[(x, x)]] = f.reduce(
                    np.einsum("as,tsw->taw", self.identity[x], rc)).reshape(d, -1)
        return alg.Algebra(f, mult, unit, source, target, self.objects, base=self.ring.algebra,
                           central=central, labels=labels)

    def structurally_equal(self, other: "LinCategory") -> bool:
        if self.objects != other.objects or not self.ring.same_as(other.ring):
            return False
        if not np.array_equal(self.ranks, other.ranks):
            return False
        if set(self.comp) != set(other.comp):
            return False
        if any(not np.array_equal(self.comp[k], other.comp[k]) for k in self.comp):
            return False
        return all(np.array_equal(self.identity[x], other.identity[x]) for x in range(self.n_objects))


@dataclass
class Morphism:
    category: LinCategory
    source: int
    target: int
    coords: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return self.coords.reshape(-1)

    def _same(self, other: "Morphism"):
        if other.source != self.source or other.target != self.target:
            raise CategoryError("morphisms have different source or target")

    def __add__(self, other: "Morphism") -> "Morphism":
        self._same(other)
        return Morphism(self.category, self.source, self.target,
                        self.category.field.reduce(self.coords + other.coords))

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._same(other)
        return Morphism(self.category, self.source, self.target,
                        self.category.field.reduce(self.coords - other.coords))

    def __neg__(self) -> "Morphism":
        return Morphism(self.category, self.source, self.target, self.category.field.reduce(-self.coords))

    def scale(self, r) -> "Morphism":
        """Multiply by a base ring element (R-coordinates) or an integer."""
        ring = self.category.ring
        f = ring.field
        if np.ndim(r) == 0:
            return Morphism(self.category, self.source, self.target, f.reduce(self.coords * f.scalar(r)))
        r = f.array(r)
        c = f.einsum("t,au,tuw->aw", r, self.coords, ring.constants) if self.coords.size else self.coords
        return Morphism(self.category, self.source, self.target, c)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        return self.category.compose(self, other)

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.source == other.source and self.target == other.target
                and np.array_equal(self.coords, other.coords))

    def is_zero(self) -> bool:
        return self.category.field.is_zero(self.coords)


# -- validation and basic constructions ---------------------------------------


def validate_category(c: LinCategory) -> ValidationReport:
    """Every associativity and identity-law violation on basis elements."""
    f = c.field
    d = c.ring.dim
    rep = ValidationReport()
    n = c.n_objects
    for w, x, y, z in itertools.product(range(n), repeat=4):
        rh, rg, rf = c.rank(y, z), c.rank(x, y), c.rank(w, x)
        if 0 in (rh, rg, rf):
            continue
        kxyz, kwxz, kwxy, kwyz = c.kcomp(x, y, z), c.kcomp(w, x, z), c.kcomp(w, x, y), c.kcomp(w, y, z)
        hi, gi, fi = np.arange(rh) * d, np.arange(rg) * d, np.arange(rf) * d
        left = f.einsum("hgm,mfo->hgfo", kxyz[np.ix_(hi, gi)], kwxz[:, fi])
        right = f.einsum("gfm,hmo->hgfo", kwxy[np.ix_(gi, fi)], kwyz[hi])
        bad = np.argwhere(np.any(left != right, axis=3))
        for a, b, e in bad:
            rep.violations.append(
                "associativity fails on (" + ", ".join([c.basis_label(y, z, a), c.basis_label(x, y, b),
                                                        c.basis_label(w, x, e)]) + ")")
    for x in range(n):
        ix = c.identity_morphism(x)
        for y in range(n):
            for a in range(c.rank(x, y)):
                m = c.basis_morphism(x, y, a)
                if c.compose(m, ix) != m:
                    rep.violations.append(f"right identity law fails at object {c.objects[x]} on {c.basis_label(x, y, a)}")
            for a in range(c.rank(y, x)):
                m = c.basis_morphism(y, x, a)
                if c.compose(ix, m) != m:
                    rep.violations.append(f"left identity law fails at object {c.objects[x]} on {c.basis_label(y, x, a)}")
    return rep


def opposite(c: LinCategory) -> LinCategory:
    n = c.n_objects
    ranks = {(x, y): c.rank(y, x) for x in range(n) for y in range(n)}
    comp = {}
    for (x, y, z) in c.comp:
        # g ∘ f in c with f: x→y, g: y→z becomes f ∘op g: z→x
        comp[(z, y, x)] = np.ascontiguousarray(np.transpose(c.comp[(x, y, z)], (1, 0, 2, 3)))
    labels = {(y, x): v for (x, y), v in c.hom_labels.items()}
    return LinCategory(c.ring, c.objects, ranks, comp, dict(c.identity), labels,
                       name=(c.name + "^op") if c.name else "")


def base_change_category(c: LinCategory, theta: RingSurjection) -> LinCategory:
    """S ⊗_R c: same objects and bases, structure constants pushed through θ."""
    if not c.ring.same_as(theta.source):
        raise RingMismatch("category is not over the source of the surjection")
    comp = {k: theta.apply_coefficients(v) for k, v in c.comp.items()}
    ident = {x: theta.apply_coefficients(v) for x, v in c.identity.items()}
    ranks = {(x, y): c.rank(x, y) for x in range(c.n_objects) for y in range(c.n_objects)}
    return LinCategory(theta.target, c.objects, ranks, comp, ident, dict(c.hom_labels), name=c.name)


def extend_scalars(c: LinCategory, ring: BaseRing) -> LinCategory:
    """R ⊗_k c for a category over the residue field k of R (the trivial deformation)."""
    if c.ring.dim != 1 or c.field != ring.field:
        raise RingMismatch("scalar extension needs a category over the residue field")
    d = ring.dim
    f = ring.field

    def pad(t):
        out = f.zeros(t.shape[:-1] + (d,))
        out[..., 0] = t[..., 0]
        return out

    comp = {k: pad(v) for k, v in c.comp.items()}
    ident = {x: pad(v) for x, v in c.identity.items()}
    ranks = {(x, y): c.rank(x, y) for x in range(c.n_objects) for y in range(c.n_objects)}
    return LinCategory(ring, c.objects, ranks, comp, ident, dict(c.hom_labels), name=c.name)


def one_object_category(ring: BaseRing, constants, unit, basis_labels=None, name: str = "", obj: str = "*"):
    """The one-object category of an R-algebra free on the given basis.

    ``constants[a, b, c, :]`` are R-coordinates of ``b_c`` in ``b_a · b_b``.
    """
    f = ring.field
    constants = f.array(constants)
    r = constants.shape[0]
    return LinCategory(ring, [obj], {(0, 0): r}, {(0, 0, 0): constants}, {0: f.array(unit).reshape(r, ring.dim)},
                       {(0, 0): list(basis_labels)} if basis_labels else None, name=name)


def algebra_category(ring: BaseRing, name: str = "") -> LinCategory:
    """R itself as a one-object R-linear category."""
    f = ring.field
    comp = f.zeros((1, 1, 1, ring.dim))
    comp[0, 0, 0] = ring.one
    ident = ring.one.reshape(1, -1)
    return one_object_category(ring, comp, ident, ["1"], name=name or ring.name)


def matrix_category(ring: BaseRing, sizes, name: str = "") -> LinCategory:
    """Objects R^m for m in ``sizes``; Hom(R^m, R^n) = n×m matrices on the matrix-unit basis."""
    f = ring.field
    d = ring.dim
    sizes = [int(s) for s in sizes]
    n = len(sizes)
    ranks = {(x, y): sizes[x] * sizes[y] for x in range(n) for y in range(n)}
    comp = {}
    for x, y, z in itertools.product(range(n), repeat=3):
        mx, my, mz = sizes[x], sizes[y], sizes[z]
        if 0 in (mx, my, mz):
            continue
        t = f.zeros((mz * my, my * mx, mz * mx, d))
        for i in range(mz):
            for j in range(my):
                for l in range(mx):
                    t[i * my + j, j * mx + l, i * mx + l, 0] = f.scalar(1)
        comp[(x, y, z)] = t
    ident = {}
    for x in range(n):
        m = sizes[x]
        t = f.zeros((m * m, d))
        for i in range(m):
            t[i * m + i, 0] = f.scalar(1)
        ident[x] = t
    labels = {(x, y): [f"E{i}{j}" for i in range(sizes[y]) for j in range(sizes[x])]
              for x in range(n) for y in range(n)}
    objs = [f"R{s}" for s in sizes]
    if len(set(objs)) != n:
        objs = [f"R{s}_{k}" for k, s in enumerate(sizes)]
    return LinCategory(ring, objs, ranks, comp, ident, labels, name=name or f"Mat{sizes}")


def matrix_morphism(c: LinCategory, x, y, mat) -> Morphism:
    """Morphism of a matrix category from an (n × m × d) R-matrix."""
    x, y = c.obj(x), c.obj(y)
    m = np.asarray(mat)
    return c.morphism(x, y, m.reshape(-1, c.ring.dim))


def morphism_matrix(mor: Morphism, rows: int, cols: int) -> np.ndarray:
    return mor.coords.reshape(rows, cols, mor.category.ring.dim)


def change_hom_basis(c: LinCategory, changes: dict) -> LinCategory:
    """Re-base Hom-modules: new basis of Hom(x, y) = old basis · P for invertible R-matrices P."""
    ring = c.ring
    f = ring.field
    n = c.n_objects
    mats, invs = {}, {}
    for x in range(n):
        for y in range(n):
            r = c.rank(x, y)
            p = f.array(changes[(x, y)]) if (x, y) in changes else rmat_identity(ring, r)
            pinv = rmat_inverse(ring, p)
            if pinv is None:
                raise CategoryError(f"basis change on Hom({c.objects[x]}, {c.objects[y]}) is not invertible")
            mats[(x, y)], invs[(x, y)] = rmat_to_k(ring, p), rmat_to_k(ring, pinv)
    comp = {}
    d = ring.dim
    for (x, y, z) in c.comp:
        k = c.kcomp(x, y, z)
        # images of new basis pairs, expressed in the new basis of Hom(x, z)
        newk = f.einsum("ia,jb,ijl,cl->abc", mats[(y, z)][:, ::d], mats[(x, y)][:, ::d], k, invs[(x, z)])
        comp[(x, y, z)] = newk.reshape(newk.shape[0], newk.shape[1], c.rank(x, z), d)
    ident = {}
    for x in range(n):
        if c.rank(x, x):
            ident[x] = f.dot(invs[(x, x)], c.identity[x].reshape(-1)).reshape(c.rank(x, x), d)
        else:
            ident[x] = f.zeros((0, d))
    ranks = {(x, y): c.rank(x, y) for x in range(n) for y in range(n)}
    return LinCategory(ring, c.objects, ranks, comp, ident, None, name=c.name)


def is_isomorphism(mor: Morphism):
    """``(True, inverse)`` when ``mor`` has a two-sided inverse, else ``(False, None)``."""
    c = mor.category
    f = c.field
    x, y = mor.source, mor.target
    rxx, ryy, ryx = c.rank(x, x), c.rank(y, y), c.rank(y, x)
    d = c.ring.dim
    if ryx == 0:
        ok = rxx == 0 and ryy == 0
        return (ok, c.morphism(y, x) if ok else None)
    left = c.pre_matrix(mor, x)     # g ↦ g∘f, Hom(y,x) → Hom(x,x)
    gk = c.kcomp(y, x, y)
    right = f.einsum("i,ijl->lj", mor.vector, gk) if gk.size else f.zeros((ryy * d, ryx * d))
    a = np.concatenate([left, right], axis=0)
    b = np.concatenate([c.identity[x].reshape(-1), c.identity[y].reshape(-1)])
    sol = f.solve(a, b)
    if sol is None:
        return False, None
    return True, Morphism(c, y, x, np.asarray(sol).reshape(ryx, d))


def find_object_isomorphism(c: LinCategory, x: int, y: int, seed: int = 0, tries: int = 64, exhaustive_cap: int = 4096):
    """An isomorphism x → y with its inverse, or None if none is found."""
    f = c.field
    r = c.rank(x, y)
    d = c.ring.dim
    if r == 0:
        if c.rank(x, x) == 0 and c.rank(y, y) == 0:
            return c.morphism(x, y), c.morphism(y, x)
        return None
    for a in range(r):
        ok, inv = is_isomorphism(c.basis_morphism(x, y, a))
        if ok:
            return c.basis_morphism(x, y, a), inv
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        m = c.morphism(x, y, f.random(rng, (r, d)))
        ok, inv = is_isomorphism(m)
        if ok:
            return m, inv
    if f.p and f.p ** (r * d) <= exhaustive_cap:
        for vals in itertools.product(range(f.p), repeat=r * d):
            m = c.morphism(x, y, np.array(vals, dtype=np.int64).reshape(r, d))
            ok, inv = is_isomorphism(m)
            if ok:
                return m, inv
    return None


# -- functors and natural transformations ---------------------------------------


class LinFunctor:
    """A linear functor, optionally through a ring surjection R → S.

    ``maps[(x, y)]`` has shape (rank_T(Fx, Fy), rank_S(x, y), d_T): target-ring
    coordinates of the images of source basis elements.
    """

    def __init__(self, source: LinCategory, target: LinCategory, objects, maps, ring_map: RingSurjection | None = None):
        self.source = source
        self.target = target
        self.objects = [int(o) for o in objects]
        self.ring_map = ring_map
        if len(self.objects) != source.n_objects:
            raise MalformedInput("object map has the wrong length")
        if ring_map is None and not source.ring.same_as(target.ring):
            raise RingMismatch("functor between categories over different rings needs a ring map")
        if ring_map is not None and not (ring_map.source.same_as(source.ring) and ring_map.target.same_as(target.ring)):
            raise RingMismatch("ring map does not match the categories")
        ft = target.field
        self.maps = {}
        for x in range(source.n_objects):
            for y in range(source.n_objects):
                shape = (target.rank(self.objects[x], self.objects[y]), source.rank(x, y), target.ring.dim)
                m = ft.array(maps[(x, y)]) if (x, y) in maps else ft.zeros(shape)
                if m.shape != shape:
                    raise MalformedInput(f"functor matrix on ({x}, {y}) has shape {m.shape}, expected {shape}")
                self.maps[(x, y)] = m

    def kmatrix(self, x: int, y: int) -> np.ndarray:
        """k-matrix from flattened Hom_S(x, y) to flattened Hom_T(Fx, Fy)."""
        cache = self.__dict__.setdefault("_kmat", {})
        if (x, y) not in cache:
            f = self.target.field
            tr = self.target.ring
            m = self.maps[(x, y)]
            ds = self.source.ring.dim
            th = self.ring_map.matrix if self.ring_map is not None else f.eye(ds)
            if m.size:
                k = f.einsum("ut,cbv,uvw->cwbt", th, m, tr.constants)
            else:
                k = f.zeros((m.shape[0], tr.dim, m.shape[1], ds))
            cache[(x, y)] = k.reshape(m.shape[0] * tr.dim, m.shape[1] * ds)
        return cache[(x, y)]

    def __call__(self, mor: Morphism) -> Morphism:
        fx, fy = self.objects[mor.source], self.objects[mor.target]
        vec = self.target.field.dot(self.kmatrix(mor.source, mor.target), mor.vector)
        return Morphism(self.target, fx, fy, vec.reshape(self.target.rank(fx, fy), self.target.ring.dim))

    def violations(self) -> list[str]:
        s, t = self.source, self.target
        out = []
        for x in range(s.n_objects):
            if self(s.identity_morphism(x)) != t.identity_morphism(self.objects[x]):
                out.append(f"identity of {s.objects[x]} not preserved")
        for (x, y, z) in s.comp:
            for a in range(s.rank(y, z)):
                g = s.basis_morphism(y, z, a)
                fg = self(g)
                for b in range(s.rank(x, y)):
                    h = s.basis_morphism(x, y, b)
                    if self(s.compose(g, h)) != t.compose(fg, self(h)):
                        out.append(f"composition not preserved on ({s.basis_label(y, z, a)}, {s.basis_label(x, y, b)})")
        return out

    def is_fully_faithful(self) -> bool:
        """Each induced map S ⊗ Hom(x, y) → Hom(Fx, Fy) is bijective."""
        tr = self.target.ring
        for (x, y), m in self.maps.items():
            if m.shape[0] != m.shape[1]:
                return False
            if m.shape[0] and rmat_inverse(tr, m) is None:
                return False
        return True

    def then(self, other: "LinFunctor") -> "LinFunctor":
        """other ∘ self."""
        if other.source is not self.target and not other.source.structurally_equal(self.target):
            raise CategoryError("functors are not composable")
        if self.ring_map is not None and other.ring_map is not None:
            raise CategoryError("composing two ring changes is not supported")
        ring_map = self.ring_map or other.ring_map
        tgt = other.target
        ds = self.source.ring.dim
        f = tgt.field
        maps = {}
        for (x, y), m in self.maps.items():
            fx, fy = self.objects[x], self.objects[y]
            r_out = tgt.rank(other.objects[fx], other.objects[fy])
            full = f.dot(other.kmatrix(fx, fy), self.kmatrix(x, y))
            out = f.zeros((r_out, m.shape[1], tgt.ring.dim))
            for b in range(m.shape[1]):
                out[:, b, :] = full[:, b * ds].reshape(r_out, tgt.ring.dim)
            maps[(x, y)] = out
        objs = [other.objects[o] for o in self.objects]
        return LinFunctor(self.source, tgt, objs, maps, ring_map)

    def equals(self, other: "LinFunctor") -> bool:
        if self.objects != other.objects:
            return False
        return all(np.array_equal(self.kmatrix(x, y), other.kmatrix(x, y)) for (x, y) in self.maps)


def identity_functor(c: LinCategory) -> LinFunctor:
    maps = {(x, y): rmat_identity(c.ring, c.rank(x, y)) for x in range(c.n_objects) for y in range(c.n_objects)}
    return LinFunctor(c, c, list(range(c.n_objects)), maps)


def reduction_functor(c: LinCategory, theta: RingSurjection, reduced: LinCategory | None = None) -> LinFunctor:
    """The canonical functor c → S ⊗_R c (identity on objects and bases)."""
    red = reduced if reduced is not None else base_change_category(c, theta)
    maps = {(x, y): rmat_identity(theta.target, c.rank(x, y)) for x in range(c.n_objects) for y in range(c.n_objects)}
    return LinFunctor(c, red, list(range(c.n_objects)), maps, ring_map=theta)


@dataclass
class NatTransform:
    """η: F → G with components η_x ∈ Hom(Fx, Gx) in the common target category."""

    source: LinFunctor
    target: LinFunctor
    components: dict

    def violations(self) -> list[str]:
        F, G = self.source, self.target
        c = F.source
        t = F.target
        out = []
        for x in range(c.n_objects):
            eta = self.components[x]
            if eta.source != F.objects[x] or eta.target != G.objects[x]:
                out.append(f"component at {c.objects[x]} has wrong source or target")
        if out:
            return out
        for x in range(c.n_objects):
            for y in range(c.n_objects):
                for a in range(c.rank(x, y)):
                    m = c.basis_morphism(x, y, a)
                    if t.compose(G(m), self.components[x]) != t.compose(self.components[y], F(m)):
                        out.append(f"naturality fails on {c.basis_label(x, y, a)}")
        return out

    def is_isomorphism(self) -> bool:
        return all(is_isomorphism(m)[0] for m in self.components.values())

    def inverse(self) -> "NatTransform":
        comps = {}
        for x, m in self.components.items():
            ok, inv = is_isomorphism(m)
            if not ok:
                raise CategoryError("natural transformation is not invertible")
            comps[x] = inv
        return NatTransform(self.target, self.source, comps)


def identity_transform(F: LinFunctor) -> NatTransform:
    return NatTransform(F, F, {x: F.target.identity_morphism(F.objects[x]) for x in range(F.source.n_objects)})


# -- deformations -----------------------------------------------------------------


@dataclass
class LinearDeformation:
    """A linear deformation: total category over R, reduced over S, reduction functor through θ."""

    theta: RingSurjection
    total: LinCategory
    reduced: LinCategory
    functor: LinFunctor
    strict: bool = True
    flat: bool = True
    name: str = ""

    def reduce(self, mor: Morphism) -> Morphism:
        return self.functor(mor)

    def is_structurally_strict(self) -> bool:
        """Identity on objects and bases, and θ maps the tables onto the reduced ones."""
        f = self.functor
        if f.objects != list(range(self.total.n_objects)) or self.total.objects != self.reduced.objects:
            return False
        for (x, y), m in f.maps.items():
            if not np.array_equal(m, rmat_identity(self.theta.target, m.shape[1])):
                return False
        return base_change_category(self.total, self.theta).structurally_equal(self.reduced)


def strict_deformation(total: LinCategory, theta: RingSurjection, name: str = "") -> LinearDeformation:
    red = base_change_category(total, theta)
    return LinearDeformation(theta, total, red, reduction_functor(total, theta, red), True, True, name)


def trivial_deformation(reduced: LinCategory, theta: RingSurjection, name: str = "") -> LinearDeformation:
    """R ⊗_k 𝔟 → 𝔟 for 𝔟 over the residue field k = S."""
    total = extend_scalars(reduced, theta.source)
    return LinearDeformation(theta, total, reduced, reduction_functor(total, theta, reduced), True, True,
                             name or "trivial")


def validate_deformation(d: LinearDeformation, seed: int = 0) -> ValidationReport:
    rep = ValidationReport()
    if not d.total.ring.same_as(d.theta.source) or not d.reduced.ring.same_as(d.theta.target):
        rep.violations.append("categories are not over the source and target of θ")
        return rep
    for v in validate_category(d.total).violations:
        rep.violations.append(f"total category: {v}")
    for v in validate_category(d.reduced).violations:
        rep.violations.append(f"reduced category: {v}")
    if rep.violations:
        return rep
    fun = d.functor
    for v in fun.violations():
        rep.violations.append(f"reduction functor: {v}")
        return rep
    for (x, y), m in fun.maps.items():
        if m.shape[0] != m.shape[1] or (m.shape[0] and rmat_inverse(d.theta.target, m) is None):
            rep.violations.append(
                f"S ⊗ Hom({d.total.objects[x]}, {d.total.objects[y]}) → reduced Hom is not bijective")
            return rep
    image = set(fun.objects)
    for y in range(d.reduced.n_objects):
        if y in image:
            continue
        if not any(find_object_isomorphism(d.reduced, fun.objects[x], y, seed) for x in range(d.total.n_objects)):
            rep.violations.append(f"reduced object {d.reduced.objects[y]} is not in the essential image")
            return rep
    bijective = sorted(fun.objects) == list(range(d.reduced.n_objects))
    rep.info["strict"] = bijective
    rep.info["structurally_strict"] = d.is_structurally_strict()
    rep.info["flat"] = True
    rep.info["nilpotency_order"] = d.theta.nilpotency_order
    if d.strict and not bijective:
        rep.violations.append("declared strict but the object map is not bijective")
    return rep


# -- equivalences of deformations and strictification ------------------------------


def _preimage(fun: LinFunctor, x: int, y: int, target_mor: Morphism) -> Morphism:
    """A morphism in Hom(x, y) of the source with F(m) = target_mor exactly."""
    f = fun.source.field
    sol = f.solve(fun.kmatrix(x, y), target_mor.vector)
    if sol is None:
        raise CategoryError("reduction functor is not full on this Hom-module")
    return Morphism(fun.source, x, y, np.asarray(sol).reshape(fun.source.rank(x, y), fun.source.ring.dim))


def verify_deformation_equivalence(d1: LinearDeformation, d2: LinearDeformation, phi: LinFunctor,
                                   eta: NatTransform, seed: int = 0) -> ValidationReport:
    """Check that φ: total₁ → total₂ is an equivalence with η: f₁ ≅ f₂∘φ."""
    rep = ValidationReport()
    rep.violations.extend(f"functor: {v}" for v in phi.violations())
    if not phi.is_fully_faithful():
        rep.violations.append("functor is not fully faithful")
    image = set(phi.objects)
    for y in range(d2.total.n_objects):
        if y not in image and not any(find_object_isomorphism(d2.total, phi.objects[x], y, seed)
                                      for x in range(d1.total.n_objects)):
            rep.violations.append(f"object {d2.total.objects[y]} is not in the essential image")
    composite = phi.then(d2.functor)
    if eta.source.objects != d1.functor.objects or eta.target.objects != composite.objects:
        rep.violations.append("natural transformation has the wrong endpoints")
        return rep
    eta_c = NatTransform(d1.functor, composite, eta.components)
    rep.violations.extend(f"natural transformation: {v}" for v in eta_c.violations())
    if not eta_c.is_isomorphism():
        rep.violations.append("natural transformation is not an isomorphism")
    return rep


def strictify_equivalence(d1: LinearDeformation, d2: LinearDeformation, phi: LinFunctor, eta: NatTransform):
    """Replace φ by φ′ ≅ φ with f₂∘φ′ = f₁ exactly; d₂ must be strict.

    Returns ``(phi_prime, mu)`` where μ: φ′ → φ is a natural isomorphism.
    """
    from .lift import lift_isomorphism

    f2 = d2.functor
    if sorted(f2.objects) != list(range(d2.reduced.n_objects)):
        raise CategoryError("target deformation is not strict")
    if not eta.is_isomorphism():
        raise CategoryError("η is not a natural isomorphism")
    inv_obj = {b: a for a, b in enumerate(f2.objects)}
    a1, a2 = d1.total, d2.total
    new_obj = [inv_obj[d1.functor.objects[x]] for x in range(a1.n_objects)]
    mu, mu_inv = {}, {}
    for x in range(a1.n_objects):
        ex = eta.components[x]
        m = _preimage(f2, new_obj[x], phi.objects[x], ex)
        ok, ex_inv = is_isomorphism(ex)
        if not ok:
            raise CategoryError("η has a non-invertible component")
        g0 = _preimage(f2, phi.objects[x], new_obj[x], ex_inv)
        mu[x] = m
        mu_inv[x] = lift_isomorphism(m, g0, d2.theta)
    maps = {}
    for x in range(a1.n_objects):
        for y in range(a1.n_objects):
            r_new = a2.rank(new_obj[x], new_obj[y])
            cols = []
            for b in range(a1.rank(x, y)):
                img = phi(a1.basis_morphism(x, y, b))
                cols.append(a2.compose(mu_inv[y], a2.compose(img, mu[x])).coords)
            maps[(x, y)] = np.stack(cols, axis=1) if cols else a2.field.zeros((r_new, 0, a2.ring.dim))
    phi_p = LinFunctor(a1, a2, new_obj, maps)
    return phi_p, NatTransform(phi_p, phi, mu)


@dataclass
class StrictWitness:
    """Equivalence data from a strict replacement to the original deformation."""

    functor: LinFunctor      # 𝔠 → 𝔞
    transform: NatTransform  # h ⇒ f∘φ, components in the reduced category


def make_strict(d: LinearDeformation, seed: int = 0):
    """A strict deformation on the objects of the reduced category, with an equivalence to ``d``.

    Each reduced object B picks a total object g(B) and an isomorphism η_B: B → f(g(B)).
    The new total category has Hom(B, B') = Hom(gB, gB'); its bases are re-chosen so the
    reduction functor is the identity on bases.
    """
    if d.is_structurally_strict():
        wit = StrictWitness(identity_functor(d.total), identity_transform(d.functor))
        return d, wit
    a, b, fun, theta = d.total, d.reduced, d.functor, d.theta
    choice, eta, eta_inv = [], {}, {}
    for y in range(b.n_objects):
        found = None
        for x in range(a.n_objects):
            if fun.objects[x] == y:
                found = (x, b.identity_morphism(y), b.identity_morphism(y))
                break
        if found is None:
            for x in range(a.n_objects):
                iso = find_object_isomorphism(b, y, fun.objects[x], seed)
                if iso is not None:
                    found = (x, iso[0], iso[1])
                    break
        if found is None:
            raise CategoryError(f"reduced object {b.objects[y]} is not in the essential image")
        choice.append(found[0])
        eta[y], eta_inv[y] = found[1], found[2]
    n = b.n_objects
    ranks = {(x, y): a.rank(choice[x], choice[y]) for x in range(n) for y in range(n)}
    comp = {}
    for x, y, z in itertools.product(range(n), repeat=3):
        if 0 in (ranks[(y, z)], ranks[(x, y)], ranks[(x, z)]):
            continue
        comp[(x, y, z)] = a.table(choice[x], choice[y], choice[z])
    ident = {x: a.identity[choice[x]] for x in range(n)}
    c0 = LinCategory(a.ring, b.objects, ranks, comp, ident, name=(a.name + "-strict") if a.name else "strict")
    # h(m) = η_{B'}^{-1} f(m) η_B, as S-matrices per Hom
    changes = {}
    for x in range(n):
        for y in range(n):
            r = ranks[(x, y)]
            if r == 0:
                continue
            hs = b.field.zeros((b.rank(x, y), r, b.ring.dim))
            for j in range(r):
                img = fun(a.basis_morphism(choice[x], choice[y], j))
                hs[:, j, :] = b.compose(eta_inv[y], b.compose(img, eta[x])).coords
            hinv = rmat_inverse(b.ring, hs)
            if hinv is None:
                raise CategoryError("reduction is not fully faithful")
            changes[(x, y)] = theta.lift_coefficients(hinv)
    c = change_hom_basis(c0, changes)
    strict = strict_deformation(c, theta, name=(d.name + "-strict") if d.name else "strict")
    # witness φ: 𝔠 → 𝔞 sends the new basis (old basis · P) to those combinations
    maps = {}
    for x in range(n):
        for y in range(n):
            p = changes.get((x, y), rmat_identity(a.ring, ranks[(x, y)]))
            maps[(x, y)] = p
    phi = LinFunctor(c, a, choice, maps)
    strict_reduced = LinearDeformation(theta, c, b, reduction_functor(c, theta, b), True, True, strict.name)
    composite = phi.then(fun)
    wit = StrictWitness(phi, NatTransform(strict_reduced.functor, composite, {y: eta[y] for y in range(n)}))
    return strict_reduced, wit


def duplicate_object_deformation(d: LinearDeformation, x: int, twist, label: str | None = None) -> LinearDeformation:
    """A non-strict deformation: add a copy x′ of total object x, re-based on Hom(x, x′) by ``twist``.

    Both x and x′ reduce to the same reduced object, so the object map is not injective.
    """
    a = d.total
    ring = a.ring
    n = a.n_objects
    src = list(range(n)) + [x]
    ranks = {(i, j): a.rank(src[i], src[j]) for i in range(n + 1) for j in range(n + 1)}
    comp = {}
    for i, j, k in itertools.product(range(n + 1), repeat=3):
        if 0 in (ranks[(j, k)], ranks[(i, j)], ranks[(i, k)]):
            continue
        comp[(i, j, k)] = a.table(src[i], src[j], src[k])
    ident = {i: a.identity[src[i]] for i in range(n + 1)}
    objs = a.objects + [label or (a.objects[x] + "'")]
    base = LinCategory(ring, objs, ranks, comp, ident, name=(a.name + "+dup") if a.name else "dup")
    twisted = change_hom_basis(base, {(x, n): twist})
    fun = d.functor
    maps = {}
    red_twist = d.theta.apply_coefficients(ring.field.array(twist))
    for i in range(n + 1):
        for j in range(n + 1):
            m = fun.maps[(src[i], src[j])]
            if (i, j) == (x, n):
                # images of the re-based basis elements
                m = rmat_mul(d.theta.target, m, red_twist)
            maps[(i, j)] = m
    new_fun = LinFunctor(twisted, d.reduced, [fun.objects[s] for s in src], maps, ring_map=d.theta)
    return LinearDeformation(d.theta, twisted, d.reduced, new_fun, strict=False, flat=True,
                             name=(d.name + "-nonstrict") if d.name else "nonstrict")
