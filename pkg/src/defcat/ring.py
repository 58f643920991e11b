"""Artinian local base rings, nilpotent surjections and finitely presented modules.

A base ring is a finite-dimensional commutative local k-algebra given by
structure constants on a basis whose element 0 is the unit.  Modules are
presented as cokernels ``R^q --P--> R^p``; every computation runs on the
concrete k-linear model of the module built from its presentation.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import algebra as alg
from .linalg import Field


class MalformedInput(ValueError):
    """Structural problem with user data (shapes, references, types)."""


class InvalidSurjection(ValueError):
    pass


class RingMismatch(ValueError):
    pass


@dataclass
class ValidationReport:
    violations: list = dc_field(default_factory=list)
    info: dict = dc_field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


class BaseRing:
    """Commutative local k-algebra ``R`` with basis ``e_0 = 1, e_1, ..., e_{d-1}``.

    ``constants[i, j, l]`` is the coefficient of ``e_l`` in ``e_i e_j``.  The
    maximal ideal is spanned by the basis elements listed in ``maximal_ideal``
    (default: all but the unit).
    """

    def __init__(self, field: Field, constants, labels=None, maximal_ideal=None, name: str = ""):
        self.field = field
        c = np.asarray(constants, dtype=object)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] == 0:
            raise MalformedInput(f"structure constants must be a nonempty d×d×d array, got shape {c.shape}")
        self.constants = field.array(c)
        self.dim = c.shape[0]
        self.labels = list(labels) if labels is not None else ["1"] + [f"m{i}" for i in range(1, self.dim)]
        if len(self.labels) != self.dim:
            raise MalformedInput("number of basis labels does not match dimension")
        if maximal_ideal is None:
            maximal_ideal = list(range(1, self.dim))
        self.maximal_ideal = [int(i) for i in maximal_ideal]
        if any(i <= 0 or i >= self.dim for i in self.maximal_ideal):
            raise MalformedInput("maximal ideal indices must be in 1..d-1")
        self.name = name

    def __repr__(self):
        return f"BaseRing({self.name or self.labels}, {self.field})"

    def same_as(self, other: "BaseRing") -> bool:
        return (self is other) or (
            self.field == other.field and self.dim == other.dim
            and np.array_equal(self.constants, other.constants)
        )

    @cached_property
    def algebra(self) -> alg.Algebra:
        f = self.field
        radical = f.zeros((self.dim, len(self.maximal_ideal)))
        for k, i in enumerate(self.maximal_ideal):
            radical[i, k] = f.scalar(1)
        return alg.Algebra(f, self.constants, self.one, [0] * self.dim, [0] * self.dim, ["*"],
                           radical=radical, primitive=[self.one], labels=self.labels)

    @property
    def one(self) -> np.ndarray:
        return self.basis_element(0)

    def zero(self) -> np.ndarray:
        return self.field.zeros(self.dim)

    def basis_element(self, i: int) -> np.ndarray:
        e = self.field.zeros(self.dim)
        e[i] = self.field.scalar(1)
        return e

    def element(self, coords) -> np.ndarray:
        return self.field.array(coords, shape=(self.dim,))

    def mul(self, a, b) -> np.ndarray:
        return self.field.einsum("i,j,ijl->l", a, b, self.constants)

    def mul_matrix(self, a) -> np.ndarray:
        """k-matrix of multiplication by ``a``."""
        return self.field.einsum("i,ijl->lj", a, self.constants)

    def residue(self, a):
        """Image of ``a`` in the residue field k = R/m."""
        return a[0]

    def in_maximal_ideal(self, a) -> bool:
        return a[0] == 0

    def power_of_maximal_ideal(self, k: int) -> np.ndarray:
        f = self.field
        m = self.algebra.radical
        cur = f.eye(self.dim)
        for _ in range(k):
            cur = _ideal_product(self, cur, m)
        return cur

    @cached_property
    def nilpotency_order(self) -> int | None:
        m = self.algebra.radical
        cur = m
        n = 1
        while cur.shape[1]:
            cur = _ideal_product(self, cur, m)
            n += 1
            if n > self.dim + 1:
                return None
        return n

    def random_element(self, rng, in_ideal: bool = False) -> np.ndarray:
        a = self.field.random(rng, self.dim)
        if in_ideal:
            a[0] = self.field.scalar(0)
        return a


def _ideal_product(ring: BaseRing, a_basis, b_basis) -> np.ndarray:
    f = ring.field
    if a_basis.shape[1] == 0 or b_basis.shape[1] == 0:
        return f.zeros((ring.dim, 0))
    prods = f.einsum("ia,jb,ijl->lab", a_basis, b_basis, ring.constants).reshape(ring.dim, -1)
    return f.colspace(prods)


def validate_base_ring(ring: BaseRing) -> ValidationReport:
    """Check commutativity, associativity, unit law and nilpotency of the maximal ideal."""
    f = ring.field
    c = ring.constants
    d = ring.dim
    rep = ValidationReport()
    for i in range(d):
        for j in range(i + 1, d):
            if not np.array_equal(c[i, j], c[j, i]):
                rep.violations.append(f"commutativity fails on pair ({ring.labels[i]}, {ring.labels[j]})")
    left = f.einsum("ijm,mkl->ijkl", c, c)
    right = f.einsum("jkm,iml->ijkl", c, c)
    bad = np.argwhere(np.any(left != right, axis=3))
    for i, j, k in bad:
        rep.violations.append(
            f"associativity fails on triple ({ring.labels[i]}, {ring.labels[j]}, {ring.labels[k]})")
    eye = f.eye(d)
    for j in range(d):
        if not np.array_equal(c[0, j], eye[j]) or not np.array_equal(c[j, 0], eye[j]):
            rep.violations.append(f"basis element 0 is not a unit on {ring.labels[j]}")
    m = ring.algebra.radical
    prod = _ideal_product(ring, m, f.eye(d))
    if m.shape[1] and not all(f.in_span(m, prod[:, k]) for k in range(prod.shape[1])):
        rep.violations.append("maximal ideal is not an ideal")
    cur = m
    order = 1
    while cur.shape[1] and order <= d:
        cur = _ideal_product(ring, cur, m)
        order += 1
    if cur.shape[1]:
        rep.violations.append("maximal ideal is not nilpotent")
    else:
        rep.info["nilpotency_order"] = order
    return rep


# -- standard rings -------------------------------------------------------------


def residue_field_ring(field: Field) -> BaseRing:
    return BaseRing(field, [[[1]]], ["1"], [], name=f"{field}")


def truncated_polynomial(field: Field, n: int, var: str = "e") -> BaseRing:
    """k[var]/(var^n) on the monomial basis."""
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                c[i, j, i + j] = 1
    labels = ["1"] + [var if k == 1 else f"{var}^{k}" for k in range(1, n)]
    return BaseRing(field, c, labels, name=f"{field}[{var}]/({var}^{n})")


def dual_numbers(field: Field, var: str = "e") -> BaseRing:
    return truncated_polynomial(field, 2, var)


def square_zero_ring(field: Field, generators: list[str]) -> BaseRing:
    """k ⊕ V with V·V = 0, e.g. k[x,y]/(x², xy, y²)."""
    d = len(generators) + 1
    c = np.zeros((d, d, d), dtype=np.int64)
    for j in range(d):
        c[0, j, j] = 1
        c[j, 0, j] = 1
    return BaseRing(field, c, ["1"] + list(generators), name=f"{field}[{','.join(generators)}]/(deg 2)")


# -- surjections ------------------------------------------------------------


class RingSurjection:
    """A surjective ring map θ: R → S given by its matrix on bases (d_S × d_R)."""

    def __init__(self, source: BaseRing, target: BaseRing, matrix, check: bool = True):
        if source.field != target.field:
            raise RingMismatch("source and target must share the base field")
        self.source = source
        self.target = target
        f = source.field
        self.matrix = f.array(matrix, shape=(target.dim, source.dim))
        if check:
            errs = self.violations()
            if errs:
                raise InvalidSurjection("; ".join(errs))

    def __repr__(self):
        return f"RingSurjection({self.source!r} -> {self.target!r})"

    @property
    def field(self) -> Field:
        return self.source.field

    def violations(self) -> list[str]:
        f = self.field
        errs = []
        if f.rank(self.matrix) != self.target.dim:
            errs.append("map is not surjective")
        if not np.array_equal(self.apply(self.source.one), self.target.one):
            errs.append("map does not preserve the unit")
        for i in range(self.source.dim):
            for j in range(self.source.dim):
                a, b = self.source.basis_element(i), self.source.basis_element(j)
                if not np.array_equal(self.apply(self.source.mul(a, b)),
                                      self.target.mul(self.apply(a), self.apply(b))):
                    errs.append(f"map is not multiplicative on ({self.source.labels[i]}, {self.source.labels[j]})")
        return errs

    def apply(self, a) -> np.ndarray:
        return self.field.dot(self.matrix, np.asarray(a))

    def apply_coefficients(self, arr) -> np.ndarray:
        """Apply θ along the last axis of an array of R-coordinates."""
        return self.field.reduce(np.tensordot(np.asarray(arr), self.matrix, axes=(-1, 1)))

    @cached_property
    def section(self) -> np.ndarray:
        """A k-linear section σ (d_R × d_S) with θσ = 1; σ(1) = 1."""
        f = self.field
        sec = f.solve(self.matrix, f.eye(self.target.dim))
        sec[:, 0] = self.source.one
        return sec

    def lift(self, s) -> np.ndarray:
        return self.field.dot(self.section, np.asarray(s))

    def lift_coefficients(self, arr) -> np.ndarray:
        return self.field.reduce(np.tensordot(np.asarray(arr), self.section, axes=(-1, 1)))

    @cached_property
    def kernel_basis(self) -> np.ndarray:
        return self.field.nullspace(self.matrix)

    @cached_property
    def nilpotency_order(self) -> int:
        return len(kernel_filtration(self))

    def is_identity(self) -> bool:
        return self.kernel_basis.shape[1] == 0


def identity_surjection(ring: BaseRing) -> RingSurjection:
    return RingSurjection(ring, ring, ring.field.eye(ring.dim))


def residue_map(ring: BaseRing) -> RingSurjection:
    """R → k, killing the maximal ideal."""
    f = ring.field
    mat = f.zeros((1, ring.dim))
    mat[0, 0] = f.scalar(1)
    return RingSurjection(ring, residue_field_ring(f), mat)


def truncation(source: BaseRing, target: BaseRing) -> RingSurjection:
    """k[e]/(e^n) → k[e]/(e^m) for m ≤ n on monomial bases."""
    f = source.field
    mat = f.zeros((target.dim, source.dim))
    for i in range(target.dim):
        mat[i, i] = f.scalar(1)
    return RingSurjection(source, target, mat)


def kernel_filtration(theta: RingSurjection) -> list[np.ndarray]:
    """Bases of I, I², ..., I^n = 0 for I = ker θ; the length is the nilpotency order."""
    f = theta.field
    ring = theta.source
    ideal = theta.kernel_basis
    if ideal.shape[1] == 0:
        return [ideal]
    chain = [ideal]
    cur = ideal
    while cur.shape[1]:
        cur = _ideal_product(ring, cur, ideal)
        if len(chain) > ring.dim:
            raise InvalidSurjection("kernel is not nilpotent")
        chain.append(cur)
    return chain


# -- finitely presented modules ------------------------------------------------


class FpModule:
    """coker(R^q → R^p) for a presentation matrix ``P`` of shape (p, q, d)."""

    def __init__(self, ring: BaseRing, presentation, module: alg.Module | None = None):
        self.ring = ring
        f = ring.field
        pmat = np.asarray(presentation, dtype=object)
        if pmat.ndim == 2 and pmat.size == 0:
            pmat = pmat.reshape(pmat.shape + (ring.dim,))
        if pmat.ndim != 3 or pmat.shape[2] != ring.dim:
            raise MalformedInput(f"presentation must have shape (p, q, {ring.dim}), got {pmat.shape}")
        self.presentation = f.array(pmat) if pmat.size else f.zeros(pmat.shape)
        if module is not None:
            self.__dict__["module"] = module

    @classmethod
    def free(cls, ring: BaseRing, rank: int) -> "FpModule":
        return cls(ring, ring.field.zeros((rank, 0, ring.dim)))

    @classmethod
    def residue_field(cls, ring: BaseRing) -> "FpModule":
        f = ring.field
        p = f.zeros((1, len(ring.maximal_ideal), ring.dim))
        for k, i in enumerate(ring.maximal_ideal):
            p[0, k, i] = f.scalar(1)
        return cls(ring, p)

    @classmethod
    def cyclic(cls, ring: BaseRing, ideal_generators) -> "FpModule":
        """R / (generators)."""
        gens = [ring.field.array(g) for g in ideal_generators]
        p = ring.field.zeros((1, len(gens), ring.dim))
        for k, g in enumerate(gens):
            p[0, k] = g
        return cls(ring, p)

    @classmethod
    def from_module(cls, ring: BaseRing, module: alg.Module) -> "FpModule":
        """Minimal presentation of a concrete R-module."""
        pres = alg.minimal_presentation(module)
        p, q, d = len(pres.bases), len(pres.relations), ring.dim
        mat = ring.field.zeros((p, q, d))
        for l, rel in enumerate(pres.relations):
            mat[:, l, :] = np.asarray(rel).reshape(p, d)
        module._presentation = pres
        return cls(ring, mat, module=module)

    def __repr__(self):
        return f"FpModule(gens={self.n_generators}, rels={self.n_relations}, dim={self.dim})"

    @property
    def n_generators(self) -> int:
        return self.presentation.shape[0]

    @property
    def n_relations(self) -> int:
        return self.presentation.shape[1]

    @cached_property
    def module(self) -> alg.Module:
        ring, f = self.ring, self.ring.field
        p, q, d = self.presentation.shape
        free = alg.vertex_free_module(ring.algebra, [0] * p)
        rels = self.presentation.transpose(0, 2, 1).reshape(p * d, q) if q else f.zeros((p * d, 0))
        quo = alg.quotient(free, rels)
        pres = alg.Presentation(
            idempotents=[ring.one] * p,
            bases=[f.eye(d)] * p,
            cover=quo.projection,
            section=quo.inclusion,
            relations=[rels[:, l] for l in range(q)],
            relation_idempotents=[ring.one] * q,
            vertices=[0] * p,
            relation_vertices=[0] * q,
        )
        return alg.Module(ring.algebra, quo.action, pres)

    @property
    def dim(self) -> int:
        """Dimension over the residue field k."""
        return self.module.dim

    def is_zero(self) -> bool:
        return self.dim == 0


def module_from_concrete(ring: BaseRing, module: alg.Module) -> FpModule:
    return FpModule.from_module(ring, module)


@dataclass
class ModuleMap:
    """An R-linear map between fp modules.

    ``lift`` (p_tgt × p_src × d) gives images of source generators on the target's
    free cover; ``matrix`` is the induced k-linear map on concrete models.
    """

    source: FpModule
    target: FpModule
    matrix: np.ndarray

    @classmethod
    def from_lift(cls, source: FpModule, target: FpModule, lift) -> "ModuleMap":
        f = source.ring.field
        lift = f.array(lift)
        pt, ps, d = target.n_generators, source.n_generators, source.ring.dim
        # image of generator j of the source in the target's concrete model
        tcover = target.module.presentation.cover
        gens = [f.dot(tcover, lift[:, j, :].reshape(pt * d)) for j in range(ps)]
        spres = source.module.presentation
        ring_alg = source.ring.algebra
        cols = []
        for j, g in enumerate(gens):
            cols.append(f.einsum("iab,b->ai", target.module.action, g))
        full = np.concatenate(cols, axis=1) if cols else f.zeros((target.dim, 0))
        mat = f.dot(full, spres.section)
        out = cls(source, target, mat)
        out.lift = lift
        return out

    def is_valid(self) -> bool:
        return alg.is_module_map(self.matrix, self.source.module, self.target.module)

    def relation_witness(self):
        """W with lift·P_src = P_tgt·W (over R), or None if the lift is incompatible."""
        lift = getattr(self, "lift", None)
        if lift is None:
            return None
        ring, f = self.source.ring, self.source.ring.field
        d = ring.dim
        pt, qt = self.target.n_generators, self.target.n_relations
        ps, qs = self.source.n_generators, self.source.n_relations
        # columns of lift·P_src as vectors of R^{pt}
        lp = f.einsum("jsa,skb,abc->jkc", lift, self.source.presentation, ring.constants)
        # R-span of target relations, as a k-matrix (pt*d × qt*d)
        cols = []
        for l in range(qt):
            for b in range(d):
                cols.append(f.einsum("ja,abc->jc", self.target.presentation[:, l, :],
                                               ring.constants[:, b, :]).reshape(-1))
        big = np.stack(cols, axis=1) if cols else f.zeros((pt * d, 0))
        out = f.zeros((qt, qs, d))
        for k in range(qs):
            x = f.solve(big, lp[:, k, :].reshape(-1))
            if x is None:
                return None
            out[:, k, :] = np.asarray(x).reshape(qt, d)
        return out


# -- generic operations on modules over algebras with central R-action --------


def _central(mod: alg.Module, r) -> np.ndarray:
    f = mod.field
    if mod.dim == 0:
        return f.zeros((0, 0))
    return f.reduce(np.tensordot(np.asarray(r), mod.central_action, axes=(0, 0)))


def _block_matrix(mod: alg.Module, coeffs, transpose: bool = False) -> np.ndarray:
    """Block matrix over mod with blocks the central action of coeffs[j, l]."""
    f = mod.field
    rows, cols = coeffs.shape[0], coeffs.shape[1]
    if transpose:
        rows, cols = cols, rows
    d = mod.dim
    out = f.zeros((rows * d, cols * d))
    for a in range(rows):
        for b in range(cols):
            c = coeffs[b, a] if transpose else coeffs[a, b]
            if np.any(c != 0):
                out[a * d:(a + 1) * d, b * d:(b + 1) * d] = _central(mod, c)
    return out


def power(mod: alg.Module, n: int) -> alg.Module:
    return alg.direct_sum([mod] * n, mod.algebra)


def tensor_with_presentation(pmat, mod: alg.Module) -> alg.Module:
    """X ⊗_R M for X = coker(P); M any module with central R-action."""
    p, q = pmat.shape[0], pmat.shape[1]
    big = power(mod, p)
    if q == 0 or mod.dim == 0:
        return big
    return alg.cokernel(_block_matrix(mod, pmat), big)


def hom_from_presentation(pmat, mod: alg.Module) -> alg.Module:
    """Hom_R(X, M) = ker(M^p → M^q) for X = coker(P)."""
    p, q = pmat.shape[0], pmat.shape[1]
    big = power(mod, p)
    if q == 0 or mod.dim == 0:
        return big
    return alg.kernel(_block_matrix(mod, pmat, transpose=True), big)


@dataclass
class Resolution:
    """Free resolution F_L → ... → F_0 → M of a module over a base ring.

    ``ranks[i]`` is rank F_i; ``differentials[i-1]`` is d_i: F_i → F_{i-1} as a
    (ranks[i-1] × ranks[i] × d) matrix over R; ``augmentation`` maps F_0 onto M.
    """

    ring: BaseRing
    ranks: list
    differentials: list
    augmentation: np.ndarray
    complete: bool

    @property
    def length(self) -> int:
        return len(self.ranks) - 1 if self.ranks and self.ranks[-1] else max(len(self.ranks) - 2, 0)

    def is_minimal(self) -> bool:
        return all(np.all(dm[..., 0] == 0) for dm in self.differentials)


def minimal_free_resolution(m: FpModule, length: int) -> Resolution:
    """Minimal free resolution truncated at homological degree ``length``."""
    if length < 0:
        raise MalformedInput("length must be nonnegative")
    ring, f = m.ring, m.ring.field
    d = ring.dim
    mod = m.module
    free, cover, _, _ = alg.projective_cover(mod)
    ranks = [free.dim // d]
    diffs = []
    aug = cover
    ker = alg.kernel(cover, free) if free.dim else alg.zero_module(ring.algebra)
    complete = ker.dim == 0
    for i in range(1, length + 1):
        if ker.dim == 0:
            complete = True
            break
        nfree, ncover, _, _ = alg.projective_cover(ker)
        gens = f.dot(ker.inclusion, ncover)  # images of F_i basis in F_{i-1} coordinates
        b_prev, b_new = ranks[-1], nfree.dim // d
        dm = f.zeros((b_prev, b_new, d))
        for j in range(b_new):
            dm[:, j, :] = gens[:, j * d].reshape(b_prev, d)
        diffs.append(dm)
        ranks.append(b_new)
        ker = alg.kernel(ncover, nfree)
        complete = ker.dim == 0
    return Resolution(ring, ranks, diffs, aug, complete)


def betti_numbers(m: FpModule, length: int) -> list[int]:
    return minimal_free_resolution(m, length).ranks


def _check_rings(*rings):
    first = rings[0]
    for r in rings[1:]:
        if not first.same_as(r):
            raise RingMismatch("modules are over different base rings")


def tor_module(i: int, x: FpModule, mod: alg.Module) -> alg.Module:
    """Tor_i^R(X, M) for M any module with central R-action."""
    if i < 0:
        raise MalformedInput("degree must be nonnegative")
    res = minimal_free_resolution(x, i + 1)
    ranks = res.ranks + [0] * (i + 2 - len(res.ranks))
    f = mod.field
    ci = power(mod, ranks[i])
    if ci.dim == 0:
        return ci
    if i > 0 and i - 1 < len(res.differentials):
        cycles = f.nullspace(_block_matrix(mod, res.differentials[i - 1]))
    else:
        cycles = f.eye(ci.dim)
    if i < len(res.differentials) and ranks[i + 1]:
        bounds = f.colspace(_block_matrix(mod, res.differentials[i]))
    else:
        bounds = f.zeros((ci.dim, 0))
    return alg.subquotient(ci, cycles, bounds)


def ext_module(i: int, x: FpModule, mod: alg.Module) -> alg.Module:
    """Ext^i_R(X, M) for M any module with central R-action."""
    if i < 0:
        raise MalformedInput("degree must be nonnegative")
    res = minimal_free_resolution(x, i + 1)
    ranks = res.ranks + [0] * (i + 2 - len(res.ranks))
    f = mod.field
    ci = power(mod, ranks[i])
    if ci.dim == 0:
        return ci
    if i < len(res.differentials) and ranks[i + 1]:
        cycles = f.nullspace(_block_matrix(mod, res.differentials[i], transpose=True))
    else:
        cycles = f.eye(ci.dim)
    if i > 0 and i - 1 < len(res.differentials):
        bounds = f.colspace(_block_matrix(mod, res.differentials[i - 1], transpose=True))
    else:
        bounds = f.zeros((ci.dim, 0))
    return alg.subquotient(ci, cycles, bounds)


def tensor_R(x: FpModule, m: FpModule) -> FpModule:
    _check_rings(x.ring, m.ring)
    return FpModule.from_module(x.ring, tensor_with_presentation(x.presentation, m.module))


def hom_R(x: FpModule, m: FpModule) -> FpModule:
    _check_rings(x.ring, m.ring)
    return FpModule.from_module(x.ring, hom_from_presentation(x.presentation, m.module))


def tor(i: int, x: FpModule, m: FpModule) -> FpModule:
    _check_rings(x.ring, m.ring)
    return FpModule.from_module(x.ring, tor_module(i, x, m.module))


def ext(i: int, x: FpModule, m: FpModule) -> FpModule:
    _check_rings(x.ring, m.ring)
    return FpModule.from_module(x.ring, ext_module(i, x, m.module))


def matlis_dual(mod: alg.Module) -> alg.Module:
    """Hom_k(M, k) with the transposed action; R is commutative so this is again an R-module."""
    return alg.Module(mod.algebra, np.ascontiguousarray(np.transpose(mod.action, (0, 2, 1))))


def is_flat_module(mod: alg.Module, ring: BaseRing) -> bool:
    """Tor_1(k, M) = 0 for a module with central R-action."""
    return tor_module(1, FpModule.residue_field(ring), mod).dim == 0


def is_flat(m: FpModule) -> bool:
    return is_flat_module(m.module, m.ring)


def is_coflat_module(mod: alg.Module, ring: BaseRing) -> bool:
    dual = alg.Module(ring.algebra, np.ascontiguousarray(np.transpose(mod.central_action, (0, 2, 1))))
    return is_flat_module(dual, ring)


def is_coflat(m: FpModule) -> bool:
    return is_coflat_module(m.module, m.ring)


def restrict_to_base(mod: alg.Module, ring: BaseRing) -> alg.Module:
    """Forget a Λ-module down to its underlying R-module."""
    return alg.Module(ring.algebra, mod.central_action)


def isomorphism(a: FpModule, b: FpModule):
    """Explicit mutually inverse maps between the concrete models, or None."""
    _check_rings(a.ring, b.ring)
    return alg.find_isomorphism(a.module, b.module)


def random_module(ring: BaseRing, rng, max_gens: int = 3, max_rels: int = 3, in_ideal: bool = False) -> FpModule:
    f = ring.field
    p = int(rng.integers(1, max_gens + 1))
    q = int(rng.integers(0, max_rels + 1))
    pm = f.random(rng, (p, q, ring.dim))
    if in_ideal and q:
        pm[:, :, 0] = 0
    return FpModule(ring, pm)


# -- matrices over R --------------------------------------------------------
#
# An R-matrix of shape (r1, r2, d) stores R-coordinates per entry.  Its k-linear
# form acts on flattened coordinates with index ``row * d + t``.


def rmat_to_k(ring: BaseRing, mat) -> np.ndarray:
    r1, r2, d = mat.shape
    f = ring.field
    if r1 == 0 or r2 == 0:
        return f.zeros((r1 * d, r2 * d))
    k = f.einsum("ijv,tvw->iwjt", mat, ring.constants)
    return k.reshape(r1 * d, r2 * d)


def rmat_from_k(ring: BaseRing, kmat, r1: int, r2: int) -> np.ndarray:
    """Recover the R-matrix of an R-linear k-matrix from its action on R-basis vectors."""
    d = ring.dim
    if r1 == 0 or r2 == 0:
        return ring.field.zeros((r1, r2, d))
    cols = np.asarray(kmat)[:, ::d]
    return np.ascontiguousarray(cols.reshape(r1, d, r2).transpose(0, 2, 1))


def rmat_mul(ring: BaseRing, a, b) -> np.ndarray:
    f = ring.field
    if a.shape[1] == 0:
        return f.zeros((a.shape[0], b.shape[1], ring.dim))
    return f.einsum("iju,jkv,uvw->ikw", a, b, ring.constants)


def rmat_identity(ring: BaseRing, r: int) -> np.ndarray:
    out = ring.field.zeros((r, r, ring.dim))
    for i in range(r):
        out[i, i, 0] = ring.field.scalar(1)
    return out


def rmat_inverse(ring: BaseRing, a):
    """Inverse of a square R-matrix, or None when it is not invertible."""
    r = a.shape[0]
    if a.shape[1] != r:
        return None
    inv = ring.field.inverse(rmat_to_k(ring, a))
    if inv is None:
        return None
    return rmat_from_k(ring, inv, r, r)


def rmat_reduce(theta: RingSurjection, a) -> np.ndarray:
    return theta.apply_coefficients(a)


def rmat_lift(theta: RingSurjection, a) -> np.ndarray:
    return theta.lift_coefficients(a)
