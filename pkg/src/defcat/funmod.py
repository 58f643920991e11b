"""Finitely presented functor modules over a finite linear category.

A covariant module F over 𝔞 is a left module over the category algebra Λ(𝔞);
the representable 𝔞(A, −) is Λe_A.  A presentation is a matrix δ with
δ[j][i] ∈ 𝔞(B_j, A_i), read as the map ⊕ᵢ 𝔞(Aᵢ, −) → ⊕ⱼ 𝔞(Bⱼ, −) sending
u ∈ 𝔞(Aᵢ, X) to (u∘δ[j][i])ⱼ.  Every module also carries its concrete model
(a :class:`~defcat.algebra.Module`), on which all computations run.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import algebra as alg
from . import ring as rg
from .lincat import LinCategory, Morphism, validate_category
from .ring import BaseRing, FpModule, MalformedInput


class CategoryMismatch(ValueError):
    pass


def _local_slice(cat: LinCategory, b: int, a: int) -> slice:
    """Position of Hom(b, a) inside the coordinates of Λe_b."""
    off = cat.hom_offsets
    start = off[(b, 0)].start
    sl = off[(b, a)]
    return slice(sl.start - start, sl.stop - start)


class FpFunctorModule:
    """coker(⊕ᵢ 𝔞(Aᵢ, −) → ⊕ⱼ 𝔞(Bⱼ, −)) with ``delta[j][i]`` the R-coordinates in 𝔞(Bⱼ, Aᵢ)."""

    def __init__(self, category: LinCategory, sources, targets, delta, module: alg.Module | None = None):
        self.category = category
        self.sources = [category.obj(a) for a in sources]
        self.targets = [category.obj(b) for b in targets]
        f = category.field
        d = category.ring.dim
        p, q = len(self.targets), len(self.sources)
        rows = []
        for j in range(p):
            row = []
            for i in range(q):
                shape = (category.rank(self.targets[j], self.sources[i]), d)
                ent = delta[j][i] if delta is not None else None
                ent = f.zeros(shape) if ent is None else f.array(ent)
                if ent.ndim == 1 and ent.size == shape[0] * shape[1]:
                    ent = ent.reshape(shape)
                if ent.shape != shape:
                    raise MalformedInput(f"presentation entry ({j}, {i}) has shape {ent.shape}, expected {shape}")
                row.append(ent)
            rows.append(row)
        self.delta = rows
        if module is not None:
            self.__dict__["module"] = module

    def __repr__(self):
        return f"FpFunctorModule(gens={self.targets}, rels={self.sources}, dims={self.dims()})"

    @property
    def ring(self) -> BaseRing:
        return self.category.ring

    @cached_property
    def module(self) -> alg.Module:
        cat = self.category
        lam = cat.algebra
        f = cat.field
        free = alg.vertex_free_module(lam, self.targets)
        blocks = [len(lam.vertex_indices(b)) for b in self.targets]
        offs = np.concatenate([[0], np.cumsum(blocks)]).astype(int)
        rels = f.zeros((free.dim, len(self.sources)))
        for i, a in enumerate(self.sources):
            for j, b in enumerate(self.targets):
                sl = _local_slice(cat, b, a)
                rels[offs[j] + sl.start:offs[j] + sl.stop, i] = self.delta[j][i].reshape(-1)
        quo = alg.quotient(free, rels)
        pres = alg.Presentation(
            idempotents=[lam.vertex_idempotent(b) for b in self.targets],
            bases=[alg._vertex_basis(lam, b) for b in self.targets],
            cover=quo.projection,
            section=quo.inclusion,
            relations=[rels[:, i] for i in range(len(self.sources))],
            relation_idempotents=[lam.vertex_idempotent(a) for a in self.sources],
            vertices=list(self.targets),
            relation_vertices=list(self.sources),
        )
        return alg.Module(lam, quo.action, pres)

    @classmethod
    def from_module(cls, category: LinCategory, module: alg.Module) -> "FpFunctorModule":
        """Read off a presentation by representables from a concrete module."""
        pres = module.presentation
        if not pres.vertices or len(pres.vertices) != len(pres.bases) or None in pres.vertices \
                or any(not np.array_equal(e, category.algebra.vertex_idempotent(v))
                       for e, v in zip(pres.idempotents, pres.vertices)):
            pres = alg.greedy_presentation(module)
            module._presentation = pres
        if pres.relations and len(pres.relation_vertices) != len(pres.relations):
            pres = alg.greedy_presentation(module)
            module._presentation = pres
        d = category.ring.dim
        offs = pres.offsets
        delta = []
        for j, b in enumerate(pres.vertices):
            row = []
            for k, a in enumerate(pres.relation_vertices):
                sl = _local_slice(category, b, a)
                blk = pres.relations[k][offs[j]:offs[j + 1]]
                row.append(np.asarray(blk[sl]).reshape(-1, d))
            delta.append(row)
        return cls(category, list(pres.relation_vertices), list(pres.vertices), delta, module=module)

    # -- values ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.module.dim

    def dims(self) -> list[int]:
        return self.module.vertex_dims()

    def is_zero(self) -> bool:
        return self.dim == 0

    def value_module(self, obj) -> alg.Module:
        """F(A) as a concrete R-module (with ``inclusion`` into the total space)."""
        a = self.category.obj(obj)
        m = self.module
        basis = m.vertex_space(a)
        f = m.field
        ring = self.ring
        if basis.shape[1] == 0:
            out = alg.zero_module(ring.algebra)
            out.inclusion = f.zeros((m.dim, 0))
            return out
        linv = f.left_inverse(basis)
        act = f.einsum("ka,tab,bl->tkl", linv, m.central_action, basis)
        out = alg.Module(ring.algebra, act)
        out.inclusion = basis
        out.projection = linv
        return out


def evaluate(F: FpFunctorModule, obj) -> FpModule:
    """The value F(A) as a finitely presented R-module."""
    return FpModule.from_module(F.ring, F.value_module(obj))


def representable(cat: LinCategory, obj) -> FpFunctorModule:
    return FpFunctorModule(cat, [], [cat.obj(obj)], [[]])


def zero_functor_module(cat: LinCategory) -> FpFunctorModule:
    return FpFunctorModule.from_module(cat, alg.zero_module(cat.algebra))


def direct_sum(mods: list[FpFunctorModule]) -> FpFunctorModule:
    cat = mods[0].category
    return FpFunctorModule.from_module(cat, alg.direct_sum([m.module for m in mods], cat.algebra))


def wrap(cat: LinCategory, module: alg.Module) -> FpFunctorModule:
    return FpFunctorModule.from_module(cat, module)


# -- maps -----------------------------------------------------------------------


@dataclass
class FunctorModuleMap:
    source: FpFunctorModule
    target: FpFunctorModule
    matrix: np.ndarray

    def is_valid(self) -> bool:
        return alg.is_module_map(self.matrix, self.source.module, self.target.module)

    def lift(self) -> list:
        """Images of the source generators on the target's representable cover.

        Entry [k][j] lies in 𝔞(B'_k, B_j): the Yoneda description of the map on covers.
        """
        cat = self.source.category
        f = cat.field
        lam = cat.algebra
        d = cat.ring.dim
        sp = self.source.module.presentation
        tp = self.target.module.presentation
        out = [[None] * len(sp.vertices) for _ in tp.vertices]
        toffs = tp.offsets
        for j, b in enumerate(sp.vertices):
            gen = f.dot(sp.cover[:, sp.offsets[j]:sp.offsets[j + 1]], f.dot(f.left_inverse(sp.bases[j]),
                                                                                 lam.vertex_idempotent(b)))
            img = f.dot(self.matrix, gen)
            pre = f.dot(tp.section, img)
            for k, bb in enumerate(tp.vertices):
                blk = pre[toffs[k]:toffs[k + 1]]
                out[k][j] = np.asarray(blk[_local_slice(cat, bb, b)]).reshape(-1, d)
        return out

    def is_mono(self) -> bool:
        return self.source.category.field.rank(self.matrix) == self.source.dim

    def is_epi(self) -> bool:
        return self.source.category.field.rank(self.matrix) == self.target.dim

    def then(self, other: "FunctorModuleMap") -> "FunctorModuleMap":
        return FunctorModuleMap(self.source, other.target, self.source.category.field.dot(other.matrix, self.matrix))


def identity_map(F: FpFunctorModule) -> FunctorModuleMap:
    return FunctorModuleMap(F, F, F.category.field.eye(F.dim))


def zero_map(F: FpFunctorModule, G: FpFunctorModule) -> FunctorModuleMap:
    return FunctorModuleMap(F, G, F.category.field.zeros((G.dim, F.dim)))


def _same_category(F: FpFunctorModule, G: FpFunctorModule):
    if F.category is not G.category and not F.category.structurally_equal(G.category):
        raise CategoryMismatch("modules over different categories")


def kernel(fm: FunctorModuleMap):
    """(K, inclusion K → source)."""
    k = alg.kernel(fm.matrix, fm.source.module)
    K = wrap(fm.source.category, k)
    return K, FunctorModuleMap(K, fm.source, k.inclusion)


def cokernel(fm: FunctorModuleMap):
    """(Q, projection target → Q)."""
    q = alg.cokernel(fm.matrix, fm.target.module)
    Q = wrap(fm.source.category, q)
    return Q, FunctorModuleMap(fm.target, Q, q.projection)


def image(fm: FunctorModuleMap):
    """(I, inclusion I → target, corestriction source → I)."""
    f = fm.source.category.field
    i = alg.image(fm.matrix, fm.target.module)
    I = wrap(fm.source.category, i)
    core = f.dot(i.projection, fm.matrix)
    return I, FunctorModuleMap(I, fm.target, i.inclusion), FunctorModuleMap(fm.source, I, core)


# -- Hom and Ext ------------------------------------------------------------------


@dataclass
class FunctorHom:
    """Hom(F, G) as an R-module, with maps recoverable from coordinates."""

    source: FpFunctorModule
    target: FpFunctorModule
    space: alg.HomSpace

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def module(self) -> FpModule:
        return FpModule.from_module(self.source.ring, self.space.module)

    def element(self, coords) -> FunctorModuleMap:
        return FunctorModuleMap(self.source, self.target, self.space.element(coords))

    def basis_maps(self) -> list[FunctorModuleMap]:
        return [FunctorModuleMap(self.source, self.target, self.space.basis[k]) for k in range(self.dim)]

    def coordinates(self, fm: FunctorModuleMap):
        return self.space.coordinates(fm.matrix)


def hom_functor_modules(F: FpFunctorModule, G: FpFunctorModule) -> FunctorHom:
    _same_category(F, G)
    return FunctorHom(F, G, alg.hom(F.module, G.module))


@dataclass
class ProjectiveResolution:
    """Resolution by sums of representables.

    ``vertices[i]`` lists the objects of the i-th term; ``differentials[i-1][k][j]``
    is the algebra element λ with d_i(generator k) having component λ·(generator j).
    """

    category: LinCategory
    vertices: list
    differentials: list
    complete: bool

    def term(self, i: int) -> FpFunctorModule:
        cat = self.category
        return FpFunctorModule(cat, [], self.vertices[i], [[] for _ in self.vertices[i]])

    def differential_entry(self, i: int, k: int, j: int) -> Morphism:
        """d_i on generator k as a morphism in 𝔞(B_j, B_k) (Yoneda)."""
        cat = self.category
        b_j, b_k = self.vertices[i - 1][j], self.vertices[i][k]
        el = self.differentials[i - 1][k][j]
        return cat.morphism(b_j, b_k, np.asarray(el)[cat.hom_offsets[(b_j, b_k)]])


def projective_resolution(F: FpFunctorModule, length: int) -> ProjectiveResolution:
    if length < 0:
        raise MalformedInput("length must be nonnegative")
    cat = F.category
    lam = cat.algebra
    f = cat.field
    mod = F.module
    pres = alg.greedy_presentation(mod)
    verts = [list(pres.vertices)]
    diffs = []
    free = alg.vertex_free_module(lam, pres.vertices)
    ker = alg.kernel(pres.cover, free) if free.dim else alg.zero_module(lam)
    prev_bases = pres.bases
    complete = ker.dim == 0
    for _ in range(length):
        if ker.dim == 0:
            complete = True
            break
        gens = alg.greedy_generators(ker)
        new_verts = [v for v, _ in gens]
        offs = [0]
        for b in prev_bases:
            offs.append(offs[-1] + b.shape[1])
        rows = []
        for v, vec in gens:
            full = f.dot(ker.inclusion, vec)
            rows.append([f.dot(prev_bases[j], full[offs[j]:offs[j + 1]]) for j in range(len(prev_bases))])
        diffs.append(rows)
        verts.append(new_verts)
        bases = [alg._vertex_basis(lam, v) for v in new_verts]
        nfree = alg.vertex_free_module(lam, new_verts)
        cover = alg._cover_matrix(ker, bases, [vec for _, vec in gens])
        cover = f.dot(ker.inclusion, cover)
        # next kernel: maps nfree → previous free
        ker = alg.kernel(cover, nfree)
        prev_bases = bases
        complete = ker.dim == 0
    return ProjectiveResolution(cat, verts, diffs, complete)


def _hom_complex_term(res: ProjectiveResolution, G: alg.Module, i: int):
    f = G.field
    lam = res.category.algebra
    if i >= len(res.vertices):
        return [], [0]
    us = [f.colspace(G.act(lam.vertex_idempotent(v))) for v in res.vertices[i]]
    offs = [0]
    for u in us:
        offs.append(offs[-1] + u.shape[1])
    return us, offs


def _cochain_module(G: alg.Module, us, offs, base: alg.Algebra) -> alg.Module:
    f = G.field
    n = offs[-1]
    cact = G.central_action
    act = f.zeros((cact.shape[0], n, n))
    for j, u in enumerate(us):
        if u.shape[1]:
            uinv = f.left_inverse(u)
            act[:, offs[j]:offs[j + 1], offs[j]:offs[j + 1]] = f.einsum("ka,tab,bl->tkl", uinv, cact, u)
    return alg.Module(base, act)


def _coboundary(res: ProjectiveResolution, G: alg.Module, i: int) -> np.ndarray:
    """δ^i: Hom(P_i, G) → Hom(P_{i+1}, G), φ ↦ φ∘d_{i+1}."""
    f = G.field
    us, offs = _hom_complex_term(res, G, i)
    un, noffs = _hom_complex_term(res, G, i + 1)
    out = f.zeros((noffs[-1], offs[-1]))
    if i >= len(res.differentials):
        return out
    for k, row in enumerate(res.differentials[i]):
        if un[k].shape[1] == 0:
            continue
        uinv = f.left_inverse(un[k])
        for j, el in enumerate(row):
            if us[j].shape[1] == 0:
                continue
            out[noffs[k]:noffs[k + 1], offs[j]:offs[j + 1]] = f.chain(uinv, G.act(el), us[j])
    return out


def ext_cat(i: int, F: FpFunctorModule, G: FpFunctorModule, degree_cap: int = 3) -> FpModule:
    """Ext^i(F, G) in mod(𝔞), from a resolution of F by representables."""
    _same_category(F, G)
    if i < 0:
        raise MalformedInput("degree must be nonnegative")
    if i > degree_cap:
        raise MalformedInput(f"degree {i} exceeds the configured cap {degree_cap}")
    return FpModule.from_module(F.ring, ext_cat_module(i, F, G))


def ext_cat_module(i: int, F: FpFunctorModule, G: FpFunctorModule) -> alg.Module:
    f = F.category.field
    base = F.ring.algebra
    res = projective_resolution(F, i + 1)
    gm = G.module
    us, offs = _hom_complex_term(res, gm, i)
    c = _cochain_module(gm, us, offs, base)
    if c.dim == 0:
        return c
    d_out = _coboundary(res, gm, i)
    cycles = f.nullspace(d_out) if d_out.shape[0] else f.eye(c.dim)
    if i > 0:
        d_in = _coboundary(res, gm, i - 1)
        bounds = f.colspace(d_in) if d_in.size else f.zeros((c.dim, 0))
    else:
        bounds = f.zeros((c.dim, 0))
    return alg.subquotient(c, cycles, bounds)


# -- pointwise R-functors ----------------------------------------------------------


def _check_ring(X: FpModule, F: FpFunctorModule):
    if not X.ring.same_as(F.ring):
        raise rg.RingMismatch("module and functor module are over different rings")


def tensor_pointwise(X: FpModule, F: FpFunctorModule) -> FpFunctorModule:
    _check_ring(X, F)
    return wrap(F.category, rg.tensor_with_presentation(X.presentation, F.module))


def hom_pointwise(X: FpModule, F: FpFunctorModule) -> FpFunctorModule:
    _check_ring(X, F)
    return wrap(F.category, rg.hom_from_presentation(X.presentation, F.module))


def tor_pointwise(i: int, X: FpModule, F: FpFunctorModule) -> FpFunctorModule:
    _check_ring(X, F)
    return wrap(F.category, rg.tor_module(i, X, F.module))


def ext_pointwise(i: int, X: FpModule, F: FpFunctorModule) -> FpFunctorModule:
    _check_ring(X, F)
    return wrap(F.category, rg.ext_module(i, X, F.module))


def is_flat_functor(F: FpFunctorModule) -> bool:
    return all(rg.is_flat_module(F.value_module(a), F.ring) for a in range(F.category.n_objects))


def is_coflat_functor(F: FpFunctorModule) -> bool:
    return all(rg.is_coflat_module(F.value_module(a), F.ring) for a in range(F.category.n_objects))


# -- injectives and reconstruction ----------------------------------------------------


def is_injective(F: FpFunctorModule) -> bool:
    return alg.is_injective(F.module)


def is_projective(F: FpFunctorModule) -> bool:
    return alg.is_projective(F.module)


def simples(cat: LinCategory) -> list[FpFunctorModule]:
    return [wrap(cat, s) for s in alg.simple_modules(cat.algebra)]


def indecomposable_projectives(cat: LinCategory) -> list[FpFunctorModule]:
    return [wrap(cat, p) for p in alg.indecomposable_projectives(cat.algebra)]


def indecomposable_injectives(cat: LinCategory) -> list[FpFunctorModule]:
    return [wrap(cat, e) for e in alg.indecomposable_injectives(cat.algebra)]


def indecomposable_battery(cat: LinCategory) -> list[FpFunctorModule]:
    """Simples, indecomposable projectives and injectives, one per isomorphism class."""
    out = []
    for F in simples(cat) + indecomposable_projectives(cat) + indecomposable_injectives(cat):
        if not any(G.dims() == F.dims() and alg.is_isomorphic(G.module, F.module) for G in out):
            out.append(F)
    return out


def random_functor_module(cat: LinCategory, rng, max_gens: int = 2, max_rels: int = 2,
                          in_ideal: bool | None = None) -> FpFunctorModule:
    """A cokernel of a random map between small sums of representables.

    With ``in_ideal`` the relations have coefficients in the maximal ideal of R; by default a coin decides.
    """
    if in_ideal is None:
        in_ideal = bool(rng.integers(2))
    n = cat.n_objects
    targets = [int(b) for b in rng.integers(0, n, size=int(rng.integers(1, max_gens + 1)))]
    sources = [int(a) for a in rng.integers(0, n, size=int(rng.integers(0, max_rels + 1)))]
    delta = [[cat.field.random(rng, (cat.rank(b, a), cat.ring.dim)) for a in sources] for b in targets]
    if in_ideal and cat.ring.dim > 1:
        for row in delta:
            for ent in row:
                ent[:, 0] = 0
    return FpFunctorModule(cat, sources, targets, delta)


def injective_envelope(F: FpFunctorModule):
    """(E, essential embedding F → E)."""
    env, emb = alg.injective_envelope(F.module)
    E = wrap(F.category, env)
    return E, FunctorModuleMap(F, E, emb)


def is_essential_mono(fm: FunctorModuleMap) -> bool:
    """Mono whose image meets every nonzero submodule: checked on the socle of the target."""
    f = fm.source.category.field
    if f.rank(fm.matrix) != fm.source.dim:
        return False
    tgt = fm.target.module
    soc = socle(tgt)
    img = f.colspace(fm.matrix) if fm.matrix.size else f.zeros((tgt.dim, 0))
    return all(f.in_span(img, soc[:, k]) for k in range(soc.shape[1]))


def socle(mod: alg.Module) -> np.ndarray:
    """Basis of {m : J·m = 0}."""
    f = mod.field
    jb = mod.algebra.radical
    if mod.dim == 0:
        return f.zeros((0, 0))
    if jb.shape[1] == 0:
        return f.eye(mod.dim)
    acts = f.einsum("ik,iab->kab", jb, mod.action).reshape(-1, mod.dim)
    return f.nullspace(acts)


@dataclass
class InjCategory:
    """The indecomposable injectives of mod(𝔞) and the k-linear category they span."""

    base: LinCategory
    objects: list
    homs: dict
    category: LinCategory

    def psi(self, F: FpFunctorModule) -> alg.Module:
        """Ψ(F) = ⊕ᵢ Hom(F, Eᵢ) as a covariant module over the injectives."""
        return _psi_module(self, F)[0]


def injectives(cat: LinCategory) -> InjCategory:
    objs = indecomposable_injectives(cat)
    f = cat.field
    kring = rg.residue_field_ring(f)
    n = len(objs)
    homs = {(i, j): alg.hom(objs[i].module, objs[j].module) for i in range(n) for j in range(n)}
    ranks = {key: h.dim for key, h in homs.items()}
    comp = {}
    for x in range(n):
        for y in range(n):
            for z in range(n):
                hyz, hxy, hxz = homs[(y, z)], homs[(x, y)], homs[(x, z)]
                if 0 in (hyz.dim, hxy.dim, hxz.dim):
                    continue
                t = f.zeros((hyz.dim, hxy.dim, hxz.dim, 1))
                for a in range(hyz.dim):
                    for b in range(hxy.dim):
                        t[a, b, :, 0] = hxz.coordinates(f.dot(hyz.basis[a], hxy.basis[b]))
                comp[(x, y, z)] = t
    ident = {x: np.asarray(homs[(x, x)].coordinates(f.eye(objs[x].dim))).reshape(-1, 1) for x in range(n)}
    icat = LinCategory(kring, [f"E{i}" for i in range(n)], ranks, comp, ident, name="Inj")
    return InjCategory(cat, objs, homs, icat)


def _psi_module(inj: InjCategory, F: FpFunctorModule):
    """Ψ(F) together with the Hom spaces Hom(F, Eᵢ) used as its coordinates."""
    f = F.category.field
    icat = inj.category
    lam = icat.algebra
    spaces = [alg.hom(F.module, e.module) for e in inj.objects]
    offs = np.concatenate([[0], np.cumsum([s.dim for s in spaces])]).astype(int)
    n = offs[-1]
    act = f.zeros((lam.n, n, n))
    hoff = icat.hom_offsets
    for (x, y), sl in hoff.items():
        h = inj.homs[(x, y)]
        for a, idx in enumerate(range(sl.start, sl.stop)):
            u = h.basis[a]
            for k in range(spaces[x].dim):
                img = f.dot(u, spaces[x].basis[k])
                act[idx, offs[y]:offs[y + 1], offs[x] + k] = spaces[y].coordinates(img)
    return alg.Module(lam, act), spaces, offs


def psi_map(inj: InjCategory, fm: FunctorModuleMap, psi_src=None, psi_tgt=None) -> np.ndarray:
    """Ψ(φ): Ψ(G) → Ψ(F) for φ: F → G, precomposition by φ."""
    f = fm.source.category.field
    ms, ss, so = psi_src or _psi_module(inj, fm.source)
    mt, st, to = psi_tgt or _psi_module(inj, fm.target)
    out = f.zeros((ms.dim, mt.dim))
    for i in range(len(inj.objects)):
        for k in range(st[i].dim):
            img = f.dot(st[i].basis[k], fm.matrix)
            out[so[i]:so[i + 1], to[i] + k] = ss[i].coordinates(img)
    return out


@dataclass
class ReconstructionCheck:
    pairs: list          # (i, j, dim Hom(F_i, F_j), dim Hom(ΨF_j, ΨF_i), bijective)
    fully_faithful: bool


def reconstruct_from_injectives(cat: LinCategory, battery: list[FpFunctorModule] | None = None) -> ReconstructionCheck:
    """Check that Ψ = Hom(−, Inj) is fully faithful on the battery, with witnessed inverses."""
    f = cat.field
    inj = injectives(cat)
    if battery is None:
        battery = indecomposable_battery(cat)
    psis = [_psi_module(inj, F) for F in battery]
    pairs = []
    ok = True
    for i, F in enumerate(battery):
        for j, G in enumerate(battery):
            hfg = alg.hom(F.module, G.module)
            hpsi = alg.hom(psis[j][0], psis[i][0])
            images = [psi_map(inj, FunctorModuleMap(F, G, hfg.basis[k]), psis[i], psis[j]) for k in range(hfg.dim)]
            if images:
                mat = np.stack([hpsi.coordinates(im) for im in images], axis=1)
            else:
                mat = f.zeros((hpsi.dim, 0))
            inv = f.inverse(mat) if mat.shape[0] == mat.shape[1] else None
            bij = inv is not None
            if bij and mat.size:
                # the inverse reconstructs φ from Ψ(φ) on every basis element of the target side
                for k in range(hpsi.dim):
                    phi = hfg.element(inv[:, k])
                    back = psi_map(inj, FunctorModuleMap(F, G, phi), psis[i], psis[j])
                    bij = bij and np.array_equal(back, hpsi.basis[k])
            ok = ok and bij
            pairs.append((i, j, hfg.dim, hpsi.dim, bij))
    return ReconstructionCheck(pairs, ok)


def check_category(cat: LinCategory):
    rep = validate_category(cat)
    if not rep.valid:
        raise MalformedInput("; ".join(rep.violations[:5]))
