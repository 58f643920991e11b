"""Finite-dimensional algebras and their finite-dimensional left modules.

This is the single computational engine behind ring modules, functor
modules and base change: a module over a base ring R is a module over the
algebra R, and a functor module over a finite linear category is a module
over its category algebra (with R acting centrally).

An :class:`Algebra` carries a Peirce-homogeneous basis: every basis element
``b`` satisfies ``b = e_t b e_s`` for vertex idempotents ``e_s, e_t``.  For a
category algebra the vertices are the objects and the basis elements are
R-multiples of basis morphisms.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .linalg import Field


class AlgebraError(ValueError):
    pass


class Algebra:
    """Unital associative algebra over a prime field, by structure constants.

    ``mult[i, j, l]`` is the coefficient of ``b_l`` in ``b_i * b_j``.
    """

    def __init__(self, field: Field, mult, unit, source, target, vertex_labels,
                 base: "Algebra | None" = None, central=None, radical=None, labels=None,
                 primitive=None):
        self.field = field
        self.mult = field.array(mult)
        self.n = self.mult.shape[0]
        self.unit = field.array(unit)
        self.source = np.asarray(source, dtype=int)
        self.target = np.asarray(target, dtype=int)
        self.vertex_labels = list(vertex_labels)
        self.base = self if base is None else base
        if central is None:
            central = field.eye(self.n)
        self.central = field.array(central)
        self._radical = None if radical is None else field.array(radical)
        self.labels = labels
        self.left = np.ascontiguousarray(np.transpose(self.mult, (0, 2, 1)))
        if primitive is not None:
            self.__dict__["primitive_idempotents"] = [field.array(e) for e in primitive]

    def __repr__(self):
        return f"Algebra(dim={self.n}, vertices={self.vertex_labels}, field={self.field})"

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_labels)

    def vertex(self, label) -> int:
        if isinstance(label, (int, np.integer)) and not isinstance(label, bool) and label not in self.vertex_labels:
            return int(label)
        try:
            return self.vertex_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown object {label!r}") from None

    def vertex_indices(self, v: int) -> np.ndarray:
        """Basis indices spanning ``Λ e_v``."""
        return np.nonzero(self.source == v)[0]

    def corner_indices(self, tgt: int, src: int) -> np.ndarray:
        return np.nonzero((self.source == src) & (self.target == tgt))[0]

    def vertex_idempotent(self, v: int) -> np.ndarray:
        e = self.field.zeros(self.n)
        idx = self.corner_indices(v, v)
        e[idx] = self.unit[idx]
        return e

    def basis_vector(self, i: int) -> np.ndarray:
        e = self.field.zeros(self.n)
        e[i] = self.field.scalar(1)
        return e

    def mul(self, a, b) -> np.ndarray:
        return self.field.einsum("i,j,ijl->l", a, b, self.mult)

    def left_matrix(self, a) -> np.ndarray:
        return self.field.einsum("i,ilj->lj", a, self.left)

    def right_matrix(self, b) -> np.ndarray:
        return self.field.einsum("j,ijl->li", b, self.mult)

    def central_element(self, r) -> np.ndarray:
        return self.field.dot(np.asarray(r), self.central)

    def opposite(self) -> "Algebra":
        op = Algebra(self.field, np.transpose(self.mult, (1, 0, 2)), self.unit, self.target, self.source,
                     self.vertex_labels, base=None if self.base is self else self.base,
                     central=self.central, radical=self._radical, labels=self.labels)
        if self.base is self:
            op.base = op
        return op

    @cached_property
    def regular_module(self) -> "Module":
        return Module(self, self.left)

    # -- structure: primitive idempotents and radical -----------------------

    @cached_property
    def primitive_idempotents(self) -> list[np.ndarray]:
        out = []
        for v in range(self.n_vertices):
            out.extend(_split_idempotent(self, self.vertex_idempotent(v)))
        return out

    def _corner_basis(self, e_left, e_right) -> np.ndarray:
        f = self.field
        m = f.dot(self.left_matrix(e_left), self.right_matrix(e_right))
        return f.colspace(m)

    @cached_property
    def _local_corner_radicals(self) -> list[np.ndarray]:
        f = self.field
        out = []
        for e in self.primitive_idempotents:
            corner = self._corner_basis(e, e)
            vecs = []
            for k in range(corner.shape[1]):
                b = corner[:, k]
                lam = _nilpotent_shift(self, b, e, corner.shape[1])
                vecs.append(f.reduce(b - lam * e))
            mat = np.stack(vecs, axis=1) if vecs else f.zeros((self.n, 0))
            out.append(f.colspace(mat) if mat.size else mat)
        return out

    @property
    def radical(self) -> np.ndarray:
        """Basis (columns) of the Jacobson radical."""
        if self._radical is None:
            self._radical = self._compute_radical()
        return self._radical

    def _compute_radical(self) -> np.ndarray:
        f = self.field
        prims = self.primitive_idempotents
        jloc = self._local_corner_radicals
        blocks = []
        for j, ej in enumerate(prims):
            proj, _ = f.complement(jloc[j], self.n)
            for i, ei in enumerate(prims):
                if i == j:
                    blocks.append(jloc[j])
                    continue
                x = self._corner_basis(ej, ei)
                if x.shape[1] == 0:
                    continue
                ys = self._corner_basis(ei, ej)
                rows = [f.chain(proj, self.right_matrix(ys[:, k]), x) for k in range(ys.shape[1])]
                if rows:
                    ns = f.nullspace(np.concatenate(rows, axis=0))
                    blocks.append(f.dot(x, ns))
                else:
                    blocks.append(x)
        blocks = [b for b in blocks if b.shape[1]]
        if not blocks:
            return f.zeros((self.n, 0))
        return f.colspace(np.concatenate(blocks, axis=1))

    @cached_property
    def projective_types(self) -> list[np.ndarray]:
        """One primitive idempotent per isomorphism class of indecomposable projective."""
        f = self.field
        reps: list[int] = []
        prims = self.primitive_idempotents
        jloc = self._local_corner_radicals
        for i, e in enumerate(prims):
            found = False
            for r in reps:
                if _idempotents_isomorphic(self, prims[r], jloc[r], e):
                    found = True
                    break
            if not found:
                reps.append(i)
        return [prims[i] for i in reps]


def _nilpotent_shift(alg: Algebra, b, e, corner_dim: int):
    """The scalar ``λ`` making ``b - λe`` nilpotent in a split local corner."""
    f = alg.field
    lb = alg.left_matrix(b)
    le = alg.left_matrix(e)
    rank_e = f.rank(le)
    tr = f.reduce(np.trace(lb)) if f.p else np.trace(lb)
    candidates = []
    if not f.p or rank_e % f.p:
        candidates.append(f.reduce(tr * f.inv(f.scalar(rank_e))) if f.p else tr / rank_e)
    if f.p:
        candidates.extend(range(f.p))
    for lam in candidates:
        m = f.reduce(lb - lam * le)
        if f.is_zero(f.matrix_power(m, alg.n)):
            return lam
    raise NotImplementedError("endomorphism ring is not split local; only split algebras are supported")


def _idempotents_isomorphic(alg: Algebra, e1, j1, e2) -> bool:
    f = alg.field
    x = alg._corner_basis(e1, e2)
    y = alg._corner_basis(e2, e1)
    if x.shape[1] == 0 or y.shape[1] == 0:
        return False
    for a in range(x.shape[1]):
        for b in range(y.shape[1]):
            prod = alg.mul(x[:, a], y[:, b])
            if not f.in_span(j1, prod):
                return True
    return False


def _split_idempotent(alg: Algebra, e) -> list[np.ndarray]:
    """Decompose an idempotent into orthogonal primitive idempotents."""
    f = alg.field
    if f.is_zero(e):
        return []
    proj = alg.right_matrix(e)
    basis = f.colspace(proj)
    mod = _submodule_from_basis(alg.regular_module, basis)
    parts = decompose(mod)
    if len(parts) == 1:
        return [e]
    out = []
    for part in parts:
        # the projection onto a summand is right multiplication by its value at e
        ee = f.dot(basis, f.dot(part.inclusion, f.dot(part.projection, f.dot(f.left_inverse(basis), e))))
        out.extend(_split_idempotent(alg, ee))
    return out


# ---------------------------------------------------------------------------
# modules


@dataclass
class Presentation:
    """A free cover ⊕ Λe_j → M together with generators of its kernel.

    ``idempotents[j]`` is e_j, ``bases[j]`` the (n × r_j) basis of Λe_j,
    ``cover`` maps free coordinates onto M, ``section`` is a right inverse,
    ``relations`` are kernel generators in free coordinates and
    ``relation_idempotents`` their idempotents.  ``vertices`` records the
    vertex index of each summand when it is a vertex idempotent.
    """

    idempotents: list
    bases: list
    cover: np.ndarray
    section: np.ndarray
    relations: list
    relation_idempotents: list
    vertices: list = dc_field(default_factory=list)
    relation_vertices: list = dc_field(default_factory=list)

    @property
    def offsets(self) -> list[int]:
        out = [0]
        for b in self.bases:
            out.append(out[-1] + b.shape[1])
        return out

    def relation_elements(self, k: int) -> list[np.ndarray]:
        """Components of relation k as algebra elements, one per generator."""
        off = self.offsets
        rel = self.relations[k]
        f_dot = np.dot
        return [f_dot(self.bases[j], rel[off[j]:off[j + 1]]) for j in range(len(self.bases))]


class Module:
    """A finite-dimensional left module: one action matrix per basis element."""

    def __init__(self, algebra: Algebra, action, presentation: Presentation | None = None):
        self.algebra = algebra
        f = algebra.field
        action = f.array(action) if not isinstance(action, np.ndarray) else action
        if action.ndim != 3 or action.shape[0] != algebra.n or action.shape[1] != action.shape[2]:
            raise AlgebraError(f"action must have shape ({algebra.n}, d, d), got {action.shape}")
        self.action = action
        self.dim = action.shape[1]
        self._presentation = presentation
        self.inclusion = None
        self.projection = None

    def __repr__(self):
        return f"Module(dim={self.dim}, over {self.algebra!r})"

    @property
    def field(self) -> Field:
        return self.algebra.field

    def act(self, a) -> np.ndarray:
        a = np.asarray(a)
        if self.dim == 0:
            return self.field.zeros((0, 0))
        return self.field.reduce(np.tensordot(a, self.action, axes=(0, 0)))

    @cached_property
    def central_action(self) -> np.ndarray:
        f = self.field
        if self.dim == 0:
            return f.zeros((self.algebra.central.shape[0], 0, 0))
        return f.reduce(np.tensordot(self.algebra.central, self.action, axes=(1, 0)))

    def vertex_space(self, v: int) -> np.ndarray:
        return self.field.colspace(self.act(self.algebra.vertex_idempotent(v)))

    def vertex_dims(self) -> list[int]:
        return [self.vertex_space(v).shape[1] for v in range(self.algebra.n_vertices)]

    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def presentation(self) -> Presentation:
        if self._presentation is None:
            self._presentation = greedy_presentation(self)
        return self._presentation

    def check(self) -> list[str]:
        """Violations of the module axioms (empty when valid)."""
        f = self.field
        alg = self.algebra
        errs = []
        if not np.array_equal(self.act(alg.unit), f.eye(self.dim)):
            errs.append("unit does not act as identity")
        for i in range(alg.n):
            for j in range(alg.n):
                lhs = f.dot(self.action[i], self.action[j])
                rhs = self.act(alg.mult[i, j])
                if not np.array_equal(lhs, rhs):
                    errs.append(f"action not multiplicative on basis pair ({i}, {j})")
        return errs


def zero_module(alg: Algebra) -> Module:
    return Module(alg, alg.field.zeros((alg.n, 0, 0)))


def _restrict_action(mod: Module, basis, linv=None) -> np.ndarray:
    f = mod.field
    if linv is None:
        linv = f.left_inverse(basis)
    if basis.shape[1] == 0:
        return f.zeros((mod.algebra.n, 0, 0))
    return f.einsum("ka,iab,bl->ikl", linv, mod.action, basis)


def _submodule_from_basis(mod: Module, basis) -> Module:
    f = mod.field
    linv = f.left_inverse(basis)
    sub = Module(mod.algebra, _restrict_action(mod, basis, linv))
    sub.inclusion = basis
    sub.projection = linv
    return sub


def submodule(mod: Module, vectors) -> Module:
    """The submodule generated by the columns of ``vectors``; carries ``inclusion``."""
    f = mod.field
    vectors = np.asarray(vectors)
    if vectors.ndim == 1:
        vectors = vectors.reshape(-1, 1)
    if vectors.shape[1] == 0 or mod.dim == 0:
        sub = zero_module(mod.algebra)
        sub.inclusion = f.zeros((mod.dim, 0))
        sub.projection = f.zeros((0, mod.dim))
        return sub
    span = f.einsum("iab,bk->aik", mod.action, vectors).reshape(mod.dim, -1)
    return _submodule_from_basis(mod, f.colspace(span))


def stable_subspace(mod: Module, basis) -> Module:
    """Submodule on a subspace already known to be stable."""
    f = mod.field
    basis = np.asarray(basis)
    if basis.shape[1] == 0:
        return submodule(mod, basis)
    return _submodule_from_basis(mod, f.colspace(basis))


def quotient(mod: Module, vectors) -> Module:
    """M / (submodule generated by ``vectors``); carries ``projection`` and ``inclusion`` (a section)."""
    f = mod.field
    sub = submodule(mod, vectors)
    proj, sec = f.complement(sub.inclusion, mod.dim)
    action = f.einsum("ka,iab,bl->ikl", proj, mod.action, sec) if proj.shape[0] else f.zeros((mod.algebra.n, 0, 0))
    q = Module(mod.algebra, action)
    q.projection = proj
    q.inclusion = sec
    return q


def direct_sum(mods: list[Module], algebra: Algebra | None = None) -> Module:
    if not mods:
        return zero_module(algebra)
    alg = mods[0].algebra
    f = alg.field
    dim = sum(m.dim for m in mods)
    action = f.zeros((alg.n, dim, dim))
    off = 0
    for m in mods:
        action[:, off:off + m.dim, off:off + m.dim] = m.action
        off += m.dim
    return Module(alg, action)


def dual(mod: Module, opposite: Algebra | None = None) -> Module:
    """k-linear dual, a left module over the opposite algebra."""
    alg = opposite if opposite is not None else mod.algebra.opposite()
    return Module(alg, np.ascontiguousarray(np.transpose(mod.action, (0, 2, 1))))


def is_module_map(f_mat, src: Module, tgt: Module) -> bool:
    f = src.field
    f_mat = np.asarray(f_mat)
    if f_mat.shape != (tgt.dim, src.dim):
        return False
    if not f_mat.size:
        return True
    lhs = f.einsum("iab,bc->iac", tgt.action, f_mat)
    rhs = f.einsum("ab,ibc->iac", f_mat, src.action)
    return bool(np.array_equal(lhs, rhs))


def kernel(f_mat, src: Module) -> Module:
    f = src.field
    ns = f.nullspace(np.asarray(f_mat)) if src.dim else f.zeros((0, 0))
    return stable_subspace(src, ns)


def image(f_mat, tgt: Module) -> Module:
    f = tgt.field
    f_mat = np.asarray(f_mat)
    return stable_subspace(tgt, f.colspace(f_mat) if f_mat.size else f.zeros((tgt.dim, 0)))


def cokernel(f_mat, tgt: Module) -> Module:
    f = tgt.field
    f_mat = np.asarray(f_mat)
    return quotient(tgt, f.colspace(f_mat) if f_mat.size else f.zeros((tgt.dim, 0)))


def subquotient(mod: Module, cycles, boundaries) -> Module:
    """(span cycles) / (span boundaries) for stable subspaces boundaries ⊆ cycles."""
    f = mod.field
    z = stable_subspace(mod, cycles)
    if z.dim == 0:
        return z
    b = np.asarray(boundaries)
    bz = f.dot(z.projection, b) if b.size and b.shape[1] else f.zeros((z.dim, 0))
    q = quotient(z, bz)
    # map from cycle coordinates in mod to quotient coordinates
    q.cycle_projection = f.dot(q.projection, z.projection)
    q.cycle_section = f.dot(z.inclusion, q.inclusion)
    return q


# -- free modules and covers ---------------------------------------------------


def summand_basis(alg: Algebra, e) -> np.ndarray:
    f = alg.field
    return f.colspace(alg.right_matrix(e))


def _vertex_basis(alg: Algebra, v: int) -> np.ndarray:
    idx = alg.vertex_indices(v)
    b = alg.field.zeros((alg.n, len(idx)))
    for k, i in enumerate(idx):
        b[i, k] = alg.field.scalar(1)
    return b


def free_module(alg: Algebra, idempotents: list, bases: list | None = None) -> Module:
    """⊕ Λe_j in the coordinates of the given bases of Λe_j."""
    f = alg.field
    if bases is None:
        bases = [summand_basis(alg, e) for e in idempotents]
    blocks = []
    for b in bases:
        if b.shape[1] == 0:
            continue
        linv = f.left_inverse(b)
        blocks.append(Module(alg, f.einsum("ka,iab,bl->ikl", linv, alg.left, b)))
    return direct_sum(blocks, alg)


def vertex_free_module(alg: Algebra, vertices: list[int]) -> Module:
    f = alg.field
    bases = [_vertex_basis(alg, v) for v in vertices]
    dim = sum(b.shape[1] for b in bases)
    action = f.zeros((alg.n, dim, dim))
    off = 0
    for v in vertices:
        idx = alg.vertex_indices(v)
        action[:, off:off + len(idx), off:off + len(idx)] = alg.left[:, idx][:, :, idx]
        off += len(idx)
    return Module(alg, action)


def _cover_matrix(mod: Module, bases: list, gens: list) -> np.ndarray:
    f = mod.field
    cols = []
    for b, g in zip(bases, gens):
        if b.shape[1] == 0:
            continue
        cols.append(f.einsum("ik,iab,b->ak", b, mod.action, g))
    if not cols:
        return f.zeros((mod.dim, 0))
    return np.concatenate(cols, axis=1)


def greedy_generators(mod: Module) -> list[tuple[int, np.ndarray]]:
    """Vertex-homogeneous generators, chosen vertex by vertex."""
    f = mod.field
    alg = mod.algebra
    gens = []
    span = f.zeros((mod.dim, 0))
    for v in range(alg.n_vertices):
        if span.shape[1] == mod.dim:
            break
        space = mod.vertex_space(v)
        idx = alg.vertex_indices(v)
        for k in range(space.shape[1]):
            vec = space[:, k]
            if f.in_span(span, vec):
                continue
            gens.append((v, vec))
            new = f.einsum("iab,b->ai", mod.action[idx], vec)
            span = f.colspace(np.concatenate([span, new], axis=1))
            if span.shape[1] == mod.dim:
                break
    return gens


def greedy_presentation(mod: Module) -> Presentation:
    """Presentation by vertex summands Λe_v (representables for category algebras)."""
    f = mod.field
    alg = mod.algebra
    gens = greedy_generators(mod)
    vertices = [v for v, _ in gens]
    bases = [_vertex_basis(alg, v) for v in vertices]
    cover = _cover_matrix(mod, bases, [g for _, g in gens])
    free = vertex_free_module(alg, vertices)
    section = f.solve(cover, f.eye(mod.dim)) if mod.dim else f.zeros((free.dim, 0))
    ker = kernel(cover, free) if free.dim else zero_module(alg)
    rels, rel_vertices = [], []
    if ker.dim:
        for v, vec in greedy_generators(ker):
            rels.append(f.dot(ker.inclusion, vec))
            rel_vertices.append(v)
    return Presentation(
        idempotents=[alg.vertex_idempotent(v) for v in vertices],
        bases=bases,
        cover=cover,
        section=section,
        relations=rels,
        relation_idempotents=[alg.vertex_idempotent(v) for v in rel_vertices],
        vertices=vertices,
        relation_vertices=rel_vertices,
    )


def radical_submodule(mod: Module) -> np.ndarray:
    """Basis of J·M."""
    f = mod.field
    jb = mod.algebra.radical
    if jb.shape[1] == 0 or mod.dim == 0:
        return f.zeros((mod.dim, 0))
    span = f.einsum("ik,iab->akb", jb, mod.action).reshape(mod.dim, -1)
    return f.colspace(span)


def minimal_generators(mod: Module) -> list[tuple[np.ndarray, np.ndarray]]:
    """Generators lifting a basis of the top M/JM, each in some e·M with e primitive."""
    f = mod.field
    alg = mod.algebra
    jm = radical_submodule(mod)
    gens = []
    for e in alg.projective_types:
        pe = mod.act(e)
        space = f.colspace(pe)
        base = f.colspace(f.dot(pe, jm)) if jm.shape[1] else f.zeros((mod.dim, 0))
        for k in range(space.shape[1]):
            vec = space[:, k]
            if f.in_span(base, vec):
                continue
            gens.append((e, vec))
            base = f.colspace(np.concatenate([base, vec.reshape(-1, 1)], axis=1))
    return gens


def projective_cover(mod: Module):
    """Minimal projective cover. Returns ``(free_module, cover_matrix, idempotents, bases)``."""
    alg = mod.algebra
    gens = minimal_generators(mod)
    idems = [e for e, _ in gens]
    bases = [summand_basis(alg, e) for e in idems]
    free = free_module(alg, idems, bases)
    cover = _cover_matrix(mod, bases, [g for _, g in gens])
    return free, cover, idems, bases


def minimal_presentation(mod: Module) -> Presentation:
    f = mod.field
    alg = mod.algebra
    free, cover, idems, bases = projective_cover(mod)
    section = f.solve(cover, f.eye(mod.dim)) if mod.dim else f.zeros((free.dim, 0))
    ker = kernel(cover, free) if free.dim else zero_module(alg)
    rels, rel_idems = [], []
    if ker.dim:
        for e, vec in minimal_generators(ker):
            rels.append(f.dot(ker.inclusion, vec))
            rel_idems.append(e)
    verts = []
    for e in idems:
        match = [v for v in range(alg.n_vertices) if np.array_equal(e, alg.vertex_idempotent(v))]
        verts.append(match[0] if match else None)
    return Presentation(idems, bases, cover, section, rels, rel_idems, verts, [])


# -- Hom ----------------------------------------------------------------------


@dataclass
class HomSpace:
    """Hom_Λ(M, N): a k-basis of maps plus its structure as a base-ring module."""

    source: Module
    target: Module
    basis: np.ndarray  # (k, dimN, dimM)
    module: Module      # over the base ring, coordinates = this basis

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def element(self, coords) -> np.ndarray:
        f = self.source.field
        if self.dim == 0:
            return f.zeros((self.target.dim, self.source.dim))
        return f.reduce(np.tensordot(np.asarray(coords), self.basis, axes=(0, 0)))

    def coordinates(self, mat):
        f = self.source.field
        if self.dim == 0:
            return f.zeros(0) if f.is_zero(mat) else None
        a = self.basis.reshape(self.dim, -1).T
        return f.solve(a, np.asarray(mat).reshape(-1))


def hom(src: Module, tgt: Module) -> HomSpace:
    """Hom_Λ(src, tgt), solved on the presentation of ``src``."""
    f = src.field
    alg = src.algebra
    base = alg.base
    if tgt.algebra is not alg and tgt.algebra.n != alg.n:
        raise AlgebraError("modules over different algebras")
    if src.dim == 0 or tgt.dim == 0:
        empty = f.zeros((0, tgt.dim, src.dim))
        return HomSpace(src, tgt, empty, zero_module(base))
    pres = src.presentation
    ublocks = [f.colspace(tgt.act(e)) for e in pres.idempotents]
    uoff = [0]
    for u in ublocks:
        uoff.append(uoff[-1] + u.shape[1])
    nunk = uoff[-1]
    rows = []
    for k in range(len(pres.relations)):
        elems = [f.reduce(el) for el in pres.relation_elements(k)]
        row = [f.dot(tgt.act(el), u) for el, u in zip(elems, ublocks)]
        rows.append(np.concatenate(row, axis=1) if row else f.zeros((tgt.dim, 0)))
    if rows:
        sol = f.nullspace(np.concatenate(rows, axis=0))
    else:
        sol = f.eye(nunk)
    s = sol.shape[1]
    if s == 0:
        return HomSpace(src, tgt, f.zeros((0, tgt.dim, src.dim)), zero_module(base))
    # assemble maps on the free cover, then compose with the section
    hblocks = []
    for j, (b, u) in enumerate(zip(pres.bases, ublocks)):
        nj = f.dot(u, sol[uoff[j]:uoff[j + 1]])  # dimN × s
        hblocks.append(f.einsum("ik,iab,bs->sak", b, tgt.action, nj))
    h = np.concatenate(hblocks, axis=2)  # s × dimN × dimF
    maps = f.einsum("sab,bc->sac", h, pres.section)
    # base-ring action on the solution space
    cact = tgt.central_action
    xs = []
    uinv = [f.left_inverse(u) for u in ublocks]
    solinv = f.left_inverse(sol)
    for t in range(cact.shape[0]):
        blk = f.zeros((nunk, nunk))
        for j, u in enumerate(ublocks):
            if u.shape[1]:
                blk[uoff[j]:uoff[j + 1], uoff[j]:uoff[j + 1]] = f.chain(uinv[j], cact[t], u)
        xs.append(f.chain(solinv, blk, sol))
    return HomSpace(src, tgt, maps, Module(base, np.stack(xs)))


def endomorphisms(mod: Module) -> np.ndarray:
    return hom(mod, mod).basis


# -- decomposition and isomorphism -------------------------------------------


def _fitting_split(mod: Module, phi):
    f = mod.field
    power = f.matrix_power(phi, max(mod.dim, 1))
    r = f.rank(power)
    if 0 < r < mod.dim:
        return f.colspace(power), f.nullspace(power)
    return None


def decompose(mod: Module, seed: int = 0, tries: int = 40) -> list[Module]:
    """Split into indecomposable summands via Fitting's lemma on random endomorphisms.

    Each returned summand carries ``inclusion`` and ``projection`` matrices with
    Σ inclusion·projection = identity.
    """
    f = mod.field
    if mod.dim == 0:
        return []
    rng = np.random.default_rng(seed)
    ends = endomorphisms(mod)
    candidates = [ends[k] for k in range(ends.shape[0])]
    split = None
    for phi in candidates:
        split = _fitting_split(mod, phi)
        if split:
            break
    k = 0
    while split is None and k < tries and ends.shape[0] > 1:
        coeffs = f.random(rng, ends.shape[0])
        phi = f.reduce(np.tensordot(coeffs, ends, axes=(0, 0)))
        split = _fitting_split(mod, phi)
        k += 1
    if split is None:
        whole = Module(mod.algebra, mod.action)
        whole.inclusion = f.eye(mod.dim)
        whole.projection = f.eye(mod.dim)
        return [whole]
    a, b = split
    both = np.concatenate([a, b], axis=1)
    inv = f.inverse(both)
    out = []
    for basis, rows in ((a, inv[: a.shape[1]]), (b, inv[a.shape[1]:])):
        part = Module(mod.algebra, _restrict_action(mod, basis, rows))
        for sub in decompose(part, seed + 1, tries):
            piece = Module(mod.algebra, sub.action)
            piece.inclusion = f.dot(basis, sub.inclusion)
            piece.projection = f.dot(sub.projection, rows)
            out.append(piece)
    return out


def _invertible(f: Field, mat) -> bool:
    return mat.shape[0] == mat.shape[1] and f.rank(mat) == mat.shape[0]


def isomorphic_indecomposables(m: Module, n: Module):
    """Deterministic iso test for indecomposable modules (local endomorphism rings)."""
    f = m.field
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return f.zeros((0, 0)), f.zeros((0, 0))
    hmn = hom(m, n).basis
    hnm = hom(n, m).basis
    for a in range(hmn.shape[0]):
        if _invertible(f, hmn[a]):
            return hmn[a], f.inverse(hmn[a])
    for a in range(hmn.shape[0]):
        for b in range(hnm.shape[0]):
            comp = f.dot(hnm[b], hmn[a])
            if _invertible(f, comp):
                # g∘f invertible with M indecomposable: f is split mono, hence iso by dimension
                return hmn[a], f.dot(f.inverse(comp), hnm[b])
    return None


def find_isomorphism(m: Module, n: Module, seed: int = 0, tries: int = 48):
    """An explicit pair of mutually inverse module maps, or None if not isomorphic."""
    f = m.field
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return f.zeros((0, 0)), f.zeros((0, 0))
    hb = hom(m, n).basis
    if hb.shape[0] == 0:
        return None
    rng = np.random.default_rng(seed)
    for k in range(hb.shape[0]):
        if _invertible(f, hb[k]):
            return hb[k], f.inverse(hb[k])
    for _ in range(tries):
        phi = f.reduce(np.tensordot(f.random(rng, hb.shape[0]), hb, axes=(0, 0)))
        if _invertible(f, phi):
            return phi, f.inverse(phi)
    return _iso_by_decomposition(m, n, seed)


def _iso_by_decomposition(m: Module, n: Module, seed: int):
    f = m.field
    pm = decompose(m, seed)
    pn = decompose(n, seed)
    if len(pm) != len(pn):
        return None
    used = set()
    fwd = f.zeros((n.dim, m.dim))
    for a in pm:
        hit = None
        for j, b in enumerate(pn):
            if j in used:
                continue
            iso = isomorphic_indecomposables(a, b)
            if iso is not None:
                hit = (j, iso)
                break
        if hit is None:
            return None
        j, (phi, _) = hit
        used.add(j)
        fwd = f.reduce(fwd + f.chain(pn[j].inclusion, phi, a.projection))
    inv = f.inverse(fwd)
    if inv is None:
        return None
    return fwd, inv


def is_isomorphic(m: Module, n: Module) -> bool:
    return find_isomorphism(m, n) is not None


# -- projectivity, injectivity, simples ----------------------------------------


def is_projective(mod: Module) -> bool:
    """Projective iff the free cover admits a section that is a module map."""
    f = mod.field
    if mod.dim == 0:
        return True
    pres = mod.presentation
    free = free_module(mod.algebra, pres.idempotents, pres.bases)
    hs = hom(mod, free).basis
    if hs.shape[0] == 0:
        return False
    comps = f.einsum("ab,kbc->kac", pres.cover, hs)
    a = comps.reshape(hs.shape[0], -1).T
    return f.solve(a, f.eye(mod.dim).reshape(-1)) is not None


def is_injective(mod: Module) -> bool:
    return is_projective(dual(mod))


def simple_modules(alg: Algebra) -> list[Module]:
    """One simple module per projective type: Λe / Je."""
    f = alg.field
    out = []
    for e in alg.projective_types:
        basis = summand_basis(alg, e)
        proj = free_module(alg, [e], [basis])
        je = f.dot(f.left_inverse(basis), f.dot(alg.right_matrix(e), alg.radical)) if alg.radical.shape[1] else f.zeros((basis.shape[1], 0))
        out.append(quotient(proj, je))
    return out


def indecomposable_projectives(alg: Algebra) -> list[Module]:
    return [free_module(alg, [e]) for e in alg.projective_types]


def indecomposable_injectives(alg: Algebra) -> list[Module]:
    """Duals of the indecomposable projectives of the opposite algebra."""
    op = alg.opposite()
    return [dual(p, alg) for p in indecomposable_projectives(op)]


def injective_envelope(mod: Module):
    """Essential embedding into an injective: returns ``(E, embedding)``."""
    op = mod.algebra.opposite()
    dm = dual(mod, op)
    free, cover, _, _ = projective_cover(dm)
    env = dual(free, mod.algebra)
    return env, np.ascontiguousarray(cover.T)
