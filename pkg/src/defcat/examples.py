"""A catalog of small categories, deformations and spaces used by the tests and the CLI."""
from __future__ import annotations

import numpy as np

from . import diagram as dg
from . import hochschild as hc
from .linalg import Field
from .lincat import (LinCategory, LinearDeformation, Morphism, change_hom_basis, duplicate_object_deformation,
                     matrix_category, matrix_morphism, one_object_category, strict_deformation,
                     trivial_deformation)
from .ring import (BaseRing, dual_numbers, residue_field_ring, residue_map, rmat_identity, rmat_inverse,
                   rmat_mul, truncated_polynomial)


def field_category(field: Field, name: str = "k") -> LinCategory:
    """The base field as a one-object category."""
    k = residue_field_ring(field)
    return one_object_category(k, [[[[1]]]], [[1]], ["1"], name=name)


def truncated_algebra(field: Field, n: int = 2, name: str = "") -> LinCategory:
    """k[t]/(tⁿ) as a one-object category on the basis 1, t, ..., tⁿ⁻¹."""
    k = residue_field_ring(field)
    c = np.zeros((n, n, n, 1), dtype=int)
    for a in range(n):
        for b in range(n):
            if a + b < n:
                c[a, b, a + b, 0] = 1
    unit = np.zeros((n, 1), dtype=int)
    unit[0, 0] = 1
    labels = ["1", "t"] + [f"t^{i}" for i in range(2, n)]
    return one_object_category(k, c, unit, labels[:n], name=name or f"k[t]/t^{n}")


def path_category(field: Field, length: int = 2, name: str = "") -> LinCategory:
    """Incidence category of a chain 0 < 1 < ... : Hom(i, j) = k exactly when i ≤ j."""
    k = residue_field_ring(field)
    objs = [str(i + 1) for i in range(length)]
    ranks = {(x, y): int(x <= y) for x in range(length) for y in range(length)}
    comp = {(x, y, z): [[[[1]]]] for x in range(length) for y in range(x, length) for z in range(y, length)}
    ident = {x: [[1]] for x in range(length)}
    return LinCategory(k, objs, ranks, comp, ident, name=name or f"A{length}")


def a2_category(field: Field) -> LinCategory:
    return path_category(field, 2, "A2")


def semisimple_category(field: Field, n: int = 2) -> LinCategory:
    """n copies of the field with zero Homs between distinct objects."""
    k = residue_field_ring(field)
    ranks = {(x, y): int(x == y) for x in range(n) for y in range(n)}
    comp = {(x, x, x): [[[[1]]]] for x in range(n)}
    return LinCategory(k, [f"e{i + 1}" for i in range(n)], ranks, comp, {x: [[1]] for x in range(n)},
                       name=f"k^{n}")


def t2_cocycle(cat: LinCategory) -> hc.Cochain:
    """The 2-cochain on k[t]/(t²) with c(t, t) = 1 and zero elsewhere."""
    c = hc.Cochain.zero(cat, 2)
    c.blocks[(0, 0, 0)][1, 1, 0] = cat.field.scalar(1)
    return c


def t2_eps_deformation(field: Field) -> LinearDeformation:
    """R[t]/(t² − ε) over R = k[ε]/(ε²)."""
    b = truncated_algebra(field, 2)
    return hc.first_order_deformation(b, t2_cocycle(b), name="t^2=eps")


def _torus_constants(p: int, q_exponent) -> np.ndarray:
    """Structure constants of x^i y^j · x^k y^l = q^{jk} x^{i+k} y^{j+l}, q = 1 + ε."""
    n = p * p
    c = np.zeros((n, n, n, 2), dtype=int)
    for i in range(p):
        for j in range(p):
            for k in range(p):
                for l in range(p):
                    a, b = i * p + j, k * p + l
                    out = ((i + k) % p) * p + (j + l) % p
                    c[a, b, out, 0] = 1
                    c[a, b, out, 1] = q_exponent(j, k)
    return c


def torus_labels(p: int) -> list[str]:
    return [f"x{i}y{j}" for i in range(p) for j in range(p)]


def commutative_torus(p: int) -> LinCategory:
    """F_p[x, y]/(x^p − 1, y^p − 1)."""
    field = Field(p)
    c = _torus_constants(p, lambda j, k: 0)[..., :1]
    unit = np.zeros((p * p, 1), dtype=int)
    unit[0, 0] = 1
    return one_object_category(residue_field_ring(field), c, unit, torus_labels(p), name=f"torus{p}")


def quantum_torus(p: int = 3) -> LinearDeformation:
    """yx = (1 + ε)xy over F_p[ε]/(ε²); (1 + ε)^{jk} = 1 + jkε."""
    field = Field(p)
    R = dual_numbers(field)
    c = _torus_constants(p, lambda j, k: (j * k) % p)
    unit = np.zeros((p * p, 2), dtype=int)
    unit[0, 0] = 1
    total = one_object_category(R, c, unit, torus_labels(p), name=f"qtorus{p}")
    return strict_deformation(total, residue_map(R), name=f"quantum torus p={p}")


def quantum_torus_cocycle(p: int = 3) -> hc.Cochain:
    """The ε-part of the quantum torus multiplication as a 2-cochain on the commutative torus."""
    b = commutative_torus(p)
    c = _torus_constants(p, lambda j, k: (j * k) % p)[..., 1]
    cochain = hc.Cochain.zero(b, 2)
    cochain.blocks[(0, 0, 0)][...] = b.field.reduce(c)
    return cochain


def trivial(cat: LinCategory, order: int = 2) -> LinearDeformation:
    R = truncated_polynomial(cat.field, order)
    return trivial_deformation(cat, residue_map(R))


def nonstrict_fixture(field: Field) -> LinearDeformation:
    """The trivial dual-numbers deformation of A₂ with a re-based duplicate of the first object."""
    d = trivial(a2_category(field))
    twist = rmat_identity(d.total.ring, 1)
    twist[0, 0, 1] = field.scalar(1)
    return duplicate_object_deformation(d, 0, twist)


# -- randomized matrix categories ------------------------------------------------------------------


class TwistedMatrixCategory:
    """A matrix category over R whose Hom bases are twisted by random invertible R-matrices.

    ``morphism(x, y, M)`` returns the morphism given by the matrix M in the new coordinates.
    """

    def __init__(self, ring: BaseRing, sizes, rng: np.random.Generator):
        self.ring = ring
        self.sizes = list(sizes)
        base = matrix_category(ring, self.sizes)
        self._inv = {}
        changes = {}
        for x in range(base.n_objects):
            for y in range(base.n_objects):
                r = base.rank(x, y)
                while True:
                    p = random_rmatrix(ring, r, r, rng)
                    inv = rmat_inverse(ring, p)
                    if inv is not None:
                        break
                changes[(x, y)] = p
                self._inv[(x, y)] = inv
        self.base = base
        self.category = change_hom_basis(base, changes)

    def morphism(self, x: int, y: int, mat) -> Morphism:
        old = matrix_morphism(self.base, x, y, mat).coords
        new = rmat_mul(self.ring, self._inv[(x, y)], old[:, None, :])[:, 0, :]
        return Morphism(self.category, x, y, new)


def random_rmatrix(ring: BaseRing, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return ring.field.random(rng, (rows, cols, ring.dim))


def random_invertible_rmatrix(ring: BaseRing, n: int, rng: np.random.Generator):
    while True:
        m = random_rmatrix(ring, n, n, rng)
        inv = rmat_inverse(ring, m)
        if inv is not None:
            return m, inv


# -- spaces ---------------------------------------------------------------------------------------


def sierpinski(field: Field, algebra: LinCategory | None = None) -> dg.DiagramCategory:
    """Basis {U, X} with U ⊂ X, the minimal opens of the Sierpiński space."""
    poset = dg.FinitePoset.from_relations(["U", "X"], [("U", "X")])
    return dg.build_diagram_category(poset, dg.constant_presheaf(poset, algebra or field_category(field)),
                                     name="sierpinski")


def point_space(algebra: LinCategory) -> dg.DiagramCategory:
    poset = dg.FinitePoset.from_relations(["pt"], [])
    return dg.build_diagram_category(poset, dg.constant_presheaf(poset, algebra), name="point")


def chain_space(field: Field, n: int = 3) -> dg.DiagramCategory:
    labels = [f"U{i + 1}" for i in range(n)]
    poset = dg.FinitePoset.from_relations(labels, list(zip(labels, labels[1:])))
    return dg.build_diagram_category(poset, dg.constant_presheaf(poset, field_category(field)), name="chain")


def discrete_space(field: Field, n: int = 2) -> dg.DiagramCategory:
    poset = dg.FinitePoset.from_relations([f"p{i + 1}" for i in range(n)], [])
    return dg.build_diagram_category(poset, dg.constant_presheaf(poset, field_category(field)), name="discrete")
