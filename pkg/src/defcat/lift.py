"""Transport of isomorphisms, zero objects, idempotent splittings and biproducts
through a nilpotent linear deformation.

Each correction formula is exact over a square-zero extension.  For a kernel
of higher nilpotency order the formula is iterated: an error in I^m becomes an
error in I^{2m}, so ⌈log₂ n⌉ rounds reach exactness when I^n = 0.
"""
from __future__ import annotations

import math

import numpy as np

from .lincat import LinCategory, Morphism
from .ring import RingSurjection


class LiftPreconditionError(ValueError):
    pass


class LiftFailure(RuntimeError):
    """The iteration did not converge; impossible for valid input over a nilpotent kernel."""


def reduce_coords(mor: Morphism, theta: RingSurjection) -> np.ndarray:
    return theta.apply_coefficients(mor.coords)


def congruent(a: Morphism, b: Morphism, theta: RingSurjection) -> bool:
    """a ≡ b modulo the kernel of θ."""
    return (a.source == b.source and a.target == b.target
            and np.array_equal(reduce_coords(a, theta), reduce_coords(b, theta)))


def _rounds(theta: RingSurjection) -> int:
    n = theta.nilpotency_order
    return max(1, math.ceil(math.log2(n))) if n > 1 else 0


def lift_isomorphism(f: Morphism, g0: Morphism, theta: RingSurjection, history: list | None = None) -> Morphism:
    """The exact inverse of ``f`` from an inverse ``g0`` modulo ker θ (Newton iteration g ← 2g − gfg)."""
    c = f.category
    one_a, one_b = c.identity_morphism(f.source), c.identity_morphism(f.target)
    if g0.source != f.target or g0.target != f.source:
        raise LiftPreconditionError("g0 must go from the target of f to its source")
    if not (congruent(g0 @ f, one_a, theta) and congruent(f @ g0, one_b, theta)):
        raise LiftPreconditionError("g0 is not an inverse of f modulo the kernel")
    g = g0
    for _ in range(_rounds(theta) + 1):
        if g @ f == one_a and f @ g == one_b:
            return g
        g = g.scale(2) - g @ f @ g
        if history is not None:
            history.append(g)
    if g @ f == one_a and f @ g == one_b:
        return g
    raise LiftFailure("inverse iteration did not converge")


def is_zero_object(c: LinCategory, z, theta: RingSurjection) -> bool:
    """Z is zero iff its reduction is zero; flat Hom-modules make the two checks agree."""
    z = c.obj(z)
    reduced_zero = c.field.is_zero(theta.apply_coefficients(c.identity[z]))
    if reduced_zero and not c.field.is_zero(c.identity[z]):
        raise LiftFailure("identity vanishes modulo the kernel but not exactly")
    return reduced_zero


def split_idempotent_lift(e: Morphism, r0: Morphism, s0: Morphism, theta: RingSurjection):
    """An exact splitting (r, s) of the idempotent e: s∘r = e and r∘s = 1.

    ``r0: A → B`` and ``s0: B → A`` split e modulo the kernel.  Each round applies
    s ← s + e∘s − s∘r∘s and r ← r∘e.
    """
    c = e.category
    if e.source != e.target:
        raise LiftPreconditionError("an idempotent must be an endomorphism")
    if e @ e != e:
        raise LiftPreconditionError("e is not idempotent")
    if r0.source != e.source or s0.target != e.source or r0.target != s0.source:
        raise LiftPreconditionError("r0, s0 do not match the idempotent")
    one_b = c.identity_morphism(r0.target)
    if not (congruent(s0 @ r0, e, theta) and congruent(r0 @ s0, one_b, theta)):
        raise LiftPreconditionError("r0, s0 do not split e modulo the kernel")
    r, s = r0, s0
    for _ in range(_rounds(theta) + 2):
        if s @ r == e and r @ s == one_b:
            return r, s
        r, s = r @ e, s + e @ s - s @ r @ s
    if s @ r == e and r @ s == one_b:
        return r, s
    raise LiftFailure("idempotent splitting did not converge")


def biproduct_equations(s1: Morphism, s2: Morphism, p1: Morphism, p2: Morphism) -> dict:
    """Truth values of the five biproduct equations."""
    c = s1.category
    one_a, one_b = c.identity_morphism(s1.source), c.identity_morphism(s2.source)
    one_c = c.identity_morphism(s1.target)
    return {
        "p1 s1 = 1": p1 @ s1 == one_a,
        "p1 s2 = 0": (p1 @ s2).is_zero(),
        "p2 s2 = 1": p2 @ s2 == one_b,
        "p2 s1 = 0": (p2 @ s1).is_zero(),
        "s1 p1 + s2 p2 = 1": s1 @ p1 + s2 @ p2 == one_c,
    }


def lift_biproduct(s1: Morphism, s2: Morphism, p1: Morphism, p2: Morphism, theta: RingSurjection):
    """Corrected projections making (C, s1, s2, p1′, p2′) an exact biproduct.

    p1 ← 2p1 − p1 s1 p1 − p1 s2 p2 and, symmetrically, p2 ← 2p2 − p2 s2 p2 − p2 s1 p1.
    """
    c = s1.category
    if s1.target != s2.target or p1.source != s1.target or p2.source != s2.target \
            or p1.target != s1.source or p2.target != s2.source:
        raise LiftPreconditionError("biproduct data has mismatched objects")
    one_a, one_b = c.identity_morphism(s1.source), c.identity_morphism(s2.source)
    one_c = c.identity_morphism(s1.target)
    zero_ab = c.zero_morphism(s2.source, s1.source)
    zero_ba = c.zero_morphism(s1.source, s2.source)
    ok = (congruent(p1 @ s1, one_a, theta) and congruent(p2 @ s2, one_b, theta)
          and congruent(p1 @ s2, zero_ab, theta) and congruent(p2 @ s1, zero_ba, theta)
          and congruent(s1 @ p1 + s2 @ p2, one_c, theta))
    if not ok:
        raise LiftPreconditionError("reduction of the data is not a biproduct")
    for _ in range(_rounds(theta) + 2):
        if all(biproduct_equations(s1, s2, p1, p2).values()):
            return p1, p2
        p1, p2 = (p1.scale(2) - p1 @ s1 @ p1 - p1 @ s2 @ p2,
                  p2.scale(2) - p2 @ s2 @ p2 - p2 @ s1 @ p1)
    if all(biproduct_equations(s1, s2, p1, p2).values()):
        return p1, p2
    raise LiftFailure("biproduct correction did not converge")
