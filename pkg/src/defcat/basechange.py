"""Base change of functor modules along a nilpotent surjection θ: R → S.

Modules over S ⊗_R 𝔞 are modules over the category algebra of the
base-changed category.  Three functors connect the two sides:

* ``restrict``:  view an (S ⊗ 𝔞)-module as an 𝔞-module through Λ(𝔞) → Λ(S ⊗ 𝔞);
* ``tensor_up``: F ↦ S ⊗_R F = F / IF (left adjoint of restrict);
* ``hom_up``:    F ↦ Hom_R(S, F) = {m : Im = 0} (right adjoint of restrict).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import algebra as alg
from . import funmod as fm
from .funmod import FpFunctorModule, FunctorModuleMap
from .lincat import LinCategory, LinearDeformation, base_change_category
from .ring import RingSurjection, kernel_filtration


class NoLiftFound(RuntimeError):
    """No injective lift exists; impossible for flat nilpotent deformations of finite categories."""


class BaseChange:
    """Base change data for a category 𝔞 over R and a surjection θ: R → S."""

    def __init__(self, category: LinCategory, theta: RingSurjection, reduced: LinCategory | None = None):
        self.category = category
        self.theta = theta
        bc = base_change_category(category, theta)
        if reduced is not None and not bc.structurally_equal(reduced):
            raise ValueError("reduced category does not match S ⊗ 𝔞")
        self.reduced = reduced if reduced is not None else bc

    @classmethod
    def of_deformation(cls, d: LinearDeformation) -> "BaseChange":
        if not d.is_structurally_strict():
            raise ValueError("base change needs a strict deformation with identity reduction")
        return cls(d.total, d.theta, d.reduced)

    @property
    def field(self):
        return self.category.field

    @cached_property
    def algebra_map(self) -> np.ndarray:
        """k-matrix of Λ(𝔞) → Λ(S ⊗ 𝔞)."""
        return self._coefficient_map(self.theta.matrix, self.category, self.reduced)

    @cached_property
    def algebra_section(self) -> np.ndarray:
        """k-linear section Λ(S ⊗ 𝔞) → Λ(𝔞) of the algebra map."""
        return self._coefficient_map(self.theta.section, self.reduced, self.category)

    def _coefficient_map(self, coeff, src: LinCategory, tgt: LinCategory) -> np.ndarray:
        """Apply a map of coefficient rings blockwise to every basis morphism."""
        f = self.field
        d_out, d_in = coeff.shape
        out = f.zeros((tgt.algebra.n, src.algebra.n))
        tgt_off = tgt.hom_offsets
        for key, sl in src.hom_offsets.items():
            t0 = tgt_off[key].start
            for i in range(src.rank(*key)):
                out[t0 + i * d_out:t0 + (i + 1) * d_out, sl.start + i * d_in:sl.start + (i + 1) * d_in] = coeff
        return out

    @cached_property
    def ideal_basis(self) -> np.ndarray:
        return self.theta.kernel_basis

    def _ideal_image(self, mod: alg.Module, ideal=None) -> np.ndarray:
        """Basis of I·M for an ideal given by R-coordinate columns."""
        f = self.field
        ideal = self.ideal_basis if ideal is None else ideal
        if mod.dim == 0 or ideal.shape[1] == 0:
            return f.zeros((mod.dim, 0))
        span = f.einsum("tk,tab->akb", ideal, mod.central_action).reshape(mod.dim, -1)
        return f.colspace(span)

    def _induced(self, mod: alg.Module, proj, sec) -> alg.Module:
        """The Λ(S⊗𝔞)-action on a subquotient of an 𝔞-module killed by I."""
        f = self.field
        lam_b = self.reduced.algebra
        if proj.shape[0] == 0:
            return alg.zero_module(lam_b)
        lifted = f.reduce(np.tensordot(self.algebra_section.T, mod.action, axes=(1, 0)))
        act = f.einsum("ka,iab,bl->ikl", proj, lifted, sec)
        return alg.Module(lam_b, act)

    # -- the three functors -------------------------------------------------------

    def restrict(self, G: FpFunctorModule) -> FpFunctorModule:
        f = self.field
        mod = G.module
        if mod.dim == 0:
            return fm.wrap(self.category, alg.zero_module(self.category.algebra))
        act = f.reduce(np.tensordot(self.algebra_map.T, mod.action, axes=(1, 0)))
        return fm.wrap(self.category, alg.Module(self.category.algebra, act))

    def tensor_up(self, F: FpFunctorModule) -> FpFunctorModule:
        """S ⊗_R F = F / IF; ``unit_map`` records the projection F → restrict(S ⊗ F)."""
        f = self.field
        mod = F.module
        proj, sec = f.complement(self._ideal_image(mod), mod.dim)
        out = fm.wrap(self.reduced, self._induced(mod, proj, sec))
        out.unit_matrix = proj
        return out

    def tensor_up_presentation(self, F: FpFunctorModule) -> FpFunctorModule:
        """S ⊗_R F computed by applying θ to the presentation matrix."""
        delta = [[self.theta.apply_coefficients(e) for e in row] for row in F.delta]
        return FpFunctorModule(self.reduced, F.sources, F.targets, delta)

    def hom_up(self, F: FpFunctorModule) -> FpFunctorModule:
        """Hom_R(S, F) = annihilator of I; ``counit_matrix`` is its inclusion into F."""
        f = self.field
        mod = F.module
        ideal = self.ideal_basis
        if mod.dim and ideal.shape[1]:
            acts = f.einsum("tk,tab->kab", ideal, mod.central_action).reshape(-1, mod.dim)
            ann = f.nullspace(acts)
        else:
            ann = f.eye(mod.dim)
        if ann.shape[1] == 0:
            out = fm.wrap(self.reduced, alg.zero_module(self.reduced.algebra))
            out.counit_matrix = f.zeros((mod.dim, 0))
            return out
        linv = f.left_inverse(ann)
        out = fm.wrap(self.reduced, self._induced(mod, linv, ann))
        out.counit_matrix = ann
        return out

    def hom_up_map(self, fmap: FunctorModuleMap):
        """Hom_R(S, f) together with the two annihilator modules."""
        f = self.field
        a, b = self.hom_up(fmap.source), self.hom_up(fmap.target)
        mat = f.dot(f.left_inverse(b.counit_matrix), f.dot(fmap.matrix, a.counit_matrix)) \
            if a.dim and b.dim else f.zeros((b.dim, a.dim))
        return FunctorModuleMap(a, b, mat)

    def tensor_up_map(self, fmap: FunctorModuleMap):
        f = self.field
        a, b = self.tensor_up(fmap.source), self.tensor_up(fmap.target)
        _, sec = f.complement(self._ideal_image(fmap.source.module), fmap.source.dim)
        mat = f.chain(b.unit_matrix, fmap.matrix, sec) if a.dim and b.dim else f.zeros((b.dim, a.dim))
        return FunctorModuleMap(a, b, mat)

    # -- adjunctions ------------------------------------------------------------

    def tensor_adjunction(self, F: FpFunctorModule, G: FpFunctorModule) -> "AdjunctionCheck":
        """Hom_{S⊗𝔞}(S ⊗ F, G) ≅ Hom_𝔞(F, restrict G) via ψ ↦ ψ∘unit."""
        f = self.field
        up = self.tensor_up(F)
        rg_ = self.restrict(G)
        left = alg.hom(up.module, G.module)
        right = alg.hom(F.module, rg_.module)
        images = [f.dot(left.basis[k], up.unit_matrix) for k in range(left.dim)]
        return _adjunction_check(f, left, right, images)

    def hom_adjunction(self, G: FpFunctorModule, F: FpFunctorModule) -> "AdjunctionCheck":
        """Hom_{S⊗𝔞}(G, Hom_R(S, F)) ≅ Hom_𝔞(restrict G, F) via φ ↦ counit∘φ."""
        f = self.field
        up = self.hom_up(F)
        rg_ = self.restrict(G)
        left = alg.hom(G.module, up.module)
        right = alg.hom(rg_.module, F.module)
        images = [f.dot(up.counit_matrix, left.basis[k]) for k in range(left.dim)]
        return _adjunction_check(f, left, right, images)

    def triangle_identities(self, F: FpFunctorModule, G: FpFunctorModule) -> dict:
        """Both triangle identities of each adjunction, as exact matrix equalities.

        F is an 𝔞-module and G an (S ⊗ 𝔞)-module.  The counit of S⊗ ⊣ restrict and
        the unit of restrict ⊣ Hom_R(S, −) are identities on underlying spaces
        because I acts by zero on G.
        """
        f = self.field
        out = {}
        up = self.tensor_up(F)
        unit_F = FunctorModuleMap(F, self.restrict(up), up.unit_matrix)
        out["tensor: counit after S⊗unit"] = np.array_equal(self.tensor_up_map(unit_F).matrix, f.eye(up.dim))
        out["tensor: restrict(counit) after unit"] = np.array_equal(
            self.tensor_up(self.restrict(G)).unit_matrix, f.eye(G.dim))
        hg = self.hom_up(self.restrict(G))
        out["hom: counit after restrict(unit)"] = np.array_equal(
            f.dot(hg.counit_matrix, f.left_inverse(hg.counit_matrix)), f.eye(G.dim))
        hf = self.hom_up(F)
        counit_F = FunctorModuleMap(self.restrict(hf), F, hf.counit_matrix)
        back = self.hom_up_map(counit_F)
        unit = f.left_inverse(self.hom_up(self.restrict(hf)).counit_matrix)
        out["hom: Hom(S,counit) after unit"] = np.array_equal(f.dot(back.matrix, unit), f.eye(hf.dim))
        return out

    # -- Nakayama, monomorphisms, filtration --------------------------------------

    def nakayama_is_zero(self, F: FpFunctorModule) -> bool:
        """True iff S ⊗ F = 0; in that case F itself is checked to vanish."""
        zero = self.tensor_up(F).dim == 0
        if zero and F.dim != 0:
            raise AssertionError("S ⊗ F = 0 for a nonzero F: the kernel is not nilpotent")
        return zero

    def reflects_mono_check(self, fmap: FunctorModuleMap) -> "MonoReflection":
        up = self.hom_up_map(fmap)
        up_mono = up.is_mono()
        f_mono = fmap.is_mono()
        return MonoReflection(up_mono, f_mono, (not up_mono) or f_mono)

    def gr(self, F: FpFunctorModule) -> FpFunctorModule:
        """⊕ₖ IᵏF / Iᵏ⁺¹F as an (S ⊗ 𝔞)-module."""
        f = self.field
        mod = F.module
        powers = [f.eye(mod.dim)]
        for ideal in kernel_filtration(self.theta):
            powers.append(self._ideal_image(mod, ideal) if ideal.shape[1] else f.zeros((mod.dim, 0)))
        pieces = []
        for k in range(len(powers) - 1):
            top, bottom = powers[k], powers[k + 1]
            if top.shape[1] == 0:
                break
            sub = alg.subquotient(mod, top, bottom)
            if sub.dim == 0:
                continue
            pieces.append(self._induced(mod, sub.cycle_projection, sub.cycle_section))
        if not pieces:
            return fm.wrap(self.reduced, alg.zero_module(self.reduced.algebra))
        return fm.wrap(self.reduced, alg.direct_sum(pieces, self.reduced.algebra))

    # -- injective lifting --------------------------------------------------------

    def lift_injective(self, E: FpFunctorModule, seed: int = 0) -> FpFunctorModule:
        """An injective 𝔞-module whose Hom_R(S, −) is isomorphic to the injective E."""
        E = self._rebase(E)
        parts = alg.decompose(E.module, seed)
        candidates = fm.indecomposable_injectives(self.category)
        reductions = [self.hom_up(c) for c in candidates]
        chosen = []
        for part in parts:
            hit = None
            for cand, red in zip(candidates, reductions):
                if red.dim == part.dim and alg.find_isomorphism(red.module, part, seed) is not None:
                    hit = cand
                    break
            if hit is None:
                raise NoLiftFound("no indecomposable injective reduces to a summand of E")
            chosen.append(hit)
        return fm.direct_sum(chosen) if len(chosen) != 1 else chosen[0]

    def lift_injective_by_envelope(self, E: FpFunctorModule) -> FpFunctorModule:
        """The injective envelope of E viewed as an 𝔞-module; it is also a lift of E."""
        return fm.injective_envelope(self.restrict(self._rebase(E)))[0]

    def _rebase(self, E: FpFunctorModule) -> FpFunctorModule:
        if E.category is self.reduced:
            return E
        if not E.category.structurally_equal(self.reduced):
            raise ValueError("module is not over S ⊗ 𝔞")
        return fm.wrap(self.reduced, alg.Module(self.reduced.algebra, E.module.action))


@dataclass
class AdjunctionCheck:
    left_dim: int
    right_dim: int
    bijective: bool
    matrix: np.ndarray = dc_field(repr=False)
    inverse: np.ndarray | None = dc_field(default=None, repr=False)


@dataclass
class MonoReflection:
    hom_up_mono: bool
    mono: bool
    holds: bool


def _adjunction_check(f, left: alg.HomSpace, right: alg.HomSpace, images) -> AdjunctionCheck:
    if images:
        mat = np.stack([right.coordinates(im) for im in images], axis=1)
    else:
        mat = f.zeros((right.dim, 0))
    inv = f.inverse(mat) if mat.shape[0] == mat.shape[1] else None
    return AdjunctionCheck(left.dim, right.dim, inv is not None, mat, inv)
