"""Finite ringed spaces through their diagram category.

For a basis B of opens with structure presheaf O, the diagram category 𝔲 has the
opens as objects and 𝔲(U, V) = O(U) when U ⊆ V, zero otherwise.  Composition
restricts then multiplies: for f ∈ 𝔲(U, V) and g ∈ 𝔲(V, W), g∘f = f·g|_U.

Presheaves on B are contravariant in the opens, so they are realized as covariant
modules over 𝔲^op.  The representable 𝔲^op(U, −) is the extension by zero P_U.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import algebra as alg
from . import funmod as fm
from . import hochschild as hc
from .lincat import LinCategory, opposite, validate_category
from .ring import FpModule


class InvalidPoset(ValueError):
    pass


class InvalidPresheaf(ValueError):
    pass


class UnsupportedConfiguration(ValueError):
    pass


class AcyclicityFailure(RuntimeError):
    def __init__(self, failures):
        self.failures = failures
        super().__init__("acyclicity fails at " + ", ".join(f"(U={u}, i={i})" for u, i in failures))


@dataclass
class FinitePoset:
    """Opens of a basis ordered by inclusion; ``leq`` is the full reflexive-transitive relation."""

    labels: list
    leq: frozenset
    minimal_open: bool = True

    @classmethod
    def from_relations(cls, labels, relations, minimal_open: bool = True) -> "FinitePoset":
        """Reflexive-transitive closure of the given inclusions (pairs of labels U ⊆ V)."""
        labels = list(labels)
        idx = {u: i for i, u in enumerate(labels)}
        n = len(labels)
        m = np.eye(n, dtype=bool)
        for u, v in relations:
            if u not in idx or v not in idx:
                raise InvalidPoset(f"unknown element in relation ({u}, {v})")
            m[idx[u], idx[v]] = True
        for k in range(n):
            m |= m[:, [k]] & m[[k], :]
        leq = frozenset((i, j) for i in range(n) for j in range(n) if m[i, j])
        poset = cls(labels, leq, minimal_open)
        poset.check()
        return poset

    def __len__(self):
        return len(self.labels)

    def index(self, u) -> int:
        if isinstance(u, (int, np.integer)) and not isinstance(u, bool) and u not in self.labels:
            return int(u)
        try:
            return self.labels.index(u)
        except ValueError:
            raise InvalidPoset(f"unknown element {u!r}") from None

    def le(self, u, v) -> bool:
        return (u, v) in self.leq

    def check(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise InvalidPoset("duplicate element labels")
        for i in range(n):
            if (i, i) not in self.leq:
                raise InvalidPoset(f"relation is not reflexive at {self.labels[i]}")
        for (i, j) in self.leq:
            if i != j and (j, i) in self.leq:
                raise InvalidPoset(f"{self.labels[i]} and {self.labels[j]} are mutually included")
            for k in range(n):
                if (j, k) in self.leq and (i, k) not in self.leq:
                    raise InvalidPoset("relation is not transitively closed")


@dataclass
class StructurePresheaf:
    """O(U) as one-object categories over a field S; ``restrictions[(U, V)]`` maps O(V) → O(U)."""

    poset: FinitePoset
    algebras: list
    restrictions: dict

    def __post_init__(self):
        errs = self.violations()
        if errs:
            raise InvalidPresheaf("; ".join(errs))

    @property
    def field(self):
        return self.algebras[0].field

    def rank(self, u: int) -> int:
        return self.algebras[u].rank(0, 0)

    def constants(self, u: int) -> np.ndarray:
        return self.algebras[u].table(0, 0, 0)[..., 0]

    def unit(self, u: int) -> np.ndarray:
        return self.algebras[u].identity[0][:, 0]

    def restriction(self, u: int, v: int) -> np.ndarray:
        if u == v:
            return self.field.eye(self.rank(u))
        return self.restrictions[(u, v)]

    def violations(self) -> list[str]:
        P = self.poset
        out = []
        if len(self.algebras) != len(P):
            return ["one algebra per basis element is required"]
        f = self.algebras[0].field
        for u, a in enumerate(self.algebras):
            if a.n_objects != 1 or a.ring.dim != 1 or a.field != f:
                out.append(f"O({P.labels[u]}) must be a one-object category over the common field")
                continue
            rep = validate_category(a)
            out.extend(f"O({P.labels[u]}): {v}" for v in rep.violations)
            m = self.constants(u)
            if not np.array_equal(m, np.swapaxes(m, 0, 1)):
                out.append(f"O({P.labels[u]}) is not commutative")
        if out:
            return out
        self.restrictions = {k: f.array(v) for k, v in self.restrictions.items()}
        for (u, v) in P.leq:
            if u == v:
                continue
            if (u, v) not in self.restrictions:
                out.append(f"missing restriction {P.labels[v]} → {P.labels[u]}")
                continue
            r = self.restrictions[(u, v)]
            if r.shape != (self.rank(u), self.rank(v)):
                out.append(f"restriction {P.labels[v]} → {P.labels[u]} has shape {r.shape}")
                continue
            if not np.array_equal(f.dot(r, self.unit(v)), self.unit(u)):
                out.append(f"restriction {P.labels[v]} → {P.labels[u]} does not preserve 1")
            # r(x·y) = r(x)·r(y) on basis pairs
            prod_v = f.einsum("abe,ce->abc", self.constants(v), r)
            prod_u = f.einsum("pa,qb,pqc->abc", r, r, self.constants(u))
            if not np.array_equal(prod_v, prod_u):
                out.append(f"restriction {P.labels[v]} → {P.labels[u]} is not multiplicative")
        for u, v, w in itertools.product(range(len(P)), repeat=3):
            if P.le(u, v) and P.le(v, w) and len({u, v, w}) == 3 and (u, w) in self.restrictions \
                    and (u, v) in self.restrictions and (v, w) in self.restrictions:
                if not np.array_equal(f.dot(self.restrictions[(u, v)], self.restrictions[(v, w)]),
                                      self.restrictions[(u, w)]):
                    out.append(f"restrictions {P.labels[w]} → {P.labels[v]} → {P.labels[u]} do not compose")
        return out


def constant_presheaf(poset: FinitePoset, algebra: LinCategory) -> StructurePresheaf:
    r = algebra.rank(0, 0)
    eye = algebra.field.eye(r)
    return StructurePresheaf(poset, [algebra] * len(poset), {(u, v): eye for (u, v) in poset.leq if u != v})


@dataclass
class DiagramCategory:
    category: LinCategory
    poset: FinitePoset
    presheaf: StructurePresheaf

    @cached_property
    def presheaf_category(self) -> LinCategory:
        """𝔲^op: covariant modules over it are presheaves on the basis."""
        return opposite(self.category)


def build_diagram_category(B: FinitePoset, O: StructurePresheaf, name: str = "") -> DiagramCategory:
    if O.poset is not B and (O.poset.labels != B.labels or O.poset.leq != B.leq):
        raise InvalidPresheaf("presheaf is defined on a different poset")
    f = O.field
    S = O.algebras[0].ring
    n = len(B)
    ranks = {(x, y): (O.rank(x) if B.le(x, y) else 0) for x in range(n) for y in range(n)}
    comp = {}
    for x, y, z in itertools.product(range(n), repeat=3):
        if not (B.le(x, y) and B.le(y, z)):
            continue
        # g ∈ O(y) (index a), f ∈ O(x) (index b): g∘f = f · res(g)
        res = O.restriction(x, y)
        t = f.einsum("ea,bec->abc", res, O.constants(x))
        comp[(x, y, z)] = t[..., None]
    ident = {x: O.algebras[x].identity[0] for x in range(n)}
    labels = {(x, y): [f"{O.algebras[x].basis_label(0, 0, a)}" for a in range(O.rank(x))]
              for x in range(n) for y in range(n) if B.le(x, y)}
    cat = LinCategory(S, [str(u) for u in B.labels], ranks, comp, ident, labels, name=name or "diagram")
    rep = validate_category(cat)
    if not rep.valid:
        raise InvalidPresheaf("diagram category is invalid: " + "; ".join(rep.violations))
    return DiagramCategory(cat, B, O)


# -- presheaves of modules ---------------------------------------------------------------


@dataclass
class PresheafModule:
    """F(U) with O(U)-actions ``actions[U]`` (r_U, dim, dim) and restrictions F(V) → F(U)."""

    presheaf: StructurePresheaf
    actions: list
    restrictions: dict = dc_field(default_factory=dict)

    def dim(self, u: int) -> int:
        return int(np.asarray(self.actions[u]).shape[-1]) if np.asarray(self.actions[u]).ndim == 3 else 0

    def restriction(self, u: int, v: int) -> np.ndarray:
        if u == v:
            return self.presheaf.field.eye(self.dim(u))
        return self.presheaf.field.array(self.restrictions[(u, v)]).reshape(self.dim(u), self.dim(v))


def structure_module(O: StructurePresheaf) -> PresheafModule:
    """O itself, each O(U) acting on itself by multiplication."""
    f = O.field
    acts = [f.reduce(np.transpose(O.constants(u), (0, 2, 1))) for u in range(len(O.poset))]
    return PresheafModule(O, acts, {k: v for k, v in O.restrictions.items()})


def extension_by_zero(O: StructurePresheaf, u) -> PresheafModule:
    """P_U: O(V) for V ⊆ U and zero elsewhere."""
    P = O.poset
    u = P.index(u)
    f = O.field
    base = structure_module(O)
    acts, res = [], {}
    for v in range(len(P)):
        r = O.rank(v)
        acts.append(base.actions[v] if P.le(v, u) else f.zeros((r, 0, 0)))
    for (a, b), m in O.restrictions.items():
        if P.le(b, u):
            res[(a, b)] = m
        else:
            res[(a, b)] = f.zeros((O.rank(a) if P.le(a, u) else 0, 0))
    return PresheafModule(O, acts, res)


def skyscraper(O: StructurePresheaf, opens_containing) -> PresheafModule:
    """The residue field placed on the given opens (assumed up-closed), zero elsewhere."""
    P = O.poset
    f = O.field
    keep = {P.index(u) for u in opens_containing}
    acts, res = [], {}
    for v in range(len(P)):
        r = O.rank(v)
        if v in keep:
            a = f.zeros((r, 1, 1))
            a[:, 0, 0] = residue_character(O, v)
            acts.append(a)
        else:
            acts.append(f.zeros((r, 0, 0)))
    for (a, b) in P.leq:
        if a != b:
            res[(a, b)] = f.eye(1) if (a in keep and b in keep) else f.zeros((int(a in keep), int(b in keep)))
    return PresheafModule(O, acts, res)


def residue_character(O: StructurePresheaf, u: int) -> np.ndarray:
    """χ(b_k) with b_k − χ(b_k)·1 in the radical; O(U) must be local."""
    f = O.field
    lam = O.algebras[u].algebra
    rad = lam.radical
    if rad.shape[1] != O.rank(u) - 1:
        raise InvalidPresheaf(f"O({O.poset.labels[u]}) is not local")
    span = np.concatenate([O.unit(u)[:, None], rad], axis=1)
    sol = f.solve(span, f.eye(O.rank(u)))
    return sol[0]


def presheaf_to_module(D: DiagramCategory, F: PresheafModule) -> fm.FpFunctorModule:
    """The covariant 𝔲^op-module of a presheaf; its value at U is F(U)."""
    op = D.presheaf_category
    lam = op.algebra
    f = op.field
    P = D.poset
    dims = [F.dim(u) for u in range(len(P))]
    offs = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(offs[-1])
    action = f.zeros((lam.n, total, total))
    hoff = op.hom_offsets
    for v in range(len(P)):
        for u in range(len(P)):
            if not P.le(u, v):
                continue
            # Hom_op(V, U) = O(U); basis a acts F(V) → F(U) by m ↦ a · m|_U
            res = F.restriction(u, v)
            acts = np.asarray(F.actions[u])
            sl = hoff[(v, u)]
            for a in range(op.rank(v, u)):
                action[sl.start + a, offs[u]:offs[u + 1], offs[v]:offs[v + 1]] = f.dot(acts[a], res) \
                    if dims[u] and dims[v] else f.zeros((dims[u], dims[v]))
    mod = alg.Module(lam, action)
    errs = mod.check()
    if errs:
        raise InvalidPresheaf("presheaf module is not a 𝔲^op-module: " + "; ".join(map(str, errs)))
    return fm.wrap(op, mod)


def representable_module(D: DiagramCategory, u) -> fm.FpFunctorModule:
    return fm.representable(D.presheaf_category, D.poset.index(u))


# -- cohomology and acyclicity ----------------------------------------------------------------


def _require_minimal_open(B: FinitePoset):
    if not B.minimal_open:
        raise UnsupportedConfiguration("cohomology is only computed on the minimal-open basis of a finite space")


def cohomology(D: DiagramCategory, u, F: fm.FpFunctorModule, i: int) -> FpModule:
    """Hⁱ(U, F) = Extⁱ(P_U, F) in presheaves on the minimal-open basis."""
    _require_minimal_open(D.poset)
    return fm.ext_cat(i, representable_module(D, u), F, degree_cap=max(3, i))


@dataclass
class AcyclicityReport:
    entries: dict
    failures: list

    @property
    def acyclic(self) -> bool:
        return not self.failures


def acyclicity_check(D: DiagramCategory) -> AcyclicityReport:
    """Hⁱ(U, O) = 0 for i = 1, 2 and every basis open U; over a field S the module M = S suffices."""
    _require_minimal_open(D.poset)
    if D.category.ring.dim != 1:
        raise UnsupportedConfiguration("the acyclicity check needs a field as base")
    O = presheaf_to_module(D, structure_module(D.presheaf))
    entries, failures = {}, []
    for u in range(len(D.poset)):
        for i in (1, 2):
            dim = cohomology(D, u, O, i).dim
            entries[(D.poset.labels[u], i)] = dim
            if dim:
                failures.append((D.poset.labels[u], i))
    return AcyclicityReport(entries, failures)


@dataclass
class SpaceClassification:
    hh2_dim: int
    hh1_dim: int
    classification: hc.Classification
    acyclicity: AcyclicityReport

    @property
    def rigid(self) -> bool:
        return self.hh2_dim == 0

    @property
    def deformations(self):
        return self.classification.deformations


def classify_space_deformations(D: DiagramCategory) -> SpaceClassification:
    acyc = acyclicity_check(D)
    if not acyc.acyclic:
        raise AcyclicityFailure(acyc.failures)
    cl = hc.classify(D.category)
    return SpaceClassification(cl.hh2.dim, cl.hh1.dim, cl, acyc)


@dataclass
class HomFormulaCheck:
    entries: dict
    holds: bool


def hom_formula_check(D: DiagramCategory) -> HomFormulaCheck:
    """dim Hom(P_U, P_V) = dim O(U) when U ⊆ V and 0 otherwise, computed in presheaves."""
    P = D.poset
    reps = [representable_module(D, u) for u in range(len(P))]
    entries, ok = {}, True
    for u, v in itertools.product(range(len(P)), repeat=2):
        got = fm.hom_functor_modules(reps[u], reps[v]).dim
        want = D.presheaf.rank(u) if P.le(u, v) else 0
        entries[(P.labels[u], P.labels[v])] = (got, want)
        ok &= got == want
    return HomFormulaCheck(entries, ok)
