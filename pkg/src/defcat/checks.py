"""Randomized invariant checks shared by ``defcat selftest`` and the acceptance tests.

Each check returns a :class:`CheckResult`; nothing here raises on a failed invariant.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from . import diagram as dg
from . import examples as ex
from . import funmod as fm
from . import hochschild as hc
from . import lift
from . import ring as rg
from .basechange import BaseChange
from .linalg import Field
from .lincat import (LinCategory, LinFunctor, NatTransform, algebra_category, extend_scalars, make_strict,
                     matrix_category, matrix_morphism, strictify_equivalence, trivial_deformation,
                     validate_category, validate_deformation, verify_deformation_equivalence)
from .ring import residue_map, rmat_lift, rmat_mul, rmat_reduce, truncated_polynomial, truncation

F5 = Field(5)
QQ = Field(0)


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    instances: int = 0
    failures: list = field(default_factory=list)
    info: dict = field(default_factory=dict)
    seconds: float = 0.0

    def fail(self, msg: str):
        self.passed = False
        if len(self.failures) < 20:
            self.failures.append(msg)

    def expect(self, cond, msg: str) -> bool:
        if not cond:
            self.fail(msg)
        return bool(cond)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.instances} instances in {self.seconds:.2f}s"


def _timed(name: str):
    def wrap(fn):
        def run(*args, **kwargs):
            res = CheckResult(name)
            t0 = time.perf_counter()
            try:
                fn(res, *args, **kwargs)
            except Exception as exc:  # an exception is a failed invariant, reported rather than raised
                res.fail(f"{type(exc).__name__}: {exc}")
            res.seconds = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def witnessed_isomorphism(m: alg.Module, n: alg.Module) -> bool:
    """Find an isomorphism and confirm both maps are module maps and mutually inverse."""
    iso = alg.find_isomorphism(m, n)
    if iso is None:
        return False
    f = m.field
    phi, psi = iso
    return (alg.is_module_map(phi, m, n) and alg.is_module_map(psi, n, m)
            and np.array_equal(f.dot(psi, phi), f.eye(m.dim)) and np.array_equal(f.dot(phi, psi), f.eye(n.dim)))


def same_tables(a: LinCategory, b: LinCategory) -> bool:
    """Equal ranks, composition and identities in the given object order; labels are ignored."""
    if a.n_objects != b.n_objects or not a.ring.same_as(b.ring):
        return False
    n = a.n_objects
    if any(a.rank(x, y) != b.rank(x, y) for x in range(n) for y in range(n)):
        return False
    if any(not np.array_equal(a.identity[x], b.identity[x]) for x in range(n)):
        return False
    for key in set(a.comp) | set(b.comp):
        if not np.array_equal(a.table(*key), b.table(*key)):
            return False
    return True


def _ideal_noise(ring, shape, rng) -> np.ndarray:
    """A random R-matrix with entries in the maximal ideal (coordinate 0 is the unit)."""
    noise = ring.field.random(rng, tuple(shape) + (ring.dim,))
    noise[..., 0] = 0
    return noise


# -- lifting formulas ----------------------------------------------------------------------


def _one_lift_instance(res: CheckResult, field_: Field, order: int, rng) -> None:
    R = truncated_polynomial(field_, order)
    th = residue_map(R)
    T = ex.TwistedMatrixCategory(R, [1, 2], rng)
    c = T.category
    tag = f"{field_.name} order {order}"
    u, u_inv = ex.random_invertible_rmatrix(R, 2, rng)

    # inverse of an isomorphism of R^2
    f_ = T.morphism(1, 1, u)
    g0 = T.morphism(1, 1, rmat_lift(th, rmat_reduce(th, u_inv)) + _ideal_noise(R, (2, 2), rng))
    hist = []
    g = lift.lift_isomorphism(f_, g0, th, history=hist)
    one = c.identity_morphism(1)
    res.expect(g @ f_ == one and f_ @ g == one, f"{tag}: lifted inverse fails g∘f = f∘g = 1")
    if order == 2 and hist:
        # one Newton step already suffices when the kernel squares to zero
        step = g0.scale(2) - g0 @ f_ @ g0
        res.expect(step @ f_ == one, f"{tag}: (2g − gfg)∘f ≠ 1 after one step")

    # splitting e = u E₁₁ u⁻¹ on R^2 through R^1
    col0 = u[:, :1, :]
    row0 = u_inv[:1, :, :]
    e_mat = rmat_mul(R, col0, row0)
    e = T.morphism(1, 1, e_mat)
    r0 = T.morphism(1, 0, row0 + _ideal_noise(R, (1, 2), rng))
    s0 = T.morphism(0, 1, col0 + _ideal_noise(R, (2, 1), rng))
    r, s = lift.split_idempotent_lift(e, r0, s0, th)
    res.expect(s @ r == e and r @ s == c.identity_morphism(0), f"{tag}: idempotent splitting not exact")

    # R^2 as a biproduct of two copies of R^1
    s1 = T.morphism(0, 1, u[:, :1, :])
    s2 = T.morphism(0, 1, u[:, 1:, :])
    p1 = T.morphism(1, 0, u_inv[:1] + _ideal_noise(R, (1, 2), rng))
    p2 = T.morphism(1, 0, u_inv[1:] + _ideal_noise(R, (1, 2), rng))
    q1, q2 = lift.lift_biproduct(s1, s2, p1, p2, th)
    eqs = lift.biproduct_equations(s1, s2, q1, q2)
    res.expect(all(eqs.values()), f"{tag}: biproduct equations {[k for k, v in eqs.items() if not v]} fail")
    res.instances += 1


@_timed("lifting formulas")
def check_lifting_formulas(res: CheckResult, seed: int = 0, order2: int = 200, order3: int = 50,
                           rational_every: int = 5) -> None:
    """Inverse, idempotent-splitting and biproduct lifts on twisted matrix categories."""
    rng = np.random.default_rng(seed)
    counts = {}
    for order, n in ((2, order2), (3, order3)):
        for i in range(n):
            field_ = QQ if i % rational_every == 0 else F5
            _one_lift_instance(res, field_, order, rng)
            key = f"{field_.name} order {order}"
            counts[key] = counts.get(key, 0) + 1
    res.info["instances"] = counts


# -- first-order deformations of k[t]/t² ----------------------------------------------------


def dual_numbers_report(cat: LinCategory, res: CheckResult, tag: str = "") -> None:
    """HH² of k[t]/t² is one-dimensional and its class gives a strict flat, nontrivial deformation."""
    h2 = hc.hh(cat, 2)
    full = hc.hh(cat, 2, normalized=False)
    res.info[f"{tag}hh2"] = h2.dim
    res.expect(h2.dim == 1, f"{tag}HH² has dimension {h2.dim}, expected 1")
    res.expect(full.dim == h2.dim, f"{tag}normalized ({h2.dim}) and full ({full.dim}) complexes disagree")
    if h2.dim != 1:
        return
    c = h2.classes[0].representative
    res.expect(hc.differential(c).is_zero(), f"{tag}representative is not a cocycle")
    d = hc.first_order_deformation(cat, c, name="t^2=eps")
    rep = validate_deformation(d)
    res.expect(rep.valid, f"{tag}deformation invalid: {rep.violations[:3]}")
    res.expect(rep.info.get("strict") and rep.info.get("flat"), f"{tag}deformation is not strict and flat")
    eq = hc.are_equivalent(c, hc.Cochain.zero(cat, 2))
    res.expect(not eq.equivalent, f"{tag}deformation is equivalent to the trivial one")
    # the t² = ε cocycle is cohomologous to the computed class up to a nonzero scalar
    ref = ex.t2_cocycle(cat)
    res.expect(not hc.are_equivalent(ref, hc.Cochain.zero(cat, 2), verify=False).equivalent,
               f"{tag}c(t, t) = 1 is a coboundary")
    res.instances += 1


@_timed("dual numbers classification")
def check_dual_numbers(res: CheckResult, seed: int = 0) -> None:
    dual_numbers_report(ex.truncated_algebra(F5, 2), res)


# -- quantum torus -------------------------------------------------------------------------


@_timed("quantum torus")
def check_quantum_torus(res: CheckResult, seed: int = 0, p: int = 3) -> None:
    """yx = (1 + ε)xy over F_p[ε]/ε² is strict and flat and reduces to the commutative torus."""
    q = ex.quantum_torus(p)
    rep = validate_deformation(q)
    res.expect(rep.valid, f"quantum torus invalid: {rep.violations[:3]}")
    res.expect(rep.info.get("strict") and rep.info.get("flat"), "quantum torus is not strict and flat")
    from .lincat import base_change_category
    res.expect(base_change_category(q.total, q.theta).structurally_equal(ex.commutative_torus(p)),
               "ε ↦ 0 does not give the commutative torus")
    res.expect(hc.differential(ex.quantum_torus_cocycle(p)).is_zero(), "torus cocycle is not closed")
    res.instances += 1


# -- identities between Hom, ⊗ and module categories -----------------------------------------


def _module_identity_settings():
    dual, cubic = truncated_polynomial(F5, 2), truncated_polynomial(F5, 3)
    a2 = ex.a2_category(F5)
    t2 = ex.truncated_algebra(F5, 2)
    return [
        ("R over dual numbers", algebra_category(dual)),
        ("R over k[e]/e^3", algebra_category(cubic)),
        ("A2 over dual numbers", extend_scalars(a2, dual)),
        ("A2 over k[e]/e^3", extend_scalars(a2, cubic)),
        ("t^2=eps", ex.t2_eps_deformation(F5).total),
    ]


def _flat_modules(cat):
    return [fm.representable(cat, x) for x in range(cat.n_objects)]


def _hom(F, G) -> rg.FpModule:
    return fm.hom_functor_modules(F, G).module


def _module_identity_instance(res, tag, cat, rng, injectives, flats, coflats):
    R = cat.ring
    X = rg.random_module(R, rng, 2, 2, in_ideal=bool(rng.integers(2)))
    Y = rg.random_module(R, rng, 2, 2, in_ideal=bool(rng.integers(2)))
    C = fm.random_functor_module(cat, rng)
    D = fm.random_functor_module(cat, rng)
    E = injectives[int(rng.integers(len(injectives)))]
    Cc = coflats[int(rng.integers(len(coflats)))]
    Cf = flats[int(rng.integers(len(flats)))]
    Df = flats[int(rng.integers(len(flats)))]
    iso = witnessed_isomorphism

    a = _hom(fm.tensor_pointwise(X, C), D).module
    b = rg.hom_R(X, _hom(C, D)).module
    c_ = _hom(C, fm.hom_pointwise(X, D)).module
    res.expect(iso(a, b) and iso(b, c_), f"{tag}: (0) adjunction isomorphisms fail")
    res.expect(iso(fm.hom_pointwise(rg.tensor_R(X, Y), C).module,
                   fm.hom_pointwise(X, fm.hom_pointwise(Y, C)).module), f"{tag}: (1) Hom-tensor adjunction fails")
    res.expect(iso(fm.tensor_pointwise(rg.tensor_R(X, Y), C).module,
                   fm.tensor_pointwise(X, fm.tensor_pointwise(Y, C)).module), f"{tag}: (2) associativity fails")
    res.expect(iso(fm.tensor_pointwise(X, fm.hom_pointwise(Y, Cc)).module,
                   fm.hom_pointwise(rg.hom_R(X, Y), Cc).module), f"{tag}: (3) coflat evaluation fails")
    res.expect(iso(fm.hom_pointwise(X, fm.tensor_pointwise(Y, Df)).module,
                   fm.tensor_pointwise(rg.hom_R(X, Y), Df).module), f"{tag}: (4) flat evaluation fails")
    res.expect(iso(rg.tensor_R(X, _hom(C, E)).module, _hom(fm.hom_pointwise(X, C), E).module),
               f"{tag}: (5) injective duality fails")
    res.expect(rg.is_flat(_hom(Cc, E)), f"{tag}: (6) Hom(coflat, injective) is not flat")
    res.expect(rg.is_coflat(_hom(Cf, E)), f"{tag}: (7) Hom(flat, injective) is not coflat")
    # (8): for flat E the hypothesis over all Z reduces to Z = k by dévissage along the socle series
    Ef = flats[int(rng.integers(len(flats)))]
    k_ef = fm.tensor_pointwise(rg.FpModule.residue_field(R), Ef)
    C8 = C if fm.ext_cat(1, C, k_ef).dim == 0 else Cf
    res.info["item 8 random sources"] = res.info.get("item 8 random sources", 0) + (C8 is C)
    lhs = rg.tensor_R(X, _hom(C8, Ef))
    rhs = _hom(C8, fm.tensor_pointwise(X, Ef))
    res.expect(iso(lhs.module, rhs.module), f"{tag}: (8) tensor does not commute with Hom")
    res.expect(rg.is_flat(_hom(C8, Ef)), f"{tag}: (8) Hom(C, flat) is not flat")
    res.instances += 1


@_timed("module identities")
def check_module_identities(res: CheckResult, seed: int = 0, per_setting: int = 20) -> None:
    rng = np.random.default_rng(seed)
    for tag, cat in _module_identity_settings():
        injectives = fm.indecomposable_injectives(cat)
        flats = _flat_modules(cat)
        coflats = [E for E in injectives if fm.is_coflat_functor(E)]
        if not res.expect(coflats, f"{tag}: no coflat injective found"):
            continue
        for _ in range(per_setting):
            _module_identity_instance(res, tag, cat, rng, injectives, flats, coflats)


# -- base change ------------------------------------------------------------------------------


def _base_change_settings():
    a2 = ex.a2_category(F5)
    t2 = ex.truncated_algebra(F5, 2)
    cubic, dual = truncated_polynomial(F5, 3), truncated_polynomial(F5, 2)
    out = [
        ("A2 dual", BaseChange.of_deformation(ex.trivial(a2))),
        ("k[t]/t^2 dual", BaseChange.of_deformation(ex.trivial(t2))),
        ("t^2=eps", BaseChange.of_deformation(ex.t2_eps_deformation(F5))),
        ("A2 cubic to k", BaseChange.of_deformation(ex.trivial(a2, 3))),
        ("A2 cubic to dual", BaseChange(extend_scalars(a2, cubic), truncation(cubic, dual))),
        ("R cubic to dual", BaseChange(algebra_category(cubic), truncation(cubic, dual))),
    ]
    return out


@_timed("base change")
def check_base_change(res: CheckResult, seed: int = 0, nakayama_instances: int = 200) -> None:
    """Adjunctions with triangle identities, Nakayama and reflection of monomorphisms."""
    rng = np.random.default_rng(seed)
    settings = _base_change_settings()
    for tag, B in settings:
        up = [fm.random_functor_module(B.category, rng) for _ in range(2)] + _flat_modules(B.category)
        down = fm.simples(B.reduced) + [fm.random_functor_module(B.reduced, rng)]
        for F in up:
            for G in down:
                t = B.tensor_adjunction(F, G)
                h = B.hom_adjunction(G, F)
                res.expect(t.bijective and t.left_dim == t.right_dim, f"{tag}: tensor adjunction fails")
                res.expect(h.bijective and h.left_dim == h.right_dim, f"{tag}: Hom adjunction fails")
                tri = B.triangle_identities(F, G)
                res.expect(all(tri.values()), f"{tag}: triangle identities {tri}")
                res.instances += 1
    nak = 0
    for i in range(nakayama_instances):
        tag, B = settings[i % len(settings)]
        F = fm.random_functor_module(B.category, rng, 3, 3)
        zero = B.nakayama_is_zero(F)
        res.expect(zero == F.is_zero(), f"{tag}: S ⊗ F = 0 disagrees with F = 0")
        res.expect(B.hom_up(F).is_zero() == F.is_zero(), f"{tag}: Hom(S, F) = 0 disagrees with F = 0")
        G = fm.random_functor_module(B.category, rng, 2, 2)
        hom = fm.hom_functor_modules(F, G)
        if hom.dim:
            fmap = hom.element(B.field.random(rng, hom.dim))
            mr = B.reflects_mono_check(fmap)
            res.expect(mr.holds, f"{tag}: Hom(S, f) mono but f is not")
        nak += 1
        res.instances += 1
    res.info["nakayama"] = nak


# -- pointwise computation ------------------------------------------------------------------


@_timed("pointwise computation")
def check_pointwise(res: CheckResult, seed: int = 0, per_setting: int = 10, max_degree: int = 3) -> None:
    """Evaluating X ⊗ F, Hom(X, F), Tor and Ext at an object agrees with the ring-level functor."""
    rng = np.random.default_rng(seed)
    for tag, cat in _module_identity_settings():
        R = cat.ring
        for _ in range(per_setting):
            X = rg.random_module(R, rng, 2, 2, in_ideal=bool(rng.integers(2)))
            F = fm.random_functor_module(cat, rng)
            ops = [("tensor", fm.tensor_pointwise(X, F), lambda v: rg.tensor_R(X, v)),
                   ("hom", fm.hom_pointwise(X, F), lambda v: rg.hom_R(X, v))]
            for i in range(1, max_degree + 1):
                ops.append((f"tor{i}", fm.tor_pointwise(i, X, F), lambda v, i=i: rg.tor(i, X, v)))
                ops.append((f"ext{i}", fm.ext_pointwise(i, X, F), lambda v, i=i: rg.ext(i, X, v)))
            for name, G, ring_op in ops:
                for a in range(cat.n_objects):
                    ok = witnessed_isomorphism(fm.evaluate(G, a).module, ring_op(fm.evaluate(F, a)).module)
                    res.expect(ok, f"{tag}: {name} at {cat.objects[a]} differs from the ring computation")
            res.instances += 1


# -- injective lifting --------------------------------------------------------------------


@_timed("injective lifting")
def check_injective_lifting(res: CheckResult, seed: int = 0) -> None:
    for d in (ex.trivial(ex.a2_category(F5)), ex.trivial(ex.truncated_algebra(F5, 2)),
              ex.t2_eps_deformation(F5)):
        B = BaseChange.of_deformation(d)
        for E in fm.indecomposable_injectives(d.reduced):
            tag = f"{d.name or d.total.name} {E.dims()}"
            L = B.lift_injective(E)
            L2 = B.lift_injective_by_envelope(E)
            res.expect(fm.is_injective(L), f"{tag}: lift is not injective")
            res.expect(witnessed_isomorphism(B.hom_up(L).module, E.module), f"{tag}: Hom(S, lift) is not E")
            res.expect(witnessed_isomorphism(L.module, L2.module), f"{tag}: the two lifts differ")
            res.instances += 1


# -- reconstruction from injectives ---------------------------------------------------------


@_timed("reconstruction from injectives")
def check_reconstruction(res: CheckResult, seed: int = 0) -> None:
    for cat in (ex.field_category(F5), ex.truncated_algebra(F5, 2), ex.a2_category(F5)):
        chk = fm.reconstruct_from_injectives(cat)
        res.info[cat.name] = len(chk.pairs)
        for i, j, d1, d2, bij in chk.pairs:
            res.expect(d1 == d2 and bij, f"{cat.name}: pair ({i}, {j}) has Hom dims {d1} vs {d2}")
            res.instances += 1


# -- strictification -----------------------------------------------------------------------


def _conjugation(total: LinCategory, sizes, us) -> LinFunctor:
    """m ↦ U_y m U_x⁻¹ on a matrix category; ``us[x] = (U_x, U_x⁻¹)``."""
    R = total.ring
    n = total.n_objects
    maps = {}
    for x in range(n):
        for y in range(n):
            cols = []
            for b in range(total.rank(x, y)):
                m = total.basis_morphism(x, y, b).coords.reshape(sizes[y], sizes[x], R.dim)
                img = rmat_mul(R, rmat_mul(R, us[y][0], m), us[x][1])
                cols.append(img.reshape(-1, R.dim))
            maps[(x, y)] = np.stack(cols, axis=1)
    return LinFunctor(total, total, list(range(n)), maps)


@_timed("strictification")
def check_strictification(res: CheckResult, seed: int = 0, trials: int = 5) -> None:
    ns = ex.nonstrict_fixture(F5)
    res.expect(not ns.is_structurally_strict(), "fixture is already strict")
    s, wit = make_strict(ns)
    res.expect(s.is_structurally_strict(), "make_strict output is not strict")
    res.expect(validate_deformation(s).valid, "make_strict output is invalid")
    rep = verify_deformation_equivalence(s, ns, wit.functor, wit.transform)
    res.expect(rep.valid, f"strictification witness fails: {rep.violations[:3]}")
    res.instances += 1

    rng = np.random.default_rng(seed)
    sizes = [1, 2]
    for field_ in (F5, QQ):
        R = truncated_polynomial(field_, 2)
        th = residue_map(R)
        d = trivial_deformation(matrix_category(rg.residue_field_ring(field_), sizes), th)
        for _ in range(trials):
            us = [ex.random_invertible_rmatrix(R, m, rng) for m in sizes]
            phi = _conjugation(d.total, sizes, us)
            eta = NatTransform(d.functor, phi.then(d.functor),
                               {x: matrix_morphism(d.reduced, x, x, rmat_reduce(th, us[x][0]))
                                for x in range(len(sizes))})
            res.expect(not eta.violations(), f"{field_.name}: η is not natural")
            phi_p, mu = strictify_equivalence(d, d, phi, eta)
            res.expect(phi_p.then(d.functor).equals(d.functor), f"{field_.name}: f₂∘φ′ ≠ f₁")
            res.expect(not phi_p.violations() and phi_p.is_fully_faithful(), f"{field_.name}: φ′ is not an equivalence")
            res.expect(not mu.violations() and mu.is_isomorphism(), f"{field_.name}: μ is not a natural isomorphism")
            res.instances += 1


# -- ringed spaces -------------------------------------------------------------------------


def poset_fixtures():
    return [ex.sierpinski(F5), ex.chain_space(F5, 3), ex.discrete_space(F5, 2),
            ex.point_space(ex.field_category(F5)), ex.point_space(ex.truncated_algebra(F5, 2)),
            ex.sierpinski(F5, ex.truncated_algebra(F5, 2))]


@_timed("ringed space pipeline")
def check_ringed_space(res: CheckResult, seed: int = 0) -> None:
    sp = ex.sierpinski(F5)
    res.expect(same_tables(sp.category, ex.a2_category(F5)), "Sierpiński diagram category is not A2")
    res.expect(validate_category(sp.category).valid, "Sierpiński diagram category is invalid")
    cl = dg.classify_space_deformations(sp)
    res.expect(cl.acyclicity.acyclic, "Sierpiński is not acyclic")
    res.expect(cl.rigid, f"Sierpiński is not rigid: HH² = {cl.hh2_dim}")
    res.instances += 1

    pt = ex.point_space(ex.truncated_algebra(F5, 2))
    cl = dg.classify_space_deformations(pt)
    res.expect(cl.hh2_dim == 1, f"point with k[t]/t²: HH² = {cl.hh2_dim}")
    sub = CheckResult("point")
    dual_numbers_report(pt.category, sub)
    for msg in sub.failures:
        res.fail(f"point with k[t]/t²: {msg}")
    direct = hc.classify(ex.truncated_algebra(F5, 2))
    res.expect(cl.hh2_dim == direct.hh2.dim and cl.hh1_dim == direct.hh1.dim,
               "space pipeline and direct classification disagree")
    res.expect(all(same_tables(a.total, b.total) for a, b in zip(cl.deformations, direct.deformations)),
               "space pipeline deformations differ from the direct ones")
    res.instances += 1

    for D in poset_fixtures():
        chk = dg.hom_formula_check(D)
        res.expect(chk.holds, f"{D.category.name}: Hom formula fails {chk.entries}")
        res.expect(validate_category(D.category).valid, f"{D.category.name}: diagram category invalid")
        res.instances += 1


ALL_CHECKS = [
    ("lifting", check_lifting_formulas),
    ("classification", check_dual_numbers),
    ("quantum-torus", check_quantum_torus),
    ("identities", check_module_identities),
    ("basechange", check_base_change),
    ("pointwise", check_pointwise),
    ("injectives", check_injective_lifting),
    ("reconstruction", check_reconstruction),
    ("strictification", check_strictification),
    ("space", check_ringed_space),
]


def run_all(seed: int = 0) -> list[CheckResult]:
    return [fn(seed=seed) for _, fn in ALL_CHECKS]
