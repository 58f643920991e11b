import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from defcat import algebra as alg
from defcat import examples as ex
from defcat import funmod as fm
from defcat.basechange import BaseChange
from defcat.linalg import Field
from defcat.lincat import algebra_category, extend_scalars
from defcat.ring import truncated_polynomial, truncation

F5, Q = Field(5), Field(0)


def settings():
    a2 = ex.a2_category(F5)
    cubic, dual = truncated_polynomial(F5, 3), truncated_polynomial(F5, 2)
    return {
        "A2 dual": BaseChange.of_deformation(ex.trivial(a2)),
        "A2/Q dual": BaseChange.of_deformation(ex.trivial(ex.a2_category(Q))),
        "t^2=eps": BaseChange.of_deformation(ex.t2_eps_deformation(F5)),
        "A2 cubic": BaseChange.of_deformation(ex.trivial(a2, 3)),
        "A2 cubic to dual": BaseChange(extend_scalars(a2, cubic), truncation(cubic, dual)),
        "R cubic to dual": BaseChange(algebra_category(cubic), truncation(cubic, dual)),
    }


SETTINGS = settings()
keys = st.sampled_from(sorted(SETTINGS))


def rng_from(data):
    return np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))


@given(key=keys, data=st.data())
def test_tensor_up_agrees_with_reducing_the_presentation(key, data):
    B = SETTINGS[key]
    F = fm.random_functor_module(B.category, rng_from(data), 3, 3)
    a, b = B.tensor_up(F), B.tensor_up_presentation(F)
    assert a.dims() == b.dims()
    assert alg.is_isomorphic(a.module, b.module)


@given(key=keys, data=st.data())
def test_adjunctions_are_bijective_with_oracle_dimensions(key, data):
    B = SETTINGS[key]
    rng = rng_from(data)
    F = fm.random_functor_module(B.category, rng)
    G = fm.random_functor_module(B.reduced, rng)
    p = B.field.p
    t = B.tensor_adjunction(F, G)
    assert t.bijective
    assert t.left_dim == oracles.module_hom_dim(B.tensor_up(F).module.action, G.module.action, p)
    assert t.right_dim == oracles.module_hom_dim(F.module.action, B.restrict(G).module.action, p)
    h = B.hom_adjunction(G, F)
    assert h.bijective
    assert h.right_dim == oracles.module_hom_dim(B.restrict(G).module.action, F.module.action, p)
    assert all(B.triangle_identities(F, G).values())


@given(key=keys, data=st.data())
def test_nakayama_and_mono_reflection(key, data):
    B = SETTINGS[key]
    rng = rng_from(data)
    F = fm.random_functor_module(B.category, rng, 3, 3)
    assert B.nakayama_is_zero(F) == F.is_zero()
    assert B.hom_up(F).is_zero() == F.is_zero()
    G = fm.random_functor_module(B.category, rng)
    h = fm.hom_functor_modules(F, G)
    if h.dim:
        assert B.reflects_mono_check(h.element(B.field.random(rng, h.dim))).holds


@given(key=keys, data=st.data())
def test_associated_graded_has_the_same_size(key, data):
    B = SETTINGS[key]
    F = fm.random_functor_module(B.category, rng_from(data), 3, 3)
    assert B.gr(F).dim == F.dim


@pytest.mark.parametrize("order", [2, 3])
def test_graded_pieces_of_a_free_module_are_copies_of_its_reduction(order):
    B = BaseChange.of_deformation(ex.trivial(ex.a2_category(F5), order))
    for x in range(2):
        P = fm.representable(B.category, x)
        red = B.tensor_up(P)
        g = B.gr(P)
        assert g.dims() == [order * v for v in red.dims()]
        assert alg.is_isomorphic(g.module, fm.direct_sum([red] * order).module)
        # the socle of a free module over k[ε]/εⁿ is one copy of the reduction
        assert B.hom_up(P).dims() == red.dims()


def test_restriction_then_reduction_is_the_identity():
    B = SETTINGS["A2 dual"]
    for G in fm.indecomposable_battery(B.reduced):
        back = B.tensor_up(B.restrict(G))
        assert np.array_equal(back.unit_matrix, B.field.eye(G.dim))
        assert alg.is_isomorphic(back.module, G.module)


@pytest.mark.parametrize("key", ["A2 dual", "t^2=eps", "A2 cubic"])
def test_injectives_lift_and_two_lifts_agree(key):
    B = SETTINGS[key]
    for E in fm.indecomposable_injectives(B.reduced):
        L = B.lift_injective(E)
        M = B.lift_injective_by_envelope(E)
        assert fm.is_injective(L) and fm.is_injective(M)
        assert alg.is_isomorphic(B.hom_up(L).module, E.module)
        assert alg.is_isomorphic(L.module, M.module)


def test_mismatched_reduced_category_is_rejected():
    d = ex.trivial(ex.a2_category(F5))
    with pytest.raises(ValueError):
        BaseChange(d.total, d.theta, ex.truncated_algebra(F5, 2))
    with pytest.raises(ValueError):
        BaseChange.of_deformation(ex.nonstrict_fixture(F5))
