import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from defcat import examples as ex
from defcat import funmod as fm
from defcat.linalg import Field
from defcat.lincat import extend_scalars
from defcat.ring import MalformedInput, dual_numbers

F5, Q = Field(5), Field(0)


def categories():
    return {
        "k": ex.field_category(F5),
        "dual": ex.truncated_algebra(F5, 2),
        "cubic": ex.truncated_algebra(F5, 3),
        "A2": ex.a2_category(F5),
        "A3": ex.path_category(F5, 3),
        "A2/Q": ex.a2_category(Q),
        "A2 over dual numbers": extend_scalars(ex.a2_category(F5), dual_numbers(F5)),
    }


CATS = categories()
names = st.sampled_from(sorted(CATS))


def draw_module(data, cat):
    seed = data.draw(st.integers(0, 2**32 - 1))
    return fm.random_functor_module(cat, np.random.default_rng(seed))


@given(name=names, data=st.data())
def test_yoneda_hom_from_representable_is_evaluation(name, data):
    cat = CATS[name]
    F = draw_module(data, cat)
    for x in range(cat.n_objects):
        assert fm.hom_functor_modules(fm.representable(cat, x), F).dim == F.dims()[x]
        assert fm.evaluate(F, x).dim == F.dims()[x]


@given(name=names, data=st.data())
def test_hom_dimension_matches_kronecker_oracle(name, data):
    cat = CATS[name]
    F, G = draw_module(data, cat), draw_module(data, cat)
    h = fm.hom_functor_modules(F, G)
    assert h.dim == oracles.module_hom_dim(F.module.action, G.module.action, cat.field.p)
    for phi in h.basis_maps():
        assert phi.is_valid()


@given(name=names, data=st.data())
def test_ext_zero_is_hom(name, data):
    cat = CATS[name]
    F, G = draw_module(data, cat), draw_module(data, cat)
    assert fm.ext_cat(0, F, G).dim == fm.hom_functor_modules(F, G).dim


@given(name=names, data=st.data())
def test_ext_vanishes_from_projectives_and_into_injectives(name, data):
    cat = CATS[name]
    F = draw_module(data, cat)
    for P in fm.indecomposable_projectives(cat):
        assert fm.is_projective(P)
        assert fm.ext_cat(1, P, F).dim == 0
    for E in fm.indecomposable_injectives(cat):
        assert fm.is_injective(E)
        assert fm.ext_cat(1, F, E).dim == 0 and fm.ext_cat(2, F, E).dim == 0


def test_ext_between_simples_of_linear_quivers():
    # a linear quiver is hereditary with one arrow between neighbours
    for n in (2, 3):
        cat = ex.path_category(F5, n)
        S = fm.simples(cat)
        assert len(S) == n
        ext1 = np.array([[fm.ext_cat(1, a, b).dim for b in S] for a in S])
        ext2 = np.array([[fm.ext_cat(2, a, b).dim for b in S] for a in S])
        assert ext1.sum() == n - 1 and ext2.sum() == 0
        assert np.array_equal(ext1 + ext1.T, np.eye(n, k=1, dtype=int) + np.eye(n, k=-1, dtype=int))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ext_of_residue_field_over_truncated_polynomials(n):
    cat = ex.truncated_algebra(F5, n)
    (S,) = fm.simples(cat)
    assert [fm.ext_cat(i, S, S).dim for i in range(4)] == [1, 1, 1, 1]


@given(name=names, data=st.data())
def test_kernel_cokernel_image_dimensions(name, data):
    cat = CATS[name]
    F, G = draw_module(data, cat), draw_module(data, cat)
    h = fm.hom_functor_modules(F, G)
    if h.dim == 0:
        return
    coords = cat.field.random(np.random.default_rng(data.draw(st.integers(0, 999))), (h.dim,))
    phi = h.element(coords)
    K, inc = fm.kernel(phi)
    C, proj = fm.cokernel(phi)
    I, _, core = fm.image(phi)
    assert K.dim + I.dim == F.dim and I.dim + C.dim == G.dim
    assert inc.is_mono() and proj.is_epi() and core.is_epi()
    assert not inc.then(phi).matrix.any()


@given(name=names, data=st.data())
def test_injective_envelope_is_essential(name, data):
    cat = CATS[name]
    F = draw_module(data, cat)
    E, emb = fm.injective_envelope(F)
    assert fm.is_injective(E) and emb.is_valid()
    assert fm.is_essential_mono(emb)


def test_non_essential_mono_is_rejected():
    cat = ex.a2_category(F5)
    P = fm.representable(cat, 0)
    E = fm.direct_sum([P, P])
    inc = fm.FunctorModuleMap(P, E, np.concatenate([F5.eye(P.dim), F5.zeros((P.dim, P.dim))]))
    assert inc.is_valid() and inc.is_mono()
    assert not fm.is_essential_mono(inc)


@pytest.mark.parametrize("name", ["k", "dual", "A2", "A3"])
def test_injectives_reconstruct_the_battery(name):
    rep = fm.reconstruct_from_injectives(CATS[name])
    assert rep.fully_faithful
    assert all(a == b for _, _, a, b, _ in rep.pairs)


def test_battery_has_no_duplicates():
    bat = fm.indecomposable_battery(ex.a2_category(F5))
    # A2 has three indecomposables: two simples and the projective-injective
    assert len(bat) == 3


def test_presentation_shapes_and_categories_are_checked():
    cat = ex.a2_category(F5)
    with pytest.raises(MalformedInput):
        fm.FpFunctorModule(cat, [0], [0], [[F5.zeros((2, 1))]])
    with pytest.raises(fm.CategoryMismatch):
        fm.hom_functor_modules(fm.representable(cat, 0), fm.representable(ex.a2_category(Q), 0))
    with pytest.raises(MalformedInput):
        fm.ext_cat(5, fm.representable(cat, 0), fm.representable(cat, 0))
