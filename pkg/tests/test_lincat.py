import numpy as np
import pytest
from hypothesis import given, strategies as st

from defcat import examples as ex
from defcat.linalg import Field
from defcat.lincat import (LinCategory, base_change_category, extend_scalars, find_object_isomorphism,
                           identity_functor, is_isomorphism, make_strict, matrix_category, matrix_morphism,
                           morphism_matrix, opposite, strict_deformation, trivial_deformation,
                           validate_category, validate_deformation, verify_deformation_equivalence)
from defcat.ring import (MalformedInput, dual_numbers, residue_field_ring, residue_map, rmat_mul,
                         truncated_polynomial)

F5, Q = Field(5), Field(0)


def catalog():
    R = dual_numbers(F5)
    return [
        ex.field_category(F5), ex.truncated_algebra(F5, 3), ex.a2_category(Q), ex.path_category(F5, 3),
        ex.semisimple_category(F5, 2), matrix_category(R, [1, 2]), ex.commutative_torus(3),
        ex.quantum_torus(3).total, ex.sierpinski(F5).category,
    ]


@pytest.mark.parametrize("cat", catalog(), ids=lambda c: c.name or repr(c))
def test_catalog_categories_validate(cat):
    rep = validate_category(cat)
    assert rep.valid, rep.violations


@pytest.mark.parametrize("cat", catalog(), ids=lambda c: c.name or repr(c))
def test_opposite_is_an_involution(cat):
    op = opposite(cat)
    assert validate_category(op).valid
    assert opposite(op).structurally_equal(cat)


def test_broken_associativity_is_reported():
    cat = ex.truncated_algebra(F5, 3)
    comp = {k: v.copy() for k, v in cat.comp.items()}
    # t·t² := t while t²·t stays 0, so (t·t)·t ≠ t·(t·t)
    comp[(0, 0, 0)][1, 2] = F5.array([[0], [1], [0]])
    bad = LinCategory(cat.ring, cat.objects, {(0, 0): 3}, comp, cat.identity)
    rep = validate_category(bad)
    assert not rep.valid
    assert any("associativity" in v for v in rep.violations)


def test_broken_identity_is_reported():
    cat = ex.truncated_algebra(F5, 2)
    ident = {0: F5.array([[1], [1]])}
    rep = validate_category(LinCategory(cat.ring, cat.objects, {(0, 0): 2}, cat.comp, ident))
    assert any("identity" in v for v in rep.violations)


def test_missing_or_misshapen_tables_are_malformed():
    cat = ex.truncated_algebra(F5, 2)
    with pytest.raises(MalformedInput):
        LinCategory(cat.ring, cat.objects, {(0, 0): 2}, {}, cat.identity)
    with pytest.raises(MalformedInput):
        LinCategory(cat.ring, cat.objects, {(0, 0): 3}, cat.comp, cat.identity)
    with pytest.raises(MalformedInput):
        LinCategory(cat.ring, ["a", "a"], {}, {}, {0: [], 1: []})


@given(data=st.data())
def test_matrix_category_composition_is_matrix_product(data):
    k = residue_field_ring(F5)
    sizes = data.draw(st.lists(st.integers(1, 3), min_size=3, max_size=3))
    cat = matrix_category(k, sizes)
    ent = st.integers(0, 4)

    def mat(r, c):
        return np.array(data.draw(st.lists(ent, min_size=r * c, max_size=r * c)), dtype=np.int64).reshape(r, c)

    f, g = mat(sizes[1], sizes[0]), mat(sizes[2], sizes[1])
    prod = cat.compose(matrix_morphism(cat, 1, 2, g[..., None]), matrix_morphism(cat, 0, 1, f[..., None]))
    assert np.array_equal(morphism_matrix(prod, sizes[2], sizes[0])[..., 0], (g @ f) % 5)


@given(seed=st.integers(0, 2**32 - 1))
def test_twisted_bases_still_compose_as_matrices(seed):
    rng = np.random.default_rng(seed)
    R = dual_numbers(F5)
    T = ex.TwistedMatrixCategory(R, [1, 2], rng)
    assert validate_category(T.category).valid
    a = ex.random_rmatrix(R, 2, 2, rng)
    b = ex.random_rmatrix(R, 2, 1, rng)
    assert T.category.compose(T.morphism(1, 1, a), T.morphism(0, 1, b)) == T.morphism(0, 1, rmat_mul(R, a, b))


def test_extension_then_reduction_recovers_category():
    R = truncated_polynomial(Q, 3)
    for cat in (ex.a2_category(Q), ex.truncated_algebra(Q, 2)):
        total = extend_scalars(cat, R)
        assert validate_category(total).valid
        assert base_change_category(total, residue_map(R)).structurally_equal(cat)


@given(seed=st.integers(0, 10**6))
def test_isomorphism_inverse_is_two_sided(seed):
    rng = np.random.default_rng(seed)
    R = dual_numbers(F5)
    cat = matrix_category(R, [2])
    m, inv = ex.random_invertible_rmatrix(R, 2, rng)
    ok, g = is_isomorphism(matrix_morphism(cat, 0, 0, m))
    assert ok
    assert g == matrix_morphism(cat, 0, 0, inv)
    # a matrix whose reduction is singular is never invertible
    sing = m.copy()
    sing[1, :, 0] = 0
    sing[0, :, 0] = 0
    assert not is_isomorphism(matrix_morphism(cat, 0, 0, sing))[0]


def test_object_isomorphism_search():
    k = residue_field_ring(F5)
    cat = matrix_category(k, [2, 2, 1])
    f, g = find_object_isomorphism(cat, 0, 1)
    assert g @ f == cat.identity_morphism(0) and f @ g == cat.identity_morphism(1)
    assert find_object_isomorphism(cat, 0, 2) is None


def test_identity_functor_is_a_functor():
    cat = ex.path_category(F5, 3)
    F = identity_functor(cat)
    assert F.violations() == [] and F.is_fully_faithful()
    assert F.then(F).equals(F)


@pytest.mark.parametrize("field", [F5, Q], ids=["F5", "Q"])
def test_trivial_and_strict_deformations_validate(field):
    d = trivial_deformation(ex.a2_category(field), residue_map(dual_numbers(field)))
    rep = validate_deformation(d)
    assert rep.valid and rep.info["strict"] and rep.info["flat"]
    q = ex.quantum_torus(3)
    s = strict_deformation(q.total, q.theta)
    assert validate_deformation(s).valid and s.is_structurally_strict()


def test_nonstrict_fixture_is_detected_and_strictified():
    d = ex.nonstrict_fixture(F5)
    rep = validate_deformation(d)
    assert rep.valid and not rep.info["strict"]
    assert not d.is_structurally_strict()
    s, wit = make_strict(d)
    assert s.is_structurally_strict()
    assert validate_deformation(s).valid
    assert wit.functor.violations() == [] and wit.functor.is_fully_faithful()
    assert wit.transform.violations() == [] and wit.transform.is_isomorphism()
    assert verify_deformation_equivalence(s, d, wit.functor, wit.transform).valid


def test_strict_input_is_returned_unchanged():
    d = ex.t2_eps_deformation(F5)
    s, wit = make_strict(d)
    assert s is d
    assert wit.functor.equals(identity_functor(d.total))
