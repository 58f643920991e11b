import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from defcat import algebra as alg
from defcat import diagram as dg
from defcat import examples as ex
from defcat import funmod as fm
from defcat.checks import poset_fixtures, same_tables
from defcat.linalg import Field
from defcat.lincat import validate_category

F5 = Field(5)


def test_closure_and_rejections():
    P = dg.FinitePoset.from_relations(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert P.le(0, 2) and not P.le(2, 0)
    with pytest.raises(dg.InvalidPoset):
        dg.FinitePoset.from_relations(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(dg.InvalidPoset):
        dg.FinitePoset.from_relations(["a"], [("a", "z")])
    with pytest.raises(dg.InvalidPoset):
        dg.FinitePoset.from_relations(["a", "a"], [])


@st.composite
def posets(draw):
    """Random posets: relations only go from lower to higher index, so no cycles arise."""
    n = draw(st.integers(1, 4))
    labels = [f"V{i}" for i in range(n)]
    pairs = [(labels[i], labels[j]) for i, j in itertools.combinations(range(n), 2)]
    rel = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return dg.FinitePoset.from_relations(labels, rel)


@given(P=posets(), local=st.booleans())
def test_hom_formula_on_random_posets(P, local):
    algebra = ex.truncated_algebra(F5, 2) if local else ex.field_category(F5)
    D = dg.build_diagram_category(P, dg.constant_presheaf(P, algebra))
    assert validate_category(D.category).valid
    chk = dg.hom_formula_check(D)
    assert chk.holds, chk.entries


@pytest.mark.parametrize("D", poset_fixtures(), ids=lambda D: D.category.name + str(len(D.poset)))
def test_hom_formula_on_fixtures(D):
    assert dg.hom_formula_check(D).holds


def test_sierpinski_diagram_is_a2():
    assert same_tables(ex.sierpinski(F5).category, ex.a2_category(F5))


def test_extension_by_zero_is_representable():
    D = ex.chain_space(F5, 3)
    for u in D.poset.labels:
        P = dg.presheaf_to_module(D, dg.extension_by_zero(D.presheaf, u))
        assert alg.is_isomorphic(P.module, dg.representable_module(D, u).module)


def test_structure_and_skyscraper_modules_have_expected_values():
    D = ex.sierpinski(F5, ex.truncated_algebra(F5, 2))
    O = dg.presheaf_to_module(D, dg.structure_module(D.presheaf))
    assert O.dims() == [2, 2]
    sky = dg.presheaf_to_module(D, dg.skyscraper(D.presheaf, ["X"]))
    assert sky.dims() == [0, 1]


@given(P=posets(), seed=st.integers(0, 2**32 - 1))
def test_cohomology_on_minimal_opens(P, seed):
    D = dg.build_diagram_category(P, dg.constant_presheaf(P, ex.field_category(F5)))
    F = fm.random_functor_module(D.presheaf_category, np.random.default_rng(seed))
    for u in range(len(P)):
        assert dg.cohomology(D, u, F, 0).dim == F.dims()[u]
        assert dg.cohomology(D, u, F, 1).dim == 0
    assert dg.acyclicity_check(D).acyclic


def test_non_constant_presheaf():
    # O(X) = k[t]/t², O(U) = k with t restricting to 0
    P = dg.FinitePoset.from_relations(["U", "X"], [("U", "X")])
    O = dg.StructurePresheaf(P, [ex.field_category(F5), ex.truncated_algebra(F5, 2)], {(0, 1): F5.array([[1, 0]])})
    D = dg.build_diagram_category(P, O)
    assert dg.hom_formula_check(D).holds
    assert dg.classify_space_deformations(D).acyclicity.acyclic
    with pytest.raises(dg.InvalidPresheaf):
        dg.StructurePresheaf(P, [ex.field_category(F5), ex.truncated_algebra(F5, 2)], {(0, 1): F5.array([[0, 1]])})
    with pytest.raises(dg.InvalidPresheaf):
        dg.StructurePresheaf(P, [ex.field_category(F5), ex.truncated_algebra(F5, 2)], {})


@pytest.mark.parametrize("make,hh2", [
    (lambda: ex.sierpinski(F5), 0),
    (lambda: ex.chain_space(F5, 3), 0),
    (lambda: ex.discrete_space(F5, 2), 0),
    (lambda: ex.point_space(ex.truncated_algebra(F5, 2)), 1),
])
def test_space_classification(make, hh2):
    cl = dg.classify_space_deformations(make())
    assert cl.acyclicity.acyclic and cl.hh2_dim == hh2
    assert len(cl.deformations) == hh2 + 1


def test_cohomology_needs_minimal_opens():
    P = dg.FinitePoset.from_relations(["U", "X"], [("U", "X")], minimal_open=False)
    D = dg.build_diagram_category(P, dg.constant_presheaf(P, ex.field_category(F5)))
    with pytest.raises(dg.UnsupportedConfiguration):
        dg.acyclicity_check(D)
