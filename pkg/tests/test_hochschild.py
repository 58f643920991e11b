import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from defcat import examples as ex
from defcat import hochschild as hc
from defcat.linalg import Field
from defcat.lincat import validate_deformation
from defcat.ring import dual_numbers

F5, Q = Field(5), Field(0)

ORACLE_CASES = [
    ("k", lambda: ex.field_category(F5), oracles.truncated_polynomial_mult(1), 3),
    ("k[t]/t^2", lambda: ex.truncated_algebra(F5, 2), oracles.truncated_polynomial_mult(2), 3),
    ("k[t]/t^3", lambda: ex.truncated_algebra(F5, 3), oracles.truncated_polynomial_mult(3), 3),
    ("A2", lambda: ex.a2_category(F5), oracles.path_algebra_a2_mult(), 3),
    # characteristic 5 divides 5, so the derivation t ↦ 1 survives here
    ("k[t]/t^5", lambda: ex.truncated_algebra(F5, 5), oracles.truncated_polynomial_mult(5), 2),
]


@pytest.mark.parametrize("name,make,mult,top", ORACLE_CASES, ids=[c[0] for c in ORACLE_CASES])
def test_hochschild_dimensions_match_bar_complex_oracle(name, make, mult, top):
    cat = make()
    expected = oracles.hochschild_dims(mult, 5, top)
    assert [hc.hh_dim(cat, n) for n in range(top + 1)] == expected
    assert [hc.hh_dim(cat, n, normalized=False) for n in range(top + 1)] == expected


def test_characteristic_matters_for_truncated_polynomials():
    assert hc.hh_dim(ex.truncated_algebra(F5, 5), 1) == 5
    assert hc.hh_dim(ex.truncated_algebra(Q, 5), 1) == 4


CATS = {
    "k[t]/t^2": ex.truncated_algebra(F5, 2),
    "k[t]/t^3/Q": ex.truncated_algebra(Q, 3),
    "A2": ex.a2_category(F5),
    "A3": ex.path_category(F5, 3),
    "k x k": ex.semisimple_category(F5, 2),
    "Sierpinski": ex.sierpinski(F5).category,
}
names = st.sampled_from(sorted(CATS))


@given(name=names, n=st.integers(0, 2), seed=st.integers(0, 2**32 - 1))
def test_differential_squares_to_zero(name, n, seed):
    cat = CATS[name]
    c = hc.Cochain.random(cat, n, np.random.default_rng(seed))
    assert hc.differential(hc.differential(c)).is_zero()


@given(name=names, seed=st.integers(0, 2**32 - 1))
def test_coboundary_perturbation_gives_an_equivalent_deformation(name, seed):
    cat = CATS[name]
    rng = np.random.default_rng(seed)
    h2 = hc.hh(cat, 2)
    c = h2.classes[0].representative if h2.dim else hc.Cochain.zero(cat, 2)
    g = hc.Cochain.random(cat, 1, rng)
    eq = hc.are_equivalent(c + hc.differential(g), c)
    assert eq.equivalent and eq.verified
    assert (hc.differential(eq.witness) - hc.differential(g)).is_zero()


@given(name=names, seed=st.integers(0, 2**32 - 1))
def test_first_order_deformations_of_cocycles_validate(name, seed):
    cat = CATS[name]
    rng = np.random.default_rng(seed)
    z = hc.differential(hc.Cochain.random(cat, 1, rng))
    for cl in hc.hh(cat, 2).classes:
        z = z + cl.representative.scale(int(rng.integers(5)))
    d = hc.first_order_deformation(cat, z)
    rep = validate_deformation(d)
    assert rep.valid and rep.info["strict"]


def test_non_cocycle_is_rejected_with_location():
    cat = ex.truncated_algebra(F5, 2)
    c = hc.Cochain.zero(cat, 2)
    c.blocks[(0, 0, 0)][0, 1, 0] = F5.scalar(1)
    assert not hc.differential(c).is_zero()
    with pytest.raises(hc.NotACocycle):
        hc.first_order_deformation(cat, c)


def test_cochains_need_a_field_base():
    cat = ex.trivial(ex.a2_category(F5)).total
    assert cat.ring.same_as(dual_numbers(F5))
    with pytest.raises(hc.FieldRequired):
        hc.hh(cat, 2)


def test_classification_of_the_dual_numbers():
    cat = ex.truncated_algebra(F5, 2)
    cl = hc.classify(cat)
    assert not cl.rigid and cl.hh2.dim == 1
    assert cl.all_valid and cl.pairwise_inequivalent
    assert not hc.are_equivalent(ex.t2_cocycle(cat), hc.Cochain.zero(cat, 2)).equivalent
    assert hc.mod_of_deformation(ex.t2_eps_deformation(F5)).ok


@pytest.mark.parametrize("make", [lambda: ex.a2_category(F5), lambda: ex.semisimple_category(Q, 2),
                                  lambda: ex.path_category(F5, 3)])
def test_hereditary_and_semisimple_categories_are_rigid(make):
    cl = hc.classify(make())
    assert cl.rigid and len(cl.deformations) == 1 and cl.all_valid


def test_quantum_torus_cocycle_is_closed():
    assert hc.differential(ex.quantum_torus_cocycle(3)).is_zero()
