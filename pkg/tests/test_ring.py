import numpy as np
import pytest
from hypothesis import given, strategies as st

from defcat import ring as rg
from defcat.linalg import Field

F5, Q = Field(5), Field(0)


def power_quotient(R, a):
    """R/(e^a) for R = k[e]/(e^n)."""
    g = R.field.zeros(R.dim)
    if a < R.dim:
        g[a] = R.field.scalar(1)
    return rg.FpModule.cyclic(R, [g])


def tor_oracle(n, a, b, i):
    """dim Tor_i(k[e]/e^a, k[e]/e^b) over k[e]/e^n, from the 2-periodic resolution of k[e]/e^a."""
    if i == 0:
        return min(a, b)
    if i % 2:
        return min(a, b) - max(a + b - n, 0)
    return min(n - a, b) - max(b - a, 0)


def ext_oracle(n, a, b, i):
    if i == 0:
        return min(a, b)
    if i % 2:
        return min(n - a, b) - max(b - a, 0)
    return min(a, b) - max(b - n + a, 0)


@pytest.mark.parametrize("field", [F5, Q], ids=["F5", "Q"])
@given(data=st.data())
def test_tor_and_ext_of_cyclic_modules_match_periodic_resolution(field, data):
    n = data.draw(st.integers(2, 4))
    a = data.draw(st.integers(1, n - 1))
    b = data.draw(st.integers(1, n))
    i = data.draw(st.integers(0, 3))
    R = rg.truncated_polynomial(field, n)
    X, M = power_quotient(R, a), power_quotient(R, b)
    assert rg.tor(i, X, M).dim == tor_oracle(n, a, b, i)
    assert rg.ext(i, X, M).dim == ext_oracle(n, a, b, i)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_residue_field_has_betti_numbers_one(n):
    R = rg.truncated_polynomial(F5, n)
    res = rg.minimal_free_resolution(rg.FpModule.residue_field(R), 4)
    assert res.ranks[:5] == [1, 1, 1, 1, 1]
    assert res.is_minimal()


def test_square_zero_ring_betti_numbers_grow():
    R = rg.square_zero_ring(F5, ["x", "y"])
    assert rg.betti_numbers(rg.FpModule.residue_field(R), 3)[:4] == [1, 2, 4, 8]


@pytest.mark.parametrize("ring", [rg.dual_numbers(F5), rg.truncated_polynomial(Q, 3),
                                  rg.square_zero_ring(F5, ["x", "y"]), rg.residue_field_ring(F5)])
def test_standard_rings_validate(ring):
    rep = rg.validate_base_ring(ring)
    assert rep.valid, rep.violations


def test_noncommutative_constants_are_rejected():
    c = np.zeros((3, 3, 3), dtype=int)
    for j in range(3):
        c[0, j, j] = c[j, 0, j] = 1
    c[1, 2, 2] = 1  # x·y = y but y·x = 0
    rep = rg.validate_base_ring(rg.BaseRing(F5, c))
    assert not rep.valid
    assert any("commutativity" in v for v in rep.violations)


def test_malformed_constants_shape():
    with pytest.raises(rg.MalformedInput):
        rg.BaseRing(F5, np.zeros((2, 2)))


def test_non_multiplicative_map_is_not_a_surjection():
    R = rg.dual_numbers(F5)
    with pytest.raises(rg.InvalidSurjection):
        rg.RingSurjection(R, R, [[1, 1], [0, 1]])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kernel_filtration_length_is_nilpotency_order(n):
    R = rg.truncated_polynomial(F5, n)
    chain = rg.kernel_filtration(rg.residue_map(R))
    assert [b.shape[1] for b in chain] == list(range(n - 1, -1, -1))
    assert rg.residue_map(R).nilpotency_order == n


def test_truncation_kernel():
    R3, R2 = rg.truncated_polynomial(F5, 3), rg.dual_numbers(F5)
    th = rg.truncation(R3, R2)
    assert th.kernel_basis.shape[1] == 1
    assert th.nilpotency_order == 2


def test_flatness_and_coflatness():
    R = rg.dual_numbers(F5)
    k = rg.FpModule.residue_field(R)
    free = rg.FpModule.free(R, 2)
    assert rg.is_flat(free) and not rg.is_flat(k)
    # truncated polynomial rings are self-injective, so R is also coflat
    assert rg.is_coflat(free) and not rg.is_coflat(k)


def test_square_zero_ring_is_not_self_injective():
    R = rg.square_zero_ring(F5, ["x", "y"])
    free = rg.FpModule(R, F5.zeros((1, 0, 3)))
    assert rg.is_flat(free)
    assert not rg.is_coflat(free)
    # its Matlis dual is the injective hull of k, hence coflat
    dual = rg.FpModule.from_module(R, rg.matlis_dual(free.module))
    assert rg.is_coflat(dual)


def random_modules(ring):
    return st.integers(0, 10_000).map(lambda s: rg.random_module(ring, np.random.default_rng(s), 2, 2))


R2 = rg.dual_numbers(F5)
R3 = rg.truncated_polynomial(F5, 3)


@given(random_modules(R3), random_modules(R3))
def test_tensor_and_tor_are_symmetric(x, y):
    assert rg.isomorphism(rg.tensor_R(x, y), rg.tensor_R(y, x)) is not None
    assert rg.tor(1, x, y).dim == rg.tor(1, y, x).dim


@given(random_modules(R2), st.integers(1, 3))
def test_hom_from_free_module_is_a_power(m, n):
    assert rg.hom_R(rg.FpModule.free(R2, n), m).dim == n * m.dim


@given(random_modules(R3))
def test_tensor_with_ring_is_identity(m):
    assert rg.isomorphism(rg.tensor_R(rg.FpModule.free(R3, 1), m), m) is not None


@given(random_modules(R3))
def test_dimension_of_module_matches_presentation_rank(m):
    # dim coker(P) = p·d − rank of the k-linear form of P
    p, q, d = m.presentation.shape
    mult = np.einsum("abt,tsu->aubs", m.presentation, R3.constants) % 5
    kmat = mult.reshape(p * d, q * d)
    assert m.dim == p * d - F5.rank(kmat)


def test_rings_must_match():
    with pytest.raises(rg.RingMismatch):
        rg.tensor_R(rg.FpModule.free(R2, 1), rg.FpModule.free(R3, 1))
