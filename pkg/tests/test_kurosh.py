import random

import pytest
from hypothesis import given, strategies as st

from gradedlie.algebra import SubalgebraGenerated, build_enveloping, lie_components
from gradedlie.fixtures import abelian, cubic, free, one_relator
from gradedlie.homology import Strategy, betti_table
from gradedlie.kurosh import (
    KuroshError,
    distinguished_basis,
    freeness_check,
    generate_subalgebra,
    intersection_triviality_check,
    is_bloch_kato,
    kurosh_decompose,
    subalgebra_presentation,
)
from gradedlie.lie import necklace_count
from gradedlie.linalg import GF, QQ, Subspace, all_subspaces, coordinate_subspace, intersect, random_subspace
from gradedlie.products import FreeProductAlgebra

F2 = GF(2)


def span(field, n, rows):
    return Subspace.span(field, n, [{k: field(x) for k, x in enumerate(r) if field(x)} for r in rows])


# ---- generated subalgebras


def test_generate_examples():
    A = build_enveloping(one_relator(2, N=5))
    full = generate_subalgebra(A, Subspace.full(QQ, 4))
    assert full.spaces == lie_components(A)
    zero = generate_subalgebra(A, Subspace.zero(QQ, 4))
    assert zero.dims == [0] * 6
    F = build_enveloping(free(2, N=5))
    assert generate_subalgebra(F, span(QQ, 2, [[1, 1]])).dims[1:] == [1, 0, 0, 0, 0]


@given(st.integers(0, 10**6))
def test_dims_monotone_in_S(seed):
    rng = random.Random(seed)
    A = build_enveloping(one_relator(2, F2, 4))
    S = random_subspace(F2, 4, rng.randint(0, 3), rng)
    T = S + random_subspace(F2, 4, 1, rng)
    a, b = generate_subalgebra(A, S).dims, generate_subalgebra(A, T).dims
    assert all(x <= y for x, y in zip(a, b))


# ---- presentations


def test_presentation_examples():
    r = subalgebra_presentation(build_enveloping(abelian(2)), Subspace.full(QQ, 2))
    assert r.quadratic and r.presentation.relations == [{(0, 1): 1}]
    A = build_enveloping(one_relator(2, N=5))
    r = subalgebra_presentation(A, coordinate_subspace(QQ, 4, [0, 1, 2]))
    assert sum(r.relation_counts) == 0
    assert r.dims[1:] == [necklace_count(3, n) for n in range(1, 6)]


def test_cubic_presentation_not_quadratic():
    r = subalgebra_presentation(build_enveloping(cubic()), Subspace.full(QQ, 2))
    assert not r.quadratic and r.relation_counts[3] == 1


@pytest.mark.parametrize("P", [one_relator(2, F2, 4), abelian(3, F2, 4), cubic(F2, 5), free(2, F2, 5)])
def test_presentation_reproduces_subalgebra(P):
    A = build_enveloping(P)
    for S in all_subspaces(F2, P.d):
        r = subalgebra_presentation(A, S)
        U = build_enveloping(r.presentation, cap=None, N=P.truncation)
        # the enveloping algebra of <S> is the associative subalgebra generated by S
        assert U.dims == SubalgebraGenerated(A, S).dims
        assert [m.dim for m in lie_components(U)[1:]] == r.dims[1:]
        t = betti_table(U)
        assert [t[2, j] for j in range(P.truncation + 1)] == r.relation_counts


@pytest.mark.parametrize("d", [2, 3])
def test_nielsen_schreier(d):
    A = build_enveloping(free(d, F2, 6 if d == 2 else 5))
    for S in all_subspaces(F2, d):
        r = subalgebra_presentation(A, S)
        assert sum(r.relation_counts) == 0
        assert freeness_check(r.presentation).free


# ---- freeness


def test_freeness_examples():
    v = freeness_check(free(2))
    assert v.free and v.dims_match and v.bound == 6
    v = freeness_check(abelian(2))
    assert not v.free and v.witness == (2, 2, 1)


@pytest.mark.parametrize("P", [free(1), free(2), free(3, N=5), abelian(2), one_relator(1), one_relator(2, N=4), cubic(), abelian(3, F2)])
def test_freeness_iff_free_dims(P):
    v = freeness_check(P)
    assert v.free == v.dims_match


def test_trivial_intersection_subalgebra_is_free():
    P, Q = abelian(2, F2, 5), abelian(2, F2, 5)
    from gradedlie.products import free_product_lie

    U = build_enveloping(free_product_lie(P, Q))
    A1, B1 = coordinate_subspace(F2, 4, [0, 1]), coordinate_subspace(F2, 4, [2, 3])
    checked = 0
    for W in all_subspaces(F2, 4):
        if W.dim == 0 or intersect(W, A1).dim or intersect(W, B1).dim:
            continue
        r = subalgebra_presentation(U, W)
        assert sum(r.relation_counts) == 0
        checked += 1
    assert checked > 0


# ---- distinguished bases


def test_distinguished_examples():
    db = distinguished_basis(Subspace.full(QQ, 3), 2)
    assert db.W == [] and len(db.B_A) == 2 and len(db.B_B) == 1
    db = distinguished_basis(span(QQ, 3, [[1, 0, 0], [0, 1, 1]]), 2)
    assert db.B_A == [{0: 1}] and db.B_B == [] and db.W == [{1: 1, 2: 1}]
    db = distinguished_basis(span(QQ, 2, [[1, 1], [1, -1]]), 1)
    assert db.B_A == [{0: 1}] and db.B_B == [{0: 1}] and db.W == []
    db = distinguished_basis(span(F2, 2, [[1, 1], [1, -1]]), 1)
    assert db.H1.dim == 1 and db.B_A == [] and db.B_B == [] and len(db.W) == 1


@given(st.sampled_from([QQ, F2, GF(3)]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_distinguished_basis_properties(field, dA, dB, seed):
    rng = random.Random(seed)
    n = dA + dB
    H = random_subspace(field, n, rng.randint(0, n), rng)
    db = distinguished_basis(H, dA)
    lifted = db.B_A + [{k + dA: x for k, x in v.items()} for v in db.B_B] + db.W
    assert len(lifted) == H.dim and Subspace.span(field, n, lifted) == H
    for w in db.W:  # both projections nonzero
        assert any(k < dA for k in w) and any(k >= dA for k in w)
    # enlarging H1 never shrinks the counts
    H2 = H + random_subspace(field, n, 1, rng)
    db2 = distinguished_basis(H2, dA)
    assert len(db.B_A) <= len(db2.B_A) and len(db.B_B) <= len(db2.B_B)
    assert len(db.B_A) + len(db.B_B) + len(db.W) <= len(db2.B_A) + len(db2.B_B) + len(db2.W)


# ---- intersections with a factor


def _product(P, Q):
    return FreeProductAlgebra(build_enveloping(P), build_enveloping(Q))


def test_intersection_examples():
    U = _product(abelian(1, F2, 6), abelian(1, F2, 6))
    ok, bad, _ = intersection_triviality_check(U, span(F2, 2, [[1, 1]]), 1)
    assert ok and bad is None
    with pytest.raises(KuroshError):
        intersection_triviality_check(U, span(F2, 2, [[1, 0]]), 1)


def test_intersection_random_abelian_factors():
    U = _product(abelian(2, F2, 6), abelian(2, F2, 6))
    A1 = coordinate_subspace(F2, 4, [0, 1])
    rng = random.Random(5)
    tested = 0
    while tested < 5:
        H = random_subspace(F2, 4, 2, rng)
        if intersect(H, A1).dim:
            continue
        ok, bad, rows = intersection_triviality_check(U, H, 2)
        assert ok, rows
        tested += 1


# ---- decompositions


def test_worked_example():
    d = kurosh_decompose(abelian(2, F2, 5), abelian(1, F2, 5), [[1, 0, 0], [0, 1, 1]])
    assert d.verdict == "verified"
    assert [r["dim_subalgebra"] for r in d.per_degree] == [2, 1, 2, 3, 6]
    assert [r["dim_model"] for r in d.per_degree] == [2, 1, 2, 3, 6]
    assert d.model.d == 2 and d.model.relations == []
    assert d.ladder["injective_low_degrees"] and d.ladder["cokernel_linear"]
    js = d.to_json()
    assert set(js) >= {"B_A", "B_B", "W", "model_presentation", "per_degree", "verdict", "conditional_flags"}


def test_full_space_is_identity_decomposition():
    P, Q = abelian(2, F2, 5), one_relator(1, F2, 5)
    d = kurosh_decompose(P, Q, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert d.verdict == "verified" and d.basis.W == []
    from gradedlie.products import free_product_lie

    L = [m.dim for m in lie_components(build_enveloping(free_product_lie(P, Q)))[1:]]
    assert [r["dim_model"] for r in d.per_degree] == L


def test_random_three_dim_subspace():
    rng = random.Random(11)
    P = one_relator(1, F2, 5)
    H = random_subspace(F2, 4, 3, rng)
    d = kurosh_decompose(P, P, list(H.basis))
    assert d.verdict == "verified"
    assert len(d.basis.B_A) + len(d.basis.B_B) + len(d.basis.W) == 3


def test_conditional_over_rationals():
    d = kurosh_decompose(abelian(2, QQ, 4), abelian(1, QQ, 4), [[1, 0, 0], [0, 1, 1]], Strategy.parse("coordinate"))
    assert d.verdict == "verified-conditional" and d.conditional_flags


def test_bloch_kato_cache_reused():
    cache = {}
    kurosh_decompose(abelian(2, F2, 4), abelian(1, F2, 4), [[1, 0, 0]], bk_cache=cache)
    assert len(cache) == 2
    kurosh_decompose(abelian(2, F2, 4), abelian(1, F2, 4), [[0, 1, 1]], bk_cache=cache)
    assert len(cache) == 2


def test_bad_vectors():
    with pytest.raises(KuroshError):
        kurosh_decompose(abelian(2, F2, 4), abelian(1, F2, 4), [[1, 0]])
