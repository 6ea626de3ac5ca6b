import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gradedlie.linalg import (
    GF,
    QQ,
    AmbientMismatch,
    ContainmentError,
    LinalgError,
    Matrix,
    PrimeField,
    Subspace,
    all_subspaces,
    complement,
    coordinate_subspace,
    express,
    gaussian_binomial_total,
    intersect,
    kernel,
    kernel_of_images,
    orthogonal_complement,
    parse_field,
    random_subspace,
    rank,
    rref,
)

F2, F3, F5 = GF(2), GF(3), GF(5)


def S(field, n, rows):
    return Subspace.span(field, n, [{k: field(x) for k, x in enumerate(r) if field(x)} for r in rows])


# ---- fields


def test_parse_field():
    assert parse_field("Q") == QQ and parse_field("QQ") == QQ
    assert parse_field("F7") == GF(7) and parse_field("GF(7)") == GF(7) and parse_field("7") == GF(7)
    with pytest.raises(LinalgError):
        parse_field("F6")


def test_field_arithmetic():
    assert F3(5) == 2 and F3(-1) == 2 and F3.inv(2) == 2
    assert QQ(Fraction(4, 2)) == 2
    assert F5(Fraction(1, 2)) == 3


def test_field_size_limit():
    with pytest.raises(LinalgError):
        PrimeField(2**31 + 11)


# ---- rref


def test_rref_examples():
    m, piv = rref(Matrix.from_dense(QQ, [[2, 4], [1, 2]]))
    assert m.to_dense() == [[1, 2]] and piv == [0]
    m, piv = rref(Matrix.identity(QQ, 3))
    assert m.to_dense() == Matrix.identity(QQ, 3).to_dense() and piv == [0, 1, 2]
    m, piv = rref(Matrix.from_dense(F2, [[1, 1], [1, 1]]))
    assert m.to_dense() == [[1, 1]] and piv == [0]


def test_kernel_examples():
    assert kernel(Matrix.zero(QQ, 2, 3)).dim == 3
    assert kernel(Matrix.identity(QQ, 3)).dim == 0
    k = kernel(Matrix.from_dense(QQ, [[1, 1, 0]]))
    assert k.dim == 2 and k.contains({0: 1, 1: -1})


def test_intersect_examples():
    e1, e2 = S(QQ, 2, [[1, 0]]), S(QQ, 2, [[0, 1]])
    assert intersect(e1, e2).dim == 0
    assert intersect(e1, e1) == e1
    assert intersect(S(QQ, 2, [[1, 1], [1, -1]]), e1) == e1
    with pytest.raises(AmbientMismatch):
        intersect(e1, S(QQ, 3, [[1, 0, 0]]))


def test_complement_examples():
    V = Subspace.full(QQ, 3)
    assert complement(Subspace.zero(QQ, 3), V) == V
    assert complement(V, V).dim == 0
    assert complement(S(QQ, 2, [[1, 1]])) == S(QQ, 2, [[0, 1]])
    with pytest.raises(ContainmentError):
        complement(S(QQ, 2, [[1, 0]]), S(QQ, 2, [[0, 1]]))


def test_express_and_orthogonal():
    rows = [{0: 1, 1: 1}, {1: 1}, {0: 1, 1: 2}]
    (c,) = express(QQ, rows, [{0: 2, 1: 3}], 2)
    total = {}
    for k, x in c.items():
        for j, y in rows[k].items():
            total[j] = total.get(j, 0) + x * y
    assert {k: v for k, v in total.items() if v} == {0: 2, 1: 3}
    W = S(QQ, 3, [[1, 1, 0]])
    P = orthogonal_complement(W)
    assert P.dim == 2 and all(sum(v.get(k, 0) * w.get(k, 0) for k in range(3)) == 0 for v in P.basis for w in W.basis)


def test_subspace_enumeration_counts():
    for p, n in ((2, 2), (2, 3), (3, 2), (2, 4)):
        assert sum(1 for _ in all_subspaces(GF(p), n)) == gaussian_binomial_total(p, n)
    assert gaussian_binomial_total(2, 2) == 5 and gaussian_binomial_total(2, 3) == 16


def test_pickle_fields():
    import pickle

    assert pickle.loads(pickle.dumps(F5)) is F5
    assert pickle.loads(pickle.dumps(QQ)) == QQ


# ---- properties

fields = st.sampled_from([QQ, F2, F3])


@st.composite
def matrices(draw, max_dim=6):
    field = draw(fields)
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(1, max_dim))
    data = draw(st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix.from_dense(field, data, c)


@st.composite
def subspace_pairs(draw, max_dim=8):
    field = draw(fields)
    n = draw(st.integers(1, max_dim))
    seed = draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    a = random_subspace(field, n, rng.randint(0, n), rng)
    b = random_subspace(field, n, rng.randint(0, n), rng)
    return a, b


@given(matrices())
def test_rank_nullity(m):
    k = kernel(m)
    assert rank(m) + k.dim == m.ncols
    for v in k.basis:
        assert m.apply(v) == {}


@given(subspace_pairs())
def test_grassmann(pair):
    u, v = pair
    assert u.dim + v.dim == intersect(u, v).dim + (u + v).dim
    i = intersect(u, v)
    assert u.contains_space(i) and v.contains_space(i)


@given(subspace_pairs())
def test_complement_direct_sum(pair):
    u, v = pair
    inside = u + v
    w = complement(u, inside)
    assert w.dim + u.dim == inside.dim
    assert (u + w) == inside
    assert complement(u, inside) == w  # deterministic


@given(matrices(), st.randoms(use_true_random=False))
def test_row_permutation_canonical(m, rnd):
    rows = list(m.rows)
    rnd.shuffle(rows)
    assert rref(m)[0].to_dense() == rref(Matrix.from_rows(m.field, rows, m.ncols))[0].to_dense()
    assert kernel(m) == kernel(Matrix.from_rows(m.field, rows, m.ncols))


@given(matrices())
def test_kernel_of_images_matches_kernel(m):
    # columns of m are images of basis vectors
    t = m.transpose()
    assert kernel_of_images(m.field, list(t.rows), m.nrows) == kernel(m)


@given(subspace_pairs())
def test_orthogonal_complement_involution(pair):
    u, _ = pair
    assert orthogonal_complement(orthogonal_complement(u)) == u
    assert orthogonal_complement(u).dim + u.dim == u.ambient_dim


def test_coordinate_subspace():
    c = coordinate_subspace(QQ, 4, [1, 3])
    assert c.pivots == (1, 3) or list(c.pivots) == [1, 3]
