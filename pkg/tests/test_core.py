import itertools

import pytest
from hypothesis import given, strategies as st

from gradedlie.algebra import (
    AlgebraError,
    ResourceCapExceeded,
    TableAlgebra,
    build_enveloping,
    generated_lie,
    lie_components,
    pbw_hilbert_check,
    pbw_series,
)
from gradedlie.fixtures import abelian, cubic, free, one_relator
from gradedlie.lie import expand_to_tensor, hall_basis, left_normed_rank, necklace_count
from gradedlie.linalg import GF, QQ, Subspace
from gradedlie.presentation import LiePresentation, PresentationError, parse_all, parse_presentation

F2 = GF(2)


# ---- parser


def test_parse_short_forms():
    P = parse_presentation("generators x,y; relations [x,y];")
    assert P.names == ["x", "y"] and P.relations == abelian(2).relations
    Q = parse_presentation("generators x1,y1,x2,y2; relations [x1,y1]+[x2,y2];")
    assert Q.d == 4 and Q.relations == one_relator(2).relations


def test_parse_stanza_and_roundtrip():
    text = """
    field = F3;   # header
    algebra L {
      generators = a, b;
      relations = 2*[a,[a,b]] - [b,[a,b]];
      truncation = 5;
    }
    """
    P = parse_presentation(text)
    assert P.field == GF(3) and P.truncation == 5 and P.relation_degrees() == [3]
    again = parse_presentation(P.to_text())
    assert again.relations == P.relations and again.names == P.names


@pytest.mark.parametrize(
    "text, needle",
    [
        ("relations [x,[y", "unclosed"),
        ("generators x,y; relations [x,z];", "unknown"),
        ("generators x,y; relations [x,y] + x;", "homogeneous"),
        ("field = F4; generators x;", "prime"),
        ("generators x,x;", "duplicate"),
    ],
)
def test_parse_errors(text, needle):
    with pytest.raises(PresentationError) as e:
        parse_presentation(text)
    assert needle in str(e.value).lower()


def test_parse_error_position():
    with pytest.raises(PresentationError) as e:
        parse_presentation("generators x,y;\nrelations [x,[y")
    assert "line 2" in str(e.value)


def test_parse_multiple_stanzas():
    items = parse_all("algebra A { generators = a; } algebra B { generators = b; }", truncation=4)
    assert [p.name for p in items] == ["A", "B"] and all(p.truncation == 4 for p in items)


# ---- free Lie algebras


def test_hall_examples():
    assert len(hall_basis(2, 1)) == 2
    assert len(hall_basis(2, 2)) == 1
    assert len(hall_basis(2, 5)) == 6


@pytest.mark.parametrize("d,n", [(d, n) for d in (1, 2, 3) for n in range(1, 7) if d**n <= 800])
def test_hall_counts_against_left_normed_rank(d, n):
    assert len(hall_basis(d, n)) == necklace_count(d, n) == left_normed_rank(QQ, d, n)


def test_expand_examples():
    x, y = 0, 1
    assert expand_to_tensor(QQ, (x, y)) == {(0, 1): 1, (1, 0): -1}
    assert expand_to_tensor(QQ, (x, (x, y))) == {(0, 0, 1): 1, (0, 1, 0): -2, (1, 0, 0): 1}
    assert expand_to_tensor(F2, {(x, y): 3}) == {(0, 1): 1, (1, 0): 1}
    assert expand_to_tensor(F2, (x, x)) == {}


# ---- enveloping algebras


def test_enveloping_dims():
    assert build_enveloping(free(2, N=3)).dims == [1, 2, 4, 8]
    assert build_enveloping(abelian(2, N=3)).dims == [1, 2, 3, 4]
    assert build_enveloping(one_relator(2, N=3)).dims == [1, 4, 15, 56]


def test_lie_component_dims():
    def dims(P):
        return [m.dim for m in lie_components(build_enveloping(P))[1:]]

    assert dims(free(2, N=5)) == [2, 1, 2, 3, 6]
    assert dims(abelian(2, N=3)) == [2, 0, 0]
    assert dims(one_relator(1, N=3)) == [2, 0, 0]


def test_full_sum_matches_left_bracketing():
    A = build_enveloping(one_relator(2, N=5))
    a = lie_components(A)
    b = lie_components(A, full_sum=True)
    assert a == b


@pytest.mark.parametrize("P", [free(2), abelian(2), one_relator(1), one_relator(2, N=5), cubic(), free(3, N=5), abelian(3)])
def test_pbw(P):
    A = build_enveloping(P)
    ok, bad, expected, actual = pbw_hilbert_check(A)
    assert ok, (bad, expected, actual)


def test_pbw_series_examples():
    assert pbw_series([0, 2], 4) == [1, 2, 3, 4, 5]
    assert pbw_series([0, 2, 1, 2, 3], 4) == [1, 2, 4, 8, 16]


def test_pbw_negative_control():
    # free(2) with the product in degree 1 x 1 made commutative
    A = build_enveloping(free(2, N=4))

    def rule(i, a, j, b):
        if i == 1 and j == 1:
            a, b = min(a, b), max(a, b)
        return A.mul_basis(i, a, j, b)

    bad = TableAlgebra(QQ, 4, A.dims, rule)
    ok, first, _, _ = pbw_hilbert_check(bad)
    assert not ok and first == 2


def test_resource_cap():
    with pytest.raises(ResourceCapExceeded):
        build_enveloping(free(4, N=12))
    with pytest.raises(ResourceCapExceeded):
        build_enveloping(free(2, N=6), cap=10)


def test_associativity_and_reduction():
    A = build_enveloping(one_relator(2, N=4))
    assert A.check_associativity() is None
    for n in range(1, 5):
        for b in range(A.dims[n]):
            w = A.words[n][b]
            assert A.reduce_tensor({w: 1}) == {b: 1}  # normal words reduce to themselves


def test_truncation_beyond_algebra():
    A = build_enveloping(free(2, N=3))
    with pytest.raises(AlgebraError):
        A.mul_basis(2, 0, 2, 0)


# ---- properties


def _brackets_ok(A, lie):
    F = A.field
    N = A.N
    for i, j in itertools.product(range(1, N), repeat=2):
        if i + j > N:
            continue
        for u in lie[i].basis[:3]:
            for v in lie[j].basis[:3]:
                s = A.bracket(i, u, j, v)
                t = A.bracket(j, v, i, u)
                assert {k: F(x + t.get(k, 0)) for k, x in s.items() if F(x + t.get(k, 0))} == {k: x for k, x in t.items() if k not in s}
                assert lie[i + j].contains(s)
    for i, j, k in itertools.product(range(1, N), repeat=3):
        if i + j + k > N:
            continue
        for u in lie[i].basis[:2]:
            for v in lie[j].basis[:2]:
                for w in lie[k].basis[:2]:
                    tot = {}
                    for (a, x), (b, y), (c, z) in (
                        ((i, u), (j, v), (k, w)),
                        ((j, v), (k, w), (i, u)),
                        ((k, w), (i, u), (j, v)),
                    ):
                        t = A.bracket(a + b, A.bracket(a, x, b, y), c, z)
                        for key, val in t.items():
                            tot[key] = F(tot.get(key, 0) + val)
                    assert not any(tot.values())


@pytest.mark.parametrize("P", [free(2, N=5), one_relator(2, N=4), cubic(N=5), free(2, GF(2), 5), abelian(3, GF(3), 4)])
def test_antisymmetry_and_jacobi(P):
    A = build_enveloping(P)
    _brackets_ok(A, lie_components(A))


@st.composite
def relation_sets(draw):
    field = draw(st.sampled_from([QQ, F2, GF(3)]))
    d = draw(st.integers(2, 3))
    pairs = [(a, b) for a in range(d) for b in range(a + 1, d)]
    triples = [(a, (b, c)) for a in range(d) for b in range(d) for c in range(d) if b < c]
    rels = draw(st.lists(st.sampled_from(pairs + triples), max_size=3, unique=True))
    extra = draw(st.sampled_from(pairs + triples))
    coeffs = draw(st.lists(st.integers(-2, 2), min_size=len(rels) + 1, max_size=len(rels) + 1))
    return field, d, rels, extra, coeffs


@given(relation_sets())
def test_adding_relations_never_increases_dims(data):
    field, d, rels, extra, coeffs = data
    N = 4
    names = [f"g{i}" for i in range(d)]
    base = [{r: 1} for r in rels]
    P = LiePresentation(field, names, base, N)
    Q = LiePresentation(field, names, base + [{extra: 1}], N)
    a, b = build_enveloping(P).dims, build_enveloping(Q).dims
    assert all(y <= x for x, y in zip(a, b))


@given(relation_sets())
def test_pbw_on_random_presentations(data):
    field, d, rels, _, _ = data
    P = LiePresentation(field, [f"g{i}" for i in range(d)], [{r: 1} for r in rels], 4)
    A = build_enveloping(P)
    assert pbw_hilbert_check(A)[0]


def test_generated_subalgebra_line():
    A = build_enveloping(free(2, N=5))
    M = generated_lie(A, Subspace.span(QQ, 2, [{0: 1, 1: 1}]))
    assert [m.dim for m in M[1:]] == [1, 0, 0, 0, 0]
