"""Subalgebras generated in degree 1: their dimensions, minimal presentations,
freeness, and the decomposition of such a subalgebra of a free product."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import GradedAlgebra, SubalgebraGenerated, build_enveloping, generated_lie, truncate
from .fixtures import free
from .homology import (
    EnumerationVerdict,
    Strategy,
    _run_parallel,
    betti_table,
    is_koszul,
    minimal_resolution,
    subspace_to_json,
)
from .lie import degree, expand_tree, hall_basis, necklace_count, tensor_bracket, tensor_vector, word_index
from .linalg import (
    Subspace,
    complement,
    coordinate_subspace,
    express,
    intersect,
    kernel_of_images,
    vec_iadd,
)
from .modules import DirectSumModule, ModuleMap, QuotientModule, left_ideal, regular_module
from .presentation import LiePresentation
from .products import free_product_lie


class KuroshError(ValueError):
    pass


# --------------------------------------------------------------------------
# generated subalgebras


@dataclass
class SubalgebraReport:
    S: Subspace
    dims: list  # dims[n] = dim <S>_n, index 0 unused (0)
    relation_counts: list = dc_field(default_factory=list)  # per degree
    quadratic: bool | None = None
    presentation: LiePresentation | None = None
    spaces: list | None = None

    def to_json(self):
        return {
            "generators": subspace_to_json(self.S),
            "dims": self.dims[1:],
            "relation_counts": self.relation_counts[1:] if self.relation_counts else [],
            "quadratic": self.quadratic,
            "presentation": None if self.presentation is None else self.presentation.to_json(),
        }


def generate_subalgebra(A: GradedAlgebra, S: Subspace, full_sum=False, N=None) -> SubalgebraReport:
    """Components ``M_n`` of the Lie subalgebra generated by ``S`` inside ``A``."""
    M = generated_lie(A, S, full_sum, N)
    return SubalgebraReport(S, [0] + [m.dim for m in M[1:]], spaces=M)


def _bracket_image(A, images, tree, cache):
    """Image in ``A`` of a bracket word whose letters map to ``images``."""
    r = cache.get(tree)
    if r is not None:
        return r
    if isinstance(tree, int):
        r = images[tree]
    else:
        u = _bracket_image(A, images, tree[0], cache)
        v = _bracket_image(A, images, tree[1], cache)
        r = A.bracket(degree(tree[0]), u, degree(tree[1]), v)
    cache[tree] = r
    return r


def subalgebra_presentation(A: GradedAlgebra, S: Subspace, names=None, N=None) -> SubalgebraReport:
    """Minimal presentation of ``<S>`` from the surjection ``FreeLie(S) -> <S>``.

    In each degree ``n`` the kernel ``K_n`` is computed in Hall coordinates and
    moved to the tensor algebra on ``S``.  The consequences of lower relations
    are ``C_n = sum_i [s_i, K_{n-1}]`` (the ideal generated by lower-degree
    relations, since the free Lie algebra is generated in degree 1).  New
    minimal relations are the complement of ``C_n`` in ``K_n`` (pivot rule),
    written back in the Hall basis.
    """
    N = A.N if N is None else N
    F = A.field
    m = S.dim
    names = names or [f"s{i + 1}" for i in range(m)]
    images = list(S.basis)
    cache: dict = {}
    rels, counts, dims = [], [0, 0], [0, m]
    K_prev = Subspace.zero(F, m)  # K_1 = 0
    for n in range(2, N + 1):
        H = hall_basis(m, n)
        hall_t = [tensor_vector(expand_tree(F, h), m) for h in H]
        imgs = [_bracket_image(A, images, h, cache) for h in H]
        Kh = kernel_of_images(F, imgs, A.dims[n])
        dims.append(len(H) - Kh.dim)
        amb = m**n
        # kernel vectors as tensors
        Kt = []
        for v in Kh.basis:
            t: dict = {}
            for k, c in v.items():
                vec_iadd(F.char, t, hall_t[k], c)
            Kt.append(t)
        K = Subspace.span(F, amb, Kt)
        cons = []
        prev_words = m ** (n - 1)
        for v in K_prev.basis:
            # [s_i, v] = s_i v - v s_i in word coordinates
            for i in range(m):
                t: dict = {}
                for k, c in v.items():
                    vec_iadd(F.char, t, {i * prev_words + k: 1}, c)
                    vec_iadd(F.char, t, {k * m + i: 1}, -c)
                cons.append(t)
        C = Subspace.span(F, amb, cons)
        new = complement(C, K)
        counts.append(new.dim)
        if new.dim:
            coeffs = express(F, hall_t, list(new.basis), amb)
            for cv in coeffs:
                rels.append({H[k]: c for k, c in cv.items()})
        K_prev = K
    pres = LiePresentation(F, names, rels, max(N, 2), "sub")
    quadratic = all(c == 0 for c in counts[3:])
    return SubalgebraReport(S, dims, counts, quadratic, pres)


# --------------------------------------------------------------------------
# freeness


@dataclass
class FreenessVerdict:
    free: bool
    bound: int
    witness: tuple | None
    dims: list
    necklace: list
    dims_match: bool

    def to_json(self):
        return {
            "free": self.free,
            "bound": self.bound,
            "witness": None if self.witness is None else dict(zip("ijb", self.witness)),
            "dims": self.dims,
            "necklace": self.necklace,
            "dims_match": self.dims_match,
        }


def freeness_check(P: LiePresentation, cap=None) -> FreenessVerdict:
    """``H^2 = 0`` test: free up to ``N`` iff ``b[2][j] = 0`` for all ``j <= N``.

    Also compares the Lie dimensions with the free counts for rank ``dim L_1``.
    """
    from .algebra import lie_components

    kw = {} if cap is None else {"cap": cap}
    A = build_enveloping(P, **kw)
    t = betti_table(A)
    N = P.truncation
    wit = next(((2, j, t[2, j]) for j in range(N + 1) if t[2, j]), None)
    L = lie_components(A)
    dims = [L[n].dim for n in range(1, N + 1)]
    neck = [necklace_count(A.dims[1], n) for n in range(1, N + 1)]
    return FreenessVerdict(wit is None, N, wit, dims, neck, dims == neck)


# --------------------------------------------------------------------------
# Bloch-Kato


def koszul_subalgebra(A: GradedAlgebra, S: Subspace, N: int):
    """Koszulity of ``<S>`` up to ``N``: ``(ok, reason)``."""
    rep = subalgebra_presentation(A, S, N=N)
    if not rep.quadratic:
        j = next(n for n in range(3, N + 1) if rep.relation_counts[n])
        return False, {"reason": "minimal relation of degree >= 3", "degree": j}, rep
    U = build_enveloping(rep.presentation, cap=None, N=N)
    cert = is_koszul(U, N)
    if not cert.ok:
        return False, {"reason": cert.verdict, "entry": dict(zip("ijb", cert.witness))}, rep
    return True, None, rep


def is_bloch_kato(P: LiePresentation, strategy: Strategy | None = None, bound=None, jobs=1, cap=None) -> EnumerationVerdict:
    """Every enumerated subalgebra ``<S>``, ``S`` inside ``L_1``, is Koszul up to the bound."""
    N = P.truncation if bound is None else bound
    kw = {} if cap is None else {"cap": cap}
    A = build_enveloping(P, N=N, **kw)
    strategy = strategy or Strategy.default(A.field, A.dims[1])

    def check(S):
        ok, why, _ = koszul_subalgebra(A, S, N)
        return ok, why

    n = 0
    for S, (ok, why) in _run_parallel(check, strategy.subspaces(A.field, A.dims[1]), jobs):
        n += 1
        if not ok:
            return EnumerationVerdict(
                False, strategy.proof_label, strategy.label, N, n, {"subspace": subspace_to_json(S), **why}
            )
    return EnumerationVerdict(True, strategy.proof_label, strategy.label, N, n)


# --------------------------------------------------------------------------
# distinguished bases and the decomposition


@dataclass
class DistinguishedBasis:
    B_A: list  # vectors in A_1 coordinates
    B_B: list  # vectors in B_1 coordinates
    W: list  # vectors in A_1 ⊕ B_1 coordinates
    H1: Subspace


def distinguished_basis(H1: Subspace, dA: int) -> DistinguishedBasis:
    """Split ``H1`` inside ``A_1 ⊕ B_1`` (first ``dA`` coordinates are ``A_1``).

    ``B_A`` spans ``H1 ∩ A_1`` and ``B_B`` spans ``H1 ∩ B_1`` (echelon bases);
    ``W`` is the pivot-rule complement of their sum inside ``H1``.  Then the
    projections of ``W`` to ``A_1`` together with ``B_A`` are independent, and
    likewise for ``B_1``.
    """
    F, n = H1.field, H1.ambient_dim
    dB = n - dA
    CA = coordinate_subspace(F, n, range(dA))
    CB = coordinate_subspace(F, n, range(dA, n))
    IA = intersect(H1, CA)
    IB = intersect(H1, CB)
    Wt = complement(IA + IB, H1)
    BA = [dict(v) for v in IA.basis]
    BB = [{k - dA: x for k, x in v.items()} for v in IB.basis]
    dbasis = DistinguishedBasis(BA, BB, [dict(v) for v in Wt.basis], H1)
    # independence of the projection families
    pa = [{k: x for k, x in w.items() if k < dA} for w in dbasis.W]
    pb = [{k - dA: x for k, x in w.items() if k >= dA} for w in dbasis.W]
    if Subspace.span(F, dA, BA + pa).dim != len(BA) + len(pa):
        raise KuroshError("projections to A_1 are dependent")
    if Subspace.span(F, dB, BB + pb).dim != len(BB) + len(pb):
        raise KuroshError("projections to B_1 are dependent")
    return dbasis


def intersection_triviality_check(U: GradedAlgebra, H1: Subspace, dA: int, which=0):
    """Check ``<H1>_n ∩ A_n = 0`` for all ``n``, given ``H1 ∩ A_1 = 0``.

    ``U`` must be a :class:`FreeProductAlgebra` (or any algebra with a
    ``pure_part`` projection).  With tagged bases, ``A_n`` is spanned by the
    single-letter words from ``A``, so the intersection vanishes iff the
    generated components meet that coordinate subspace trivially.  Returns
    ``(ok, first_bad_degree, per_degree_pure_projection_ranks)``.
    """
    F, n1 = H1.field, H1.ambient_dim
    lo, hi = (0, dA) if which == 0 else (dA, n1)
    if intersect(H1, coordinate_subspace(F, n1, range(lo, hi))).dim:
        raise KuroshError("hypothesis violated: H1 meets the factor in degree 1")
    M = generated_lie(U, H1)
    ranks = []
    bad = None
    for n in range(1, U.N + 1):
        pure = [k for k, s in enumerate(U.seqs[n]) if len(s) == 1 and s[0][0] == which]
        C = coordinate_subspace(F, U.dims[n], pure)
        inter = intersect(M[n], C).dim
        proj = Subspace.span(F, U.dims[n], [{k: x for k, x in v.items() if k in set(pure)} for v in M[n].basis]).dim
        ranks.append({"n": n, "intersection": inter, "pure_projection_rank": proj})
        if inter and bad is None:
            bad = n
    return bad is None, bad, ranks


@dataclass
class KuroshDecomposition:
    basis: DistinguishedBasis
    model: LiePresentation
    per_degree: list
    verdict: str
    first_failure: int | None
    ladder: dict
    conditional_flags: list

    def to_json(self):
        F = self.basis.H1.field

        def row(v, n):
            return [_scalar(v.get(k, 0)) for k in range(n)]

        n = self.basis.H1.ambient_dim
        dA = self.ladder.get("dim_A1", 0)
        return {
            "B_A": [row(v, dA) for v in self.basis.B_A],
            "B_B": [row(v, n - dA) for v in self.basis.B_B],
            "W": [row(v, n) for v in self.basis.W],
            "model_presentation": self.model.to_json(),
            "per_degree": self.per_degree,
            "verdict": self.verdict,
            "first_failure": self.first_failure,
            "injectivity": self.ladder,
            "conditional_flags": self.conditional_flags,
            "field": str(F),
        }


def _scalar(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else str(x)
    return x


def _left_ideal_dims(U: SubalgebraGenerated, gens1: list, N: int):
    """Subspaces ``(U X)_n`` inside ``U_n`` for ``X`` given in degree 1 coordinates of ``U``."""
    return left_ideal(U, {1: gens1})


def injectivity_ladder(A: GradedAlgebra, H1: Subspace, Wt: Subspace, P1: Subspace, N: int, betti_bound=4):
    """Checks on ``U(H) -> U(H)/U(H)W ⊕ U(H)/U(H)P_1`` with ``H = <H1>``.

    ``U(H)`` is realised as the associative subalgebra of ``A`` generated by
    ``H1``.  The map is injective in degree ``n`` iff ``(U W)_n ∩ (U P_1)_n = 0``.
    The cokernel is built as a module over ``U(H)`` and its Betti table is
    computed up to ``betti_bound`` to test linearity.
    """
    U = SubalgebraGenerated(A, H1, N)
    F = A.field
    w1 = [H1.coordinates_sparse(v) for v in Wt.basis]
    p1 = [H1.coordinates_sparse(v) for v in P1.basis]
    IW = left_ideal(U, {1: w1})
    IP = left_ideal(U, {1: p1})
    rows = []
    for n in range(1, N + 1):
        ker = IW[n].dim + IP[n].dim - (IW[n] + IP[n]).dim
        rows.append({"n": n, "kernel": ker, "dim_UH": U.dims[n], "dim_indF": U.dims[n] - IW[n].dim, "dim_indP": U.dims[n] - IP[n].dim})
    low_ok = all(r["kernel"] == 0 for r in rows if r["n"] <= 2)
    all_ok = all(r["kernel"] == 0 for r in rows)
    # cokernel of u -> (u.1, u.1)
    nb = min(betti_bound, N)
    from .algebra import truncate as _tr

    Ub = _tr(U, nb)
    R = regular_module(Ub)
    QW = QuotientModule(R, IW[: nb + 1])
    QP = QuotientModule(R, IP[: nb + 1])
    D = DirectSumModule(QW, QP)
    img = []
    for n in range(nb + 1):
        vecs = []
        for b in range(Ub.dims[n]):
            u = {b: 1}
            vecs.append({**QW.project(n, u), **{k + QW.dims[n]: x for k, x in QP.project(n, u).items()}})
        img.append(Subspace.span(F, D.dims[n], vecs))
    coker = QuotientModule(D, img)
    cb = minimal_resolution(Ub, coker, nb).betti
    return {
        "per_degree": rows,
        "injective_low_degrees": low_ok,
        "injective_all_degrees": all_ok,
        "cokernel_dims": coker.dims,
        "cokernel_betti": cb.to_json(),
        "cokernel_linear": cb.is_linear(),
        "betti_bound": nb,
    }


def kurosh_decompose(
    P: LiePresentation,
    Q: LiePresentation,
    H1_vectors,
    strategy: Strategy | None = None,
    check_bloch_kato=True,
    bk_cache: dict | None = None,
    betti_bound=4,
    cap=None,
) -> KuroshDecomposition:
    """Decompose ``<H1>`` inside ``U(P ⨿ Q)`` and verify it degree by degree.

    ``H1_vectors`` are coordinate vectors (``dict`` or dense lists) in the
    tagged basis of ``P_1 ⊕ Q_1``.
    """
    L = free_product_lie(P, Q)
    F, N = L.field, L.truncation
    dA, dB = P.d, Q.d
    n1 = dA + dB
    vecs = []
    for v in H1_vectors:
        if isinstance(v, dict):
            if v and (min(v) < 0 or max(v) >= n1):
                raise KuroshError(f"H1 vector {v} outside the ambient dimension {n1}")
            vecs.append({k: F(x) for k, x in v.items() if F(x)})
        else:
            if len(v) != n1:
                raise KuroshError(f"H1 vector of length {len(v)}; the degree-1 part has dimension {n1}")
            vecs.append({k: F(x) for k, x in enumerate(v) if F(x)})
    H1 = Subspace.span(F, n1, vecs)
    kw = {} if cap is None else {"cap": cap}
    db = distinguished_basis(H1, dA)

    flags = []
    if check_bloch_kato:
        for name, X in (("A", P), ("B", Q)):
            key = (X.name, tuple(X.names), str(X.relations), str(F), N)
            verdict = None if bk_cache is None else bk_cache.get(key)
            if verdict is None:
                st = strategy or Strategy.default(F, X.d)
                verdict = is_bloch_kato(X, st, cap=cap)
                if bk_cache is not None:
                    bk_cache[key] = verdict
            if not verdict.ok:
                flags.append(f"factor {name} failed the Bloch-Kato check ({verdict.witness})")
            elif verdict.label != "proved-up-to-N":
                flags.append(f"factor {name} Bloch-Kato only sampled ({verdict.strategy}); result conditional")

    UA = build_enveloping(P, **kw)
    UB = build_enveloping(Q, **kw)
    SA = Subspace.span(F, dA, db.B_A)
    SB = Subspace.span(F, dB, db.B_B)
    presA = subalgebra_presentation(UA, SA, names=[f"a{i + 1}" for i in range(SA.dim)]).presentation
    presB = subalgebra_presentation(UB, SB, names=[f"b{i + 1}" for i in range(SB.dim)]).presentation
    presA.name, presB.name = "HA", "HB"
    freeW = free(len(db.W), F, N, names=[f"w{i + 1}" for i in range(len(db.W))])
    model = free_product_lie(free_product_lie(presA, presB, "HAB"), freeW, "model")

    U = build_enveloping(L, **kw)
    M = generated_lie(U, H1)
    Umodel = build_enveloping(model, cap=None)
    from .algebra import lie_components

    Lm = lie_components(Umodel)
    per_degree, first = [], None
    for n in range(1, N + 1):
        ds, dm = M[n].dim, Lm[n].dim
        per_degree.append({"n": n, "dim_subalgebra": ds, "dim_model": dm})
        if ds != dm and first is None:
            first = n

    # injectivity ladder inside U(H)
    Wt = Subspace.span(F, n1, db.W)
    P1 = Subspace.span(F, n1, db.B_A + [{k + dA: x for k, x in v.items()} for v in db.B_B])
    ladder = injectivity_ladder(U, H1, Wt, P1, N, betti_bound)
    ladder["dim_A1"] = dA
    verdict = "verified" if first is None and ladder["injective_low_degrees"] else "mismatch"
    if verdict == "verified" and flags:
        verdict = "verified-conditional"
    return KuroshDecomposition(db, model, per_degree, verdict, first, ladder, flags)
