"""Free products of Lie presentations and of connected algebras, induced
modules, and the Mayer-Vietoris test for a splitting ``L = A ⨿ B``."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import GradedAlgebra, build_enveloping
from .homology import BettiTable, betti_table, free_product_series
from .linalg import Subspace, coordinate_subspace
from .modules import QuotientModule, left_ideal, regular_module
from .presentation import LiePresentation


class ProductError(ValueError):
    pass


def _shift_tree(t, off):
    if isinstance(t, int):
        return t + off
    return (_shift_tree(t[0], off), _shift_tree(t[1], off))


def free_product_lie(P: LiePresentation, Q: LiePresentation, name=None) -> LiePresentation:
    """Disjoint union of generators and relations.

    Clashing generator names are prefixed with the stanza names (or ``A_`` /
    ``B_`` when those coincide too).
    """
    if P.field != Q.field:
        raise ProductError("factors over different fields")
    if P.truncation != Q.truncation:
        raise ProductError("factors with different truncations")
    pn, qn = list(P.names), list(Q.names)
    if set(pn) & set(qn):
        pa, pb = (P.name, Q.name) if P.name != Q.name else ("A", "B")
        pn = [f"{pa}_{n}" for n in pn]
        qn = [f"{pb}_{n}" for n in qn]
        if set(pn) & set(qn):
            pn = [f"A_{n}" for n in P.names]
            qn = [f"B_{n}" for n in Q.names]
    off = P.d
    rels = [dict(r) for r in P.relations]
    rels += [{_shift_tree(t, off): c for t, c in r.items()} for r in Q.relations]
    return LiePresentation(P.field, pn + qn, rels, P.truncation, name or f"{P.name}_x_{Q.name}")


# --------------------------------------------------------------------------
# free product of connected algebras


class FreeProductAlgebra(GradedAlgebra):
    """``A ⨿ B`` with basis the alternating tagged sequences of positive-degree basis elements.

    A basis element of degree ``n`` is a tuple of letters ``(factor, degree, index)``
    whose factors alternate and whose degrees sum to ``n``.  Products
    concatenate and, when the adjacent letters come from the same factor,
    multiply them inside that factor.
    """

    def __init__(self, A: GradedAlgebra, B: GradedAlgebra, N=None):
        if A.field != B.field:
            raise ProductError("factors over different fields")
        super().__init__(A.field, min(A.N, B.N) if N is None else N)
        self.factors = (A, B)
        self.seqs = [[()]]
        self.index = [{(): 0}]
        # sequences of degree n ending in factor f, built by appending letters
        for n in range(1, self.N + 1):
            out = []
            for k in range(1, n + 1):
                for f in (0, 1):
                    F = self.factors[f]
                    for s in self.seqs[n - k]:
                        if s and s[-1][0] == f:
                            continue
                        for c in range(F.dims[k]):
                            out.append(s + ((f, k, c),))
            out.sort()
            self.seqs.append(out)
            self.index.append({s: i for i, s in enumerate(out)})
        self.dims = [len(s) for s in self.seqs]

    def labels(self, n):
        A, B = self.factors
        out = []
        for s in self.seqs[n]:
            if not s:
                out.append("1")
                continue
            out.append("|".join(("A:" if f == 0 else "B:") + self.factors[f].labels(k)[c] for f, k, c in s))
        return out

    def _mul_basis(self, i, a, j, b):
        s, t = self.seqs[i][a], self.seqs[j][b]
        n = i + j
        if s[-1][0] != t[0][0]:
            return {self.index[n][s + t]: 1}
        f, k1, c1 = s[-1]
        _, k2, c2 = t[0]
        prod = self.factors[f].mul_basis(k1, c1, k2, c2)
        out = {}
        for c, x in prod.items():
            out[self.index[n][s[:-1] + ((f, k1 + k2, c),) + t[1:]]] = x
        return out

    def pure_part(self, n, f, vec):
        """Coordinates of the single-letter components from factor ``f``."""
        out = {}
        for k, x in vec.items():
            s = self.seqs[n][k]
            if len(s) == 1 and s[0][0] == f:
                out[s[0][2]] = x
        return out


def free_product_algebra(A: GradedAlgebra, B: GradedAlgebra) -> FreeProductAlgebra:
    return FreeProductAlgebra(A, B)


def alternating_word_dims(hA, hB, N):
    """Direct count of alternating words: dimension of ``(A ⨿ B)_n``."""
    # ends[f][n] = number of alternating words of degree n ending in factor f
    ends = [[0] * (N + 1), [0] * (N + 1)]
    for n in range(1, N + 1):
        for f, h in ((0, hA), (1, hB)):
            tot = 0
            for k in range(1, n + 1):
                if k >= len(h) or not h[k]:
                    continue
                prev = 1 if n == k else ends[1 - f][n - k]
                tot += h[k] * prev
            ends[f][n] = tot
    return [1] + [ends[0][n] + ends[1][n] for n in range(1, N + 1)]


# --------------------------------------------------------------------------
# induced modules


def induced_module(A: GradedAlgebra, H1: Subspace) -> QuotientModule:
    """``U(L) ⊗_{U(H)} F = U(L) / U(L) H_1`` for ``H`` generated by ``H1`` inside ``L_1 = A_1``."""
    if H1.ambient_dim != A.dims[1]:
        raise ProductError("H must be given by a subspace of the degree-1 component")
    I = left_ideal(A, {1: list(H1.basis)})
    Q = QuotientModule(regular_module(A), I)
    Q.ideal = I
    return Q


@dataclass
class MVReport:
    ok: bool
    first_failure: int | None
    per_degree: list = dc_field(default_factory=list)

    def to_json(self):
        return {"ok": self.ok, "first_failure": self.first_failure, "per_degree": self.per_degree}


def mayer_vietoris_check(A: GradedAlgebra, HA: Subspace, HB: Subspace) -> MVReport:
    """Exactness of ``0 -> U(L) -> ind_A F ⊕ ind_B F -> F -> 0``, degree by degree.

    The first map sends ``u`` to ``(u·1, u·1)`` and the second is
    ``ε_A - ε_B``.  In degree 0 the sequence is ``F -> F² -> F`` with the
    diagonal and the difference map, always exact.  In positive degrees the
    augmentations vanish, so exactness means the first map is bijective: its
    kernel is ``(U HA)_n ∩ (U HB)_n``.
    """
    # L must be generated by the two parts
    if (HA + HB).dim != A.dims[1]:
        raise ProductError("the two parts do not generate L in degree 1")
    IA = left_ideal(A, {1: list(HA.basis)})
    IB = left_ideal(A, {1: list(HB.basis)})
    rows, first = [], None
    for n in range(A.N + 1):
        if n == 0:
            rows.append({"n": 0, "dim_U": 1, "dim_indA": 1, "dim_indB": 1, "dim_F": 1, "kernel": 0, "exact": True})
            continue
        dA = A.dims[n] - IA[n].dim
        dB = A.dims[n] - IB[n].dim
        # dim(IA ∩ IB) from the Grassmann formula
        ker = IA[n].dim + IB[n].dim - (IA[n] + IB[n]).dim
        exact = ker == 0 and A.dims[n] == dA + dB
        rows.append({"n": n, "dim_U": A.dims[n], "dim_indA": dA, "dim_indB": dB, "dim_F": 0, "kernel": ker, "exact": exact})
        if not exact and first is None:
            first = n
    return MVReport(first is None, first, rows)


def split_generators(P: LiePresentation, Q: LiePresentation):
    """Coordinate subspaces of the degree-1 part of ``P ⨿ Q`` spanned by each factor."""
    d = P.d + Q.d
    F = P.field
    return coordinate_subspace(F, d, range(P.d)), coordinate_subspace(F, d, range(P.d, d))


@dataclass
class CohomologySumReport:
    ok: bool
    product: BettiTable
    left: BettiTable
    right: BettiTable
    mismatches: list

    def to_json(self):
        return {
            "ok": self.ok,
            "product": self.product.to_json(),
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "mismatches": self.mismatches,
        }


def cohomology_sum_check(P: LiePresentation, Q: LiePresentation, cap=None, tables=None) -> CohomologySumReport:
    """``b(P ⨿ Q) = b(P) + b(Q)`` in positive cohomological degree, ``b[0][0] = 1``."""
    kw = {} if cap is None else {"cap": cap}
    if tables is None:
        tP = betti_table(build_enveloping(P, **kw))
        tQ = betti_table(build_enveloping(Q, **kw))
        tF = betti_table(build_enveloping(free_product_lie(P, Q), **kw))
    else:
        tP, tQ, tF = tables
    N = P.truncation
    bad = []
    keys = set(tP.entries) | set(tQ.entries) | set(tF.entries)
    for i, j in sorted(keys):
        if j > N:
            continue
        expect = 1 if (i, j) == (0, 0) else (tP[i, j] + tQ[i, j] if i > 0 else 0)
        if tF[i, j] != expect:
            bad.append({"i": i, "j": j, "product": tF[i, j], "expected": expect})
    return CohomologySumReport(not bad, tF, tP, tQ, bad)


def free_product_hilbert_check(A: GradedAlgebra, B: GradedAlgebra, F: GradedAlgebra):
    N = min(A.N, B.N, F.N)
    expected = free_product_series(A.dims, B.dims, N)
    return expected == list(F.dims[: N + 1]), expected
