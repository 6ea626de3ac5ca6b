"""Quadratic data, quadratic duals, and the passage between quadratic Lie
algebras and quadratic graded-commutative algebras.

Conventions.  ``V`` has basis ``e_0..e_{d-1}`` and ``V*`` the dual basis
``α_0..α_{d-1}``.  ``V (x) V`` has the word coordinates ``k = i*d + j`` for
``e_i (x) e_j``.  The pairing of ``V* (x) V*`` with ``V (x) V`` is
``(α (x) β)(v (x) w) = α(v) β(w)``, so in coordinates it is the standard dot
product and ``W^⊥`` is the orthogonal complement of ``W``.  ``Λ²`` has
coordinates indexed by pairs ``(a, b)`` with ``a < b``, and
``α_a ∧ α_b = α_a (x) α_b - α_b (x) α_a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import AlgebraError, GradedAlgebra, TableAlgebra, build_enveloping, quadratic_algebra
from .lie import expand_to_tensor
from .linalg import Field, LinalgError, Subspace, orthogonal_complement, vec_iadd
from .modules import FreeModule, QuotientModule, generated_submodule
from .presentation import ExteriorPresentation, LiePresentation, PresentationError


class DualityError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticData:
    field: Field
    d: int
    W: Subspace
    names: tuple = ()

    def __post_init__(self):
        if self.W.ambient_dim != self.d * self.d:
            raise DualityError("W must live in V (x) V")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"a{i}" for i in range(self.d)))

    def algebra(self, N: int, cap=None) -> GradedAlgebra:
        kw = {} if cap is None else {"cap": cap}
        return quadratic_algebra(self.field, self.d, self.W, N, list(self.names), **kw)


@dataclass(frozen=True)
class QuadraticModuleData:
    """``Q_A(H, K)``: ``H`` of dimension ``h`` in degree 0, ``K`` inside ``A_1 (x) H``.

    Coordinates of ``A_1 (x) H`` are ``a*h + k`` for ``e_a (x) h_k``.
    """

    h: int
    K: Subspace


def quadratic_dual(q: QuadraticData) -> QuadraticData:
    """``Q(V*, W^⊥)`` under the evaluation pairing."""
    names = tuple(_dual_name(n) for n in q.names)
    return QuadraticData(q.field, q.d, orthogonal_complement(q.W), names)


def _dual_name(n):
    return n[:-1] if n.endswith("*") else n + "*"


def quadratic_dual_module(m: QuadraticModuleData, q: QuadraticData) -> QuadraticModuleData:
    """``Q_{A^!}(H*, K^⊥)`` with ``K^⊥`` taken in ``A_1* (x) H*``."""
    if m.K.ambient_dim != q.d * m.h:
        raise DualityError("K must live in A_1 (x) H")
    return QuadraticModuleData(m.h, orthogonal_complement(m.K))


def quadratic_module(m: QuadraticModuleData, A: GradedAlgebra):
    """The module ``(A (x) H) / A K`` over ``A = Q(V, W)``."""
    F = FreeModule(A, [0] * m.h)
    gens = []
    for v in m.K.basis:
        w = {}
        for c, x in v.items():
            a, k = divmod(c, m.h)
            w[F.index(1, k, a)] = x
        gens.append(w)
    U = generated_submodule(F, {1: gens})
    return QuotientModule(F, U)


def enveloping_quadratic_data(L: LiePresentation) -> QuadraticData:
    """``(V, W_L)`` with ``W_L`` spanned by the expanded degree-2 relations."""
    if not L.is_quadratic():
        raise DualityError("presentation has relations of degree other than 2")
    d = L.d
    vecs = []
    for _, t in L.tensor_relations():
        vecs.append({a * d + b: c for (a, b), c in t.items()})
    return QuadraticData(L.field, d, Subspace.span(L.field, d * d, vecs), tuple(L.names))


def symmetric_part(field: Field, d: int) -> Subspace:
    """Span of ``α⊗β + β⊗α`` and ``α⊗α``: the relations making a quadratic algebra graded-commutative."""
    vecs = [{a * d + a: 1} for a in range(d)]
    vecs += [{a * d + b: 1, b * d + a: 1} for a, b in combinations(range(d), 2)]
    return Subspace.span(field, d * d, vecs)


def pairs(d):
    return list(combinations(range(d), 2))


def wedge_tensor(d, form: dict) -> dict:
    """Tensor coordinates of a 2-form given on pairs ``(a, b)``, ``a < b``."""
    out = {}
    for (a, b), c in form.items():
        out[a * d + b] = out.get(a * d + b, 0) + c
        out[b * d + a] = out.get(b * d + a, 0) - c
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class CommQuadraticAlgebra:
    """``Λ(V*)/(Ω)`` with ``Ω`` a subspace of ``Λ²`` in pair coordinates."""

    field: Field
    d: int
    omega: Subspace
    names: tuple = ()

    def __post_init__(self):
        if self.omega.ambient_dim != len(pairs(self.d)):
            raise DualityError("Ω must live in Λ²")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"α{i}" for i in range(self.d)))

    @classmethod
    def from_exterior(cls, E: ExteriorPresentation):
        idx = {p: k for k, p in enumerate(pairs(E.d))}
        vecs = [{idx[p]: c for p, c in f.items()} for f in E.omega]
        return cls(E.field, E.d, Subspace.span(E.field, len(idx), vecs), tuple(E.names))

    def relation_space(self) -> Subspace:
        """``R = Ω̃ ⊕ Sym`` inside ``V* (x) V*``.

        A form is lifted through ``α_a ∧ α_b -> α_a (x) α_b`` (``a < b``).  Modulo
        ``Sym`` this agrees with the antisymmetric lift when 2 is invertible,
        and unlike that lift it stays complementary to ``Sym`` in characteristic 2.
        """
        F, d = self.field, self.d
        P = pairs(d)
        vecs = [{P[k][0] * d + P[k][1]: c for k, c in v.items()} for v in self.omega.basis]
        vecs += list(symmetric_part(F, d).basis)
        return Subspace.span(F, d * d, vecs)

    def quadratic_data(self) -> QuadraticData:
        return QuadraticData(self.field, self.d, self.relation_space(), self.names)

    def algebra(self, N: int, cap=None) -> GradedAlgebra:
        return self.quadratic_data().algebra(N, cap)

    def omega_forms(self):
        P = pairs(self.d)
        return [{P[k]: c for k, c in v.items()} for v in self.omega.basis]


def lie_to_comm(L: LiePresentation) -> CommQuadraticAlgebra:
    """Quadratic dual of ``U(L)`` for a quadratic Lie presentation.

    The dual relation space ``W_L^⊥`` contains every symmetric tensor (the
    relations of ``L`` are antisymmetric), so the dual is graded-commutative
    with vanishing squares of degree-1 elements; ``Ω`` is the image of
    ``W_L^⊥`` in ``Λ²`` under ``α_i (x) α_j -> α_i ∧ α_j``.
    """
    q = enveloping_quadratic_data(L)
    dual = quadratic_dual(q)
    d, F = q.d, q.field
    sym = symmetric_part(F, d)
    if not dual.W.contains_space(sym):
        raise DualityError("dual relations do not contain the symmetric tensors")
    P = pairs(d)
    idx = {p: k for k, p in enumerate(P)}
    vecs = []
    for v in dual.W.basis:
        w: dict = {}
        for c, x in v.items():
            i, j = divmod(c, d)
            if i < j:
                vec_iadd(F.char, w, {idx[(i, j)]: 1}, x)
            elif i > j:
                vec_iadd(F.char, w, {idx[(j, i)]: 1}, -x)
        vecs.append(w)
    omega = Subspace.span(F, len(P), vecs)
    C = CommQuadraticAlgebra(F, d, omega, dual.names)
    if C.relation_space() != dual.W:
        raise DualityError("R = Ω̃ ⊕ Sym does not reproduce the dual relations")
    return C


@dataclass
class CommToLieResult:
    presentation: LiePresentation
    x: list  # x_i as generator indices
    y: list
    omega: list  # the chosen basis forms ω_i


def comm_to_lie(C: CommQuadraticAlgebra, N: int = 6, verify=True) -> CommToLieResult:
    """Quadratic Lie presentation whose enveloping algebra has quadratic dual ``C``.

    The basis ``(ω_i)`` of ``Ω`` is its reduced echelon basis in pair
    coordinates; the pivot pair ``(a_i, b_i)`` of ``ω_i`` gives
    ``x_i = e_{a_i}``, ``y_i = e_{b_i}`` so that ``ω_i(x_j, y_j) = δ_ij``.  The
    relations are ``[e_a, e_b] - Σ_i ω_i(e_a, e_b) [x_i, y_i]`` for each pair
    ``a < b``; pivot pairs give trivial relations and are skipped.
    """
    F, d = C.field, C.d
    P = pairs(d)
    forms = C.omega_forms()
    pivots = [P[c] for c in C.omega.pivots]
    xs = [a for a, _ in pivots]
    ys = [b for _, b in pivots]
    pset = set(C.omega.pivots)
    rels = []
    for k, (a, b) in enumerate(P):
        if k in pset:
            continue
        r = {(a, b): F(1)}
        for f, (xa, yb) in zip(forms, pivots):
            c = f.get((a, b), 0)
            if c:
                r[(xa, yb)] = F(r.get((xa, yb), 0) - c)
        rels.append({t: c for t, c in r.items() if c})
    names = [n[:-1] if n.endswith("*") else n for n in C.names]
    if len(set(names)) != len(names):
        names = [f"e{i}" for i in range(d)]
    L = LiePresentation(F, names, rels, N, "L")
    for i, f in enumerate(forms):
        for j in range(len(forms)):
            if f.get((xs[j], ys[j]), 0) != (1 if i == j else 0):
                raise DualityError("pairing ω_i(x_j, y_j) is not the identity")
    if verify:
        # the relation space of U(L)^! must be exactly R = Ω̃ ⊕ Sym (both inclusions)
        q = enveloping_quadratic_data(L)
        if quadratic_dual(q).W != C.relation_space():
            raise DualityError("dual of the constructed enveloping algebra differs from the input algebra")
    return CommToLieResult(L, xs, ys, forms)


def exterior_presentation(C: CommQuadraticAlgebra, N=6, name="C") -> ExteriorPresentation:
    return ExteriorPresentation(C.field, list(C.names), C.omega_forms(), N, name)


def exterior_text(C: CommQuadraticAlgebra, N=6, name="C") -> str:
    f = "Q" if C.field.char == 0 else f"F{C.field.char}"
    names = [n.replace("*", "_") for n in C.names]
    rels = []
    for form in C.omega_forms():
        parts = []
        for (a, b), c in sorted(form.items()):
            term = f"{names[a]}^{names[b]}"
            if c == 1:
                parts.append(f"+ {term}")
            elif c == -1:
                parts.append(f"- {term}")
            else:
                parts.append(f"{'-' if c < 0 else '+'} {abs(c)}*{term}")
        s = " ".join(parts)
        rels.append(s[2:] if s.startswith("+ ") else s)
    lines = [f"field = {f};", f"exterior {name} {{", f"  generators = {','.join(names)};"]
    if rels:
        lines.append(f"  relations = {', '.join(rels)};")
    lines += [f"  truncation = {N};", "}"]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# skew extension and direct sum


def _require_commutative(A: GradedAlgebra, what: str):
    w = A.graded_commutativity_witness()
    if w is not None:
        raise DualityError(f"{what}: input algebra is not graded-commutative (basis pair {w})")


def skew_extension(A: GradedAlgebra) -> GradedAlgebra:
    """``A[x] = A ⊕ A x`` with ``x`` of degree 1 and
    ``(a1 + a2 x)(b1 + b2 x) = a1 b1 + (a1 b2 + (-1)^{|b1|} a2 b1) x``.

    Basis of degree ``n``: the basis of ``A_n`` followed by ``t x`` for ``t`` in
    the basis of ``A_{n-1}``.
    """
    _require_commutative(A, "skew_extension")
    N = A.N
    dims = [A.dims[n] + (A.dims[n - 1] if n >= 1 else 0) for n in range(N + 1)]

    def split(n, a):
        if a < A.dims[n]:
            return 0, n, a
        return 1, n - 1, a - A.dims[n]

    def rule(i, a, j, b):
        sa, di, ia = split(i, a)
        sb, dj, ib = split(j, b)
        n = i + j
        if sa and sb:
            return {}
        if di + dj > N:
            return {}
        prod = A.mul_basis(di, ia, dj, ib)
        if not sa and not sb:
            return dict(prod)
        off = A.dims[n]
        sign = 1
        if sa and not sb and dj % 2:
            sign = -1
        p = A.field.char
        out = {}
        for k, x in prod.items():
            y = sign * x
            if p:
                y %= p
            if y:
                out[off + k] = y
        return out

    def labels(n):
        base = A.labels(n)
        ext = [f"{s}*x" if s != "1" else "x" for s in A.labels(n - 1)] if n >= 1 else []
        return base + ext

    return TableAlgebra(A.field, N, dims, rule, labels)


def direct_sum(A: GradedAlgebra, B: GradedAlgebra) -> GradedAlgebra:
    """``A ⊓ B``: ``A_n ⊕ B_n`` in positive degrees with ``A_+ B_+ = 0``."""
    if A.field != B.field:
        raise DualityError("direct sum of algebras over different fields")
    N = min(A.N, B.N)
    dims = [1] + [A.dims[n] + B.dims[n] for n in range(1, N + 1)]

    def rule(i, a, j, b):
        da, db = A.dims[i], A.dims[j]
        if a < da and b < db:
            return dict(A.mul_basis(i, a, j, b))
        if a >= da and b >= db:
            off = A.dims[i + j]
            return {off + k: x for k, x in B.mul_basis(i, a - da, j, b - db).items()}
        return {}

    def labels(n):
        if n == 0:
            return ["1"]
        return [f"A:{s}" for s in A.labels(n)] + [f"B:{s}" for s in B.labels(n)]

    return TableAlgebra(A.field, N, dims, rule, labels)


def trivial_algebra(field: Field, N: int) -> GradedAlgebra:
    """The ground field as a connected algebra."""
    return TableAlgebra(field, N, [1] + [0] * N, lambda i, a, j, b: {})
