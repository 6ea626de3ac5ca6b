"""Truncated connected graded algebras.

Every algebra here stores, for each degree ``n <= N``, a basis of ``A_n`` and
a rule for multiplying basis elements.  Elements of ``A_n`` are sparse
coordinate vectors (``dict``) with respect to that basis.

``WordAlgebra`` realises ``T(V)/(R)`` degree by degree: the columns in degree
``n`` are the pairs (normal word of degree ``n-1``, letter), ordered
lexicographically as words; the relation consequences ``A_{n-e} * r`` are
row reduced with the lexicographically smallest word as pivot, and the
surviving (non-pivot) words form the basis of ``A_n``.
"""

from __future__ import annotations

from .lie import expand_to_tensor
from .linalg import Field, LinalgError, Subspace, rref_rows, vec_iadd
from .presentation import LiePresentation

DEFAULT_CAP = 10**6


class ResourceCapExceeded(RuntimeError):
    pass


class AlgebraError(ValueError):
    pass


# --------------------------------------------------------------------------
# integer power series helpers


def series_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def series_inv(a, n):
    if a[0] not in (1, -1):
        raise ValueError("series not invertible over the integers")
    out = [0] * (n + 1)
    out[0] = a[0]
    for k in range(1, n + 1):
        s = sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
        out[k] = -s * a[0]
    return out


def pbw_series(lie_dims, n):
    """Coefficients of ``prod_m (1 - t^m)^(-l_m)`` up to ``t^n``.

    ``lie_dims[m]`` is ``l_m`` (index 0 ignored).
    """
    out = [1] + [0] * n
    for m in range(1, n + 1):
        lm = lie_dims[m] if m < len(lie_dims) else 0
        for _ in range(lm):
            # multiply by 1/(1 - t^m)
            for k in range(m, n + 1):
                out[k] += out[k - m]
    return out


# --------------------------------------------------------------------------
# base class


class GradedAlgebra:
    """Connected graded algebra known in degrees ``0..N``."""

    field: Field
    N: int
    dims: list

    def __init__(self, field: Field, N: int):
        self.field = field
        self.N = N
        self._mcache: dict = {}
        self._one_gen = None

    # subclasses implement _mul_basis and labels
    def _mul_basis(self, i, a, j, b):
        raise NotImplementedError

    def labels(self, n):
        return [f"e{n}_{k}" for k in range(self.dims[n])]

    def mul_basis(self, i, a, j, b):
        if i == 0:
            return {b: 1}
        if j == 0:
            return {a: 1}
        if i + j > self.N:
            raise AlgebraError(f"product in degree {i + j} beyond truncation {self.N}")
        key = (i, a, j, b)
        r = self._mcache.get(key)
        if r is None:
            r = self._mul_basis(i, a, j, b)
            self._mcache[key] = r
        return r

    def mul(self, i, u, j, v):
        """Product of ``u`` in ``A_i`` and ``v`` in ``A_j``."""
        p = self.field.char
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                vec_iadd(p, out, self.mul_basis(i, a, j, b), x * y)
        if not p:
            out = {k: self.field(c) for k, c in out.items()}
        return out

    def bracket(self, i, u, j, v):
        p = self.field.char
        out = self.mul(i, u, j, v)
        vec_iadd(p, out, self.mul(j, v, i, u), -1)
        return out

    def unit(self):
        return {0: 1}

    def hilbert_series(self):
        return list(self.dims)

    @property
    def one_generated(self) -> bool:
        """Whether ``A_n = A_1 A_{n-1}`` for all ``n <= N``."""
        if self._one_gen is None:
            self._one_gen = all(self.decomposables(n).dim == self.dims[n] for n in range(2, self.N + 1))
        return self._one_gen

    def decomposables(self, n) -> Subspace:
        """``sum_{0<k<n} A_k A_{n-k}`` inside ``A_n``."""
        vecs = []
        for k in range(1, n):
            for a in range(self.dims[k]):
                for b in range(self.dims[n - k]):
                    vecs.append(self.mul_basis(k, a, n - k, b))
        return Subspace.span(self.field, self.dims[n], vecs)

    def products_span(self, i, U: Subspace, j, V: Subspace, n_dim=None) -> Subspace:
        """Span of ``U * V`` for subspaces of ``A_i`` and ``A_j``."""
        vecs = [self.mul(i, u, j, v) for u in U.basis for v in V.basis]
        return Subspace.span(self.field, self.dims[i + j], vecs)

    def check_associativity(self, bound=None):
        """First basis triple ``(i,a),(j,b),(k,c)`` violating associativity, or ``None``."""
        bound = self.N if bound is None else bound
        for i in range(1, bound + 1):
            for j in range(1, bound + 1 - i):
                for k in range(1, bound + 1 - i - j):
                    for a in range(self.dims[i]):
                        for b in range(self.dims[j]):
                            ab = self.mul_basis(i, a, j, b)
                            for c in range(self.dims[k]):
                                left = self.mul(i + j, ab, k, {c: 1})
                                right = self.mul(i, {a: 1}, j + k, self.mul_basis(j, b, k, c))
                                if left != right:
                                    return ((i, a), (j, b), (k, c))
        return None

    def graded_commutativity_witness(self, bound=None):
        """First failure of ``ab = (-1)^{|a||b|} ba`` (or of ``a^2 = 0`` for odd ``a``)."""
        bound = self.N if bound is None else bound
        p = self.field.char
        for i in range(1, bound + 1):
            for j in range(i, bound + 1 - i):
                for a in range(self.dims[i]):
                    for b in range(self.dims[j]):
                        ab = self.mul_basis(i, a, j, b)
                        ba = self.mul_basis(j, b, i, a)
                        s = -1 if (i * j) % 2 else 1
                        diff = dict(ab)
                        vec_iadd(p, diff, ba, -s)
                        if diff:
                            return ((i, a), (j, b))
                        if i == j and a == b and i % 2 and ab:
                            return ((i, a), (i, a))
        return None

    def is_graded_commutative(self, bound=None) -> bool:
        return self.graded_commutativity_witness(bound) is None


# --------------------------------------------------------------------------
# quotients of tensor algebras


class WordAlgebra(GradedAlgebra):
    """``T(V)/(R)`` for homogeneous tensor relations ``R`` of degree >= 2."""

    def __init__(self, field: Field, names, relations, N: int, cap: int | None = DEFAULT_CAP):
        super().__init__(field, N)
        self.names = list(names)
        d = self.d = len(self.names)
        if cap is not None and d**N > cap:
            raise ResourceCapExceeded(
                f"{d}^{N} = {d**N} tensor words exceed the cap {cap}; raise the cap to proceed"
            )
        rels = []
        for t in relations:
            t = {w: field(c) for w, c in t.items() if field(c)}
            if not t:
                continue
            lens = {len(w) for w in t}
            if len(lens) != 1:
                raise AlgebraError("inhomogeneous tensor relation")
            (e,) = lens
            if e < 2:
                raise AlgebraError("relations must have degree at least 2")
            if e <= N:
                rels.append((e, t))
        self.relations = rels
        self.words = [[()]]
        self.index = [{(): 0}]
        # colmap[n][col] = basis index in degree n or -1; red[n][col] = reduction for pivot cols
        self.colmap = [None]
        self.red = [None]
        self._rcache: dict = {}
        for n in range(1, N + 1):
            self._build_degree(n)
        self.dims = [len(w) for w in self.words]
        self._one_gen = True

    def _build_degree(self, n):
        d, field = self.d, self.field
        prev = self.words[n - 1]
        ncols = len(prev) * d
        rows = []
        for e, t in self.relations:
            if e > n:
                continue
            for b in range(len(self.words[n - e])):
                row: dict = {}
                for w, c in t.items():
                    x = self.mul_word(n - e, {b: 1}, w[:-1])
                    last = w[-1]
                    for k, y in x.items():
                        col = k * d + last
                        z = row.get(col, 0) + c * y
                        if field.char:
                            z %= field.char
                        if z:
                            row[col] = z
                        else:
                            row.pop(col, None)
                if row:
                    rows.append(row)
        red_rows, pivots = rref_rows(field, rows, ncols)
        pset = set(pivots)
        colmap = [-1] * ncols
        words, index = [], {}
        for col in range(ncols):
            if col not in pset:
                w = prev[col // d] + (col % d,)
                colmap[col] = len(words)
                index[w] = len(words)
                words.append(w)
        red = {}
        for r, c in zip(red_rows, pivots):
            red[c] = {colmap[k]: field(-x) for k, x in r.items() if k != c}
        self.words.append(words)
        self.index.append(index)
        self.colmap.append(colmap)
        self.red.append(red)

    def labels(self, n):
        return ["".join(self.names[x] for x in w) if w else "1" for w in self.words[n]]

    def right_letter(self, n, vec, v):
        """``vec * v`` for ``vec`` in degree ``n`` and a letter ``v``."""
        d, p = self.d, self.field.char
        cm, red = self.colmap[n + 1], self.red[n + 1]
        out: dict = {}
        for k, x in vec.items():
            col = k * d + v
            j = cm[col]
            if j >= 0:
                y = out.get(j, 0) + x
                if p:
                    y %= p
                if y:
                    out[j] = y
                else:
                    out.pop(j, None)
            else:
                vec_iadd(p, out, red[col], x)
        return out

    def mul_word(self, n, vec, word):
        for i, v in enumerate(word):
            vec = self.right_letter(n + i, vec, v)
            if not vec:
                break
        return vec

    def _mul_basis(self, i, a, j, b):
        w = self.words[j][b]
        if j == 1:
            return self.right_letter(i, {a: 1}, w[0])
        pre = self.index[j - 1][w[:-1]]
        x = self.mul_basis(i, a, j - 1, pre)
        return self.right_letter(i + j - 1, x, w[-1])

    def reduce_tensor(self, t: dict):
        """Coordinates of a homogeneous tensor element in ``A_n``."""
        if not t:
            return {}
        n = len(next(iter(t)))
        out: dict = {}
        for w, c in t.items():
            vec_iadd(self.field.char, out, self.mul_word(0, {0: 1}, w), self.field(c))
        return out

    def letter(self, i):
        return {i: 1}


def quadratic_algebra(field: Field, d: int, W: Subspace, N: int, names=None, cap=DEFAULT_CAP):
    """``Q(V, W)`` with ``W`` given in the ``d*d`` word coordinates of ``V (x) V``."""
    if W.ambient_dim != d * d:
        raise AlgebraError("relation space must live in V (x) V")
    names = names or [f"a{i}" for i in range(d)]
    rels = [{(k // d, k % d): c for k, c in v.items()} for v in W.basis]
    return WordAlgebra(field, names, rels, N, cap)


def build_enveloping(pres: LiePresentation, cap: int | None = DEFAULT_CAP, N: int | None = None) -> WordAlgebra:
    """Truncated universal enveloping algebra of a Lie presentation."""
    N = pres.truncation if N is None else N
    rels = [t for _, t in pres.tensor_relations()]
    A = WordAlgebra(pres.field, pres.names, rels, N, cap)
    A.presentation = pres
    return A


# --------------------------------------------------------------------------
# Lie components


def generated_lie(A: GradedAlgebra, S: Subspace, full_sum=False, N=None):
    """Graded Lie subalgebra of ``A`` generated by ``S`` inside ``A_1``.

    Returns subspaces ``M[n]`` (index 0 is the zero space of ``A_0``).  With
    ``full_sum`` the component ``M_n`` is computed as the sum over all
    ``[M_k, M_{n-k}]``; otherwise as ``[M_1, M_{n-1}]``, which is the same
    space for a Lie algebra generated in degree 1.
    """
    N = A.N if N is None else N
    M = [Subspace.zero(A.field, A.dims[0]), S]
    for n in range(2, N + 1):
        vecs = []
        ks = range(1, n // 2 + 1) if full_sum else [1]
        for k in ks:
            for u in M[k].basis:
                for v in M[n - k].basis:
                    vecs.append(A.bracket(k, u, n - k, v))
        M.append(Subspace.span(A.field, A.dims[n], vecs))
    return M


def lie_components(A: GradedAlgebra, full_sum=False, N=None):
    """Lie components generated by ``A_1`` inside ``A`` (for enveloping algebras)."""
    return generated_lie(A, Subspace.full(A.field, A.dims[1]), full_sum, N)


def pbw_hilbert_check(A: GradedAlgebra, lie=None):
    """Compare ``dim A_n`` with the PBW product over the Lie component dimensions.

    Returns ``(ok, first_bad_degree, expected, actual)``.
    """
    lie = lie if lie is not None else lie_components(A)
    ldims = [0] + [lie[m].dim for m in range(1, A.N + 1)]
    expected = pbw_series(ldims, A.N)
    for n in range(A.N + 1):
        if expected[n] != A.dims[n]:
            return False, n, expected, list(A.dims)
    return True, None, expected, list(A.dims)


# --------------------------------------------------------------------------
# algebras given by explicit products


class TableAlgebra(GradedAlgebra):
    """Algebra whose basis products come from a callable ``rule(i, a, j, b)``."""

    def __init__(self, field, N, dims, rule, labels=None):
        super().__init__(field, N)
        self.dims = list(dims)
        if self.dims[0] != 1:
            raise AlgebraError("algebra is not connected")
        self._rule = rule
        self._labels = labels

    def _mul_basis(self, i, a, j, b):
        return self._rule(i, a, j, b)

    def labels(self, n):
        if self._labels is not None:
            return self._labels(n)
        return super().labels(n)


class SubalgebraGenerated(GradedAlgebra):
    """Associative subalgebra of ``A`` generated by a subspace of ``A_1``.

    For an enveloping algebra ``U(L)`` and ``S`` inside ``L_1`` this is
    ``U(<S>)`` by the PBW theorem.
    """

    def __init__(self, A: GradedAlgebra, S: Subspace, N=None):
        super().__init__(A.field, A.N if N is None else N)
        self.parent = A
        spaces = [Subspace.full(A.field, 1), S]
        for n in range(2, self.N + 1):
            vecs = [A.mul(1, s, n - 1, u) for s in S.basis for u in spaces[n - 1].basis]
            spaces.append(Subspace.span(A.field, A.dims[n], vecs))
        self.spaces = spaces[: self.N + 1]
        self.dims = [s.dim for s in self.spaces]
        self._one_gen = True

    def embed(self, n, v):
        """Coordinates in the parent algebra of an element given in subalgebra coordinates."""
        out: dict = {}
        for k, x in v.items():
            vec_iadd(self.field.char, out, self.spaces[n].basis[k], x)
        return out

    def _mul_basis(self, i, a, j, b):
        w = self.parent.mul(i, self.spaces[i].basis[a], j, self.spaces[j].basis[b])
        return self.spaces[i + j].coordinates_sparse(w)


class TruncatedView(GradedAlgebra):
    """The same algebra with a smaller truncation bound."""

    def __init__(self, A: GradedAlgebra, N: int):
        if N > A.N:
            raise AlgebraError("cannot extend the truncation of an algebra")
        super().__init__(A.field, N)
        self.base = A
        self.dims = list(A.dims[: N + 1])

    def _mul_basis(self, i, a, j, b):
        return self.base.mul_basis(i, a, j, b)

    def labels(self, n):
        return self.base.labels(n)


def truncate(A: GradedAlgebra, N: int) -> GradedAlgebra:
    return A if N == A.N else TruncatedView(A, N)


def check_linalg_field(A, B):
    if A.field != B.field:
        raise LinalgError("algebras over different fields")
