"""Truncated graded left modules over a :class:`GradedAlgebra`.

A module stores ``dims[j]`` for ``0 <= j <= N`` and an action
``act_basis(i, a, j, m)`` giving the product of the algebra basis element
``a`` of degree ``i`` with the module basis element ``m`` of degree ``j``.
"""

from __future__ import annotations

from .algebra import AlgebraError, GradedAlgebra
from .linalg import Subspace, complement, kernel_of_images, vec_iadd


class ModuleError(ValueError):
    pass


class GradedModule:
    algebra: GradedAlgebra
    N: int
    dims: list

    def __init__(self, algebra: GradedAlgebra, N: int | None = None):
        self.algebra = algebra
        self.field = algebra.field
        self.N = algebra.N if N is None else N
        if self.N > algebra.N:
            raise ModuleError("module truncation exceeds that of the algebra")
        self._acache: dict = {}

    def _act_basis(self, i, a, j, m):
        raise NotImplementedError

    def act_basis(self, i, a, j, m):
        if i == 0:
            return {m: 1}
        if i + j > self.N:
            raise AlgebraError("action lands beyond the truncation")
        key = (i, a, j, m)
        r = self._acache.get(key)
        if r is None:
            r = self._act_basis(i, a, j, m)
            self._acache[key] = r
        return r

    def act(self, i, a, j, vec):
        """Basis element ``a`` of ``A_i`` applied to a vector of ``M_j``."""
        p = self.field.char
        out: dict = {}
        for m, x in vec.items():
            vec_iadd(p, out, self.act_basis(i, a, j, m), x)
        return out

    def act_elem(self, i, u, j, vec):
        p = self.field.char
        out: dict = {}
        for a, x in u.items():
            vec_iadd(p, out, self.act(i, a, j, vec), x)
        return out

    def full(self, j) -> Subspace:
        return Subspace.full(self.field, self.dims[j])

    def min_degree(self):
        for j, d in enumerate(self.dims):
            if d:
                return j
        return None

    def check_action(self, bound=None):
        """Return the first ``(a, b, m)`` with ``(ab)m != a(bm)``, or ``None``."""
        A = self.algebra
        bound = self.N if bound is None else bound
        for j in range(bound + 1):
            for m in range(self.dims[j]):
                for i in range(1, bound + 1 - j):
                    for k in range(1, bound + 1 - j - i):
                        for a in range(A.dims[i]):
                            for b in range(A.dims[k]):
                                left = self.act_elem(i + k, A.mul_basis(i, a, k, b), j, {m: 1})
                                right = self.act(i, a, k + j, self.act_basis(k, b, j, m))
                                if left != right:
                                    return ((i, a), (k, b), (j, m))
        return None


class FreeModule(GradedModule):
    """``⊕_k A[-g_k]`` with one generator in each degree ``g_k``."""

    def __init__(self, algebra, gen_degrees, N=None):
        super().__init__(algebra, N)
        self.gen_degrees = list(gen_degrees)
        self.offsets = []
        self.dims = []
        for j in range(self.N + 1):
            offs, tot = {}, 0
            for k, g in enumerate(self.gen_degrees):
                if g <= j:
                    offs[k] = tot
                    tot += algebra.dims[j - g]
            self.offsets.append(offs)
            self.dims.append(tot)
        self._locate = []
        for j in range(self.N + 1):
            loc = []
            for k, off in self.offsets[j].items():
                loc.extend((k, b) for b in range(self.algebra.dims[j - self.gen_degrees[k]]))
            self._locate.append(loc)

    def locate(self, j, m):
        """``(generator, algebra basis index)`` of basis element ``m`` in degree ``j``."""
        return self._locate[j][m]

    def index(self, j, k, b):
        return self.offsets[j][k] + b

    def generator(self, k):
        """Vector of generator ``k`` in its own degree."""
        g = self.gen_degrees[k]
        return g, {self.offsets[g][k]: 1}

    def _act_basis(self, i, a, j, m):
        k, b = self._locate[j][m]
        g = self.gen_degrees[k]
        off = self.offsets[i + j][k]
        return {off + c: x for c, x in self.algebra.mul_basis(i, a, j - g, b).items()}


def regular_module(A, N=None):
    return FreeModule(A, [0], N)


class TrivialModule(GradedModule):
    """The field concentrated in degree ``shift`` with ``A_+`` acting by zero."""

    def __init__(self, algebra, shift=0, N=None):
        super().__init__(algebra, N)
        self.shift = shift
        self.dims = [1 if j == shift else 0 for j in range(self.N + 1)]

    def _act_basis(self, i, a, j, m):
        return {}


class ZeroModule(GradedModule):
    def __init__(self, algebra, N=None):
        super().__init__(algebra, N)
        self.dims = [0] * (self.N + 1)

    def _act_basis(self, i, a, j, m):
        return {}


def generated_submodule(M: GradedModule, gens) -> list:
    """Submodule of ``M`` generated by ``gens`` (a ``dict`` degree -> list of vectors).

    Returns one :class:`Subspace` of ``M_j`` per degree.
    """
    A = M.algebra
    out = []
    for j in range(M.N + 1):
        vecs = list(gens.get(j, []))
        if A.one_generated:
            if j >= 1:
                for a in range(A.dims[1]):
                    vecs.extend(M.act(1, a, j - 1, v) for v in out[j - 1].basis)
        else:
            for i in range(1, j + 1):
                for a in range(A.dims[i]):
                    vecs.extend(M.act(i, a, j - i, v) for v in out[j - i].basis)
        out.append(Subspace.span(M.field, M.dims[j], vecs))
    return out


def is_submodule(M: GradedModule, U) -> bool:
    A = M.algebra
    for j in range(M.N):
        for i in range(1, M.N - j + 1):
            if i > 1 and A.one_generated:
                break
            for a in range(A.dims[i]):
                for v in U[j].basis:
                    if not U[i + j].contains(M.act(i, a, j, v)):
                        return False
    return True


class SubModule(GradedModule):
    """A graded submodule ``U`` of ``M``, with echelon bases as coordinates."""

    def __init__(self, M: GradedModule, U):
        super().__init__(M.algebra, M.N)
        self.parent = M
        self.spaces = list(U)
        self.dims = [s.dim for s in self.spaces]

    def embed(self, j, vec):
        out: dict = {}
        for k, x in vec.items():
            vec_iadd(self.field.char, out, self.spaces[j].basis[k], x)
        return out

    def _act_basis(self, i, a, j, m):
        w = self.parent.act(i, a, j, self.spaces[j].basis[m])
        return self.spaces[i + j].coordinates_sparse(w)


class QuotientModule(GradedModule):
    """``M / U``; the basis is the standard vectors at the non-pivot columns of ``U_j``."""

    def __init__(self, M: GradedModule, U):
        super().__init__(M.algebra, M.N)
        self.parent = M
        self.spaces = list(U)
        self.cols = []
        self.colidx = []
        for j in range(self.N + 1):
            comp = complement(self.spaces[j])
            cols = list(comp.pivots)
            self.cols.append(cols)
            self.colidx.append({c: k for k, c in enumerate(cols)})
        self.dims = [len(c) for c in self.cols]

    def project(self, j, vec):
        r = self.spaces[j].reduce(vec)
        idx = self.colidx[j]
        return {idx[c]: x for c, x in r.items()}

    def lift(self, j, vec):
        return {self.cols[j][k]: x for k, x in vec.items()}

    def _act_basis(self, i, a, j, m):
        w = self.parent.act_basis(i, a, j, self.cols[j][m])
        return self.project(i + j, w)


class ShiftedModule(GradedModule):
    """``M`` moved up by ``s`` degrees: the new degree ``j`` is the old ``j - s``."""

    def __init__(self, M: GradedModule, s: int):
        super().__init__(M.algebra, M.N)
        if s < 0:
            raise ModuleError("only non-negative shifts fit in degrees 0..N")
        self.base = M
        self.s = s
        self.dims = [M.dims[j - s] if j >= s else 0 for j in range(self.N + 1)]

    def _act_basis(self, i, a, j, m):
        return self.base.act_basis(i, a, j - self.s, m)


class DirectSumModule(GradedModule):
    def __init__(self, M1: GradedModule, M2: GradedModule):
        if M1.algebra is not M2.algebra:
            raise ModuleError("summands over different algebras")
        super().__init__(M1.algebra, min(M1.N, M2.N))
        self.parts = (M1, M2)
        self.dims = [M1.dims[j] + M2.dims[j] for j in range(self.N + 1)]

    def inject(self, which, j, vec):
        off = 0 if which == 0 else self.parts[0].dims[j]
        return {k + off: x for k, x in vec.items()}

    def _act_basis(self, i, a, j, m):
        d1 = self.parts[0].dims[j]
        if m < d1:
            return self.parts[0].act_basis(i, a, j, m)
        w = self.parts[1].act_basis(i, a, j, m - d1)
        off = self.parts[0].dims[i + j]
        return {k + off: x for k, x in w.items()}


class ModuleMap:
    """Degree-preserving linear map given by images of basis vectors in each degree."""

    def __init__(self, source: GradedModule, target: GradedModule, images):
        self.source = source
        self.target = target
        self.images = images  # images[j][m] = vector in target degree j

    @classmethod
    def from_function(cls, source, target, fn):
        N = min(source.N, target.N)
        images = [[fn(j, m) for m in range(source.dims[j])] for j in range(N + 1)]
        return cls(source, target, images)

    @property
    def N(self):
        return len(self.images) - 1

    def apply(self, j, vec):
        out: dict = {}
        for m, x in vec.items():
            vec_iadd(self.source.field.char, out, self.images[j][m], x)
        return out

    def kernel(self, j) -> Subspace:
        return kernel_of_images(self.source.field, self.images[j], self.target.dims[j])

    def image(self, j) -> Subspace:
        return Subspace.span(self.source.field, self.target.dims[j], self.images[j])

    def is_linear_over_algebra(self) -> bool:
        A = self.source.algebra
        for j in range(self.N + 1):
            for i in range(1, self.N - j + 1):
                for a in range(A.dims[i]):
                    for m in range(self.source.dims[j]):
                        left = self.apply(i + j, self.source.act_basis(i, a, j, m))
                        right = self.target.act(i, a, j, self.images[j][m])
                        if left != right:
                            return False
        return True


def left_ideal(A: GradedAlgebra, gens) -> list:
    """Left ideal generated by ``gens`` (a ``dict`` degree -> vectors) in ``A``.

    Degree ``n`` is spanned by ``A_{n-k} g`` for generators ``g`` of degree ``k``,
    which only needs right multiplications by the generators.
    """
    out = []
    for n in range(A.N + 1):
        vecs = []
        for k, gs in gens.items():
            if k > n:
                continue
            for g in gs:
                for b in range(A.dims[n - k]):
                    vecs.append(A.mul(n - k, {b: 1}, k, g))
        out.append(Subspace.span(A.field, A.dims[n], vecs))
    return out


def two_sided_ideal(A: GradedAlgebra, I1: Subspace) -> list:
    """Two-sided ideal generated by a subspace of ``A_1``."""
    out = [Subspace.zero(A.field, 1), I1]
    for n in range(2, A.N + 1):
        vecs = []
        if A.one_generated:
            for a in range(A.dims[1]):
                for v in out[n - 1].basis:
                    vecs.append(A.mul(1, {a: 1}, n - 1, v))
                    vecs.append(A.mul(n - 1, v, 1, {a: 1}))
        else:
            for k in range(1, n):
                for a in range(A.dims[n - k]):
                    for v in out[k].basis:
                        vecs.append(A.mul(n - k, {a: 1}, k, v))
                        vecs.append(A.mul(k, v, n - k, {a: 1}))
        out.append(Subspace.span(A.field, A.dims[n], vecs))
    return out
