"""Bigraded Ext via minimal free resolutions, with a bar-complex cross-check.

``b[i][j] = dim Ext^{i,j}_A(M, F)`` is the number of degree-``j`` generators in
homological step ``i`` of a minimal free resolution of ``M``.  Everything is
computed degreewise up to the truncation bound ``N``; degree-``j`` data only
ever depends on degrees ``<= j``, so the reported entries are exact.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field as dc_field

from .algebra import GradedAlgebra, ResourceCapExceeded, series_inv, series_mul, truncate
from .linalg import (
    LinalgError,
    Subspace,
    all_subspaces,
    complement,
    coordinate_subspace,
    gaussian_binomial_total,
    kernel_of_images,
    random_subspace,
    rank_rows,
    vec_iadd,
)
from .modules import (
    FreeModule,
    GradedModule,
    ModuleMap,
    QuotientModule,
    TrivialModule,
    regular_module,
    two_sided_ideal,
    left_ideal,
)


class HomologyError(ValueError):
    pass


# --------------------------------------------------------------------------
# Betti tables


@dataclass
class BettiTable:
    bound: int
    entries: dict = dc_field(default_factory=dict)  # (i, j) -> b, nonzero only

    def __getitem__(self, ij):
        i, j = ij
        if j > self.bound:
            raise KeyError(f"internal degree {j} beyond bound {self.bound}")
        return self.entries.get((i, j), 0)

    def rows(self):
        return [{"i": i, "j": j, "b": b} for (i, j), b in sorted(self.entries.items())]

    def diagonal(self):
        top = max([i for i, j in self.entries if i == j] + [0])
        return [self.entries.get((i, i), 0) for i in range(top + 1)]

    def off_diagonal(self, shift=0):
        """Nonzero entries with ``j != i + shift``, sorted."""
        return [(i, j, b) for (i, j), b in sorted(self.entries.items()) if j != i + shift]

    def is_linear(self, shift=0) -> bool:
        return not self.off_diagonal(shift)

    def max_i(self):
        return max([i for i, _ in self.entries] + [0])

    def to_json(self):
        return {"bound": self.bound, "rows": self.rows()}

    @classmethod
    def from_json(cls, data):
        return cls(data["bound"], {(r["i"], r["j"]): r["b"] for r in data["rows"] if r["b"]})

    def to_text(self):
        top = self.max_i()
        w = max([len(str(b)) for b in self.entries.values()] + [1]) + 1
        head = "i\\j " + "".join(f"{j:>{w}}" for j in range(self.bound + 1))
        lines = [head]
        for i in range(top + 1):
            cells = []
            for j in range(self.bound + 1):
                b = self.entries.get((i, j), 0)
                cells.append(f"{('.' if j < i else b):>{w}}")
            lines.append(f"{i:>3} " + "".join(cells))
        return "\n".join(lines)

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.bound == other.bound and self.entries == other.entries

    def restricted(self, bound):
        return BettiTable(bound, {k: v for k, v in self.entries.items() if k[1] <= bound})


# --------------------------------------------------------------------------
# minimal resolution


@dataclass
class Resolution:
    betti: BettiTable
    free_modules: list
    differentials: list  # differentials[i][k] = image of generator k of F_i (a vector)


def _action_span(A: GradedAlgebra, M: GradedModule, prev_bases, j):
    """Spanning set of ``(A_+ K)_j`` given bases of ``K`` in lower degrees."""
    vecs = []
    if A.one_generated:
        if j >= 1 and prev_bases[j - 1] is not None:
            for a in range(A.dims[1]):
                vecs.extend(M.act(1, a, j - 1, v) for v in prev_bases[j - 1])
    else:
        for i in range(1, j + 1):
            if prev_bases[j - i] is None:
                continue
            for a in range(A.dims[i]):
                vecs.extend(M.act(i, a, j - i, v) for v in prev_bases[j - i])
    return vecs


def _map_images(A, F: FreeModule, target: GradedModule, gen_images, j):
    """Images in ``target_j`` of the degree-``j`` basis of ``F`` under the map fixed by ``gen_images``."""
    out = []
    for m in range(F.dims[j]):
        k, b = F.locate(j, m)
        g = F.gen_degrees[k]
        out.append(target.act(j - g, b, g, gen_images[k]) if j > g else dict(gen_images[k]) if b == 0 else {})
    return out


def minimal_resolution(A: GradedAlgebra, M: GradedModule, bound: int | None = None, max_step: int | None = None) -> Resolution:
    """Minimal graded free resolution of ``M`` up to internal degree ``bound``."""
    N = M.N if bound is None else bound
    if N > M.N:
        raise HomologyError("bound exceeds module truncation")
    field = A.field
    entries = {}
    frees, diffs = [], []

    # step 0: cover M
    target: GradedModule = M
    kdims = [M.dims[j] for j in range(N + 1)]
    # full[j]: the kernel to be covered is all of target_j
    full = [True] * (N + 1)
    step = 0
    while True:
        if max_step is not None and step > max_step:
            break
        if not any(kdims):
            break
        gens, gen_deg = [], []
        # new_bases[j]: basis of K_j, or None when K_j is all of target_j
        new_bases = [None] * (N + 1)
        for j in range(N + 1):
            if kdims[j] == 0:
                new_bases[j] = []
                continue
            tdim = target.dims[j]
            if full[j] and (j == 0 or full[j - 1]) and A.one_generated and isinstance(target, FreeModule):
                # K_j is all of F_j: the only missing generators are F's own degree-j generators
                new_bases[j] = None
                for k, g in enumerate(target.gen_degrees):
                    if g == j:
                        gens.append((j, {target.index(j, k, 0): 1}))
                        gen_deg.append(j)
                continue
            prev = [new_bases[i] if new_bases[i] is not None else _identity(target.dims[i]) for i in range(j)]
            prev.append(None)
            S = Subspace.span(field, tdim, _action_span(A, target, prev, j))
            if S.dim == kdims[j]:
                new_bases[j] = list(S.basis)
                continue
            if S.dim > kdims[j]:
                raise HomologyError("internal error: decomposables exceed the kernel")
            if full[j]:
                K = Subspace.full(field, tdim)
            else:
                Fprev = frees[-1]
                images = _map_images(A, Fprev, prev_target, diffs[-1], j)
                K = kernel_of_images(field, images, prev_target.dims[j])
                if K.dim != kdims[j]:
                    raise HomologyError(
                        f"internal error: kernel dimension {K.dim} != expected {kdims[j]} at ({step},{j})"
                    )
            for v in complement(S, K).basis:
                gens.append((j, v))
                gen_deg.append(j)
            new_bases[j] = list(K.basis)
        for g in gen_deg:
            entries[(step, g)] = entries.get((step, g), 0) + 1
        F = FreeModule(A, gen_deg, N)
        frees.append(F)
        diffs.append([v for _, v in gens])
        # next kernel: dims from exactness, full[j] if the image of F_j is zero
        new_kdims = [F.dims[j] - kdims[j] for j in range(N + 1)]
        full = [kdims[j] == 0 for j in range(N + 1)]
        kdims = new_kdims
        prev_target = target
        target = F
        step += 1
    return Resolution(BettiTable(N, entries), frees, diffs)


def _identity(n):
    return [{i: 1} for i in range(n)]


def betti_table(A: GradedAlgebra, M: GradedModule | None = None, bound=None) -> BettiTable:
    if M is None:
        M = TrivialModule(A)
    return minimal_resolution(A, M, bound).betti


# --------------------------------------------------------------------------
# bar complex


def bar_ext_oracle(A: GradedAlgebra, M: GradedModule | None = None, bound: int | None = None, cap: int = 200000) -> BettiTable:
    """``dim Ext^{i,j}_A(M, F)`` from the normalised bar complex ``A_+^{(x)i} (x) M``.

    The differential is
    ``d(a1|...|ai|m) = sum_s (-1)^s (...|a_s a_{s+1}|...|m) + (-1)^i (a1|...|a_{i-1}|a_i m)``.
    Over a field the dual complex has cohomology of the same dimensions as
    the homology of the complex itself, so ranks of ``d`` suffice.
    """
    if M is None:
        M = TrivialModule(A)
    N = M.N if bound is None else bound
    if N > M.N:
        raise HomologyError("bound exceeds module truncation")
    bases, table = _bar_complex(A, M, N, cap)
    entries = {}
    for j in range(N + 1):
        ranks = {}
        for i in range(1, j + 1):
            rows = table[(i, j)]
            ranks[i] = rank_rows(A.field, rows, len(bases[(i - 1, j)])) if rows else 0
        for i in range(j + 1):
            b = len(bases[(i, j)]) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            if b:
                entries[(i, j)] = b
    return BettiTable(N, entries)


def bar_boundary_squares_zero(A, M=None, bound=None) -> bool:
    """Check ``d o d = 0`` on the bar complex."""
    if M is None:
        M = TrivialModule(A)
    N = M.N if bound is None else bound
    _, table = _bar_complex(A, M, N, None)
    p = A.field.char
    for (i, j), rows in table.items():
        if (i - 1, j) not in table:
            continue
        lower = table[(i - 1, j)]
        for r in rows:
            acc: dict = {}
            for k, x in r.items():
                vec_iadd(p, acc, lower[k], x)
            if acc:
                return False
    return True


def _bar_complex(A, M, N, cap):
    bases = {}
    for j in range(N + 1):
        for i in range(j + 1):
            out = []
            for comp in _compositions(j, i):
                dm = j - sum(comp)
                if M.dims[dm] == 0:
                    continue
                ranges = [range(A.dims[d]) for d in comp] + [range(M.dims[dm])]
                for idx in itertools.product(*ranges):
                    out.append(tuple(zip(comp, idx[:-1])) + ((dm, idx[-1]),))
                    if cap is not None and len(out) > cap:
                        raise ResourceCapExceeded(f"bar complex exceeds {cap} basis elements in bidegree ({i},{j})")
            bases[(i, j)] = out
    if cap is not None and sum(len(v) for v in bases.values()) > cap:
        raise ResourceCapExceeded(f"bar complex exceeds {cap} basis elements")
    index = {k: {t: n for n, t in enumerate(v)} for k, v in bases.items()}
    p = A.field.char
    table = {}
    for (i, j), ts in bases.items():
        if i == 0:
            continue
        target = index[(i - 1, j)]
        rows = []
        for t in ts:
            out: dict = {}
            letters, (dm, m) = t[:-1], t[-1]
            for s in range(i - 1):
                (d1, a1), (d2, a2) = letters[s], letters[s + 1]
                sign = -1 if s % 2 == 0 else 1
                for c, x in A.mul_basis(d1, a1, d2, a2).items():
                    key = letters[:s] + ((d1 + d2, c),) + letters[s + 2 :] + ((dm, m),)
                    vec_iadd(p, out, {target[key]: 1}, sign * x)
            (dl, al) = letters[-1]
            sign = -1 if i % 2 else 1
            for c, x in M.act_basis(dl, al, dm, m).items():
                key = letters[:-1] + ((dl + dm, c),)
                vec_iadd(p, out, {target[key]: 1}, sign * x)
            rows.append(out)
        table[(i, j)] = rows
    return bases, table


def _compositions(j, i):
    """Ordered tuples of ``i`` positive integers with sum at most ``j``."""
    if i == 0:
        yield ()
        return
    for first in range(1, j + 1):
        for rest in _compositions(j - first, i - 1):
            yield (first,) + rest


# --------------------------------------------------------------------------
# quotients by ideals


def quotient_by_ideal(A: GradedAlgebra, I1: Subspace, two_sided=None) -> tuple:
    """``(A/I, I)`` as left modules, ``I`` generated by ``I1`` inside ``A_1``.

    ``two_sided`` defaults to ``not graded-commutative``: for graded-commutative
    algebras the left ideal already is two-sided.
    """
    if I1.ambient_dim != A.dims[1]:
        raise HomologyError("ideal generators must lie in degree 1")
    if two_sided is None:
        two_sided = not A.is_graded_commutative(min(A.N, 3))
    if two_sided:
        I = two_sided_ideal(A, I1)
    else:
        I = left_ideal(A, {1: list(I1.basis)})
    R = regular_module(A)
    return QuotientModule(R, I), I


def ext_of_quotient(A: GradedAlgebra, I1: Subspace, bound=None) -> BettiTable:
    Q, _ = quotient_by_ideal(A, I1)
    return minimal_resolution(A, Q, bound).betti


# --------------------------------------------------------------------------
# deciders


@dataclass
class KoszulCertificate:
    verdict: str  # "koszul-up-to-N" | "fails" | "not-1-generated"
    bound: int
    witness: tuple | None
    betti: BettiTable

    @property
    def ok(self):
        return self.verdict == "koszul-up-to-N"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "bound": self.bound,
            "witness": None if self.witness is None else dict(zip("ijb", self.witness)),
            "betti": self.betti.to_json(),
        }


def is_koszul(A: GradedAlgebra, bound=None) -> KoszulCertificate:
    N = A.N if bound is None else bound
    B = truncate(A, N)
    t = betti_table(B, TrivialModule(B), N)
    gens = [(1, j, t[1, j]) for j in range(2, N + 1) if t[1, j]]
    if gens:
        return KoszulCertificate("not-1-generated", N, gens[0], t)
    off = t.off_diagonal()
    if off:
        return KoszulCertificate("fails", N, off[0], t)
    return KoszulCertificate("koszul-up-to-N", N, None, t)


@dataclass
class Strategy:
    """Enumeration of subspaces of a degree-1 component.

    ``exhaustive`` lists every subspace (prime fields only).  ``sampled`` lists
    every coordinate subspace followed by ``k`` random ones drawn with ``seed``.
    """

    kind: str = "exhaustive"
    k: int = 20
    seed: int = 0

    @classmethod
    def parse(cls, text: str, seed: int = 0):
        t = text.strip().lower()
        if t == "exhaustive":
            return cls("exhaustive", 0, seed)
        if t in ("coordinate", "coordinate+random"):
            return cls("sampled", 20 if t.endswith("random") else 0, seed)
        if t.startswith("coordinate+random(") and t.endswith(")"):
            args = [a.strip() for a in t[len("coordinate+random(") : -1].split(",") if a.strip()]
            k = int(args[0]) if args else 20
            if len(args) > 1:
                seed = int(args[1])
            return cls("sampled", k, seed)
        raise ValueError(f"unknown strategy {text!r}")

    @classmethod
    def default(cls, field, n, seed=0):
        if field.char and n <= 4:
            return cls("exhaustive", 0, seed)
        return cls("sampled", 20, seed)

    @property
    def label(self):
        return "exhaustive" if self.kind == "exhaustive" else f"coordinate+random({self.k},{self.seed})"

    @property
    def proof_label(self):
        return "proved-up-to-N" if self.kind == "exhaustive" else "sampled"

    def subspaces(self, field, n):
        if self.kind == "exhaustive":
            if not field.char:
                raise LinalgError("exhaustive enumeration needs a prime field; use coordinate+random over Q")
            yield from all_subspaces(field, n)
            return
        seen = set()
        for r in range(n + 1):
            for cols in itertools.combinations(range(n), r):
                S = coordinate_subspace(field, n, cols)
                seen.add(_key(S))
                yield S
        rng = random.Random(self.seed)
        for _ in range(self.k):
            if n == 0:
                break
            S = random_subspace(field, n, rng.randint(1, n), rng)
            if _key(S) not in seen:
                seen.add(_key(S))
                yield S

    def count(self, field, n):
        if self.kind == "exhaustive":
            return gaussian_binomial_total(field.char, n)
        return None


def _key(S):
    return tuple(tuple(sorted(r.items())) for r in S.basis)


def subspace_to_json(S: Subspace):
    return [[_json_scalar(x) for x in row] for row in S.dense()]


def _json_scalar(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


# worker context for fork-based process pools
_CTX: dict = {}


def _run_parallel(fn, items, jobs):
    """Map ``fn`` over ``items``; with ``jobs > 1`` use a forked process pool."""
    if jobs is None or jobs <= 1:
        for it in items:
            yield it, fn(it)
        return
    import multiprocessing as mp
    from concurrent.futures import ProcessPoolExecutor

    items = list(items)
    ctx = mp.get_context("fork")
    _CTX["fn"] = fn
    with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as ex:
        for it, res in zip(items, ex.map(_ctx_call, items, chunksize=max(1, len(items) // (4 * jobs)))):
            yield it, res


def _ctx_call(item):
    return _CTX["fn"](item)


@dataclass
class EnumerationVerdict:
    ok: bool
    label: str  # proved-up-to-N | sampled
    strategy: str
    bound: int
    checked: int
    witness: object = None
    detail: object = None

    def to_json(self):
        return {
            "ok": self.ok,
            "label": self.label,
            "strategy": self.strategy,
            "bound": self.bound,
            "checked": self.checked,
            "witness": self.witness,
            "detail": self.detail,
        }


def is_universally_koszul(A: GradedAlgebra, strategy: Strategy | None = None, bound=None, jobs=1) -> EnumerationVerdict:
    """Check that ``A/(I1)`` has a linear resolution for every enumerated ``I1``."""
    N = A.N if bound is None else bound
    A = truncate(A, N)
    w = A.graded_commutativity_witness()
    if w is not None:
        raise HomologyError(f"algebra is not graded-commutative (basis pair {w})")
    strategy = strategy or Strategy.default(A.field, A.dims[1])

    def check(S):
        t = ext_of_quotient(A, S, N)
        return t.off_diagonal()

    n = 0
    for S, off in _run_parallel(check, strategy.subspaces(A.field, A.dims[1]), jobs):
        n += 1
        if off:
            return EnumerationVerdict(
                False, strategy.proof_label, strategy.label, N, n,
                {"ideal_generators": subspace_to_json(S), "entry": dict(zip("ijb", off[0]))},
            )
    return EnumerationVerdict(True, strategy.proof_label, strategy.label, N, n)


# --------------------------------------------------------------------------
# long exact sequence


def check_short_exact(f: ModuleMap, g: ModuleMap) -> int | None:
    """First degree where ``0 -> L -f-> M -g-> N -> 0`` fails to be exact, else ``None``."""
    N = min(f.N, g.N)
    for j in range(N + 1):
        if f.kernel(j).dim:
            return j
        if g.image(j).dim != g.target.dims[j]:
            return j
        im = f.image(j)
        ker = g.kernel(j)
        if im != ker:
            return j
    return None


def les_euler_check(f: ModuleMap, g: ModuleMap, bound=None):
    """Euler characteristic of the long exact Ext sequence, degree by degree.

    Returns ``(ok, sums, tables)`` where ``sums[j]`` is
    ``sum_i (-1)^i (b_L - b_M + b_N)[i][j]``.
    """
    bad = check_short_exact(f, g)
    if bad is not None:
        raise HomologyError(f"sequence is not exact in degree {bad}")
    if not (f.is_linear_over_algebra() and g.is_linear_over_algebra()):
        raise HomologyError("maps are not module homomorphisms")
    L, M, Nm = f.source, f.target, g.target
    A = M.algebra
    N = min(L.N, M.N, Nm.N) if bound is None else bound
    tL, tM, tN = (minimal_resolution(A, X, N).betti for X in (L, M, Nm))
    sums = []
    for j in range(N + 1):
        s = sum((-1) ** i * (tL[i, j] - tM[i, j] + tN[i, j]) for i in range(j + 1))
        sums.append(s)
    return all(s == 0 for s in sums), sums, (tL, tM, tN)


# --------------------------------------------------------------------------
# Hilbert series


def hilbert_series(A: GradedAlgebra):
    return list(A.dims)


def koszul_series_product(hA, hD, N):
    """Coefficients of ``h_A(t) h_D(-t)`` up to ``t^N``."""
    neg = [(-1) ** k * x for k, x in enumerate(hD)]
    return series_mul(hA, neg, N)


def koszul_series_check(A: GradedAlgebra, A_dual: GradedAlgebra, N=None):
    """Necessary condition for Koszulity: ``h_A(t) h_{A^!}(-t) = 1`` up to ``t^N``."""
    N = min(A.N, A_dual.N) if N is None else N
    prod = koszul_series_product(A.dims, A_dual.dims, N)
    return prod == [1] + [0] * N, prod


def free_product_series(hA, hB, N):
    """``1/h_F = 1/h_A + 1/h_B - 1`` solved for ``h_F`` up to ``t^N``."""
    ia, ib = series_inv(hA, N), series_inv(hB, N)
    s = [ia[k] + ib[k] - (1 if k == 0 else 0) for k in range(N + 1)]
    return series_inv(s, N)


def binomial_row(d, N):
    return [math.comb(d, i) for i in range(N + 1)]
