"""Exact linear algebra over the rationals and prime fields.

Vectors are sparse ``dict[int, scalar]`` maps with no zero entries.  Over
``QQ`` scalars are ``int`` or ``fractions.Fraction``; over ``GF(p)`` they are
``int`` residues in ``range(p)``.  Every subspace is stored by its reduced
row-echelon basis, which makes equality of subspaces a plain comparison.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from . import kernels

Vec = dict


class LinalgError(ValueError):
    pass


class AmbientMismatch(LinalgError):
    pass


class ContainmentError(LinalgError):
    pass


# --------------------------------------------------------------------------
# fields


class Field:
    """Base class; concrete fields are :data:`QQ` and :func:`GF`."""

    char: int = 0

    def __call__(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def random_element(self, rng: random.Random, bound: int = 3):
        raise NotImplementedError

    def to_json(self) -> str:
        return str(self)


class Rationals(Field):
    char = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, int):
            return x
        if isinstance(x, str):
            return self(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        return self(Fraction(1) / x)

    def div(self, a, b):
        return self(Fraction(a) / b)

    def random_element(self, rng, bound=3):
        return rng.randint(-bound, bound)

    def __repr__(self):
        return "QQ"

    __str__ = lambda self: "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __reduce__(self):
        return (_rationals, ())


def _rationals():
    return QQ


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise LinalgError(f"field modulus {p} is not prime")
        if p >= 2**31:
            raise LinalgError(f"prime {p} exceeds the machine-word limit 2**31")
        self.char = p

    def __call__(self, x):
        p = self.char
        if isinstance(x, int):
            return x % p
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({p})")
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, str):
            return self(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into GF({p})")

    def inv(self, x):
        if x % self.char == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.char)

    def div(self, a, b):
        return a * self.inv(b) % self.char

    def random_element(self, rng, bound=3):
        return rng.randrange(self.char)

    def __repr__(self):
        return f"GF({self.char})"

    def __str__(self):
        return f"F{self.char}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.char == self.char

    def __hash__(self):
        return hash(("GF", self.char))

    def __reduce__(self):
        return (GF, (self.char,))


QQ = Rationals()
_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def parse_field(text: str) -> Field:
    """``"Q"`` / ``"QQ"`` or ``"F<p>"`` / ``"GF(p)"`` / a bare prime."""
    t = text.strip().upper().replace(" ", "")
    if t in ("Q", "QQ"):
        return QQ
    for prefix in ("GF(", "F"):
        if t.startswith(prefix):
            t = t[len(prefix):].rstrip(")")
            break
    try:
        p = int(t)
    except ValueError:
        raise LinalgError(f"unknown field {text!r}") from None
    return GF(p)


# --------------------------------------------------------------------------
# sparse vector helpers


def vec_add(field: Field, u: Vec, v: Vec, c=1) -> Vec:
    """Return ``u + c*v`` as a new vector."""
    p = field.char
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if p:
            y %= p
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(p: int, u: Vec, v: Vec, c=1) -> None:
    for k, x in v.items():
        y = u.get(k, 0) + c * x
        if p:
            y %= p
        if y:
            u[k] = y
        else:
            u.pop(k, None)


def vec_scale(field: Field, v: Vec, c) -> Vec:
    p = field.char
    if p:
        c %= p
        return {k: x * c % p for k, x in v.items()} if c else {}
    return {k: field(x * c) for k, x in v.items()} if c else {}


def vec_from_dense(field: Field, values: Sequence) -> Vec:
    out = {}
    for i, x in enumerate(values):
        x = field(x)
        if x:
            out[i] = x
    return out


def vec_to_dense(v: Vec, n: int) -> list:
    out = [0] * n
    for k, x in v.items():
        out[k] = x
    return out


def linear_combination(field: Field, terms: Iterable[tuple[object, Vec]]) -> Vec:
    out: Vec = {}
    p = field.char
    for c, v in terms:
        if c:
            vec_iadd(p, out, v, c)
    return out


# --------------------------------------------------------------------------
# row reduction


def _rref_sparse(field: Field, rows: Iterable[Vec]) -> tuple[list[Vec], list[int]]:
    """Incremental sparse elimination; returns canonical rref and pivots."""
    p = field.char
    piv: dict[int, Vec] = {}
    for r in rows:
        v = dict(r)
        while v:
            c = min(v)
            row = piv.get(c)
            if row is None:
                break
            f = v[c]
            vec_iadd(p, v, row, -f)
        if not v:
            continue
        # v has leading column c free of existing pivots.  Its entries at
        # later pivot columns are cleared below so every stored row stays
        # reduced with respect to the others.
        c = min(v)
        f = field.inv(v[c])
        if p:
            v = {k: x * f % p for k, x in v.items()}
        else:
            v = {k: field(x * f) for k, x in v.items()}
        for pc in sorted(k for k in v if k in piv and k != c):
            if pc in v:
                vec_iadd(p, v, piv[pc], -v[pc])
        for pc, row in piv.items():
            x = row.get(c)
            if x:
                vec_iadd(p, row, v, -x)
        piv[c] = v
    pivots = sorted(piv)
    return [piv[c] for c in pivots], pivots


def rref_rows(field: Field, rows: Sequence[Vec], ncols: int) -> tuple[list[Vec], list[int]]:
    """Reduced row-echelon form of a list of sparse rows.

    Over a prime field the work may be delegated to the dense compiled
    kernel (see :mod:`gradedlie.kernels`); the result is identical because
    the reduced echelon form is unique.
    """
    rows = [r for r in rows if r]
    if not rows:
        return [], []
    if field.char and kernels.use_dense(len(rows), ncols, sum(len(r) for r in rows)):
        return kernels.rref_sparse_rows_modp(rows, ncols, field.char)
    return _rref_sparse(field, rows)


# --------------------------------------------------------------------------
# matrices and subspaces


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    rows: tuple = ()

    @classmethod
    def from_dense(cls, field: Field, data: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise LinalgError("ragged matrix")
        return cls(field, len(data), ncols, tuple(vec_from_dense(field, r) for r in data))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Vec], ncols: int) -> "Matrix":
        return cls(field, len(rows), ncols, tuple(dict(r) for r in rows))

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, ncols, tuple({} for _ in range(nrows)))

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, tuple({i: 1} for i in range(n)))

    def to_dense(self) -> list[list]:
        return [vec_to_dense(r, self.ncols) for r in self.rows]

    def apply(self, v: Vec) -> Vec:
        """``self @ v`` for a column vector ``v``."""
        p = self.field.char
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            for k, x in r.items():
                y = v.get(k)
                if y:
                    s += x * y
            if p:
                s %= p
            if s:
                out[i] = self.field(s)
        return out

    def transpose(self) -> "Matrix":
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for k, x in r.items():
                cols[k][i] = x
        return Matrix(self.field, self.ncols, self.nrows, tuple(cols))


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    rows, piv = rref_rows(m.field, m.rows, m.ncols)
    return Matrix(m.field, len(rows), m.ncols, tuple(rows)), piv


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def rank_rows(field: Field, rows: Sequence[Vec], ncols: int) -> int:
    return len(rref_rows(field, rows, ncols)[1])


@dataclass(frozen=True)
class Subspace:
    """Row span inside ``field ** ambient_dim``, kept in reduced echelon form."""

    field: Field
    ambient_dim: int
    basis: tuple = ()
    pivots: tuple = ()
    _pivot_index: dict = dc_field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_pivot_index", {c: i for i, c in enumerate(self.pivots)})

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Vec]) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            if v and (min(v) < 0 or max(v) >= ambient_dim):
                raise AmbientMismatch(f"vector {v} outside ambient dimension {ambient_dim}")
        rows, piv = rref_rows(field, vectors, ambient_dim)
        return cls(field, ambient_dim, tuple(rows), tuple(piv))

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n)

    @classmethod
    def full(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, tuple({i: 1} for i in range(n)), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def reduce(self, v: Vec) -> Vec:
        """Remainder of ``v`` modulo the span: zero in every pivot column."""
        p = self.field.char
        v = dict(v)
        idx = self._pivot_index
        for c in sorted(k for k in v if k in idx):
            x = v.get(c)
            if x:
                vec_iadd(p, v, self.basis[idx[c]], -x)
        return v

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Vec) -> list:
        """Coefficients of ``v`` in the echelon basis; raises if ``v`` is outside."""
        if self.reduce(v):
            raise ContainmentError("vector not in subspace")
        return [v.get(c, 0) for c in self.pivots]

    def coordinates_sparse(self, v: Vec) -> Vec:
        if self.reduce(v):
            raise ContainmentError("vector not in subspace")
        idx = self._pivot_index
        return {idx[c]: x for c, x in v.items() if c in idx}

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.field, self.dim, self.ambient_dim, self.basis)

    def dense(self) -> list[list]:
        return [vec_to_dense(r, self.ambient_dim) for r in self.basis]

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise AmbientMismatch(
                f"ambient mismatch: {self.field}^{self.ambient_dim} vs {other.field}^{other.ambient_dim}"
            )

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_spaces(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)


def kernel(m: Matrix) -> Subspace:
    """Right null space ``{v : m v = 0}``."""
    rows, piv = rref_rows(m.field, m.rows, m.ncols)
    pset = set(piv)
    vecs = []
    for f in range(m.ncols):
        if f in pset:
            continue
        v = {f: 1}
        for r, c in zip(rows, piv):
            x = r.get(f)
            if x:
                v[c] = m.field(-x)
        vecs.append(v)
    return Subspace.span(m.field, m.ncols, vecs)


def kernel_of_images(field: Field, images: Sequence[Vec], target_dim: int) -> Subspace:
    """Kernel of the map sending basis vector ``i`` to ``images[i]``.

    This is the left null space of the matrix whose rows are the images,
    computed by eliminating an augmented ``[image | identity]`` system.
    """
    n = len(images)
    aug = []
    for i, im in enumerate(images):
        row = dict(im)
        row[target_dim + i] = 1
        aug.append(row)
    rows, piv = rref_rows(field, aug, target_dim + n)
    kept = []
    for r, c in zip(rows, piv):
        if c >= target_dim:
            kept.append({k - target_dim: x for k, x in r.items()})
    return Subspace.span(field, n, kept)


def orthogonal_complement(s: Subspace) -> Subspace:
    """``{x : <b, x> = 0 for all basis rows b}`` under the standard pairing."""
    return kernel(s.matrix())


def sum_spaces(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    return Subspace.span(u.field, u.ambient_dim, list(u.basis) + list(v.basis))


def intersect(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.field, u.ambient_dim)
    # (u^perp + v^perp)^perp
    up = orthogonal_complement(u)
    vp = orthogonal_complement(v)
    return orthogonal_complement(sum_spaces(up, vp))


def complement(u: Subspace, inside: Subspace | None = None) -> Subspace:
    """Deterministic complement of ``u`` inside ``inside`` (default: ambient).

    The pivot columns of ``u`` are a subset of those of ``inside``; the
    complement is spanned by the echelon rows of ``inside`` whose pivots are
    not pivots of ``u``.  For the full ambient space these are the standard
    basis vectors at the non-pivot columns of ``u``.
    """
    if inside is None:
        inside = Subspace.full(u.field, u.ambient_dim)
    u._check(inside)
    if not inside.contains_space(u):
        raise ContainmentError("complement: u is not contained in the enclosing space")
    upiv = set(u.pivots)
    rows = [r for r, c in zip(inside.basis, inside.pivots) if c not in upiv]
    piv = [c for c in inside.pivots if c not in upiv]
    return Subspace(u.field, u.ambient_dim, tuple(rows), tuple(piv))


def express(field: Field, rows: Sequence[Vec], targets: Sequence[Vec], ncols: int) -> list[Vec]:
    """Write each target as a combination of ``rows`` (which may be dependent).

    Returns one sparse coefficient vector per target.  Raises
    :class:`ContainmentError` if a target is outside the span.
    """
    n = len(rows)
    aug = []
    for i, r in enumerate(rows):
        row = dict(r)
        row[ncols + i] = 1
        aug.append(row)
    red, piv = rref_rows(field, aug, ncols + n)
    p = field.char
    by_piv = {c: r for r, c in zip(red, piv) if c < ncols}
    out = []
    for t in targets:
        v = dict(t)
        acc: Vec = {}
        for c in sorted(by_piv):
            x = v.get(c)
            if x:
                r = by_piv[c]
                vec_iadd(p, v, {k: y for k, y in r.items() if k < ncols}, -x)
                vec_iadd(p, acc, {k - ncols: y for k, y in r.items() if k >= ncols}, x)
        if v:
            raise ContainmentError("target outside span")
        out.append(acc)
    return out


# --------------------------------------------------------------------------
# subspace enumeration


def all_subspaces(field: Field, n: int, dims: Iterable[int] | None = None):
    """Yield every subspace of ``GF(p)**n`` (via its reduced echelon form)."""
    from itertools import combinations, product

    if not field.char:
        raise LinalgError("cannot enumerate all subspaces over QQ")
    p = field.char
    for k in (range(n + 1) if dims is None else dims):
        for piv in combinations(range(n), k):
            pset = set(piv)
            free = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, n) if c not in pset]
            for vals in product(range(p), repeat=len(free)):
                rows = [{pc: 1} for pc in piv]
                for (r, c), x in zip(free, vals):
                    if x:
                        rows[r][c] = x
                yield Subspace(field, n, tuple(rows), piv)


def gaussian_binomial_total(p: int, n: int) -> int:
    """Number of subspaces of ``GF(p)**n``."""
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def random_subspace(field: Field, n: int, k: int, rng: random.Random, bound: int = 3) -> Subspace:
    """A subspace of dimension exactly ``k`` (resampled until full rank)."""
    if k > n:
        raise LinalgError("dimension exceeds ambient")
    while True:
        vecs = [vec_from_dense(field, [field.random_element(rng, bound) for _ in range(n)]) for _ in range(k)]
        s = Subspace.span(field, n, vecs)
        if s.dim == k:
            return s


def coordinate_subspace(field: Field, n: int, cols: Iterable[int]) -> Subspace:
    cols = sorted(set(cols))
    return Subspace(field, n, tuple({c: 1} for c in cols), tuple(cols))
