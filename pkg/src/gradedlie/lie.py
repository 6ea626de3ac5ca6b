"""Bracket words, their expansion into the tensor algebra, and Hall bases.

A bracket word is either a generator index (``int``) or a pair
``(left, right)`` standing for ``[left, right]``.  A Lie expression is a
``dict`` from bracket words to scalars.  Tensor words are tuples of
generator indices; tensor elements are ``dict`` maps from words to scalars.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .linalg import Field, Subspace, vec_iadd


def degree(tree) -> int:
    if isinstance(tree, int):
        return 1
    return degree(tree[0]) + degree(tree[1])


def bracket_str(tree, names) -> str:
    if isinstance(tree, int):
        return names[tree]
    return f"[{bracket_str(tree[0], names)},{bracket_str(tree[1], names)}]"


def _coeff_str(c) -> str:
    return str(c)


def expr_str(expr: dict, names) -> str:
    """Render a Lie expression in the input grammar."""
    if not expr:
        return "0"
    parts = []
    for tree, c in expr.items():
        b = bracket_str(tree, names)
        if c == 1:
            parts.append(("+", b))
        elif c == -1:
            parts.append(("-", b))
        else:
            sign = "-" if c < 0 else "+"
            parts.append((sign, f"{_coeff_str(abs(c))}*{b}"))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _mul_tensors(p: int, u: dict, v: dict) -> dict:
    out: dict = {}
    for a, x in u.items():
        for b, y in v.items():
            w = a + b
            z = out.get(w, 0) + x * y
            if p:
                z %= p
            if z:
                out[w] = z
            else:
                out.pop(w, None)
    return out


def tensor_bracket(field: Field, u: dict, v: dict) -> dict:
    """``uv - vu`` for tensor elements."""
    p = field.char
    out = _mul_tensors(p, u, v)
    vec_iadd(p, out, _mul_tensors(p, v, u), -1)
    return out


def expand_tree(field: Field, tree) -> dict:
    if isinstance(tree, int):
        return {(tree,): 1}
    return tensor_bracket(field, expand_tree(field, tree[0]), expand_tree(field, tree[1]))


def expand_to_tensor(field: Field, expr) -> dict:
    """Expand a bracket word or Lie expression into the tensor algebra.

    Over characteristic 2 the expansion of ``[u,u]`` is zero, so brackets
    are automatically alternating in the tensor model.
    """
    if not isinstance(expr, dict):
        expr = {expr: 1}
    out: dict = {}
    p = field.char
    for tree, c in expr.items():
        c = field(c)
        if c:
            vec_iadd(p, out, expand_tree(field, tree), c)
    return out


def mobius(n: int) -> int:
    m, k, f = 1, n, 2
    while f * f <= k:
        if k % f == 0:
            k //= f
            if k % f == 0:
                return 0
            m = -m
        f += 1
    if k > 1:
        m = -m
    return m


def necklace_count(d: int, n: int) -> int:
    """Dimension of the degree-``n`` part of the free Lie algebra on ``d`` generators."""
    if n < 1:
        return 0
    total = sum(mobius(k) * d ** (n // k) for k in range(1, n + 1) if n % k == 0)
    return total // n


@lru_cache(maxsize=None)
def _hall_set(d: int, n: int) -> tuple:
    """Basic commutators of weight ``<= n`` in their fixed total order."""
    if n == 1:
        return tuple(range(d))
    prev = _hall_set(d, n - 1)
    pos = {t: i for i, t in enumerate(prev)}
    by_deg: dict[int, list] = {}
    for t in prev:
        by_deg.setdefault(degree(t), []).append(t)
    new = []
    for k in range(1, n):
        # [u, v] with deg u = k, deg v = n - k, u > v, and u = [s, t] implies t <= v
        for u in by_deg.get(k, []):
            for v in by_deg.get(n - k, []):
                if pos[u] <= pos[v]:
                    continue
                if not isinstance(u, int) and pos[u[1]] > pos[v]:
                    continue
                new.append((u, v))
    return prev + tuple(new)


def mirror(tree):
    """Swap the two sides of every bracket; changes the element by a sign."""
    if isinstance(tree, int):
        return tree
    return (mirror(tree[1]), mirror(tree[0]))


def hall_basis(d: int, n: int) -> list:
    """Hall basis of the degree-``n`` component of the free Lie algebra on ``d`` letters.

    Basic commutators are built with the larger factor on the left and then
    mirrored, so the degree-2 elements read ``[x_i, x_j]`` with ``i < j``.
    """
    if d < 1 or n < 1:
        return []
    return [mirror(t) for t in _hall_set(d, n) if degree(t) == n]


def words(d: int, n: int):
    """All words of length ``n`` over ``range(d)`` in lexicographic order."""
    return product(range(d), repeat=n)


def word_index(w, d: int) -> int:
    i = 0
    for x in w:
        i = i * d + x
    return i


def tensor_vector(t: dict, d: int) -> dict:
    """Flatten a homogeneous tensor element into coordinates over ``d**n`` words."""
    return {word_index(w, d): c for w, c in t.items()}


def left_normed(word) -> object:
    """``[[[w1,w2],w3],...]`` as a bracket word."""
    t = word[0]
    for x in word[1:]:
        t = (t, x)
    return t


def left_normed_rank(field: Field, d: int, n: int) -> int:
    """Rank of all left-normed brackets of length ``n`` inside the tensor space."""
    vecs = [tensor_vector(expand_tree(field, left_normed(w)), d) for w in words(d, n)]
    return Subspace.span(field, d**n, vecs).dim
