"""Standard presentations used throughout: free, abelian and one-relator algebras."""

from itertools import combinations

from .linalg import QQ
from .presentation import DEFAULT_TRUNCATION, LiePresentation


def _letters(d, prefix="x"):
    if d <= 3 and prefix == "x":
        return ["x", "y", "z"][:d]
    return [f"{prefix}{i + 1}" for i in range(d)]


def free(d, field=QQ, N=DEFAULT_TRUNCATION, names=None):
    """Free Lie algebra on ``d`` generators."""
    return LiePresentation(field, names or _letters(d), [], N, f"free{d}")


def abelian(d, field=QQ, N=DEFAULT_TRUNCATION, names=None):
    """Abelian Lie algebra on ``d`` generators: all brackets of generators vanish."""
    names = names or _letters(d)
    rels = [{(i, j): 1} for i, j in combinations(range(d), 2)]
    return LiePresentation(field, names, rels, N, f"abelian{d}")


def one_relator(d, field=QQ, N=DEFAULT_TRUNCATION):
    """Generators ``x1,y1,...,xd,yd`` with the single relation ``sum_i [xi, yi]``."""
    if d == 1:
        names = ["x", "y"]
    else:
        names = [n for i in range(1, d + 1) for n in (f"x{i}", f"y{i}")]
    rel = {(2 * i, 2 * i + 1): 1 for i in range(d)}
    return LiePresentation(field, names, [rel], N, f"onerel{d}")


def cubic(field=QQ, N=DEFAULT_TRUNCATION):
    """Two generators with one cubic relation ``[x,[x,y]]``: not quadratic."""
    return LiePresentation(field, ["x", "y"], [{(0, (0, 1)): 1}], N, "cubic")
