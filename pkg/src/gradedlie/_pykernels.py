"""Dense row reduction modulo a word-sized prime, vectorised with numpy.

This is the fallback used when the compiled extension is unavailable.  It
has the same interface as ``gradedlie._kernels``.
"""

import numpy as np


def rref_modp(a, p):
    """Reduce the int64 matrix ``a`` in place to reduced echelon form mod ``p``.

    Entries must already lie in ``range(p)``.  Returns the number of pivot
    rows; those rows occupy the top of ``a`` and the remaining rows are zero.
    The pivot columns can be read off as the first nonzero of each row.
    """
    a %= p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), -1, p)
        row = a[r, c:] * inv % p
        a[r, c:] = row
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[np.ix_(hit, np.arange(c, ncols))] = (
                a[np.ix_(hit, np.arange(c, ncols))] - np.outer(col[hit], row) % p
            ) % p
        r += 1
    return r
