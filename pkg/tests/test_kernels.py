import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gradedlie import kernels
from gradedlie.linalg import GF, _rref_sparse, rref_rows


def _dense(rows, n):
    return sorted(tuple(sorted(r.items())) for r in rows)


@given(st.integers(1, 30), st.integers(1, 30), st.sampled_from([2, 3, 7, 32003]), st.integers(0, 10**6))
def test_backends_agree_with_sparse(n, m, p, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(n, m)).astype(np.int64)
    a[rng.random((n, m)) < 0.5] = 0
    rows = [{int(k): int(a[i, k]) for k in np.flatnonzero(a[i])} for i in range(n)]
    ref_rows, ref_piv = _rref_sparse(GF(p), rows)
    for name in kernels.available():
        out, piv = kernels.rref_sparse_rows_modp(rows, m, p, backend=name)
        assert piv == ref_piv
        assert _dense(out, m) == _dense(ref_rows, m)


def test_compiled_matches_numpy_large():
    if "compiled" not in kernels.available():
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(1)
    a = rng.integers(0, 101, size=(120, 150)).astype(np.int64)
    b = a.copy()
    assert kernels.rref_dense_modp(a, 101, "compiled") == kernels.rref_dense_modp(b, 101, "python")
    assert np.array_equal(a, b)


def test_dispatch_is_transparent():
    F = GF(5)
    rng = np.random.default_rng(2)
    a = rng.integers(0, 5, size=(80, 90))
    rows = [{int(k): int(a[i, k]) for k in np.flatnonzero(a[i])} for i in range(80)]
    assert kernels.use_dense(80, 90, sum(len(r) for r in rows))
    dense = rref_rows(F, rows, 90)
    old = kernels.set_dense(False)
    try:
        sparse = rref_rows(F, rows, 90)
    finally:
        kernels.set_dense(old)
    assert dense[1] == sparse[1] and _dense(dense[0], 90) == _dense(sparse[0], 90)


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_env_forces_fallback():
    env = dict(os.environ, GRADEDLIE_KERNEL="python")
    out = subprocess.run(
        [sys.executable, "-c", "from gradedlie import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
