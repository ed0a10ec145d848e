"""Row-elimination rank over a word-sized prime field.

The hot loop is compiled with numba when available (products of two
residues below 2^31 fit comfortably in int64); a numpy fallback keeps
the package importable without a compiler.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def _rank_mod_p_numpy(A: np.ndarray, p: int) -> int:
    """Vectorized elimination; A is int64 and modified in place."""
    m, n = A.shape
    r = 0
    for c in range(n):
        col = A[r:, c] % p
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv], :] = A[[piv, r], :]
        inv = pow(int(A[r, c]) % p, -1, p)
        A[r, :] = (A[r, :] * inv) % p
        below = A[r + 1 :, c] % p
        rows = np.nonzero(below)[0]
        if rows.size:
            A[r + 1 + rows, :] = (
                A[r + 1 + rows, :] - below[rows, None] * A[r, :]
            ) % p
        r += 1
        if r == m:
            break
    return r


def _rank_mod_p_scalar(A: np.ndarray, p: int) -> int:
    m, n = A.shape
    r = 0
    for c in range(n):
        piv = -1
        for i in range(r, m):
            if A[i, c] % p != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
        # modular inverse by binary exponentiation
        inv = 1
        b = A[r, c] % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = (inv * b) % p
            b = (b * b) % p
            e >>= 1
        for j in range(c, n):
            A[r, j] = (A[r, j] * inv) % p
        for i in range(r + 1, m):
            f = A[i, c] % p
            if f != 0:
                for j in range(c, n):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
        r += 1
        if r == m:
            break
    return r


if HAVE_NUMBA:
    rank_mod_p_inplace = njit(cache=True)(_rank_mod_p_scalar)
else:  # pragma: no cover
    rank_mod_p_inplace = _rank_mod_p_numpy
