"""Dense exact linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  All
arithmetic stays integral, so the results are exact; numpy is used purely
for speed of the row operations inside the solver loops.
"""

import numpy as np


def _as_array(mat):
    a = np.array(mat, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a


def _inv_mod(a, p):
    return pow(int(a), p - 2, p)


def rref(mat, p):
    """Reduced row echelon form mod p.  Returns (R, pivot_columns)."""
    a = _as_array(mat) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(a[r, c], p)) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat, p):
    if _as_array(mat).size == 0:
        return 0
    _, piv = rref(mat, p)
    return len(piv)


def kernel_basis(mat, p):
    """Basis of the right kernel {x : mat @ x = 0 mod p}, as a list of vectors."""
    a = _as_array(mat)
    rows, cols = a.shape
    if cols == 0:
        return []
    if rows == 0:
        return [np.eye(cols, dtype=np.int64)[i] for i in range(cols)]
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-r[i, f]) % p
        basis.append(v)
    return basis


def solve(mat, rhs, p):
    """One solution of mat @ x = rhs mod p, or None if inconsistent."""
    a = _as_array(mat) % p
    b = np.array(rhs, dtype=np.int64).reshape(-1) % p
    rows, cols = a.shape
    aug = np.hstack([a, b.reshape(-1, 1)])
    r, pivots = rref(aug, p)
    for i in range(len(pivots)):
        if pivots[i] == cols:
            return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, cols]
    return x


class BatchSolver:
    """RREF once, then solve many right-hand sides against the same matrix.

    Augmenting with the identity records the row transform T with T @ A in
    RREF; a system A x = b is consistent iff (T b) vanishes beyond the rank."""

    def __init__(self, mat, p):
        self.p = p
        a = _as_array(mat) % p
        self.rows, self.cols = a.shape
        aug = np.hstack([a, np.eye(self.rows, dtype=np.int64)])
        raug, pivots = rref(aug, p)
        self.pivots = [c for c in pivots if c < self.cols]
        self.rank = len(self.pivots)
        self.transform = raug[:, self.cols:]

    def solve(self, rhs):
        c = (self.transform @ (np.array(rhs, dtype=np.int64).reshape(-1) % self.p)) % self.p
        if np.any(c[self.rank:]):
            return None
        x = np.zeros(self.cols, dtype=np.int64)
        for i, col in enumerate(self.pivots):
            x[col] = c[i]
        return x


def in_span(vectors, target, p):
    """Is target an F_p-combination of the given vectors?"""
    if not vectors:
        return not np.any(np.array(target, dtype=np.int64) % p)
    a = np.stack([np.asarray(v, dtype=np.int64) for v in vectors], axis=1)
    return solve(a, target, p) is not None
