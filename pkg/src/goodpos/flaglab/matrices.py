"""Batched matrix arithmetic over a :class:`Gf` and tables of ``GL_n(F_q)``.

Matrices are ``int64`` arrays of shape ``(..., n, n)`` holding field
elements.  A matrix code is ``sum(e_i * q**i)`` over the row-major
entries; group elements are sorted by code.
"""
from __future__ import annotations

import itertools
import math
import os
from functools import lru_cache

import numpy as np

from ..errors import ConfigurationError, DomainError, ResourceError
from .gf import Gf, field

MAX_GROUP_ORDER = 25_000
MAX_CODE_SPACE = 1 << 22
CACHE_ENV = "GOODPOS_CACHE_DIR"
CACHE_FORMAT = 1


def gl_order(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            s = -s
    return s


class MatOps:
    """Vectorized matrix operations over one field."""

    def __init__(self, F: Gf, n: int):
        self.F = F
        self.n = n
        self.q = F.q
        self._prime = F.k == 1
        self.powers = np.array([F.q**i for i in range(n * n)], dtype=np.int64)
        self._perms = [(p, _perm_sign(p)) for p in itertools.permutations(range(n))]

    # elementwise
    def add(self, a, b):
        if self._prime:
            return (a + b) % self.q
        return self.F.add_table[a, b]

    def mul_el(self, a, b):
        if self._prime:
            return (a * b) % self.q
        return self.F.mul_table[a, b]

    def neg(self, a):
        return self.F.neg_table[a]

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self._prime:
            return np.matmul(A, B) % self.q
        n = self.n
        out = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        M, S = self.F.mul_table, self.F.add_table
        for i in range(n):
            for j in range(n):
                acc = M[A[..., i, 0], B[..., 0, j]]
                for k in range(1, n):
                    acc = S[acc, M[A[..., i, k], B[..., k, j]]]
                out[..., i, j] = acc
        return out

    def det(self, A):
        A = np.asarray(A, dtype=np.int64)
        total = np.zeros(A.shape[:-2], dtype=np.int64)
        for p, sgn in self._perms:
            term = A[..., 0, p[0]]
            for i in range(1, self.n):
                term = self.mul_el(term, A[..., i, p[i]])
            if sgn < 0:
                term = self.neg(term)
            total = self.add(total, term)
        return total

    def inverse(self, A):
        """Adjugate over determinant; all inputs must be invertible."""
        A = np.asarray(A, dtype=np.int64)
        n = self.n
        d = self.det(A)
        if np.any(d == 0):
            raise DomainError("singular matrix")
        dinv = self.F.inv_table[d]
        if n == 1:
            return dinv[..., None, None]
        sub = MatOps(self.F, n - 1)
        out = np.zeros_like(A)
        rows = list(range(n))
        for i in range(n):
            for j in range(n):
                minor = A[..., [r for r in rows if r != j], :][..., [c for c in rows if c != i]]
                c = sub.det(minor)
                if (i + j) % 2:
                    c = self.neg(c)
                out[..., i, j] = self.mul_el(c, dinv)
        return out

    def frobenius(self, A, q_sub: int):
        return self.F.frobenius_table(q_sub)[np.asarray(A, dtype=np.int64)]

    def code(self, A):
        A = np.asarray(A, dtype=np.int64)
        return A.reshape(A.shape[:-2] + (self.n * self.n,)) @ self.powers

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        digits = (codes[..., None] // self.powers) % self.q
        return digits.reshape(codes.shape + (self.n, self.n))

    def identity(self):
        return np.eye(self.n, dtype=np.int64)

    def all_matrices_with(self, free_mask, fixed=None, values=None):
        """Every matrix equal to ``fixed`` off ``free_mask`` and with entries
        from ``values`` (default: the whole field) on it."""
        n = self.n
        base = self.identity() if fixed is None else np.asarray(fixed, dtype=np.int64)
        vals = np.arange(self.q) if values is None else np.asarray(values, dtype=np.int64)
        pos = [tuple(p) for p in np.argwhere(np.asarray(free_mask, dtype=bool))]
        count = len(vals) ** len(pos)
        if count > MAX_CODE_SPACE:
            raise ResourceError(f"pattern enumeration of {count} matrices exceeds bound")
        out = np.broadcast_to(base, (count, n, n)).copy()
        if pos:
            grid = np.array(list(itertools.product(range(len(vals)), repeat=len(pos))), dtype=np.int64)
            for c, (i, j) in enumerate(pos):
                out[:, i, j] = vals[grid[:, c]]
        return out


def rank(F: Gf, rows) -> int:
    return len(rref(F, rows))


def rref(F: Gf, rows) -> list[list[int]]:
    """Reduced row echelon form (nonzero rows only)."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    out_rows = 0
    for c in range(ncols):
        piv = next((r for r in range(out_rows, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[out_rows], m[piv] = m[piv], m[out_rows]
        inv = F.inv(m[out_rows][c])
        m[out_rows] = [F.mul(inv, x) for x in m[out_rows]]
        for r in range(len(m)):
            if r != out_rows and m[r][c]:
                f = m[r][c]
                m[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[r], m[out_rows])]
        out_rows += 1
        if out_rows == len(m):
            break
    return [row for row in m[:out_rows]]


def mat_inverse(F: Gf, A) -> list[list[int]]:
    n = len(A)
    aug = [list(map(int, A[i])) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    red = rref(F, aug)
    if len(red) < n or any(red[i][i] != 1 for i in range(n)):
        raise DomainError("singular matrix")
    return [row[n:] for row in red]


def mat_mul(F: Gf, A, B) -> list[list[int]]:
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = 0
            for k in range(m):
                if A[i][k] and B[k][j]:
                    acc = F.add(acc, F.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


def permutation_matrix(perm) -> np.ndarray:
    """``w_dot`` with ``w_dot e_j = e_{w(j)}`` for a 1-based one-line ``perm``."""
    n = len(perm)
    m = np.zeros((n, n), dtype=np.int64)
    for j, wj in enumerate(perm):
        m[wj - 1, j] = 1
    return m


class GroupTable:
    """All of ``GL_n(F_q)``, sorted by matrix code, with batched products."""

    def __init__(self, n: int, q: int, max_order: int = MAX_GROUP_ORDER):
        if n < 1:
            raise ConfigurationError("n must be positive")
        order = gl_order(n, q)
        if order > max_order:
            raise ResourceError(f"|GL_{n}(F_{q})| = {order} exceeds bound {max_order}")
        self.n = n
        self.q = q
        self.F = field(q)
        self.ops = MatOps(self.F, n)
        space = q ** (n * n)
        if space > MAX_CODE_SPACE:
            raise ResourceError(f"code space {space} exceeds bound")
        cached = _load_cache(n, q)
        if cached is not None:
            codes, inv = cached
        else:
            codes, inv = self._build(space)
        self.codes = codes
        self.mats = self.ops.decode(codes)
        self.order = len(codes)
        if self.order != order:
            raise AssertionError(f"enumerated {self.order} elements, expected {order}")
        self.lookup = np.full(space, -1, dtype=np.int64)
        self.lookup[codes] = np.arange(self.order)
        if inv is None:
            inv = self.index(self.ops.inverse(self.mats))
            _save_cache(n, q, codes, inv)
        self.inv = inv
        self.identity_index = int(self.lookup[self.ops.code(self.ops.identity())])
        self._bruhat = None

    def _build(self, space):
        chunks = []
        step = 1 << 18
        for start in range(0, space, step):
            c = np.arange(start, min(space, start + step), dtype=np.int64)
            d = self.ops.det(self.ops.decode(c))
            chunks.append(c[d != 0])
        return np.concatenate(chunks), None

    def index(self, mats) -> np.ndarray:
        idx = self.lookup[self.ops.code(mats)]
        if np.any(idx < 0):
            raise DomainError("matrix not in the group")
        return idx

    def index_of(self, mat) -> int:
        return int(self.index(np.asarray(mat, dtype=np.int64)))

    def mul(self, a, b) -> np.ndarray:
        """Indices of products ``a * b`` (broadcast over index arrays)."""
        return self.index(self.ops.matmul(self.mats[a], self.mats[b]))

    def conj(self, x, h) -> np.ndarray:
        """``x h x^{-1}``."""
        return self.mul(self.mul(x, h), self.inv[x])

    def filter(self, pred) -> np.ndarray:
        """Indices of the elements whose matrices satisfy the batched predicate."""
        return np.nonzero(pred(self.mats))[0]

    def bruhat_indices(self) -> np.ndarray:
        """Bruhat cell of every element as a row-major code of the permutation."""
        if self._bruhat is None:
            from .flags import bruhat_perm

            F = self.F
            n = self.n
            radix = np.array([n**i for i in range(n)], dtype=np.int64)
            out = np.empty(self.order, dtype=np.int64)
            for i, m in enumerate(self.mats.tolist()):
                out[i] = int(np.dot(bruhat_perm(F, m), radix))
            self._bruhat = out
        return self._bruhat

    def perm_code(self, perm0) -> int:
        """Code used by :meth:`bruhat_indices` for a 0-based one-line permutation."""
        return sum(v * self.n**i for i, v in enumerate(perm0))


@lru_cache(maxsize=None)
def group_table(n: int, q: int) -> GroupTable:
    return GroupTable(n, q)


def _cache_path(n, q):
    d = os.environ.get(CACHE_ENV)
    if not d:
        return None
    return os.path.join(d, f"gl_{n}_{q}_v{CACHE_FORMAT}.npz")


def _load_cache(n, q):
    path = _cache_path(n, q)
    if path is None or not os.path.exists(path):
        return None
    try:
        with np.load(path) as z:
            if int(z["format"]) != CACHE_FORMAT:
                return None
            return z["codes"], z["inv"]
    except (OSError, KeyError, ValueError):
        return None


def _save_cache(n, q, codes, inv):
    path = _cache_path(n, q)
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp.npz"
    np.savez_compressed(tmp, codes=codes, inv=inv, format=CACHE_FORMAT)
    os.replace(tmp, path)
