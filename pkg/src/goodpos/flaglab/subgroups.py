"""Rational points of the subgroups attached to a certificate ``(w, I)``.

Everything is a sorted array of indices into a :class:`GroupTable`,
obtained by filtering the whole group with the defining condition.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from ..errors import ConfigurationError, DomainError
from ..goodrep import GoodRepCertificate
from .flags import blocks
from .matrices import GroupTable, MatOps, group_table, permutation_matrix


def block_ids(n: int, I) -> np.ndarray:
    ids = np.zeros(n, dtype=np.int64)
    for b, blk in enumerate(blocks(n, I)):
        ids[list(blk)] = b
    return ids


class PatternMasks:
    """Boolean position masks for the standard subgroups of ``GL_n``."""

    def __init__(self, n: int, I):
        self.n = n
        self.I = frozenset(I)
        bid = block_ids(n, I)
        r, c = np.indices((n, n))
        self.eye = r == c
        self.strict_upper = r < c
        self.strict_lower = r > c
        self.same_block = bid[r] == bid[c]
        self.below_blocks = bid[r] > bid[c]
        self.above_blocks = bid[r] < bid[c]


def _all(cond) -> np.ndarray:
    return np.all(cond, axis=(-2, -1))


def is_diagonal(M, m: PatternMasks):
    return _all((M == 0) | m.eye)


def is_upper(M, m: PatternMasks):
    return _all((M == 0) | ~m.strict_lower)


def is_upper_unitriangular(M, m: PatternMasks):
    return is_upper(M, m) & _all(~m.eye | (M == 1))


def is_lower_unitriangular(M, m: PatternMasks):
    return _all((M == 0) | ~m.strict_upper) & _all(~m.eye | (M == 1))


def is_parabolic(M, m: PatternMasks):
    return _all((M == 0) | ~m.below_blocks)


def is_levi(M, m: PatternMasks):
    return _all((M == 0) | m.same_block)


def is_unipotent_radical(M, m: PatternMasks):
    """``U_I``: identity on the diagonal blocks, zero below them."""
    ident = np.eye(m.n, dtype=M.dtype)
    return is_parabolic(M, m) & _all(~m.same_block | (M == ident))


def levi_part(M, m: PatternMasks):
    """Block-diagonal part; a homomorphism ``P_I -> L_I``."""
    return np.where(m.same_block, M, 0)


class CertContext:
    """A certificate of ``S_n`` together with ``G = GL_n(F_q)``."""

    def __init__(self, cert: GoodRepCertificate, q: int, table: GroupTable | None = None):
        rs = cert.group.rs
        if rs.type_label != "A":
            raise ConfigurationError("flag checks require a certificate of type A")
        if not cert.twist.is_identity:
            raise ConfigurationError("flag checks require the untwisted case")
        self.cert = cert
        self.n = rs.rank + 1
        self.q = q
        self.G = table if table is not None else group_table(self.n, q)
        self.ops: MatOps = self.G.ops
        self.I = frozenset(cert.I)
        self.perm = tuple(cert.group.one_line(cert.w))
        self.w0 = np.array([v - 1 for v in self.perm])
        self.wdot = permutation_matrix(self.perm)
        self.wdot_idx = self.G.index_of(self.wdot)
        self.winv_idx = int(self.G.inv[self.wdot_idx])
        self.masks = PatternMasks(self.n, self.I)
        self.full = PatternMasks(self.n, ())
        self.fixed_points = tuple(i for i in range(self.n) if self.w0[i] == i)

    # conjugation by permutation matrices
    def conj_winv(self, M):
        """``w_dot^{-1} M w_dot``."""
        return self.ops.matmul(self.ops.matmul(self.G.mats[self.winv_idx], M), self.wdot)

    def conj_w(self, M):
        """``w_dot M w_dot^{-1}``."""
        return self.ops.matmul(self.ops.matmul(self.wdot, M), self.G.mats[self.winv_idx])

    def _filter(self, pred) -> np.ndarray:
        return self.G.filter(pred)

    @cached_property
    def B(self):
        return self._filter(lambda M: is_upper(M, self.full))

    @cached_property
    def T(self):
        return self._filter(lambda M: is_diagonal(M, self.full))

    @cached_property
    def U(self):
        return self._filter(lambda M: is_upper_unitriangular(M, self.full))

    @cached_property
    def U_minus(self):
        return self._filter(lambda M: is_lower_unitriangular(M, self.full))

    @cached_property
    def P_I(self):
        return self._filter(lambda M: is_parabolic(M, self.masks))

    @cached_property
    def L_I(self):
        return self._filter(lambda M: is_levi(M, self.masks))

    @cached_property
    def U_I(self):
        return self._filter(lambda M: is_unipotent_radical(M, self.masks))

    @cached_property
    def T_w(self):
        """``{t in T : w_dot^{-1} t w_dot = t}``."""
        M = self.G.mats[self.T]
        return self.T[_all(self.conj_winv(M) == M)]

    @cached_property
    def U_w(self):
        """``{u in U : w_dot^{-1} u w_dot in U^-}``."""
        M = self.G.mats[self.U]
        return self.U[is_lower_unitriangular(self.conj_winv(M), self.full)]

    @cached_property
    def wU_I(self):
        """``U_I cap w_dot U_I w_dot^{-1}``."""
        M = self.G.mats[self.U_I]
        return self.U_I[is_unipotent_radical(self.conj_winv(M), self.masks)]

    @cached_property
    def winvU_I(self):
        """``U_I cap w_dot^{-1} U_I w_dot``."""
        M = self.G.mats[self.U_I]
        return self.U_I[is_unipotent_radical(self.conj_w(M), self.masks)]

    @cached_property
    def L_w(self):
        """``{l in L_I : w_dot^{-1} l w_dot = l}``."""
        M = self.G.mats[self.L_I]
        return self.L_I[_all(self.conj_winv(M) == M)]

    def _fixed_root_pattern(self, upper: bool):
        fp = set(self.fixed_points)
        n = self.n
        allowed = np.zeros((n, n), dtype=bool)
        for i in fp:
            for j in fp:
                if (i < j) if upper else (i > j):
                    allowed[i, j] = True
        return allowed

    @cached_property
    def U_Rw_plus(self):
        """Generated by root subgroups of positive ``w``-fixed roots."""
        allowed = self._fixed_root_pattern(True)
        M = self.G.mats[self.U]
        return self.U[_all((M == 0) | allowed | self.full.eye)]

    @cached_property
    def U_Rw_minus(self):
        allowed = self._fixed_root_pattern(False)
        M = self.G.mats[self.U_minus]
        return self.U_minus[_all((M == 0) | allowed | self.full.eye)]

    # products
    def product(self, *sets) -> np.ndarray:
        """Distinct elements of ``A_1 A_2 ... A_k``."""
        cur = np.asarray(sets[0])
        for s in sets[1:]:
            cur = np.unique(self.G.mul(cur[:, None], np.asarray(s)[None, :]).ravel())
        return np.unique(cur)

    def U_of(self, perm) -> np.ndarray:
        """``U^v = {u in U : v_dot^{-1} u v_dot in U^-}`` for a 1-based one-line ``v``."""
        vd = permutation_matrix(perm)
        vinv = vd.T.copy()
        M = self.G.mats[self.U]
        C = self.ops.matmul(self.ops.matmul(vinv, M), vd)
        return self.U[is_lower_unitriangular(C, self.full)]

    @cached_property
    def w_prime(self):
        return self.cert.group.longest_element(self.I)

    @cached_property
    def U_b(self):
        """``U^{w'} T^w w'_dot U^{w'w} w'_dot^{-1}``."""
        g = self.cert.group
        wp = self.w_prime
        wpw = wp * self.cert.w
        wp_perm = g.one_line(wp)
        wpd = self.G.index_of(permutation_matrix(wp_perm))
        middle = self.G.conj(np.array([wpd]), self.U_of(g.one_line(wpw)))
        return self.product(self.U_of(wp_perm), self.T_w, np.unique(middle))

    @cached_property
    def slice_points(self):
        """``S_Br(b) = U^b w_dot``."""
        return np.unique(self.G.mul(self.U_b, np.array([self.wdot_idx])))

    @cached_property
    def UIwUI(self):
        return self.product(self.U_I, np.array([self.wdot_idx]), self.U_I)

    def element(self, idx) -> np.ndarray:
        return self.G.mats[idx]

    def check_in(self, idx, subset) -> bool:
        subset = np.asarray(subset)
        pos = np.searchsorted(subset, idx)
        return bool(np.all((pos < len(subset)) & (subset[np.minimum(pos, len(subset) - 1)] == idx)))


def unipotent_pattern(perm) -> np.ndarray:
    """Support of ``U^v`` for a 1-based one-line ``v``: ``i < j`` with ``v^{-1}(i) > v^{-1}(j)``."""
    n = len(perm)
    vinv = [0] * n
    for j, vj in enumerate(perm):
        vinv[vj - 1] = j
    mask = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            mask[i, j] = vinv[i] > vinv[j]
    return mask


def slice_matrices(cert: GoodRepCertificate, ops: MatOps) -> np.ndarray:
    """``S_Br(b) = U^b w_dot`` over the field of ``ops``, built from root patterns.

    Independent of :class:`GroupTable`, so it also runs over extension
    fields too large to tabulate.
    """
    g = cert.group
    n = g.rs.rank + 1
    perm = g.one_line(cert.w)
    wp = g.longest_element(cert.I)
    wp_perm = g.one_line(wp)
    wpw_perm = g.one_line(wp * cert.w)
    wd = permutation_matrix(perm)
    wpd = permutation_matrix(wp_perm)
    A = ops.all_matrices_with(unipotent_pattern(wp_perm))
    mid = ops.all_matrices_with(unipotent_pattern(wpw_perm))
    mid = ops.matmul(ops.matmul(wpd, mid), wpd.T.copy())
    # T^w: diagonal entries constant along the cycles of w
    cyc, seen = [], set()
    for i in range(n):
        if i not in seen:
            c, j = [], i
            while j not in seen:
                seen.add(j)
                c.append(j)
                j = perm[j] - 1
            cyc.append(c)
    units = np.arange(1, ops.q)
    T = np.zeros((len(units) ** len(cyc), n, n), dtype=np.int64)
    for t, vals in enumerate(itertools.product(units, repeat=len(cyc))):
        for c, v in zip(cyc, vals):
            T[t, c, c] = v
    out = np.unique(ops.code(ops.matmul(A[:, None], T[None, :])).ravel())
    cur = ops.decode(out)
    out = np.unique(ops.code(ops.matmul(cur[:, None], mid[None, :])).ravel())
    return ops.matmul(ops.decode(out), wd)


def member(sorted_set: np.ndarray, values) -> np.ndarray:
    values = np.asarray(values)
    if len(sorted_set) == 0:
        return np.zeros(values.shape, dtype=bool)
    pos = np.searchsorted(sorted_set, values)
    pos = np.minimum(pos, len(sorted_set) - 1)
    return sorted_set[pos] == values


def require_group_member(ctx: CertContext, mat) -> int:
    try:
        return ctx.G.index_of(mat)
    except DomainError:
        raise DomainError("matrix is not invertible") from None
