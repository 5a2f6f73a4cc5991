"""Rational points of parabolic Lusztig and Deligne-Lusztig varieties.

``Y = {(g, P) : (P, g P g^{-1}) in relative position w}`` with its
covering ``Ytilde``, stored in the form ``{(g, g' . wU_I) : g'^{-1} g g' in
w_dot U_I}`` where ``wU_I = U_I cap w_dot U_I w_dot^{-1}``.

``X = {P : (P, F(P)) in relative position w}`` over ``F_{q^k}`` with
covering ``Xtilde = {g' U_I : g'^{-1} F(g') in U_I w_dot U_I}``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from ..errors import ConfigurationError, ResourceError
from ..goodrep import GoodRepCertificate
from ..weyl import min_double_coset_rep
from .flags import FlagPoint, blocks, enumerate_flags, num_flags, relative_position
from .gf import field
from .matrices import MAX_GROUP_ORDER, MatOps, gl_order, permutation_matrix
from .subgroups import (
    CertContext,
    PatternMasks,
    is_unipotent_radical,
    member,
)

MAX_FLAGS = 1_000
MAX_LEVI_ORDER = 200_000
CHUNK = 1 << 16


def check_Y_bounds(n: int, q: int) -> None:
    """Sizes accepted by the ``Y`` enumerations."""
    if n < 2:
        raise ConfigurationError("n must be at least 2")
    order = gl_order(n, q)
    if order > MAX_GROUP_ORDER:
        raise ResourceError(f"|GL_{n}(F_{q})| = {order} exceeds {MAX_GROUP_ORDER}")
    if num_flags(q, n, ()) > MAX_FLAGS:
        raise ResourceError(f"more than {MAX_FLAGS} flags")


def mdr_table(ctx: CertContext, I=None) -> dict[int, int]:
    """Bruhat permutation code -> index of its minimal ``(I, I)`` double coset rep."""
    I = ctx.I if I is None else frozenset(I)
    g = ctx.cert.group
    out = {}
    for perm in itertools.permutations(range(ctx.n)):
        w = g.from_one_line(tuple(v + 1 for v in perm))
        out[ctx.G.perm_code(perm)] = min_double_coset_rep(I, w, I).index
    return out


def relpos_mask(ctx: CertContext, I=None, target=None) -> np.ndarray:
    """Boolean mask over ``G``: ``(P_I, g P_I)`` is in relative position ``target``."""
    tab = mdr_table(ctx, I)
    target = ctx.cert.w.index if target is None else target
    codes = ctx.G.bruhat_indices()
    keys = np.array(sorted(tab), dtype=np.int64)
    vals = np.array([tab[k] for k in keys], dtype=np.int64)
    return vals[np.searchsorted(keys, codes)] == target


@dataclass
class YTilde:
    """Points of ``Ytilde`` keyed as ``g * ncos + coset``."""

    ctx: CertContext
    ckey: np.ndarray  # coset of x . wU_I, as rank among coset reps
    reps: np.ndarray  # minimal element of each coset
    points: np.ndarray  # sorted keys

    @property
    def ncos(self) -> int:
        return len(self.reps)

    def key(self, g, cos):
        return np.asarray(g, dtype=np.int64) * self.ncos + np.asarray(cos, dtype=np.int64)

    def decode(self, key):
        key = np.asarray(key, dtype=np.int64)
        return key // self.ncos, key % self.ncos

    @property
    def base_coset(self) -> int:
        return int(self.ckey[self.ctx.G.identity_index])

    def act(self, xs, key) -> np.ndarray:
        """Keys of ``x . (g, r wU_I)`` for every ``x`` in ``xs``."""
        G = self.ctx.G
        g, c = self.decode(key)
        r = self.reps[c]
        return self.key(G.conj(xs, g), self.ckey[G.mul(xs, r)])


def coset_keys(ctx: CertContext, H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rank of ``x H`` among the cosets, and the minimal element of each coset."""
    G = ctx.G
    xs = np.arange(G.order)
    mins = np.full(G.order, np.iinfo(np.int64).max, dtype=np.int64)
    for h in H:
        mins = np.minimum(mins, G.mul(xs, np.array([h])))
    reps = np.unique(mins)
    return np.searchsorted(reps, mins), reps


def enumerate_Ytilde(ctx: CertContext) -> YTilde:
    G = ctx.G
    ckey, reps = coset_keys(ctx, ctx.wU_I)
    wv = G.mul(np.array([ctx.wdot_idx]), ctx.U_I)
    chunks = []
    step = max(1, CHUNK // max(1, len(wv)))
    for start in range(0, len(reps), step):
        r = reps[start : start + step]
        g = G.conj(r[:, None], wv[None, :])
        cos = np.broadcast_to(np.arange(start, start + len(r))[:, None], g.shape)
        chunks.append((g * len(reps) + cos).ravel())
    points = np.unique(np.concatenate(chunks))
    return YTilde(ctx, ckey, reps, points)


def count_Ytilde_double_coset(ctx: CertContext) -> int:
    """``|G / U_I| * |U_I w_dot U_I|`` from the explicit double coset."""
    G = ctx.G
    return (G.order // len(ctx.U_I)) * len(ctx.UIwUI)


@dataclass
class YData:
    ctx: CertContext
    D: np.ndarray  # g with (P_I, g P_I) in position w
    num_flags: int
    count_by_flags: int

    @property
    def size(self) -> int:
        return self.num_flags * len(self.D)


def flag_reps(ctx: CertContext, I=None) -> np.ndarray:
    """Group elements ``x`` with ``x . P_I`` running over all flags of type ``I``."""
    I = ctx.I if I is None else I
    flags = enumerate_flags(ctx.G.F, ctx.n, I, limit=MAX_FLAGS)
    return np.array([ctx.G.index_of(f.basis_matrix(ctx.G.F)) for f in flags], dtype=np.int64)


def enumerate_Y(ctx: CertContext) -> YData:
    """``Y`` via the cell ``D`` and, independently, by scanning every flag."""
    G = ctx.G
    mask = relpos_mask(ctx)
    D = np.nonzero(mask)[0]
    xs = flag_reps(ctx)
    allg = np.arange(G.order)
    total = 0
    for x in xs:
        # (x P_I, g x P_I) in position w iff x^{-1} g x in D
        total += int(mask[G.conj(np.array([G.inv[x]]), allg)].sum())
    return YData(ctx, D, len(xs), total)


# --- X over F_{q^k} ---------------------------------------------------------


@dataclass
class XData:
    n: int
    q: int
    k: int
    cert: GoodRepCertificate
    flags: list  # points of X
    lifts: list  # per flag: array of g' (matrices) with g'^{-1} F(g') in U_I w U_I
    coset_keys: np.ndarray  # minimal code over g' U_I per Xtilde point
    points: np.ndarray  # Xtilde as matrices, aligned with coset_keys
    group_F: np.ndarray  # GL_n(F_q) inside GL_n(F_{q^k})
    ops: MatOps = dc_field(repr=False)
    U_I: np.ndarray = dc_field(repr=False, default=None)

    @property
    def num_X(self) -> int:
        return len(self.flags)

    @property
    def num_Xtilde(self) -> int:
        return len(self.coset_keys)

    @property
    def lifted_flags(self) -> int:
        return sum(1 for x in self.lifts if len(x))


def _invertible(ops: MatOps, M):
    return M[ops.det(M) != 0]


def levi_points(ops: MatOps, n: int, I) -> np.ndarray:
    """All of ``L_I`` over the field of ``ops``."""
    m = PatternMasks(n, I)
    size = ops.q ** int(m.same_block.sum())
    if size > MAX_LEVI_ORDER * 2:
        raise ResourceError(f"Levi enumeration of {size} matrices exceeds bound")
    cand = ops.all_matrices_with(m.same_block, fixed=np.zeros((n, n), dtype=np.int64))
    return _invertible(ops, cand)


def unipotent_radical_points(ops: MatOps, n: int, I) -> np.ndarray:
    m = PatternMasks(n, I)
    return ops.all_matrices_with(m.above_blocks)


def check_X_bounds(n: int, q: int, k: int) -> None:
    if n < 2:
        raise ConfigurationError("n must be at least 2")
    if k < 1:
        raise ConfigurationError("k must be positive")
    if gl_order(n, q) > MAX_GROUP_ORDER:
        raise ResourceError(f"|GL_{n}(F_{q})| exceeds {MAX_GROUP_ORDER}")
    if num_flags(q**k, n, ()) > MAX_FLAGS:
        raise ResourceError(f"more than {MAX_FLAGS} flags over F_{q**k}")


def enumerate_X(n: int, q: int, k: int, cert: GoodRepCertificate) -> XData:
    check_X_bounds(n, q, k)
    if cert.group.rs.rank != n - 1:
        raise ConfigurationError("certificate rank does not match n")
    F = field(q**k)
    if F.q % q or field(q).p != F.p:
        raise ConfigurationError(f"F_{q} is not a subfield of F_{q**k}")
    ops = MatOps(F, n)
    I = frozenset(cert.I)
    w = cert.w
    flags = [
        P
        for P in enumerate_flags(F, n, I, limit=MAX_FLAGS)
        if relative_position(F, P, P.frobenius(F, q)) == w
    ]
    wdot = permutation_matrix(cert.group.one_line(w))
    UI = unipotent_radical_points(ops, n, I)
    H = np.unique(ops.code(ops.matmul(ops.matmul(UI[:, None], wdot), UI[None, :])))
    L = levi_points(ops, n, I)
    if len(L) > MAX_LEVI_ORDER:
        raise ResourceError(f"|L_I(F_{q**k})| = {len(L)} exceeds {MAX_LEVI_ORDER}")
    lifts = []
    for P in flags:
        x = np.array(P.basis_matrix(F), dtype=np.int64)
        gp = ops.matmul(x, L)
        h = ops.matmul(ops.inverse(gp), ops.frobenius(gp, q))
        lifts.append(gp[np.isin(ops.code(h), H)])
    pts = np.concatenate(lifts) if lifts else np.zeros((0, n, n), dtype=np.int64)
    keys = np.full(len(pts), np.iinfo(np.int64).max, dtype=np.int64)
    for u in UI:
        keys = np.minimum(keys, ops.code(ops.matmul(pts, u)))
    sub = field(q)
    vals = np.array(F.subfield(q), dtype=np.int64)
    if len(vals) != sub.q:
        raise AssertionError("subfield has the wrong size")
    GF = _invertible(ops, ops.all_matrices_with(np.ones((n, n), dtype=bool), values=vals))
    if len(GF) != gl_order(n, q):
        raise AssertionError("GL_n(F_q) enumeration has the wrong size")
    return XData(n, q, k, cert, flags, lifts, keys, pts, GF, ops, UI)
