"""Bruhat cells, partial flags and relative positions for ``GL_n``.

Simple reflection ``s_i`` (0-based) swaps basis vectors ``i`` and ``i+1``;
a subset ``I`` of simple reflections determines the standard parabolic
``P_I`` of block upper-triangular matrices whose diagonal blocks are the
maximal runs joined by ``I``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import DomainError
from ..weyl import WeylElement, WeylGroup, min_double_coset_rep, weyl_group
from .gf import Gf
from .matrices import mat_inverse, mat_mul, rref


def bruhat_perm(F: Gf, x) -> tuple[int, ...]:
    """0-based one-line ``w`` with ``x`` in ``B w_dot B`` (``B`` upper triangular).

    Column ``j`` is reduced by earlier columns (right multiplication by
    ``B``); its lowest nonzero entry then sits in row ``w(j)``.
    """
    m = [list(map(int, row)) for row in x]
    n = len(m)
    perm = []
    for j in range(n):
        r = next((i for i in range(n - 1, -1, -1) if m[i][j]), None)
        if r is None:
            raise DomainError("singular matrix")
        perm.append(r)
        inv = F.inv(m[r][j])
        for k in range(j + 1, n):
            if m[r][k]:
                f = F.mul(m[r][k], inv)
                for i in range(n):
                    if m[i][j]:
                        m[i][k] = F.sub(m[i][k], F.mul(f, m[i][j]))
    return tuple(perm)


def bruhat_position(F: Gf, x) -> WeylElement:
    n = len(x)
    if n < 2:
        raise DomainError("n must be at least 2")
    g = weyl_group("A", n - 1)
    return g.from_one_line(tuple(v + 1 for v in bruhat_perm(F, x)))


def blocks(n: int, I) -> list[tuple[int, ...]]:
    """Diagonal blocks of the standard Levi ``L_I``."""
    out, cur = [], [0]
    for i in range(1, n):
        if i - 1 in I:
            cur.append(i)
        else:
            out.append(tuple(cur))
            cur = [i]
    out.append(tuple(cur))
    return out


def flag_dims(n: int, I) -> tuple[int, ...]:
    """Dimensions of the proper subspaces in a flag of type ``I``."""
    return tuple(i + 1 for i in range(n - 1) if i not in set(I))


@dataclass(frozen=True)
class FlagPoint:
    """Chain of subspaces of ``F^n``, each in reduced row echelon form."""

    n: int
    I: frozenset[int]
    chain: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        dims = flag_dims(self.n, self.I)
        if tuple(len(V) for V in self.chain) != dims:
            raise DomainError("subspace dimensions do not match the flag type")

    @classmethod
    def from_matrix(cls, F: Gf, x, I) -> "FlagPoint":
        """The flag ``x . P_I``: spans of leading columns of ``x``."""
        n = len(x)
        cols = [[int(x[i][j]) for i in range(n)] for j in range(n)]
        chain = []
        for d in flag_dims(n, I):
            red = rref(F, cols[:d])
            if len(red) != d:
                raise DomainError("matrix is singular")
            chain.append(tuple(tuple(r) for r in red))
        return cls(n, frozenset(I), tuple(chain))

    @classmethod
    def standard(cls, F: Gf, n: int, I) -> "FlagPoint":
        return cls.from_matrix(F, [[int(i == j) for j in range(n)] for i in range(n)], I)

    def basis_matrix(self, F: Gf) -> list[list[int]]:
        """An ``x`` with ``x . P_I`` equal to this flag (columns adapted to the chain)."""
        vecs: list[list[int]] = []
        for V in list(self.chain) + [tuple(tuple(int(i == j) for j in range(self.n)) for i in range(self.n))]:
            for v in V:
                if len(rref(F, vecs + [list(v)])) > len(vecs):
                    vecs.append(list(v))
        return [[vecs[j][i] for j in range(self.n)] for i in range(self.n)]

    def apply(self, F: Gf, g) -> "FlagPoint":
        x = self.basis_matrix(F)
        return FlagPoint.from_matrix(F, mat_mul(F, [list(map(int, r)) for r in g], x), self.I)

    def frobenius(self, F: Gf, q_sub: int) -> "FlagPoint":
        tab = F.frobenius_table(q_sub).tolist()
        return FlagPoint(
            self.n,
            self.I,
            tuple(tuple(tuple(tab[a] for a in row) for row in V) for V in self.chain),
        )


def relative_position(F: Gf, P: FlagPoint, Q: FlagPoint) -> WeylElement:
    """Minimal representative of the double coset of ``x^{-1} y`` in ``W_I \\ W / W_J``."""
    if P.n != Q.n:
        raise DomainError("flags live in different spaces")
    x = P.basis_matrix(F)
    y = Q.basis_matrix(F)
    w = bruhat_position(F, mat_mul(F, mat_inverse(F, x), y))
    return min_double_coset_rep(P.I, w, Q.I)


def _subspaces(F: Gf, n: int, d: int):
    """All ``d``-dimensional subspaces as RREF row tuples."""
    for pivots in itertools.combinations(range(n), d):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for vals in itertools.product(range(F.q), repeat=len(free)):
            rows = [[0] * n for _ in range(d)]
            for r, p in enumerate(pivots):
                rows[r][p] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


def enumerate_flags(F: Gf, n: int, I, limit: int | None = None) -> list[FlagPoint]:
    """Every flag of type ``I`` over ``F``."""
    from ..errors import ResourceError

    I = frozenset(I)
    dims = flag_dims(n, I)
    by_dim = {d: list(_subspaces(F, n, d)) for d in dims}
    out: list[FlagPoint] = []

    def contains(big, small):
        return len(rref(F, [list(r) for r in big] + [list(r) for r in small])) == len(big)

    def rec(i, acc):
        if limit is not None and len(out) > limit:
            raise ResourceError(f"more than {limit} flags of type {sorted(I)}")
        if i == len(dims):
            out.append(FlagPoint(n, I, tuple(acc)))
            return
        for V in by_dim[dims[i]]:
            if not acc or contains(V, acc[-1]):
                rec(i + 1, acc + [V])

    rec(0, [])
    return out


def num_flags(q: int, n: int, I) -> int:
    """``|G/P_I|`` as a product of Gaussian multinomials."""
    def qfact(m):
        out = 1
        for i in range(1, m + 1):
            out *= (q**i - 1) // (q - 1)
        return out

    total = qfact(n)
    for b in blocks(n, I):
        total //= qfact(len(b))
    return total


def weyl_of(n: int) -> WeylGroup:
    return weyl_group("A", n - 1)
