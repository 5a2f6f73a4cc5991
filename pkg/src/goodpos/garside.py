"""Positive braid monoid of a finite Weyl group in left-greedy normal form.

A braid is stored as its sequence of simple factors (indices into the
group's element table).  Adjacent factors ``(u, v)`` are left-weighted when
every left descent of ``v`` is a right descent of ``u``; the normal form is
reached by moving letters ``s`` from ``v`` to ``u`` whenever
``s`` is a left descent of ``v`` but not a right descent of ``u``.
"""
from __future__ import annotations

from .errors import DomainError
from .weyl import Twist, WeylElement, WeylGroup, format_word, twist_table


def _fix_pair(g: WeylGroup, u: int, v: int) -> tuple[int, int]:
    diff = g.ldesc[v] & ~g.rdesc[u]
    while diff:
        s = (diff & -diff).bit_length() - 1
        u = g.rmul[s][u]
        v = g.lmul[s][v]
        diff = g.ldesc[v] & ~g.rdesc[u]
    return u, v


def _append_simple(g: WeylGroup, factors: list[int], y: int) -> None:
    """Right-multiply a normal form (in place) by the simple element ``y``.

    One right-to-left pass suffices; it stops at the first pair that does
    not change because everything to its left was already left-weighted.
    """
    if y == 0:
        return
    factors.append(y)
    for i in range(len(factors) - 2, -1, -1):
        u, v = _fix_pair(g, factors[i], factors[i + 1])
        if u == factors[i]:
            break
        factors[i], factors[i + 1] = u, v
    while factors and factors[-1] == 0:
        factors.pop()


def bubble_normal_form(g: WeylGroup, seq) -> tuple[int, ...]:
    """Normal form of an arbitrary factor sequence by sweeping until stable."""
    f = list(seq)
    changed = True
    while changed:
        changed = False
        for i in range(len(f) - 2, -1, -1):
            u, v = _fix_pair(g, f[i], f[i + 1])
            if (u, v) != (f[i], f[i + 1]):
                f[i], f[i + 1] = u, v
                changed = True
    return tuple(x for x in f if x != 0)


class BraidElement:
    __slots__ = ("group", "_f")

    def __init__(self, group: WeylGroup, factors: tuple[int, ...] = ()):
        self.group = group
        self._f = tuple(factors)

    @classmethod
    def from_factors(cls, group: WeylGroup, factors) -> "BraidElement":
        idx = [f.index if isinstance(f, WeylElement) else int(f) for f in factors]
        return cls(group, bubble_normal_form(group, idx))

    @classmethod
    def from_letters(cls, group: WeylGroup, letters) -> "BraidElement":
        f: list[int] = []
        for s in letters:
            _append_simple(group, f, group.rmul[s][0])
        return cls(group, tuple(f))

    @property
    def factors(self) -> tuple[WeylElement, ...]:
        return tuple(WeylElement(self.group, i) for i in self._f)

    @property
    def factor_indices(self) -> tuple[int, ...]:
        return self._f

    @property
    def canonical_length(self) -> int:
        return len(self._f)

    @property
    def letter_length(self) -> int:
        return sum(self.group.lengths[i] for i in self._f)

    def letters(self) -> tuple[int, ...]:
        return tuple(s for i in self._f for s in self.group.words[i])

    def projection(self) -> WeylElement:
        """Image in ``W`` (product of the factors)."""
        g = self.group
        i = 0
        for f in self._f:
            i = g.mul_index(i, f)
        return WeylElement(g, i)

    def is_identity(self) -> bool:
        return not self._f

    def __mul__(self, other: "BraidElement") -> "BraidElement":
        return braid_multiply(self, other)

    def __pow__(self, k: int) -> "BraidElement":
        out = BraidElement(self.group)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, BraidElement) and other.group is self.group and other._f == self._f

    def __hash__(self):
        return hash((id(self.group), self._f))

    def to_json(self) -> list[str]:
        return [format_word(self.group.words[i]) for i in self._f]

    def __repr__(self):
        return f"BraidElement({self.group.rs.name}, {self.to_json()})"


def is_left_weighted(b: BraidElement) -> bool:
    g = b.group
    f = b._f
    if any(x == 0 for x in f):
        return False
    return all(g.ldesc[v] & ~g.rdesc[u] == 0 for u, v in zip(f, f[1:]))


def embed_simple(w: WeylElement) -> BraidElement:
    return BraidElement(w.group, () if w.index == 0 else (w.index,))


def braid_multiply(a: BraidElement, b: BraidElement) -> BraidElement:
    if a.group is not b.group:
        raise DomainError("cannot multiply braids of different Weyl groups")
    f = list(a._f)
    for y in b._f:
        _append_simple(a.group, f, y)
    return BraidElement(a.group, tuple(f))


def alpha(p: BraidElement) -> WeylElement:
    """Maximal simple left divisor (first normal-form factor)."""
    return WeylElement(p.group, p._f[0] if p._f else 0)


def weak_le(u: WeylElement, v: WeylElement) -> bool:
    """``u`` is a prefix of ``v``: ``l(u^{-1} v) = l(v) - l(u)``."""
    g = u.group
    return g.lengths[g.mul_index(g.inv[u.index], v.index)] == g.lengths[v.index] - g.lengths[u.index]


def simple_left_divides(u: WeylElement, p: BraidElement) -> bool:
    if u.index == 0:
        return True
    return weak_le(u, alpha(p))


def twist_braid(twist: Twist, b: BraidElement) -> BraidElement:
    # a diagram automorphism preserves descent sets, hence left-weightedness
    tab = twist_table(b.group, twist)
    return BraidElement(b.group, tuple(tab[i] for i in b._f))


def twisted_power(b: BraidElement, twist: Twist, d: int) -> BraidElement:
    """``b * delta(b) * ... * delta^{d-1}(b)``."""
    if d < 1:
        raise DomainError("exponent must be positive")
    g = b.group
    tab = twist_table(g, twist)
    f: list[int] = []
    cur = b._f
    for _ in range(d):
        for y in cur:
            _append_simple(g, f, y)
        cur = tuple(tab[i] for i in cur)
    return BraidElement(g, tuple(f))


class TwistedPowers:
    """Incrementally extend ``b delta(b) delta^2(b) ...`` one twisted copy at a time."""

    def __init__(self, b: BraidElement, twist: Twist):
        self.group = b.group
        self._tab = twist_table(b.group, twist)
        self._next = b._f
        self._f: list[int] = []
        self.d = 0

    def step(self) -> BraidElement:
        for y in self._next:
            _append_simple(self.group, self._f, y)
        self._next = tuple(self._tab[i] for i in self._next)
        self.d += 1
        return BraidElement(self.group, tuple(self._f))

    def alpha_index(self) -> int:
        return self._f[0] if self._f else 0
