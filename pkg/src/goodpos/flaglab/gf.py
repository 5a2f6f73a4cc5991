"""Finite fields GF(p^k) as lookup tables.

An element is the integer whose base-p digits are the coefficients of its
polynomial representative (constant term first).  The modulus is the
lexicographically smallest monic irreducible of degree ``k``, comparing
coefficients from ``x^{k-1}`` down to the constant term.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ..errors import ConfigurationError

MAX_ORDER = 64


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_mulmod(a, b, mod, p):
    """Multiply coefficient lists (low degree first) modulo the monic ``mod``."""
    k = len(mod) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for j in range(k + 1):
                prod[d - k + j] = (prod[d - k + j] - c * mod[j]) % p
    return prod[:k]


def _is_irreducible(mod, p) -> bool:
    """The quotient ring ``F_p[x]/(mod)`` has no zero divisors."""
    k = len(mod) - 1
    elems = [list(t) for t in itertools.product(range(p), repeat=k)][1:]
    return all(any(_poly_mulmod(a, b, mod, p)) for a in elems for b in elems)


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Coefficients (constant term first, monic) of the chosen modulus."""
    if k == 1:
        return (0, 1)
    for head in itertools.product(range(p), repeat=k):
        # head = (c_{k-1}, ..., c_0)
        mod = list(reversed(head)) + [1]
        if mod[0] != 0 and _is_irreducible(mod, p):
            return tuple(mod)
    raise AssertionError("no irreducible polynomial found")


class Gf:
    def __init__(self, p: int, k: int = 1):
        if not _is_prime(p):
            raise ConfigurationError(f"characteristic {p} is not prime")
        if k < 1 or p**k > MAX_ORDER:
            raise ConfigurationError(f"GF({p}^{k}) outside supported range (order <= {MAX_ORDER})")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = smallest_irreducible(p, k)
        q = self.q
        digits = [self._digits(x) for x in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self._from_digits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                mul[a, b] = self._from_digits(_poly_mulmod(digits[a], digits[b], self.modulus, p))
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv
        self.sub_table = add[:, self.neg_table]
        # Python-list copies for scalar work
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = inv.tolist()
        self._frob = [self._pow(x, p) for x in range(q)]

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _from_digits(self, d) -> int:
        v = 0
        for c in reversed(list(d)):
            v = v * self.p + c
        return v

    def _pow(self, x: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self._mul[r][x]
        return r

    # scalar API
    @property
    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._inv[a]

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self._pow(self.inv(a), -e)
        return self._pow(a, e)

    def frobenius(self, a: int, m: int = 1) -> int:
        """``a^(p^m)``."""
        for _ in range(m % self.k):
            a = self._frob[a]
        return a

    def frobenius_table(self, q_sub: int) -> np.ndarray:
        """Table of ``x -> x^{q_sub}`` where ``q_sub`` is a power of ``p``."""
        return np.array([self._pow(x, q_sub) for x in range(self.q)], dtype=np.int64)

    def subfield(self, q_sub: int) -> list[int]:
        """Elements fixed by ``x -> x^{q_sub}``."""
        if q_sub < 2 or not _is_power_of(self.q, q_sub):
            raise ConfigurationError(f"F_{q_sub} is not a subfield of F_{self.q}")
        return [x for x in range(self.q) if self._pow(x, q_sub) == x]

    def generator(self) -> int:
        """Smallest element generating the multiplicative group."""
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = self._mul[x][g]
                order += 1
            if order == self.q - 1:
                return g
        raise AssertionError("no generator")

    def __eq__(self, other):
        return isinstance(other, Gf) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        return f"Gf({self.p}, {self.k})"


def _is_power_of(q: int, base: int) -> bool:
    # F_base <= F_q iff q = base^m for some m >= 1
    x = base
    while x < q:
        x *= base
    return x == q


@lru_cache(maxsize=None)
def field(q: int) -> Gf:
    """The field with ``q`` elements."""
    for p in range(2, q + 1):
        if _is_prime(p):
            k, x = 0, 1
            while x < q:
                x *= p
                k += 1
            if x == q:
                return Gf(p, k)
            if q % p == 0:
                break
    raise ConfigurationError(f"{q} is not a prime power")
