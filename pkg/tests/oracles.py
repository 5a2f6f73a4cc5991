"""Independent brute-force oracles shared by the test modules."""
from __future__ import annotations

import itertools
import random

import numpy as np

from goodpos.garside import BraidElement, alpha, embed_simple, is_left_weighted, weak_le
from goodpos.weyl import weyl_group


# --- braids -----------------------------------------------------------------


def random_braid(g, rng: random.Random, max_letters: int = 6) -> BraidElement:
    letters = [rng.randrange(g.rank) for _ in range(rng.randint(0, max_letters))]
    return BraidElement.from_letters(g, letters)


class DivisorOracle:
    """Positive braids of each letter length, kept as normal forms.

    ``u`` left-divides ``p`` iff ``p = u x`` for a positive ``x`` of letter
    length ``|p| - l(u)``; all such ``x`` are enumerated.
    """

    def __init__(self, g):
        self.g = g
        self.levels = [{BraidElement(g)}]

    def level(self, m: int):
        while len(self.levels) <= m:
            prev = self.levels[-1]
            nxt = set()
            for x in prev:
                for s in range(self.g.rank):
                    nxt.add(x * embed_simple(self.g.simple(s)))
            self.levels.append(nxt)
        return self.levels[m]

    def divides(self, u, p: BraidElement) -> bool:
        m = p.letter_length - u.length
        if m < 0:
            return False
        ub = embed_simple(u)
        return any(ub * x == p for x in self.level(m))

    def simple_divisors(self, p: BraidElement):
        return [u for u in self.g.elements() if self.divides(u, p)]


def garside_suite(triples: int = 10_000, seed: int = 2024, alpha_samples: int = 60) -> dict:
    """Left-weightedness, associativity and alpha-maximality in A3 and B3."""
    rng = random.Random(seed)
    out = {"left_weighted_failures": 0, "assoc_failures": 0, "alpha_failures": 0, "triples": 0, "alpha_checked": 0}
    groups = [weyl_group("A", 3), weyl_group("B", 3)]
    for k in range(triples):
        g = groups[k % 2]
        a, b, c = (random_braid(g, rng) for _ in range(3))
        left, right = (a * b) * c, a * (b * c)
        direct = BraidElement.from_letters(g, a.letters() + b.letters() + c.letters())
        out["triples"] += 1
        if not (left == right == direct):
            out["assoc_failures"] += 1
        for x in (left, a * b):
            if not is_left_weighted(x):
                out["left_weighted_failures"] += 1
    for g in groups:
        oracle = DivisorOracle(g)
        for _ in range(alpha_samples // 2):
            p = random_braid(g, rng, max_letters=5)
            divs = oracle.simple_divisors(p)
            a = alpha(p)
            out["alpha_checked"] += 1
            ok = a in divs and all(weak_le(u, a) for u in divs)
            if not ok:
                out["alpha_failures"] += 1
    return out


# --- finite fields ----------------------------------------------------------


def gf_tables_from_scratch(p: int, k: int, modulus):
    """Field tables from polynomial arithmetic mod ``modulus`` (monic, low degree first)."""
    q = p**k

    def to_poly(a):
        return [(a // p**i) % p for i in range(k)]

    def to_int(c):
        return sum(int(x) * p**i for i, x in enumerate(c))

    def mul(a, b):
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(to_poly(a)):
            for j, y in enumerate(to_poly(b)):
                prod[i + j] = (prod[i + j] + x * y) % p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                for i in range(k + 1):
                    prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
        return to_int(prod[:k])

    def add(a, b):
        return to_int([(x + y) % p for x, y in zip(to_poly(a), to_poly(b))])

    M = np.array([[mul(a, b) for b in range(q)] for a in range(q)])
    A = np.array([[add(a, b) for b in range(q)] for a in range(q)])
    return A, M


# --- matrices over prime fields ---------------------------------------------


def rank_mod_p(m, p: int) -> int:
    m = [list(map(int, r)) for r in m]
    rows, cols = len(m), len(m[0]) if m else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def centralizer_dim_rational(lam) -> int:
    """dim of ``{X : X J = J X}`` for the nilpotent Jordan matrix ``J`` of type ``lam``.

    Solved as a linear system over the rationals via its integer matrix rank.
    """
    n = sum(lam)
    J = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for part in lam:
        for i in range(part - 1):
            J[pos + i, pos + i + 1] = 1
        pos += part
    # vec(XJ - JX) = (J^T kron I - I kron J) vec(X)
    I = np.eye(n, dtype=np.int64)
    A = np.kron(J.T, I) - np.kron(I, J)
    return n * n - int(np.linalg.matrix_rank(A.astype(float)))


def all_invertible(n: int, p: int):
    for entries in itertools.product(range(p), repeat=n * n):
        m = np.array(entries, dtype=np.int64).reshape(n, n)
        if rank_mod_p(m, p) == n:
            yield m
