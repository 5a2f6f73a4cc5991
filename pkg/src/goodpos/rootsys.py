"""Finite crystallographic root systems in the simple-root basis.

Roots are integer coefficient vectors with respect to the simple roots.
Positive roots are ordered by height, then by descending coefficient
tuple (so the simple roots come first, in their natural order); negative
roots follow in the same order.  Every index-based structure downstream
relies on this ordering.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ConfigurationError, DomainError

SUPPORTED_RANKS = {
    "A": range(1, 7),
    "B": range(2, 5),
    "C": range(2, 5),
    "D": range(4, 5),
    "G": range(2, 3),
}

Root = tuple[int, ...]


def cartan_matrix(type_label: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix with ``a[i][j] = <alpha_j, alpha_i^vee>`` (Bourbaki labelling)."""
    check_supported(type_label, rank)
    a = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        a[i][i] = 2
    if type_label == "D":
        for i in range(rank - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[rank - 3][rank - 1] = a[rank - 1][rank - 3] = -1
    else:
        for i in range(rank - 1):
            a[i][i + 1] = a[i + 1][i] = -1
    if type_label == "B":
        # alpha_r short
        a[rank - 1][rank - 2] = -2
    elif type_label == "C":
        # alpha_r long
        a[rank - 2][rank - 1] = -2
    elif type_label == "G":
        # alpha_1 short, alpha_2 long
        a[0][1] = -3
    return tuple(tuple(row) for row in a)


def check_supported(type_label: str, rank: int) -> None:
    if type_label not in SUPPORTED_RANKS:
        raise ConfigurationError(f"unsupported Cartan type {type_label!r}")
    if rank not in SUPPORTED_RANKS[type_label]:
        bounds = SUPPORTED_RANKS[type_label]
        raise ConfigurationError(
            f"rank {rank} unsupported for type {type_label} "
            f"(supported: {bounds.start}..{bounds.stop - 1})"
        )


def _height(root: Root) -> int:
    return sum(root)


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    simple_roots: tuple[Root, ...]
    positive_roots: tuple[Root, ...]
    all_roots: tuple[Root, ...]
    _index: dict = field(repr=False, compare=False)

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def num_positive(self) -> int:
        return len(self.positive_roots)

    def index(self, root: Root) -> int:
        try:
            return self._index[tuple(root)]
        except KeyError:
            raise DomainError(f"{tuple(root)} is not a root of {self.name}") from None

    def is_root(self, root: Root) -> bool:
        return tuple(root) in self._index

    def is_positive_index(self, i: int) -> bool:
        return i < len(self.positive_roots)

    def negate_index(self, i: int) -> int:
        n = len(self.positive_roots)
        return i + n if i < n else i - n

    def pairing(self, root: Root, s: int) -> int:
        """``<root, alpha_s^vee>``."""
        row = self.cartan_matrix[s]
        return sum(c * a for c, a in zip(root, row))

    def reflect(self, s: int, root: Root) -> Root:
        return reflect(self, s, root)

    def reflection_permutation(self, s: int) -> tuple[int, ...]:
        """Permutation of root indices induced by the simple reflection ``s``."""
        return tuple(self._index[_reflect_raw(self, s, r)] for r in self.all_roots)

    def subsystem_indices(self, subset) -> frozenset[int]:
        """Indices of the roots supported on the simple roots in ``subset``."""
        allowed = set(subset)
        return frozenset(
            i
            for i, r in enumerate(self.all_roots)
            if all(c == 0 or j in allowed for j, c in enumerate(r))
        )

    def to_json(self) -> dict:
        return {
            "type": self.type_label,
            "rank": self.rank,
            "simple_roots": [list(r) for r in self.simple_roots],
            "positive_roots": [list(r) for r in self.positive_roots],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _reflect_raw(rs: RootSystem, s: int, root: Root) -> Root:
    k = sum(c * a for c, a in zip(root, rs.cartan_matrix[s]))
    out = list(root)
    out[s] -= k
    return tuple(out)


def reflect(rs: RootSystem, s: int, beta: Root) -> Root:
    """Apply the simple reflection ``s_s`` to the root ``beta``."""
    if not 0 <= s < rs.rank:
        raise DomainError(f"simple index {s} out of range for {rs.name}")
    beta = tuple(beta)
    if beta not in rs._index:
        raise DomainError(f"{beta} is not a root of {rs.name}")
    return _reflect_raw(rs, s, beta)


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Saturate the simple roots under the simple reflections."""
    cm = cartan_matrix(type_label, rank)
    simple = tuple(tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank))

    def refl(s, r):
        k = sum(c * a for c, a in zip(r, cm[s]))
        out = list(r)
        out[s] -= k
        return tuple(out)

    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for s in range(rank):
                t = refl(s, r)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt

    positive = sorted(
        (r for r in seen if all(c >= 0 for c in r)),
        key=lambda r: (_height(r), tuple(-c for c in r)),
    )
    negative = [tuple(-c for c in r) for r in positive]
    if len(positive) * 2 != len(seen) or set(negative) | set(positive) != seen:
        raise AssertionError("root saturation produced a non-symmetric set")
    all_roots = tuple(positive) + tuple(negative)
    index = {r: i for i, r in enumerate(all_roots)}
    return RootSystem(
        type_label=type_label,
        rank=rank,
        cartan_matrix=cm,
        simple_roots=simple,
        positive_roots=tuple(positive),
        all_roots=all_roots,
        _index=index,
    )
