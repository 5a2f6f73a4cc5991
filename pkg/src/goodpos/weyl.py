"""Weyl group elements, diagram twists and (twisted) conjugacy classes.

Elements are permutations of root indices.  Composition is functional:
``(a * b)(alpha) = a(b(alpha))``, so the word ``s1 s2`` applies ``s2``
first.  Simple reflections are 0-based internally and printed 1-based.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConfigurationError, DomainError
from .rootsys import RootSystem, build_root_system


def format_word(word) -> str:
    return "".join(f"s{i + 1}" for i in word) or "e"


def parse_word(text: str) -> tuple[int, ...]:
    """Inverse of :func:`format_word`; accepts ``"e"`` and ``"s1s2"`` / ``"1 2"``."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    if "s" in text:
        return tuple(int(t) - 1 for t in text.split("s") if t)
    return tuple(int(t) - 1 for t in text.replace(",", " ").split())


class WeylElement:
    __slots__ = ("group", "index")

    def __init__(self, group: "WeylGroup", index: int):
        self.group = group
        self.index = index

    @property
    def root_perm(self) -> tuple[int, ...]:
        return self.group.perms[self.index]

    @property
    def word(self) -> tuple[int, ...]:
        return self.group.words[self.index]

    @property
    def length(self) -> int:
        return self.group.lengths[self.index]

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return compose(self, other)

    def inverse(self) -> "WeylElement":
        return WeylElement(self.group, self.group.inv[self.index])

    def left_descents(self) -> frozenset[int]:
        return _bits(self.group.ldesc[self.index])

    def right_descents(self) -> frozenset[int]:
        return _bits(self.group.rdesc[self.index])

    def support(self) -> frozenset[int]:
        return frozenset(self.word)

    def is_identity(self) -> bool:
        return self.index == self.group.identity_index

    def one_line(self) -> tuple[int, ...]:
        return self.group.one_line(self)

    def __eq__(self, other):
        return (
            isinstance(other, WeylElement)
            and other.group is self.group
            and other.index == self.index
        )

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __lt__(self, other: "WeylElement"):
        return (self.length, self.word) < (other.length, other.word)

    def __repr__(self):
        return f"WeylElement({self.group.rs.name}, {format_word(self.word)})"


def _bits(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def _mask(subset) -> int:
    m = 0
    for s in subset:
        m |= 1 << s
    return m


class WeylGroup:
    """Full element table of a finite Weyl group.

    Elements are indexed in (length, shortlex word) order, so index 0 is the
    identity and the last index is the longest element.
    """

    MAX_ORDER = 5040

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.rank = rs.rank
        npos = rs.num_positive
        self.num_positive = npos
        sref = [rs.reflection_permutation(s) for s in range(rs.rank)]
        self.simple_perms = sref

        ident = tuple(range(len(rs.all_roots)))
        found = {ident: 0}
        order = [ident]
        for p in order:
            for s in sref:
                q = tuple(p[j] for j in s)
                if q not in found:
                    found[q] = len(order)
                    order.append(q)
                    if len(order) > self.MAX_ORDER:
                        raise ConfigurationError(f"|W({rs.name})| exceeds {self.MAX_ORDER}")

        lengths = [sum(1 for i in range(npos) if p[i] >= npos) for p in order]
        # left descents: l(s w) < l(w)  <=>  w^{-1}(alpha_s) < 0
        by_len = sorted(range(len(order)), key=lambda i: lengths[i])
        tmp_words: dict[int, tuple[int, ...]] = {}
        for i in by_len:
            p = order[i]
            if lengths[i] == 0:
                tmp_words[i] = ()
                continue
            inv = [0] * len(p)
            for a, b in enumerate(p):
                inv[b] = a
            s = next(s for s in range(rs.rank) if inv[s] >= npos)
            q = tuple(sref[s][j] for j in p)
            tmp_words[i] = (s,) + tmp_words[found[q]]

        perm_order = sorted(range(len(order)), key=lambda i: (lengths[i], tmp_words[i]))
        self.perms: list[tuple[int, ...]] = [order[i] for i in perm_order]
        self.words: list[tuple[int, ...]] = [tmp_words[i] for i in perm_order]
        self.lengths: list[int] = [lengths[i] for i in perm_order]
        self._lookup = {p: i for i, p in enumerate(self.perms)}
        self.order = len(self.perms)
        self.identity_index = 0

        self.rmul = [[0] * self.order for _ in range(rs.rank)]
        self.lmul = [[0] * self.order for _ in range(rs.rank)]
        self.inv = [0] * self.order
        self.ldesc = [0] * self.order
        self.rdesc = [0] * self.order
        for i, p in enumerate(self.perms):
            invp = [0] * len(p)
            for a, b in enumerate(p):
                invp[b] = a
            self.inv[i] = self._lookup[tuple(invp)]
            for s in range(rs.rank):
                self.rmul[s][i] = self._lookup[tuple(p[j] for j in sref[s])]
                self.lmul[s][i] = self._lookup[tuple(sref[s][j] for j in p)]
                if p[s] >= npos:
                    self.rdesc[i] |= 1 << s
                if invp[s] >= npos:
                    self.ldesc[i] |= 1 << s
        self.longest_index = self.order - 1
        self._twist_cache: dict = {}

    def __repr__(self):
        return f"WeylGroup({self.rs.name}, order={self.order})"

    # -- element construction -------------------------------------------------
    def element(self, index: int) -> WeylElement:
        return WeylElement(self, index)

    @property
    def identity(self) -> WeylElement:
        return WeylElement(self, 0)

    def elements(self):
        return [WeylElement(self, i) for i in range(self.order)]

    def simple(self, s: int) -> WeylElement:
        return WeylElement(self, self.rmul[s][0])

    def from_word(self, word) -> WeylElement:
        if isinstance(word, str):
            word = parse_word(word)
        i = 0
        for s in word:
            if not 0 <= s < self.rank:
                raise DomainError(f"letter s{s + 1} out of range for {self.rs.name}")
            i = self.rmul[s][i]
        return WeylElement(self, i)

    def from_perm(self, perm) -> WeylElement:
        try:
            return WeylElement(self, self._lookup[tuple(perm)])
        except KeyError:
            raise DomainError("not a root permutation of this Weyl group") from None

    def mul_index(self, a: int, b: int) -> int:
        pa, pb = self.perms[a], self.perms[b]
        return self._lookup[tuple(pa[j] for j in pb)]

    def length_of(self, index: int) -> int:
        return self.lengths[index]

    # -- type A one-line notation ---------------------------------------------
    def _require_type_a(self):
        if self.rs.type_label != "A":
            raise DomainError("one-line notation is only defined in type A")

    def one_line(self, w: WeylElement) -> tuple[int, ...]:
        """``(w(1), ..., w(n))`` for ``W(A_{n-1}) = S_n``."""
        self._require_type_a()
        n = self.rank + 1
        line = list(range(1, n + 1))
        # apply letters rightmost first: w(i) = s_{a1}(...s_{ak}(i))
        for s in reversed(w.word):
            line = [_swap(v, s + 1) for v in line]
        return tuple(line)

    def from_one_line(self, line) -> WeylElement:
        self._require_type_a()
        n = self.rank + 1
        line = list(line)
        if sorted(line) != list(range(1, n + 1)):
            raise DomainError(f"{line} is not a permutation of 1..{n}")
        # bubble sort records a reduced word for w^{-1}... build w directly
        word = []
        cur = list(line)
        # find w = s_{a1}...s_{ak}: peel left descents, i.e. values i,i+1 inverted
        while True:
            pos = {v: k for k, v in enumerate(cur)}
            for i in range(1, n):
                if pos[i] > pos[i + 1]:
                    word.append(i - 1)
                    cur = [_swap(v, i) for v in cur]
                    break
            else:
                break
        return self.from_word(word)

    # -- parabolic structure ---------------------------------------------------
    def longest_element(self, subset=None) -> WeylElement:
        """Longest element of the standard parabolic subgroup on ``subset``."""
        if subset is None:
            return WeylElement(self, self.longest_index)
        subset = sorted(set(subset))
        i = 0
        while True:
            for s in subset:
                if not self.rdesc[i] >> s & 1:
                    i = self.rmul[s][i]
                    break
            else:
                return WeylElement(self, i)

    def in_parabolic(self, w: WeylElement, subset) -> bool:
        return set(w.word) <= set(subset)

    def parabolic_elements(self, subset) -> list[WeylElement]:
        allowed = set(subset)
        return [WeylElement(self, i) for i in range(self.order) if set(self.words[i]) <= allowed]


def compose(a: WeylElement, b: WeylElement) -> WeylElement:
    if a.group is not b.group:
        raise DomainError("cannot compose elements of different Weyl groups")
    return WeylElement(a.group, a.group.mul_index(a.index, b.index))


def _swap(v: int, i: int) -> int:
    if v == i:
        return i + 1
    if v == i + 1:
        return i
    return v


@lru_cache(maxsize=None)
def weyl_group(type_label: str, rank: int) -> WeylGroup:
    return WeylGroup(build_root_system(type_label, rank))


def inversion_set(w: WeylElement) -> frozenset:
    """``{alpha > 0 : w^{-1}(alpha) < 0}`` as root coordinate tuples."""
    rs = w.group.rs
    return frozenset(rs.all_roots[i] for i in inversion_indices(w))


def inversion_indices(w: WeylElement) -> frozenset[int]:
    g = w.group
    invp = g.perms[g.inv[w.index]]
    return frozenset(i for i in range(g.num_positive) if invp[i] >= g.num_positive)


def longest_element(group: WeylGroup, subset=()) -> WeylElement:
    return group.longest_element(subset)


def is_min_rep(left, w: WeylElement, right) -> bool:
    g = w.group
    i = w.index
    return all(g.ldesc[i] >> s & 1 == 0 for s in left) and all(
        g.rdesc[i] >> s & 1 == 0 for s in right
    )


def min_double_coset_rep(left, w: WeylElement, right) -> WeylElement:
    """Unique minimal-length element of ``W_left * w * W_right``."""
    g = w.group
    i = w.index
    left = tuple(left)
    right = tuple(right)
    changed = True
    while changed:
        changed = False
        for s in left:
            if g.ldesc[i] >> s & 1:
                i = g.lmul[s][i]
                changed = True
        for s in right:
            if g.rdesc[i] >> s & 1:
                i = g.rmul[s][i]
                changed = True
    return WeylElement(g, i)


# -- twists -------------------------------------------------------------------

@dataclass(frozen=True)
class Twist:
    """Diagram automorphism given as a permutation of simple indices."""

    simple_perm: tuple[int, ...]
    name: str = ""

    @property
    def order(self) -> int:
        return _perm_order(self.simple_perm)

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.simple_perm))

    def __call__(self, s: int) -> int:
        return self.simple_perm[s]

    def inverse(self) -> "Twist":
        inv = [0] * len(self.simple_perm)
        for i, j in enumerate(self.simple_perm):
            inv[j] = i
        return Twist(tuple(inv), f"{self.name}^-1" if self.name else "")

    def power(self, k: int) -> "Twist":
        perm = list(range(len(self.simple_perm)))
        for _ in range(k % self.order):
            perm = [self.simple_perm[p] for p in perm]
        return Twist(tuple(perm))

    def apply_to_set(self, subset) -> frozenset[int]:
        return frozenset(self.simple_perm[s] for s in subset)

    @property
    def label(self) -> str:
        return self.name or ",".join(str(j + 1) for j in self.simple_perm)


def _perm_order(perm) -> int:
    seen = set()
    order = 1
    for i in range(len(perm)):
        if i in seen:
            continue
        j, n = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            n += 1
        order = math.lcm(order, n)
    return order


def validate_twist(rs: RootSystem, twist: Twist) -> None:
    p = twist.simple_perm
    if sorted(p) != list(range(rs.rank)):
        raise ConfigurationError(f"{p} is not a permutation of the simple roots of {rs.name}")
    cm = rs.cartan_matrix
    for i in range(rs.rank):
        for j in range(rs.rank):
            if cm[p[i]][p[j]] != cm[i][j]:
                raise ConfigurationError(f"twist {twist.label} does not preserve the Cartan matrix")


def diagram_automorphisms(rs: RootSystem) -> list[Twist]:
    out = []
    for p in itertools.permutations(range(rs.rank)):
        t = Twist(tuple(p))
        try:
            validate_twist(rs, t)
        except ConfigurationError:
            continue
        out.append(t)
    return out


def named_twist(rs: RootSystem, name: str) -> Twist:
    """``id``, ``flip`` (type A, D), ``rot`` (D4 triality) or 1-based images ``"3,2,1"``."""
    r = rs.rank
    name = name.strip()
    if name in ("id", "identity", ""):
        t = Twist(tuple(range(r)), "id")
    elif name == "flip":
        if rs.type_label == "A":
            t = Twist(tuple(r - 1 - i for i in range(r)), "flip")
        elif rs.type_label == "D":
            perm = list(range(r))
            perm[r - 2], perm[r - 1] = r - 1, r - 2
            t = Twist(tuple(perm), "flip")
        else:
            raise ConfigurationError(f"no flip twist for {rs.name}")
    elif name in ("rot", "triality"):
        if rs.name != "D4":
            raise ConfigurationError("the order-3 rotation only exists for D4")
        # legs 1 -> 3 -> 4 -> 1 around the central node 2 (1-based)
        t = Twist((2, 1, 3, 0), "rot")
    else:
        try:
            perm = tuple(int(x) - 1 for x in name.split(","))
        except ValueError:
            raise ConfigurationError(f"unknown twist {name!r}") from None
        t = Twist(perm, name)
    validate_twist(rs, t)
    return t


def _twist_root_map(group: WeylGroup, twist: Twist) -> tuple[int, ...]:
    rs = group.rs
    out = []
    for r in rs.all_roots:
        img = [0] * rs.rank
        for i, c in enumerate(r):
            img[twist.simple_perm[i]] = c
        out.append(rs.index(tuple(img)))
    return tuple(out)


def twist_table(group: WeylGroup, twist: Twist) -> list[int]:
    """Index map ``w -> delta(w)`` over the whole group (cached per twist)."""
    key = twist.simple_perm
    tab = group._twist_cache.get(key)
    if tab is None:
        d = _twist_root_map(group, twist)
        dinv = [0] * len(d)
        for i, j in enumerate(d):
            dinv[j] = i
        tab = []
        for p in group.perms:
            # delta o w o delta^{-1}
            tab.append(group._lookup[tuple(d[p[dinv[i]]] for i in range(len(p)))])
        group._twist_cache[key] = tab
    return tab


def twist_root_map(group: WeylGroup, twist: Twist) -> tuple[int, ...]:
    return _twist_root_map(group, twist)


def apply_twist(twist: Twist, w: WeylElement) -> WeylElement:
    return WeylElement(w.group, twist_table(w.group, twist)[w.index])


# -- twisted conjugacy classes -----------------------------------------------

@dataclass(frozen=True)
class TwistedClass:
    twist: Twist
    members: frozenset
    is_elliptic: bool
    min_length: int
    class_id: int
    group: WeylGroup

    @property
    def size(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[WeylElement]:
        return sorted((WeylElement(self.group, i) for i in self.members))

    @property
    def representative(self) -> WeylElement:
        return self.sorted_members()[0]

    def __contains__(self, w: WeylElement) -> bool:
        return w.group is self.group and w.index in self.members

    def to_json(self) -> dict:
        return {
            "twist": self.twist.label,
            "class_id": self.class_id,
            "size": self.size,
            "is_elliptic": self.is_elliptic,
            "min_length": self.min_length,
            "representative_word": format_word(self.representative.word),
        }


def twisted_stable_subsets(rank: int, twist: Twist) -> list[frozenset[int]]:
    out = []
    for k in range(rank + 1):
        for c in itertools.combinations(range(rank), k):
            c = frozenset(c)
            if twist.apply_to_set(c) == c:
                out.append(c)
    return out


def _stable_closure(subset, twist: Twist) -> frozenset[int]:
    cur = frozenset(subset)
    while True:
        nxt = cur | twist.apply_to_set(cur)
        if nxt == cur:
            return cur
        cur = nxt


def twisted_conjugacy_classes(group: WeylGroup, twist: Twist) -> list[TwistedClass]:
    """Partition ``W`` into orbits of ``m -> delta(x) m x^{-1}``.

    Class ids follow the order (min_length, size, shortlex representative).
    """
    validate_twist(group.rs, twist)
    tw = twist_table(group, twist)
    full = frozenset(range(group.rank))
    label = [-1] * group.order
    raw = []
    for start in range(group.order):
        if label[start] >= 0:
            continue
        cid = len(raw)
        label[start] = cid
        members = [start]
        for m in members:
            for s in range(group.rank):
                # x = s: delta(s) * m * s
                j = group.lmul[twist.simple_perm[s]][group.rmul[s][m]]
                if label[j] < 0:
                    label[j] = cid
                    members.append(j)
        raw.append(members)

    classes = []
    for members in raw:
        elliptic = all(_stable_closure(group.words[m], twist) == full for m in members)
        min_len = min(group.lengths[m] for m in members)
        rep = min(members)  # index order is (length, shortlex)
        classes.append((min_len, len(members), (group.lengths[rep], group.words[rep]), members, elliptic))
    classes.sort(key=lambda c: c[:3])
    return [
        TwistedClass(
            twist=twist,
            members=frozenset(c[3]),
            is_elliptic=c[4],
            min_length=c[0],
            class_id=k,
            group=group,
        )
        for k, c in enumerate(classes)
    ]


def class_of(classes: list[TwistedClass], w: WeylElement) -> TwistedClass:
    for c in classes:
        if w in c:
            return c
    raise DomainError(f"{w} not found in the given classes")


def classes_json(classes: list[TwistedClass]) -> str:
    return json.dumps([c.to_json() for c in classes], indent=2, sort_keys=True)
