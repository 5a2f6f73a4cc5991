"""Unipotent class dimensions in GL_n and the dimension identity.

For the unipotent class ``O_lambda`` paired with the cycle type ``lambda``
and a good-position representative ``w`` of that class of ``S_n``::

    dim O + l(w) + |R^w| = dim G - dim T^w

where ``G = GL_n`` and ``T^w`` is the ``w``-fixed part of the diagonal torus.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import lru_cache

from .errors import ConfigurationError, DependencyError, DomainError, ExistenceFailure
from .goodrep import GoodRepCertificate, canonical_certificate, fixed_root_data
from .weyl import (
    TwistedClass,
    WeylElement,
    format_word,
    named_twist,
    twisted_conjugacy_classes,
    weyl_group,
)

MAX_N = 7
PAIRING_NOTE = "type-A cycle-type convention"


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if not p or any(x <= 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
            raise DomainError(f"not a partition: {p}")

    @classmethod
    def of(cls, parts) -> "Partition":
        return cls(tuple(int(x) for x in parts))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def conjugate(self) -> "Partition":
        return Partition(conjugate(self.parts))

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


def conjugate(parts) -> tuple[int, ...]:
    parts = tuple(parts)
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > i) for i in range(parts[0]))


def partitions(n: int) -> list[Partition]:
    """Partitions of ``n`` in reverse lexicographic order, ``(n)`` first."""
    if n < 1:
        raise DomainError("n must be positive")
    out = []

    def rec(rest, cap, acc):
        if rest == 0:
            out.append(Partition(tuple(acc)))
            return
        for k in range(min(rest, cap), 0, -1):
            rec(rest - k, k, acc + [k])

    rec(n, n, [])
    return out


def _as_partition(n: int, lam) -> Partition:
    p = lam if isinstance(lam, Partition) else Partition.of(lam)
    if p.n != n:
        raise DomainError(f"{p} is not a partition of {n}")
    return p


def unipotent_class_dim(n: int, lam) -> int:
    """``n^2 - sum(lambda'_i^2)``."""
    p = _as_partition(n, lam)
    return n * n - sum(c * c for c in conjugate(p.parts))


def cycle_type(perm) -> Partition:
    """Cycle type of a one-line permutation (values 1-based)."""
    n = len(perm)
    seen = [False] * n
    lens = []
    for i in range(n):
        if seen[i]:
            continue
        k, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            k += 1
        lens.append(k)
    return Partition(tuple(sorted(lens, reverse=True)))


def _check_n(n: int) -> None:
    if not 2 <= n <= MAX_N:
        raise ConfigurationError(f"n={n} unsupported (2..{MAX_N})")


@lru_cache(maxsize=None)
def _classes(n: int) -> tuple[TwistedClass, ...]:
    g = weyl_group("A", n - 1)
    return tuple(twisted_conjugacy_classes(g, named_twist(g.rs, "id")))


def class_cycle_type(cls: TwistedClass) -> Partition:
    w = cls.representative
    return cycle_type(w.group.one_line(w))


def psi_pairing(n: int, lam) -> TwistedClass:
    """Conjugacy class of ``S_n`` with cycle type ``lambda``."""
    _check_n(n)
    p = _as_partition(n, lam)
    for cls in _classes(n):
        if class_cycle_type(cls) == p:
            return cls
    raise AssertionError(f"no class of cycle type {p}")


def num_cycles(w: WeylElement) -> int:
    return len(cycle_type(w.group.one_line(w)).parts)


@dataclass(frozen=True)
class DimensionRecord:
    n: int
    partition: Partition
    dim_O: int
    class_id: int
    cert: GoodRepCertificate
    l_w: int
    fixed_root_count: int
    dim_T_w: int
    dim_G: int
    identity_holds: bool
    c_small_threshold: int
    pairing: str = PAIRING_NOTE

    def row(self) -> dict:
        return {
            "n": self.n,
            "lambda": str(self.partition),
            "dim_O": self.dim_O,
            "rep_word": format_word(self.cert.w.word),
            "l_w": self.l_w,
            "R_w": self.fixed_root_count,
            "dim_T_w": self.dim_T_w,
            "identity_holds": self.identity_holds,
            "c_small_threshold": self.c_small_threshold,
        }


def identity_terms(dim_O: int, w: WeylElement, n: int) -> tuple[bool, int, int]:
    """(identity holds, |R^w|, dim T^w) for a candidate ``w``."""
    r = len(fixed_root_data(named_twist(w.group.rs, "id"), w).fixed_roots)
    t = num_cycles(w)
    return dim_O + w.length + r == n * n - t, r, t


def check_dimension_identity(n: int, lam, cert: GoodRepCertificate | None = None) -> DimensionRecord:
    _check_n(n)
    p = _as_partition(n, lam)
    cls = psi_pairing(n, p)
    if cert is None:
        try:
            cert = canonical_certificate(cls)
        except ExistenceFailure as exc:
            raise DependencyError(f"no certificate for class of cycle type {p}") from exc
    elif cert.w not in cls:
        raise DependencyError("certificate does not belong to the paired class")
    dim_o = unipotent_class_dim(n, p)
    holds, r, t = identity_terms(dim_o, cert.w, n)
    return DimensionRecord(
        n=n,
        partition=p,
        dim_O=dim_o,
        class_id=cls.class_id,
        cert=cert,
        l_w=cert.length,
        fixed_root_count=r,
        dim_T_w=t,
        dim_G=n * n,
        identity_holds=holds,
        c_small_threshold=n * n - t - r,
    )


def identity_selected_classes(n: int, lam) -> list[TwistedClass]:
    """Classes whose canonical representative satisfies the identity for ``lambda``."""
    _check_n(n)
    dim_o = unipotent_class_dim(n, lam)
    out = []
    for cls in _classes(n):
        cert = canonical_certificate(cls)
        if identity_terms(dim_o, cert.w, n)[0]:
            out.append(cls)
    return out


def dimension_table(n: int) -> list[DimensionRecord]:
    return [check_dimension_identity(n, p) for p in partitions(n)]


CSV_FIELDS = [
    "n",
    "lambda",
    "dim_O",
    "rep_word",
    "l_w",
    "R_w",
    "dim_T_w",
    "identity_holds",
    "c_small_threshold",
]


def records_csv(records) -> str:
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    wr.writeheader()
    for r in records:
        wr.writerow(r.row())
    return buf.getvalue()
