"""Good-position representatives of (twisted) conjugacy classes.

A class member ``w`` is certified when

(i)   the roots fixed by ``delta w`` form the standard subsystem ``R_I``,
(ii)  ``w`` is minimal in ``W_{delta^{-1}(I)} w W_I``, and
(iii) for some ``d`` (a multiple of the twist order) the lift of
      ``w0 w'`` left-divides ``b delta(b) ... delta^{d-1}(b)`` in the
      braid monoid, ``w'`` being the longest element of ``W_I``.

The braid is ``b = lift(v) * lift(v w)`` with ``v`` the longest element of
``W_{delta^{-1}(I)}``.  It projects to ``w`` and equals ``lift(w)`` when
``I`` is empty.  Using ``lift(w)`` for every class (``lift="simple"``) is
strictly weaker: the 3-cycles of ``S_5`` have no certified member then.

Whole classes are scanned; the canonical representative is the first
certified member in (length, shortlex) order.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError, ExistenceFailure
from .garside import (
    BraidElement,
    TwistedPowers,
    alpha,
    embed_simple,
    simple_left_divides,
    twisted_power,
    weak_le,
)
from .weyl import (
    Twist,
    TwistedClass,
    WeylElement,
    WeylGroup,
    format_word,
    is_min_rep,
    twist_root_map,
    twisted_conjugacy_classes,
)

D_MAX_CAP = 48
CERT_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class FixedRootData:
    fixed_roots: frozenset[int]
    is_standard_parabolic: bool
    parabolic_index: frozenset[int]
    w_prime: WeylElement | None

    def fixed_root_vectors(self, group: WeylGroup) -> set:
        return {group.rs.all_roots[i] for i in self.fixed_roots}

    @property
    def num_positive_fixed(self) -> int:
        return len(self.fixed_roots) // 2


def fixed_root_data(twist: Twist, w: WeylElement) -> FixedRootData:
    """Roots ``alpha`` with ``delta(w(alpha)) = alpha``."""
    g = w.group
    d = twist_root_map(g, twist)
    p = w.root_perm
    fixed = frozenset(i for i in range(len(p)) if d[p[i]] == i)
    index = frozenset(s for s in range(g.rank) if s in fixed)
    standard = fixed == g.rs.subsystem_indices(index)
    return FixedRootData(
        fixed_roots=fixed,
        is_standard_parabolic=standard,
        parabolic_index=index,
        w_prime=g.longest_element(index) if standard else None,
    )


def element_order_twisted(twist: Twist, w: WeylElement) -> int:
    """Order of ``delta w`` acting on the roots."""
    g = w.group
    d = twist_root_map(g, twist)
    p = w.root_perm
    m = [d[p[i]] for i in range(len(p))]
    seen = set()
    order = 1
    for i in range(len(m)):
        if i in seen:
            continue
        j, k = i, 0
        while j not in seen:
            seen.add(j)
            j = m[j]
            k += 1
        order = math.lcm(order, k)
    return order


def default_d_max(twist: Twist, w: WeylElement) -> int:
    return min(D_MAX_CAP, 2 * math.lcm(element_order_twisted(twist, w), twist.order))


@dataclass(frozen=True)
class GoodRepCertificate:
    twist: Twist
    class_id: int | None
    w: WeylElement
    I: frozenset[int]
    d: int
    alpha_witness: WeylElement
    length: int
    d_max: int = field(default=D_MAX_CAP, compare=False)
    braid: tuple[int, ...] = ()

    @property
    def group(self) -> WeylGroup:
        return self.w.group

    @property
    def w_prime(self) -> WeylElement:
        return self.group.longest_element(self.I)

    @property
    def cert_id(self) -> str:
        rs = self.group.rs
        return f"{rs.name}-{self.twist.label}-c{self.class_id}-{format_word(self.w.word)}"

    def to_json(self) -> dict:
        rs = self.group.rs
        return {
            "schema": CERT_SCHEMA_VERSION,
            "type": rs.type_label,
            "rank": rs.rank,
            "twist": self.twist.label,
            "class_id": self.class_id,
            "rep_word": format_word(self.w.word),
            "I": sorted(s + 1 for s in self.I),
            "d": self.d,
            "alpha_witness_word": format_word(self.alpha_witness.word),
            "length": self.length,
            "braid": BraidElement(self.group, self.braid).to_json(),
        }


@dataclass(frozen=True)
class Refusal:
    step: str  # "i", "ii" or "iii"
    reason: str

    def __bool__(self):
        return False


LIFTS = ("good", "simple")


def good_braid(twist: Twist, w: WeylElement, I, lift: str = "good") -> BraidElement:
    """Braid lift of ``w`` tested in (iii)."""
    if lift not in LIFTS:
        raise DomainError(f"unknown lift {lift!r}")
    if lift == "simple":
        return embed_simple(w)
    v = w.group.longest_element(twist.inverse().apply_to_set(I))
    return embed_simple(v) * embed_simple(v * w)


def is_good_position(
    twist: Twist, w: WeylElement, d_max: int | None = None, lift: str = "good"
):
    """Return a :class:`GoodRepCertificate` or a :class:`Refusal`."""
    g = w.group
    if d_max is None:
        d_max = default_d_max(twist, w)
    if d_max < twist.order:
        raise DomainError(f"d_max={d_max} is below the twist order {twist.order}")
    frd = fixed_root_data(twist, w)
    if not frd.is_standard_parabolic:
        return Refusal("i", "fixed roots do not form a standard parabolic subsystem")
    I = frd.parabolic_index
    left = twist.inverse().apply_to_set(I)
    if not is_min_rep(left, w, I):
        return Refusal("ii", "not a minimal double coset representative")
    target = g.longest_element() * frd.w_prime
    tl = target.length
    ord_ = twist.order
    b = good_braid(twist, w, I, lift)
    powers = TwistedPowers(b, twist)
    for d in range(1, d_max + 1):
        powers.step()
        if d % ord_:
            continue
        if d * b.letter_length < tl:
            continue
        a = WeylElement(g, powers.alpha_index())
        if weak_le(target, a):
            return GoodRepCertificate(
                twist=twist,
                class_id=None,
                w=w,
                I=I,
                d=d,
                alpha_witness=a,
                length=w.length,
                d_max=d_max,
                braid=b.factor_indices,
            )
    return Refusal("iii", f"w0*w' does not left-divide any twisted power up to d={d_max}")


def verify_certificate(cert: GoodRepCertificate) -> dict[str, bool]:
    """Re-check the three predicates from scratch."""
    g = cert.group
    w = cert.w
    frd = fixed_root_data(cert.twist, w)
    part_i = frd.is_standard_parabolic and frd.parabolic_index == cert.I
    left = cert.twist.inverse().apply_to_set(cert.I)
    part_ii = is_min_rep(left, w, cert.I)
    target = g.longest_element() * g.longest_element(cert.I)
    b = BraidElement(g, cert.braid) if cert.braid else embed_simple(w)
    p = twisted_power(b, cert.twist, cert.d)
    part_iii = (
        b.projection() == w
        and cert.d % cert.twist.order == 0
        and simple_left_divides(target, p)
        and alpha(p) == cert.alpha_witness
    )
    return {"i": part_i, "ii": part_ii, "iii": part_iii}


def find_good_reps(
    cls: TwistedClass, d_max: int | None = None, lift: str = "good"
) -> list[GoodRepCertificate]:
    """All certified members of ``cls``, sorted by (length, shortlex word)."""
    out = []
    for w in cls.sorted_members():
        res = is_good_position(cls.twist, w, d_max, lift)
        if res:
            out.append(_with_class(res, cls.class_id))
    return out


def _with_class(cert: GoodRepCertificate, class_id: int) -> GoodRepCertificate:
    return GoodRepCertificate(
        twist=cert.twist,
        class_id=class_id,
        w=cert.w,
        I=cert.I,
        d=cert.d,
        alpha_witness=cert.alpha_witness,
        length=cert.length,
        d_max=cert.d_max,
        braid=cert.braid,
    )


def canonical_certificate(
    cls: TwistedClass, d_max: int | None = None, lift: str = "good"
) -> GoodRepCertificate:
    """First certified member in (length, shortlex) order.

    Stops at the first success; raises :class:`ExistenceFailure` otherwise.
    """
    for w in cls.sorted_members():
        res = is_good_position(cls.twist, w, d_max, lift)
        if res:
            return _with_class(res, cls.class_id)
    raise ExistenceFailure(
        f"no member of class {cls.class_id} certified within d_max="
        f"{d_max if d_max is not None else 'default'}",
        d_max=d_max,
    )


def verify_elliptic_minimal(cert: GoodRepCertificate, cls: TwistedClass) -> bool:
    if not cls.is_elliptic:
        raise DomainError("class is not elliptic")
    return cert.length == cls.min_length


def braid_representative(cert: GoodRepCertificate) -> BraidElement:
    """The certified braid; projects to ``w`` because its first factor is an involution."""
    if cert.braid:
        return BraidElement(cert.group, cert.braid)
    return good_braid(cert.twist, cert.w, cert.I)


@dataclass
class ClassReport:
    cls: TwistedClass
    certificates: list[GoodRepCertificate]

    @property
    def existence_failure(self) -> bool:
        return not self.certificates

    @property
    def canonical(self) -> GoodRepCertificate | None:
        return self.certificates[0] if self.certificates else None


def good_rep_table(
    group: WeylGroup,
    twist: Twist,
    d_max: int | None = None,
    all_members: bool = True,
    lift: str = "good",
) -> list[ClassReport]:
    classes = twisted_conjugacy_classes(group, twist)
    reports = []
    for cls in classes:
        if all_members:
            certs = find_good_reps(cls, d_max, lift)
        else:
            try:
                certs = [canonical_certificate(cls, d_max, lift)]
            except ExistenceFailure:
                certs = []
        reports.append(ClassReport(cls, certs))
    return reports


def certificates_json(reports: list[ClassReport], d_max=None) -> str:
    rows = []
    for rep in reports:
        if rep.canonical is None:
            rows.append(
                {
                    "class_id": rep.cls.class_id,
                    "status": "EXISTENCE-FAILURE",
                    "d_max": d_max if d_max is not None else "default",
                }
            )
        else:
            row = rep.canonical.to_json()
            row["status"] = "ok"
            row["num_certified_members"] = len(rep.certificates)
            rows.append(row)
    return json.dumps(rows, indent=2, sort_keys=True)


def certificate_from_json(group: WeylGroup, twist: Twist, data: dict) -> GoodRepCertificate:
    from .weyl import parse_word

    w = group.from_word(parse_word(data["rep_word"]))
    braid = ()
    if data.get("braid"):
        braid = BraidElement.from_factors(
            group, [group.from_word(parse_word(f)) for f in data["braid"]]
        ).factor_indices
    return GoodRepCertificate(
        twist=twist,
        class_id=data.get("class_id"),
        w=w,
        I=frozenset(s - 1 for s in data["I"]),
        d=data["d"],
        alpha_witness=group.from_word(parse_word(data["alpha_witness_word"])),
        length=data["length"],
        braid=braid,
    )
