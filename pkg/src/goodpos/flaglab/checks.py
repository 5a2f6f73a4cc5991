"""Brute-force checks on rational points.

Each check returns a report whose ``violations`` list is empty when the
structural statement holds on every enumerated point.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import DomainError, ResourceError
from ..goodrep import GoodRepCertificate
from .flags import blocks
from .gf import field as gf_field
from .matrices import MatOps, rank
from .subgroups import CertContext, _all, is_unipotent_radical, levi_part, member, slice_matrices
from .varieties import (
    XData,
    YTilde,
    count_Ytilde_double_coset,
    enumerate_X,
    enumerate_Y,
    enumerate_Ytilde,
    relpos_mask,
)

REPORT_SCHEMA_VERSION = 1
COMPONENT_FACTOR_BOUND = 4


@dataclass
class Report:
    check: str
    n: int
    q: int
    k: int | None
    cert_id: str
    counts: dict = field(default_factory=dict)
    orbit_count: int | None = None
    violations: list = field(default_factory=list)
    skipped: int = 0
    details: dict = field(default_factory=dict)
    runtime_ms: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self, timing: bool = True) -> dict:
        d = asdict(self)
        d["schema"] = REPORT_SCHEMA_VERSION
        if not timing:
            d.pop("runtime_ms")
        return d


def _report(check, ctx_or_n, q, cert, k=None) -> Report:
    n = ctx_or_n.n if isinstance(ctx_or_n, CertContext) else ctx_or_n
    return Report(check=check, n=n, q=q, k=k, cert_id=cert.cert_id)


class _Timer:
    def __init__(self, rep: Report):
        self.rep = rep

    def __enter__(self):
        self.t = time.perf_counter()
        return self.rep

    def __exit__(self, *exc):
        self.rep.runtime_ms = int((time.perf_counter() - self.t) * 1000)
        return False


# --- Jordan types -----------------------------------------------------------


def unipotent_mask(ops, M) -> np.ndarray:
    """Batched test ``(M - 1)^n = 0`` on matrices."""
    N = ops.add(M, ops.neg(np.eye(ops.n, dtype=np.int64)))
    P = N
    for _ in range(ops.n - 1):
        P = ops.matmul(P, N)
    return _all(P == 0)


def is_unipotent(ctx: CertContext, idx) -> np.ndarray:
    return unipotent_mask(ctx.ops, ctx.G.mats[np.asarray(idx)])


def class_hits(ops, M, lam) -> tuple[int, int]:
    """Number of unipotent matrices in ``M`` and how many have Jordan type ``lam``."""
    uni = M[unipotent_mask(ops, M)]
    hits = sum(1 for m in uni.tolist() if jordan_type(ops.F, m) == tuple(lam))
    return len(uni), hits


def jordan_type(F, mat) -> tuple[int, ...]:
    """Partition of a unipotent matrix from the ranks of ``(u - 1)^i``."""
    n = len(mat)
    N = [[F.sub(int(mat[i][j]), int(i == j)) for j in range(n)] for i in range(n)]
    ranks = [n]
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    while ranks[-1] > 0:
        P = [[_dot(F, P[i], [N[r][j] for r in range(n)]) for j in range(n)] for i in range(n)]
        r = rank(F, P)
        if r == ranks[-1]:
            raise DomainError("matrix is not unipotent")
        ranks.append(r)
    # number of blocks of size >= i is ranks[i-1] - ranks[i]
    ge = [ranks[i - 1] - ranks[i] for i in range(1, len(ranks))]
    parts = []
    for i, c in enumerate(ge):
        nxt = ge[i + 1] if i + 1 < len(ge) else 0
        parts += [i + 1] * (c - nxt)
    return tuple(sorted(parts, reverse=True))


def _dot(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


# --- stabilizers ------------------------------------------------------------


def stabilizer(point, group_scope) -> np.ndarray:
    """Brute-force isotropy group of a point.

    ``point`` is ``("Ytilde", yt, key)``, ``("Y", ctx, g, x)`` for
    ``(g, x . P_I)``, or ``("Xtilde", xd, j)`` for the ``j``-th point of
    ``Xtilde``.  ``group_scope`` is an index array into the group table for
    the first two kinds and an array of matrices for the last.
    """
    kind = point[0]
    xs = np.asarray(group_scope)
    if kind == "Ytilde":
        _, yt, key = point
        return xs[yt.act(xs, key) == key]
    if kind == "Y":
        _, ctx, g, x = point
        G = ctx.G
        comm = G.conj(xs, np.array([g])) == g
        # y . (x P_I) = x P_I iff x^{-1} y x in P_I
        inP = member(ctx.P_I, G.conj(np.array([G.inv[x]]), xs))
        return xs[comm & inP]
    if kind == "Xtilde":
        _, xd, j = point
        ops = xd.ops
        gp = xd.points[j]
        c = ops.matmul(ops.matmul(ops.inverse(gp), xs), gp)
        return xs[is_unipotent_radical(c, _masks(xd))]
    raise DomainError(f"unknown point kind {kind!r}")


def _masks(xd: XData):
    from .subgroups import PatternMasks

    return PatternMasks(xd.n, xd.cert.I)


# --- orbit partition --------------------------------------------------------


def partition_orbits(points: np.ndarray, images):
    """Split sorted ``points`` into orbits; ``images(p)`` lists ``x . p`` for all ``x``.

    Returns (orbit id per point, list of (representative, orbit size,
    number of distinct images, closed)).
    """
    oid = np.full(len(points), -1, dtype=np.int64)
    info = []
    while True:
        free = np.nonzero(oid < 0)[0]
        if len(free) == 0:
            break
        p = points[free[0]]
        img = images(p)
        uniq = np.unique(img)
        inside = member(points, uniq)
        pos = np.searchsorted(points, uniq[inside])
        oid[pos] = len(info)
        oid[free[0]] = len(info)
        info.append((int(p), len(np.unique(pos)), len(uniq), bool(inside.all())))
    return oid, info


# --- Ytilde -----------------------------------------------------------------


def orbit_report_Y(ctx: CertContext, yt: YTilde | None = None) -> Report:
    """Orbits of ``G(F_q)`` on ``Ytilde(F_q)`` and their canonical points."""
    cert = ctx.cert
    rep = _report("orbit_report_Y", ctx, ctx.q, cert)
    with _Timer(rep):
        G = ctx.G
        if yt is None:
            yt = enumerate_Ytilde(ctx)
        xs = np.arange(G.order)
        oid, info = partition_orbits(yt.points, lambda p: yt.act(xs, p))
        l = cert.length
        expected = G.order * ctx.q**l
        dc = count_Ytilde_double_coset(ctx)
        rep.counts = {"Ytilde": int(len(yt.points)), "Ytilde_double_coset": int(dc), "G": int(G.order)}
        rep.orbit_count = len(info)
        if len(yt.points) != expected or dc != expected:
            rep.violations.append(f"|Ytilde| = {len(yt.points)}, double coset count {dc}, expected {expected}")
        if len(info) != ctx.q**l:
            rep.violations.append(f"{len(info)} orbits, expected q^l = {ctx.q**l}")
        nonfree = sum(1 for _, size, nimg, _ in info if nimg != G.order)
        if nonfree:
            rep.violations.append(f"{nonfree} orbits are not free")
        if not all(c for *_, c in info):
            rep.violations.append("an orbit leaves the enumerated point set")
        # canonical points (w_dot v, wU_I), v in U^w
        canon_g = G.mul(np.array([ctx.wdot_idx]), ctx.U_w)
        canon = yt.key(canon_g, np.full(len(canon_g), yt.base_coset))
        if not member(yt.points, canon).all():
            rep.violations.append("a canonical point is missing from Ytilde")
        per_orbit = np.bincount(oid[np.searchsorted(yt.points, canon)], minlength=len(info))
        bad = int(np.sum(per_orbit != 1))
        if bad:
            rep.violations.append(f"{bad} orbits without exactly one canonical point")
        rep.details = {
            "orbit_sizes": sorted({s for _, s, _, _ in info}),
            "canonical_per_orbit": sorted(set(per_orbit.tolist())),
            "wU_I": int(len(ctx.wU_I)),
        }
    return rep


def stabilizer_check_Ytilde(ctx: CertContext, yt: YTilde, samples: int = 8, seed: int = 0) -> Report:
    """Direct isotropy computation on sample points of ``Ytilde``."""
    rep = _report("stabilizer_Ytilde", ctx, ctx.q, ctx.cert)
    with _Timer(rep):
        rng = np.random.default_rng(seed)
        pick = rng.choice(len(yt.points), size=min(samples, len(yt.points)), replace=False)
        xs = np.arange(ctx.G.order)
        sizes = []
        for p in yt.points[np.sort(pick)]:
            st = stabilizer(("Ytilde", yt, p), xs)
            sizes.append(len(st))
            if len(st) != 1 or st[0] != ctx.G.identity_index:
                rep.violations.append(f"point {int(p)} has stabilizer of order {len(st)}")
        rep.counts = {"sampled": len(sizes)}
    return rep


# --- eta --------------------------------------------------------------------


def eta_check(ctx: CertContext) -> Report:
    """``(u, g) -> u g w_dot u^{-1} w_dot^{-1}`` from ``winvU_I x U^b`` onto ``U T^w U_{(R^w)^-}``."""
    rep = _report("eta_check", ctx, ctx.q, ctx.cert)
    with _Timer(rep):
        G = ctx.G
        A = ctx.winvU_I
        Bb = ctx.U_b
        w = np.array([ctx.wdot_idx])
        left = G.mul(G.mul(A[:, None], Bb[None, :]), w)
        right = G.inv[G.mul(w, A)]
        img = G.mul(left, right[:, None]).ravel()
        target = ctx.product(ctx.U, ctx.T_w, ctx.U_Rw_minus)
        distinct = np.unique(img)
        rep.counts = {"domain": int(len(A) * len(Bb)), "image": int(len(distinct)), "codomain": int(len(target))}
        if len(distinct) != len(img):
            rep.violations.append(f"{len(img) - len(distinct)} collisions")
        if len(distinct) != len(target) or not np.array_equal(distinct, target):
            rep.violations.append("image differs from U T^w U_(R^w)^-")
    return rep


# --- Y orbits and the bundle map ---------------------------------------------


@dataclass
class YOrbit:
    rep: int
    members: np.ndarray  # elements of D in this P_I-orbit
    lifted: bool
    canonical_v: np.ndarray  # v in U^w with w_dot v in the orbit


def y_orbits(ctx: CertContext, D: np.ndarray) -> list[YOrbit]:
    """``G``-orbits on ``Y`` as ``P_I``-conjugacy classes in ``D``."""
    G = ctx.G
    P = ctx.P_I
    oid, info = partition_orbits(D, lambda g: G.conj(P, np.array([g])))
    wUI = G.mul(np.array([ctx.wdot_idx]), ctx.U_I)
    wUw = G.mul(np.array([ctx.wdot_idx]), ctx.U_w)
    v_of = dict(zip(wUw.tolist(), ctx.U_w.tolist()))
    out = []
    for o, (r, *_rest) in enumerate(info):
        mem = D[oid == o]
        lifted = bool(member(mem, wUI).any())
        cv = np.array(sorted(v_of[g] for g in wUw[member(mem, wUw)]), dtype=np.int64)
        out.append(YOrbit(r, mem, lifted, cv))
    return out


def L_orbit_check(ctx: CertContext, D: np.ndarray | None = None, num_flags: int | None = None) -> Report:
    """Bundle map into ``L_I^w`` and single ``L_I^w``-orbits of canonical points."""
    rep = _report("L_orbit_check", ctx, ctx.q, ctx.cert)
    with _Timer(rep):
        G = ctx.G
        if D is None:
            D = np.nonzero(relpos_mask(ctx))[0]
        if num_flags is None:
            num_flags = G.order // len(ctx.P_I)
        orbits = y_orbits(ctx, D)
        Lw = ctx.L_w
        # closure: l v l^{-1} in U^w
        conj_all = G.conj(Lw[:, None], ctx.U_w[None, :])
        if not member(ctx.U_w, conj_all).all():
            rep.violations.append("L^w conjugation leaves U^w")
        skipped_pts = 0
        homs = 0
        lw_orbits_on_Uw = len(_conj_orbits(ctx, Lw, ctx.U_w))
        for orb in orbits:
            if not orb.lifted:
                skipped_pts += num_flags * len(orb.members)
                continue
            if len(orb.canonical_v) == 0:
                rep.violations.append(f"lifted orbit of {orb.rep} misses w_dot U^w")
                continue
            # canonical points form one L^w-orbit
            v0 = orb.canonical_v[0]
            lo = np.unique(G.conj(Lw, np.array([v0])))
            if not np.array_equal(lo, orb.canonical_v):
                rep.violations.append(f"orbit of {orb.rep}: canonical set is not one L^w-orbit")
            # bundle map at (w_dot v0, P_I) with lift g' = 1
            g0 = int(G.mul(np.array([ctx.wdot_idx]), np.array([v0]))[0])
            stab = stabilizer(("Y", ctx, g0, G.identity_index), ctx.P_I)
            lev = G.index(levi_part(G.mats[stab], ctx.masks))
            l = G.inv[lev]
            if not member(Lw, l).all():
                rep.violations.append(f"orbit of {orb.rep}: bundle image leaves L^w")
            if len(np.unique(l)) != len(stab):
                rep.violations.append(f"orbit of {orb.rep}: bundle map not injective")
            # x -> l^{-1} = Levi(x) is multiplicative
            sample = stab[: min(len(stab), 24)]
            xy = G.mul(sample[:, None], sample[None, :])
            lhs = G.index(levi_part(G.mats[xy], ctx.masks))
            rhs = G.mul(lev[: len(sample)][:, None], lev[: len(sample)][None, :])
            if not np.array_equal(lhs, rhs):
                rep.violations.append(f"orbit of {orb.rep}: bundle map not a homomorphism")
            homs += 1
        total = num_flags * len(D)
        rep.skipped = int(skipped_pts)
        rep.orbit_count = len(orbits)
        rep.counts = {"Y": int(total), "Y_lifted": int(total - skipped_pts)}
        rep.details = {
            "G_orbits_on_Y": len(orbits),
            "lifted_orbits": sum(o.lifted for o in orbits),
            "Lw_orbits_on_Uw": lw_orbits_on_Uw,
            "Lw": int(len(Lw)),
            "bundle_maps_checked": homs,
            "skipped_fraction": (skipped_pts / total) if total else 0.0,
        }
    return rep


def _conj_orbits(ctx: CertContext, H: np.ndarray, S: np.ndarray) -> list[np.ndarray]:
    G = ctx.G
    _, info = partition_orbits(S, lambda s: G.conj(H, np.array([s])))
    return info


def covering_check(ctx: CertContext, yt: YTilde, D: np.ndarray) -> Report:
    """The covering map ``(g, g' wU_I) -> (g, g' P_I)`` hits exactly the lifted locus."""
    rep = _report("covering_check", ctx, ctx.q, ctx.cert)
    with _Timer(rep):
        G = ctx.G
        g, c = yt.decode(yt.points)
        r = yt.reps[c]
        # (g, r P_I) is in the lifted locus iff r^{-1} g r lies in a lifted orbit
        base = G.conj(G.inv[r], g)
        orbits = y_orbits(ctx, D)
        lifted = np.unique(np.concatenate([o.members for o in orbits if o.lifted] or [np.zeros(0, np.int64)]))
        if not member(lifted, base).all():
            rep.violations.append("a covering point maps outside the lifted locus")
        # distinct images: (g, flag) pairs; a flag is the P_I-coset of r
        pk = _parabolic_keys(ctx)
        img = np.unique(g * (int(pk.max()) + 1) + pk[r])
        num_flags = G.order // len(ctx.P_I)
        expected = num_flags * len(lifted)
        rep.counts = {"image": int(len(img)), "lifted_locus": int(expected)}
        if len(img) != expected:
            rep.violations.append("covering map is not onto the lifted locus")
    return rep


def _parabolic_keys(ctx: CertContext):
    """Index of the flag ``x P_I`` for every ``x`` in ``G``."""
    from .varieties import flag_reps

    G = ctx.G
    key = np.full(G.order, -1, dtype=np.int64)
    for i, x in enumerate(flag_reps(ctx)):
        key[G.mul(np.array([x]), ctx.P_I)] = i
    if np.any(key < 0):
        raise AssertionError("flag representatives miss a parabolic coset")
    return key


# --- slice ------------------------------------------------------------------


def slice_check(ctx: CertContext, lam) -> Report:
    """``S_Br(b)(F_q)`` meets the unipotent class of Jordan type ``lam``."""
    lam = tuple(sorted(lam, reverse=True))
    rep = _report("slice_check", ctx, ctx.q, ctx.cert)
    rep.details["lambda"] = list(lam)
    with _Timer(rep):
        S = ctx.slice_points
        nuni, hits = class_hits(ctx.ops, ctx.G.mats[S], lam)
        rep.counts = {"slice": int(len(S)), "unipotent": nuni, "intersection": hits, "U_b": int(len(ctx.U_b))}
        # the same slice rebuilt from root patterns, without the group table
        pattern = np.sort(ctx.ops.code(slice_matrices(ctx.cert, ctx.ops)))
        if not np.array_equal(pattern, np.sort(ctx.G.codes[S])):
            rep.violations.append("slice disagrees with its root-pattern construction")
        if hits == 0:
            rep.violations.append(f"S_Br(b)(F_{ctx.q}) misses the class {lam}")
            rep.details["extension"] = extension_witness(ctx.cert, ctx.q, lam)
    return rep


def extension_witness(cert: GoodRepCertificate, q: int, lam, max_k: int = 3) -> dict:
    """Smallest ``k`` with ``S_Br(b)(F_{q^k})`` meeting the class, when one is in reach."""
    n = cert.group.rs.rank + 1
    for k in range(2, max_k + 1):
        ops = MatOps(gf_field(q**k), n)
        try:
            S = slice_matrices(cert, ops)
        except ResourceError:
            break
        nuni, hits = class_hits(ops, S, lam)
        if hits:
            return {"k": k, "field": q**k, "slice": int(len(S)), "intersection": hits}
    return {"k": None}


# --- finitely many orbits on each unipotent stratum -------------------------


def orbit_finiteness_check(ctx: CertContext, lam, D: np.ndarray | None = None) -> Report:
    """Finitely many orbits on ``Y^O``, bounded by ``|L^w| q^{l(w)}``."""
    lam = tuple(sorted(lam, reverse=True))
    rep = _report("finiteness", ctx, ctx.q, ctx.cert)
    rep.details["lambda"] = list(lam)
    with _Timer(rep):
        G = ctx.G
        if D is None:
            D = np.nonzero(relpos_mask(ctx))[0]
        uni = D[is_unipotent(ctx, D)]
        DO = np.array(
            [g for g in uni if jordan_type(G.F, G.mats[g].tolist()) == lam], dtype=np.int64
        )
        info = _conj_orbits(ctx, ctx.P_I, DO) if len(DO) else []
        bound = len(ctx.L_w) * ctx.q**ctx.cert.length
        rep.orbit_count = len(info)
        rep.counts = {"Y_O_cell": int(len(DO)), "bound": int(bound)}
        if len(info) > bound:
            rep.violations.append(f"{len(info)} orbits exceed bound {bound}")
    return rep


# --- full flag isotropy -----------------------------------------------------


def jordan_parts(ctx: CertContext, x: int) -> tuple[int, int]:
    """Semisimple and unipotent parts of ``x`` as powers of ``x``."""
    G = ctx.G
    p = G.F.p
    powers = [G.identity_index]
    cur = x
    while cur != G.identity_index:
        powers.append(cur)
        cur = int(G.mul(np.array([cur]), np.array([x]))[0])
    order = len(powers)
    pe = 1
    while order % (pe * p) == 0:
        pe *= p
    m = order // pe
    # a = 1 mod m, a = 0 mod pe ; b = 0 mod m, b = 1 mod pe
    a = next(t for t in range(0, order, pe) if t % m == 1 % m)
    b = next(t for t in range(0, order, m) if t % pe == 1 % pe)
    return powers[a % order], powers[b % order]


def isotropy_bound_full_flag(ctx: CertContext) -> Report:
    """Stabilizers on the full-flag ``Y_w`` divide ``|T^w| q^{|R^{w,+}|}`` up to a small factor."""
    rep = _report("isotropy_full_flag", ctx, ctx.q, ctx.cert)
    with _Timer(rep):
        G = ctx.G
        D = np.nonzero(relpos_mask(ctx, I=()))[0]
        B = ctx.B
        _, info = partition_orbits(D, lambda g: G.conj(B, np.array([g])))
        nfix = len(ctx.fixed_points)
        N = len(ctx.T_w) * ctx.q ** (nfix * (nfix - 1) // 2)
        factors = []
        diag_in_Tw = True
        for r, size, _, _ in info:
            stab = stabilizer(("Y", _FullFlag(ctx), r, G.identity_index), B)
            s = len(stab)
            if s * size != len(B):
                rep.violations.append(f"orbit-stabilizer mismatch at {r}")
            c = s // math.gcd(s, N)
            factors.append(c)
            if c > COMPONENT_FACTOR_BOUND:
                rep.violations.append(f"stabilizer order {s} vs {N}: factor {c}")
            for x in stab:
                xs_, xu = jordan_parts(ctx, int(x))
                if not member(B, np.array([xu])).all() or not member(B, np.array([xs_])).all():
                    rep.violations.append(f"Jordan part of {int(x)} leaves B")
                d = np.diag(np.diag(G.mats[x]))
                if not member(ctx.T_w, G.index(d)).all():
                    diag_in_Tw = False
        rep.orbit_count = len(info)
        rep.counts = {"Y_full": int(G.order // len(B) * len(D)), "T_w_q_Rw": int(N)}
        rep.details = {
            "max_component_factor": max(factors) if factors else 1,
            "factors": sorted(set(factors)),
            "diagonal_parts_in_Tw": diag_in_Tw,
        }
    return rep


class _FullFlag:
    """View of a context with ``I`` empty, for :func:`stabilizer`."""

    def __init__(self, ctx: CertContext):
        self.G = ctx.G
        self.P_I = ctx.B


# --- X -----------------------------------------------------------------------


def xtilde_check(xd: XData) -> Report:
    """``G^F`` acts on ``Xtilde(F_{q^k})`` with trivial stabilizers."""
    rep = Report(check="xtilde_check", n=xd.n, q=xd.q, k=xd.k, cert_id=xd.cert.cert_id)
    with _Timer(rep):
        ops = xd.ops
        m = _masks(xd)
        GF = xd.group_F
        ident = np.eye(xd.n, dtype=np.int64)
        nontriv = 0
        for j in range(len(xd.points)):
            gp = xd.points[j]
            c = ops.matmul(ops.matmul(ops.inverse(gp), GF), gp)
            st = GF[is_unipotent_radical(c, m)]
            if len(st) != 1 or not np.array_equal(st[0], ident):
                nontriv += 1
        if nontriv:
            rep.violations.append(f"{nontriv} points with nontrivial stabilizer")
        if len(np.unique(xd.coset_keys)) != len(xd.coset_keys):
            rep.violations.append("two lifts define the same coset")
        rep.counts = {
            "X": xd.num_X,
            "Xtilde": xd.num_Xtilde,
            "X_lifted": xd.lifted_flags,
            "GF": int(len(GF)),
        }
        rep.skipped = xd.num_X - xd.lifted_flags
    return rep
