import csv
import io
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from goodpos.dimledger import (
    Partition,
    check_dimension_identity,
    class_cycle_type,
    conjugate,
    cycle_type,
    dimension_table,
    identity_selected_classes,
    partitions,
    psi_pairing,
    records_csv,
    unipotent_class_dim,
)
from goodpos.errors import ConfigurationError, DependencyError, DomainError
from goodpos.goodrep import canonical_certificate
from goodpos.weyl import format_word
from oracles import centralizer_dim_rational, rank_mod_p

PARTITION_COUNTS = {2: 2, 3: 3, 4: 5, 5: 7, 6: 11}


def test_partitions_enumeration():
    for n, k in PARTITION_COUNTS.items():
        ps = partitions(n)
        assert len(ps) == k and len(set(ps)) == k
        assert all(sum(p.parts) == n and list(p.parts) == sorted(p.parts, reverse=True) for p in ps)
    assert conjugate((3, 1)) == (2, 1, 1)
    assert Partition.of([2, 1]).parts == (2, 1)
    with pytest.raises(DomainError):
        Partition.of([1, 2])


def test_unipotent_dim_examples():
    assert unipotent_class_dim(3, (1, 1, 1)) == 0
    assert unipotent_class_dim(3, (3,)) == 6
    assert unipotent_class_dim(3, (2, 1)) == 4
    with pytest.raises(DomainError):
        unipotent_class_dim(3, (2, 2))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_dim_matches_centralizer_oracle(n):
    for p in partitions(n):
        d = unipotent_class_dim(n, p)
        assert d == n * n - centralizer_dim_rational(p.parts)
        assert 0 <= d <= n * n - n
        assert (d == 0) == (p.parts == (1,) * n)


def jordan_type_mod_p(m, p):
    """Jordan type of a nilpotent matrix from the ranks of its powers."""
    n = len(m)
    ranks = [n]
    cur = np.eye(n, dtype=np.int64)
    while ranks[-1]:
        cur = (cur @ m) % p
        ranks.append(rank_mod_p(cur, p))
    # blocks of size >= k: rank(N^(k-1)) - rank(N^k)
    ge = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
    parts = []
    for k in range(len(ge) - 1, 0, -1):
        parts += [k] * (ge[k - 1] - ge[k])
    return tuple(parts)


@pytest.mark.parametrize("q", [2, 3])
def test_nilpotent_point_counts_have_the_right_degree(q):
    """|O_lambda(F_q)| counted directly for n = 3; the regular orbit dominates."""
    n = 3
    counts = {}
    for entries in itertools.product(range(q), repeat=n * n):
        m = np.array(entries, dtype=np.int64).reshape(n, n)
        if np.any(np.linalg.matrix_power(m, n) % q):
            continue
        t = jordan_type_mod_p(m, q)
        counts[t] = counts.get(t, 0) + 1
    # all nilpotents: q^(n^2 - n)
    assert sum(counts.values()) == q ** (n * n - n)
    gl = math.prod(q**n - q**i for i in range(n))
    for p in partitions(n):
        c = counts[p.parts]
        d = unipotent_class_dim(n, p)
        # |O| = |G| / |C| with |C| of order q^(n^2 - d)
        assert gl % c == 0
        assert q ** (d - 1) < c < q ** (d + 1)


def test_psi_pairing_examples():
    c = psi_pairing(3, (3,))
    assert c.is_elliptic and format_word(c.representative.word) in ("s1s2", "s2s1")
    assert psi_pairing(3, (1, 1, 1)).representative.is_identity()
    t = psi_pairing(4, (2, 1, 1))
    assert class_cycle_type(t).parts == (2, 1, 1) and t.size == 6
    with pytest.raises(ConfigurationError):
        psi_pairing(8, (8,))


def test_identity_examples():
    r = check_dimension_identity(3, (3,))
    assert (r.dim_O, r.l_w, r.fixed_root_count, r.dim_T_w) == (6, 2, 0, 1) and r.identity_holds
    r = check_dimension_identity(3, (2, 1))
    assert (r.dim_O, r.l_w, r.fixed_root_count, r.dim_T_w) == (4, 3, 0, 2) and r.identity_holds
    assert format_word(r.cert.w.word) == "s1s2s1"
    r = check_dimension_identity(3, (1, 1, 1))
    assert (r.dim_O, r.l_w, r.fixed_root_count, r.dim_T_w) == (0, 0, 6, 3) and r.identity_holds


def test_wrong_certificate_is_a_dependency_error():
    cert = canonical_certificate(psi_pairing(3, (3,)))
    with pytest.raises(DependencyError):
        check_dimension_identity(3, (2, 1), cert)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_identity_holds_with_both_forms(n):
    for r in dimension_table(n):
        assert r.identity_holds
        assert r.dim_O + r.l_w + r.fixed_root_count == r.dim_G - r.dim_T_w
        assert r.c_small_threshold == r.dim_G - r.dim_T_w - r.fixed_root_count
        assert r.c_small_threshold == r.dim_O + r.l_w
        assert r.dim_T_w == len(cycle_type(r.cert.w.group.one_line(r.cert.w)).parts)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_identity_selects_cycle_type_uniquely(n):
    for p in partitions(n):
        sel = identity_selected_classes(n, p)
        assert [c.class_id for c in sel] == [psi_pairing(n, p).class_id]


def test_selection_collides_at_six_for_equal_dimensions():
    """At n = 6 two pairs of partitions share an orbit dimension."""
    for a, b in [((4, 1, 1), (3, 3)), ((3, 1, 1, 1), (2, 2, 2))]:
        assert unipotent_class_dim(6, a) == unipotent_class_dim(6, b)
        sel = {class_cycle_type(c).parts for c in identity_selected_classes(6, a)}
        assert sel == {a, b}


def dominates(a, b):
    pa, pb = list(itertools.accumulate(a)), list(itertools.accumulate(b))
    return all(x >= y for x, y in itertools.zip_longest(pa, pb, fillvalue=pa[-1]))


@given(st.integers(2, 6), st.data())
def test_dominance_reverses_centralizer_dim(n, data):
    ps = partitions(n)
    a, b = data.draw(st.sampled_from(ps)), data.draw(st.sampled_from(ps))
    if dominates(a.parts, b.parts):
        assert unipotent_class_dim(n, a) >= unipotent_class_dim(n, b)
        if a != b:
            assert unipotent_class_dim(n, a) > unipotent_class_dim(n, b)


def test_csv_table():
    text = records_csv(dimension_table(3))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == [
        "n", "lambda", "dim_O", "rep_word", "l_w", "R_w", "dim_T_w", "identity_holds", "c_small_threshold",
    ]
    assert [r["lambda"] for r in rows] == ["(3)", "(2,1)", "(1,1,1)"]
    assert all(r["identity_holds"] == "True" for r in rows)
    assert text == records_csv(dimension_table(3))
