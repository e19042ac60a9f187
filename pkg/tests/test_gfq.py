import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdesign.gfq import (
    AmbientMismatch,
    DimensionMismatch,
    NotContained,
    NotPrimePower,
    QuotientMap,
    Subspace,
    TooLarge,
    complements,
    contains,
    count_rref_matrices,
    enumerate_subspaces,
    field_make,
    intersection,
    orthogonal_complement,
    random_subspace,
    rref,
    subspace_sum,
    subspaces_of,
    superspaces,
)
from qdesign.params import gauss

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


def span_set(s):
    """Every vector of s, by brute-force linear combinations (independent of RREF)."""
    f = s.field
    mats = s.matrix()
    out = set()
    for coeffs in itertools.product(range(f.q), repeat=len(mats)):
        x = [0] * s.v
        for c, row in zip(coeffs, mats):
            x = [f.add(a, f.mul(c, b)) for a, b in zip(x, row)]
        out.add(tuple(x))
    return out


# fields


def test_field_make_prime():
    f = field_make(2)
    assert (f.p, f.e) == (2, 1)


def test_field_make_gf4():
    f = field_make(4)
    assert (f.p, f.e) == (2, 2)
    assert all(f.mul(x, x) != 0 for x in range(1, 4))


@pytest.mark.parametrize("q", [6, 10, 12, 1, 0])
def test_not_prime_power(q):
    with pytest.raises(NotPrimePower):
        field_make(q)


def test_too_large():
    with pytest.raises(TooLarge):
        field_make(2**16 + 1)
    assert field_make(2**16).q == 2**16


@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    f = field_make(q)
    els = range(q)
    for a in els:
        assert f.add(a, 0) == a and f.mul(a, 1) == a and f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.sub(f.add(a, b), b) == a
            for c in els:
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))


def _polymul_reference(a, b, p, e, modulus):
    # schoolbook product of base-p digit polynomials, reduced by x^e + modulus
    da = [(a // p**i) % p for i in range(e)]
    db = [(b // p**i) % p for i in range(e)]
    prod = [0] * (2 * e)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(2 * e - 1, e - 1, -1):
        c = prod[d]
        prod[d] = 0
        for i in range(e):
            prod[d - e + i] = (prod[d - e + i] - c * modulus[i]) % p
    return sum(x * p**i for i, x in enumerate(prod[:e]))


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27])
def test_mul_matches_polynomial_arithmetic(q):
    f = field_make(q)
    for a in range(q):
        for b in range(q):
            assert f.mul(a, b) == _polymul_reference(a, b, f.p, f.e, f.modulus)


# rref


def test_rref_example():
    s, r = rref([(1, 1, 0), (0, 1, 1)], field_make(2))
    assert r == 2
    assert s.matrix() == [[1, 0, 1], [0, 1, 1]]


def test_rref_zero_and_duplicate():
    f = field_make(2)
    s, r = rref([(0, 0, 0)], f)
    assert r == 0 and s.dim == 0
    s, r = rref([(1, 0), (1, 0)], f)
    assert r == 1 and s.matrix() == [[1, 0]]


def test_rref_ragged():
    with pytest.raises(DimensionMismatch):
        rref([(1, 0), (1, 0, 1)], field_make(2))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_rref_order_independent_and_idempotent(q):
    f = field_make(q)
    rng = random.Random(q)
    for _ in range(200):
        v = rng.randint(1, 6)
        gens = [[rng.randrange(q) for _ in range(v)] for _ in range(rng.randint(1, 5))]
        s, _ = rref(gens, f)
        shuffled = gens[:]
        rng.shuffle(shuffled)
        # random invertible recombination of the generators
        scaled = [[f.mul(c, x) for x in g] for g, c in zip(shuffled, (rng.randrange(1, q) for _ in shuffled))]
        assert rref(scaled, f)[0] == s
        assert rref(s.matrix() or [[0] * v], f)[0] == s
        m = s.matrix()
        piv = s.pivots()
        assert piv == sorted(piv) and len(set(piv)) == len(piv)
        for i, p in enumerate(piv):
            assert m[i][p] == 1
            assert all(m[j][p] == 0 for j in range(len(m)) if j != i)
            assert all(x == 0 for x in m[i][:p])


def test_text_round_trip():
    f = field_make(3)
    s = Subspace.from_text("1020;0112", f)
    assert Subspace.from_text(s.to_text(), f, 4) == s
    assert Subspace.from_text("100;011", field_make(2)).to_text() == "100;011"


# lattice operations


def test_contains_examples(gf2):
    x = Subspace.from_text("101;011", gf2)
    assert contains(x, x)
    assert contains(Subspace.full(gf2, 3), x)
    assert not contains(Subspace.from_text("100", gf2), Subspace.from_text("010", gf2))
    with pytest.raises(AmbientMismatch):
        contains(x, Subspace.from_text("1000", gf2))


def test_sum_intersection_examples(gf2):
    x = Subspace.from_text("101;011", gf2)
    assert subspace_sum(x, Subspace.zero(gf2, 3)) == x
    a, b = Subspace.from_text("10", gf2), Subspace.from_text("11", gf2)
    assert subspace_sum(a, b) == Subspace.full(gf2, 2)
    assert intersection(a, b).dim == 0


def test_intersection_against_vector_sets(gf2):
    rng = random.Random(5)
    for _ in range(300):
        a = random_subspace(5, rng.randint(0, 5), gf2, rng)
        b = random_subspace(5, rng.randint(0, 5), gf2, rng)
        meet = intersection(a, b)
        assert span_set(meet) == span_set(a) & span_set(b)
        join = subspace_sum(a, b)
        assert span_set(join) >= span_set(a) | span_set(b)
        assert join.dim + meet.dim == a.dim + b.dim


@pytest.mark.parametrize("q", [2, 3, 4])
def test_modular_law(q):
    f = field_make(q)
    rng = random.Random(100 + q)
    for _ in range(1000):
        v = rng.randint(1, 6)
        a = random_subspace(v, rng.randint(0, v), f, rng)
        b = random_subspace(v, rng.randint(0, v), f, rng)
        assert subspace_sum(a, b).dim + intersection(a, b).dim == a.dim + b.dim


# enumeration


def test_enumerate_counts(gf2):
    assert sum(1 for _ in enumerate_subspaces(4, 2, gf2)) == 35
    assert list(enumerate_subspaces(3, 0, gf2)) == [Subspace.zero(gf2, 3)]
    assert sum(1 for _ in enumerate_subspaces(7, 3, gf2)) == count_rref_matrices(7, 3, 2) == 11811
    assert list(enumerate_subspaces(3, 4, gf2)) == []


@pytest.mark.parametrize("q", [2, 3])
def test_enumerate_matches_gauss(q):
    f = field_make(q)
    for v in range(7):
        for k in range(v + 1):
            subs = list(enumerate_subspaces(v, k, f))
            assert len(subs) == len(set(subs)) == gauss(v, k, q)
            assert all(s.dim == k for s in subs)


def test_enumerate_matches_vector_set_closure(gf2):
    # independent count: grow spans vector by vector as frozensets
    v = 4
    vectors = [tuple(x) for x in itertools.product(range(2), repeat=v)]
    level = {frozenset([tuple([0] * v)])}
    for k in range(1, v + 1):
        nxt = set()
        for s in level:
            for x in vectors:
                if x not in s:
                    nxt.add(frozenset(s | {tuple(a ^ b for a, b in zip(x, y)) for y in s}))
        level = nxt
        assert {frozenset(span_set(s)) for s in enumerate_subspaces(v, k, gf2)} == level


def test_enumerate_order_is_deterministic(gf2):
    first = [s.rows for s in enumerate_subspaces(5, 2, gf2)]
    assert first == [s.rows for s in enumerate_subspaces(5, 2, gf2)]
    assert first[0] == Subspace.from_text("10000;01000", gf2).rows


# complements


def test_complements_examples(gf2):
    u = Subspace.from_text("1000", gf2)
    assert sum(1 for _ in complements(u, Subspace.full(gf2, 4))) == 8
    assert list(complements(u, u)) == [Subspace.zero(gf2, 4)]
    with pytest.raises(NotContained):
        list(complements(Subspace.from_text("1000", gf2), Subspace.from_text("0100", gf2)))


def test_complements_against_filter(gf2):
    rng = random.Random(1)
    w = random_subspace(6, 5, gf2, rng)
    u = next(s for s in subspaces_of(w, 1))
    fast = set(complements(u, w))
    slow = {
        k
        for k in enumerate_subspaces(6, 4, gf2)
        if contains(w, k) and intersection(k, u).dim == 0 and subspace_sum(k, u) == w
    }
    assert fast == slow and len(fast) == 16


@pytest.mark.parametrize("q", [2, 3])
def test_complement_count_law(q):
    f = field_make(q)
    for wd in range(5):
        w = Subspace.full(f, wd) if wd else Subspace.zero(f, 0)
        for ud in range(wd + 1):
            for u in enumerate_subspaces(wd, ud, f):
                got = list(complements(u, w))
                assert len(got) == len(set(got)) == q ** (ud * (wd - ud))


# quotients and duality


def test_quotient_basics(gf2):
    u = Subspace.from_text("010000", gf2)
    qm = QuotientMap(6, u)
    assert qm.push(u) == Subspace.zero(gf2, 5)
    assert qm.push(Subspace.full(gf2, 6)) == Subspace.full(gf2, 5)
    with pytest.raises(NotContained):
        qm.push(Subspace.from_text("100000", gf2))


def test_quotient_round_trip(gf2):
    rng = random.Random(7)
    u = random_subspace(6, 1, gf2, rng)
    qm = QuotientMap(6, u)
    checked = 0
    while checked < 100:
        s = subspace_sum(random_subspace(6, rng.randint(0, 5), gf2, rng), u)
        sbar = qm.push(s)
        assert sbar.dim == s.dim - 1
        assert qm.pull(sbar) == s
        assert qm.push(qm.pull(sbar)) == sbar
        checked += 1


def test_orthogonal_examples(gf2):
    assert orthogonal_complement(Subspace.zero(gf2, 4)) == Subspace.full(gf2, 4)
    assert orthogonal_complement(Subspace.from_text("10", gf2)) == Subspace.from_text("01", gf2)


def test_orthogonal_involution_exhaustive(gf2):
    subs = list(enumerate_subspaces(4, 2, gf2))
    assert len(subs) == 35
    for s in subs:
        assert orthogonal_complement(orthogonal_complement(s)) == s


@pytest.mark.parametrize("q", [2, 3])
def test_orthogonal_inclusion_reversing(q):
    f = field_make(q)
    v = 4 if q == 2 else 3
    subs = [s for k in range(v + 1) for s in enumerate_subspaces(v, k, f)]
    perp = {s: orthogonal_complement(s) for s in subs}
    for s in subs:
        assert perp[s].dim == v - s.dim
    for a in subs:
        for b in subs:
            assert contains(a, b) == contains(perp[b], perp[a])


def test_orthogonal_is_annihilator():
    f = field_make(3)
    rng = random.Random(3)
    for _ in range(50):
        s = random_subspace(5, rng.randint(0, 5), f, rng)
        p = orthogonal_complement(s)
        for x in s.matrix():
            for y in p.matrix():
                assert sum(f.mul(a, b) for a, b in zip(x, y)) % 3 == 0


def test_subspaces_and_superspaces(gf2):
    block = Subspace.from_text("1000;0100;0011", gf2)
    subs = list(subspaces_of(block, 2))
    assert len(subs) == len(set(subs)) == gauss(3, 2, 2)
    assert all(contains(block, s) for s in subs)
    # the keys come out canonical without re-reduction
    assert all(Subspace.span(s.rows, gf2, 4) == s for s in subs)
    line = Subspace.from_text("1000;0100", gf2)
    sups = list(superspaces(line, 3))
    assert len(sups) == gauss(2, 1, 2) and all(contains(s, line) for s in sups)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sub_keys_canonical_general_q(data):
    q = data.draw(st.sampled_from([3, 4, 5]))
    f = field_make(q)
    v = data.draw(st.integers(2, 5))
    k = data.draw(st.integers(1, v))
    seed = data.draw(st.integers(0, 10**6))
    block = random_subspace(v, k, f, random.Random(seed))
    t = data.draw(st.integers(0, k))
    subs = list(subspaces_of(block, t))
    assert len(subs) == len(set(subs)) == gauss(k, t, q)
    for s in subs:
        assert Subspace.span(s.rows, f, v) == s
        assert contains(block, s)
