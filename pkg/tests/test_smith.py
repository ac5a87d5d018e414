import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from picard.smith import (CohomologyGroup, ComplexError, SparseIntegerMatrix, cohomology,
                          divisibility_chain, elementary_divisors, rank)


def naive_smith(a):
    """Textbook Smith reduction: pivot on the smallest entry, clear its row and
    column, and fix divisibility by adding a row before moving on."""
    a = [row[:] for row in a]
    m, n = len(a), len(a[0]) if a else 0
    t = 0
    out = []
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = a[i][t] // p
                for k in range(n):
                    a[i][k] -= q * a[t][k]
                dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                for k in range(m):
                    a[k][j] -= q * a[k][t]
                dirty |= a[t][j] != 0
            if not dirty:
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p]
                if not bad:
                    break
                i = bad[0][0]
                for k in range(n):
                    a[t][k] += a[i][k]
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]] + \
                 [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(nz)
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        out.append(abs(a[t][t]))
        t += 1
    return out


def det(a):
    """Exact determinant by fraction Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in a]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= f * a[c][k]
    return int(d)


def test_examples():
    assert elementary_divisors([[2, 4], [6, 8]]) == (2, [2, 4])
    assert elementary_divisors([[1, 0], [0, 7]]) == (2, [1, 7])
    assert elementary_divisors(SparseIntegerMatrix(3, 4)) == (0, [])
    assert elementary_divisors([[2, 0], [0, 3]]) == (2, [1, 6])
    assert rank([[1, 2], [2, 4]]) == 1


def test_naive_oracle_on_examples():
    assert naive_smith([[2, 4], [6, 8]]) == [2, 4]
    assert naive_smith([[2, 0], [0, 3]]) == [1, 6]


def test_against_naive_smith():
    rng = random.Random(2024)
    for _ in range(100):
        m, n = rng.randint(1, 20), rng.randint(1, 20)
        density = rng.choice([0.1, 0.3, 1.0])
        a = [[rng.randint(-9, 9) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]
        r, divs = elementary_divisors(a)
        want = naive_smith(a)
        assert r == len(want)
        assert divs == want


def test_determinant_product():
    rng = random.Random(6)
    done = 0
    while done < 30:
        a = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
        d = det(a)
        if not d:
            continue
        r, divs = elementary_divisors(a)
        prod = 1
        for x in divs:
            prod *= x
        assert r == 6 and prod == abs(d)
        done += 1


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=6))
def test_divisors_form_chain(a):
    r, divs = elementary_divisors(a)
    assert all(b % c == 0 for c, b in zip(divs, divs[1:]))
    assert divs == naive_smith(a)
    # transpose has the same invariants
    assert elementary_divisors([list(c) for c in zip(*a)]) == (r, divs)


@given(st.lists(st.integers(0, 40), max_size=6))
def test_divisibility_chain(xs):
    d = divisibility_chain(xs)
    assert all(b % c == 0 for c, b in zip(d, d[1:]))
    p = q = 1
    for x in xs:
        if x:
            p *= x
    for x in d:
        q *= x
    assert p == q


@given(st.integers(0, 30), st.lists(st.sampled_from([2, 3, 4, 6, 12]), max_size=4))
def test_group_text_round_trip(r, tors):
    tors = divisibility_chain(tors)
    tors = [t for t in tors if t > 1]
    G = CohomologyGroup(r, tuple(tors))
    assert CohomologyGroup.parse(str(G)) == G
    assert CohomologyGroup.from_record(G.to_record()) == G


def test_group_rendering():
    assert str(CohomologyGroup(0)) == "0"
    assert str(CohomologyGroup(2, (2, 2))) == "Z^2 + (Z/2)^2"
    assert str(CohomologyGroup(1, (12,))) == "Z + Z/12"
    with pytest.raises(ValueError):
        CohomologyGroup(0, (2, 3))
    with pytest.raises(ValueError):
        CohomologyGroup.parse("Q^2")


def test_cohomology_point():
    H = cohomology([SparseIntegerMatrix(1, 0), SparseIntegerMatrix(0, 0), SparseIntegerMatrix(0, 0)],
                   [1, 0, 0, 0])
    assert [str(h) for h in H] == ["Z", "0", "0", "0"]


def test_cohomology_circle_and_rp2():
    # circle: two vertices, two edges
    d1 = SparseIntegerMatrix.from_dense([[-1, -1], [1, 1]])
    z = SparseIntegerMatrix
    H = cohomology([d1, z(2, 0), z(0, 0)], [2, 2, 0, 0])
    assert [str(h) for h in H] == ["Z", "Z", "0", "0"]
    # RP^2 with one cell per dimension: d1 = 0, d2 = 2, so H^2 = Z/2
    H = cohomology([z(1, 1), SparseIntegerMatrix.from_dense([[2]]), z(1, 0)], [1, 1, 1, 0])
    assert [str(h) for h in H] == ["Z", "0", "Z/2", "0"]


def test_cohomology_rejects_bad_complex():
    d1 = SparseIntegerMatrix.from_dense([[1]])
    d2 = SparseIntegerMatrix.from_dense([[1]])
    with pytest.raises(ComplexError):
        cohomology([d1, d2, SparseIntegerMatrix(1, 0)], [1, 1, 1, 0])
    with pytest.raises(ComplexError):
        cohomology([d1, d1, d1], [1, 2, 1, 1])


def test_sparse_matrix_io():
    M = SparseIntegerMatrix.from_coo(3, 3, [0, 0, 2], [1, 1, 2], [1, 2, -4])
    assert M.entries == {(0, 1): 3, (2, 2): -4}
    assert SparseIntegerMatrix.from_triplets(M.to_triplets()) == M
    assert M.T.T == M
    with pytest.raises(IndexError):
        SparseIntegerMatrix(2, 2, {(2, 0): 1})
