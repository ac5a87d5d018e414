from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from picard.field import (RingElement, canonical_associate, field, format_level, gcd,
                          norm, parse_element, parse_level, projective_points, residue_ring)

small = st.integers(-30, 30)


def ring_elements(d):
    D = field(d).D
    return st.builds(lambda s, t: RingElement(s, t, D), small, small)


@pytest.mark.parametrize("d", [1, 3])
def test_field_params(d):
    F = field(d)
    assert len(F.units) == (4 if d == 1 else 6)
    w = F.omega
    # omega^2 - D omega + (D^2 - D)/4 = 0
    assert w * w - w * F.D + (F.D ** 2 - F.D) // 4 == 0
    assert all(u.is_unit() for u in F.units)


def test_norm_examples():
    F1, F3 = field(1), field(3)
    assert norm(F1.elem(1)) == 1
    one_plus_i = F1.elem(1, Fraction(1, 2))
    assert norm(one_plus_i) == 2
    # (1+i)(1-i) expanded by hand
    assert one_plus_i * one_plus_i.conj() == F1.elem(2)
    zeta = F3.elem(Fraction(1, 2), Fraction(1, 2))
    assert norm(zeta) == 1
    assert zeta.to_ring() == F3.zeta


def test_zeta_identities():
    F = field(3)
    z = F.zeta
    assert z ** 6 == 1 and z ** 3 == -1
    assert z * z - z + 1 == 0
    assert (2 * z - 1).to_field() == F.sqrtD
    i = field(1).zeta
    assert i * i == -1


def test_gcd_examples():
    F1, F3 = field(1), field(3)
    a = parse_level("1+i", 1)
    assert gcd(a, F1.ring(2)) == a
    # 2 = -i (1+i)^2
    i = F1.zeta
    assert -i * a * a == 2
    assert gcd(F3.ring(2), F3.ring(3)) == 1
    x = F3.ring(4, 7)
    assert gcd(x, F3.ring(0)) == canonical_associate(x)


@pytest.mark.parametrize("d,level,size", [(1, "1+i", 2), (3, "2", 4), (1, "i", 1), (1, "3", 9),
                                          (3, "2+zeta", 7), (1, "2+i", 5)])
def test_residue_ring_size(d, level, size):
    N = parse_element(level, d).to_ring()
    R = residue_ring(N)
    assert len(R) == size == N.norm()
    # representatives are pairwise incongruent
    assert all(not N.divides(R.lift(a) - R.lift(b)) for a in range(size) for b in range(a))


def _brute_projective(R):
    """Count P^2(O/N) by grouping primitive triples under invertible scalars."""
    n = len(R)
    units = [u for u in range(n) if any(R.mul(u, v) == R.index(1, 0) for v in range(n))]
    seen, count = set(), 0
    for c in product(range(n), repeat=3):
        if c in seen or not R.is_primitive(c):
            continue
        count += 1
        seen.update(tuple(R.mul(u, x) for x in c) for u in units)
    return count


@pytest.mark.parametrize("d,level,count", [(1, "1+i", 7), (1, "1", 1), (3, "2", 21),
                                           (1, "2", 28), (3, "3", None)])
def test_projective_points(d, level, count):
    R = residue_ring(parse_level(level, d))
    assert len(projective_points(R)) == _brute_projective(R)
    if count is not None:
        assert len(projective_points(R)) == count


def test_parse_level_forms():
    assert parse_level("2+1*sqrt(-3)", 3) == parse_level("1+2*zeta", 3)
    assert parse_level("1+1*i", 1) == parse_level("3+1*w", 1)
    assert parse_level("i", 1) == 1
    with pytest.raises(ValueError):
        parse_level("0", 1)
    with pytest.raises(ValueError):
        parse_level("1+i", 3)
    with pytest.raises(ValueError):
        parse_element("2+*", 1)


@pytest.mark.parametrize("d", [1, 3])
def test_format_level_examples(d):
    name = "i" if d == 1 else "zeta"
    assert format_level(parse_level("7", d)) == "7"
    x = parse_level(f"3+1*{name}", d)
    assert parse_level(format_level(x), d) == x


@pytest.mark.parametrize("d", [1, 3])
@given(data=st.data())
def test_norm_multiplicative(d, data):
    a = data.draw(ring_elements(d))
    b = data.draw(ring_elements(d))
    assert (a * b).norm() == a.norm() * b.norm()
    assert norm(a.to_field() * b.to_field()) == a.norm() * b.norm()


@pytest.mark.parametrize("d", [1, 3])
@given(data=st.data())
def test_gcd_divides(d, data):
    a = data.draw(ring_elements(d))
    b = data.draw(ring_elements(d))
    assume(a or b)
    g = gcd(a, b)
    assert g.divides(a) and g.divides(b)
    # any common divisor divides g: check with a random multiple
    c = data.draw(ring_elements(d).filter(bool))
    h = gcd(a * c, b * c)
    assert h == canonical_associate(g * c)


@pytest.mark.parametrize("d", [1, 3])
@given(data=st.data())
def test_canonical_associate(d, data):
    a = data.draw(ring_elements(d).filter(bool))
    c = canonical_associate(a)
    assert canonical_associate(c) == c
    assert any(u * a == c for u in field(d).units)
    assert all(canonical_associate(u * a) == c for u in field(d).units)


@pytest.mark.parametrize("d", [1, 3])
@given(data=st.data())
def test_format_parse_round_trip(d, data):
    a = data.draw(ring_elements(d).filter(bool))
    c = canonical_associate(a)
    assert parse_level(format_level(c), d) == c
