import random
from fractions import Fraction

import pytest

from picard.field import field, parse_level, residue_ring
from picard.group import (CapExceeded, GroupElement, closure, eisenstein_generators, form_value,
                          is_member, matmul_mod, q_abs2, random_word, reduce_mod, right_act)


@pytest.fixture(scope="module")
def named():
    return eisenstein_generators()


def test_form_value_examples():
    F = field(3)
    o, n = F.ring(1), F.ring(0)
    assert form_value((o, n, n), (o, n, n)) == 0
    q = form_value((o, n, n), (n, n, o))
    assert q == F.sqrtD.inverse()
    assert -F.D * q.norm() == 1
    assert form_value((n, o, n), (n, o, n)) == 1
    assert q_abs2((o, n, n), (n, n, o)) == Fraction(1, 3)


@pytest.mark.parametrize("d", [1, 3])
def test_form_hermitian(d):
    F = field(d)
    rng = random.Random(d)
    for _ in range(50):
        u = [F.ring(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(3)]
        v = [F.ring(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(3)]
        assert form_value(u, v) == form_value(v, u).conj()


def test_membership(named):
    F = field(3)
    z, o, n = F.zeta, F.ring(1), F.ring(0)
    assert is_member(GroupElement.identity(F.D))
    for name, g in named.items():
        assert is_member(g), name
    assert not is_member(GroupElement([z, n, n, n, o, n, n, n, o], F.D))
    # det 1 but not unitary
    assert not is_member(GroupElement([o, o, n, n, o, n, n, n, o], F.D))
    assert not is_member([[Fraction(1, 2), 0, 0], [0, 1, 0], [0, 0, 2]], d=3)


def test_closure_orders(named):
    w, eps, g1, g2 = named["w"], named["epsilon"], named["gamma1"], named["gamma2"]
    assert len(closure([GroupElement.identity(-3)])) == 1
    assert len(closure([eps * w])) == 12
    G = closure([g1, g2])
    assert len(G) == 24 and not G.is_abelian()
    assert len(closure([g2, g1])) == 24
    assert (eps * eps) in G
    with pytest.raises(CapExceeded):
        closure([named["tau"]], cap=50)


def test_epsilon_squared_central(named):
    e2 = named["epsilon"] ** 2
    assert e2.order() == 3
    for g in named.values():
        assert e2 * g == g * e2


def test_inverse_and_power(named):
    for g in named.values():
        assert g * g.inverse() == GroupElement.identity(-3)
        assert g ** 3 == g * g * g


def test_right_act_examples(named):
    R = residue_ring(parse_level("5", 3))
    e3 = (0, 0, R.index(1, 0))
    e1 = (R.index(1, 0), 0, 0)
    assert right_act(e3, GroupElement.identity(-3), R) == e3
    assert right_act(e3, named["tau"], R) == e3
    assert right_act(e1, named["w"], R) == (0, 0, R.index(-1, 0))
    ident = reduce_mod(GroupElement.identity(-3), R)
    assert ident == tuple(R.index(1, 0) if k in (0, 4, 8) else 0 for k in range(9))


@pytest.mark.parametrize("d,level", [(1, "2+i"), (1, "3"), (3, "2"), (3, "2+zeta")])
def test_reduction_homomorphism(d, level, cells):
    R = residue_ring(parse_level(level, d))
    gens = cells[d].generators()
    rng = random.Random(7)
    for _ in range(30):
        g = random_word(gens, 4, rng)
        h = random_word(gens, 4, rng)
        assert reduce_mod(g * h, R) == matmul_mod(reduce_mod(g, R), reduce_mod(h, R), R)
        v = tuple(rng.randrange(len(R)) for _ in range(3))
        assert right_act(right_act(v, g, R), h, R) == right_act(v, g * h, R)


@pytest.mark.parametrize("d", [1, 3])
def test_generators_are_members(d, cells):
    gens = cells[d].generators()
    assert gens and all(is_member(g) for g in gens)


def test_text_round_trip(named):
    for g in named.values():
        assert GroupElement.from_text(g.to_text(), 3) == g
