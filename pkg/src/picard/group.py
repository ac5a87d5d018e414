"""The unitary group SU(Q) over k and its integral points.

Matrices act on column vectors for cusps and points of the symmetric space,
and on row vectors mod N for coset spaces.
"""
from __future__ import annotations

import random
from collections import deque
from fractions import Fraction

from .field import FieldElement, RingElement, field, field_of_disc, ring_mul


class HermitianForm:
    """Q(u, v) = u^* C v with C = [[0,0,1/sqrtD],[0,1,0],[-1/sqrtD,0,0]]."""

    def __init__(self, d):
        self.field = field(d)
        self.D = self.field.D
        F = self.field
        inv = F.sqrtD.inverse()
        zero = F.elem(0)
        self.C = ((zero, zero, inv), (zero, F.elem(1), zero), (-inv, zero, zero))

    def value(self, u, v):
        u = [_f(a, self.D) for a in u]
        v = [_f(a, self.D) for a in v]
        inv = self.C[0][2]
        return u[0].conj() * v[2] * inv + u[1].conj() * v[1] - u[2].conj() * v[0] * inv

    def __repr__(self):
        return f"HermitianForm(D={self.D})"


def _f(a, D):
    if isinstance(a, FieldElement):
        return a
    if isinstance(a, RingElement):
        return a.to_field()
    return FieldElement(a, 0, D)


def form_value(u, v, d=None):
    """Exact Q(u, v) for length-3 vectors over k."""
    D = _disc_of(u, v) if d is None else field(d).D
    return HermitianForm(1 if D == -4 else 3).value(u, v)


def _disc_of(*vecs):
    for v in vecs:
        for a in v:
            if isinstance(a, (FieldElement, RingElement)):
                return a.D
    raise ValueError("cannot infer the field; pass d")


def scaled_form(u, v):
    """sqrt(D) * Q(u, v) for integral vectors, an element of O.

    Equal to conj(u1) v3 + sqrtD conj(u2) v2 - conj(u3) v1.
    """
    D = u[0].D
    sqrtD = field_of_disc(D).sqrtD.to_ring()
    return u[0].conj() * v[2] + sqrtD * u[1].conj() * v[1] - u[2].conj() * v[0]


def q_abs2(u, v):
    """|Q(u, v)|^2 as an exact rational."""
    w = scaled_form(u, v)
    return Fraction(w.norm(), -w.D)


class GroupElement:
    """3x3 matrix with entries in O (row-major)."""

    __slots__ = ("entries", "D", "_key")

    def __init__(self, entries, D=None):
        ents = []
        for e in entries:
            if isinstance(e, FieldElement):
                e = e.to_ring()
            elif isinstance(e, int):
                e = RingElement(e, 0, D)
            ents.append(e)
        if len(ents) != 9:
            raise ValueError("need nine entries")
        self.entries = tuple(ents)
        self.D = ents[0].D if D is None else D
        self._key = tuple((e.s, e.t) for e in self.entries)

    @classmethod
    def from_rows(cls, rows, D):
        return cls([RingElement(*e, D) if isinstance(e, tuple) else e
                    for row in rows for e in row], D)

    @classmethod
    def identity(cls, D):
        return cls([1, 0, 0, 0, 1, 0, 0, 0, 1], D)

    @classmethod
    def _from_key(cls, key, D):
        g = cls.__new__(cls)
        g.entries = tuple(RingElement(s, t, D) for s, t in key)
        g.D = D
        g._key = key
        return g

    def key(self):
        return self._key

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[3 * i + j]

    def rows(self):
        return [self.entries[3 * i:3 * i + 3] for i in range(3)]

    def __mul__(self, other):
        if isinstance(other, GroupElement):
            return GroupElement._from_key(_matmul_key(self._key, other._key, self.D), self.D)
        return NotImplemented

    def apply(self, v):
        """Column action g . v on a vector over O or k."""
        return tuple(sum((self.entries[3 * i + j] * v[j] for j in range(3)),
                         RingElement(0, 0, self.D)) for i in range(3))

    def conj_transpose(self):
        e = self.entries
        return GroupElement([e[3 * j + i].conj() for i in range(3) for j in range(3)], self.D)

    def inverse(self):
        # g^* C g = C  =>  g^{-1} = C^{-1} g^* C
        H = HermitianForm(1 if self.D == -4 else 3)
        C = H.C
        Cinv = _inv3(C)
        gs = [[e.to_field() for e in row] for row in self.conj_transpose().rows()]
        prod = _mat3(_mat3(Cinv, gs), C)
        return GroupElement([e.to_ring() for row in prod for e in row], self.D)

    def det(self):
        e = self.entries
        return (e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self._key == other._key and self.D == other.D

    def __hash__(self):
        return hash(self._key)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = GroupElement.identity(self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def order(self, cap=1000):
        g = self
        ident = GroupElement.identity(self.D)
        for k in range(1, cap + 1):
            if g == ident:
                return k
            g = g * self
        raise ValueError("element order exceeds cap")

    def to_text(self):
        from .field import format_ring
        return " ".join(format_ring(e) for e in self.entries)

    @classmethod
    def from_text(cls, text, d):
        from .field import parse_ring
        parts = text.split()
        return cls([parse_ring(p, d) for p in parts], field(d).D)

    def __repr__(self):
        return "GroupElement([" + "; ".join(
            ", ".join(str(e.to_field()) for e in row) for row in self.rows()) + "])"


def _mat3(a, b):
    return [[a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3)]
            for i in range(3)]


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _adj3(m):
    def minor(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        return m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
    return [[minor(j, i) * (1 if (i + j) % 2 == 0 else -1) for j in range(3)] for i in range(3)]


def _inv3(m):
    det = _det3(m)
    inv = det.inverse()
    return [[e * inv for e in row] for row in _adj3(m)]


def _matmul_key(a, b, D):
    out = []
    for i in range(3):
        for j in range(3):
            s = t = 0
            for k in range(3):
                x, y = a[3 * i + k]
                u, v = b[3 * k + j]
                if (x or y) and (u or v):
                    ss, tt, _ = ring_mul(x, y, u, v, D)
                    s += ss
                    t += tt
            out.append((s, t))
    return tuple(out)


def is_member(g, d=None):
    """True iff g has entries in O, det g = 1 and g^* C g = C (exactly)."""
    if isinstance(g, GroupElement):
        ents = g.entries
        D = g.D
    else:
        ents = [e for row in g for e in row] if len(g) == 3 else list(g)
        D = _disc_of(ents) if d is None else field(d).D
        try:
            ents = [_f(e, D) for e in ents]
            if not all(e.is_integral() for e in ents):
                return False
            ents = [e.to_ring() for e in ents]
        except ValueError:
            return False
    g = GroupElement(ents, D)
    if g.det() != 1:
        return False
    H = HermitianForm(1 if D == -4 else 3)
    cols = [tuple(g.entries[3 * i + j] for i in range(3)) for j in range(3)]
    for a in range(3):
        for b in range(3):
            if H.value(cols[a], cols[b]) != H.C[a][b]:
                return False
    return True


class FiniteGroup:
    """Explicit finite matrix group: element list plus index lookup."""

    def __init__(self, elements):
        self.elements = list(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.index

    def order(self):
        return len(self.elements)

    def mul(self, i, j):
        return self.index[self.elements[i] * self.elements[j]]

    def is_abelian(self):
        return all(a * b == b * a for a in self.elements for b in self.elements)

    def as_set(self):
        return frozenset(self.elements)


class CapExceeded(RuntimeError):
    pass


def closure(gens, cap=10000, D=None):
    """Subgroup generated by gens, by breadth-first multiplication."""
    gens = list(gens)
    if D is None:
        if not gens:
            raise ValueError("empty generator list needs D")
        D = gens[0].D
    ident = GroupElement.identity(D)
    seen = {ident}
    order = [ident]
    frontier = deque([ident])
    while frontier:
        g = frontier.popleft()
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                order.append(h)
                frontier.append(h)
                if len(order) > cap:
                    raise CapExceeded(f"subgroup order exceeds {cap}")
    return FiniteGroup(order)


def reduce_mod(g, R):
    """Entrywise reduction of g into the residue ring R (tuple of 9 indices)."""
    return tuple(R.index(e.s, e.t) for e in g.entries)


def matmul_mod(a, b, R):
    mul, add = R.mul_table, R.add_table
    out = []
    for i in range(3):
        for j in range(3):
            acc = 0
            for k in range(3):
                acc = add[acc][mul[a[3 * i + k]][b[3 * k + j]]]
            out.append(acc)
    return tuple(out)


def right_act(v, g, R):
    """Row vector v (residue indices) times g reduced mod N."""
    m = reduce_mod(g, R) if isinstance(g, GroupElement) else g
    mul, add = R.mul_table, R.add_table
    return tuple(add[add[mul[v[0]][m[j]]][mul[v[1]][m[3 + j]]]][mul[v[2]][m[6 + j]]]
                 for j in range(3))


def eisenstein_generators():
    """The named matrices w, tau, gamma1, gamma2, epsilon, sigma over Z[zeta]."""
    F = field(3)
    D = F.D
    z = F.zeta
    s3 = F.sqrtD.to_ring()  # sqrt(-3) = 2 zeta - 1

    def zp(k):
        return z ** (k % 6)

    one, zero = F.ring(1), F.ring(0)
    mats = {
        "w": [zero, zero, -one, zero, one, zero, one, zero, zero],
        "tau": [one, zero, one, zero, one, zero, zero, zero, one],
        "gamma1": [zp(5), zero, zp(2), -one, zp(2), one, zp(4), s3 * z, one],
        "gamma2": [-one, s3, zp(5), zero, one, -one, -one, s3, zp(4)],
        "epsilon": [z, zero, zero, zero, zp(-2), zero, zero, zero, z],
        "sigma": [one, s3, z, zero, one, one, zero, zero, one],
    }
    return {name: GroupElement(ents, D) for name, ents in mats.items()}


def random_word(gens, length, rng):
    g = GroupElement.identity(gens[0].D)
    for _ in range(length):
        s = rng.choice(gens)
        if rng.random() < 0.5:
            s = s.inverse()
        g = g * s
    return g
