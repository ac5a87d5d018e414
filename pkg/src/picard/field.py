"""Exact arithmetic in k = Q(sqrt(D)) for D = -4, -3, its ring of integers
O = Z[omega] with omega = (D + sqrt(D))/2, residue rings O/N and projective
points over them.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from itertools import product

SUPPORTED = (1, 3)


class FieldParams:
    """Parameters of the field Q(sqrt(-d)), d in {1, 3}."""

    def __init__(self, d):
        if d not in SUPPORTED:
            raise ValueError(f"unsupported field d={d}; expected one of {SUPPORTED}")
        self.d = d
        self.D = -4 if d == 1 else -3
        self.omega = RingElement(0, 1, self.D)
        if d == 1:
            self.units = [self.ring(1), self.ring(-1), self.ring(2, 1), self.ring(-2, -1)]
        else:
            zeta = self.ring(2, 1)
            self.units = [zeta ** k for k in range(6)]
        self.sqrtD = FieldElement(0, 1, self.D)

    def ring(self, s, t=0):
        return RingElement(s, t, self.D)

    def elem(self, x, y=0):
        return FieldElement(x, y, self.D)

    @property
    def zeta(self):
        """Primitive unit of largest order: i for d=1, (1+sqrt(-3))/2 for d=3."""
        return self.ring(2, 1)

    def __eq__(self, other):
        return isinstance(other, FieldParams) and other.d == self.d

    def __hash__(self):
        return hash(("FieldParams", self.d))

    def __repr__(self):
        return f"FieldParams(d={self.d})"


@lru_cache(maxsize=None)
def field(d):
    return FieldParams(d)


def field_of_disc(D):
    return field(1 if D == -4 else 3)


def _check(a, b):
    if a.D != b.D:
        raise ValueError("elements of different fields")


class FieldElement:
    """x + y*sqrt(D) with rational x, y."""

    __slots__ = ("x", "y", "D")

    def __init__(self, x, y, D):
        self.x = Fraction(x)
        self.y = Fraction(y)
        self.D = D

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            _check(self, other)
            return other
        if isinstance(other, RingElement):
            _check(self, other)
            return other.to_field()
        if isinstance(other, (int, Fraction)):
            return FieldElement(other, 0, self.D)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.x + o.x, self.y + o.y, self.D)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.x, -self.y, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.x - o.x, self.y - o.y, self.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.x * o.x + self.D * self.y * o.y,
                            self.x * o.y + self.y * o.x, self.D)

    __rmul__ = __mul__

    def conj(self):
        return FieldElement(self.x, -self.y, self.D)

    def norm(self):
        return self.x * self.x - self.D * self.y * self.y

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.x / n, -self.y / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = FieldElement(1, 0, self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        if isinstance(other, RingElement):
            other = other.to_field()
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.D == other.D and self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.y == 0 and self.x.denominator == 1:
            return hash(int(self.x)) if self.x else 0
        return hash((self.x, self.y, self.D))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def is_integral(self):
        t = 2 * self.y
        s = self.x - self.y * self.D
        return t.denominator == 1 and s.denominator == 1

    def to_ring(self):
        """Convert to RingElement; raises ValueError when not in O."""
        t = 2 * self.y
        s = self.x - self.y * self.D
        if t.denominator != 1 or s.denominator != 1:
            raise ValueError(f"{self} is not an algebraic integer")
        return RingElement(int(s), int(t), self.D)

    def to_complex(self):
        return complex(float(self.x), float(self.y) * math.sqrt(-self.D))

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        return f"{self.x}+{self.y}*sqrt({self.D})"


class RingElement:
    """s + t*omega, an element of O."""

    __slots__ = ("s", "t", "D")

    def __init__(self, s, t, D):
        self.s = int(s)
        self.t = int(t)
        self.D = D

    def _coerce(self, other):
        if isinstance(other, RingElement):
            _check(self, other)
            return other
        if isinstance(other, int):
            return RingElement(other, 0, self.D)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (FieldElement, Fraction)):
            return self.to_field() + other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.s + o.s, self.t + o.t, self.D)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(-self.s, -self.t, self.D)

    def __sub__(self, other):
        if isinstance(other, (FieldElement, Fraction)):
            return self.to_field() - other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.s - o.s, self.t - o.t, self.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (FieldElement, Fraction)):
            return self.to_field() * other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        s, t, D = ring_mul(self.s, self.t, o.s, o.t, self.D)
        return RingElement(s, t, D)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.to_field() ** k
        out = RingElement(1, 0, self.D)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, other):
        return self.to_field() / other

    def conj(self):
        # conj(omega) = D - omega
        return RingElement(self.s + self.t * self.D, -self.t, self.D)

    def norm(self):
        return ring_norm(self.s, self.t, self.D)

    def to_field(self):
        return FieldElement(Fraction(self.s) + Fraction(self.t * self.D, 2),
                            Fraction(self.t, 2), self.D)

    def to_complex(self):
        return complex(self.s + self.t * self.D / 2, self.t * math.sqrt(-self.D) / 2)

    def is_unit(self):
        return self.norm() == 1

    def __eq__(self, other):
        if isinstance(other, int):
            return self.t == 0 and self.s == other
        if isinstance(other, FieldElement):
            return self.to_field() == other
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.s == other.s and self.t == other.t and self.D == other.D

    def __hash__(self):
        if self.t == 0:
            return hash(self.s)
        return hash((self.s, self.t, self.D))

    def __bool__(self):
        return bool(self.s) or bool(self.t)

    def divmod(self, other):
        """Euclidean division with remainder of smaller norm."""
        q = (self.to_field() / other.to_field())
        t = 2 * q.y
        s = q.x - q.y * self.D
        qr = RingElement(_round(s), _round(t), self.D)
        return qr, self - qr * other

    def divides(self, other):
        if not self:
            return not other
        return (other.to_field() / self.to_field()).is_integral()

    def key(self):
        # prefer large real part, then large imaginary part
        return (self.norm(), -(2 * self.s + self.t * self.D), -self.t)

    def __repr__(self):
        return f"RingElement({self})"

    def __str__(self):
        return f"{self.s}+{self.t}*w"


def _round(q):
    # round half up, deterministic
    return math.floor(q + Fraction(1, 2))


def ring_mul(s1, t1, s2, t2, D):
    # omega^2 = D*omega - (D^2 - D)/4
    c = (D * D - D) // 4
    tt = t1 * t2
    return s1 * s2 - c * tt, s1 * t2 + s2 * t1 + D * tt, D


def ring_norm(s, t, D):
    return s * s + D * s * t + t * t * (D * D - D) // 4


def norm(a):
    """|a|^2 for a field or ring element."""
    return a.norm()


def canonical_associate(a):
    """Unit multiple of a with the largest real part, ties broken by the
    largest imaginary part."""
    F = field_of_disc(a.D)
    return min((u * a for u in F.units), key=RingElement.key)


def gcd(a, b):
    """Generator of the ideal (a, b), normalised to its canonical associate."""
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        _, r = a.divmod(b)
        a, b = b, r
    return canonical_associate(a)


def gcd_many(elems):
    g = None
    for e in elems:
        if not e:
            continue
        g = e if g is None else gcd(g, e)
    if g is None:
        raise ValueError("gcd of zeros")
    return canonical_associate(g)


def _hnf2(cols):
    """Upper-triangular Hermite basis (a, b, c) of the Z-span of 2-vectors,
    lattice = {(a*i + b*j, c*j)}; requires full rank."""
    # column operations on integer 2-vectors (s, t)
    vecs = [tuple(v) for v in cols if v[0] or v[1]]
    # eliminate the t-coordinate down to one vector by gcd
    c_vec = None
    rest = []
    for v in vecs:
        if c_vec is None:
            if v[1]:
                c_vec = v
            else:
                rest.append(v)
            continue
        x, y = c_vec, v
        while y[1]:
            q = x[1] // y[1]
            x, y = y, (x[0] - q * y[0], x[1] - q * y[1])
        c_vec = x
        rest.append(y)
    if c_vec is None:
        raise ValueError("lattice not of full rank")
    if c_vec[1] < 0:
        c_vec = (-c_vec[0], -c_vec[1])
    a = 0
    for v in rest:
        a = math.gcd(a, v[0])
    if a == 0:
        raise ValueError("lattice not of full rank")
    return a, c_vec[0] % a, c_vec[1]


class ResidueRing:
    """O / N O with canonical representatives (s, t), 0 <= t < c, 0 <= s < a.

    Residues are addressed by integer index ``s + a*t``.
    """

    def __init__(self, N):
        if not N:
            raise ValueError("modulus must be nonzero")
        self.D = N.D
        self.field = field_of_disc(N.D)
        self.modulus = canonical_associate(N)
        w = self.modulus * self.field.omega
        a, b, c = _hnf2([(self.modulus.s, self.modulus.t), (w.s, w.t)])
        self.basis = ((a, b), (0, c))
        self._a, self._b, self._c = a, b, c
        self.size = a * c
        self._build_tables()

    def _build_tables(self):
        n = self.size
        self.elements = [self.lift(i) for i in range(n)]
        D = self.D
        mul = [[0] * n for _ in range(n)]
        add = [[0] * n for _ in range(n)]
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                s, t, _ = ring_mul(x.s, x.t, y.s, y.t, D)
                mul[i][j] = self.index(s, t)
                add[i][j] = self.index(x.s + y.s, x.t + y.t)
        self.mul_table = mul
        self.add_table = add
        self.neg_table = [self.index(-x.s, -x.t) for x in self.elements]
        one = self.index(1, 0) if n > 1 else 0
        self.one = one
        self.zero = 0
        self.inv_table = [None] * n
        for i in range(n):
            for j in range(n):
                if mul[i][j] == one:
                    self.inv_table[i] = j
                    break
        self.units = [i for i in range(n) if self.inv_table[i] is not None]

    def __len__(self):
        return self.size

    def index(self, s, t):
        a, b, c = self._a, self._b, self._c
        k = t // c
        t -= k * c
        s = (s - k * b) % a
        return s + a * t

    def reduce(self, x):
        """Index of the residue class of a RingElement or int."""
        if isinstance(x, int):
            return self.index(x, 0)
        if isinstance(x, FieldElement):
            x = x.to_ring()
        return self.index(x.s, x.t)

    def lift(self, i):
        a = self._a
        return RingElement(i % a, i // a, self.D)

    def add(self, i, j):
        return self.add_table[i][j]

    def mul(self, i, j):
        return self.mul_table[i][j]

    def neg(self, i):
        return self.neg_table[i]

    def invert(self, i):
        r = self.inv_table[i]
        if r is None:
            raise ZeroDivisionError(f"residue {self.lift(i)} is not invertible mod {self.modulus}")
        return r

    def is_primitive(self, coords):
        """True when the lifted residues together with N generate O."""
        if self.size == 1:
            return True
        gens = [self.modulus, self.modulus * self.field.omega]
        for i in coords:
            x = self.lift(i)
            gens += [x, x * self.field.omega]
        g = 0
        vecs = [(e.s, e.t) for e in gens]
        # index of the Z-span = gcd of 2x2 minors
        for i in range(len(vecs)):
            for j in range(i + 1, len(vecs)):
                g = math.gcd(g, vecs[i][0] * vecs[j][1] - vecs[i][1] * vecs[j][0])
                if g == 1:
                    return True
        return g == 1

    def __repr__(self):
        return f"ResidueRing({self.modulus}, size={self.size})"


def residue_ring(N):
    return ResidueRing(N)


class ProjectivePoint:
    """[x1:x2:x3] over O/N stored as its canonical (lexicographically least)
    scalar multiple; coordinates are residue indices."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        coords = tuple(coords)
        if not ring.is_primitive(coords):
            raise ValueError(f"{coords} is not primitive mod {ring.modulus}")
        self.ring = ring
        self.coords = canonical_projective(ring, coords)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.coords == other.coords \
            and self.ring.modulus == other.ring.modulus

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "[" + ":".join(str(self.ring.lift(c)) for c in self.coords) + "]"


def canonical_projective(ring, coords):
    mul = ring.mul_table
    return min(tuple(mul[u][c] for c in coords) for u in ring.units)


def projective_points(ring):
    n = ring.size
    pts = set()
    for coords in product(range(n), repeat=3):
        if ring.is_primitive(coords):
            pts.add(canonical_projective(ring, coords))
    return sorted(pts)


_TERM = re.compile(r"([+-]?)\s*([0-9/]*)\s*\*?\s*(sqrt\(\s*-?\d+\s*\)|w|omega|i|zeta)?\s*")


def parse_element(text, d):
    """Parse "a+b*sqrt(D)", "a+b*i", "s+t*w" style text into a FieldElement."""
    F = field(d)
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty element")
    out = F.elem(0)
    pos = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r}")
        sign, coef, unit = m.groups()
        if not coef and not unit:
            raise ValueError(f"cannot parse {text!r}")
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        if unit is None:
            val = F.elem(c)
        elif unit in ("w", "omega"):
            val = F.omega.to_field() * c
        elif unit == "zeta":
            val = F.zeta.to_field() * c
        elif unit == "i":
            if d != 1:
                raise ValueError("'i' only lies in Q(i)")
            val = F.elem(0, Fraction(1, 2)) * c
        else:
            rad = int(unit[5:-1])
            if rad == F.D:
                val = F.elem(0, c)
            elif d == 1 and rad == -1:
                val = F.elem(0, c / 2)
            else:
                raise ValueError(f"sqrt({rad}) is not sqrt(D) for d={d}")
        out = out + val
        pos = m.end()
    return out


def parse_level(text, d):
    """Parse a level string and return its canonical associate in O."""
    x = parse_element(text, d)
    r = x.to_ring()
    if not r:
        raise ValueError("level must be nonzero")
    return canonical_associate(r)


def format_level(a):
    """Human form a+b*i (d=1) or a+b*zeta (d=3); parse_level reads it back."""
    # omega = i - 2 for D = -4 and zeta - 2 for D = -3
    a0, b = a.s - 2 * a.t, a.t
    name = "i" if a.D == -4 else "zeta"
    if not b:
        return str(a0)
    if not a0:
        return f"{b}*{name}"
    return f"{a0}{b:+d}*{name}"


def format_ring(a):
    return f"{a.s}{a.t:+d}*w"


_RING = re.compile(r"^(-?\d+)([+-]\d+)\*w$")


def parse_ring(text, d):
    """Inverse of format_ring (also accepts any parse_element form)."""
    m = _RING.match(text)
    if m:
        return RingElement(int(m.group(1)), int(m.group(2)), field(d).D)
    return parse_element(text, d).to_ring()
