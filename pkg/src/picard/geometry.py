"""Siegel-domain points, exhaustion functions, first contacts and the
bounded search for admissible sets of cusps.

Combinatorial decisions (isotropy, |Q|^2, candidate bounds) are exact.
Floating point is confined to points of the symmetric space: tie loci,
witness points and short-vector enumeration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .field import FieldElement, RingElement, canonical_associate, field, gcd_many
from .group import q_abs2, scaled_form

TIE_TOL = 1e-9
MARGIN_TOL = 1e-6


class IsotropicVector:
    """Primitive isotropic (n, p, q) in O^3, stored as a canonical unit multiple.

    The canonical multiple is the one whose reversed coordinate keys are least,
    so vectors with q = 1 keep q = 1.
    """

    __slots__ = ("coords", "key", "_cx")

    def __init__(self, coords, check=True):
        coords = tuple(coords)
        D = coords[0].D
        if check:
            if not any(coords):
                raise ValueError("zero vector")
            if not is_isotropic(coords):
                raise ValueError(f"{coords} is not isotropic")
        best = None
        for u in field(1 if D == -4 else 3).units:
            c = tuple(u * a for a in coords)
            k = tuple((a.s, a.t) for a in c)
            rk = tuple(a.key() for a in reversed(c))
            if best is None or rk < best[0]:
                best = (rk, c, k)
        self.coords = best[1]
        self.key = best[2]
        self._cx = None

    @property
    def D(self):
        return self.coords[0].D

    @property
    def n(self):
        return self.coords[0]

    @property
    def p(self):
        return self.coords[1]

    @property
    def q(self):
        return self.coords[2]

    def complex(self):
        if self._cx is None:
            self._cx = np.array([a.to_complex() for a in self.coords])
        return self._cx

    def is_primitive(self):
        return gcd_many(self.coords).norm() == 1

    def __eq__(self, other):
        return isinstance(other, IsotropicVector) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return hash(self.key)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return 3

    def __repr__(self):
        return "(" + ", ".join(_fmt_cx(a.to_complex()) for a in self.coords) + ")"


def _fmt_cx(z):
    re, im = round(z.real, 6), round(z.imag, 6)
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return f"{im:g}i"
    return f"{re:g}{im:+g}i"


class AdmissibleSet:
    """Finite set of cusps, kept as a sorted tuple of canonical vectors."""

    __slots__ = ("vectors", "key", "_pairs")

    def __init__(self, vectors):
        vs = sorted(set(_iso(v) for v in vectors))
        if not vs:
            raise ValueError("empty set")
        self.vectors = tuple(vs)
        self.key = tuple(v.key for v in vs)
        self._pairs = None

    @property
    def D(self):
        return self.vectors[0].D

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def __contains__(self, v):
        return v in self.vectors

    def __eq__(self, other):
        return isinstance(other, AdmissibleSet) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return (len(self), self.key) < (len(other), other.key)

    def issubset(self, other):
        return set(self.vectors) <= set(other.vectors)

    def pairwise(self):
        """{(i, j): |Q(v_i, v_j)|^2} for i < j, exact."""
        if self._pairs is None:
            self._pairs = {(i, j): q_abs2(a.coords, b.coords)
                           for (i, a), (j, b) in combinations(enumerate(self.vectors), 2)}
        return self._pairs

    def vector_profile(self, i):
        pr = self.pairwise()
        return tuple(sorted(pr[min(i, j), max(i, j)] for j in range(len(self)) if j != i))

    def profile(self):
        """Conjugation invariant: sorted per-vector |Q|^2 profiles and span rank."""
        return (tuple(sorted(self.vector_profile(i) for i in range(len(self)))), self.span_rank())

    def span_rank(self):
        vs = self.vectors
        if len(vs) == 1:
            return 1
        for a, b, c in combinations(vs, 3):
            if det3(a.coords, b.coords, c.coords):
                return 3
        for a, b in combinations(vs, 2):
            m = [(a[i] * b[j] - a[j] * b[i]) for i, j in ((0, 1), (0, 2), (1, 2))]
            if any(m):
                return 2
        return 1

    def act(self, g):
        """The image set g . I (column action, canonicalised)."""
        return AdmissibleSet(IsotropicVector(g.apply(v.coords), check=False) for v in self.vectors)

    def minus(self, v):
        return AdmissibleSet(w for w in self.vectors if w != v)

    def to_text(self):
        from .field import format_ring
        return " ; ".join(" ".join(format_ring(a) for a in v.coords) for v in self.vectors)

    def __repr__(self):
        return "{" + ", ".join(repr(v) for v in self.vectors) + "}"


def det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
            + c[0] * (a[1] * b[2] - a[2] * b[1]))


def is_isotropic(v):
    """Exact test of |p|^2 = (n conj(q) - conj(n) q)/sqrt(D)."""
    v = tuple(v)
    if not any(v):
        return False
    return not scaled_form(v, v)


def vector(coords):
    """Canonical IsotropicVector from integers or RingElements (field inferred)."""
    return IsotropicVector(coords)


@dataclass(frozen=True)
class SpineConstants:
    d: int
    height_floor: Fraction

    @property
    def v0(self):
        F = field(self.d)
        return IsotropicVector((F.ring(1), F.ring(0), F.ring(0)))

    @property
    def vw(self):
        F = field(self.d)
        return IsotropicVector((F.ring(0), F.ring(0), F.ring(1)))


# Lower bounds for the height of spine points; the computed spine minima are
# 0.707 (d=1) and 0.760 (d=3).
DEFAULT_FLOOR = {1: Fraction(2, 3), 3: Fraction(3, 4)}


def constants(d, floor=None):
    return SpineConstants(d, Fraction(floor) if floor is not None else DEFAULT_FLOOR[d])


class SiegelPoint:
    """Point (z, u) of the Siegel domain |u|^2 < 2 Im z / sqrt|D|."""

    __slots__ = ("z", "u", "D")

    def __init__(self, z, u, D):
        self.z = complex(z)
        self.u = complex(u)
        self.D = D

    @classmethod
    def from_horospherical(cls, y, beta, r, D):
        sD = 1j * math.sqrt(-D)
        z = r + 1j * y * y - abs(beta) ** 2 / (2 * sD)
        u = -complex(beta).conjugate() / sD
        return cls(z, u, D)

    @classmethod
    def from_vector(cls, x, D):
        x = np.asarray(x, dtype=complex)
        return cls(x[0] / x[2], x[1] / x[2], D)

    @classmethod
    def from_params(cls, p, D):
        return cls(complex(p[0], p[1]), complex(p[2], p[3]), D)

    def params(self):
        return np.array([self.z.real, self.z.imag, self.u.real, self.u.imag])

    @property
    def beta(self):
        sD = 1j * math.sqrt(-self.D)
        return -(self.u * sD).conjugate()

    @property
    def y(self):
        return math.sqrt(self.neg_norm() * math.sqrt(-self.D) / 2)

    @property
    def r(self):
        sD = 1j * math.sqrt(-self.D)
        return (self.z + abs(self.beta) ** 2 / (2 * sD)).real

    def vector(self):
        return np.array([self.z, self.u, 1], dtype=complex)

    def neg_norm(self):
        """-Q(X, X) for X = (z, u, 1)."""
        return 2 * self.z.imag / math.sqrt(-self.D) - abs(self.u) ** 2

    def in_domain(self):
        return self.neg_norm() > 0

    def act(self, g):
        """Image under a group element acting on column vectors."""
        M = np.array([[e.to_complex() for e in row] for row in g.rows()])
        return SiegelPoint.from_vector(M @ self.vector(), self.D)

    def __repr__(self):
        return f"SiegelPoint(z={self.z:.6g}, u={self.u:.6g})"


def form_matrix(D):
    sD = 1j * math.sqrt(-D)
    return np.array([[0, 0, 1 / sD], [0, 1, 0], [-1 / sD, 0, 0]], dtype=complex)


def _Qc(x, v, C):
    return np.conj(x) @ C @ v


def exhaustion(v, X):
    """f_P(X) = f_0(X) / |Q(sqrt(D) X, v_P)| with f_0(X) = y."""
    D = X.D
    C = form_matrix(D)
    x = X.vector()
    vc = v.complex() if isinstance(v, IsotropicVector) else np.array([a.to_complex() for a in v])
    denom = math.sqrt(-D) * abs(_Qc(x, vc, C))
    if denom < 1e-300:
        raise ValueError("point lies on the boundary hyperplane of the cusp")
    if not X.in_domain():
        raise ValueError("point is outside the Siegel domain")
    return X.y / denom


@dataclass
class FirstContact:
    point: SiegelPoint
    height4: Fraction  # f^4 at the first contact, exact

    @property
    def height2(self):
        return math.sqrt(self.height4)


def first_contact(vP, vQ):
    """First contact of the pair of cusps.

    The point is the negative vector vP - (conj Q(vP,vQ)/|Q|) vQ on the
    complex geodesic joining the two cusps; the squared height is
    1/(sqrt|D| |Q(vP,vQ)|) and is returned exactly as its square.
    """
    vP, vQ = _iso(vP), _iso(vQ)
    if vP == vQ:
        raise ValueError("cusps coincide")
    a2 = q_abs2(vP.coords, vQ.coords)
    if a2 == 0:
        raise ValueError("Q(vP, vQ) = 0: the cusps have no first contact")
    D = vP.D
    C = form_matrix(D)
    qpq = np.conj(vP.complex()) @ C @ vQ.complex()
    x = vP.complex() - (np.conj(qpq) / abs(qpq)) * vQ.complex()
    return FirstContact(SiegelPoint.from_vector(x, D), 1 / (a2 * (-D)))


def _iso(v):
    return v if isinstance(v, IsotropicVector) else IsotropicVector(v)


STANDARD = "STANDARD"


def classify_pair(vP, vQ):
    """STANDARD when |Q(vP,vQ)|^2 = 1/|D|, otherwise the exact |Q|^2."""
    vP, vQ = _iso(vP), _iso(vQ)
    if vP == vQ:
        raise ValueError("classify_pair needs two distinct cusps")
    a2 = q_abs2(vP.coords, vQ.coords)
    if a2 == Fraction(1, -vP.D):
        return STANDARD
    return a2


def _ring_box(D, radius):
    """All RingElements with |x| <= radius."""
    out = []
    R = int(math.ceil(radius)) + 2
    # s + t omega: |Im| = |t| sqrt|D|/2
    tmax = int(math.floor(2 * radius / math.sqrt(-D))) + 1
    for t in range(-tmax, tmax + 1):
        for s in range(-R - abs(t) * 3, R + abs(t) * 3 + 1):
            x = RingElement(s, t, D)
            if x.norm() <= radius * radius + 1e-9:
                out.append(x)
    return out


def candidate_pairs(floor, d):
    """Isotropic (n, p, q), q != 0, that can pair with v0 above the floor.

    norm(q) <= 1/floor^4; p/q reduced into the fundamental parallelogram
    of C/O; Re(n/q) reduced into [0, 1).
    """
    floor = Fraction(floor)
    if floor <= 0:
        raise ValueError("floor must be positive")
    F = field(d)
    D = F.D
    bound = 1 / floor ** 4
    qs = set()
    for q in _ring_box(D, math.sqrt(float(bound))):
        if q and Fraction(q.norm()) <= bound:
            qs.add(canonical_associate(q))
    out = set()
    for q in sorted(qs, key=RingElement.key):
        for p in _residues(q):
            # Im(n conj q) = sqrt|D| |p|^2 / 2, Re(n/q) in [0, 1)
            nq = q.norm()
            pn = p.norm()
            radius = math.sqrt(nq) * (1 + math.sqrt(-D) * pn / (2 * nq)) + 1
            for n in _ring_box(D, radius):
                v = (n, p, q)
                if not is_isotropic(v):
                    continue
                ratio = n.to_field() / q.to_field()
                if not (0 <= ratio.x < 1):
                    continue
                if gcd_many(v).norm() != 1:
                    continue
                out.add(IsotropicVector(v))
    return sorted(out)


def _residues(q):
    """Representatives p of O/qO with p/q in the parallelogram [0,1) + [0,1) omega."""
    D = q.D
    F = field(1 if D == -4 else 3)
    qf = q.to_field()
    nq = q.norm()
    out = []
    R = int(math.isqrt(nq)) * 3 + 3
    for s in range(-R, R + 1):
        for t in range(-R, R + 1):
            p = RingElement(s, t, D)
            r = p.to_field() / qf
            # coordinates of r in the basis 1, omega
            b = 2 * r.y
            a = r.x - r.y * D
            if 0 <= a < 1 and 0 <= b < 1:
                out.append(p)
    return out




# --- numerical layer ------------------------------------------------------------
#
# Points of the symmetric space are parametrised by p = (Re z, Im z, Re u, Im u).
# phi_v(p) = log h_v with h_v = |Q(x, v)|^2 / -Q(x, x); f_v^2 = 1/(2 sqrt|D| h_v),
# so the largest exhaustion functions are the smallest h_v.


class Evaluator:
    """Vectorised log-heights, gradients and short isotropic vectors for one field."""

    def __init__(self, D):
        self.D = D
        self.C = form_matrix(D)
        self.sq = math.sqrt(-D)
        omega = (D + 1j * self.sq) / 2
        M = np.zeros((3, 6), dtype=complex)
        for i in range(3):
            M[i, 2 * i] = 1
            M[i, 2 * i + 1] = omega
        self.M = M

    @staticmethod
    def point(p):
        return np.array([p[0] + 1j * p[1], p[2] + 1j * p[3], 1], dtype=complex)

    def neg_norm(self, p):
        return 2 * p[1] / self.sq - p[2] ** 2 - p[3] ** 2

    def in_domain(self, p):
        return self.neg_norm(p) > 1e-12

    def logh(self, p, V):
        """phi_v(p) for the rows of V (k x 3 complex)."""
        x = self.point(p)
        a = (V @ self.C.T) @ np.conj(x)
        return np.log(np.abs(a) ** 2) - math.log(self.neg_norm(p))

    def grad(self, p, V):
        x = self.point(p)
        CV = V @ self.C.T
        a = CV @ np.conj(x)
        da = np.stack([CV[:, 0], -1j * CV[:, 0], CV[:, 1], -1j * CV[:, 1]], axis=1)
        dabs = 2 * np.real(np.conj(a)[:, None] * da)
        N = self.neg_norm(p)
        dN = np.array([0.0, 2 / self.sq, -2 * p[2], -2 * p[3]])
        return dabs / (np.abs(a) ** 2)[:, None] - dN[None, :] / N

    def short_isotropic(self, p, ratio):
        """All canonical isotropic v with h_v(p) <= ratio * min h, as sorted (h, v) pairs.

        Fincke-Pohst enumeration for the majorant Q(v,v) + 2|Q(x,v)|^2/-Q(x,x),
        which equals 2 h_v on isotropic vectors.
        """
        x = self.point(p)
        N = self.neg_norm(p)
        if N <= 0:
            raise ValueError("point outside the symmetric space")
        c = self.C.conj().T @ x
        H = self.C + 2 * np.outer(c, c.conj()) / N
        G = np.real(self.M.conj().T @ H @ self.M)
        G = (G + G.T) / 2
        e = np.array([[1, 0, 0], [0, 0, 1]], dtype=complex)
        h0 = float(np.min(np.exp(self.logh(p, e))))
        found = self._isotropic(G, 2 * h0 * (1 + 1e-9), p)
        hmin = found[0][0]
        if hmin * ratio > h0:
            found = self._isotropic(G, 2 * hmin * ratio * (1 + 1e-9), p)
        cut = hmin * ratio * (1 + 1e-12)
        return [hv for hv in found if hv[0] <= cut], hmin

    def _isotropic(self, G, bound, p):
        D = self.D
        seen = set()
        vecs = []
        for z in _fincke_pohst(G, bound):
            coords = tuple(RingElement(z[2 * i], z[2 * i + 1], D) for i in range(3))
            if scaled_form(coords, coords):
                continue
            if gcd_many(coords).norm() != 1:
                continue
            v = IsotropicVector(coords, check=False)
            if v not in seen:
                seen.add(v)
                vecs.append(v)
        hs = self.heights(p, vecs)
        return sorted(zip(hs.tolist(), vecs), key=lambda t: (t[0], t[1].key))

    def heights(self, p, vecs):
        if not vecs:
            return np.zeros(0)
        V = np.array([v.complex() for v in vecs])
        return np.exp(self.logh(p, V))


def _fincke_pohst(G, B):
    """Nonzero integer vectors z with z^T G z <= B."""
    n = G.shape[0]
    R = np.linalg.cholesky(G).T
    out = []
    x = [0] * n
    diag = [R[i, i] for i in range(n)]

    def rec(i, rem):
        c = -sum(R[i, j] * x[j] for j in range(i + 1, n)) / diag[i]
        r = math.sqrt(max(rem, 0.0)) / diag[i]
        for k in range(math.ceil(c - r - 1e-9), math.floor(c + r + 1e-9) + 1):
            t = diag[i] * (k - c)
            rem2 = rem - t * t
            if rem2 < -1e-9 * max(1.0, B):
                continue
            x[i] = k
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, rem2)
        x[i] = 0

    rec(n - 1, B)
    return out


_EVALUATORS = {}


def evaluator(D):
    if D not in _EVALUATORS:
        _EVALUATORS[D] = Evaluator(D)
    return _EVALUATORS[D]


def _V(vs):
    return np.array([v.complex() for v in vs])


def tie_residual(ev, p, vs):
    ph = ev.logh(p, _V(vs))
    return float(ph.max() - ph.min())


def correct(ev, p, vs, iters=40, tol=1e-14):
    """Gauss-Newton projection of p onto the tie locus of vs.

    Returns (point, residual); the residual stays large when the locus is empty nearby.
    """
    p = np.asarray(p, dtype=float)
    V = _V(vs)
    if len(vs) < 2:
        return p, 0.0
    res = tie_residual(ev, p, vs)
    for _ in range(iters):
        if res < tol:
            break
        ph = ev.logh(p, V)
        g = ev.grad(p, V)
        F = ph[1:] - ph[0]
        J = g[1:] - g[0]
        step = np.linalg.lstsq(J, F, rcond=None)[0]
        lam = 1.0
        while lam > 1e-6:
            q = p - lam * step
            if ev.in_domain(q):
                r = tie_residual(ev, q, vs)
                if r < res or lam < 1e-3:
                    break
            lam /= 2
        else:
            break
        if not ev.in_domain(q):
            break
        p, res = q, r
    return p, res


def tangent_basis(ev, p, vs, tol=1e-8):
    """Orthonormal basis (4 x k) of the tangent space of the tie locus at p."""
    if len(vs) < 2:
        return np.eye(4)
    g = ev.grad(p, _V(vs))
    J = g[1:] - g[0]
    _, s, vt = np.linalg.svd(J)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return vt[rank:].T


def jacobian_rank(ev, p, vs, tol=1e-8):
    return 4 - tangent_basis(ev, p, vs, tol).shape[1]


def min_set(ev, p, tol=1e-7):
    """(h_min, sorted vectors attaining it within relative tolerance)."""
    found, hmin = ev.short_isotropic(p, 1 + tol)
    return hmin, sorted(v for h, v in found)


def margin(ev, p, I, ratio=2.0):
    """Smallest log-gap phi_w - phi_I over w outside I, with the competitor list.

    Vectors outside the enumeration radius have gap at least log(ratio * hmin / h_I).
    """
    Iset = set(I)
    hI = float(np.exp(np.mean(ev.logh(p, _V(I)))))
    found, hmin = ev.short_isotropic(p, ratio)
    comp = [(math.log(h / hI), w) for h, w in found if w not in Iset]
    floor_gap = math.log(ratio * hmin / hI)
    m = min([c[0] for c in comp] + [floor_gap])
    return m, comp


def ascend(ev, p, I, target=0.05, iters=60):
    """Move p inside the tie locus of I to increase the margin against competitors.

    Piecewise-linear ascent: an LP picks the tangent direction that best
    separates the nearly active competitors, followed by a backtracking line search.
    """
    from scipy.optimize import linprog

    p, res = correct(ev, p, I)
    if res > TIE_TOL:
        return p, res, -math.inf
    m, comp = margin(ev, p, I)
    for _ in range(iters):
        if m >= target:
            break
        T = tangent_basis(ev, p, I)
        k = T.shape[1]
        if k == 0 or not comp:
            break
        active = [w for g, w in comp if g <= m + 0.05]
        gI = ev.grad(p, _V(I[:1]))[0]
        A = (ev.grad(p, _V(active)) - gI) @ T
        # maximise t subject to A delta >= t, |delta| <= 1
        A_ub = np.hstack([-A, np.ones((len(active), 1))])
        r = linprog(np.r_[np.zeros(k), -1.0], A_ub=A_ub, b_ub=np.zeros(len(active)),
                    bounds=[(-1, 1)] * k + [(None, 1)], method="highs")
        if r.status != 0 or -r.fun <= 1e-12:
            break
        delta = T @ r.x[:k]
        improved = False
        s = 0.2
        while s > 1e-7:
            q = p + s * delta
            if ev.in_domain(q):
                q, rq = correct(ev, q, I)
                if rq <= TIE_TOL and ev.in_domain(q):
                    mq, cq = margin(ev, q, I)
                    if mq > m + 1e-13:
                        p, m, comp, improved = q, mq, cq, True
                        break
            s /= 2
        if not improved:
            break
    return p, tie_residual(ev, p, I), m


def _starts(ev, I):
    pts = []
    for a, b in combinations(I, 2):
        if q_abs2(a.coords, b.coords) == 0:
            continue
        fc = first_contact(a, b)
        pts.append(fc.point.params())
    if pts:
        mean = np.mean(pts, axis=0)
        if ev.in_domain(mean):
            pts.insert(0, mean)
    return pts


@dataclass
class Witness:
    point: SiegelPoint
    tie: float
    margin: float


def _check_pairs(I):
    I = [_iso(v) for v in I]
    if len(set(I)) != len(I):
        raise ValueError("repeated vector")
    for a, b in combinations(I, 2):
        if q_abs2(a.coords, b.coords) == 0:
            raise ValueError(f"Q({a}, {b}) = 0")
    return sorted(I)


def search_witness(I, target=0.05):
    """Best point found for I: (point params, tie residual, margin)."""
    I = sorted(_iso(v) for v in I)
    ev = evaluator(I[0].D)
    best = None
    for s in _starts(ev, I):
        p, res, m = ascend(ev, s, I, target)
        if res <= TIE_TOL and (best is None or m > best[2]):
            best = (p, res, m)
        if best is not None and best[2] >= target:
            break
    return best


def is_strongly_admissible(I, return_witness=False):
    """Numeric verdict: is there a point where the f_P, P in I, tie and strictly
    exceed all other exhaustion functions (tie tolerance 1e-9, margin 1e-6)?"""
    I = _check_pairs(I)
    if len(I) < 2:
        raise ValueError("need at least two vectors")
    best = search_witness(I)
    ok = best is not None and best[2] > MARGIN_TOL
    if return_witness:
        w = None if best is None else Witness(SiegelPoint.from_params(best[0], I[0].D), best[1], best[2])
        return ok, w
    return ok


def is_admissible(I):
    """D(I) nonempty: the vectors of I tie at a point where nothing is strictly lower."""
    I = sorted(_iso(v) for v in I)
    best = search_witness(I, target=1e-3)
    return best is not None and best[2] > -MARGIN_TOL


def pair_bound(floor, D):
    """|Q(v, w)|^2 bound for cusps meeting above the height floor."""
    return 1 / (Fraction(-D) * Fraction(floor) ** 4)


def compatible_vectors(I, floor):
    """All canonical isotropic w outside I with |Q(v, w)|^2 <= pair bound for every v in I.

    Complete: at the first contact x of two members v1, v2 one has
    x = v1 - lambda v2 with |lambda| = 1 and -Q(x, x) = 2 |Q(v1, v2)|,
    so every such w has h_w(x) <= 2 B / |Q(v1, v2)| with B the pair bound.
    """
    I = _check_pairs(I)
    D = I[0].D
    B = pair_bound(floor, D)
    v1, v2 = I[0], I[1]
    q12 = q_abs2(v1.coords, v2.coords)
    ev = evaluator(D)
    x = first_contact(v1, v2).point.params()
    hb = 2 * float(B) / math.sqrt(float(q12))
    found, hmin = ev.short_isotropic(x, hb / ev.heights(x, [v1])[0] * (1 + 1e-9))
    Iset = set(I)
    out = []
    for _, w in found:
        if w in Iset:
            continue
        if all(0 < q_abs2(v.coords, w.coords) <= B for v in I):
            out.append(w)
    return sorted(out)


def admissible_supersets(I, floor=None, max_size=None):
    """All strongly admissible J strictly containing I, built by adjoining
    vectors compatible with the pairwise bound. Admissibility is monotone
    under removal, so one-vector extensions of admissible sets reach every J.
    The search is exponential in the number of compatible vectors; max_size
    stops it at sets of that size."""
    I = _check_pairs(I)
    d = 1 if I[0].D == -4 else 3
    floor = DEFAULT_FLOOR[d] if floor is None else Fraction(floor)
    B = pair_bound(floor, I[0].D)
    cands = compatible_vectors(I, floor)
    base = frozenset(I)
    frontier = {base}
    seen = {base}
    out = []
    while frontier and (max_size is None or len(next(iter(frontier))) < max_size):
        nxt = set()
        for S in frontier:
            for w in cands:
                if w in S:
                    continue
                J = S | {w}
                if J in seen:
                    continue
                seen.add(J)
                if not all(0 < q_abs2(v.coords, w.coords) <= B for v in S):
                    continue
                # every smaller superset of I inside J must already be admissible
                if any(J - {x} not in frontier for x in J - base if x != w):
                    continue
                Js = tuple(sorted(J))
                best = search_witness(Js)
                if best is None or best[2] <= -MARGIN_TOL:
                    continue
                nxt.add(J)
                if best[2] > MARGIN_TOL:
                    out.append(Js)
        frontier = nxt
    return sorted(out, key=lambda J: (len(J), [v.key for v in J]))


# --- walking the spine ------------------------------------------------------


def walk(ev, p, I, direction, max_steps=20000, ratio=1.5):
    """Follow the tie locus of I from p along direction until a new vector ties.

    Returns the endpoint (params). Steps are projected to the tangent space and
    corrected back onto the locus; the crossing is located by bisection.
    """
    I = list(I)
    Iset = set(I)
    d = np.asarray(direction, dtype=float)
    s = 1e-3
    for _ in range(max_steps):
        T = tangent_basis(ev, p, I)
        if T.shape[1] == 0:
            raise RuntimeError("tie locus is a point; nothing to walk")
        dd = T @ (T.T @ d)
        nd = np.linalg.norm(dd)
        if nd < 1e-12:
            raise RuntimeError("direction leaves the tie locus")
        d = dd / nd
        q, res = correct(ev, p + s * d, I)
        if res > TIE_TOL or not ev.in_domain(q):
            s /= 2
            if s < 1e-12:
                raise RuntimeError("lost the tie locus")
            continue
        hI = float(np.exp(np.mean(ev.logh(q, _V(I)))))
        found, hmin = ev.short_isotropic(q, ratio)
        comp = [(math.log(h / hI), w) for h, w in found if w not in Iset]
        worst = min(comp, key=lambda t: t[0]) if comp else (math.log(ratio * hmin / hI), None)
        if worst[0] <= 1e-12 and worst[1] is not None:
            w = worst[1]
            a, b = 0.0, s
            for _ in range(60):
                mid = (a + b) / 2
                qm, _ = correct(ev, p + mid * d, I)
                gap = ev.logh(qm, _V([w]))[0] - np.mean(ev.logh(qm, _V(I)))
                if gap > 0:
                    a = mid
                else:
                    b = mid
            q, _ = correct(ev, p + b * d, I)
            return q
        p = q
        s = min(0.02, max(1e-5, 0.3 * worst[0]))
    raise RuntimeError("walk did not reach a new tie")


def settle(ev, p, tol=1e-7):
    """Min-set at p, then polish p onto its tie locus."""
    _, S = min_set(ev, p, tol)
    p, _ = correct(ev, p, S)
    _, S = min_set(ev, p, tol)
    return p, S


def descend_to_vertex(ev, p, seed=0):
    """Walk from p along the spine until the tie locus is a point."""
    rng = np.random.default_rng(seed)
    p, S = settle(ev, np.asarray(p, dtype=float))
    for _ in range(20):
        if jacobian_rank(ev, p, S) == 4:
            return p, S
        p = walk(ev, p, S, rng.normal(size=4))
        p, S = settle(ev, p)
    raise RuntimeError("no vertex reached")


def vertex_faces(ev, p, S):
    """Subsets F of the vertex min-set S that index cells incident to the vertex.

    F qualifies when some direction delta has g_v . delta equal on F and
    strictly larger off F, with g the gradients of phi: the faces of the
    gradient polytope. Includes S itself; singletons are dropped.
    """
    from scipy.optimize import linprog

    G = ev.grad(p, _V(S))
    n = len(S)
    faces = []

    def is_face(F):
        out = [i for i in range(n) if i not in F]
        if not out:
            return True
        A_eq = [list(G[i]) + [-1.0, 0.0] for i in F]
        A_ub = [list(-G[i]) + [1.0, 1.0] for i in out]
        r = linprog(np.r_[np.zeros(5), -1.0], A_ub=A_ub, b_ub=np.zeros(len(out)),
                    A_eq=A_eq, b_eq=np.zeros(len(F)),
                    bounds=[(-1, 1)] * 5 + [(None, 1)], method="highs")
        return r.status == 0 and -r.fun > 1e-7

    for k in range(2, n + 1):
        for F in combinations(range(n), k):
            if is_face(F):
                faces.append(frozenset(S[i] for i in F))
    return faces


def face_dimension(ev, p, F):
    return 4 - jacobian_rank(ev, p, sorted(F))


def edge_direction(ev, p, S, F):
    """Unit tangent of the 1-cell D'(F) leaving the vertex p."""
    F = sorted(F)
    T = tangent_basis(ev, p, F)
    if T.shape[1] != 1:
        raise ValueError("not an edge")
    d = T[:, 0]
    G = ev.grad(p, _V(S))
    gF = ev.grad(p, _V(F[:1]))[0] @ d
    others = [G[i] @ d for i, v in enumerate(S) if v not in set(F)]
    if others and min(others) < gF:
        d = -d
    return d
