"""Transporters, stabilizers, the cell census and the flag-subdivided
equivariant complex.

Cells of the spine are indexed by admissible sets of cusps. The census walks
the spine from vertex to vertex; the equivariant complex is the barycentric
subdivision whose simplices are chains I0 < I1 < ... < Ij of incident cells.
"""
from __future__ import annotations

import logging
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations, permutations
from pathlib import Path

import numpy as np

from . import geometry as geo
from .field import FieldElement, RingElement, field, format_ring, parse_ring
from .geometry import AdmissibleSet, IsotropicVector, det3
from .group import FiniteGroup, GroupElement, closure, is_member, scaled_form

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


class CensusIncomplete(RuntimeError):
    """The spine exploration left the region guaranteed by the height floor."""


class TransporterNotFound(RuntimeError):
    pass


# --- transporters ---------------------------------------------------------------


def _exact_div(x, d):
    """x / d in O, or None."""
    n = d.norm()
    y = x * d.conj()
    if y.s % n or y.t % n:
        return None
    return RingElement(y.s // n, y.t // n, x.D)


def perp(a, b):
    """Nonzero c in O^3 with Q(a, c) = Q(b, c) = 0."""
    D = a[0].D
    sq = field(1 if D == -4 else 3).sqrtD.to_ring()
    # rows of (sqrt(D) C)^* applied to a: w^* c = sqrt(D) Q(a, c)
    def w(v):
        return (-v[2], sq.conj() * v[1], v[0])
    x, y = w(a), w(b)
    cr = (x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0])
    return tuple(e.conj() for e in cr)


def _adj_cols(cols):
    """Adjugate of the matrix with the given columns, as rows of RingElements."""
    m = [[cols[j][i] for j in range(3)] for i in range(3)]

    def minor(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        return m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
    return [[minor(j, i) * (1 if (i + j) % 2 == 0 else -1) for j in range(3)] for i in range(3)]


class _Frame:
    """Three columns a1, a2, a3 drawn from I (a3 = perp(a1, a2) for planar sets)."""

    def __init__(self, I):
        vs = I.vectors
        self.I = I
        self.idx = [0, 1]
        self.cols = [vs[0].coords, vs[1].coords]
        self.planar = True
        for k in range(2, len(vs)):
            if det3(vs[0].coords, vs[1].coords, vs[k].coords):
                self.idx.append(k)
                self.cols.append(vs[k].coords)
                self.planar = False
                break
        if self.planar:
            self.cols.append(perp(self.cols[0], self.cols[1]))
        self.det = det3(*self.cols)
        self.adj = _adj_cols(self.cols)
        self.q = {(i, j): scaled_form(self.cols[i], self.cols[j])
                  for i in range(len(self.idx)) for j in range(len(self.idx)) if i != j}


def _candidate_images(I, J, frame):
    """Assignments of frame vectors to vectors of J compatible with |Q|^2 profiles."""
    prof_I = [I.vector_profile(i) for i in frame.idx]
    prof_J = [J.vector_profile(j) for j in range(len(J))]
    pr_I, pr_J = I.pairwise(), J.pairwise()

    def q2(P, i, j):
        return P[min(i, j), max(i, j)]

    n = len(frame.idx)
    for combo in permutations(range(len(J)), n):
        if any(prof_J[c] != prof_I[k] for k, c in enumerate(combo)):
            continue
        ok = True
        for a in range(n):
            for b in range(a + 1, n):
                if q2(pr_J, combo[a], combo[b]) != q2(pr_I, frame.idx[a], frame.idx[b]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield combo


def _units(D):
    return field(1 if D == -4 else 3).units


def _unit_ratio(num, den, u1, units):
    """u with conj(u1) u den = num, if a unit; num, den are sqrt(D) Q values."""
    # u = u1 * num / den
    x = _exact_div(u1 * num, den)
    if x is None or x.norm() != 1:
        return None
    return x


def _solve(frame, targets):
    """gamma with gamma a_i = targets[i], or None when not integral."""
    if not frame.planar:
        cols = targets
        ents = []
        for i in range(3):
            for j in range(3):
                acc = cols[0][i] * frame.adj[0][j] + cols[1][i] * frame.adj[1][j] + cols[2][i] * frame.adj[2][j]
                q = _exact_div(acc, frame.det)
                if q is None:
                    return None
                ents.append(q)
        return GroupElement(ents, frame.det.D)
    # planar: third column is a field multiple of perp(b1, b2)
    b1, b2, lam_c = targets
    det = frame.det.to_field()
    ents = []
    for i in range(3):
        for j in range(3):
            acc = (b1[i].to_field() * frame.adj[0][j] + b2[i].to_field() * frame.adj[1][j]
                   + lam_c[i] * frame.adj[2][j]) / det
            if not acc.is_integral():
                return None
            ents.append(acc.to_ring())
    return GroupElement(ents, frame.det.D)


def _maps(I, J, first_only):
    I = I if isinstance(I, AdmissibleSet) else AdmissibleSet(I)
    J = J if isinstance(J, AdmissibleSet) else AdmissibleSet(J)
    if len(I) != len(J) or I.profile() != J.profile():
        return []
    if len(I) == 1:
        raise ValueError("transporters need at least two vectors")
    frame = _Frame(I)
    D = I.D
    units = _units(D)
    Jv = J.vectors
    out = []
    seen = set()
    for combo in _candidate_images(I, J, frame):
        bs = [Jv[c].coords for c in combo]
        qb12 = scaled_form(bs[0], bs[1])
        for u1 in units:
            u2 = _unit_ratio(frame.q[0, 1], qb12, u1, units)
            if u2 is None:
                continue
            t1 = tuple(u1 * e for e in bs[0])
            t2 = tuple(u2 * e for e in bs[1])
            if frame.planar:
                c = perp(bs[0], bs[1])
                dd = det3(t1, t2, c)
                lam = frame.det.to_field() / dd.to_field()
                t3 = tuple(lam * e.to_field() for e in c)
            else:
                u3 = _unit_ratio(frame.q[0, 2], scaled_form(bs[0], bs[2]), u1, units)
                if u3 is None:
                    continue
                t3 = tuple(u3 * e for e in bs[2])
            g = _solve(frame, (t1, t2, t3))
            if g is None or g in seen:
                continue
            if g.det() != 1 or not is_member(g):
                continue
            if I.act(g) != J:
                continue
            seen.add(g)
            out.append(g)
            if first_only:
                return out
    return out


def find_transporter(I, J):
    """Some gamma in the group with gamma . I = J up to units, or None."""
    r = _maps(I, J, True)
    return r[0] if r else None


def all_transporters(I, J):
    return _maps(I, J, False)


def stabilizer(I):
    """The finite group of elements permuting the cusps of I."""
    els = all_transporters(I, I)
    ident = GroupElement.identity(els[0].D)
    els.sort(key=lambda g: (g != ident, g.key()))
    return FiniteGroup(els)


def small_generating_set(group):
    """Greedy generating set of a finite group given by its elements."""
    gens = []
    sub = {GroupElement.identity(group.elements[0].D)}
    for g in group.elements:
        if g in sub:
            continue
        gens.append(g)
        sub = set(closure(gens).elements)
        if len(sub) == len(group):
            break
    return gens


# --- census -----------------------------------------------------------------------


@dataclass
class CellType:
    name: str
    rep: AdmissibleSet
    dim: int
    stab_gens: list
    stab_order: int
    _stab: FiniteGroup = dc_field(default=None, repr=False)

    @property
    def stab(self):
        if self._stab is None:
            self._stab = closure(self.stab_gens, D=self.rep.D) if self.stab_gens else \
                FiniteGroup([GroupElement.identity(self.rep.D)])
        return self._stab


class Classifier:
    """Assigns admissible sets to cell types, returning transporters g with g . rep = I."""

    def __init__(self, types=()):
        self.types = list(types)
        self._bucket = defaultdict(list)
        self._cache = {}
        for t in self.types:
            self._bucket[self._inv(t.rep)].append(t)

    @staticmethod
    def _inv(I):
        return (len(I), I.profile())

    def add(self, t):
        self.types.append(t)
        self._bucket[self._inv(t.rep)].append(t)

    def find(self, I):
        """(type, g) with g . type.rep = I, or None when I has no known type."""
        if I in self._cache:
            return self._cache[I]
        res = None
        for t in self._bucket.get(self._inv(I), ()):
            g = find_transporter(t.rep, I)
            if g is not None:
                res = (t, g)
                break
        self._cache[I] = res
        return res

    def __getitem__(self, name):
        for t in self.types:
            if t.name == name:
                return t
        raise KeyError(name)


@dataclass
class Poset:
    """Cell types of the spine with the cells incident to each vertex type."""

    d: int
    floor: Fraction
    types: list
    vertex_faces: dict  # vertex type name -> list of AdmissibleSet incident at its rep
    classifier: Classifier = dc_field(default=None, repr=False)

    def __post_init__(self):
        if self.classifier is None:
            self.classifier = Classifier(self.types)

    def type(self, name):
        return self.classifier[name]

    def classify(self, I):
        return self.classifier.find(I)

    def vertex_types(self):
        return [t for t in self.types if t.dim == 0]


def _standard_pair(d):
    F = field(d)
    return AdmissibleSet([IsotropicVector((F.ring(1), F.ring(0), F.ring(0))),
                          IsotropicVector((F.ring(0), F.ring(0), F.ring(1)))])


def normalize_rep(I):
    """A translate of I containing v0 and vw when I has a pair equivalent to them,
    least under the canonical order."""
    d = 1 if I.D == -4 else 3
    std = _standard_pair(d)
    best = None
    for a, b in combinations(I.vectors, 2):
        P = AdmissibleSet([a, b])
        for g in all_transporters(P, std):
            J = I.act(g)
            if best is None or J.key < best.key:
                best = J
    return best if best is not None else I


def _name_types(types):
    by_size = defaultdict(list)
    for t in types:
        by_size[len(t.rep)].append(t)
    out = []
    for n in sorted(by_size):
        grp = sorted(by_size[n], key=lambda t: (t.dim, -t.stab_order, t.rep.key))
        for k, t in enumerate(grp):
            t.name = f"I{n}" if len(grp) == 1 else f"I{n}_{k + 1}"
            out.append(t)
    out.sort(key=lambda t: (-t.dim, len(t.rep), t.name))
    return out


def build_poset(d, floor=None, seed=0, max_vertices=200):
    """Census of the spine: walk from vertex to vertex along edges, read the cells
    incident to each vertex off the face lattice of its gradient polytope, and
    sort everything into conjugacy classes."""
    F = field(d)
    floor = geo.DEFAULT_FLOOR[d] if floor is None else Fraction(floor)
    ev = geo.evaluator(F.D)
    B = geo.pair_bound(floor, F.D)
    vclass = Classifier()
    raw = []  # (params, S, faces, dims)

    def vertex_key(S):
        return AdmissibleSet(S)

    def add_vertex(p, S):
        S_set = AdmissibleSet(S)
        f4 = 1 / (2 * ev.sq * float(ev.heights(p, [S[0]])[0])) ** 2
        if f4 < float(floor) ** 4 * (1 - 1e-9):
            raise CensusIncomplete(f"vertex below the height floor: f^4 = {f4:.6g}")
        if vclass.find(S_set) is not None:
            return False
        faces = geo.vertex_faces(ev, p, S)
        dims = {Fc: geo.face_dimension(ev, p, Fc) for Fc in faces}
        for Fc in faces:
            for a, b in combinations(sorted(Fc), 2):
                if q_abs2_pair(a, b) > B:
                    raise CensusIncomplete("incident cell violates the pair bound")
        vclass.add(CellType(f"V{len(raw)}", S_set, 0, [], 0))
        raw.append((p, list(S), faces, dims))
        return True

    p, S = geo.descend_to_vertex(ev, [0.0, 1.0, 0.0, 0.0], seed)
    add_vertex(p, S)
    i = 0
    while i < len(raw):
        p, S, faces, dims = raw[i]
        i += 1
        stab = stabilizer(AdmissibleSet(S))
        done = set()
        for Fc in faces:
            if dims[Fc] != 1:
                continue
            Fs = AdmissibleSet(Fc)
            orb = min((Fs.act(g) for g in stab), key=lambda J: J.key)
            if orb in done:
                continue
            done.add(orb)
            direction = geo.edge_direction(ev, p, S, Fc)
            q = geo.walk(ev, p, sorted(Fc), direction)
            q, S2 = geo.settle(ev, q)
            if geo.jacobian_rank(ev, q, S2) != 4:
                raise RuntimeError("edge did not end at a vertex")
            if add_vertex(q, S2):
                log.info("vertex %d: %d cusps", len(raw), len(S2))
            if len(raw) > max_vertices:
                raise CensusIncomplete("too many vertex classes")

    # classify every incident cell
    cls = Classifier()
    vertex_faces = {}
    pending = []
    for p, S, faces, dims in raw:
        for Fc in sorted(faces, key=lambda x: (len(x), sorted(v.key for v in x))):
            I = AdmissibleSet(Fc)
            if cls.find(I) is None:
                rep = normalize_rep(I)
                st = stabilizer(rep)
                t = CellType("?", rep, dims[Fc], small_generating_set(st), len(st), st)
                cls.add(t)
                cls._cache.pop(I, None)
    types = _name_types(cls.types)
    cls = Classifier(types)
    for p, S, faces, dims in raw:
        Sv = AdmissibleSet(S)
        t, g = cls.find(Sv)
        ginv = g.inverse()
        vertex_faces[t.name] = sorted({AdmissibleSet(Fc).act(ginv) for Fc in faces})
    return Poset(d, floor, types, vertex_faces, cls)


def q_abs2_pair(a, b):
    from .group import q_abs2
    return q_abs2(a.coords, b.coords)


# --- flag subdivision ------------------------------------------------------------


@dataclass
class Face:
    index: int
    target: str
    alpha: GroupElement
    sign: int


@dataclass
class ChainType:
    """A simplex I0 < ... < Ij of the subdivision; member m = g . rep(type)."""

    name: str
    dim: int
    members: list  # [(type name, GroupElement)]
    stab_gens: list
    stab_order: int
    faces: list = dc_field(default_factory=list)
    _sets: tuple = dc_field(default=None, repr=False)
    _stab: FiniteGroup = dc_field(default=None, repr=False)

    def member_sets(self, data):
        if self._sets is None:
            self._sets = tuple(data.type(t).rep.act(g) for t, g in self.members)
        return self._sets

    @property
    def stab(self):
        if self._stab is None:
            D = self.members[0][1].D
            self._stab = closure(self.stab_gens, D=D) if self.stab_gens else \
                FiniteGroup([GroupElement.identity(D)])
        return self._stab

    @property
    def type_names(self):
        return [t for t, _ in self.members]


@dataclass
class ComplexData:
    d: int
    floor: Fraction
    types: list
    chains: list
    version: int = FORMAT_VERSION

    def __post_init__(self):
        self._types = {t.name: t for t in self.types}
        self._chains = {c.name: c for c in self.chains}
        self._classifier = None

    def type(self, name):
        return self._types[name]

    def chain(self, name):
        return self._chains[name]

    def by_dim(self, k):
        return [c for c in self.chains if c.dim == k]

    @property
    def classifier(self):
        if self._classifier is None:
            self._classifier = Classifier(self.types)
        return self._classifier

    def generators(self):
        """Cell and simplex stabilizer generators plus all face transporters."""
        D = field(self.d).D
        ident = GroupElement.identity(D)
        gens = []
        seen = {ident}
        for g in ([g for t in self.types for g in t.stab_gens]
                  + [g for c in self.chains for g in c.stab_gens]
                  + [f.alpha for c in self.chains for f in c.faces]):
            if g not in seen:
                seen.add(g)
                gens.append(g)
        return gens

    # serialization

    def to_text(self):
        lines = [f"PICARD-CELLS {self.version}", f"FIELD {self.d}", f"FLOOR {self.floor}"]
        for t in self.types:
            lines.append(f"TYPE {t.name} {t.dim} {t.stab_order}")
            for v in t.rep:
                lines.append("VEC " + " ".join(format_ring(a) for a in v.coords))
            for g in t.stab_gens:
                lines.append("GEN " + g.to_text())
            lines.append("END")
        for c in self.chains:
            lines.append(f"CHAIN {c.name} {c.dim} {c.stab_order}")
            for t, g in c.members:
                lines.append(f"MEMBER {t} " + g.to_text())
            for g in c.stab_gens:
                lines.append("GEN " + g.to_text())
            lines.append("END")
        for c in self.chains:
            for f in c.faces:
                lines.append(f"FACE {c.name} {f.index} {f.target} {f.sign:+d} " + f.alpha.to_text())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        head = lines[0].split()
        if head[0] != "PICARD-CELLS":
            raise ValueError("not a cell-data file")
        version = int(head[1])
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported cell-data version {version}")
        d = int(lines[1].split()[1])
        floor = Fraction(lines[2].split()[1])
        D = field(d).D
        types, chains = [], []
        faces = defaultdict(list)
        i = 3
        while i < len(lines):
            parts = lines[i].split()
            kind = parts[0]
            if kind == "TYPE":
                name, dim, order = parts[1], int(parts[2]), int(parts[3])
                vecs, gens = [], []
                i += 1
                while lines[i] != "END":
                    p = lines[i].split()
                    if p[0] == "VEC":
                        vecs.append(IsotropicVector([parse_ring(x, d) for x in p[1:4]]))
                    elif p[0] == "GEN":
                        gens.append(GroupElement.from_text(" ".join(p[1:]), d))
                    else:
                        raise ValueError(f"bad TYPE line: {lines[i]}")
                    i += 1
                types.append(CellType(name, AdmissibleSet(vecs), dim, gens, order))
            elif kind == "CHAIN":
                name, dim, order = parts[1], int(parts[2]), int(parts[3])
                members, gens = [], []
                i += 1
                while lines[i] != "END":
                    p = lines[i].split()
                    if p[0] == "MEMBER":
                        members.append((p[1], GroupElement.from_text(" ".join(p[2:]), d)))
                    elif p[0] == "GEN":
                        gens.append(GroupElement.from_text(" ".join(p[1:]), d))
                    else:
                        raise ValueError(f"bad CHAIN line: {lines[i]}")
                    i += 1
                chains.append(ChainType(name, dim, members, gens, order))
            elif kind == "FACE":
                faces[parts[1]].append(Face(int(parts[2]), parts[3], GroupElement.from_text(" ".join(parts[5:]), d),
                                            int(parts[4])))
            else:
                raise ValueError(f"unexpected record {kind}")
            i += 1
        names = {c.name for c in chains}
        for k in faces:
            if k not in names:
                raise ValueError(f"FACE record for unknown chain {k}")
        for c in chains:
            c.faces = sorted(faces.get(c.name, []), key=lambda f: f.index)
        return cls(d, floor, types, chains, version)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())


DATA_ENV = "PICARD_DATA_DIR"


def data_path(d):
    """Location of the cell-data file for Q(sqrt(-d)); $PICARD_DATA_DIR overrides."""
    base = os.environ.get(DATA_ENV)
    name = f"cells_d{d}.txt"
    if base:
        return Path(base) / name
    return Path(__file__).with_name("data") / name


def load_cells(d, path=None):
    path = Path(path) if path is not None else data_path(d)
    if not path.exists():
        raise FileNotFoundError(f"no cell data for d={d} at {path}")
    data = ComplexData.load(path)
    if data.d != d:
        raise ValueError(f"{path} holds data for d={data.d}, not d={d}")
    return data


def build_complex(d, floor=None, seed=0):
    """Census plus flag subdivision, from scratch."""
    return build_chain_complex(build_poset(d, floor=floor, seed=seed))


def _act_chain(chain, g):
    return tuple(m.act(g) for m in chain)


def _chain_key(chain):
    return tuple(m.key for m in chain)


class _ChainCanon:
    """Canonical forms of chains modulo the group, through their largest member."""

    def __init__(self, classifier):
        self.cls = classifier

    def canon(self, chain):
        """(top type, tau, s, canonical chain) with canonical = s tau^-1 chain."""
        res = self.cls.find(chain[-1])
        if res is None:
            raise TransporterNotFound(f"no cell type for {chain[-1]}")
        T, tau = res
        c1 = _act_chain(chain, tau.inverse())
        best = None
        for s in T.stab:
            c2 = _act_chain(c1, s)
            k = _chain_key(c2)
            if best is None or k < best[0]:
                best = (k, s, c2)
        return T, tau, best[1], best[2]


def _chains_at(faces, top):
    """All strictly increasing chains of the given faces (as tuples)."""
    faces = sorted(faces, key=len)
    sub = {F: [G for G in faces if len(G) < len(F) and G.issubset(F)] for F in faces}
    out = []

    def extend(chain):
        out.append(tuple(reversed(chain)))
        for G in sub[chain[-1]]:
            extend(chain + [G])

    for F in faces:
        extend([F])
    return out


def build_chain_complex(poset):
    """Orbits of flags of incident cells, with stabilizers and face transporters."""
    cls = poset.classifier
    canon = _ChainCanon(cls)
    D = field(poset.d).D
    found = {}
    for vt in poset.vertex_types():
        faces = poset.vertex_faces[vt.name]
        for ch in _chains_at(faces, vt.rep):
            T, tau, s, c = canon.canon(ch)
            k = _chain_key(c)
            if k not in found:
                found[k] = (T, c)
    chains = []
    for k, (T, c) in found.items():
        members = []
        for m in c:
            t, g = cls.find(m)
            members.append((t.name, g))
        stab = [s for s in T.stab if _act_chain(c, s) == c]
        grp = FiniteGroup(stab)
        gens = small_generating_set(grp) if len(grp) > 1 else []
        ch = ChainType("?", len(c) - 1, members, gens, len(grp), _sets=c, _stab=grp)
        chains.append(ch)
    # deterministic names
    tindex = {t.name: i for i, t in enumerate(poset.types)}
    chains.sort(key=lambda ch: (-ch.dim, [tindex[n] for n in ch.type_names], _chain_key(ch._sets)))
    counter = Counter()
    for ch in chains:
        ch.name = f"C{ch.dim}.{counter[ch.dim]}"
        counter[ch.dim] += 1
    by_key = {_chain_key(ch._sets): ch for ch in chains}
    for ch in chains:
        c = ch._sets
        if len(c) == 1:
            continue
        for j in range(len(c)):
            f = c[:j] + c[j + 1:]
            T, tau, s, cf = canon.canon(f)
            tgt = by_key.get(_chain_key(cf))
            if tgt is None:
                raise TransporterNotFound(f"face {j} of {ch.name} has no chain type")
            alpha = tau * s.inverse()
            ch.faces.append(Face(j, tgt.name, alpha, -1 if j % 2 else 1))
    types = [CellType(t.name, t.rep, t.dim, t.stab_gens, t.stab_order) for t in poset.types]
    return ComplexData(poset.d, poset.floor, types, chains)


# --- incidence counts and validation ---------------------------------------------


def vertex_stars(data):
    """Cells incident to each vertex-type representative, recovered from the chains."""
    out = {}
    for t in data.types:
        if t.dim != 0:
            continue
        base = set()
        for c in data.chains:
            sets = c.member_sets(data)
            if sets[-1] == t.rep:
                base.update(sets)
        out[t.name] = {m.act(s) for m in base for s in t.stab}
    return out


def _closure_cells(data, name):
    """Cells whose closure contains, or which lie in the closure of, rep(name):
    returns (smaller sets incident to it, larger sets in its closure)."""
    T = data.type(name)
    cls = data.classifier
    below, above = set(), set()
    for vname, star in vertex_stars(data).items():
        for F in star:
            res = cls.find(F)
            if res is None or res[0].name != name:
                continue
            tinv = res[1].inverse()
            for G in star:
                if G.issubset(F) and G != F:
                    below.add(G.act(tinv))
                elif F.issubset(G) and G != F:
                    above.add(G.act(tinv))
    below = {G.act(s) for G in below for s in T.stab}
    above = {G.act(s) for G in above for s in T.stab}
    return below, above


def subset_count(data, T, Tp):
    """(up, down) for the type pair (T, T'), T' larger than T.

    up: subsets of rep(T') conjugate to rep(T); down: cells of type T' in the
    boundary of the cell rep(T)."""
    A, B = data.type(T), data.type(Tp)
    if len(A.rep) >= len(B.rep):
        raise ValueError("T must have fewer cusps than T'")
    up = sum(1 for sub in combinations(B.rep.vectors, len(A.rep))
             if find_transporter(A.rep, AdmissibleSet(sub)) is not None)
    _, above = _closure_cells(data, T)
    cls = data.classifier
    down = sum(1 for G in above if cls.find(G)[0].name == Tp)
    return up, down


def incidence_up(data, T, Tp):
    """Cells of type T having the cell rep(T') in their boundary."""
    below, _ = _closure_cells(data, Tp)
    cls = data.classifier
    return sum(1 for G in below if cls.find(G)[0].name == T)


def incidence_table(data):
    names = [t.name for t in data.types]
    n = len(names)
    tab = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            a, b = data.type(names[i]), data.type(names[j])
            if len(a.rep) < len(b.rep):
                up, down = subset_count(data, names[i], names[j])
                tab[i][j] = up
                tab[j][i] = down
    return names, tab


def level_one_boundaries(data):
    """Boundary matrices of the quotient by the full group: one cell per chain type."""
    idx = {k: {c.name: i for i, c in enumerate(data.by_dim(k))} for k in range(4)}
    mats = []
    for k in range(1, 4):
        M = np.zeros((len(idx[k - 1]), len(idx[k])), dtype=np.int64)
        for c in data.by_dim(k):
            for f in c.faces:
                M[idx[k - 1][f.target], idx[k][c.name]] += f.sign
        mats.append(M)
    return mats


def validate_complex(data, golden=None):
    """List of violations (empty when the data is consistent)."""
    bad = []
    for t in data.types:
        for g in t.stab_gens:
            if not is_member(g):
                bad.append(f"TYPE {t.name}: generator not in the group")
            elif t.rep.act(g) != t.rep:
                bad.append(f"TYPE {t.name}: generator does not fix the representative")
        if len(t.stab) != t.stab_order:
            bad.append(f"TYPE {t.name}: stabilizer order {len(t.stab)} != {t.stab_order}")
    names = {t.name for t in data.types}
    for c in data.chains:
        if any(n not in names for n in c.type_names):
            bad.append(f"CHAIN {c.name}: unknown member type")
            continue
        sets = c.member_sets(data)
        if any(not (a.issubset(b) and a != b) for a, b in zip(sets, sets[1:])):
            bad.append(f"CHAIN {c.name}: members not strictly increasing")
        if c.dim != len(sets) - 1:
            bad.append(f"CHAIN {c.name}: wrong dimension")
        for g in c.stab_gens:
            if _act_chain(sets, g) != sets:
                bad.append(f"CHAIN {c.name}: stabilizer generator moves a member")
        if len(c.stab) != c.stab_order:
            bad.append(f"CHAIN {c.name}: stabilizer order mismatch")
        top = data.type(c.type_names[-1])
        if top.stab_order % c.stab_order:
            bad.append(f"CHAIN {c.name}: stabilizer order does not divide its top cell's")
        exp = list(range(len(sets))) if len(sets) > 1 else []
        if [f.index for f in c.faces] != exp:
            bad.append(f"CHAIN {c.name}: face indices {[f.index for f in c.faces]}")
        for f in c.faces:
            if f.target not in data._chains:
                bad.append(f"FACE {c.name} {f.index}: unknown target {f.target}")
                continue
            if f.sign != (-1) ** f.index:
                bad.append(f"FACE {c.name} {f.index}: sign {f.sign:+d}")
            tgt = data.chain(f.target)
            if tgt.dim != c.dim - 1:
                bad.append(f"FACE {c.name} {f.index}: target dimension")
                continue
            want = sets[:f.index] + sets[f.index + 1:]
            if _act_chain(tgt.member_sets(data), f.alpha) != want:
                bad.append(f"FACE {c.name} {f.index}: transporter does not reach the face")
    mats = level_one_boundaries(data)
    for k in range(len(mats) - 1):
        if (mats[k] @ mats[k + 1]).any():
            bad.append(f"level one: boundary squared nonzero in degree {k + 2}")
    # every 2-simplex lies on at least two 3-simplices of the spine
    count = Counter()
    for c in data.by_dim(3):
        for f in c.faces:
            count[f.target] += Fraction(data.chain(f.target).stab_order, c.stab_order)
    for c in data.by_dim(2):
        if count[c.name] < 2:
            bad.append(f"CHAIN {c.name}: face of fewer than two 3-simplices")
    if golden is not None:
        names, tab = incidence_table(data)
        gnames, gtab = golden
        try:
            perm = [names.index(n) for n in gnames]
        except ValueError:
            bad.append("incidence: type names differ from the reference table")
        else:
            for i, a in enumerate(gnames):
                for j, b in enumerate(gnames):
                    if gtab[i][j] is not None and tab[perm[i]][perm[j]] != gtab[i][j]:
                        bad.append(f"incidence ({a}, {b}): {tab[perm[i]][perm[j]]} != {gtab[i][j]}")
    return bad
