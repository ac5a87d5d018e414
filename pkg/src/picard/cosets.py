"""Finite models of Gamma \\ Gamma-bar for congruence subgroups and the
quotient cell complexes built on them.

Points are row vectors (or matrices) over O/N, encoded as integers; the group
acts on the right through residue tables, vectorised over all points at once.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .field import residue_ring
from .group import reduce_mod

log = logging.getLogger(__name__)

KINDS = ("gamma0", "gamma1", "principal")
DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    pass


class _Tables:
    def __init__(self, R):
        self.R = R
        self.n = R.size
        self.mul = np.array(R.mul_table, dtype=np.int64).reshape(self.n, self.n)
        self.add = np.array(R.add_table, dtype=np.int64).reshape(self.n, self.n)

    def dot(self, xs, ys):
        """Sum of products over aligned lists of residue arrays."""
        acc = self.mul[xs[0], ys[0]]
        for x, y in zip(xs[1:], ys[1:]):
            acc = self.add[acc, self.mul[x, y]]
        return acc


class CosetSpace:
    """Orbit of the base point under the right action of the generators.

    gamma0: projective points, base [0:0:1]; gamma1: vectors, base (0,0,1);
    principal: the action on the gamma1 vectors, recorded as the images of a
    generating set ("frame") of the submodule they span. When that span is all
    of (O/N)^3 this is just the reduced matrix; over primes dividing the
    discriminant it can be a proper submodule and the space is smaller.
    principal_model="matrix" forces the full reduced matrix instead.
    """

    def __init__(self, kind, N, gens, budget=DEFAULT_BUDGET, principal_model="isotropic"):
        if kind not in KINDS:
            raise ValueError(f"unknown subgroup kind {kind!r}")
        if principal_model not in ("isotropic", "matrix"):
            raise ValueError(f"unknown principal model {principal_model!r}")
        if not N:
            raise ValueError("level must be nonzero")
        self.kind = kind
        self.R = residue_ring(N)
        self.level = self.R.modulus
        self.budget = budget
        self.T = _Tables(self.R)
        n = self.n = self.R.size
        self.gens = list(gens)
        self._reduced = {}
        self.width = 3
        if n ** 3 >= 2 ** 62:
            raise BudgetExceeded("residue ring too large for integer point codes")
        self.pow = n ** np.arange(2, -1, -1, dtype=np.int64)
        if kind == "gamma0":
            self._build_projective()
        self.frame = None
        if kind == "principal":
            if principal_model == "matrix":
                one = self.R.index(1, 0)
                self.frame = np.diag([one, one, one]).astype(np.int64)
            else:
                vectors = self.decode(self._orbit(int(self.encode(self._e3()))))
                self.frame = self._span_frame(vectors)
            self.width = 3 * len(self.frame)
            if n ** self.width >= 2 ** 62:
                raise BudgetExceeded("residue ring too large for integer point codes")
            self.pow = n ** np.arange(self.width - 1, -1, -1, dtype=np.int64)
        base = self._base()
        self.points = self._orbit(base)
        self._gen_table = None

    def __len__(self):
        return len(self.points)

    # encoding

    def encode(self, digits):
        return digits @ self.pow

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((len(codes), self.width), dtype=np.int64)
        c = codes.copy()
        for k in range(self.width - 1, -1, -1):
            out[:, k] = c % self.n
            c //= self.n
        return out

    def _build_projective(self):
        n = self.n
        R = self.R
        allc = np.arange(n ** 3, dtype=np.int64)
        dig = self.decode_vec(allc)
        best = allc.copy()
        for u in R.units:
            img = self.T.mul[u, dig]
            best = np.minimum(best, img @ self.pow)
        self.canon = best

    def decode_vec(self, codes):
        n = self.n
        return np.stack([codes // (n * n), (codes // n) % n, codes % n], axis=1)

    def _e3(self):
        return np.array([0, 0, self.R.index(1, 0)], dtype=np.int64)

    def _span_frame(self, vectors):
        """Greedy generating set, taken from `vectors`, of the O/N-span of `vectors`."""
        n = self.n
        add = self.T.add
        mul = self.T.mul
        inside = np.zeros(n ** 3, dtype=bool)
        inside[0] = True
        frame = []
        for v in vectors:
            if inside[int(v @ self.pow)]:
                continue
            frame.append(v)
            span = self.decode(np.nonzero(inside)[0])
            for r in range(n):
                step = mul[r, v]
                inside[add[span, step] @ self.pow] = True
        if not frame:
            # unit level: everything is zero, keep one (zero) vector
            frame = [vectors[0]]
        return np.array(frame, dtype=np.int64)

    def _base(self):
        if self.kind == "principal":
            return int(self.encode(self.frame.reshape(-1)))
        return int(self.encode(self._e3()))

    def reduced(self, g):
        k = g.key()
        if k not in self._reduced:
            self._reduced[k] = np.array(reduce_mod(g, self.R), dtype=np.int64)
        return self._reduced[k]

    # action

    def act_codes(self, codes, g):
        """Right action of g on an array of point codes."""
        m = self.reduced(g)
        x = self.decode(codes)
        T = self.T
        if self.kind == "principal" and self.frame is not None:
            cols = [T.dot([x[:, 3 * i + k] for k in range(3)], [m[3 * k + j] for k in range(3)])
                    for i in range(len(self.frame)) for j in range(3)]
            out = self.encode(np.stack(cols, axis=1))
        else:
            cols = [T.dot([x[:, k] for k in range(3)], [m[3 * k + j] for k in range(3)])
                    for j in range(3)]
            out = self.encode(np.stack(cols, axis=1))
            if self.kind == "gamma0":
                out = self.canon[out]
        return out

    def act(self, idx, g):
        """Right action on point indices."""
        codes = self.points[np.asarray(idx)]
        img = self.act_codes(codes, g)
        return self.lookup(img)

    def lookup(self, codes):
        pos = np.searchsorted(self.points, codes)
        pos = np.minimum(pos, len(self.points) - 1)
        if not np.all(self.points[pos] == codes):
            raise KeyError("image outside the coset space; generators incomplete")
        return pos

    def _orbit(self, base):
        seen = np.array([base], dtype=np.int64)
        frontier = seen
        while len(frontier):
            img = np.unique(np.concatenate([self.act_codes(frontier, g) for g in self.gens]))
            frontier = np.setdiff1d(img, seen, assume_unique=True)
            seen = np.union1d(seen, frontier)
            if len(seen) > self.budget:
                raise BudgetExceeded(f"coset space exceeds {self.budget} points")
        return seen

    def generator_table(self):
        """points x generators array of image indices."""
        if self._gen_table is None:
            allp = np.arange(len(self.points))
            self._gen_table = np.stack([self.act(allp, g) for g in self.gens], axis=1)
        return self._gen_table


def build_coset_space(kind, N, gens, budget=DEFAULT_BUDGET, **kw):
    return CosetSpace(kind, N, gens, budget, **kw)


@dataclass
class QuotientCell:
    chain: str
    orbit_id: int
    orbit: np.ndarray  # point indices


class OrbitPartition:
    """Orbits of one chain-type stabilizer on the coset space."""

    def __init__(self, space, chain):
        self.chain = chain.name
        pts = np.arange(len(space))
        ids = pts.copy()
        for s in chain.stab.elements:
            ids = np.minimum(ids, space.act(pts, s))
        # ids is the least point of each orbit
        reps, label = np.unique(ids, return_inverse=True)
        self.reps = reps
        self.label = label

    def __len__(self):
        return len(self.reps)

    def cells(self):
        order = np.argsort(self.label, kind="stable")
        bounds = np.searchsorted(self.label[order], np.arange(len(self.reps) + 1))
        return [QuotientCell(self.chain, k, order[bounds[k]:bounds[k + 1]]) for k in range(len(self.reps))]


def orbit_partition(space, chain):
    return OrbitPartition(space, chain).cells()


def _partitions(space, data):
    return {c.name: OrbitPartition(space, c) for c in data.chains}


def faces_of(cell, space, data, parts=None):
    """Signed faces of a quotient cell as [(QuotientCell, sign)], signs accumulated."""
    parts = parts or _partitions(space, data)
    ch = data.chain(cell.chain)
    x = np.array([cell.orbit[0]])
    acc = {}
    for f in ch.faces:
        y = space.act(x, f.alpha)[0]
        k = int(parts[f.target].label[y])
        acc[f.target, k] = acc.get((f.target, k), 0) + f.sign
    out = []
    for (name, k), s in sorted(acc.items()):
        if s:
            part = parts[name]
            orbit = np.nonzero(part.label == k)[0]
            out.append((QuotientCell(name, k, orbit), s))
    return out


@dataclass
class QuotientComplex:
    counts: list  # cells per dimension
    boundaries: list  # [d1, d2, d3] as SparseIntegerMatrix
    cells: list  # per dimension: [(chain name, orbit id)]


def assemble_boundary(space, data):
    """Boundary matrices d1, d2, d3 of Gamma \\ W on the subdivided complex."""
    from .smith import SparseIntegerMatrix

    parts = _partitions(space, data)
    offset = {}
    cells = []
    for k in range(4):
        pos = 0
        lst = []
        for c in data.by_dim(k):
            offset[c.name] = pos
            n = len(parts[c.name])
            lst.extend((c.name, i) for i in range(n))
            pos += n
        cells.append(lst)
    mats = []
    for k in range(1, 4):
        rows, cols, vals = [], [], []
        for c in data.by_dim(k):
            part = parts[c.name]
            reps = part.reps
            col = offset[c.name] + np.arange(len(reps))
            for f in c.faces:
                img = space.act(reps, f.alpha)
                row = offset[f.target] + parts[f.target].label[img]
                rows.append(row)
                cols.append(col)
                vals.append(np.full(len(reps), f.sign))
        if rows:
            r, c_, v = np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)
        else:
            r = c_ = v = np.zeros(0, dtype=np.int64)
        mats.append(SparseIntegerMatrix.from_coo(len(cells[k - 1]), len(cells[k]), r, c_, v))
    return QuotientComplex([len(c) for c in cells], mats, cells)


def write_triplets(M, path):
    """Dump a sparse matrix as 'rows cols' header plus 'row col value' lines."""
    with open(path, "w") as fh:
        fh.write(f"{M.rows} {M.cols}\n")
        for (i, j), v in sorted(M.entries.items()):
            fh.write(f"{i} {j} {v}\n")
