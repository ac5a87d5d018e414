"""Exact elementary divisors of sparse integer matrices and integral
cohomology of small cochain complexes."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np


class SparseIntegerMatrix:
    """Coordinate-format integer matrix; no explicit zeros are stored."""

    def __init__(self, rows, cols, entries=None):
        self.rows = int(rows)
        self.cols = int(cols)
        self.entries = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            v = int(v)
            if v:
                self.entries[int(i), int(j)] = v

    @classmethod
    def from_coo(cls, rows, cols, r, c, v):
        """Build from triplets, summing duplicates."""
        acc = {}
        for i, j, x in zip(np.asarray(r).tolist(), np.asarray(c).tolist(), np.asarray(v).tolist()):
            acc[i, j] = acc.get((i, j), 0) + x
        return cls(rows, cols, acc)

    @classmethod
    def from_dense(cls, a):
        a = [list(map(int, row)) for row in a]
        rows = len(a)
        cols = len(a[0]) if rows else 0
        return cls(rows, cols, {(i, j): x for i, row in enumerate(a) for j, x in enumerate(row) if x})

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def nnz(self):
        return len(self.entries)

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self):
        return SparseIntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    T = property(transpose)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), 0) + v * w
        return SparseIntegerMatrix(self.rows, other.cols, acc)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        return isinstance(other, SparseIntegerMatrix) and self.shape == other.shape \
            and self.entries == other.entries

    def __repr__(self):
        return f"SparseIntegerMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def to_triplets(self):
        lines = [f"{self.rows} {self.cols}"]
        lines += [f"{i} {j} {v}" for (i, j), v in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplets(cls, text):
        lines = [ln.split() for ln in text.strip().splitlines()]
        rows, cols = map(int, lines[0])
        return cls(rows, cols, {(int(i), int(j)): int(v) for i, j, v in lines[1:]})


def _unit_pivot_elimination(M):
    """Eliminate +-1 pivots, fewest fill-in first. Returns (#pivots, residual rows).

    Residual rows are dicts col -> value over the surviving rows and columns.
    """
    rows = {}
    cols = {}
    for (i, j), v in M.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    heap = []

    def push_col(j):
        rs = cols.get(j)
        if not rs:
            return
        best = None
        for i in rs:
            if abs(rows[i][j]) == 1:
                cost = (len(rows[i]) - 1) * (len(rs) - 1)
                key = (cost, i)
                if best is None or key < best:
                    best = key
        if best is not None:
            heapq.heappush(heap, (best[0], best[1], j))

    for j in cols:
        push_col(j)
    pivots = 0
    while heap:
        cost, i, j = heapq.heappop(heap)
        # lazy validation
        if j not in cols or i not in rows or j not in rows[i] or abs(rows[i][j]) != 1:
            push_col(j)
            continue
        if (len(rows[i]) - 1) * (len(cols[j]) - 1) != cost:
            push_col(j)
            continue
        u = rows[i][j]
        prow = rows.pop(i)
        touched = set()
        affected = list(cols[j])
        for k in affected:
            if k == i:
                continue
            r = rows[k]
            f = r[j] * u
            for c, v in prow.items():
                nv = r.get(c, 0) - f * v
                if nv:
                    if c not in r:
                        cols[c].add(k)
                    r[c] = nv
                else:
                    if c in r:
                        del r[c]
                        cols[c].discard(k)
                touched.add(c)
        for c in prow:
            cols[c].discard(i)
            touched.add(c)
        del cols[j]
        for k in affected:
            if k in rows and not rows[k]:
                del rows[k]
        pivots += 1
        for c in touched:
            if c in cols:
                if not cols[c]:
                    del cols[c]
                else:
                    push_col(c)
    return pivots, rows, cols


def _dense_diagonal(a):
    """Diagonalise a dense integer matrix by unimodular row/column operations.

    Returns the nonzero diagonal entries (not yet in divisibility order).
    """
    a = [row[:] for row in a]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry in the active block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (piv is None or abs(x) < piv[0]):
                    piv = (abs(x), i, j)
                    if piv[0] == 1:
                        break
            if piv and piv[0] == 1:
                break
        if piv is None:
            break
        _, i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for k in range(t, n):
                            ri[k] -= q * rt[k]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                break
            # move the smallest remainder in row/column t to the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def divisibility_chain(diag):
    """Smith form of a diagonal matrix: entries d1 | d2 | ... (zeros dropped)."""
    d = sorted(x for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = math.gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def elementary_divisors(M):
    """(rank, divisors) of an integer matrix, divisors in divisibility order."""
    if not isinstance(M, SparseIntegerMatrix):
        M = SparseIntegerMatrix.from_dense(M)
    if not M.entries:
        return 0, []
    pivots, rows, cols = _unit_pivot_elimination(M)
    ri = sorted(rows)
    ci = sorted(cols)
    cpos = {c: k for k, c in enumerate(ci)}
    core = [[0] * len(ci) for _ in ri]
    for a, i in enumerate(ri):
        for c, v in rows[i].items():
            core[a][cpos[c]] = v
    diag = _dense_diagonal(core) if ri and ci else []
    divs = [1] * pivots + divisibility_chain(diag)
    return len(divs), divs


def rank(M):
    return elementary_divisors(M)[0]


@dataclass(frozen=True)
class CohomologyGroup:
    rank: int
    torsion: tuple = field(default=())

    def __post_init__(self):
        t = tuple(int(x) for x in self.torsion)
        if any(x <= 1 for x in t):
            raise ValueError("torsion coefficients must exceed 1")
        if any(b % a for a, b in zip(t, t[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        run = {}
        order = []
        for d in self.torsion:
            if d not in run:
                order.append(d)
            run[d] = run.get(d, 0) + 1
        for d in order:
            parts.append(f"(Z/{d})^{run[d]}" if run[d] > 1 else f"Z/{d}")
        return " + ".join(parts) if parts else "0"

    def to_record(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_record(cls, rec):
        return cls(int(rec["rank"]), tuple(rec["torsion"]))

    @classmethod
    def parse(cls, text):
        """Inverse of str(): 'Z^2 + (Z/2)^2', 'Z + Z/12', '0'."""
        text = text.strip()
        if text == "0":
            return cls(0)
        r = 0
        tor = []
        for part in text.split("+"):
            part = part.strip()
            if part == "Z":
                r += 1
            elif part.startswith("Z^"):
                r += int(part[2:])
            elif part.startswith("(Z/"):
                d, e = part[3:].split(")^")
                tor += [int(d)] * int(e)
            elif part.startswith("Z/"):
                tor.append(int(part[2:]))
            else:
                raise ValueError(f"cannot parse {part!r}")
        return cls(r, tuple(sorted(tor)))


class ComplexError(ValueError):
    pass


def cohomology(boundaries, counts):
    """(H^0, ..., H^3) from boundary maps d_i: C_i -> C_{i-1}, i = 1..3.

    With coboundaries delta^i = d_{i+1}^T: rank H^i = n_i - rank d_{i+1} - rank d_i,
    torsion of H^i = nontrivial elementary divisors of d_i.
    """
    n = list(counts)
    top = len(n) - 1
    if len(boundaries) != top:
        raise ComplexError("need one boundary map per positive degree")
    for i, B in enumerate(boundaries, start=1):
        if B.shape != (n[i - 1], n[i]):
            raise ComplexError(f"d_{i} has shape {B.shape}, expected {(n[i - 1], n[i])}")
    for i in range(len(boundaries) - 1):
        if not (boundaries[i] @ boundaries[i + 1]).is_zero():
            raise ComplexError(f"d_{i + 1} d_{i + 2} != 0")
    ed = [elementary_divisors(B) for B in boundaries]
    ranks = [0] + [r for r, _ in ed] + [0]
    out = []
    for i in range(top + 1):
        free = n[i] - ranks[i + 1] - ranks[i]
        tors = tuple(d for d in (ed[i - 1][1] if i >= 1 else []) if d > 1)
        out.append(CohomologyGroup(free, tors))
    return out
