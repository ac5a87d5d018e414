"""Reference values: published integral cohomology of congruence subgroups and
the d=3 incidence table.

Rows are keyed by (d, kind, level text); values are (H^1, H^2, H^3) in the
rendering of CohomologyGroup. Eisenstein levels are written in terms of
zeta = (1+sqrt(-3))/2.
"""
from __future__ import annotations

from .smith import CohomologyGroup

_GAUSS_GAMMA0 = """
2 | 0 | Z | Z^2
3 | 0 | Z^2 | Z + Z/2
4 | 0 | Z^2 + Z/2 | Z^6
5 | 0 | Z^7 | Z^5
6 | 0 | Z^4 + Z/2 | Z^5 + Z/2
7 | 0 | Z^10 + Z/4 | Z + Z/12
8 | 0 | Z^11 + (Z/2)^3 + Z/4 | Z^12
9 | 0 | Z^25 + (Z/3)^2 | Z^5 + (Z/2)^2
10 | 0 | Z^34 | Z^17
11 | 0 | Z^39 + Z/15 | Z + Z/30
12 | 0 | Z^36 + Z/2 + Z/8 | Z^13 + Z/13
13 | 0 | Z^79 | Z^5 + (Z/3)^2
14 | 0 | Z^58 + Z/12 | Z^5 + Z/12
15 | 0 | Z^148 + Z/2 | Z^11 + (Z/2)^3
16 | 0 | Z^94 + (Z/2)^3 + (Z/4)^4 + (Z/8)^2 | Z^23 + Z/2
17 | 0 | Z^166 + (Z/2)^2 | Z^5 + (Z/2)^2 + (Z/4)^2
18 | 0 | Z^142 + Z/3 + Z/6 | Z^17 + (Z/2)^3
19 | 0 | Z^211 + Z/15 | Z + Z/90
20 | 0 | Z^238 + (Z/2)^5 | Z^41 + (Z/2)^2
21 | 0 | Z^294 + (Z/2)^2 + Z/16 | Z^3 + (Z/2)^2 + Z/48
22 | 0 | Z^238 + Z/30 | Z^5 + Z/30
23 | 0 | Z^372 + Z/132 | Z + Z/132
24 | 0 | Z^312 + (Z/2)^5 + Z/4 + Z/8 | Z^25 + (Z/2)^2 + Z/8
1+1*i | 0 | Z | Z
2+1*i | 0 | Z^3 | Z^2
3+2*i | 0 | Z^7 | Z^2 + Z/3
4+1*i | 0 | Z^9 + Z/2 | Z^2 + Z/2 + Z/4
5+2*i | 0 | Z^21 + Z/7 | Z^2 + Z/7
6+1*i | 0 | Z^37 + Z/3 | Z^2 + Z/9
5+4*i | 0 | Z^45 + Z/5 | Z^2 + Z/2 + Z/10
7+2*i | 0 | Z^75 + Z/13 | Z^2 + Z/13
6+5*i | 0 | Z^103 + Z/5 | Z^2 + Z/15
8+3*i | 0 | Z^151 + Z/3 | Z^2 + Z/2 + Z/18
8+5*i | 0 | Z^225 + Z/11 | Z^2 + Z/2 + Z/22
9+4*i | 0 | Z^271 + Z/4 | Z^2 + Z/2 + Z/24
10+1*i | 0 | Z^291 + Z/25 | Z^2 + Z/25
10+3*i | 0 | Z^343 + Z/9 | Z^2 + Z/27
8+7*i | 0 | Z^369 + Z/14 | Z^2 + Z/2 + Z/28
"""

_GAUSS_GAMMA1 = """
2 | 0 | Z + Z/2 | Z^2
3 | 0 | Z^13 + (Z/2)^2 + Z/4 | Z^3
4 | Z^2 | Z^24 + (Z/2)^3 + (Z/4)^2 + Z/8 | Z^11
5 | 0 | Z^115 + (Z/2)^5 + (Z/10)^2 + Z/20 | Z^23
6 | 0 | Z^102 + (Z/2)^5 + Z/6 + (Z/12)^2 | Z^19
7 | 0 | Z^538 + (Z/2)^2 + (Z/14)^2 + Z/28 | Z^23
8 | Z^6 | Z^460 + (Z/2)^5 + (Z/4)^4 + Z/8 + Z/16 | Z^71 + Z/2
2+1*i | 0 | Z^10 + Z/2 | Z^3
3+2*i | 0 | Z^91 + Z/2 | Z^11
4+1*i | 0 | Z^184 + (Z/2)^2 | Z^15 + Z/2
"""

_GAUSS_PRINCIPAL = """
1+1*i | 0 | Z | Z^2
2 | 0 | Z^2 + (Z/2)^2 | Z^5
3 | 0 | Z^243 + (Z/2)^7 + (Z/6)^7 + Z/12 | Z^55
4 | Z^6 | Z^484 + (Z/2)^7 + (Z/4)^12 + (Z/8)^2 | Z^95 + Z/2
"""

_EISENSTEIN_GAMMA0 = """
5 | 0 | Z^8 + Z/6 | Z + Z/4
11 | 0 | Z^56 + (Z/2)^2 + Z/60 | Z + Z/20
17 | 0 | Z^208 + Z/3 + Z/24 | Z + Z/48
23 | 0 | Z^508 + (Z/2)^2 + Z/264 | Z + Z/88
2+1*zeta | 0 | Z^7 | Z^2
3+1*zeta | 0 | Z^15 | Z^2 + Z/2
-2+5*zeta | 0 | Z^21 + Z/3 | Z^2 + Z/3
5+1*zeta | 0 | Z^47 + Z/5 | Z^2 + Z/5
-3+7*zeta | 0 | Z^67 + Z/3 | Z^2 + Z/6
6+1*zeta | 0 | Z^85 + Z/7 | Z^2 + Z/7
-4+9*zeta | 0 | Z^167 + Z/5 | Z^2 + Z/10
-2+9*zeta | 0 | Z^197 + Z/11 | Z^2 + Z/11
8+1*zeta | 0 | Z^235 + Z/6 | Z^2 + Z/12
3+7*zeta | 0 | Z^271 + Z/13 | Z^2 + Z/13
-3+11*zeta | 0 | Z^408 + Z/8 | Z^2 + Z/16
2+9*zeta | 0 | Z^405 + Z/17 | Z^2 + Z/17
7+5*zeta | 0 | Z^511 + Z/9 | Z^2 + Z/18
-6+13*zeta | 0 | Z^687 + Z/21 | Z^2 + Z/21
"""


def _parse(block):
    rows = []
    for line in block.strip().splitlines():
        level, *groups = (x.strip() for x in line.split("|"))
        rows.append((level, tuple(CohomologyGroup.parse(g) for g in groups)))
    return rows


TABLES = {
    (1, "gamma0"): _parse(_GAUSS_GAMMA0),
    (1, "gamma1"): _parse(_GAUSS_GAMMA1),
    (1, "principal"): _parse(_GAUSS_PRINCIPAL),
    (3, "gamma0"): _parse(_EISENSTEIN_GAMMA0),
}


def lookup(d, kind, level):
    """(H^1, H^2, H^3) for a level given in any text form, or None."""
    from .field import parse_level
    N = parse_level(level, d)
    for text, groups in TABLES.get((d, kind), []):
        if parse_level(text, d) == N:
            return groups
    return None


# Incidence table for d=3 as printed. Row T, column T': above the diagonal the
# number of type-T cells having rep(T') in their closure, below it the number of
# type-T cells in the closure of rep(T').
INCIDENCE_NAMES = ("I2", "I3_1", "I3_2", "I4", "I8")
INCIDENCE_PRINTED = (
    (None, 3, 3, 6, 28),
    (2, None, None, 1, 8),
    (12, None, None, 3, 48),
    (24, 6, 3, None, 16),
    (12, 6, 3, 2, None),
)

# d=3 stabilizer orders of the five cell types.
STABILIZER_ORDERS = {"I2": 12, "I3_1": 18, "I3_2": 3, "I4": 3, "I8": 24}
