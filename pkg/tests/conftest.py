import functools
import time

import pytest

from picard.complex import load_cells
from picard.cosets import assemble_boundary, build_coset_space
from picard.field import field, parse_level
from picard.smith import cohomology

# criterion number -> (verdict, description); filled by test_acceptance
ACCEPTANCE = {}


@pytest.fixture(scope="session")
def cells1():
    return load_cells(1)


@pytest.fixture(scope="session")
def cells3():
    return load_cells(3)


@pytest.fixture(scope="session")
def cells(cells1, cells3):
    return {1: cells1, 3: cells3}


@pytest.fixture(scope="session")
def eis_vectors():
    """Named Eisenstein vectors: v0, vw, (1,0,1), (zeta,1,1) and friends."""
    F = field(3)
    z, s3, o, n = F.zeta, F.sqrtD.to_ring(), F.ring(1), F.ring(0)
    return {"v0": (o, n, n), "vw": (n, n, o), "e": (o, n, o), "z11": (z, o, o),
            "zeta": z, "sqrt": s3, "one": o, "zero": n}


@pytest.fixture(scope="session")
def i8_corrected(eis_vectors):
    """The eight vertex cusps, with (zeta^2, zeta, sqrt(-3)) as last vector."""
    ev = eis_vectors
    z, s3, o, n = ev["zeta"], ev["sqrt"], ev["one"], ev["zero"]
    return [(o, n, n), (n, n, o), (o, n, o), (z, o, o), (z ** 2, o, o), (z, z ** 5, o),
            (s3 * z ** 5, z ** 5, o), (z ** 2, z, s3)]


@pytest.fixture(scope="session")
def i8_printed(i8_corrected, eis_vectors):
    """Same set with (zeta^2, zeta, 1) in place of the last vector."""
    z, o = eis_vectors["zeta"], eis_vectors["one"]
    return i8_corrected[:7] + [(z ** 2, z, o)]


@functools.lru_cache(maxsize=None)
def quotient_cohomology(d, kind, level, principal_model="isotropic"):
    """(H, counts, boundaries, seconds) for Gamma \\ W, cached across tests."""
    data = load_cells(d)
    t0 = time.perf_counter()
    kw = {"principal_model": principal_model} if kind == "principal" else {}
    space = build_coset_space(kind, parse_level(level, d), data.generators(), **kw)
    Q = assemble_boundary(space, data)
    H = cohomology(Q.boundaries, Q.counts)
    return H, Q.counts, Q.boundaries, time.perf_counter() - t0


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, desc = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {desc}")
