from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from picard.complex import (ComplexData, Poset, TransporterNotFound, build_chain_complex, find_transporter,
                            level_one_boundaries, load_cells, stabilizer, subset_count, validate_complex,
                            vertex_stars)
from picard.geometry import AdmissibleSet, IsotropicVector
from picard.group import GroupElement, closure, eisenstein_generators, q_abs2
from picard.smith import SparseIntegerMatrix, cohomology

EXPECTED_ORDERS = {"I2": 12, "I3_1": 18, "I3_2": 3, "I4": 3, "I8": 24}


@pytest.fixture(scope="module")
def named():
    return eisenstein_generators()


@pytest.mark.parametrize("d", [1, 3])
def test_shipped_data_validates(d, cells):
    assert validate_complex(cells[d]) == []


@pytest.mark.parametrize("d", [1, 3])
def test_text_round_trip(d, cells, tmp_path):
    data = cells[d]
    text = data.to_text()
    assert ComplexData.from_text(text).to_text() == text
    path = tmp_path / "cells.txt"
    data.save(path)
    assert load_cells(d, path).to_text() == text
    with pytest.raises(ValueError):
        load_cells(3 if d == 1 else 1, path)


def test_eisenstein_census(cells3):
    types = {t.name: t for t in cells3.types}
    assert {n: t.stab_order for n, t in types.items()} == EXPECTED_ORDERS
    assert [t.dim for t in cells3.types] == [3, 2, 2, 1, 0]
    assert [len(t.rep) for t in cells3.types] == [2, 3, 3, 4, 8]
    # chain (flag) counts by dimension
    assert [len(cells3.by_dim(k)) for k in range(4)] == [5, 23, 44, 24]


def test_gaussian_census(cells1):
    assert validate_complex(cells1) == []
    assert {t.dim for t in cells1.types} == {0, 1, 2, 3}
    assert sorted(t.stab_order for t in cells1.types if t.dim == 0) == [2, 32]


def test_stabilizers_named(cells3, named):
    w, eps, tau = named["w"], named["epsilon"], named["tau"]
    I2 = cells3.type("I2").rep
    S = stabilizer(I2)
    assert len(S) == 12 and (eps * w) in S
    assert len(closure([eps * w])) == 12
    F = I2.D
    o = GroupElement.identity(F).entries[0]
    n = o - o
    I31 = AdmissibleSet([(o, n, n), (n, n, o), (o, n, o)])
    S = stabilizer(I31)
    assert len(S) == 18 and (tau * w) in S and eps in S
    assert S.is_abelian()
    assert len(closure([tau * w, eps])) == 18


def test_vertex_group_structure(i8_corrected, named):
    """Order 24 nonabelian, generated by gamma1 and gamma2, one involution,
    centre of order 6 (the structure of C3 x Q8)."""
    S = stabilizer(AdmissibleSet(i8_corrected))
    G = closure([named["gamma1"], named["gamma2"]])
    assert S.as_set() == G.as_set()
    assert not S.is_abelian()
    e2 = named["epsilon"] ** 2
    assert e2 in S
    ident = GroupElement.identity(-3)
    assert sum(1 for g in S if g != ident and g * g == ident) == 1
    centre = [g for g in S if all(g * h == h * g for h in S)]
    assert len(centre) == 6


def test_epsilon_squared_fixes_every_chain(cells3, named):
    e2 = named["epsilon"] ** 2
    for c in cells3.chains:
        assert e2 in c.stab, c.name


def test_transporters(cells3, named):
    I2 = cells3.type("I2").rep
    assert find_transporter(I2, I2) is not None
    # every standard pair is a translate of I2
    I8 = cells3.type("I8").rep
    for a, b in combinations(I8.vectors, 2):
        J = AdmissibleSet([a, b])
        g = find_transporter(I2, J)
        if q_abs2(a.coords, b.coords) == Fraction(1, 3):
            assert g is not None and I2.act(g) == J
        else:
            assert g is None
    # different |Q|^2 profile: no transporter
    assert find_transporter(cells3.type("I3_1").rep, cells3.type("I3_2").rep) is None


def test_stabilizer_orders_match_data(cells3):
    for t in cells3.types:
        assert len(stabilizer(t.rep)) == t.stab_order


def test_subset_counts_antiprism(cells3):
    """Faces of the top cell rep(I2), a hexagonal antiprism: 2 + 12 two-cells,
    24 edges, 12 vertices."""
    down = [subset_count(cells3, "I2", T)[1] for T in ("I3_1", "I3_2", "I4", "I8")]
    assert down == [2, 12, 24, 12]


def test_subset_counts_vertex(cells3):
    up = {T: subset_count(cells3, T, "I8")[0] for T in ("I2", "I3_1", "I3_2", "I4")}
    # 4 of the 28 pairs have |Q|^2 = 1 and span no 3-cell; 8 + 24 of the 56 triples are cells
    assert up == {"I2": 24, "I3_1": 8, "I3_2": 24, "I4": 16}
    with pytest.raises(ValueError):
        subset_count(cells3, "I8", "I2")


def test_orbit_counting_identity(cells3):
    """up(T, T') |Stab T| = down(T, T') |Stab T'|: both count incident pairs per orbit."""
    names = [t.name for t in cells3.types]
    for a, b in combinations(names, 2):
        if len(cells3.type(a).rep) == len(cells3.type(b).rep):
            continue
        up, down = subset_count(cells3, a, b)
        assert up * cells3.type(a).stab_order == down * cells3.type(b).stab_order, (a, b)


@pytest.mark.parametrize("d", [1, 3])
def test_level_one_cohomology(d, cells):
    mats = [SparseIntegerMatrix.from_dense(m.tolist()) for m in level_one_boundaries(cells[d])]
    counts = [len(cells[d].by_dim(k)) for k in range(4)]
    H = cohomology(mats, counts)
    assert str(H[0]) == "Z"
    assert sum((-1) ** i * n for i, n in enumerate(counts)) == sum((-1) ** i * h.rank for i, h in enumerate(H))


def test_face_signs(cells3):
    for c in cells3.by_dim(3):
        assert [f.sign for f in c.faces] == [1, -1, 1, -1]


def test_tampered_sign_detected(cells3):
    text = cells3.to_text().splitlines()
    k = next(i for i, ln in enumerate(text) if ln.startswith("FACE C3.0 1 "))
    text[k] = text[k].replace(" -1 ", " +1 ", 1)
    bad = ComplexData.from_text("\n".join(text))
    report = validate_complex(bad)
    assert any("sign" in m for m in report)
    assert any("boundary squared nonzero" in m for m in report)
    mats = level_one_boundaries(bad)
    assert any((mats[k] @ mats[k + 1]).any() for k in range(2))


def test_missing_type_detected(cells3):
    stars = vertex_stars(cells3)
    poset = Poset(3, cells3.floor, [t for t in cells3.types if t.name != "I3_2"],
                  {k: list(v) for k, v in stars.items()})
    with pytest.raises(TransporterNotFound):
        build_chain_complex(poset)


def test_unknown_record_rejected(cells3):
    with pytest.raises(ValueError):
        ComplexData.from_text(cells3.to_text() + "BOGUS 1 2\n")
    with pytest.raises(ValueError):
        ComplexData.from_text("PICARD-CELLS 99\nFIELD 3\nFLOOR 3/4\n")


def test_generators_reach_vectors(cells3):
    """Every vertex cusp lies in the orbit of v0 under the generating set."""
    gens = cells3.generators()
    v0 = IsotropicVector(cells3.type("I2").rep.vectors[1].coords)
    seen, frontier = {v0}, [v0]
    for _ in range(4):
        frontier = [IsotropicVector(g.apply(v.coords), check=False) for v in frontier for g in gens]
        frontier = [v for v in frontier if v not in seen]
        seen.update(frontier)
    assert set(cells3.type("I8").rep.vectors) <= seen
    assert np.all([g.det() == 1 for g in gens])
