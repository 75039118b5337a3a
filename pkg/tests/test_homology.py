import pytest

from simplepoly.catalog import catalog
from simplepoly.complexes.cells import cellulate, triangulate
from simplepoly.complexes.homology import (
    ChainComplex,
    complex_homology,
    homology,
    simplicial_chain_complex,
)
from simplepoly.errors import NotAComplex

from .conftest import annulus, klein, mobius, torus

EXPECTED = {
    "disc": ((1, ()), (0, ()), (0, ())),
    "bing_house": ((1, ()), (0, ()), (0, ())),
    "round_bundle": ((1, ()), (0, ()), (1, ())),
    "round_sum2": ((1, ()), (0, ()), (2, ())),
    "two_crossings": ((1, ()), (0, ()), (2, ())),
    "suzuoka": ((1, ()), (0, ()), (1, ())),
    "incompatible_circle": ((1, ()), (0, ()), (0, ())),
}


def _shape(h):
    return tuple((g.rank, tuple(g.torsion)) for g in h.groups[:3])


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_catalog_homology(name):
    assert _shape(complex_homology(triangulate(catalog(name)))) == EXPECTED[name]


@pytest.mark.parametrize("make,expected", [
    (annulus, ((1, ()), (1, ()), (0, ()))),
    (mobius, ((1, ()), (1, ()), (0, ()))),
    (torus, ((1, ()), (2, ()), (1, ()))),
    (klein, ((1, ()), (1, (2,)), (0, ()))),
])
def test_surfaces(make, expected):
    assert _shape(complex_homology(triangulate(make()))) == expected


def test_cellular_and_simplicial_euler_agree(entry):
    k2 = triangulate(entry)
    assert cellulate(entry).euler_characteristic() == k2.euler_characteristic()
    assert complex_homology(k2).euler_characteristic() == k2.euler_characteristic()


def test_triangulation_is_deterministic(entry):
    a, b = triangulate(entry), triangulate(entry)
    assert (a.vertices, a.edges, a.triangles) == (b.vertices, b.edges, b.triangles)


def test_every_simplex_has_provenance(entry):
    k2 = triangulate(entry)
    assert set(k2.vertex_cell) == set(k2.vertices)
    assert set(k2.edge_cell) == set(k2.edges)
    assert set(k2.triangle_cell) == set(k2.triangles)


def test_triangulation_is_a_simplicial_complex(entry):
    k2 = triangulate(entry)
    edges = set(k2.edges)
    assert len(set(k2.triangles)) == len(k2.triangles)
    for a, b, c in k2.triangles:
        assert a < b < c
        assert {(a, b), (b, c), (a, c)} <= edges


def test_boundary_of_boundary_checked():
    bad = ChainComplex([1, 1, 1], {1: [{0: 1}], 2: [{0: 1}]})
    with pytest.raises(NotAComplex):
        homology(bad)


def test_hollow_triangle():
    c = simplicial_chain_complex([[(0,), (1,), (2,)], [(0, 1), (1, 2), (0, 2)]])
    assert [g.rank for g in homology(c).groups] == [1, 1]
