import pytest
from hypothesis import given, strategies as st

from simplepoly.catalog import NAMES, catalog
from simplepoly.complexes.cells import triangulate
from simplepoly.complexes.presentation import (
    Presentation,
    abelianization,
    coset_enumeration,
    cyclic_reduce,
    free_reduce,
    invert,
    pi1_presentation,
    simplify_presentation,
)
from simplepoly.errors import Disconnected

from .conftest import annulus, klein, mobius, torus

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(tuple)


@given(words)
def test_free_reduction_is_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))


@given(words)
def test_word_times_inverse_reduces_to_empty(w):
    assert free_reduce(w + invert(w)) == ()
    assert cyclic_reduce(w + invert(w)) == ()


@pytest.mark.parametrize("name", NAMES)
def test_catalog_pi1_is_trivial_and_certified(name):
    pres = pi1_presentation(triangulate(catalog(name)))
    assert pres.status == "trivial"
    assert pres.generators == () and pres.relators == ()
    assert pres.certificate


@pytest.mark.parametrize("make,status", [
    (annulus, "nontrivial"), (mobius, "nontrivial"), (torus, "nontrivial"), (klein, "nontrivial"),
])
def test_surface_groups(make, status):
    pres = pi1_presentation(triangulate(make()))
    assert pres.status == status
    assert "abelianization" in pres.certificate


def test_abelianization():
    pres = Presentation(("a", "b"), ((1, 1, 1), (2, 2)))
    assert abelianization(pres) == (0, (6,))


def test_perfect_group_is_nontrivial():
    # binary icosahedral group <s, t | (st)^2 = s^3 = t^5>, perfect of order 120
    rels = ((1, 2, 1, 2, -1, -1, -1), (1, 1, 1, -2, -2, -2, -2, -2))
    pres = simplify_presentation(Presentation(("a", "b"), rels))
    assert abelianization(pres) == (0, ())
    assert pres.status == "nontrivial"
    assert "120" in pres.certificate


def test_coset_enumeration_small_groups():
    assert coset_enumeration(1, [(1, 1, 1)], 100) == 3
    assert coset_enumeration(2, [(1, 1), (2, 2), (1, 2) * 3], 100) == 6
    assert coset_enumeration(2, [], 50) is None  # free group: budget runs out


def test_hard_trivial_group_needs_budget():
    # a balanced presentation of the trivial group with no Tietze shortcut
    rels = ((1, 2, -1, -2, -2), (2, 1, -2, -1, -1))
    assert simplify_presentation(Presentation(("a", "b"), rels), budget=12).status == "unknown"
    assert simplify_presentation(Presentation(("a", "b"), rels)).status == "trivial"


def test_disconnected_complex():
    class K:
        vertices = (0, 1)
        edges = ()
        triangles = ()

    with pytest.raises(Disconnected):
        pi1_presentation(K())


def test_as_text():
    assert Presentation(("a",), ((1, 1, -1),)).as_text() == "< a | a a a^-1 >"
