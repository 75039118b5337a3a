import pytest

from simplepoly.catalog import catalog
from simplepoly.complexes.cells import triangulate
from simplepoly.complexes.collapse import (
    COLLAPSED,
    EXHAUSTED,
    IMPOSSIBLE,
    collapse_search,
    is_disc,
    replay,
    summarize,
)

from .conftest import annulus


def test_disc_collapses_to_point():
    k = triangulate(catalog("disc"))
    res = collapse_search(k)
    assert res.outcome == COLLAPSED
    assert res.final["vertices"] == 1 and res.final["edges"] == 0
    assert len(replay(k, res.sequence)) == 1


def test_greedy_path_replays():
    k = triangulate(catalog("disc"))
    res = collapse_search(k, exhaustive_max=0, seed=3)
    assert res.outcome == COLLAPSED
    assert summarize(replay(k, res.sequence)) == res.final


def test_annulus_is_impossible():
    res = collapse_search(triangulate(annulus()))
    assert res.outcome == IMPOSSIBLE
    assert "Euler" in res.certificate


def test_bing_house_has_no_free_face():
    res = collapse_search(triangulate(catalog("bing_house")))
    assert res.outcome == IMPOSSIBLE
    assert "free" in res.certificate


def test_round_bundle_homology_certificate():
    res = collapse_search(triangulate(catalog("round_bundle")))
    assert res.outcome == IMPOSSIBLE


def test_disc_target():
    k = triangulate(catalog("disc"))
    res = collapse_search(k, target="disc")
    assert res.outcome == COLLAPSED
    assert is_disc(replay(k, res.sequence))


def test_two_triangles_collapse_to_disc():
    res = collapse_search([(0, 1, 2), (0, 2, 3)], target="disc", exhaustive_max=0)
    assert res.outcome == COLLAPSED


def test_exhaustive_search_refutes_dunce_like_input():
    # a hollow triangle has chi 0, so the certificate fires first
    res = collapse_search([(0, 1), (1, 2), (0, 2)])
    assert res.outcome == IMPOSSIBLE


def test_budget_exhaustion_is_reported():
    k = triangulate(catalog("disc"))
    res = collapse_search(k, steps=2, restarts=2, exhaustive_max=0)
    assert res.outcome == EXHAUSTED
    assert res.seed is not None


def test_deterministic_given_seed():
    k = triangulate(catalog("disc"))
    a = collapse_search(k, exhaustive_max=0, seed=11)
    b = collapse_search(k, exhaustive_max=0, seed=11)
    assert a == b


def test_invalid_collapse_rejected():
    with pytest.raises(ValueError):
        replay([(0, 1, 2)], [((0,), (0, 1))])


def test_unknown_target():
    with pytest.raises(ValueError):
        collapse_search([(0, 1, 2)], target="sphere")
