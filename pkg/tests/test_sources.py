"""Input-state specifications."""

import math

import pytest

from fewphoton.sources import (
    Coherent,
    SinglePhoton,
    Vacuum,
    make_diagonal,
    overlap,
    single_photon_pair,
    source_from_dict,
    source_to_dict,
)


def test_single_photon_normalization_check():
    SinglePhoton.of({"H": 1}).check_normalized()
    with pytest.raises(ValueError):
        SinglePhoton.of({"H": 0.5}).check_normalized()


def test_make_diagonal_overlap():
    h = SinglePhoton.of({"H": 1})
    for c in (0.0, 0.3, 1 / math.sqrt(2), 1.0):
        d = make_diagonal(c)
        d.check_normalized()
        assert overlap(h, d) == pytest.approx(c)


def test_make_diagonal_extremes_stay_integer():
    assert make_diagonal(0).components() == {"V": 1}
    assert make_diagonal(1).components() == {"H": 1}


def test_make_diagonal_rejects_super_unit():
    with pytest.raises(ValueError):
        make_diagonal(1.01)


def test_single_photon_pair():
    a, b = single_photon_pair(0.5)
    assert overlap(a, b) == pytest.approx(0.5)


def test_coherent_bounds():
    Coherent(0.1)
    with pytest.raises(ValueError):
        Coherent(1.5)
    with pytest.raises(ValueError):
        Coherent(0.1, n_max=7)


@pytest.mark.parametrize("source", [
    Vacuum(),
    SinglePhoton.of({"H": 1}),
    Coherent(0.1 + 0.05j, n_max=3),
])
def test_source_dict_round_trip(source):
    doc = source_to_dict(source)
    back = source_from_dict(doc)
    assert type(back) is type(source)
    if isinstance(source, Coherent):
        assert back.alpha == source.alpha
        assert back.n_max == source.n_max


def test_source_from_dict_rejects_unknown():
    with pytest.raises(ValueError):
        source_from_dict({"kind": "laser"})
