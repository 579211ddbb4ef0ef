import numpy as np
import pytest

from eurtight.errors import CatalogIntegrityError, DomainError
from eurtight.mubs import (
    D4_CORRECTION,
    mub_bases,
    mub_catalog,
    mub_report,
    published_matrices,
    same_projectors,
    verify_mub,
    weyl_heisenberg_basis,
)
from eurtight.quantum import ObservableBasis, ObservableSet

OMEGA3 = np.exp(2j * np.pi / 3)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_complete_sets_unbiased(d):
    report = verify_mub(mub_bases(d, d + 1))
    assert report.max_bias_deviation < 1e-10
    assert report.max_unitarity_defect < 1e-10


def test_d3_second_basis():
    m = mub_bases(3, 2).bases[1].matrix
    assert np.allclose(m[:, 0], np.ones(3) / np.sqrt(3))
    assert np.isclose(m[1, 1] * np.sqrt(3), OMEGA3)


def test_d3_catalog_matches_published():
    mats, notes = mub_catalog(3)
    assert notes == []
    # same rank-one projectors; column order may differ
    for ours, printed in zip(mats, published_matrices(3)):
        assert same_projectors(printed, ours) == []


def test_d4_pairs():
    obs = mub_bases(4, 5)
    for i in range(5):
        for j in range(i + 1, 5):
            ov = np.abs(obs.bases[i].matrix.conj().T @ obs.bases[j].matrix) ** 2
            assert np.abs(ov - 0.25).max() < 1e-10


def test_d4_printed_matrix_is_not_unitary():
    printed = published_matrices(4)
    assert not mub_report(printed).ok()
    mats, notes = mub_catalog(4)
    assert D4_CORRECTION in notes
    # only the corrected entry differs
    diff = np.argwhere(~np.isclose(printed[4], mats[4]))
    assert diff.tolist() == [[2, 1]]


def test_d5_published_columns_annotated():
    _, notes = mub_catalog(5)
    assert any("M4" in n for n in notes) and any("M5" in n for n in notes)
    report = mub_report(published_matrices(5))
    assert report.max_bias_deviation > 0.1


def test_d5_weyl_heisenberg():
    mats = [np.eye(5)] + [weyl_heisenberg_basis(5, k) for k in range(5)]
    assert mub_report(mats).max_bias_deviation < 1e-10


def test_identical_bases_are_biased():
    e = ObservableBasis(np.eye(3), "Z")
    e2 = ObservableBasis(np.eye(3), "Z2")
    report = verify_mub(ObservableSet((e, e2)))
    assert np.isclose(report.max_bias_deviation, 1 - 1 / 3)


def test_subset_and_labels():
    obs = mub_bases(4, subset=(1, 2, 4))
    assert obs.labels == ["A1", "A2", "A4"]
    with pytest.raises(DomainError):
        mub_bases(4, subset=(1, 1))
    with pytest.raises(DomainError):
        mub_bases(4, subset=(1, 6))


@pytest.mark.parametrize("d,L", [(3, 0), (3, 5), (6, 2), (1, 1)])
def test_bad_requests(d, L):
    with pytest.raises(DomainError):
        mub_bases(d, L)


def test_catalog_is_read_only():
    mats, _ = mub_catalog(3)
    with pytest.raises(ValueError):
        mats[1][0, 0] = 0


def test_integrity_error_type():
    assert issubclass(CatalogIntegrityError, RuntimeError)
