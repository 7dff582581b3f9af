import numpy as np
import pytest

from cdseg.superpixels import compute_superpixels, boundary_paths


def test_uniform_image_yields_near_equal_tiles():
    img = np.full((64, 64, 3), 128, dtype=np.uint8)
    sp = compute_superpixels(img, 16)
    assert sp.count == 16
    sizes = np.bincount(sp.labels.ravel(), minlength=sp.count)
    assert sizes.min() > 0.5 * sizes.mean()
    assert sizes.max() < 1.5 * sizes.mean()


def test_count_within_twenty_percent():
    rng = np.random.default_rng(0)
    img = rng.integers(0, 255, size=(96, 128, 3), dtype=np.uint8)
    for target in (16, 64, 200):
        sp = compute_superpixels(img, target)
        assert 0.8 * target <= sp.count <= 1.2 * target


def test_color_boundary_is_respected():
    img = np.zeros((64, 64, 3), dtype=np.uint8)
    img[:, 32:] = 255
    sp = compute_superpixels(img, 16)
    mixed = 0
    for label in range(sp.count):
        mask = sp.labels == label
        cols = np.nonzero(mask.any(axis=0))[0]
        # straddling the boundary by more than 1px of aliasing
        if cols.min() <= 30 and cols.max() >= 33:
            mixed += 1
    assert mixed == 0


def test_labels_dense_and_connected():
    rng = np.random.default_rng(3)
    img = rng.integers(0, 255, size=(64, 64, 3), dtype=np.uint8)
    sp = compute_superpixels(img, 32)
    assert set(np.unique(sp.labels)) == set(range(sp.count))
    from scipy import ndimage

    structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])
    for label in range(sp.count):
        _, n = ndimage.label(sp.labels == label, structure=structure)
        assert n == 1


def test_target_count_bounds():
    img = np.zeros((32, 32, 3), dtype=np.uint8)
    with pytest.raises(ValueError):
        compute_superpixels(img, 1)
    with pytest.raises(ValueError):
        compute_superpixels(img, 5000)


def test_small_image_rejected():
    with pytest.raises(ValueError):
        compute_superpixels(np.zeros((8, 64, 3), dtype=np.uint8), 16)


def test_determinism():
    rng = np.random.default_rng(1)
    img = rng.integers(0, 255, size=(64, 64, 3), dtype=np.uint8)
    a = compute_superpixels(img, 25)
    b = compute_superpixels(img, 25)
    assert np.array_equal(a.labels, b.labels)
    assert a.adjacency == b.adjacency


def test_adjacency_pairs_touch():
    img = np.full((48, 48, 3), 128, dtype=np.uint8)
    sp = compute_superpixels(img, 16)
    for i, j in sp.adjacency:
        assert i < j
        a = sp.labels == i
        b = sp.labels == j
        touching = (
            (a[1:] & b[:-1]).any()
            or (a[:-1] & b[1:]).any()
            or (a[:, 1:] & b[:, :-1]).any()
            or (a[:, :-1] & b[:, 1:]).any()
        )
        assert touching


def test_boundary_paths_cover_every_superpixel():
    img = np.full((48, 48, 3), 100, dtype=np.uint8)
    sp = compute_superpixels(img, 16)
    paths = boundary_paths(sp)
    assert len(paths) == sp.count
    for path in paths:
        assert len(path) >= 4
