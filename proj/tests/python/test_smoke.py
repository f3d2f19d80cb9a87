# Copyright 2026 The lra Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests of the python bindings: every exposed operation runs and
agrees with basic invariants."""

import math

import numpy as np
import pytest

import lra

SQUARE = np.array([[0.0, 0.0], [40.0, 0.0], [40.0, 16.0], [0.0, 16.0]])


@pytest.fixture(scope="module")
def ribbons():
    return lra.generate_ribbons(60, seed=3)


@pytest.fixture(scope="module")
def basis(ribbons):
    return lra.fit_fms(ribbons, m=8)


def test_generate_ribbons_shapes(ribbons):
    assert len(ribbons) == 60
    for contour in ribbons:
        assert contour.shape == (14, 2)
        assert np.isfinite(contour).all()


def test_fit_produces_orthonormal_basis(ribbons, basis):
    assert basis.n_vertices == 14
    assert basis.m == 8
    assert basis.method == "fms"
    u = basis.matrix
    assert u.shape == (28, 8)
    assert np.abs(u.T @ u - np.eye(8)).max() < 1e-12

    spectral = lra.fit_svd(ribbons, m=8)
    assert spectral.method == "svd"
    # Different estimators on clean data stay close but need not coincide.
    assert lra.subspace_distance(basis, spectral) < 1.0


def test_encode_decode_round_trip(ribbons):
    full = lra.fit_svd(ribbons, m=28)
    coefficients, frame = full.encode(ribbons[0])
    assert coefficients.shape == (28,)
    back = full.decode(coefficients, frame)
    assert np.abs(back - ribbons[0]).max() < 1e-9


def test_reconstruction_iou(ribbons, basis):
    iou = basis.reconstruction_iou(ribbons[5])
    assert 0.8 < iou <= 1.0


def test_resample_canonicalize_restore():
    points = lra.resample(SQUARE, 14)
    assert points.shape == (14, 2)
    canon, frame = lra.canonicalize(points)
    assert np.abs(canon.mean(axis=0)).max() < 1e-12
    restored = lra.restore(canon, frame)
    assert np.abs(restored - points).max() < 1e-12


def test_polygon_iou_bounds():
    assert lra.polygon_iou(SQUARE, SQUARE) == 1.0
    far = SQUARE + 1000.0
    assert lra.polygon_iou(SQUARE, far) == 0.0


def test_linear_assignment_worked_example():
    cost = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [3.0, 6.0, 9.0]])
    pairs, total = lra.linear_assignment(cost)
    assert total == 10.0
    assert sorted(pairs) == [(0, 2), (1, 1), (2, 0)]


def test_focal_cost_closed_form():
    assert math.isclose(lra.focal_cost(0.5), 0.125 * math.log(0.5), rel_tol=1e-12)
    assert lra.focal_cost(0.2) > lra.focal_cost(0.8)


def test_fourier_round_trip():
    points = lra.resample(SQUARE, 10)
    frequencies, coefficients = lra.fourier_encode(points, dims=20)
    assert frequencies[:3] == [0, 1, -1]
    back = lra.fourier_decode(frequencies, coefficients, 10)
    assert np.abs(back - points).max() < 1e-9


def test_save_load(tmp_path, basis):
    path = str(tmp_path / "basis.json")
    basis.save(path)
    loaded = lra.ShapeBasis.load(path)
    assert loaded.m == basis.m
    assert lra.subspace_distance(basis, loaded) == 0.0


def test_spike_noise_corrupts_a_fraction(ribbons):
    noisy = lra.inject_spike_noise(ribbons, fraction=0.2, seed=11)
    changed = sum(
        1 for a, b in zip(ribbons, noisy) if not np.array_equal(a, b)
    )
    assert changed == 12  # floor(0.2 * 60)


def test_errors_surface_as_python_exceptions(ribbons):
    with pytest.raises(lra.ConfigError):
        lra.fit_svd(ribbons, m=99)
    with pytest.raises(lra.DataError):
        lra.resample(np.zeros((3, 2)), 14)
    with pytest.raises(lra.DataError):
        lra.fit_svd([], m=4)


def test_frame_kwargs():
    frame = lra.Frame(tx=3.0, ty=-2.0, scale=1.0)
    assert frame.tx == 3.0 and frame.ty == -2.0 and frame.scale == 1.0
