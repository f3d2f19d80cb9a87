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

"""Low-rank contour representation: fitting, coding, and matching."""

from ._lra import (
    ConfigError,
    DataError,
    Frame,
    NumericalError,
    ShapeBasis,
    canonicalize,
    fit_fms,
    fit_svd,
    focal_cost,
    fourier_decode,
    fourier_encode,
    generate_ribbons,
    inject_spike_noise,
    linear_assignment,
    polygon_iou,
    resample,
    restore,
    subspace_distance,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Frame",
    "NumericalError",
    "ShapeBasis",
    "canonicalize",
    "fit_fms",
    "fit_svd",
    "focal_cost",
    "fourier_decode",
    "fourier_encode",
    "generate_ribbons",
    "inject_spike_noise",
    "linear_assignment",
    "polygon_iou",
    "resample",
    "restore",
    "subspace_distance",
]
