# Copyright 2026 The sonovib Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Audio-to-vibrotactile conversion, curation and rating analysis."""

import json

from ._sonovib import (
    ALGORITHMS,
    VIBRATION_RATE,
    ProcessingError,
    ValidationError,
    augment,
    blend_targets,
    convert,
    extract_features,
    kmeans,
    load_wav,
    pitch_shift,
    proportional_allocation,
    reconstruction_metrics,
    resample,
    save_wav,
)
from ._sonovib import aggregate_json as _aggregate_json


def aggregate(ratings, manifest, level="overall", column_map=None):
    """Aggregate a ratings CSV against a manifest; returns the decoded JSON report."""
    return json.loads(_aggregate_json(ratings, manifest, level, column_map))


__all__ = [
    "ALGORITHMS",
    "VIBRATION_RATE",
    "ProcessingError",
    "ValidationError",
    "aggregate",
    "augment",
    "blend_targets",
    "convert",
    "extract_features",
    "kmeans",
    "load_wav",
    "pitch_shift",
    "proportional_allocation",
    "reconstruction_metrics",
    "resample",
    "save_wav",
]
