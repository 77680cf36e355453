# Copyright 2026 The radar-anomaly Authors
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


"""Anomaly segmentation of sparse 2D radar point clouds.

Thin Python layer over the C++ core: dataset generation and IO, the
grouping kernels, training, evaluation and SVG rendering.
"""

import json

from ._core import (
    Checkpoint,
    EgoState,
    Error,
    Label,
    ParseError,
    RadarFrame,
    RadarTarget,
    Scenario,
    SensorId,
    ShapeError,
    ValidationError,
    ball_query,
    dataset_stats,
    farthest_point_sample,
    knn,
    read_dataset,
    render_svg,
    ring_query,
    split_dataset,
    write_dataset,
)
from . import _core

__all__ = [
    "Checkpoint",
    "EgoState",
    "Error",
    "Label",
    "ParseError",
    "RadarFrame",
    "RadarTarget",
    "Scenario",
    "SensorId",
    "ShapeError",
    "ValidationError",
    "ball_query",
    "dataset_stats",
    "default_scene",
    "farthest_point_sample",
    "generate",
    "knn",
    "read_dataset",
    "render_svg",
    "ring_query",
    "split_dataset",
    "train",
    "write_dataset",
]


def default_scene():
    """The default scene configuration as a dict."""
    return json.loads(_core._default_scene_json())


def generate(scene=None, **overrides):
    """Generates a synthetic sequence; returns (frames, warnings).

    `scene` and keyword overrides are scene-config keys, e.g. frames=50, seed=7.
    """
    config = dict(scene or {})
    config.update(overrides)
    return _core._generate(json.dumps(config))


def train(frames, variant, preset="desk", model=None, train=None):
    """Trains on the leading Center frames; returns (Checkpoint, [(epoch, lr, loss)])."""
    return _core._train(frames, variant, preset, json.dumps(model or {}), json.dumps(train or {}))
