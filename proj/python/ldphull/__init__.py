# Copyright 2026 The ldphull Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Large deviations of the convex-hull area of planar random walks."""

from ._core import (
    DomainError,
    Model,
    convexify,
    cumulant,
    cumulant_gradient,
    estimate_ldp,
    hull_area,
    minimize_discrete,
    rate,
    rate_gradient,
    rate_of_area,
    sublevel_area,
    trace_level,
)

__all__ = [
    "DomainError",
    "Model",
    "convexify",
    "cumulant",
    "cumulant_gradient",
    "estimate_ldp",
    "hull_area",
    "minimize_discrete",
    "rate",
    "rate_gradient",
    "rate_of_area",
    "sublevel_area",
    "trace_level",
]
