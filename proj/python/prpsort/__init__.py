# Copyright 2026 The prp-sort Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Instrumented top-k sorting with a pairwise comparison oracle."""

from prpsort._core import (
    CostLedger,
    Error,
    __version__,
    aggregate,
    canonical_pair,
    generate_synthetic,
    ndcg,
    percent_gain,
    rank_by_score,
    rank_with,
    run_experiment,
)

__all__ = [
    "CostLedger",
    "Error",
    "__version__",
    "aggregate",
    "canonical_pair",
    "generate_synthetic",
    "ndcg",
    "percent_gain",
    "rank_by_score",
    "rank_with",
    "run_experiment",
]
