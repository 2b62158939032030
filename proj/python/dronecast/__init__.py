# Copyright 2026 The dronecast Authors
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

"""Recovery probabilities for drone-relayed broadcast with a data carousel or systematic RLNC."""

from ._core import (
    Field,
    Metric,
    ParseError,
    ProbResult,
    Scenario,
    SimEstimate,
    ValidationError,
    analytic_csv,
    binom,
    equivalent_erasure,
    estimate,
    evaluate,
    gauss_binom,
    min_transmissions,
    mission_interconnected,
    mission_isolated,
    mission_success,
    nakagami_erasure,
    p_dc_full,
    p_dc_partial,
    p_sr_full,
    p_sr_full_mix,
    p_sr_partial,
    p_sr_partial_mix,
    rank,
    recoverable_sources,
    rref,
    simulate_csv,
    sweep_csv,
)

__all__ = [
    "Field",
    "Metric",
    "ParseError",
    "ProbResult",
    "Scenario",
    "SimEstimate",
    "ValidationError",
    "analytic_csv",
    "binom",
    "equivalent_erasure",
    "estimate",
    "evaluate",
    "gauss_binom",
    "min_transmissions",
    "mission_interconnected",
    "mission_isolated",
    "mission_success",
    "nakagami_erasure",
    "p_dc_full",
    "p_dc_partial",
    "p_sr_full",
    "p_sr_full_mix",
    "p_sr_partial",
    "p_sr_partial_mix",
    "rank",
    "recoverable_sources",
    "rref",
    "simulate_csv",
    "sweep_csv",
]
