# Copyright 2026 The OTR Labeling Authors
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
"""Optimal-transport reward labeling for offline RL datasets."""

from ._otr import (
    Coupling,
    CostKind,
    FeatureMode,
    LabelConfig,
    LabeledTrajectory,
    NoPostScale,
    OtrError,
    PlanKind,
    ReturnRange,
    ScaleMode,
    Shift,
    SinkhornParams,
    Trajectory,
    label_dataset,
    lp_oracle,
    ot_rewards,
    pairwise_costs,
    pearson,
    read_dataset,
    read_labeled,
    run_cli,
    run_gridworld_demo,
    select_top_k,
    sinkhorn,
    spearman,
    squash,
    uds_rewards,
    write_dataset,
    write_labeled,
)

__version__ = "0.1.0"
