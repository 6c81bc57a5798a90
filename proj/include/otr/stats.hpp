// Copyright 2026 The OTR Labeling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OTR_STATS_HPP_
#define OTR_STATS_HPP_

#include <optional>
#include <span>
#include <vector>

namespace otr {

// Pearson correlation; nullopt when either input has zero variance or the
// lengths differ or are below 2.
std::optional<double> Pearson(std::span<const double> x,
                              std::span<const double> y);

// Ranks starting at 1; tied values share their average rank.
std::vector<double> AverageRanks(std::span<const double> values);

// Pearson correlation of the average ranks.
std::optional<double> Spearman(std::span<const double> x,
                               std::span<const double> y);

}  // namespace otr

#endif  // OTR_STATS_HPP_
