// Copyright 2026 The Gamepot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GAMEPOT_ANALYZER_HPP_
#define GAMEPOT_ANALYZER_HPP_

#include <array>
#include <string>
#include <vector>

#include "gamepot/log.hpp"

namespace gamepot::analyzer {

/// Five-number summary plus mean of per-session attack durations, one row
/// per honeypot instance.
struct DurationSummary {
  std::string instance;
  int n = 0;
  double min = 0;
  double q1 = 0;
  double median = 0;
  double mean = 0;
  double q3 = 0;
  double max = 0;
  bool empty = true;  // no sessions: render a marker, never crash
};

/// Upper edges of the interaction bins. The first bin is [0,1] (a session
/// that typed nothing and one that typed a single command land together);
/// each later bin is left-open right-closed. Counts above the last edge go
/// to an explicit overflow bucket.
inline constexpr std::array<int, 8> kBinUpperEdges = {1,   15,  35,  50,
                                                      100, 200, 350, 700};

const std::array<std::string, 8>& bin_labels();

struct InteractionBins {
  std::string instance;
  int n = 0;
  std::array<int, 8> totals{};
  int overflow = 0;
  /// 100 * total / n, rounded half away from zero to 2 decimals; all zero
  /// when n is 0.
  std::array<double, 8> percentages{};
  double overflow_percentage = 0;
};

/// Linear-interpolation quantile on a sorted sample: rank h = (n-1)p,
/// value = x[floor h] + (h - floor h) * (x[floor h + 1] - x[floor h]).
/// Throws DomainError on empty input, unsorted input, or p outside [0,1].
double quantile_sorted(const std::vector<double>& sorted, double p);

DurationSummary duration_summary(
    const std::vector<logging::SessionSummary>& sessions,
    const std::string& instance);

InteractionBins interaction_bins(
    const std::vector<logging::SessionSummary>& sessions,
    const std::string& instance);

struct Report {
  std::vector<DurationSummary> durations;
  std::vector<InteractionBins> bins;
};

/// One row per instance label in order of first appearance; with
/// by_instance off, everything merges into a single "all" row.
Report analyze(const std::vector<logging::SessionSummary>& sessions,
               bool by_instance = true);

/// format is "text" (aligned tables), "csv" (documented columns, full
/// precision), or "json". Throws ConfigError on anything else.
std::string render(const Report& report, const std::string& format);

}  // namespace gamepot::analyzer

#endif  // GAMEPOT_ANALYZER_HPP_
