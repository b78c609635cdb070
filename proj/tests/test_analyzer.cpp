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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamepot/analyzer.hpp"
#include "gamepot/errors.hpp"

using namespace gamepot;
using namespace gamepot::analyzer;

namespace {

logging::SessionSummary make_session(const std::string& instance,
                                     double duration, int commands) {
  logging::SessionSummary s;
  s.session = "s";
  s.instance = instance;
  s.duration_seconds = duration;
  s.command_count = commands;
  return s;
}

std::vector<logging::SessionSummary> sessions_with_durations(
    const std::vector<double>& durations, const std::string& instance = "x") {
  std::vector<logging::SessionSummary> out;
  for (double d : durations) out.push_back(make_session(instance, d, 0));
  return out;
}

std::vector<logging::SessionSummary> sessions_with_counts(
    const std::vector<int>& counts, const std::string& instance = "x") {
  std::vector<logging::SessionSummary> out;
  for (int c : counts) out.push_back(make_session(instance, 0.0, c));
  return out;
}

// Independent quantile route: complementary-weight blend of the two ranks
// bracketing p*(n-1).
double naive_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double idx = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
  const double w = idx - static_cast<double>(lo);
  return v[lo] * (1.0 - w) + v[hi] * w;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quantiles
// ---------------------------------------------------------------------------

TEST_CASE("quantile interpolates linearly between order statistics") {
  const std::vector<double> v = {1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(quantile_sorted(v, 0.75) == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(quantile_sorted({42.0}, 0.37) == 42.0);

  CHECK_THROWS_AS(quantile_sorted({}, 0.5), DomainError);
  CHECK_THROWS_AS(quantile_sorted({3, 1}, 0.5), DomainError);
  CHECK_THROWS_AS(quantile_sorted(v, -0.1), DomainError);
  CHECK_THROWS_AS(quantile_sorted(v, 1.1), DomainError);
}

// ---------------------------------------------------------------------------
// Duration summaries
// ---------------------------------------------------------------------------

TEST_CASE("a singleton collapses the whole summary") {
  const DurationSummary d =
      duration_summary(sessions_with_durations({10}), "x");
  CHECK(!d.empty);
  CHECK(d.n == 1);
  CHECK(d.min == 10.0);
  CHECK(d.q1 == 10.0);
  CHECK(d.median == 10.0);
  CHECK(d.mean == 10.0);
  CHECK(d.q3 == 10.0);
  CHECK(d.max == 10.0);
}

TEST_CASE("four points split evenly") {
  const DurationSummary d =
      duration_summary(sessions_with_durations({1, 2, 3, 4}), "x");
  CHECK(d.median == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(d.mean == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("an instance with no sessions yields the empty marker") {
  const DurationSummary d =
      duration_summary(sessions_with_durations({1, 2}), "elsewhere");
  CHECK(d.empty);
  CHECK(d.n == 0);
  CHECK(d.instance == "elsewhere");
}

TEST_CASE("summaries agree with a naive sorted oracle") {
  std::mt19937_64 rng(7041);
  std::uniform_real_distribution<double> dur(0.0, 1000.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 200);
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(dur(rng));

    const DurationSummary d = duration_summary(sessions_with_durations(v), "x");

    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0;
    for (double x : v) sum += x;

    CHECK(d.n == n);
    CHECK(d.min == doctest::Approx(sorted.front()).epsilon(1e-9));
    CHECK(d.max == doctest::Approx(sorted.back()).epsilon(1e-9));
    CHECK(d.q1 == doctest::Approx(naive_quantile(v, 0.25)).epsilon(1e-9));
    CHECK(d.median == doctest::Approx(naive_quantile(v, 0.5)).epsilon(1e-9));
    CHECK(d.q3 == doctest::Approx(naive_quantile(v, 0.75)).epsilon(1e-9));
    CHECK(d.mean == doctest::Approx(sum / n).epsilon(1e-9));

    // Order invariants hold unconditionally.
    CHECK(d.min <= d.q1);
    CHECK(d.q1 <= d.median);
    CHECK(d.median <= d.q3);
    CHECK(d.q3 <= d.max);
    CHECK(d.mean >= d.min);
    CHECK(d.mean <= d.max);
  }
}

// ---------------------------------------------------------------------------
// Interaction bins
// ---------------------------------------------------------------------------

TEST_CASE("the first bin holds both silent and single-command sessions") {
  const InteractionBins b =
      interaction_bins(sessions_with_counts({0, 1, 2, 15, 16}), "x");
  CHECK(b.n == 5);
  CHECK(b.totals[0] == 2);  // counts 0 and 1
  CHECK(b.totals[1] == 2);  // counts 2 and 15
  CHECK(b.totals[2] == 1);  // count 16
  for (std::size_t j = 3; j < b.totals.size(); ++j) CHECK(b.totals[j] == 0);
  CHECK(b.overflow == 0);
}

TEST_CASE("no sessions means all-zero bins") {
  const InteractionBins b = interaction_bins({}, "x");
  CHECK(b.n == 0);
  for (int t : b.totals) CHECK(t == 0);
  for (double p : b.percentages) CHECK(p == 0.0);
  CHECK(b.overflow == 0);
  CHECK(b.overflow_percentage == 0.0);
}

TEST_CASE("binning is a partition") {
  std::mt19937_64 rng(20260814);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng() % 120);
    std::vector<int> counts;
    for (int i = 0; i < n; ++i) {
      counts.push_back(static_cast<int>(rng() % 1000));
    }
    const InteractionBins b = interaction_bins(sessions_with_counts(counts), "x");

    int total = b.overflow;
    for (int t : b.totals) total += t;
    CHECK(total == n);

    // Brute-force bin assignment, one bin per count.
    std::array<int, 9> oracle{};
    for (int c : counts) {
      int slot = 8;  // overflow by default
      for (int j = 0; j < 8; ++j) {
        const int lo = j == 0 ? -1 : kBinUpperEdges[j - 1];
        if (c > lo && c <= kBinUpperEdges[j]) {
          slot = j;
          break;
        }
      }
      ++oracle[slot];
    }
    for (int j = 0; j < 8; ++j) CHECK(b.totals[j] == oracle[j]);
    CHECK(b.overflow == oracle[8]);

    if (n > 0) {
      double sum = b.overflow_percentage;
      for (double p : b.percentages) sum += p;
      CHECK(sum == doctest::Approx(100.0).epsilon(0.0005));
    }
  }
}

TEST_CASE("the 67-session fixture reproduces its printed percentages") {
  // Per-bin totals 15, 15, 10, 5, 6, 5, 9, 2 over n = 67.
  std::vector<int> counts;
  auto add = [&](int count, int copies) {
    for (int i = 0; i < copies; ++i) counts.push_back(count);
  };
  add(0, 8);
  add(1, 7);  // first bin: 15
  add(2, 15);
  add(16, 10);
  add(36, 5);
  add(51, 6);
  add(101, 5);
  add(201, 9);
  add(351, 2);

  const InteractionBins b = interaction_bins(sessions_with_counts(counts), "x");
  REQUIRE(b.n == 67);
  const std::array<int, 8> totals = {15, 15, 10, 5, 6, 5, 9, 2};
  const std::array<double, 8> printed = {22.39, 22.39, 14.93, 7.46,
                                         8.96,  7.46,  13.43, 2.99};
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(b.totals[j] == totals[j]);
    CHECK(b.percentages[j] == doctest::Approx(printed[j]).epsilon(1e-12));
  }
  CHECK(b.overflow == 0);
}

// ---------------------------------------------------------------------------
// Grouping
// ---------------------------------------------------------------------------

TEST_CASE("analysis groups by instance in order of first appearance") {
  std::vector<logging::SessionSummary> sessions;
  sessions.push_back(make_session("beta", 10, 1));
  sessions.push_back(make_session("alpha", 20, 2));
  sessions.push_back(make_session("beta", 30, 3));

  const Report by = analyze(sessions, true);
  REQUIRE(by.durations.size() == 2);
  CHECK(by.durations[0].instance == "beta");
  CHECK(by.durations[0].n == 2);
  CHECK(by.durations[1].instance == "alpha");
  CHECK(by.durations[1].n == 1);
  CHECK(by.bins[0].instance == "beta");

  const Report merged = analyze(sessions, false);
  REQUIRE(merged.durations.size() == 1);
  CHECK(merged.durations[0].instance == "all");
  CHECK(merged.durations[0].n == 3);
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

TEST_CASE("text tables carry the expected headers and precision") {
  std::vector<logging::SessionSummary> sessions;
  sessions.push_back(make_session("gamepot", 1.2345, 3));
  sessions.push_back(make_session("gamepot", 2.0, 0));
  Report report = analyze(sessions, true);
  report.durations.push_back(duration_summary({}, "quiet"));
  report.bins.push_back(interaction_bins({}, "quiet"));

  const std::string text = render(report, "text");
  CHECK(text.find("Attack duration in seconds") != std::string::npos);
  CHECK(text.find("Interaction in number of commands") != std::string::npos);
  for (const char* token : {"Instance", "N", "Min.", "1st Qu.", "Median",
                            "Mean", "3rd Qu.", "Max"}) {
    CHECK(text.find(token) != std::string::npos);
  }
  for (const std::string& label : bin_labels()) {
    CHECK(text.find(label) != std::string::npos);
  }
  CHECK(text.find(">700") != std::string::npos);
  CHECK(text.find("1.234") != std::string::npos);   // 3-decimal durations
  CHECK(text.find("50.00%") != std::string::npos);  // 2-decimal percentages
  CHECK(text.find("quiet") != std::string::npos);   // empty row, no crash
  CHECK(text.find("-") != std::string::npos);
}

TEST_CASE("an empty report renders headers only") {
  const std::string text = render(Report{}, "text");
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 4);  // two titles, two header rows
  CHECK(render(Report{}, "csv").find("instance,n,min") != std::string::npos);
}

TEST_CASE("csv output re-parses to the exact in-memory values") {
  std::mt19937_64 rng(88);
  std::vector<logging::SessionSummary> sessions;
  for (int i = 0; i < 40; ++i) {
    sessions.push_back(make_session(i % 2 == 0 ? "a" : "b",
                                    (rng() % 1000000) / 1000.0,
                                    static_cast<int>(rng() % 900)));
  }
  const Report report = analyze(sessions, true);
  const std::string csv = render(report, "csv");

  // Block 1: duration rows. Block 2: bin rows. Separated by a blank line.
  std::istringstream in(csv);
  std::string line;
  std::vector<std::vector<std::string>> durations;
  std::vector<std::vector<std::string>> bins;
  bool second = false;
  while (std::getline(in, line)) {
    if (line.empty()) {
      second = true;
      continue;
    }
    if (line.rfind("instance,", 0) == 0) continue;  // header
    (second ? bins : durations).push_back(split(line, ','));
  }

  REQUIRE(durations.size() == report.durations.size());
  for (std::size_t i = 0; i < durations.size(); ++i) {
    const std::vector<std::string>& row = durations[i];
    const DurationSummary& d = report.durations[i];
    REQUIRE(row.size() == 8);
    CHECK(row[0] == d.instance);
    CHECK(std::stoi(row[1]) == d.n);
    CHECK(std::strtod(row[2].c_str(), nullptr) == d.min);
    CHECK(std::strtod(row[3].c_str(), nullptr) == d.q1);
    CHECK(std::strtod(row[4].c_str(), nullptr) == d.median);
    CHECK(std::strtod(row[5].c_str(), nullptr) == d.mean);
    CHECK(std::strtod(row[6].c_str(), nullptr) == d.q3);
    CHECK(std::strtod(row[7].c_str(), nullptr) == d.max);
  }

  REQUIRE(bins.size() == report.bins.size() * 9);  // 8 bins + overflow each
  for (std::size_t i = 0; i < report.bins.size(); ++i) {
    const InteractionBins& b = report.bins[i];
    for (int j = 0; j < 9; ++j) {
      const std::vector<std::string>& row = bins[i * 9 + j];
      REQUIRE(row.size() == 6);
      CHECK(row[0] == b.instance);
      CHECK(std::stoi(row[1]) == b.n);
      const int total = j < 8 ? b.totals[j] : b.overflow;
      const double pct = j < 8 ? b.percentages[j] : b.overflow_percentage;
      CHECK(std::stoi(row[4]) == total);
      CHECK(std::strtod(row[5].c_str(), nullptr) == pct);
      if (j < 8) {
        CHECK(std::stoi(row[3]) == kBinUpperEdges[j]);
      } else {
        CHECK(row[3].empty());  // overflow has no upper edge
      }
    }
  }
}

TEST_CASE("json output carries the same numbers") {
  std::vector<logging::SessionSummary> sessions;
  sessions.push_back(make_session("gamepot", 12.5, 7));
  sessions.push_back(make_session("gamepot", 37.5, 800));
  const Report report = analyze(sessions, true);
  const nlohmann::json parsed = nlohmann::json::parse(render(report, "json"));

  REQUIRE(parsed.at("durations").size() == 1);
  CHECK(parsed["durations"][0]["instance"] == "gamepot");
  CHECK(parsed["durations"][0]["n"] == 2);
  CHECK(parsed["durations"][0]["mean"].get<double>() == 25.0);
  CHECK(parsed["durations"][0]["empty"] == false);

  REQUIRE(parsed.at("interaction_bins").size() == 1);
  const nlohmann::json& row = parsed["interaction_bins"][0];
  CHECK(row["n"] == 2);
  CHECK(row["bins"].size() == 8);
  CHECK(row["bins"][1]["total"] == 1);  // count 7 in (1,15]
  CHECK(row["overflow"]["total"] == 1);  // count 800
  CHECK(row["overflow"]["percentage"].get<double>() == 50.0);
}

TEST_CASE("unknown formats are rejected") {
  CHECK_THROWS_AS(render(Report{}, "yaml"), ConfigError);
  CHECK_THROWS_AS(render(Report{}, ""), ConfigError);
}
