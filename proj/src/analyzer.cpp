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

#include "gamepot/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gamepot/errors.hpp"

namespace gamepot::analyzer {
namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return buf;
}

std::string full(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<const logging::SessionSummary*> select(
    const std::vector<logging::SessionSummary>& sessions,
    const std::string& instance, bool merged) {
  std::vector<const logging::SessionSummary*> out;
  for (const logging::SessionSummary& s : sessions) {
    if (merged || s.instance == instance) out.push_back(&s);
  }
  return out;
}

DurationSummary summarize_durations(
    const std::vector<const logging::SessionSummary*>& picked,
    const std::string& label) {
  DurationSummary out;
  out.instance = label;
  std::vector<double> durations;
  for (const logging::SessionSummary* s : picked) {
    durations.push_back(s->duration_seconds);
  }
  out.n = static_cast<int>(durations.size());
  if (durations.empty()) return out;  // empty marker set by default

  std::sort(durations.begin(), durations.end());
  out.empty = false;
  out.min = durations.front();
  out.max = durations.back();
  out.q1 = quantile_sorted(durations, 0.25);
  out.median = quantile_sorted(durations, 0.5);
  out.q3 = quantile_sorted(durations, 0.75);
  out.mean = std::accumulate(durations.begin(), durations.end(), 0.0) /
             static_cast<double>(durations.size());
  return out;
}

InteractionBins summarize_bins(
    const std::vector<const logging::SessionSummary*>& picked,
    const std::string& label) {
  InteractionBins out;
  out.instance = label;
  for (const logging::SessionSummary* s : picked) {
    ++out.n;
    const int c = s->command_count;
    bool placed = false;
    for (std::size_t j = 0; j < kBinUpperEdges.size(); ++j) {
      if (c <= kBinUpperEdges[j]) {  // first bin takes both 0 and 1
        ++out.totals[j];
        placed = true;
        break;
      }
    }
    if (!placed) ++out.overflow;
  }
  if (out.n == 0) return out;
  for (std::size_t j = 0; j < out.totals.size(); ++j) {
    out.percentages[j] = round2(100.0 * out.totals[j] / out.n);
  }
  out.overflow_percentage = round2(100.0 * out.overflow / out.n);
  return out;
}

/// Left-aligns the first column, right-aligns the rest.
std::string align(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      width[j] = std::max(width[j], row[j].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += "  ";
      const std::size_t pad = width[j] - row[j].size();
      if (j == 0) {
        out += row[j] + std::string(pad, ' ');
      } else {
        out += std::string(pad, ' ') + row[j];
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

std::string render_text(const Report& report) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Instance", "N", "Min.", "1st Qu.", "Median", "Mean",
                  "3rd Qu.", "Max"});
  for (const DurationSummary& d : report.durations) {
    std::vector<std::string> row = {d.instance, std::to_string(d.n)};
    if (d.empty) {
      row.insert(row.end(), 6, "-");
    } else {
      for (double v : {d.min, d.q1, d.median, d.mean, d.q3, d.max}) {
        row.push_back(fixed(v, 3));
      }
    }
    rows.push_back(std::move(row));
  }
  std::string out = "Attack duration in seconds\n" + align(rows) + "\n";

  rows.clear();
  std::vector<std::string> head = {"Instance", "N"};
  for (const std::string& label : bin_labels()) head.push_back(label);
  head.push_back(">700");
  rows.push_back(std::move(head));
  for (const InteractionBins& b : report.bins) {
    std::vector<std::string> row = {b.instance, std::to_string(b.n)};
    for (std::size_t j = 0; j < b.totals.size(); ++j) {
      row.push_back(std::to_string(b.totals[j]) + " (" +
                    fixed(b.percentages[j], 2) + "%)");
    }
    row.push_back(std::to_string(b.overflow) + " (" +
                  fixed(b.overflow_percentage, 2) + "%)");
    rows.push_back(std::move(row));
  }
  out += "Interaction in number of commands\n" + align(rows);
  return out;
}

// Two blank-line-separated blocks with their own headers. Durations carry
// full precision so a re-parse reproduces the in-memory values.
std::string render_csv(const Report& report) {
  std::string out = "instance,n,min,q1,median,mean,q3,max\n";
  for (const DurationSummary& d : report.durations) {
    out += d.instance + "," + std::to_string(d.n);
    if (d.empty) {
      out += ",,,,,,";
    } else {
      for (double v : {d.min, d.q1, d.median, d.mean, d.q3, d.max}) {
        out += "," + full(v);
      }
    }
    out += "\n";
  }
  out += "\ninstance,n,lo,hi,total,percentage\n";
  for (const InteractionBins& b : report.bins) {
    int lo = 0;
    for (std::size_t j = 0; j < b.totals.size(); ++j) {
      out += b.instance + "," + std::to_string(b.n) + "," +
             std::to_string(lo) + "," + std::to_string(kBinUpperEdges[j]) +
             "," + std::to_string(b.totals[j]) + "," +
             full(b.percentages[j]) + "\n";
      lo = kBinUpperEdges[j];
    }
    out += b.instance + "," + std::to_string(b.n) + "," + std::to_string(lo) +
           ",," + std::to_string(b.overflow) + "," +
           full(b.overflow_percentage) + "\n";
  }
  return out;
}

std::string render_json(const Report& report) {
  nlohmann::json root;
  root["durations"] = nlohmann::json::array();
  for (const DurationSummary& d : report.durations) {
    nlohmann::json row;
    row["instance"] = d.instance;
    row["n"] = d.n;
    row["empty"] = d.empty;
    if (!d.empty) {
      row["min"] = d.min;
      row["q1"] = d.q1;
      row["median"] = d.median;
      row["mean"] = d.mean;
      row["q3"] = d.q3;
      row["max"] = d.max;
    }
    root["durations"].push_back(std::move(row));
  }
  root["interaction_bins"] = nlohmann::json::array();
  for (const InteractionBins& b : report.bins) {
    nlohmann::json row;
    row["instance"] = b.instance;
    row["n"] = b.n;
    row["bins"] = nlohmann::json::array();
    int lo = 0;
    for (std::size_t j = 0; j < b.totals.size(); ++j) {
      row["bins"].push_back({{"label", bin_labels()[j]},
                             {"lo", lo},
                             {"hi", kBinUpperEdges[j]},
                             {"total", b.totals[j]},
                             {"percentage", b.percentages[j]}});
      lo = kBinUpperEdges[j];
    }
    row["overflow"] = {{"total", b.overflow},
                       {"percentage", b.overflow_percentage}};
    root["interaction_bins"].push_back(std::move(row));
  }
  return root.dump(2) + "\n";
}

}  // namespace

const std::array<std::string, 8>& bin_labels() {
  static const std::array<std::string, 8> labels = {
      "[0,1]",    "(1,15]",    "(15,35]",   "(35,50]",
      "(50,100]", "(100,200]", "(200,350]", "(350,700]"};
  return labels;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level outside [0,1]");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw DomainError("quantile input is not sorted");
  }
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DurationSummary duration_summary(
    const std::vector<logging::SessionSummary>& sessions,
    const std::string& instance) {
  return summarize_durations(select(sessions, instance, false), instance);
}

InteractionBins interaction_bins(
    const std::vector<logging::SessionSummary>& sessions,
    const std::string& instance) {
  return summarize_bins(select(sessions, instance, false), instance);
}

Report analyze(const std::vector<logging::SessionSummary>& sessions,
               bool by_instance) {
  Report report;
  if (!by_instance) {
    const auto picked = select(sessions, "", true);
    report.durations.push_back(summarize_durations(picked, "all"));
    report.bins.push_back(summarize_bins(picked, "all"));
    return report;
  }
  std::vector<std::string> labels;
  for (const logging::SessionSummary& s : sessions) {
    if (std::find(labels.begin(), labels.end(), s.instance) == labels.end()) {
      labels.push_back(s.instance);
    }
  }
  for (const std::string& label : labels) {
    report.durations.push_back(duration_summary(sessions, label));
    report.bins.push_back(interaction_bins(sessions, label));
  }
  return report;
}

std::string render(const Report& report, const std::string& format) {
  if (format == "text") return render_text(report);
  if (format == "csv") return render_csv(report);
  if (format == "json") return render_json(report);
  throw ConfigError("unknown report format '" + format +
                    "' (expected text, csv, or json)");
}

}  // namespace gamepot::analyzer
