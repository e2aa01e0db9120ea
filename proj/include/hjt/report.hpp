#pragma once

// Per-sample residual bookkeeping and pass/fail verdicts.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hjt/linalg.hpp"

namespace hjt {

using Params = std::map<std::string, double>;

struct SampleResult {
  Vec point;
  std::map<std::string, double> residuals;  // channel -> magnitude (max norm)
  std::map<std::string, double> values;    // auxiliary scalars, e.g. energy
};

struct ChannelSummary {
  double max = 0.0;
  Vec argmax;
  bool gating = true;  // counts toward the verdict
};

struct ResidualReport {
  std::string mode;
  double tol = 0.0;
  std::vector<SampleResult> samples;  // lattice order
  std::map<std::string, ChannelSummary> channels;
  bool pass = false;

  double max(const std::string& channel) const {
    auto it = channels.find(channel);
    return it == channels.end() ? 0.0 : it->second.max;
  }

  /// Aggregates sample residuals into channel maxima; `gating` lists verdict channels.
  void summarize(const std::map<std::string, bool>& gating) {
    for (const auto& [name, gate] : gating) {
      ChannelSummary c;
      c.gating = gate;
      bool first = true;
      for (const auto& s : samples) {
        auto it = s.residuals.find(name);
        if (it == s.residuals.end()) continue;
        double v = std::isnan(it->second) ? INFINITY : it->second;
        if (first || v > c.max) {
          c.max = v;
          c.argmax = s.point;
          first = false;
        }
      }
      channels[name] = c;
    }
    decide();
  }

  /// Grid-level channel (e.g. a spread over samples).
  void add_global(const std::string& name, double value, bool gating = true) {
    ChannelSummary c;
    c.max = std::isnan(value) ? INFINITY : value;
    c.gating = gating;
    channels[name] = c;
    decide();
  }

  void decide() {
    pass = true;
    for (const auto& [name, c] : channels)
      if (c.gating && !(c.max <= tol)) pass = false;
  }
};

/// Population standard deviation.
inline double stddev(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace hjt
