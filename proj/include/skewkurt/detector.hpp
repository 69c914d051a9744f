/*
 * Copyright (C) 2026 The skewkurt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "skewkurt/error.hpp"
#include "skewkurt/partition.hpp"

namespace skewkurt {

/// Minimum rows with S > s_q before a conditional distribution is trusted.
inline constexpr std::size_t kMinTailRows = 10;

namespace detail {

/// 1-based nearest rank ceil(q*m), guarded against q*m landing a hair above an integer.
inline std::size_t nearest_rank(double q, std::size_t m) {
  const double x = q * static_cast<double>(m);
  auto rank = static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
  return std::clamp<std::size_t>(rank, 1, m);
}

inline void require_level(double q) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::invalid_argument, "quantile level must be in (0, 1)");
}

}  // namespace detail

/// Nearest-rank q-quantile: the ceil(q*m)-th smallest value.
inline double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::insufficient_data, "quantile of empty sample");
  detail::require_level(q);
  std::vector<double> work(values.begin(), values.end());
  const std::size_t k = detail::nearest_rank(q, work.size()) - 1;
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k), work.end());
  return work[k];
}

/// Empirical CDF of R: support ascending, fractions i/m.
struct EcdfCurve {
  std::vector<double> support;
  std::vector<double> fractions;
  std::string label;            // "all" or "q=<level>"
  std::optional<double> level;  // the conditioning q, if any
  double threshold = -std::numeric_limits<double>::infinity();  // s_q
  std::size_t count = 0;

  /// Fraction of the conditioned rows with lo <= R <= hi.
  double mass_in(double lo, double hi) const {
    if (count == 0) return 0.0;
    const auto first = std::lower_bound(support.begin(), support.end(), lo);
    const auto last = std::upper_bound(support.begin(), support.end(), hi);
    return static_cast<double>(last - first) / static_cast<double>(count);
  }
};

/// ECDF of R over rows with S > s_q (strictly), or over all rows when `level` is empty.
inline EcdfCurve conditional_ecdf(std::span<const double> skewness, std::span<const double> ratio,
                                  std::optional<double> level) {
  if (skewness.size() != ratio.size()) throw Error(ErrorKind::invalid_argument, "column length mismatch");
  if (skewness.empty()) throw Error(ErrorKind::insufficient_data, "empty table");

  EcdfCurve curve;
  curve.level = level;
  if (level) {
    detail::require_level(*level);
    curve.threshold = quantile(skewness, *level);
    for (std::size_t i = 0; i < skewness.size(); ++i) {
      if (skewness[i] > curve.threshold) curve.support.push_back(ratio[i]);
    }
    if (curve.support.size() < kMinTailRows) {
      throw Error(ErrorKind::insufficient_data,
                  "insufficient tail rows: required " + std::to_string(kMinTailRows) + ", available " +
                      std::to_string(curve.support.size()));
    }
    curve.label = "q=" + detail::format_number(*level);
  } else {
    curve.support.assign(ratio.begin(), ratio.end());
    curve.label = "all";
  }
  std::sort(curve.support.begin(), curve.support.end());
  curve.count = curve.support.size();
  curve.fractions.resize(curve.count);
  for (std::size_t i = 0; i < curve.count; ++i) {
    curve.fractions[i] = static_cast<double>(i + 1) / static_cast<double>(curve.count);
  }
  return curve;
}

namespace detail {

struct ShapeColumns {
  std::vector<double> skewness;
  std::vector<double> ratio;
};

inline ShapeColumns shape_columns(const BlockStatsTable& table) {
  ShapeColumns cols;
  cols.skewness.reserve(table.rows.size());
  cols.ratio.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    cols.skewness.push_back(row.summary.skewness);
    cols.ratio.push_back(row.summary.ratio);
  }
  return cols;
}

}  // namespace detail

inline EcdfCurve conditional_ecdf(const BlockStatsTable& table, std::optional<double> level) {
  const auto cols = detail::shape_columns(table);
  return conditional_ecdf(cols.skewness, cols.ratio, level);
}

struct DetectorConfig {
  std::vector<double> q_grid{0.9, 0.95, 0.99, 0.999, 0.9995, 0.9999, 0.99995};
  double epsilon = 0.05;
  /// p(q) at or above this counts as "close to 1".
  double p_star = 0.9;
  /// The power law is declared only if it shows up at a level no higher than this.
  double q_max_for_emergence = 0.999;

  void validate() const {
    if (q_grid.empty()) throw Error(ErrorKind::invalid_argument, "empty quantile grid");
    for (double q : q_grid) detail::require_level(q);
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::invalid_argument, "epsilon must be in (0, 1)");
    if (!(p_star > 0.0 && p_star <= 1.0)) throw Error(ErrorKind::invalid_argument, "p_star must be in (0, 1]");
  }
};

struct QuantileLevel {
  double q = 0.0;
  double s_q = 0.0;
  std::size_t tail_rows = 0;  // rows with S > s_q
  double p = std::numeric_limits<double>::quiet_NaN();
  bool usable = false;  // tail_rows >= kMinTailRows
};

struct EmergenceReport {
  std::string label;
  std::size_t n = 0;
  std::size_t rows = 0;
  DetectorConfig config;
  std::vector<QuantileLevel> levels;  // grid order, sorted by q
  bool emerged = false;
  std::optional<double> witness_q;  // smallest usable q with p(q) >= p_star
};

/**
 * p(q) = P(1-eps <= R <= 1+eps | S > s_q) for every grid level, and the decision:
 * the 4/3 power law has emerged when p(q) >= p_star at some q <= q_max_for_emergence.
 * Levels with fewer than kMinTailRows conditioning rows are kept but flagged unusable.
 */
inline EmergenceReport emergence(std::span<const double> skewness, std::span<const double> ratio,
                                 const DetectorConfig& config, std::string label = {}, std::size_t n = 0) {
  config.validate();
  if (skewness.size() != ratio.size()) throw Error(ErrorKind::invalid_argument, "column length mismatch");
  const std::size_t m = skewness.size();
  if (m == 0) throw Error(ErrorKind::insufficient_data, "table too small for detection");

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return skewness[a] < skewness[b]; });
  std::vector<double> sorted_s(m);
  // in_window_suffix[j]: rows among sorted positions j..m-1 with R inside the window
  std::vector<std::size_t> in_window_suffix(m + 1, 0);
  const double lo = 1.0 - config.epsilon, hi = 1.0 + config.epsilon;
  for (std::size_t j = m; j-- > 0;) {
    sorted_s[j] = skewness[order[j]];
    const double r = ratio[order[j]];
    in_window_suffix[j] = in_window_suffix[j + 1] + (r >= lo && r <= hi ? 1 : 0);
  }

  EmergenceReport report;
  report.label = std::move(label);
  report.n = n;
  report.rows = m;
  report.config = config;
  std::vector<double> grid = config.q_grid;
  std::sort(grid.begin(), grid.end());
  bool any_usable = false;
  for (double q : grid) {
    QuantileLevel level;
    level.q = q;
    level.s_q = sorted_s[detail::nearest_rank(q, m) - 1];
    const auto first_above = std::upper_bound(sorted_s.begin(), sorted_s.end(), level.s_q) - sorted_s.begin();
    level.tail_rows = m - static_cast<std::size_t>(first_above);
    level.usable = level.tail_rows >= kMinTailRows;
    if (level.usable) {
      any_usable = true;
      level.p = static_cast<double>(in_window_suffix[first_above]) / static_cast<double>(level.tail_rows);
      if (!report.witness_q && level.p >= config.p_star) report.witness_q = q;
    }
    report.levels.push_back(level);
  }
  if (!any_usable) throw Error(ErrorKind::insufficient_data, "table too small for detection");
  report.emerged = report.witness_q.has_value() && *report.witness_q <= config.q_max_for_emergence;
  return report;
}

inline EmergenceReport emergence(const BlockStatsTable& table, const DetectorConfig& config) {
  const auto cols = detail::shape_columns(table);
  return emergence(cols.skewness, cols.ratio, config, table.source, table.n);
}

inline nlohmann::json to_json(const EmergenceReport& report) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : report.levels) {
    nlohmann::json item = {{"q", l.q}, {"s_q", l.s_q}, {"tail_rows", l.tail_rows}, {"usable", l.usable}};
    item["p"] = l.usable ? nlohmann::json(l.p) : nlohmann::json(nullptr);
    levels.push_back(std::move(item));
  }
  return {
      {"label", report.label},
      {"n", report.n},
      {"rows", report.rows},
      {"config",
       {{"q_grid", report.config.q_grid},
        {"epsilon", report.config.epsilon},
        {"p_star", report.config.p_star},
        {"q_max_for_emergence", report.config.q_max_for_emergence}}},
      {"levels", levels},
      {"emerged", report.emerged},
      {"witness_q", report.witness_q ? nlohmann::json(*report.witness_q) : nlohmann::json(nullptr)},
  };
}

}  // namespace skewkurt
