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
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skewkurt/error.hpp"

namespace skewkurt {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

struct BoxCountResult {
  std::vector<double> scales;       // epsilon_j = L / 2^j, j = 1..levels
  std::vector<std::size_t> counts;  // occupied boxes at each scale
  std::size_t distinct_points = 0;
};

struct DimensionFit {
  double dimension = 0.0;
  double r_squared = 0.0;
  std::size_t first_level = 0;  // 1-based, inclusive
  std::size_t last_level = 0;
};

inline constexpr std::size_t kMaxBoxLevels = 30;

/**
 * Direct box counting on dyadic grids anchored at the lower-left corner of the
 * bounding box, with square boxes of side L/2^j (L = longer box side). A point on
 * a grid line goes to the box of the floor index; the top and right edges fold
 * into the last box.
 */
inline BoxCountResult box_count(std::span<const Point2D> points, std::size_t levels) {
  if (points.empty()) throw Error(ErrorKind::insufficient_data, "empty point set");
  if (levels < 1 || levels > kMaxBoxLevels) {
    throw Error(ErrorKind::invalid_argument, "levels must be in [1, 30]");
  }
  double x0 = points[0].x, x1 = x0, y0 = points[0].y, y1 = y0;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error(ErrorKind::invalid_input, "non-finite point");
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double side = std::max(x1 - x0, y1 - y0);
  if (!(side > 0.0)) throw Error(ErrorKind::invalid_input, "degenerate bounding box");

  // finest-level cell of each point; coarser cells are prefixes (cell >> shift)
  const std::uint64_t cells = std::uint64_t{1} << levels;
  auto cell = [&](double v, double origin) {
    const double t = (v - origin) / side * static_cast<double>(cells);
    return std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(0.0, std::floor(t))), cells - 1);
  };
  std::vector<std::pair<std::uint64_t, std::uint64_t>> idx;
  idx.reserve(points.size());
  for (const auto& p : points) idx.emplace_back(cell(p.x, x0), cell(p.y, y0));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  BoxCountResult out;
  out.distinct_points = idx.size();
  std::vector<std::uint64_t> keys(idx.size());
  for (std::size_t j = 1; j <= levels; ++j) {
    const unsigned shift = static_cast<unsigned>(levels - j);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      keys[i] = ((idx[i].first >> shift) << j) | (idx[i].second >> shift);
    }
    std::sort(keys.begin(), keys.end());
    out.scales.push_back(side / static_cast<double>(std::uint64_t{1} << j));
    out.counts.push_back(static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin()));
  }
  return out;
}

/// Ordinary least-squares slope and R^2 of log N(eps) against log(1/eps) over levels [first, last].
inline DimensionFit dimension_fit(std::span<const double> scales, std::span<const std::size_t> counts,
                                  std::size_t first_level, std::size_t last_level) {
  if (scales.size() != counts.size()) throw Error(ErrorKind::invalid_argument, "scales/counts length mismatch");
  if (first_level < 1 || last_level > scales.size() || last_level < first_level + 2) {
    throw Error(ErrorKind::insufficient_data, "need at least 3 scales in the fit range");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double m = static_cast<double>(last_level - first_level + 1);
  for (std::size_t j = first_level; j <= last_level; ++j) {
    if (counts[j - 1] < 2) throw Error(ErrorKind::insufficient_data, "fit range contains a scale with < 2 boxes");
    const double x = -std::log(scales[j - 1]);
    const double y = std::log(static_cast<double>(counts[j - 1]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vxx = sxx - sx * sx / m;
  const double vxy = sxy - sx * sy / m;
  const double vyy = syy - sy * sy / m;
  DimensionFit fit;
  fit.dimension = vxy / vxx;
  fit.r_squared = vyy > 0.0 ? std::clamp(vxy * vxy / (vxx * vyy), 0.0, 1.0) : 1.0;
  fit.first_level = first_level;
  fit.last_level = last_level;
  return fit;
}

/**
 * Default fit range: drop the two coarsest levels (they mostly see the bounding box)
 * and every fine level with fewer than 4 distinct points per occupied box. At mean
 * occupancy 4 a uniformly filled box is empty with probability e^-4 < 2%, so counts
 * up to that level are not yet undersampled.
 */
inline std::pair<std::size_t, std::size_t> default_fit_range(const BoxCountResult& result) {
  constexpr std::size_t kMinPointsPerBox = 4;
  std::size_t last = result.counts.size();
  while (last > 0 && result.counts[last - 1] * kMinPointsPerBox > result.distinct_points) --last;
  return {std::min<std::size_t>(3, result.counts.size()), last};
}

inline DimensionFit dimension_fit(const BoxCountResult& result,
                                  std::optional<std::pair<std::size_t, std::size_t>> range = std::nullopt) {
  const auto [first, last] = range.value_or(default_fit_range(result));
  return dimension_fit(result.scales, result.counts, first, last);
}

}  // namespace skewkurt
