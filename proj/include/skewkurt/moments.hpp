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
#include <span>

#include "skewkurt/error.hpp"

namespace skewkurt {

/// Mean and biased (1/n) central moments of orders 2..4.
struct CentralMoments {
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

/**
 * Shape statistics of one block: the point (S, K) in the skewness-kurtosis
 * plane plus the scale-invariant ratio R = (sum d^3)^(4/3) / sum d^4.
 *
 * When `degenerate` is set (all values equal, m2 == 0) skewness, kurtosis and
 * ratio are NaN and the summary must be filtered out by the caller.
 */
struct MomentSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double ratio = 0.0;
  bool degenerate = false;
};

/// t^(4/3) taken as (real cube root of t)^4, so the result is >= 0 for any t.
inline double pow_four_thirds(double t) noexcept {
  const double c = std::cbrt(t);
  const double c2 = c * c;
  return c2 * c2;
}

namespace detail {

inline void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_input, "non-finite value");
  }
}

}  // namespace detail

/// Two-pass central moments: the mean first, then powered deviations.
inline CentralMoments central_moments(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::invalid_argument, "empty sample");
  detail::require_finite(values);

  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / count;

  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  return {mean, std::max(0.0, s2 / count), s3 / count, std::max(0.0, s4 / count)};
}

/// K * R == n^(1/3) * |S|^(4/3); with R = 1 this is the 4/3 power-law prediction for K.
inline double power_law_rhs(std::size_t n, double skewness) noexcept {
  return std::cbrt(static_cast<double>(n)) * pow_four_thirds(skewness);
}

inline MomentSummary summarize(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorKind::invalid_argument, "sample size too small: need n >= 2");
  }
  const CentralMoments cm = central_moments(values);

  MomentSummary out;
  out.n = values.size();
  out.mean = cm.mean;
  out.m2 = cm.m2;
  out.m3 = cm.m3;
  out.m4 = cm.m4;

  bool all_equal = true;
  for (double v : values) {
    if (v != values.front()) {
      all_equal = false;
      break;
    }
  }
  if (all_equal || cm.m2 == 0.0) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out.m2 = out.m3 = out.m4 = 0.0;
    out.skewness = out.kurtosis = out.ratio = nan;
    out.degenerate = true;
    return out;
  }

  out.skewness = cm.m3 / (cm.m2 * std::sqrt(cm.m2));
  out.kurtosis = cm.m4 / (cm.m2 * cm.m2);
  const double count = static_cast<double>(values.size());
  // sums of d^3 and d^4, recovered from the moments so the K*R identity is exact
  out.ratio = pow_four_thirds(count * cm.m3) / (count * cm.m4);
  return out;
}

}  // namespace skewkurt
