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

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewkurt/error.hpp"
#include "skewkurt/moments.hpp"

namespace skewkurt {

/// Closed-form limits on sample skewness and kurtosis for a block of size n.
struct BoundSet {
  std::size_t n = 0;
  double skew_abs_max_loose = 0.0;  // sqrt(n-1)
  double skew_abs_max = 0.0;        // (n-2)/sqrt(n-1)
  double kurt_max_loose = 0.0;      // n
  double kurt_max_dalen = 0.0;      // (n^2-3n+3)/(n-1)

  /// K <= (1/2)((n-3)/(n-2)) S^2 + n/2. Undefined for n < 3.
  double sharma_upper(double skewness) const {
    if (n < 3) throw Error(ErrorKind::out_of_domain, "sharma upper bound requires n >= 3");
    const double nd = static_cast<double>(n);
    return 0.5 * ((nd - 3.0) / (nd - 2.0)) * skewness * skewness + 0.5 * nd;
  }

  /// Pearson: K >= 1 + S^2.
  static double pearson_lower(double skewness) noexcept { return 1.0 + skewness * skewness; }
};

inline BoundSet bound_set(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "sample size too small");
  const double nd = static_cast<double>(n);
  BoundSet b;
  b.n = n;
  b.skew_abs_max_loose = std::sqrt(nd - 1.0);
  b.skew_abs_max = (nd - 2.0) / std::sqrt(nd - 1.0);
  b.kurt_max_loose = nd;
  b.kurt_max_dalen = (nd * nd - 3.0 * nd + 3.0) / (nd - 1.0);
  return b;
}

/// One piece K = aS^2 + bS + c of the left half (S <= 0) of a lower envelope.
struct ParabolaSegment {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double s_lo = 0.0;
  double s_hi = 0.0;

  constexpr double operator()(double s) const noexcept { return (a * s + b) * s + c; }
};

/// Empirical lower kurtosis envelope for one small n, left side ordered by S.
struct LowerEnvelopeSpec {
  std::size_t n = 0;
  std::span<const ParabolaSegment> segments;
};

namespace detail {

// Published piecewise-parabolic lower envelopes, n = 4..9, coefficients as printed
// (5 decimals). Segments are listed from the most negative S-range inwards.
inline constexpr std::array<ParabolaSegment, 1> envelope_n4{{
    {-0.16930, -1.35019, 1.0, -1.1547, 0.0},
}};
inline constexpr std::array<ParabolaSegment, 2> envelope_n5{{
    {-0.27282, -2.42886, 0.22056, -1.5, -0.40825},
    {-0.5, 0.0, 1.25, -0.40825, 0.0},
}};
inline constexpr std::array<ParabolaSegment, 2> envelope_n6{{
    {-0.39975, -3.49778, -0.7778, -1.78885, -0.71},
    {-0.72619, -1.2256, 1.0, -0.71, 0.0},
}};
inline constexpr std::array<ParabolaSegment, 3> envelope_n7{{
    {-0.46626, -4.39171, -1.85513, -2.04124, -0.95394},
    {-0.89555, -2.35544, 0.47801, -0.95394, -0.28868},
    {-1.0, 0.0, 1.16667, -0.28868, 0.0},
}};
inline constexpr std::array<ParabolaSegment, 3> envelope_n8{{
    {-0.49653, -5.12229, -2.91984, -2.26779, -1.155},
    {-0.88454, -3.14719, -0.12097, -1.155, -0.515},
    {-1.30395, -1.18653, 1.0, -0.515, 0.0},
}};
// The n = 9 row prints its outermost piece below the other three.
inline constexpr std::array<ParabolaSegment, 4> envelope_n9{{
    {-0.47074, -5.59352, -3.83497, -2.47487, -1.325},
    {-1.25168, -4.55704, -1.0906, -1.325, -0.705},
    {-1.58841, -2.43419, 0.57337, -0.705, -0.234},
    {-1.16882, 0.0, 1.12, -0.234, 0.0},
}};

}  // namespace detail

inline constexpr std::size_t kEnvelopeMinN = 4;
inline constexpr std::size_t kEnvelopeMaxN = 9;

inline LowerEnvelopeSpec table1_envelope(std::size_t n) {
  switch (n) {
    case 4: return {n, detail::envelope_n4};
    case 5: return {n, detail::envelope_n5};
    case 6: return {n, detail::envelope_n6};
    case 7: return {n, detail::envelope_n7};
    case 8: return {n, detail::envelope_n8};
    case 9: return {n, detail::envelope_n9};
    default: break;
  }
  throw Error(ErrorKind::out_of_domain, "no empirical envelope for n = " + std::to_string(n));
}

/**
 * Tabulated lower envelope of K at skewness S for n in [4, 9].
 *
 * The envelope is symmetric in S, so it is evaluated at -|S|. At a shared
 * segment endpoint the outer (more negative) segment is used. The outermost
 * segment extends to the exact skewness bound (n-2)/sqrt(n-1), since the printed
 * endpoint is rounded.
 */
inline double table1_lower(std::size_t n, double skewness) {
  const LowerEnvelopeSpec env = table1_envelope(n);
  const double limit = bound_set(n).skew_abs_max;
  if (!(std::abs(skewness) <= limit + 1e-9)) {
    throw Error(ErrorKind::out_of_domain, "skewness out of range");
  }
  const double s = -std::abs(skewness);
  for (const ParabolaSegment& seg : env.segments) {
    if (s <= seg.s_hi) return seg(s);
  }
  return env.segments.back()(s);
}

enum class BoundKind {
  skew_loose,      // |S| <= sqrt(n-1)
  skew_wilkins,    // |S| <= (n-2)/sqrt(n-1)
  kurt_loose,      // K <= n
  kurt_dalen,      // K <= (n^2-3n+3)/(n-1)
  pearson_lower,   // K >= 1 + S^2
  sharma_upper,    // K <= (1/2)((n-3)/(n-2))S^2 + n/2
  envelope_lower,  // K >= tabulated envelope, n in [4, 9]
};

constexpr std::string_view to_string(BoundKind kind) noexcept {
  switch (kind) {
    case BoundKind::skew_loose: return "skew_loose";
    case BoundKind::skew_wilkins: return "skew_wilkins";
    case BoundKind::kurt_loose: return "kurt_loose";
    case BoundKind::kurt_dalen: return "kurt_dalen";
    case BoundKind::pearson_lower: return "pearson_lower";
    case BoundKind::sharma_upper: return "sharma_upper";
    case BoundKind::envelope_lower: return "envelope_lower";
  }
  return "unknown";
}

struct BoundViolation {
  BoundKind kind;
  double value;  // the offending S, |S| or K
  double limit;  // the bound it crossed
};

/// Absolute slack for the theorem bounds (floating error only).
inline constexpr double kBoundTolerance = 1e-9;
/// Absolute slack for the tabulated envelope, whose coefficients are rounded.
inline constexpr double kEnvelopeTolerance = 0.01;

/// Every bound that `summary` crosses. Empty for any genuine sample.
inline std::vector<BoundViolation> check_summary(const MomentSummary& summary) {
  if (summary.degenerate) throw Error(ErrorKind::invalid_argument, "degenerate block");
  const BoundSet b = bound_set(summary.n);
  const double s = summary.skewness;
  const double k = summary.kurtosis;
  const double abs_s = std::abs(s);

  std::vector<BoundViolation> out;
  auto above = [&](BoundKind kind, double value, double limit, double tol) {
    if (!(value <= limit + tol)) out.push_back({kind, value, limit});
  };
  auto below = [&](BoundKind kind, double value, double limit, double tol) {
    if (!(value >= limit - tol)) out.push_back({kind, value, limit});
  };

  above(BoundKind::skew_loose, abs_s, b.skew_abs_max_loose, kBoundTolerance);
  above(BoundKind::skew_wilkins, abs_s, b.skew_abs_max, kBoundTolerance);
  above(BoundKind::kurt_loose, k, b.kurt_max_loose, kBoundTolerance);
  above(BoundKind::kurt_dalen, k, b.kurt_max_dalen, kBoundTolerance);
  below(BoundKind::pearson_lower, k, BoundSet::pearson_lower(s), kBoundTolerance);
  if (summary.n >= 3) above(BoundKind::sharma_upper, k, b.sharma_upper(s), kBoundTolerance);

  if (summary.n >= kEnvelopeMinN && summary.n <= kEnvelopeMaxN &&
      abs_s <= b.skew_abs_max + kBoundTolerance) {
    below(BoundKind::envelope_lower, k, table1_lower(summary.n, s), kEnvelopeTolerance);
  }
  return out;
}

}  // namespace skewkurt
