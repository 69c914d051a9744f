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
#include <limits>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "skewkurt/bounds.hpp"
#include "skewkurt/error.hpp"
#include "skewkurt/partition.hpp"

namespace skewkurt {

/// Smallest kurtosis seen among rows whose skewness rounds to this bin.
struct EnvelopeBin {
  double s_center = 0.0;
  double k_min = std::numeric_limits<double>::infinity();
  double s_at_min = 0.0;  // skewness of the row that set k_min
  std::size_t count = 0;
};

struct EnvelopeEstimate {
  std::size_t n = 0;
  double bin_width = 0.01;
  std::size_t total_rows = 0;
  std::vector<EnvelopeBin> bins;  // occupied bins only, ascending s_center
};

/**
 * Streaming min/count binning of (S, K) on the grid s_center = i * bin_width,
 * |s_center| <= (n-2)/sqrt(n-1). merge() is associative and commutative.
 */
class EnvelopeAccumulator {
 public:
  EnvelopeAccumulator(std::size_t n, double bin_width) : n_(n), width_(bin_width) {
    if (!(bin_width > 0.0)) throw Error(ErrorKind::invalid_argument, "bin width must be > 0");
    half_ = static_cast<std::int64_t>(std::ceil(bound_set(n).skew_abs_max / bin_width));
    bins_.resize(static_cast<std::size_t>(2 * half_ + 1));
  }

  void add(double s, double k) noexcept {
    auto i = static_cast<std::int64_t>(std::llround(s / width_));
    i = std::clamp(i, -half_, half_);
    EnvelopeBin& b = bins_[static_cast<std::size_t>(i + half_)];
    if (k < b.k_min || (k == b.k_min && s < b.s_at_min)) {
      b.k_min = k;
      b.s_at_min = s;
    }
    ++b.count;
    ++total_;
  }

  void merge(const EnvelopeAccumulator& other) {
    if (other.n_ != n_ || other.width_ != width_) {
      throw Error(ErrorKind::invalid_argument, "cannot merge envelopes with different grids");
    }
    for (std::size_t i = 0; i < bins_.size(); ++i) {
      const EnvelopeBin& o = other.bins_[i];
      EnvelopeBin& b = bins_[i];
      if (o.count == 0) continue;
      if (o.k_min < b.k_min || (o.k_min == b.k_min && o.s_at_min < b.s_at_min)) {
        b.k_min = o.k_min;
        b.s_at_min = o.s_at_min;
      }
      b.count += o.count;
    }
    total_ += other.total_;
  }

  std::size_t n() const noexcept { return n_; }
  double bin_width() const noexcept { return width_; }

  EnvelopeEstimate finish() const {
    EnvelopeEstimate est;
    est.n = n_;
    est.bin_width = width_;
    est.total_rows = total_;
    for (std::size_t i = 0; i < bins_.size(); ++i) {
      if (bins_[i].count == 0) continue;
      EnvelopeBin b = bins_[i];
      b.s_center = static_cast<double>(static_cast<std::int64_t>(i) - half_) * width_;
      est.bins.push_back(b);
    }
    return est;
  }

 private:
  std::size_t n_;
  double width_;
  std::int64_t half_ = 0;
  std::size_t total_ = 0;
  std::vector<EnvelopeBin> bins_;
};

inline EnvelopeEstimate lower_envelope(const BlockStatsTable& table, double bin_width = 0.01) {
  if (table.rows.empty()) throw Error(ErrorKind::insufficient_data, "empty table");
  EnvelopeAccumulator acc(table.n, bin_width);
  for (const auto& row : table.rows) acc.add(row.summary.skewness, row.summary.kurtosis);
  return acc.finish();
}

/// Adds every non-degenerate block of `source` to `acc` without materialising a table.
inline void accumulate(EnvelopeAccumulator& acc, const SeriesSource& source, std::size_t n, unsigned threads = 0) {
  acc.merge(reduce_blocks(
      source, n, threads, EnvelopeAccumulator(acc.n(), acc.bin_width()),
      [](EnvelopeAccumulator& a, std::size_t, const MomentSummary& s) {
        if (!s.degenerate) a.add(s.skewness, s.kurtosis);
      },
      [](EnvelopeAccumulator& into, const EnvelopeAccumulator& from) { into.merge(from); }));
}

inline EnvelopeEstimate lower_envelope(const SeriesSource& source, std::size_t n, double bin_width = 0.01,
                                       unsigned threads = 0) {
  EnvelopeAccumulator acc(n, bin_width);
  accumulate(acc, source, n, threads);
  EnvelopeEstimate est = acc.finish();
  if (est.bins.empty()) throw Error(ErrorKind::insufficient_data, "empty table");
  return est;
}

/// max over bins (optionally |S| <= max_abs_s) of k_min - (1 + S^2), at the S that set k_min.
inline double pearson_gap(const EnvelopeEstimate& est,
                          double max_abs_s = std::numeric_limits<double>::infinity()) {
  double gap = -std::numeric_limits<double>::infinity();
  for (const auto& b : est.bins) {
    if (std::abs(b.s_center) > max_abs_s) continue;
    gap = std::max(gap, b.k_min - BoundSet::pearson_lower(b.s_at_min));
  }
  if (!std::isfinite(gap)) throw Error(ErrorKind::insufficient_data, "no bins in range");
  return gap;
}

struct FittedSegment {
  ParabolaSegment parabola;
  double rms = 0.0;
  std::size_t points = 0;
};

struct FittedEnvelope {
  std::size_t n = 0;
  std::vector<FittedSegment> segments;  // left side, outermost first
  std::vector<double> breakpoints;      // interior cut points, ascending
};

namespace detail {

struct EnvelopePoint {
  double s;  // <= 0
  double k;
};

/// Left-side envelope points: each bin pair {i, -i} folded to the lower of the two minima.
inline std::vector<EnvelopePoint> folded_points(const EnvelopeEstimate& est) {
  std::map<long long, EnvelopePoint> by_key;
  for (const auto& b : est.bins) {
    const auto key = std::llabs(std::llround(b.s_center / est.bin_width));
    const EnvelopePoint p{-std::abs(b.s_at_min), b.k_min};
    auto [it, inserted] = by_key.try_emplace(key, p);
    if (!inserted && p.k < it->second.k) it->second = p;
  }
  std::vector<EnvelopePoint> pts;
  pts.reserve(by_key.size());
  for (const auto& [key, p] : by_key) pts.push_back(p);
  std::sort(pts.begin(), pts.end(), [](const EnvelopePoint& a, const EnvelopePoint& b) { return a.s < b.s; });
  return pts;
}

struct ParabolaFit {
  double a = 0, b = 0, c = 0;
  double sse = 0;
};

inline ParabolaFit least_squares_parabola(std::span<const EnvelopePoint> pts) {
  Eigen::MatrixXd design(pts.size(), 3);
  Eigen::VectorXd target(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    design(i, 0) = pts[i].s * pts[i].s;
    design(i, 1) = pts[i].s;
    design(i, 2) = 1.0;
    target(i) = pts[i].k;
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(target);
  ParabolaFit fit{coef(0), coef(1), coef(2), 0.0};
  fit.sse = (design * coef - target).squaredNorm();
  return fit;
}

inline FittedEnvelope assemble_fit(const EnvelopeEstimate& est, std::span<const EnvelopePoint> pts,
                                   std::span<const std::size_t> cuts) {
  // cuts: point indices where segments start, first is 0; segment j covers [cuts[j], cuts[j+1])
  FittedEnvelope out;
  out.n = est.n;
  const double outer = -bound_set(est.n).skew_abs_max;
  for (std::size_t j = 0; j < cuts.size(); ++j) {
    const std::size_t begin = cuts[j];
    const std::size_t end = j + 1 < cuts.size() ? cuts[j + 1] : pts.size();
    const auto slice = pts.subspan(begin, end - begin);
    const ParabolaFit f = least_squares_parabola(slice);
    FittedSegment seg;
    seg.parabola = {f.a, f.b, f.c, j == 0 ? outer : out.breakpoints.back(), 0.0};
    if (j + 1 < cuts.size()) {
      const double cut = 0.5 * (pts[end - 1].s + pts[end].s);
      out.breakpoints.push_back(cut);
      seg.parabola.s_hi = cut;
    }
    seg.points = slice.size();
    seg.rms = std::sqrt(f.sse / static_cast<double>(slice.size()));
    out.segments.push_back(seg);
  }
  return out;
}

}  // namespace detail

/// Interior breakpoints of the tabulated envelope for n in [4, 9].
inline std::vector<double> table1_breakpoints(std::size_t n) {
  const LowerEnvelopeSpec env = table1_envelope(n);
  std::vector<double> cuts;
  for (std::size_t i = 0; i + 1 < env.segments.size(); ++i) cuts.push_back(env.segments[i].s_hi);
  return cuts;
}

/**
 * Least-squares parabola per segment of the folded (left-side) envelope.
 * `breakpoints` are the interior cut points in S (< 0, ascending); a point at
 * exactly a cut belongs to the outer segment.
 */
inline FittedEnvelope fit_envelope(const EnvelopeEstimate& est, std::span<const double> breakpoints) {
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end())) {
    throw Error(ErrorKind::invalid_argument, "breakpoints must be ascending");
  }
  const auto pts = detail::folded_points(est);
  std::vector<std::size_t> counts(breakpoints.size() + 1, 0);
  for (const auto& p : pts) {
    const auto seg = std::lower_bound(breakpoints.begin(), breakpoints.end(), p.s) - breakpoints.begin();
    ++counts[static_cast<std::size_t>(seg)];
  }
  for (std::size_t c : counts) {
    if (c < 3) throw Error(ErrorKind::insufficient_data, "segment underdetermined");
  }

  FittedEnvelope out;
  out.n = est.n;
  out.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  const double outer = -bound_set(est.n).skew_abs_max;
  std::size_t begin = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const auto slice = std::span(pts).subspan(begin, counts[j]);
    begin += counts[j];
    const auto f = detail::least_squares_parabola(slice);
    FittedSegment seg;
    seg.parabola = {f.a, f.b, f.c, j == 0 ? outer : breakpoints[j - 1], j < breakpoints.size() ? breakpoints[j] : 0.0};
    seg.points = slice.size();
    seg.rms = std::sqrt(f.sse / static_cast<double>(slice.size()));
    out.segments.push_back(seg);
  }
  return out;
}

/**
 * Automatic segmentation with 1..max_segments pieces. Cuts are searched by dynamic
 * programming over up to 48 candidate positions. The chosen count minimises
 * RMS(s) + 2 * RMS_floor * (s - 1), RMS_floor being the best RMS over all counts
 * (at least 1e-9): an extra segment must buy at least twice the residual floor.
 */
inline FittedEnvelope fit_envelope_auto(const EnvelopeEstimate& est, std::size_t max_segments = 4) {
  const auto pts = detail::folded_points(est);
  const std::size_t m = pts.size();
  if (m < 3) throw Error(ErrorKind::insufficient_data, "segment underdetermined");
  max_segments = std::clamp<std::size_t>(max_segments, 1, 4);

  std::vector<std::size_t> cand;  // candidate segment starts, cand.front() == 0, cand.back() == m
  constexpr std::size_t kCandidates = 48;
  for (std::size_t i = 0; i <= kCandidates; ++i) {
    const std::size_t pos = m * i / kCandidates;
    if (cand.empty() || pos != cand.back()) cand.push_back(pos);
  }
  const std::size_t c = cand.size();
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> cost(c * c, inf);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      if (cand[j] - cand[i] >= 3) {
        cost[i * c + j] = detail::least_squares_parabola(std::span(pts).subspan(cand[i], cand[j] - cand[i])).sse;
      }
    }
  }
  // best[s][j]: minimal SSE covering cand[0]..cand[j] with s segments
  std::vector<std::vector<double>> best(max_segments + 1, std::vector<double>(c, inf));
  std::vector<std::vector<std::size_t>> from(max_segments + 1, std::vector<std::size_t>(c, 0));
  best[0][0] = 0.0;
  for (std::size_t s = 1; s <= max_segments; ++s) {
    for (std::size_t j = 1; j < c; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const double v = best[s - 1][i] + cost[i * c + j];
        if (v < best[s][j]) {
          best[s][j] = v;
          from[s][j] = i;
        }
      }
    }
  }

  auto rms_of = [&](std::size_t s) { return std::sqrt(best[s][c - 1] / static_cast<double>(m)); };
  double floor = inf;
  for (std::size_t s = 1; s <= max_segments; ++s) floor = std::min(floor, rms_of(s));
  floor = std::max(floor, 1e-9);  // exact data: rounding noise must not buy segments
  std::size_t chosen = 0;
  double chosen_score = inf;
  for (std::size_t s = 1; s <= max_segments; ++s) {
    if (!std::isfinite(best[s][c - 1])) continue;
    const double score = rms_of(s) + 2.0 * floor * static_cast<double>(s - 1);
    if (score < chosen_score) {
      chosen_score = score;
      chosen = s;
    }
  }
  if (chosen == 0) throw Error(ErrorKind::insufficient_data, "segment underdetermined");

  std::vector<std::size_t> cuts(chosen);
  std::size_t j = c - 1;
  for (std::size_t s = chosen; s >= 1; --s) {
    const std::size_t i = from[s][j];
    cuts[s - 1] = cand[i];
    j = i;
  }
  return detail::assemble_fit(est, pts, cuts);
}

}  // namespace skewkurt
