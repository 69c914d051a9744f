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
#include <cstdint>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "skewkurt/distributions.hpp"
#include "skewkurt/error.hpp"
#include "skewkurt/moments.hpp"

namespace skewkurt {

//------------------------------------------------------------------------------
// Ingestion
//------------------------------------------------------------------------------

/// Which observed values survive into the series.
struct SeriesFilter {
  enum class Kind { none, positive, threshold };
  Kind kind = Kind::none;
  double threshold = 0.0;  // Kind::threshold keeps values > threshold

  bool keep(double v) const noexcept {
    switch (kind) {
      case Kind::none: return true;
      case Kind::positive: return v > 0.0;
      case Kind::threshold: return v > threshold;
    }
    return true;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::none: return "none";
      case Kind::positive: return "positive";
      case Kind::threshold: return "threshold:" + detail::format_number(threshold);
    }
    return "none";
  }

  /// "none", "positive", or "threshold:<t>" (also "gt:<t>").
  static SeriesFilter parse(std::string_view text) {
    text = detail::trim(text);
    if (text.empty() || text == "none") return {};
    if (text == "positive") return {Kind::positive, 0.0};
    for (std::string_view prefix : {std::string_view("threshold:"), std::string_view("gt:")}) {
      if (text.starts_with(prefix)) {
        return {Kind::threshold, detail::parse_real("threshold", text.substr(prefix.size()))};
      }
    }
    throw Error(ErrorKind::invalid_argument, "unknown filter '" + std::string(text) + "'");
  }
};

struct IngestOptions {
  /// Column name (matched against a header row) or 1-based index. Empty selects the last column.
  std::string column;
  /// Field separator. ' ' splits on any run of blanks or tabs.
  char delimiter = ',';
  double missing_sentinel = -9999.0;
  /// Leading lines ignored before looking for a header (free-text preambles).
  std::size_t skip_lines = 0;
  SeriesFilter filter;
};

struct IngestResult {
  std::vector<double> values;
  std::size_t total_read = 0;        // data rows seen
  std::size_t missing_dropped = 0;   // empty fields or sentinel values
  std::size_t filtered_dropped = 0;  // rejected by the filter
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  if (delimiter == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      fields.push_back(line.substr(i, j - i));
      i = j;
    }
    return fields;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

inline bool try_parse_real(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace detail

/// Reads one numeric column in source order, dropping missing values and applying the filter.
inline IngestResult ingest_series(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  bool header_checked = false;
  long column_index = -1;  // -1: last column

  bool column_is_name = false;
  if (!options.column.empty()) {
    double idx = 0.0;
    if (detail::try_parse_real(options.column, idx) && idx >= 1.0 && idx == std::floor(idx)) {
      column_index = static_cast<long>(idx) - 1;
    } else {
      column_is_name = true;
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no <= options.skip_lines) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;

    const auto fields = detail::split_fields(view, options.delimiter);
    if (!header_checked) {
      header_checked = true;
      if (column_is_name) {
        const auto it = std::find(fields.begin(), fields.end(), detail::trim(options.column));
        if (it == fields.end()) {
          throw Error(ErrorKind::invalid_input, "column '" + options.column + "' not found in header");
        }
        column_index = static_cast<long>(it - fields.begin());
        continue;
      }
      const long idx = column_index < 0 ? static_cast<long>(fields.size()) - 1 : column_index;
      double probe = 0.0;
      if (idx < static_cast<long>(fields.size()) && !fields[idx].empty() &&
          !detail::try_parse_real(fields[idx], probe)) {
        continue;  // header row
      }
    }

    const long idx = column_index < 0 ? static_cast<long>(fields.size()) - 1 : column_index;
    if (idx >= static_cast<long>(fields.size())) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": column missing");
    }
    ++result.total_read;
    const std::string_view field = fields[idx];
    double v = 0.0;
    if (field.empty()) {
      ++result.missing_dropped;
      continue;
    }
    if (!detail::try_parse_real(field, v)) {
      throw Error(ErrorKind::invalid_input,
                  "line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) + "'");
    }
    if (v == options.missing_sentinel || std::isnan(v)) {
      ++result.missing_dropped;
      continue;
    }
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": non-finite value");
    }
    if (!options.filter.keep(v)) {
      ++result.filtered_dropped;
      continue;
    }
    result.values.push_back(v);
  }
  if (result.values.empty()) throw Error(ErrorKind::insufficient_data, "empty series after filtering");
  return result;
}

inline IngestResult ingest_series(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  return ingest_series(in, options);
}

//------------------------------------------------------------------------------
// Partitioning
//------------------------------------------------------------------------------

struct Partition {
  std::vector<std::span<const double>> blocks;
  std::size_t discarded = 0;  // trailing values that do not fill a block
};

/// floor(N/n) consecutive, non-overlapping blocks in source order.
inline Partition partition(std::span<const double> values, std::size_t n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "block size must be >= 2");
  if (values.size() < n) throw Error(ErrorKind::insufficient_data, "series shorter than one block");
  Partition out;
  const std::size_t count = values.size() / n;
  out.blocks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.blocks.push_back(values.subspan(i * n, n));
  out.discarded = values.size() - count * n;
  return out;
}

//------------------------------------------------------------------------------
// Sources
//------------------------------------------------------------------------------

/// An ingested series. `description` names the origin and filter for run metadata.
struct ObservedSource {
  std::vector<double> values;
  std::string description;
};

/// `blocks` independent blocks from `spec`; block i is drawn from stream (seed, i).
struct SyntheticSource {
  DistributionSpec spec;
  std::uint64_t seed = 0;
  std::size_t blocks = 0;
};

using SeriesSource = std::variant<ObservedSource, SyntheticSource>;

namespace detail {

/// 64-bit FNV-1a.
class Fnv1a {
 public:
  void update(const void* data, std::size_t size) noexcept {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ull;
    }
  }
  void update(std::string_view s) noexcept { update(s.data(), s.size()); }
  std::uint64_t value() const noexcept { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

}  // namespace detail

inline std::string describe(const SeriesSource& source) {
  if (const auto* obs = std::get_if<ObservedSource>(&source)) return obs->description;
  const auto& syn = std::get<SyntheticSource>(source);
  return "synthetic:" + to_string(syn.spec) + ";seed=" + std::to_string(syn.seed) +
         ";blocks=" + std::to_string(syn.blocks);
}

/// Checksum of the source configuration (and, for observed data, every retained value).
inline std::uint64_t source_digest(const SeriesSource& source, std::size_t n) {
  detail::Fnv1a h;
  h.update(describe(source));
  h.update(";n=" + std::to_string(n));
  if (const auto* obs = std::get_if<ObservedSource>(&source)) {
    h.update(obs->values.data(), obs->values.size() * sizeof(double));
  }
  return h.value();
}

inline std::size_t block_count(const SeriesSource& source, std::size_t n) {
  if (const auto* obs = std::get_if<ObservedSource>(&source)) return obs->values.size() / n;
  return std::get<SyntheticSource>(source).blocks;
}

//------------------------------------------------------------------------------
// Block statistics
//------------------------------------------------------------------------------

struct BlockStatsRow {
  std::uint64_t block_index = 0;
  MomentSummary summary;
};

/// Non-degenerate block summaries in block order, plus the accounting needed to audit them.
struct BlockStatsTable {
  std::size_t n = 0;
  std::vector<BlockStatsRow> rows;
  std::size_t degenerate_count = 0;
  std::size_t retained_values = 0;   // values the partition saw
  std::size_t discarded_values = 0;  // trailing remainder
  std::string source;
  std::uint64_t source_digest = 0;
};

/// Throws std::logic_error when a summary breaks the K*R identity or the Pearson bound.
inline void verify_summary_invariants(const MomentSummary& s) {
  if (s.degenerate) return;
  const double lhs = s.kurtosis * s.ratio;
  const double rhs = power_law_rhs(s.n, s.skewness);
  if (std::abs(lhs - rhs) > 1e-9 * std::max(std::abs(lhs), std::abs(rhs)) + 1e-300) {
    throw std::logic_error("K*R identity violated");
  }
  if (s.kurtosis < 1.0 + s.skewness * s.skewness - 1e-9 * s.kurtosis) {
    throw std::logic_error("Pearson bound violated");
  }
}

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/// Runs body(worker, begin, end) over `count` items split into contiguous, in-order chunks.
template <class Body>
void parallel_chunks(std::size_t count, unsigned threads, Body body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    body(0u, std::size_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = count * w / threads;
    const std::size_t end = count * (w + 1) / threads;
    pool.emplace_back([&, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/**
 * Parallel fold over the block summaries of `source`.
 *
 * Blocks are split into one contiguous index range per worker. Each worker folds
 * its range in block order into a private copy of `init` via
 * `fold(acc, block_index, summary)`; the partial results are then combined in
 * worker order with `merge(into, from)`. Degenerate summaries are passed to `fold`
 * too (check `summary.degenerate`). Results are independent of `threads` whenever
 * merge(concat) equals the sequential fold, e.g. min/count or in-order appends.
 *
 * Synthetic blocks are generated on the fly: memory is O(threads * n) plus
 * whatever the accumulators keep.
 */
template <class Acc, class Fold, class Merge>
Acc reduce_blocks(const SeriesSource& source, std::size_t n, unsigned threads, Acc init, Fold fold,
                  Merge merge) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "block size must be >= 2");
  const std::size_t count = block_count(source, n);
  threads = static_cast<unsigned>(
      std::min<std::size_t>(detail::resolve_threads(threads), std::max<std::size_t>(count, 1)));
  std::vector<Acc> partial(threads, init);

  if (const auto* obs = std::get_if<ObservedSource>(&source)) {
    if (obs->values.size() < n) throw Error(ErrorKind::insufficient_data, "series shorter than one block");
    const std::span<const double> all(obs->values);
    detail::parallel_chunks(count, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) fold(partial[w], i, summarize(all.subspan(i * n, n)));
    });
  } else {
    const auto& syn = std::get<SyntheticSource>(source);
    const Sampler sampler(syn.spec);
    detail::parallel_chunks(count, threads, [&](unsigned w, std::size_t begin, std::size_t end) {
      std::vector<double> buffer(n);
      for (std::size_t i = begin; i < end; ++i) {
        sampler.fill(buffer, {syn.seed, i});
        fold(partial[w], i, summarize(buffer));
      }
    });
  }

  Acc out = std::move(partial.front());
  for (std::size_t w = 1; w < partial.size(); ++w) merge(out, std::move(partial[w]));
  return out;
}

/**
 * One summary per non-degenerate block, ordered by block index.
 *
 * Every row is checked against the K*R identity and the Pearson bound in debug
 * builds; release builds check every hundredth block.
 */
inline BlockStatsTable map_moments(const SeriesSource& source, std::size_t n, unsigned threads = 0) {
  struct Acc {
    std::vector<BlockStatsRow> rows;
    std::size_t degenerate = 0;
  };
  Acc acc = reduce_blocks(
      source, n, threads, Acc{},
      [](Acc& a, std::size_t index, const MomentSummary& s) {
        if (s.degenerate) {
          ++a.degenerate;
          return;
        }
#ifdef NDEBUG
        if (index % 100 == 0) verify_summary_invariants(s);
#else
        verify_summary_invariants(s);
#endif
        a.rows.push_back({index, s});
      },
      [](Acc& into, Acc&& from) {
        into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
        into.degenerate += from.degenerate;
      });

  BlockStatsTable table;
  table.n = n;
  table.rows = std::move(acc.rows);
  table.degenerate_count = acc.degenerate;
  table.source = describe(source);
  table.source_digest = source_digest(source, n);
  if (const auto* obs = std::get_if<ObservedSource>(&source)) {
    table.retained_values = obs->values.size();
    table.discarded_values = obs->values.size() % n;
  } else {
    table.retained_values = std::get<SyntheticSource>(source).blocks * n;
  }
  return table;
}

}  // namespace skewkurt
