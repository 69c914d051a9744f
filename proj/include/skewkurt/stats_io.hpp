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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "skewkurt/error.hpp"
#include "skewkurt/partition.hpp"

#ifndef SKEWKURT_VERSION_STRING
#define SKEWKURT_VERSION_STRING "0.1.0"
#endif

namespace skewkurt {

inline constexpr std::string_view kVersion = SKEWKURT_VERSION_STRING;
inline constexpr std::string_view kStatsHeader = "block_index,n,mean,m2,S,K,R";

/// 17 significant digits: enough to round-trip any double.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string hex_digest(std::uint64_t digest) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

inline void write_stats_csv(std::ostream& out, const BlockStatsTable& table) {
  out << kStatsHeader << '\n';
  std::string line;
  for (const BlockStatsRow& row : table.rows) {
    const MomentSummary& s = row.summary;
    line.clear();
    line += std::to_string(row.block_index);
    line += ',';
    line += std::to_string(s.n);
    for (double v : {s.mean, s.m2, s.skewness, s.kurtosis, s.ratio}) {
      line += ',';
      line += format_g17(v);
    }
    line += '\n';
    out << line;
  }
}

inline void write_stats_csv(const std::filesystem::path& path, const BlockStatsTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  write_stats_csv(out, table);
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

/// Run metadata stored next to a stats CSV (`<csv>.json`).
inline nlohmann::json table_metadata(const BlockStatsTable& table) {
  return {
      {"version", std::string(kVersion)},
      {"n", table.n},
      {"rows", table.rows.size()},
      {"degenerate_count", table.degenerate_count},
      {"retained_values", table.retained_values},
      {"discarded_values", table.discarded_values},
      {"source", table.source},
      {"source_digest", hex_digest(table.source_digest)},
  };
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

/**
 * Parses a stats CSV written by write_stats_csv. m3 and m4 are rebuilt from S, K
 * and m2. Accounting fields come from the `<csv>.json` sidecar when present.
 */
inline BlockStatsTable read_stats_csv(std::istream& in) {
  BlockStatsTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::invalid_input, "empty stats file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kStatsHeader) {
    throw Error(ErrorKind::invalid_input, "unexpected stats header '" + line + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line, ',');
    double v[7];
    if (fields.size() != 7) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": expected 7 fields");
    }
    for (int i = 0; i < 7; ++i) {
      if (!detail::try_parse_real(fields[i], v[i])) {
        throw Error(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": bad number");
      }
    }
    BlockStatsRow row;
    row.block_index = static_cast<std::uint64_t>(v[0]);
    MomentSummary& s = row.summary;
    s.n = static_cast<std::size_t>(v[1]);
    s.mean = v[2];
    s.m2 = v[3];
    s.skewness = v[4];
    s.kurtosis = v[5];
    s.ratio = v[6];
    s.m3 = s.skewness * s.m2 * std::sqrt(s.m2);
    s.m4 = s.kurtosis * s.m2 * s.m2;
    if (table.n == 0) table.n = s.n;
    if (s.n != table.n) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": mixed block sizes");
    }
    if (!table.rows.empty() && row.block_index <= table.rows.back().block_index) {
      throw Error(ErrorKind::invalid_input, "line " + std::to_string(line_no) + ": block_index not increasing");
    }
    table.rows.push_back(row);
  }
  return table;
}

inline BlockStatsTable read_stats_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  BlockStatsTable table = read_stats_csv(in);
  const std::filesystem::path sidecar = path.string() + ".json";
  if (std::ifstream meta(sidecar); meta) {
    try {
      const auto doc = nlohmann::json::parse(meta);
      table.degenerate_count = doc.value("degenerate_count", std::size_t{0});
      table.retained_values = doc.value("retained_values", std::size_t{0});
      table.discarded_values = doc.value("discarded_values", std::size_t{0});
      table.source = doc.value("source", std::string{});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::invalid_input, "bad sidecar '" + sidecar.string() + "': " + e.what());
    }
  }
  if (table.source.empty()) table.source = path.filename().string();
  return table;
}

}  // namespace skewkurt
