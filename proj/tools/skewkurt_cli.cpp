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

// skewkurt command-line driver: synthetic generation, block statistics, bounds,
// emergence detection, envelopes, box counting and the reproduction recipes.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "skewkurt/skewkurt.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace skewkurt;

namespace {

constexpr double kReferenceScale = 1e8;
const std::vector<std::size_t> kTable2Sizes{4, 100, 1000};

// exit codes: one per error category
constexpr int kExitUsage = 2;
int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return 3;
    case ErrorKind::invalid_input: return 4;
    case ErrorKind::io: return 5;
    case ErrorKind::insufficient_data: return 6;
    case ErrorKind::out_of_domain: return 7;
  }
  return 1;
}

struct Globals {
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string out_dir = ".";
  double scale = 1e6;
  std::string command_line;
};

std::size_t blocks_for(double scale, std::size_t n) {
  if (!(scale >= 1.0)) throw Error(ErrorKind::invalid_argument, "--scale must be >= 1");
  return static_cast<std::size_t>(scale / static_cast<double>(n));
}

/// Per-experiment seed: the master seed mixed with the distribution and block size.
std::uint64_t derive_seed(std::uint64_t master, const DistributionSpec& spec, std::size_t n) {
  detail::Fnv1a h;
  h.update("seed=" + std::to_string(master) + ";" + to_string(spec) + ";n=" + std::to_string(n));
  return h.value();
}

std::string file_digest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
  detail::Fnv1a h;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) h.update(buf, static_cast<std::size_t>(in.gcount()));
  return hex_digest(h.value());
}

json run_metadata(const Globals& g, std::string_view command) {
  return {{"version", std::string(kVersion)}, {"command", command},  {"command_line", g.command_line},
          {"seed", g.seed},                   {"threads", g.threads}, {"scale", g.scale}};
}

fs::path out_path(const Globals& g, const std::string& explicit_path, const std::string& fallback) {
  if (!explicit_path.empty()) return explicit_path;
  return fs::path(g.out_dir) / fallback;
}

void write_table(const fs::path& csv, const BlockStatsTable& table, json meta) {
  write_stats_csv(csv, table);
  meta["table"] = table_metadata(table);
  write_json(csv.string() + ".json", meta);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  return out;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<double> parse_q_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double q = 0.0;
    if (!detail::try_parse_real(detail::trim(item), q)) {
      throw Error(ErrorKind::invalid_argument, "bad q level '" + item + "'");
    }
    grid.push_back(q);
  }
  return grid;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  double a = 0, b = 0;
  if (colon == std::string::npos || !detail::try_parse_real(text.substr(0, colon), a) ||
      !detail::try_parse_real(text.substr(colon + 1), b) || a < 1 || b < a) {
    throw Error(ErrorKind::invalid_argument, "fit range must look like j1:j2");
  }
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

// ---------------------------------------------------------------- detection helpers

struct DetectOptions {
  std::string q_grid;
  double epsilon = 0.05;
  double p_star = 0.9;
  double q_max = 0.999;

  DetectorConfig config() const {
    DetectorConfig cfg;
    if (!q_grid.empty()) cfg.q_grid = parse_q_grid(q_grid);
    cfg.epsilon = epsilon;
    cfg.p_star = p_star;
    cfg.q_max_for_emergence = q_max;
    cfg.validate();
    return cfg;
  }
};

void add_detect_options(CLI::App* cmd, DetectOptions& o) {
  cmd->add_option("--q-grid", o.q_grid, "Comma-separated quantile levels");
  cmd->add_option("--epsilon", o.epsilon, "Half-width of the R window around 1")->capture_default_str();
  cmd->add_option("--p-star", o.p_star, "p(q) threshold for emergence")->capture_default_str();
  cmd->add_option("--q-max", o.q_max, "Highest q at which emergence may be declared")->capture_default_str();
}

void print_report(std::ostream& os, const EmergenceReport& rep) {
  os << "  q         s_q            tail_rows  p(q)\n";
  for (const auto& l : rep.levels) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-9s %-14.6g %-10zu %s\n", detail::format_number(l.q).c_str(), l.s_q,
                  l.tail_rows, l.usable ? fixed(l.p, 4).c_str() : "skipped (< 10 tail rows)");
    os << buf;
  }
  os << "  emerged: " << (rep.emerged ? "Y" : "N");
  if (rep.witness_q) os << " (p >= " << rep.config.p_star << " first at q = " << *rep.witness_q << ")";
  os << '\n';
}

/// ECDF curves of R, unconditioned and per usable level, plus their mass in [1-eps, 1+eps].
json emit_ecdfs(const BlockStatsTable& table, const EmergenceReport& rep, const fs::path& dir) {
  json masses = json::object();
  auto write_curve = [&](const EcdfCurve& c, const std::string& name) {
    auto out = open_out(dir / name);
    out << "r,cum_frac\n";
    for (std::size_t i = 0; i < c.count; ++i) out << format_g17(c.support[i]) << ',' << format_g17(c.fractions[i]) << '\n';
    masses[c.label] = c.mass_in(1.0 - rep.config.epsilon, 1.0 + rep.config.epsilon);
  };
  write_curve(conditional_ecdf(table, std::nullopt), "ecdf_all.csv");
  for (const auto& l : rep.levels) {
    if (l.usable) write_curve(conditional_ecdf(table, l.q), "ecdf_q" + detail::format_number(l.q) + ".csv");
  }
  return masses;
}

// ---------------------------------------------------------------- subcommands

struct SynthOptions {
  std::string dist;
  std::string params;
  std::size_t n = 0;
  std::size_t blocks = 0;
  std::string out;
};

int run_synth(const Globals& g, const SynthOptions& o) {
  const DistributionSpec spec = parse_distribution(o.dist, o.params);
  if (o.n < 1) throw Error(ErrorKind::invalid_argument, "--n must be >= 1");
  const std::size_t blocks = o.blocks ? o.blocks : blocks_for(g.scale, o.n);
  const fs::path path = out_path(g, o.out, "synth.csv");
  const Sampler sampler(spec);
  auto out = open_out(path);
  std::vector<double> buf(o.n);
  for (std::size_t i = 0; i < blocks; ++i) {
    sampler.fill(buf, {g.seed, i});
    out << "# block " << i << '\n';
    for (double v : buf) out << format_g17(v) << '\n';
  }
  out.close();
  json meta = run_metadata(g, "synth");
  meta["distribution"] = to_string(spec);
  meta["n"] = o.n;
  meta["blocks"] = blocks;
  write_json(path.string() + ".json", meta);
  std::cout << "wrote " << blocks << " blocks of " << o.n << " draws from " << to_string(spec) << " to " << path.string()
            << '\n';
  return 0;
}

struct AnalyzeOptions {
  std::string input;
  std::string dist;
  std::string params;
  std::size_t n = 0;
  std::size_t blocks = 0;
  std::string filter = "none";
  std::string column;
  std::string delimiter = ",";
  double missing = -9999.0;
  std::size_t skip = 0;
  std::string out;
};

IngestOptions ingest_options(const AnalyzeOptions& o) {
  IngestOptions io;
  io.column = o.column;
  if (o.delimiter == "whitespace" || o.delimiter == "space" || o.delimiter == " ") {
    io.delimiter = ' ';
  } else if (o.delimiter == "tab" || o.delimiter == "\\t") {
    io.delimiter = '\t';
  } else if (o.delimiter.size() == 1) {
    io.delimiter = o.delimiter[0];
  } else {
    throw Error(ErrorKind::invalid_argument, "bad delimiter '" + o.delimiter + "'");
  }
  io.missing_sentinel = o.missing;
  io.skip_lines = o.skip;
  io.filter = SeriesFilter::parse(o.filter);
  return io;
}

int run_analyze(const Globals& g, const AnalyzeOptions& o) {
  if (o.input.empty() == o.dist.empty()) {
    throw Error(ErrorKind::invalid_argument, "give exactly one of --input or --dist");
  }
  json meta = run_metadata(g, "analyze");
  SeriesSource source;
  if (!o.input.empty()) {
    const IngestOptions io = ingest_options(o);
    IngestResult r = ingest_series(fs::path(o.input), io);
    meta["input"] = {{"path", o.input}, {"digest", file_digest(o.input)}};
    meta["ingest"] = {{"total_read", r.total_read},
                      {"missing_dropped", r.missing_dropped},
                      {"filtered_dropped", r.filtered_dropped},
                      {"filter", io.filter.describe()}};
    source = ObservedSource{std::move(r.values), fs::path(o.input).filename().string() + ";filter=" + io.filter.describe()};
  } else {
    const DistributionSpec spec = parse_distribution(o.dist, o.params);
    source = SyntheticSource{spec, g.seed, o.blocks ? o.blocks : blocks_for(g.scale, o.n)};
  }
  const BlockStatsTable table = map_moments(source, o.n, g.threads);
  const fs::path path = out_path(g, o.out, "stats.csv");
  write_table(path, table, meta);
  std::cout << "blocks: " << table.rows.size() + table.degenerate_count << " (" << table.degenerate_count
            << " degenerate, " << table.discarded_values << " trailing values dropped)\n"
            << "wrote " << path.string() << '\n';
  return 0;
}

int run_bounds(std::size_t n, std::optional<double> s) {
  const BoundSet b = bound_set(n);
  std::vector<std::pair<std::string, std::string>> kv{
      {"n", std::to_string(n)},
      {"skew_abs_max_loose", fixed(b.skew_abs_max_loose)},
      {"skew_abs_max", fixed(b.skew_abs_max)},
      {"kurt_max_loose", fixed(b.kurt_max_loose)},
      {"kurt_max_dalen", fixed(b.kurt_max_dalen)},
  };
  if (s) {
    kv.emplace_back("s", fixed(*s));
    kv.emplace_back("pearson_lower", fixed(BoundSet::pearson_lower(*s)));
    kv.emplace_back("sharma_upper", n >= 3 ? fixed(b.sharma_upper(*s)) : "");
    std::string env;
    if (n >= kEnvelopeMinN && n <= kEnvelopeMaxN && std::abs(*s) <= b.skew_abs_max) env = fixed(table1_lower(n, *s));
    kv.emplace_back("envelope_lower", env);
  }
  std::size_t width = 0;
  for (const auto& [k, v] : kv) width = std::max(width, k.size());
  for (const auto& [k, v] : kv) {
    std::cout << k << std::string(width - k.size(), ' ') << " = " << (v.empty() ? "n/a" : v) << '\n';
  }
  std::cout << '\n';
  for (std::size_t i = 0; i < kv.size(); ++i) std::cout << (i ? "," : "") << kv[i].first;
  std::cout << '\n';
  for (std::size_t i = 0; i < kv.size(); ++i) std::cout << (i ? "," : "") << kv[i].second;
  std::cout << '\n';
  return 0;
}

struct DetectCmd {
  std::string stats;
  DetectOptions detect;
  std::string emit_ecdf;
  std::string out;
};

int run_detect(const Globals& g, const DetectCmd& o) {
  const BlockStatsTable table = read_stats_csv(fs::path(o.stats));
  const EmergenceReport rep = emergence(table, o.detect.config());
  std::cout << "detection on " << table.rows.size() << " rows (n = " << table.n << ")\n";
  print_report(std::cout, rep);
  json doc = run_metadata(g, "detect");
  doc["input"] = {{"path", o.stats}, {"digest", file_digest(o.stats)}};
  doc["report"] = to_json(rep);
  if (!o.emit_ecdf.empty()) doc["window_mass"] = emit_ecdfs(table, rep, o.emit_ecdf);
  write_json(out_path(g, o.out, "detect.json"), doc);
  return 0;
}

struct CellResult {
  std::string verdict;  // "Y", "N" or "-"
  json doc;
};

CellResult table2_cell(const Globals& g, const DistributionSpec& spec, std::size_t n, const DetectorConfig& cfg,
                       const fs::path& dir) {
  const std::size_t blocks = blocks_for(g.scale, n);
  const std::uint64_t seed = derive_seed(g.seed, spec, n);
  const std::string stem = std::string(family_name(spec)) + "_n" + std::to_string(n);
  CellResult cell;
  cell.doc = {{"distribution", to_string(spec)}, {"n", n}, {"blocks", blocks}, {"seed", seed}};
  if (blocks == 0) {
    cell.verdict = "-";
    cell.doc["error"] = "scale smaller than one block";
    return cell;
  }
  const BlockStatsTable table = map_moments(SyntheticSource{spec, seed, blocks}, n, g.threads);
  json meta = run_metadata(g, "table2");
  write_table(dir / "stats" / (stem + ".csv"), table, meta);
  cell.doc["rows"] = table.rows.size();
  cell.doc["degenerate"] = table.degenerate_count;
  try {
    const EmergenceReport rep = emergence(table, cfg);
    cell.verdict = rep.emerged ? "Y" : "N";
    cell.doc["report"] = to_json(rep);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::insufficient_data) throw;
    // Enough rows, yet no level has 10 rows strictly above s_q: S is tied at its top
    // values (lattice data at small n). No witness can exist, so the cell is N.
    const double q_min = *std::min_element(cfg.q_grid.begin(), cfg.q_grid.end());
    const bool tied = static_cast<double>(table.rows.size()) >= kMinTailRows / (1.0 - q_min);
    cell.verdict = tied ? "N" : "-";
    cell.doc["error"] = e.what();
    if (tied) cell.doc["note"] = "no grid level has 10 rows with S strictly above s_q (ties at the top of S)";
  }
  cell.doc["emerged"] = cell.verdict;
  return cell;
}

void print_scale(const Globals& g) {
  std::cout << "scale N = " << g.scale << " values per cell (reference: " << kReferenceScale << ")\n";
}

int run_table2(const Globals& g, const DetectOptions& d, const fs::path& dir) {
  const DetectorConfig cfg = d.config();
  print_scale(g);
  json doc = run_metadata(g, "table2");
  doc["reference_scale"] = kReferenceScale;
  doc["cells"] = json::array();
  std::map<std::string, std::vector<std::string>> grid;
  std::vector<std::string> order;
  for (const auto& spec : standard_distributions()) {
    const std::string name(family_name(spec));
    order.push_back(name);
    for (std::size_t n : kTable2Sizes) {
      CellResult cell = table2_cell(g, spec, n, cfg, dir);
      grid[name].push_back(cell.verdict);
      doc["cells"].push_back(std::move(cell.doc));
    }
  }
  auto csv = open_out(dir / "table2.csv");
  csv << "distribution";
  std::cout << '\n' << std::string(14, ' ');
  for (std::size_t n : kTable2Sizes) {
    csv << ",n" << n;
    std::cout << std::left << std::setw(8) << ("n=" + std::to_string(n));
  }
  csv << '\n';
  std::cout << '\n';
  for (const auto& name : order) {
    csv << name;
    std::cout << std::left << std::setw(14) << name;
    for (const auto& v : grid[name]) {
      csv << ',' << v;
      std::cout << std::setw(8) << v;
    }
    csv << '\n';
    std::cout << '\n';
  }
  write_json(dir / "table2.json", doc);
  std::cout << "\nwrote " << (dir / "table2.json").string() << '\n';
  return 0;
}

struct EnvelopeCmd {
  std::string stats;
  double bin_width = 0.01;
  std::string breakpoints;
  std::string out;
};

json fit_to_json(const FittedEnvelope& fit) {
  json segs = json::array();
  for (const auto& s : fit.segments) {
    segs.push_back({{"a", s.parabola.a}, {"b", s.parabola.b}, {"c", s.parabola.c}, {"s_lo", s.parabola.s_lo},
                    {"s_hi", s.parabola.s_hi}, {"rms", s.rms}, {"points", s.points}});
  }
  return {{"n", fit.n}, {"breakpoints", fit.breakpoints}, {"segments", segs}};
}

void print_fit(std::ostream& os, const FittedEnvelope& fit) {
  for (const auto& s : fit.segments) {
    os << "  [" << fixed(s.parabola.s_lo, 4) << ", " << fixed(s.parabola.s_hi, 4) << "]  a = " << fixed(s.parabola.a, 5)
       << "  b = " << fixed(s.parabola.b, 5) << "  c = " << fixed(s.parabola.c, 5) << "  rms = " << fixed(s.rms, 5)
       << "  (" << s.points << " bins)\n";
  }
}

std::optional<FittedEnvelope> fit_by_mode(const EnvelopeEstimate& est, std::string mode) {
  const bool tabulated = est.n >= kEnvelopeMinN && est.n <= kEnvelopeMaxN;
  if (mode.empty()) mode = tabulated ? "table1" : "auto";
  if (mode == "none") return std::nullopt;
  if (mode == "auto") return fit_envelope_auto(est);
  if (mode == "table1") {
    if (!tabulated) throw Error(ErrorKind::out_of_domain, "no empirical envelope for n = " + std::to_string(est.n));
    return fit_envelope(est, table1_breakpoints(est.n));
  }
  throw Error(ErrorKind::invalid_argument, "--breakpoints must be table1, auto or none");
}

void write_envelope_csv(const fs::path& path, const EnvelopeEstimate& est) {
  auto out = open_out(path);
  out << "s_center,k_min,count,k_table1,k_pearson\n";
  const bool tabulated = est.n >= kEnvelopeMinN && est.n <= kEnvelopeMaxN;
  const double smax = bound_set(est.n).skew_abs_max;
  for (const auto& b : est.bins) {
    out << format_g17(b.s_center) << ',' << format_g17(b.k_min) << ',' << b.count << ',';
    if (tabulated && std::abs(b.s_center) <= smax) out << format_g17(table1_lower(est.n, b.s_center));
    out << ',' << format_g17(BoundSet::pearson_lower(b.s_center)) << '\n';
  }
}

int run_envelope(const Globals& g, const EnvelopeCmd& o) {
  const BlockStatsTable table = read_stats_csv(fs::path(o.stats));
  const EnvelopeEstimate est = lower_envelope(table, o.bin_width);
  const auto fit = fit_by_mode(est, o.breakpoints);
  const fs::path path = out_path(g, o.out, "envelope.csv");
  write_envelope_csv(path, est);
  json meta = run_metadata(g, "envelope");
  meta["input"] = {{"path", o.stats}, {"digest", file_digest(o.stats)}};
  meta["bin_width"] = o.bin_width;
  meta["bins"] = est.bins.size();
  meta["pearson_gap"] = pearson_gap(est);
  std::cout << "n = " << est.n << ", " << est.total_rows << " rows in " << est.bins.size() << " bins\n"
            << "max gap to Pearson line: " << fixed(pearson_gap(est), 5) << '\n';
  if (fit) {
    std::cout << "fitted lower envelope (left side):\n";
    print_fit(std::cout, *fit);
    meta["fit"] = fit_to_json(*fit);
  }
  write_json(path.string() + ".json", meta);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

struct BoxdimCmd {
  std::string stats;
  std::size_t levels = 12;
  std::string fit_range;
  std::string out;
};

std::vector<Point2D> shape_points(const BlockStatsTable& table) {
  std::vector<Point2D> pts;
  pts.reserve(table.rows.size());
  for (const auto& r : table.rows) pts.push_back({r.summary.skewness, r.summary.kurtosis});
  return pts;
}

json box_dimension(const std::vector<Point2D>& pts, std::size_t levels, const std::string& range,
                   const fs::path& csv) {
  const BoxCountResult r = box_count(pts, levels);
  const DimensionFit fit = range.empty() ? dimension_fit(r) : dimension_fit(r, parse_range(range));
  auto out = open_out(csv);
  out << "level,epsilon,count\n";
  for (std::size_t j = 0; j < r.counts.size(); ++j) {
    out << j + 1 << ',' << format_g17(r.scales[j]) << ',' << r.counts[j] << '\n';
  }
  std::cout << "D = " << fixed(fit.dimension, 4) << ", R2 = " << fixed(fit.r_squared, 5) << " (levels "
            << fit.first_level << ".." << fit.last_level << ", " << r.distinct_points << " distinct points)\n";
  return {{"dimension", fit.dimension},         {"r_squared", fit.r_squared},
          {"first_level", fit.first_level},     {"last_level", fit.last_level},
          {"distinct_points", r.distinct_points}, {"levels", levels}};
}

int run_boxdim(const Globals& g, const BoxdimCmd& o) {
  const BlockStatsTable table = read_stats_csv(fs::path(o.stats));
  const fs::path path = out_path(g, o.out, "boxdim.csv");
  json meta = run_metadata(g, "boxdim");
  meta["input"] = {{"path", o.stats}, {"digest", file_digest(o.stats)}};
  meta["fit"] = box_dimension(shape_points(table), o.levels, o.fit_range, path);
  write_json(path.string() + ".json", meta);
  return 0;
}

// ---------------------------------------------------------------- reproduction recipes

/// Lower envelope from an even mix of Gaussian and Poisson(20) blocks, `blocks` in total.
EnvelopeEstimate mixed_envelope(const Globals& g, std::size_t n, std::size_t blocks, double bin_width) {
  EnvelopeAccumulator acc(n, bin_width);
  for (const DistributionSpec& spec : {DistributionSpec{Gaussian{}}, DistributionSpec{Poisson{}}}) {
    accumulate(acc, SyntheticSource{spec, derive_seed(g.seed, spec, n), blocks / 2}, n, g.threads);
  }
  return acc.finish();
}

int repro_table1(const Globals& g, const fs::path& dir) {
  print_scale(g);
  json doc = run_metadata(g, "repro table1");
  doc["reference_scale"] = kReferenceScale;
  for (std::size_t n = kEnvelopeMinN; n <= kEnvelopeMaxN; ++n) {
    const std::size_t blocks = blocks_for(g.scale, n);
    const EnvelopeEstimate est = mixed_envelope(g, n, blocks, 0.01);
    write_envelope_csv(dir / ("table1_envelope_n" + std::to_string(n) + ".csv"), est);
    std::cout << "n = " << n << " (" << blocks << " blocks, Gaussian + Poisson)\n";
    const LowerEnvelopeSpec printed = table1_envelope(n);
    json cell = {{"blocks", blocks}, {"bins", est.bins.size()}};
    try {
      const FittedEnvelope fit = fit_envelope(est, table1_breakpoints(n));
      print_fit(std::cout, fit);
      cell["fit"] = fit_to_json(fit);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::insufficient_data) throw;
      std::cout << "  fit skipped: " << e.what() << '\n';
      cell["error"] = e.what();
    }
    std::cout << "  tabulated:\n";
    for (const auto& s : printed.segments) {
      std::cout << "  [" << fixed(s.s_lo, 4) << ", " << fixed(s.s_hi, 4) << "]  a = " << fixed(s.a, 5)
                << "  b = " << fixed(s.b, 5) << "  c = " << fixed(s.c, 5) << '\n';
    }
    doc["n" + std::to_string(n)] = cell;
  }
  write_json(dir / "table1.json", doc);
  return 0;
}

int repro_fig2(const Globals& g, const fs::path& dir) {
  print_scale(g);
  auto out = open_out(dir / "fig2_curves.csv");
  out << "n,s,k_table1,k_pearson,k_sharma_upper\n";
  for (std::size_t n = kEnvelopeMinN; n <= kEnvelopeMaxN; ++n) {
    const BoundSet b = bound_set(n);
    const auto steps = static_cast<long>(std::floor(b.skew_abs_max / 0.005));
    for (long i = -steps; i <= steps; ++i) {
      const double s = 0.005 * static_cast<double>(i);
      out << n << ',' << format_g17(s) << ',' << format_g17(table1_lower(n, s)) << ','
          << format_g17(BoundSet::pearson_lower(s)) << ',' << format_g17(b.sharma_upper(s)) << '\n';
    }
    const EnvelopeEstimate est = mixed_envelope(g, n, blocks_for(g.scale, n), 0.01);
    write_envelope_csv(dir / ("fig2_envelope_n" + std::to_string(n) + ".csv"), est);
    std::cout << "n = " << n << ": " << est.total_rows << " blocks, " << est.bins.size() << " bins\n";
  }
  json doc = run_metadata(g, "repro fig2");
  doc["reference_scale"] = kReferenceScale;
  write_json(dir / "fig2.json", doc);
  return 0;
}

int repro_fig3(const Globals& g, const fs::path& dir, std::size_t levels, const std::string& range) {
  print_scale(g);
  constexpr std::size_t n = 4;
  const DistributionSpec spec = Poisson{};
  const std::size_t blocks = blocks_for(g.scale, n);
  const SyntheticSource source{spec, derive_seed(g.seed, spec, n), blocks};

  // distinct (S, K) pairs with multiplicities; the lattice is small compared with the block count
  struct PointKey {
    std::size_t operator()(const std::pair<double, double>& p) const noexcept {
      return std::hash<double>{}(p.first) * 31 + std::hash<double>{}(p.second);
    }
  };
  using Counts = std::unordered_map<std::pair<double, double>, std::size_t, PointKey>;
  struct Acc {
    Counts counts;
    std::size_t degenerate = 0;
  };
  const Acc acc = reduce_blocks(
      source, n, g.threads, Acc{},
      [](Acc& a, std::size_t, const MomentSummary& s) {
        if (s.degenerate) {
          ++a.degenerate;
        } else {
          ++a.counts[{s.skewness, s.kurtosis}];
        }
      },
      [](Acc& into, const Acc& from) {
        for (const auto& [k, c] : from.counts) into.counts[k] += c;
        into.degenerate += from.degenerate;
      });
  std::vector<std::pair<std::pair<double, double>, std::size_t>> pts(acc.counts.begin(), acc.counts.end());
  std::sort(pts.begin(), pts.end());
  auto out = open_out(dir / "fig3_points.csv");
  out << "S,K,count\n";
  std::vector<Point2D> cloud;
  cloud.reserve(pts.size());
  for (const auto& [p, c] : pts) {
    out << format_g17(p.first) << ',' << format_g17(p.second) << ',' << c << '\n';
    cloud.push_back({p.first, p.second});
  }
  out.close();
  std::cout << blocks << " blocks of Poisson(20), n = 4: " << pts.size() << " distinct (S, K) points, "
            << acc.degenerate << " degenerate\n";
  json doc = run_metadata(g, "repro fig3");
  doc["reference_scale"] = kReferenceScale;
  doc["blocks"] = blocks;
  doc["degenerate"] = acc.degenerate;
  doc["distinct_points"] = pts.size();
  doc["boxdim"] = box_dimension(cloud, levels, range, dir / "fig3_boxdim.csv");
  write_json(dir / "fig3.json", doc);
  return 0;
}

int repro_fig4(const Globals& g, const fs::path& dir, char panel, const DetectOptions& d) {
  static const std::map<char, std::pair<DistributionSpec, std::size_t>> panels{
      {'a', {Gaussian{}, 100}}, {'b', {Exponential{}, 1000}}, {'c', {Lognormal{}, 100}}, {'d', {Pareto{}, 1000}}};
  const auto& [spec, n] = panels.at(panel);
  print_scale(g);
  const std::size_t blocks = blocks_for(g.scale, n);
  const std::string name = std::string("fig4") + panel;
  const BlockStatsTable table = map_moments(SyntheticSource{spec, derive_seed(g.seed, spec, n), blocks}, n, g.threads);
  json meta = run_metadata(g, "repro " + name);
  write_table(dir / (name + "_stats.csv"), table, meta);
  const EmergenceReport rep = emergence(table, d.config());
  std::cout << to_string(spec) << ", n = " << n << ", " << table.rows.size() << " blocks\n";
  print_report(std::cout, rep);
  json doc = meta;
  doc["reference_scale"] = kReferenceScale;
  doc["distribution"] = to_string(spec);
  doc["n"] = n;
  doc["report"] = to_json(rep);
  doc["window_mass"] = emit_ecdfs(table, rep, dir / name);
  write_json(dir / (name + ".json"), doc);
  return 0;
}

int repro_fig1f(const Globals& g, const fs::path& dir, const AnalyzeOptions& base) {
  if (base.input.empty()) throw Error(ErrorKind::invalid_argument, "fig1f needs --input <daily precipitation file>");
  AnalyzeOptions o = base;
  if (o.filter == "none") o.filter = "positive";
  const IngestOptions io = ingest_options(o);
  IngestResult r = ingest_series(fs::path(o.input), io);
  const std::size_t n = o.n ? o.n : 50;
  const std::size_t retained = r.values.size();
  const BlockStatsTable table =
      map_moments(ObservedSource{std::move(r.values), fs::path(o.input).filename().string() + ";filter=" + io.filter.describe()},
                  n, g.threads);
  json meta = run_metadata(g, "repro fig1f");
  meta["input"] = {{"path", o.input}, {"digest", file_digest(o.input)}};
  meta["ingest"] = {{"total_read", r.total_read}, {"missing_dropped", r.missing_dropped},
                    {"filtered_dropped", r.filtered_dropped}, {"retained", retained}};
  write_table(dir / "fig1f_stats.csv", table, meta);

  std::size_t in_window = 0, violations = 0;
  auto pts = open_out(dir / "fig1f_points.csv");
  pts << "S,K,R,in_window\n";
  for (const auto& row : table.rows) {
    const auto& s = row.summary;
    const bool hit = s.ratio >= 0.95 && s.ratio <= 1.05;
    in_window += hit;
    violations += !check_summary(s).empty();
    pts << format_g17(s.skewness) << ',' << format_g17(s.kurtosis) << ',' << format_g17(s.ratio) << ',' << hit << '\n';
  }
  const BoundSet b = bound_set(n);
  auto curves = open_out(dir / "fig1f_curves.csv");
  curves << "s,k_pearson,k_sharma_upper,k_power_law\n";
  for (double s = -b.skew_abs_max; s <= b.skew_abs_max + 1e-12; s += b.skew_abs_max / 400) {
    curves << format_g17(s) << ',' << format_g17(BoundSet::pearson_lower(s)) << ',' << format_g17(b.sharma_upper(s))
           << ',' << format_g17(power_law_rhs(n, s)) << '\n';
  }
  std::cout << table.rows.size() << " blocks of n = " << n << " (" << table.degenerate_count << " degenerate); "
            << in_window << " with R in [0.95, 1.05]; " << violations << " bound violations\n";
  meta["blocks_in_window"] = in_window;
  meta["bound_violations"] = violations;
  write_json(dir / "fig1f.json", meta);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewkurt: sample skewness/kurtosis over fixed-size blocks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  for (int i = 0; i < argc; ++i) g.command_line += (i ? " " : "") + std::string(argv[i]);
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for outputs")->capture_default_str();
  app.add_option("--scale", g.scale, "Values per synthetic experiment (reference: 1e8)")->capture_default_str();

  std::function<int()> action;

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Draw synthetic blocks to a CSV file");
  synth_cmd->add_option("--dist", synth.dist, "Distribution name")->required();
  synth_cmd->add_option("--params", synth.params, "Parameters, k=v,...");
  synth_cmd->add_option("--n", synth.n, "Block size")->required();
  synth_cmd->add_option("--blocks", synth.blocks, "Number of blocks (default scale / n)");
  synth_cmd->add_option("--out", synth.out, "Output file (default <out-dir>/synth.csv)");
  synth_cmd->callback([&] { action = [&] { return run_synth(g, synth); }; });

  AnalyzeOptions analyze;
  auto add_ingest = [](CLI::App* cmd, AnalyzeOptions& o) {
    cmd->add_option("--input", o.input, "Series file");
    cmd->add_option("--filter", o.filter, "none | positive | threshold:<t>")->capture_default_str();
    cmd->add_option("--column", o.column, "Column name or 1-based index (default last)");
    cmd->add_option("--delimiter", o.delimiter, "Field delimiter (',', 'tab', 'whitespace')")->capture_default_str();
    cmd->add_option("--missing", o.missing, "Missing-value sentinel")->capture_default_str();
    cmd->add_option("--skip", o.skip, "Lines to skip before parsing");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "Block statistics of a series or a synthetic source");
  add_ingest(analyze_cmd, analyze);
  analyze_cmd->add_option("--dist", analyze.dist, "Synthetic distribution name");
  analyze_cmd->add_option("--params", analyze.params, "Distribution parameters, k=v,...");
  analyze_cmd->add_option("--n", analyze.n, "Block size")->required();
  analyze_cmd->add_option("--blocks", analyze.blocks, "Synthetic blocks (default scale / n)");
  analyze_cmd->add_option("--out", analyze.out, "Stats CSV (default <out-dir>/stats.csv)");
  analyze_cmd->callback([&] { action = [&] { return run_analyze(g, analyze); }; });

  std::size_t bounds_n = 0;
  std::optional<double> bounds_s;
  auto* bounds_cmd = app.add_subcommand("bounds", "Moment bounds for block size n");
  bounds_cmd->add_option("--n", bounds_n, "Block size")->required();
  bounds_cmd->add_option("--s", bounds_s, "Skewness at which to evaluate S-dependent bounds");
  bounds_cmd->callback([&] { action = [&] { return run_bounds(bounds_n, bounds_s); }; });

  DetectCmd detect;
  auto* detect_cmd = app.add_subcommand("detect", "Emergence of the 4/3 power law in a stats table");
  detect_cmd->add_option("--stats", detect.stats, "Stats CSV")->required();
  add_detect_options(detect_cmd, detect.detect);
  detect_cmd->add_option("--emit-ecdf", detect.emit_ecdf, "Directory for per-level ECDF CSVs");
  detect_cmd->add_option("--out", detect.out, "Report JSON (default <out-dir>/detect.json)");
  detect_cmd->callback([&] { action = [&] { return run_detect(g, detect); }; });

  DetectOptions table2;
  auto* table2_cmd = app.add_subcommand("table2", "Emergence matrix: 10 distributions x n in {4, 100, 1000}");
  add_detect_options(table2_cmd, table2);
  table2_cmd->callback([&] { action = [&] { return run_table2(g, table2, g.out_dir); }; });

  EnvelopeCmd envelope;
  auto* envelope_cmd = app.add_subcommand("envelope", "Empirical lower kurtosis envelope");
  envelope_cmd->add_option("--stats", envelope.stats, "Stats CSV")->required();
  envelope_cmd->add_option("--bin-width", envelope.bin_width, "Skewness bin width")->capture_default_str();
  envelope_cmd->add_option("--breakpoints", envelope.breakpoints, "table1 | auto | none");
  envelope_cmd->add_option("--out", envelope.out, "Envelope CSV (default <out-dir>/envelope.csv)");
  envelope_cmd->callback([&] { action = [&] { return run_envelope(g, envelope); }; });

  BoxdimCmd boxdim;
  auto* boxdim_cmd = app.add_subcommand("boxdim", "Box-counting dimension of the (S, K) points");
  boxdim_cmd->add_option("--stats", boxdim.stats, "Stats CSV")->required();
  boxdim_cmd->add_option("--levels", boxdim.levels, "Dyadic levels")->capture_default_str();
  boxdim_cmd->add_option("--fit-range", boxdim.fit_range, "Levels j1:j2 used in the fit");
  boxdim_cmd->add_option("--out", boxdim.out, "Counts CSV (default <out-dir>/boxdim.csv)");
  boxdim_cmd->callback([&] { action = [&] { return run_boxdim(g, boxdim); }; });

  auto* repro = app.add_subcommand("repro", "Reproduce a figure or table");
  repro->require_subcommand(1);
  repro->fallthrough();
  DetectOptions repro_detect;
  AnalyzeOptions fig1f;
  std::size_t fig3_levels = 12;
  std::string fig3_range;
  auto recipe = [&](const std::string& name, const std::string& help) {
    auto* cmd = repro->add_subcommand(name, help);
    cmd->fallthrough();
    return cmd;
  };
  auto* fig1f_cmd = recipe("fig1f", "Precipitation blocks, n = 50, with the R window highlighted");
  add_ingest(fig1f_cmd, fig1f);
  fig1f_cmd->add_option("--n", fig1f.n, "Block size (default 50)");
  fig1f_cmd->callback([&] { action = [&] { return repro_fig1f(g, g.out_dir, fig1f); }; });
  recipe("fig2", "Lower envelopes for n = 4..9")->callback([&] { action = [&] { return repro_fig2(g, g.out_dir); }; });
  auto* fig3_cmd = recipe("fig3", "Poisson(20) deltoid at n = 4 and its box-counting dimension");
  fig3_cmd->add_option("--levels", fig3_levels, "Dyadic levels")->capture_default_str();
  fig3_cmd->add_option("--fit-range", fig3_range, "Levels j1:j2 used in the fit");
  fig3_cmd->callback([&] { action = [&] { return repro_fig3(g, g.out_dir, fig3_levels, fig3_range); }; });
  for (char panel : {'a', 'b', 'c', 'd'}) {
    auto* cmd = recipe(std::string("fig4") + panel, "Conditional ECDFs of R");
    add_detect_options(cmd, repro_detect);
    cmd->callback([&, panel] { action = [&, panel] { return repro_fig4(g, g.out_dir, panel, repro_detect); }; });
  }
  recipe("table1", "Fit the n = 4..9 lower envelopes")->callback([&] {
    action = [&] { return repro_table1(g, g.out_dir); };
  });
  auto* table2_recipe = recipe("table2", "Emergence matrix");
  add_detect_options(table2_recipe, repro_detect);
  table2_recipe->callback([&] { action = [&] { return run_table2(g, repro_detect, g.out_dir); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    fs::create_directories(g.out_dir);
    return action();
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 1;
  }
}
