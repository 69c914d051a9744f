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
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "skewkurt/error.hpp"
#include "skewkurt/philox.hpp"

namespace skewkurt {

/// How a discrete waiting-time variate is counted.
enum class CountConvention {
  failures,  // failures before the r-th success, support {0, 1, ...}
  trials,    // trials up to and including the r-th success, support {r, r+1, ...}
};

struct Gaussian {
  double mean = 0.0;
  double sd = 1.0;
};
struct Exponential {
  double rate = 1.0;
};
struct Lognormal {
  double meanlog = 0.0;
  double sdlog = 1.0;
};
struct Gamma {
  double shape = 2.0;
  double rate = 1.0;
};
struct Pareto {
  double shape = 5.0;
  double scale = 1.0;
};
struct Binomial {
  std::int64_t trials = 20;
  double p = 0.8;
};
struct NegativeBinomial {
  std::int64_t trials = 20;  // required successes
  double p = 0.8;            // success probability
  CountConvention count = CountConvention::failures;
};
struct Poisson {
  double rate = 20.0;
};
struct Geometric {
  double p = 0.8;
  CountConvention count = CountConvention::failures;
};
struct Zipf {
  double shape = 5.0;
  std::int64_t xmin = 1;
};

/// One distribution family together with its parameters.
using DistributionSpec = std::variant<Gaussian, Exponential, Lognormal, Gamma, Pareto, Binomial,
                                      NegativeBinomial, Poisson, Geometric, Zipf>;

/// The ten sources used for the synthetic experiments, with their default parameters.
inline std::array<DistributionSpec, 10> standard_distributions() {
  return {Gaussian{},  Exponential{},      Lognormal{}, Gamma{},     Pareto{},
          Binomial{}, NegativeBinomial{}, Poisson{},   Geometric{}, Zipf{}};
}

inline std::string_view family_name(const DistributionSpec& spec) {
  static constexpr std::array<std::string_view, 10> names = {
      "gaussian", "exponential", "lognormal", "gamma",     "pareto",
      "binomial", "negbinomial", "poisson",   "geometric", "zipf"};
  return names[spec.index()];
}

inline bool is_discrete(const DistributionSpec& spec) { return spec.index() >= 5; }

namespace detail {

/// Shortest text that parses back to exactly `v`.
inline std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string_view to_string(CountConvention c) {
  return c == CountConvention::failures ? "failures" : "trials";
}

[[noreturn]] inline void invalid_parameter(std::string_view what) {
  throw Error(ErrorKind::invalid_argument, "invalid distribution parameter: " + std::string(what));
}

}  // namespace detail

/// Canonical text form, e.g. "pareto(shape=5,scale=1)". Parsed back by parse_distribution.
inline std::string to_string(const DistributionSpec& spec) {
  using detail::format_number;
  std::string args = std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return "mean=" + format_number(d.mean) + ",sd=" + format_number(d.sd);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return "rate=" + format_number(d.rate);
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          return "meanlog=" + format_number(d.meanlog) + ",sdlog=" + format_number(d.sdlog);
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return "shape=" + format_number(d.shape) + ",rate=" + format_number(d.rate);
        } else if constexpr (std::is_same_v<T, Pareto>) {
          return "shape=" + format_number(d.shape) + ",scale=" + format_number(d.scale);
        } else if constexpr (std::is_same_v<T, Binomial>) {
          return "trials=" + std::to_string(d.trials) + ",p=" + format_number(d.p);
        } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
          return "trials=" + std::to_string(d.trials) + ",p=" + format_number(d.p) +
                 ",count=" + std::string(detail::to_string(d.count));
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return "rate=" + format_number(d.rate);
        } else if constexpr (std::is_same_v<T, Geometric>) {
          return "p=" + format_number(d.p) + ",count=" + std::string(detail::to_string(d.count));
        } else {
          return "shape=" + format_number(d.shape) + ",xmin=" + std::to_string(d.xmin);
        }
      },
      spec);
  return std::string(family_name(spec)) + "(" + args + ")";
}

/// Throws ErrorKind::invalid_argument unless every parameter is in its valid range.
inline void validate(const DistributionSpec& spec) {
  auto positive = [](double v, std::string_view name) {
    if (!(std::isfinite(v) && v > 0.0)) detail::invalid_parameter(std::string(name) + " must be > 0");
  };
  auto probability = [](double p) {
    if (!(p > 0.0 && p < 1.0)) detail::invalid_parameter("p must be in (0, 1)");
  };
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          if (!std::isfinite(d.mean)) detail::invalid_parameter("mean must be finite");
          positive(d.sd, "sd");
        } else if constexpr (std::is_same_v<T, Exponential> || std::is_same_v<T, Poisson>) {
          positive(d.rate, "rate");
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          if (!std::isfinite(d.meanlog)) detail::invalid_parameter("meanlog must be finite");
          positive(d.sdlog, "sdlog");
        } else if constexpr (std::is_same_v<T, Gamma>) {
          positive(d.shape, "shape");
          positive(d.rate, "rate");
        } else if constexpr (std::is_same_v<T, Pareto>) {
          positive(d.shape, "shape");
          positive(d.scale, "scale");
        } else if constexpr (std::is_same_v<T, Binomial> || std::is_same_v<T, NegativeBinomial>) {
          if (d.trials < 1) detail::invalid_parameter("trials must be >= 1");
          probability(d.p);
        } else if constexpr (std::is_same_v<T, Geometric>) {
          probability(d.p);
        } else {
          if (!(std::isfinite(d.shape) && d.shape > 1.0)) detail::invalid_parameter("shape must be > 1");
          if (d.xmin < 1) detail::invalid_parameter("xmin must be >= 1");
        }
      },
      spec);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    invalid_parameter(std::string(key) + "=" + std::string(text) + " is not a number");
  }
  return v;
}

inline std::int64_t parse_integer(std::string_view key, std::string_view text) {
  const double v = parse_real(key, text);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    invalid_parameter(std::string(key) + " must be an integer");
  }
  return static_cast<std::int64_t>(v);
}

inline CountConvention parse_convention(std::string_view text) {
  if (text == "failures") return CountConvention::failures;
  if (text == "trials") return CountConvention::trials;
  invalid_parameter("count must be 'failures' or 'trials'");
}

}  // namespace detail

/**
 * Builds a spec from a family name and a "k=v,k=v" parameter list. Unspecified
 * parameters keep their defaults. The whole canonical form produced by to_string
 * ("poisson(rate=20)") is accepted as `name` too.
 */
inline DistributionSpec parse_distribution(std::string_view name, std::string_view params = {}) {
  name = detail::trim(name);
  std::string merged(params);
  if (const auto open = name.find('('); open != std::string_view::npos) {
    if (name.back() != ')') detail::invalid_parameter("unbalanced parentheses");
    std::string_view inner = name.substr(open + 1, name.size() - open - 2);
    if (!merged.empty() && !inner.empty()) merged = std::string(inner) + "," + merged;
    else if (!inner.empty()) merged = std::string(inner);
    name = detail::trim(name.substr(0, open));
  }

  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  DistributionSpec spec;
  if (lowered == "gaussian" || lowered == "normal") spec = Gaussian{};
  else if (lowered == "exponential") spec = Exponential{};
  else if (lowered == "lognormal") spec = Lognormal{};
  else if (lowered == "gamma") spec = Gamma{};
  else if (lowered == "pareto") spec = Pareto{};
  else if (lowered == "binomial") spec = Binomial{};
  else if (lowered == "negbinomial" || lowered == "negativebinomial" || lowered == "nbinom") spec = NegativeBinomial{};
  else if (lowered == "poisson") spec = Poisson{};
  else if (lowered == "geometric") spec = Geometric{};
  else if (lowered == "zipf") spec = Zipf{};
  else throw Error(ErrorKind::invalid_argument, "unknown distribution '" + std::string(name) + "'");

  std::string_view rest = merged;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = detail::trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) detail::invalid_parameter("expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = detail::trim(item.substr(0, eq));
    const std::string_view value = detail::trim(item.substr(eq + 1));

    const bool known = std::visit(
        [&](auto& d) -> bool {
          using T = std::decay_t<decltype(d)>;
          auto real = [&](double& field) { field = detail::parse_real(key, value); return true; };
          auto integer = [&](std::int64_t& field) { field = detail::parse_integer(key, value); return true; };
          if constexpr (std::is_same_v<T, Gaussian>) {
            if (key == "mean") return real(d.mean);
            if (key == "sd") return real(d.sd);
          } else if constexpr (std::is_same_v<T, Exponential> || std::is_same_v<T, Poisson>) {
            if (key == "rate" || key == "lambda") return real(d.rate);
          } else if constexpr (std::is_same_v<T, Lognormal>) {
            if (key == "meanlog") return real(d.meanlog);
            if (key == "sdlog") return real(d.sdlog);
          } else if constexpr (std::is_same_v<T, Gamma>) {
            if (key == "shape") return real(d.shape);
            if (key == "rate") return real(d.rate);
          } else if constexpr (std::is_same_v<T, Pareto>) {
            if (key == "shape") return real(d.shape);
            if (key == "scale") return real(d.scale);
          } else if constexpr (std::is_same_v<T, Binomial>) {
            if (key == "trials") return integer(d.trials);
            if (key == "p") return real(d.p);
          } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
            if (key == "trials") return integer(d.trials);
            if (key == "p") return real(d.p);
            if (key == "count") { d.count = detail::parse_convention(value); return true; }
          } else if constexpr (std::is_same_v<T, Geometric>) {
            if (key == "p") return real(d.p);
            if (key == "count") { d.count = detail::parse_convention(value); return true; }
          } else {
            if (key == "shape") return real(d.shape);
            if (key == "xmin") return integer(d.xmin);
          }
          return false;
        },
        spec);
    if (!known) {
      detail::invalid_parameter("unknown parameter '" + std::string(key) + "' for " +
                                std::string(family_name(spec)));
    }
  }
  validate(spec);
  return spec;
}

/// Population (skewness, kurtosis) in closed form; absent when the fourth moment diverges.
inline std::optional<std::pair<double, double>> theoretical_skew_kurt(const DistributionSpec& spec);

namespace detail {

/// Hurwitz zeta sum_{k >= a} k^-s for s > 1: direct terms plus an Euler-Maclaurin tail.
inline double hurwitz_zeta(double s, double a) {
  constexpr int kDirect = 64;
  double sum = 0.0;
  for (int i = 0; i < kDirect; ++i) sum += std::pow(a + i, -s);
  const double x = a + kDirect;
  // sum_{k >= x} k^-s ~ x^(1-s)/(s-1) + x^-s/2 + s x^(-s-1)/12 - s(s+1)(s+2) x^(-s-3)/720
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s * std::pow(x, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(x, -s - 3.0) / 720.0;
  return sum;
}

/// Inverse-CDF lookup over a finite support {offset, offset+1, ...}; the last bin holds the tail.
class DiscreteTable {
 public:
  DiscreteTable() = default;

  /// `log_pmf(k)` for k = 0, 1, ... relative to `offset`. Stops once the residual mass drops
  /// below `tail_mass` or, past `min_size`, once terms no longer change the sum.
  template <class LogPmf>
  DiscreteTable(std::int64_t offset, LogPmf log_pmf, double tail_mass, std::size_t max_size,
                std::size_t min_size = 1)
      : offset_(offset) {
    double acc = 0.0;
    for (std::size_t k = 0; k < max_size; ++k) {
      const double term = std::exp(log_pmf(static_cast<double>(k)));
      acc += term;
      cdf_.push_back(acc);
      if (k + 1 >= min_size && (1.0 - acc < tail_mass || term < 1e-18 * acc)) break;
    }
    cdf_.back() = 1.0;
  }

  std::int64_t operator()(double u) const noexcept {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = static_cast<std::int64_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
    return offset_ + idx;
  }

  std::span<const double> cdf() const noexcept { return cdf_; }
  std::int64_t offset() const noexcept { return offset_; }

 private:
  std::int64_t offset_ = 0;
  std::vector<double> cdf_;
};

inline constexpr double kTableTailMass = 1e-12;
inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 24;
inline constexpr int kMaxRejections = 1000;

}  // namespace detail

/**
 * Draws i.i.d. variates for one DistributionSpec. Lookup tables for the discrete
 * families are built once at construction; fill() is const and thread-safe.
 */
class Sampler {
 public:
  explicit Sampler(DistributionSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    build_table();
  }

  const DistributionSpec& spec() const noexcept { return spec_; }

  /// Fill `out` from the stream identified by `seed`. Same seed, same values.
  void fill(std::span<double> out, SeedSpec seed) const {
    PhiloxStream rng(seed);
    std::visit([&](const auto& d) { fill_impl(d, out, rng); }, spec_);
  }

  std::vector<double> draw(std::size_t n, SeedSpec seed) const {
    std::vector<double> out(n);
    fill(out, seed);
    return out;
  }

 private:
  static double normal_pair(PhiloxStream& rng, double& spare, bool& has_spare) {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double radius = std::sqrt(-2.0 * std::log(rng.uniform()));
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    spare = radius * std::sin(angle);
    has_spare = true;
    return radius * std::cos(angle);
  }

  // Marsaglia-Tsang for shape >= 1; shape < 1 boosted via U^(1/shape).
  static double standard_gamma(double shape, PhiloxStream& rng, double& spare, bool& has_spare) {
    const double boost_shape = shape < 1.0 ? shape + 1.0 : shape;
    const double d = boost_shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (int attempt = 0; attempt < detail::kMaxRejections; ++attempt) {
      double x, v;
      do {
        x = normal_pair(rng, spare, has_spare);
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = rng.uniform();
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
        const double g = d * v;
        return shape < 1.0 ? g * std::pow(rng.uniform(), 1.0 / shape) : g;
      }
    }
    throw Error(ErrorKind::invalid_argument, "gamma sampler exceeded its rejection budget");
  }

  template <class D>
  void fill_impl(const D& d, std::span<double> out, PhiloxStream& rng) const {
    double spare = 0.0;
    bool has_spare = false;
    if constexpr (std::is_same_v<D, Gaussian>) {
      for (double& v : out) v = d.mean + d.sd * normal_pair(rng, spare, has_spare);
    } else if constexpr (std::is_same_v<D, Exponential>) {
      for (double& v : out) v = -std::log(rng.uniform()) / d.rate;
    } else if constexpr (std::is_same_v<D, Lognormal>) {
      for (double& v : out) v = std::exp(d.meanlog + d.sdlog * normal_pair(rng, spare, has_spare));
    } else if constexpr (std::is_same_v<D, Gamma>) {
      for (double& v : out) v = standard_gamma(d.shape, rng, spare, has_spare) / d.rate;
    } else if constexpr (std::is_same_v<D, Pareto>) {
      for (double& v : out) v = d.scale * std::pow(rng.uniform(), -1.0 / d.shape);
    } else if constexpr (std::is_same_v<D, Geometric>) {
      const double log_q = std::log1p(-d.p);
      const double shift = d.count == CountConvention::trials ? 1.0 : 0.0;
      for (double& v : out) v = std::floor(std::log(rng.uniform()) / log_q) + shift;
    } else {
      for (double& v : out) v = static_cast<double>(table_(rng.uniform()));
    }
  }

  void build_table() {
    std::visit(
        [this](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          using detail::DiscreteTable;
          if constexpr (std::is_same_v<T, Binomial>) {
            const double n = static_cast<double>(d.trials);
            const double lp = std::log(d.p), lq = std::log1p(-d.p);
            table_ = DiscreteTable(
                0,
                [=](double k) {
                  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) + k * lp + (n - k) * lq;
                },
                0.0, static_cast<std::size_t>(d.trials) + 1, static_cast<std::size_t>(d.trials) + 1);
          } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
            const double r = static_cast<double>(d.trials);
            const double lp = std::log(d.p), lq = std::log1p(-d.p);
            const std::int64_t offset = d.count == CountConvention::trials ? d.trials : 0;
            const double mean = r * (1.0 - d.p) / d.p;
            table_ = DiscreteTable(
                offset,
                [=](double k) {
                  return std::lgamma(k + r) - std::lgamma(k + 1) - std::lgamma(r) + r * lp + k * lq;
                },
                0.0, detail::kMaxTableSize, static_cast<std::size_t>(mean) + 1);
          } else if constexpr (std::is_same_v<T, Poisson>) {
            const double lr = std::log(d.rate);
            table_ = DiscreteTable(
                0, [=](double k) { return k * lr - d.rate - std::lgamma(k + 1); },
                0.0, detail::kMaxTableSize, static_cast<std::size_t>(d.rate) + 1);
          } else if constexpr (std::is_same_v<T, Zipf>) {
            // p(k) = k^-shape / zeta(shape, xmin); the tail beyond the cut is lumped into the last bin
            const double log_norm = std::log(detail::hurwitz_zeta(d.shape, static_cast<double>(d.xmin)));
            const double xmin = static_cast<double>(d.xmin);
            table_ = DiscreteTable(
                d.xmin, [=](double k) { return -d.shape * std::log(xmin + k) - log_norm; },
                detail::kTableTailMass, detail::kMaxTableSize);
          }
        },
        spec_);
  }

  DistributionSpec spec_;
  detail::DiscreteTable table_;
};

/// n variates from `spec` on the stream `seed`.
inline std::vector<double> draw_block(const DistributionSpec& spec, std::size_t n, SeedSpec seed) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "block size must be >= 1");
  return Sampler(spec).draw(n, seed);
}

inline std::optional<std::pair<double, double>> theoretical_skew_kurt(const DistributionSpec& spec) {
  validate(spec);
  using Result = std::optional<std::pair<double, double>>;
  return std::visit(
      [](const auto& d) -> Result {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return std::pair{0.0, 3.0};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return std::pair{2.0, 9.0};
        } else if constexpr (std::is_same_v<T, Lognormal>) {
          const double w = std::exp(d.sdlog * d.sdlog);
          return std::pair{(w + 2.0) * std::sqrt(w - 1.0), w * w * w * w + 2.0 * w * w * w + 3.0 * w * w - 3.0};
        } else if constexpr (std::is_same_v<T, Gamma>) {
          return std::pair{2.0 / std::sqrt(d.shape), 3.0 + 6.0 / d.shape};
        } else if constexpr (std::is_same_v<T, Pareto>) {
          const double a = d.shape;
          if (a <= 4.0) return std::nullopt;
          const double skew = 2.0 * (1.0 + a) / (a - 3.0) * std::sqrt((a - 2.0) / a);
          const double excess = 6.0 * (a * a * a + a * a - 6.0 * a - 2.0) / (a * (a - 3.0) * (a - 4.0));
          return std::pair{skew, 3.0 + excess};
        } else if constexpr (std::is_same_v<T, Binomial>) {
          const double npq = static_cast<double>(d.trials) * d.p * (1.0 - d.p);
          return std::pair{(1.0 - 2.0 * d.p) / std::sqrt(npq), 3.0 + (1.0 - 6.0 * d.p * (1.0 - d.p)) / npq};
        } else if constexpr (std::is_same_v<T, NegativeBinomial>) {
          const double r = static_cast<double>(d.trials);
          const double q = 1.0 - d.p;
          return std::pair{(2.0 - d.p) / std::sqrt(r * q), 3.0 + 6.0 / r + d.p * d.p / (r * q)};
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return std::pair{1.0 / std::sqrt(d.rate), 3.0 + 1.0 / d.rate};
        } else if constexpr (std::is_same_v<T, Geometric>) {
          const double q = 1.0 - d.p;
          return std::pair{(2.0 - d.p) / std::sqrt(q), 9.0 + d.p * d.p / q};
        } else {
          // raw moment j is zeta(s - j, xmin) / zeta(s, xmin): the fourth needs s > 5
          if (d.shape <= 5.0) return std::nullopt;
          const double a = static_cast<double>(d.xmin);
          const double z0 = detail::hurwitz_zeta(d.shape, a);
          double raw[5] = {1.0, 0, 0, 0, 0};
          for (int j = 1; j <= 4; ++j) raw[j] = detail::hurwitz_zeta(d.shape - j, a) / z0;
          const double mu = raw[1];
          const double var = raw[2] - mu * mu;
          const double c3 = raw[3] - 3 * mu * raw[2] + 2 * mu * mu * mu;
          const double c4 = raw[4] - 4 * mu * raw[3] + 6 * mu * mu * raw[2] - 3 * mu * mu * mu * mu;
          return std::pair{c3 / std::pow(var, 1.5), c4 / (var * var)};
        }
      },
      spec);
}

}  // namespace skewkurt
