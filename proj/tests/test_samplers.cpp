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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <boost/math/distributions.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "skewkurt/distributions.hpp"
#include "skewkurt/moments.hpp"

using Catch::Approx;
using namespace skewkurt;

namespace {

constexpr std::size_t kDraws = 1'000'000;

// P(sqrt(m) D > x) for the Kolmogorov limit law.
double kolmogorov_tail(double x) {
  double sum = 0;
  for (int k = 1; k < 100; ++k) sum += (k % 2 == 1 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(sum, 0.0, 1.0);
}

template <class Cdf>
double ks_p_value(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / m - f, f - i / m});
  }
  return kolmogorov_tail(std::sqrt(m) * d);
}

// Chi-square over integer outcomes, pooling sparse cells so each expects >= 5.
template <class Pmf>
double chi_square_p_value(const std::vector<double>& x, Pmf pmf, long lo, long hi) {
  std::map<long, double> observed;
  for (double v : x) {
    REQUIRE(v == std::floor(v));
    ++observed[static_cast<long>(v)];
  }
  REQUIRE(observed.begin()->first >= lo);
  const double m = static_cast<double>(x.size());
  double chi2 = 0, exp_acc = 0, obs_acc = 0, mass = 0;
  int cells = 0;
  for (long k = lo; k <= hi; ++k) {
    const double p = pmf(k);
    mass += p;
    exp_acc += m * p;
    obs_acc += observed.count(k) ? observed[k] : 0.0;
    if (exp_acc >= 5.0) {
      chi2 += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
      ++cells;
      exp_acc = obs_acc = 0;
    }
  }
  // everything above hi, plus any unflushed remainder
  double rest = 0;
  for (const auto& [k, c] : observed) if (k > hi) rest += c;
  exp_acc += m * (1.0 - mass);
  obs_acc += rest;
  if (exp_acc > 0) {
    chi2 += (obs_acc - exp_acc) * (obs_acc - exp_acc) / std::max(exp_acc, 1e-300);
    ++cells;
  }
  boost::math::chi_squared dist(std::max(1, cells - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

std::pair<double, double> sample_skew_kurt(const std::vector<double>& x) {
  const auto s = summarize(x);
  return {s.skewness, s.kurtosis};
}

}  // namespace

TEST_CASE("spec text round-trips through parse_distribution", "[samplers]") {
  for (const auto& spec : standard_distributions()) {
    const auto text = to_string(spec);
    const auto back = parse_distribution(text);
    CHECK(to_string(back) == text);
    CHECK(back.index() == spec.index());
  }
  const auto g = parse_distribution("geometric", "p=0.3,count=trials");
  REQUIRE(std::holds_alternative<Geometric>(g));
  CHECK(std::get<Geometric>(g).p == 0.3);
  CHECK(std::get<Geometric>(g).count == CountConvention::trials);
  CHECK(to_string(parse_distribution("Poisson", "rate=20")) == "poisson(rate=20)");
}

TEST_CASE("invalid distribution parameters are rejected", "[samplers][errors]") {
  using Catch::Matchers::ContainsSubstring;
  CHECK_THROWS_WITH(parse_distribution("gaussian", "sd=0"), ContainsSubstring("invalid distribution parameter"));
  CHECK_THROWS_WITH(parse_distribution("binomial", "p=1.5"), ContainsSubstring("invalid distribution parameter"));
  CHECK_THROWS_WITH(parse_distribution("pareto", "shape=-1"), ContainsSubstring("invalid distribution parameter"));
  CHECK_THROWS_WITH(parse_distribution("zipf", "shape=1"), ContainsSubstring("invalid distribution parameter"));
  CHECK_THROWS_WITH(parse_distribution("poisson", "mean=3"), ContainsSubstring("unknown parameter"));
  CHECK_THROWS_WITH(parse_distribution("binomial", "trials=2.5"), ContainsSubstring("integer"));
  CHECK_THROWS_WITH(parse_distribution("cauchy"), ContainsSubstring("unknown distribution"));
  CHECK_THROWS_AS(draw_block(Gamma{-1.0, 1.0}, 10, {1, 0}), Error);
  CHECK_THROWS_AS(draw_block(Gaussian{}, 0, {1, 0}), Error);
}

TEST_CASE("draw_block is a pure function of (spec, n, seed)", "[samplers]") {
  for (const auto& spec : standard_distributions()) {
    const auto a = draw_block(spec, 257, {42, 17});
    const auto b = draw_block(spec, 257, {42, 17});
    const auto c = draw_block(spec, 257, {42, 18});
    INFO(to_string(spec));
    CHECK(a == b);
    CHECK(a != c);
    const Sampler sampler(spec);
    CHECK(sampler.draw(257, {42, 17}) == a);
  }
}

TEST_CASE("closed-form shape agrees with Boost's distribution objects", "[samplers][theory]") {
  namespace bm = boost::math;
  auto check = [](const DistributionSpec& spec, double skew, double kurt) {
    const auto got = theoretical_skew_kurt(spec);
    REQUIRE(got.has_value());
    INFO(to_string(spec));
    CHECK(got->first == Approx(skew).epsilon(1e-12).margin(1e-14));
    CHECK(got->second == Approx(kurt).epsilon(1e-12));
  };
  check(Gaussian{}, bm::skewness(bm::normal(0, 1)), bm::kurtosis(bm::normal(0, 1)));
  check(Exponential{}, bm::skewness(bm::exponential(1)), bm::kurtosis(bm::exponential(1)));
  check(Lognormal{}, bm::skewness(bm::lognormal(0, 1)), bm::kurtosis(bm::lognormal(0, 1)));
  check(Gamma{}, bm::skewness(bm::gamma_distribution<>(2, 1)), bm::kurtosis(bm::gamma_distribution<>(2, 1)));
  check(Pareto{}, bm::skewness(bm::pareto(1, 5)), bm::kurtosis(bm::pareto(1, 5)));
  check(Binomial{}, bm::skewness(bm::binomial(20, 0.8)), bm::kurtosis(bm::binomial(20, 0.8)));
  check(NegativeBinomial{}, bm::skewness(bm::negative_binomial(20, 0.8)),
        bm::kurtosis(bm::negative_binomial(20, 0.8)));
  check(Poisson{}, bm::skewness(bm::poisson(20)), bm::kurtosis(bm::poisson(20)));
  check(Geometric{}, bm::skewness(bm::geometric(0.8)), bm::kurtosis(bm::geometric(0.8)));
}

TEST_CASE("closed-form shape: worked values", "[samplers][theory]") {
  const auto g = theoretical_skew_kurt(Gaussian{});
  CHECK(g->first == 0.0);
  CHECK(g->second == 3.0);
  const auto e = theoretical_skew_kurt(Exponential{});
  CHECK(e->first == 2.0);
  CHECK(e->second == 9.0);
  const auto p = theoretical_skew_kurt(Pareto{});
  CHECK(p->first == Approx(4.6476).margin(1e-4));
  CHECK(p->second == Approx(73.8).epsilon(1e-12));
}

TEST_CASE("closed-form shape matches numerical integration", "[samplers][theory]") {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto shape_from_density = [&](auto pdf, double lo) {
    double raw[5];
    for (int j = 0; j <= 4; ++j) {
      raw[j] = integrator.integrate([&](double t) {
        const double f = pdf(lo + t);
        return f == 0.0 ? 0.0 : std::pow(lo + t, j) * f;  // far tail: avoid inf * 0
      });
    }
    for (int j = 4; j >= 0; --j) raw[j] /= raw[0];
    const double mu = raw[1];
    const double c2 = raw[2] - mu * mu;
    const double c3 = raw[3] - 3 * mu * raw[2] + 2 * mu * mu * mu;
    const double c4 = raw[4] - 4 * mu * raw[3] + 6 * mu * mu * raw[2] - 3 * mu * mu * mu * mu;
    return std::pair{c3 / std::pow(c2, 1.5), c4 / (c2 * c2)};
  };
  const auto pareto = shape_from_density([](double x) { return 5.0 * std::pow(x, -6.0); }, 1.0);
  CHECK(theoretical_skew_kurt(Pareto{})->first == Approx(pareto.first).epsilon(1e-8));
  CHECK(theoretical_skew_kurt(Pareto{})->second == Approx(pareto.second).epsilon(1e-8));
  const auto expo = shape_from_density([](double x) { return std::exp(-x); }, 0.0);
  CHECK(theoretical_skew_kurt(Exponential{})->first == Approx(expo.first).epsilon(1e-8));
  CHECK(theoretical_skew_kurt(Exponential{})->second == Approx(expo.second).epsilon(1e-8));
}

TEST_CASE("moments that diverge are reported as absent", "[samplers][theory]") {
  CHECK_FALSE(theoretical_skew_kurt(Pareto{4.0, 1.0}).has_value());
  CHECK_FALSE(theoretical_skew_kurt(Pareto{2.5, 1.0}).has_value());
  CHECK_FALSE(theoretical_skew_kurt(Zipf{5.0, 1}).has_value());
  const auto z = theoretical_skew_kurt(Zipf{8.0, 1});
  REQUIRE(z.has_value());
  // direct sum oracle for zipf(8)
  double raw[5] = {0, 0, 0, 0, 0};
  for (int k = 1; k < 200000; ++k) {
    const double p = std::pow(k, -8.0);
    for (int j = 0; j <= 4; ++j) raw[j] += std::pow(k, j) * p;
  }
  const double mu = raw[1] / raw[0], m2 = raw[2] / raw[0], m3 = raw[3] / raw[0], m4 = raw[4] / raw[0];
  const double var = m2 - mu * mu;
  const double c3 = m3 - 3 * mu * m2 + 2 * mu * mu * mu;
  const double c4 = m4 - 4 * mu * m3 + 6 * mu * mu * m2 - 3 * mu * mu * mu * mu;
  CHECK(z->first == Approx(c3 / std::pow(var, 1.5)).epsilon(1e-6));
  CHECK(z->second == Approx(c4 / (var * var)).epsilon(1e-6));
}

TEST_CASE("one large block reproduces the population shape", "[samplers][slow]") {
  {
    const auto [s, k] = sample_skew_kurt(draw_block(Gaussian{}, kDraws, {2026, 0}));
    CHECK(std::abs(s - 0.0) <= 0.02);
    CHECK(std::abs(k - 3.0) <= 0.05);
  }
  {
    const auto [s, k] = sample_skew_kurt(draw_block(Exponential{}, kDraws, {2026, 1}));
    CHECK(std::abs(s - 2.0) <= 0.1);
    CHECK(std::abs(k - 9.0) <= 0.5);
  }
  {
    const auto [s, k] = sample_skew_kurt(draw_block(Poisson{}, kDraws, {2026, 2}));
    CHECK(std::abs(s - 1.0 / std::sqrt(20.0)) <= 0.02);
    CHECK(std::abs(k - 3.05) <= 0.05);
  }
  {
    const auto [s, k] = sample_skew_kurt(draw_block(Pareto{}, kDraws, {2026, 3}));
    CHECK(std::abs(s - 4.6476) <= 0.5);
  }
  for (const DistributionSpec& spec : {DistributionSpec{Gamma{}}, DistributionSpec{Binomial{}},
                                       DistributionSpec{NegativeBinomial{}}, DistributionSpec{Geometric{}}}) {
    const auto want = theoretical_skew_kurt(spec);
    const auto [s, k] = sample_skew_kurt(draw_block(spec, kDraws, {2026, 4}));
    INFO(to_string(spec));
    CHECK(std::abs(s - want->first) <= 0.05 * std::max(1.0, want->first));
    CHECK(std::abs(k - want->second) <= 0.1 * want->second);
  }
}

TEST_CASE("continuous samplers pass Kolmogorov-Smirnov at 1e-6", "[samplers][slow]") {
  namespace bm = boost::math;
  constexpr double alpha = 1e-6;
  auto run = [&](const DistributionSpec& spec, auto dist) {
    const auto x = draw_block(spec, kDraws, {77, 0});
    const double p = ks_p_value(x, [&](double v) { return bm::cdf(dist, v); });
    INFO(to_string(spec) << " p = " << p);
    CHECK(p > alpha);
  };
  run(Gaussian{}, bm::normal(0, 1));
  run(Exponential{}, bm::exponential(1));
  run(Lognormal{}, bm::lognormal(0, 1));
  run(Gamma{}, bm::gamma_distribution<>(2, 1));
  run(Pareto{}, bm::pareto(1, 5));
  run(Gamma{0.4, 2.0}, bm::gamma_distribution<>(0.4, 0.5));
}

TEST_CASE("discrete samplers pass chi-square at 1e-6", "[samplers][slow]") {
  namespace bm = boost::math;
  constexpr double alpha = 1e-6;
  auto run = [&](const DistributionSpec& spec, auto pmf, long lo, long hi) {
    const auto x = draw_block(spec, kDraws, {78, 0});
    const double p = chi_square_p_value(x, pmf, lo, hi);
    INFO(to_string(spec) << " p = " << p);
    CHECK(p > alpha);
  };
  run(Binomial{}, [](long k) { return bm::pdf(bm::binomial(20, 0.8), static_cast<double>(k)); }, 0, 20);
  run(NegativeBinomial{}, [](long k) { return bm::pdf(bm::negative_binomial(20, 0.8), static_cast<double>(k)); },
      0, 60);
  run(Poisson{}, [](long k) { return bm::pdf(bm::poisson(20), static_cast<double>(k)); }, 0, 80);
  run(Geometric{}, [](long k) { return bm::pdf(bm::geometric(0.8), static_cast<double>(k)); }, 0, 30);
  const double zeta5 = boost::math::zeta(5.0);
  run(Zipf{}, [&](long k) { return std::pow(static_cast<double>(k), -5.0) / zeta5; }, 1, 2000);
}

TEST_CASE("count conventions shift the support", "[samplers]") {
  const auto fail = draw_block(Geometric{0.8, CountConvention::failures}, 10000, {5, 0});
  const auto trial = draw_block(Geometric{0.8, CountConvention::trials}, 10000, {5, 0});
  for (std::size_t i = 0; i < fail.size(); ++i) REQUIRE(trial[i] == fail[i] + 1.0);
  CHECK(*std::min_element(fail.begin(), fail.end()) == 0.0);

  const auto nb_fail = draw_block(NegativeBinomial{20, 0.8, CountConvention::failures}, 10000, {6, 0});
  const auto nb_trial = draw_block(NegativeBinomial{20, 0.8, CountConvention::trials}, 10000, {6, 0});
  for (std::size_t i = 0; i < nb_fail.size(); ++i) REQUIRE(nb_trial[i] == nb_fail[i] + 20.0);
}

TEST_CASE("zipf support starts at xmin", "[samplers]") {
  const auto x = draw_block(Zipf{5.0, 3}, 100000, {9, 0});
  CHECK(*std::min_element(x.begin(), x.end()) == 3.0);
  double norm = 0;
  for (int k = 3; k < 100000; ++k) norm += std::pow(k, -5.0);
  const double p3 = std::pow(3.0, -5.0) / norm;
  const double frac = static_cast<double>(std::count(x.begin(), x.end(), 3.0)) / x.size();
  CHECK(std::abs(frac - p3) < 5 * std::sqrt(p3 * (1 - p3) / x.size()));
}
