#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "scalelaw/errors.hpp"
#include "scalelaw/fitting.hpp"
#include "scalelaw/synth.hpp"

using namespace scalelaw;

TEST_CASE("noiseless curves refit exactly with the generator switch") {
  SynthSpec spec;
  spec.theta = {-0.25, -0.08, -0.06};
  spec.n_switch = 150.0;
  spec.grid = {10, 20, 30, 40, 50, 600, 1800, 5400};
  const auto curve = gen_curve(spec);
  REQUIRE(curve.points.size() == spec.grid.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const double expected =
        -std::expm1(ppl_eval({spec.theta, spec.n_switch},
                             static_cast<double>(spec.grid[i])));
    CHECK(curve.points[i].v == doctest::Approx(expected).epsilon(1e-15));
  }
  const auto fit = fit_ppl(curve.points, spec.n_switch);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(fit.params[i] - spec.theta[i]) < 1e-6);
  CHECK(fit.residual_norm < 1e-10);
}

TEST_CASE("generation is deterministic given the seed") {
  SynthSpec spec;
  spec.theta = {-0.3, -0.05, -0.1};
  spec.n_switch = 90.0;
  spec.noise_sd = 0.05;
  spec.seed = 4242;
  spec.grid = {5, 10, 15, 20, 25, 1000, 3000};
  const auto a = gen_curve(spec);
  const auto b = gen_curve(spec);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].v == b.points[i].v);
  }
  spec.seed = 4243;
  const auto c = gen_curve(spec);
  bool any_different = false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].v != c.points[i].v) any_different = true;
  }
  CHECK(any_different);
}

TEST_CASE("zero curvature produces an exactly log-linear curve") {
  SynthSpec spec;
  spec.theta = {-0.2, -0.3, 0.0};
  spec.n_switch = 50.0;
  spec.grid = {2, 4, 8, 16, 32, 64, 128};
  const auto curve = gen_curve(spec);
  // log-error is linear in log n: second differences vanish on a doubling grid
  std::vector<double> y;
  for (const auto& p : curve.points) y.push_back(std::log1p(-p.v));
  for (std::size_t i = 2; i < y.size(); ++i) {
    CHECK(std::abs((y[i] - y[i - 1]) - (y[i - 1] - y[i - 2])) < 1e-12);
  }
}

TEST_CASE("out-of-range scores are rejected with the offending n") {
  SynthSpec spec;
  spec.theta = {0.5, 0.0, 0.0};  // log-error +0.5 -> score below zero
  spec.n_switch = 10.0;
  spec.grid = {1, 2, 3};
  try {
    gen_curve(spec);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("n=1") != std::string::npos);
  }
}

TEST_CASE("invalid grids are rejected") {
  SynthSpec spec;
  spec.theta = {-0.2, -0.1, -0.02};
  spec.n_switch = 10.0;
  spec.grid = {5, 5, 10};
  CHECK_THROWS_AS(gen_curve(spec), DomainError);
  spec.grid = {};
  CHECK_THROWS_AS(gen_curve(spec), DomainError);
  spec.grid = {0, 5};
  CHECK_THROWS_AS(gen_curve(spec), DomainError);
}

TEST_CASE("scores increase in n whenever the generator slope is negative") {
  SynthSpec spec;
  spec.theta = {-0.1, -0.05, -0.04};
  spec.n_switch = 200.0;
  spec.grid = {3, 9, 27, 81, 243, 729};
  const auto curve = gen_curve(spec);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].v > curve.points[i - 1].v);
  }
}

TEST_CASE("dictionary generation basics") {
  const ParamRanges ranges;
  const auto synth = gen_dictionary(40, ranges, 7);
  CHECK(synth.dict.entries.size() == 40);
  CHECK(synth.specs.size() == 40);
  for (const auto& curve : synth.dict.entries) {
    CHECK(curve.fit_count == 5);
    CHECK(curve.points.size() > 5);
    CHECK(curve.classes >= ranges.classes_lo);
    CHECK(curve.classes <= ranges.classes_hi);
  }
  // names unique by construction of make_dictionary; seeds reproduce
  const auto again = gen_dictionary(40, ranges, 7);
  for (std::size_t i = 0; i < 40; ++i) {
    REQUIRE(again.dict.entries[i].points.size() == synth.dict.entries[i].points.size());
    for (std::size_t j = 0; j < synth.dict.entries[i].points.size(); ++j) {
      CHECK(again.dict.entries[i].points[j].v == synth.dict.entries[i].points[j].v);
    }
  }
  CHECK_THROWS_AS(gen_dictionary(1, ranges, 7), DomainError);
}

TEST_CASE("drawn switch ratios are log-uniform (Kolmogorov-Smirnov at 1%)") {
  ParamRanges ranges;
  ranges.noise_sd = 0.0;  // feasibility never rejects, so draws stay untrimmed
  const int count = 10000;
  const auto synth = gen_dictionary(count, ranges, 99);
  std::vector<double> u;
  u.reserve(count);
  const double lo = std::log(ranges.n_over_c_lo);
  const double hi = std::log(ranges.n_over_c_hi);
  for (const auto& spec : synth.specs) {
    u.push_back((std::log(spec.n_switch / spec.classes) - lo) / (hi - lo));
  }
  std::sort(u.begin(), u.end());
  double d_stat = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double upper = static_cast<double>(i + 1) / count - u[i];
    const double lower = u[i] - static_cast<double>(i) / count;
    d_stat = std::max({d_stat, upper, lower});
  }
  const double critical = 1.628 / std::sqrt(static_cast<double>(count));  // alpha = 0.01
  CHECK(d_stat < critical);
}
