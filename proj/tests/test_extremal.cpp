#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qtlab/dyadic.hpp"
#include "qtlab/extremal.hpp"

using namespace qtlab;

namespace {

// Direct transcription of the bump definition, independent of bump():
// c(t) = beta(t)/2 on [0,l), beta(2l-t)/2 on [l,2l], c(t) = -c(4l-t).
double oracle_bump(const ModulusSpec& beta, double l, double t) {
  if (t < 0 || t > 4 * l) return 0.0;
  if (t <= 2 * l) return t < l ? eval_modulus(beta, t) / 2 : eval_modulus(beta, 2 * l - t) / 2;
  const double u = 4 * l - t;
  return -(u < l ? eval_modulus(beta, u) / 2 : eval_modulus(beta, 2 * l - u) / 2);
}

// r(s) as the literal double sum over levels 1..max_level and all bumps k.
double oracle_r(const ModulusSpec& beta, double s, int max_level) {
  double sum = 0.0;
  for (int n = 1; n <= max_level; ++n) {
    const double l = std::ldexp(1.0, -(n * n + n + 2));
    const double sn = 1.0 - std::ldexp(1.0, 1 - n);
    const double bumps = std::ldexp(1.0, n * n);
    for (double k = 0; k < bumps; ++k) sum += oracle_bump(beta, l, s - sn - 4 * k * l);
  }
  return sum;
}

}  // namespace

TEST_CASE("dyadic arithmetic is exact") {
  const Dyadic a = Dyadic::integer(3) + Dyadic::pow2(-10);
  CHECK(a.to_double() == 3.0 + std::ldexp(1.0, -10));
  CHECK((a - Dyadic::pow2(-10)) == Dyadic::integer(3));
  CHECK(Dyadic::pow2(-5) * 4 == Dyadic::pow2(-3));
  CHECK(Dyadic::pow2(-5) < Dyadic::pow2(-4));
  CHECK(Dyadic(6, 0) == Dyadic(3, 1));
  CHECK_THROWS_AS(Dyadic::integer(1) + Dyadic::pow2(-70), std::overflow_error);
}

TEST_CASE("level_params examples") {
  const auto l1 = level_params(1);
  CHECK(l1.half_width.to_double() == 0.0625);
  CHECK(l1.bump_count == 2);
  CHECK(l1.start.to_double() == 0.0);
  CHECK(l1.train_width.to_double() == 0.5);

  const auto l2 = level_params(2);
  CHECK(l2.half_width == Dyadic::pow2(-8));
  CHECK(l2.bump_count == 16);
  CHECK(l2.start.to_double() == 0.5);
  CHECK(l2.train_width.to_double() == 0.25);

  const auto l3 = level_params(3);
  CHECK(l3.half_width == Dyadic::pow2(-14));
  CHECK(l3.bump_count == 512);
  CHECK(l3.start.to_double() == 0.75);

  CHECK_THROWS_AS(level_params(0), std::out_of_range);
  CHECK_THROWS_AS(level_params(31), std::out_of_range);
}

TEST_CASE("level schedule invariants") {
  for (int n = 1; n <= kMaxLevel; ++n) {
    const auto lv = level_params(n);
    CHECK(lv.half_width == Dyadic::pow2(-(n * n + n + 2)));
    CHECK(lv.train_width == Dyadic::pow2(-n));
    CHECK(std::ldexp(lv.half_width.to_double() * 4, lv.bump_count_log2) == lv.train_width.to_double());
    if (n < kMaxLevel) CHECK(level_params(n + 1).start == lv.start + lv.train_width);
  }
}

TEST_CASE("bump examples") {
  const auto id = ModulusSpec::power(1, 1);
  CHECK(bump(id, 1, 0.0625) == 0.03125);
  CHECK(bump(id, 1, 3 * 0.0625) == -0.03125);
  for (int n = 1; n <= 4; ++n) {
    const double l = std::ldexp(1.0, -(n * n + n + 2));
    CHECK(bump(ModulusSpec::power(2, 0.4), n, 2 * l) == 0.0);
    CHECK(bump(id, n, -l) == 0.0);
    CHECK(bump(id, n, 5 * l) == 0.0);
  }
}

TEST_CASE("eval_r examples") {
  const auto id = ModulusSpec::power(1, 1);
  CHECK(eval_r(id, 0.0625) == 0.03125);
  CHECK(eval_r(id, 0.5 + std::ldexp(1.0, -8)) == std::ldexp(1.0, -9));
  CHECK(eval_r(ModulusSpec::power(3, 0.5), 0.0) == 0.0);
  CHECK(eval_r(id, 1.0) == 0.0);
  CHECK_THROWS_AS(eval_r(id, 1.01), std::domain_error);
  CHECK_THROWS_AS(eval_r(id, -0.01), std::domain_error);

  const auto deep = profile_sample(id, 1.0 - std::ldexp(1.0, -40));
  CHECK(deep.beyond_resolution);
  CHECK(deep.value == 0.0);
  CHECK(profile_sample(id, 0.75).level == 3);
}

TEST_CASE("eval_r matches the literal level sum") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& beta : {ModulusSpec::power(1, 1), ModulusSpec::power(1, 0.5), ModulusSpec::power(3, 0.8)}) {
    for (int i = 0; i < 300; ++i) {
      // Stay inside the first three levels where the oracle sum is cheap.
      const double s = 0.875 * u(rng);
      CHECK(eval_r(beta, s) == doctest::Approx(oracle_r(beta, s, 3)).epsilon(1e-14));
    }
  }
}

TEST_CASE("corner sign pattern on levels 1..3") {
  for (const auto& beta : {ModulusSpec::power(1, 1), ModulusSpec::power(1, 0.5), ModulusSpec::power(3, 1)}) {
    for (int n = 1; n <= 3; ++n) {
      const auto lv = level_params(n);
      const double peak = eval_modulus(beta, lv.half_width.to_double()) / 2;
      for (std::int64_t k = 0; k < static_cast<std::int64_t>(lv.bump_count); ++k) {
        const double a = (lv.start + lv.half_width * (4 * k + 1)).to_double();
        const double b = (lv.start + lv.half_width * (4 * k + 3)).to_double();
        CHECK(eval_r(beta, a) == peak);
        CHECK(eval_r(beta, b) == -peak);
      }
    }
  }
}

TEST_CASE("odd symmetry within each bump period") {
  std::mt19937_64 rng(8);
  const auto beta = ModulusSpec::power(1, 0.7);
  for (int n = 1; n <= 3; ++n) {
    const auto lv = level_params(n);
    const double l = lv.half_width.to_double();
    std::uniform_real_distribution<double> t(0.0, 4 * l);
    std::uniform_int_distribution<std::int64_t> k(0, static_cast<std::int64_t>(lv.bump_count) - 1);
    for (int i = 0; i < 200; ++i) {
      const double base = (lv.start + lv.half_width * (4 * k(rng))).to_double();
      const double tt = t(rng);
      CHECK(eval_r(beta, base + tt) == doctest::Approx(-eval_r(beta, base + 4 * l - tt)).epsilon(1e-13));
    }
  }
}

TEST_CASE("level supports are disjoint") {
  std::mt19937_64 rng(4);
  const auto beta = ModulusSpec::power(1, 1);
  for (int n = 1; n <= 4; ++n) {
    const auto lv = level_params(n);
    const double lo = lv.start.to_double();
    const double width = lv.train_width.to_double();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double s = lo + width * u(rng);
      // Single-level evaluator: only the level-n train.
      const double l = lv.half_width.to_double();
      const double k = std::floor((s - lo) / (4 * l));
      CHECK(eval_r(beta, s) == oracle_bump(beta, l, s - lo - 4 * k * l));
    }
  }
}

TEST_CASE("eval_extremal examples") {
  const auto id = ModulusSpec::power(1, 1);
  const std::vector<double> x1{0.0625};
  CHECK(ExtremalFunction(id, 1, 1).evaluate(x1)[0] == 0.03125);

  const std::vector<double> x2{0.0625, 0.0625};
  const auto v2 = ExtremalFunction(id, 2, 2).evaluate(x2);
  CHECK(v2[0] == doctest::Approx(0.03125 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(v2[1] == v2[0]);

  const std::vector<double> x3{0.0625, 0.77};
  const auto v3 = ExtremalFunction(id, 2, 1, 1).evaluate(x3);
  REQUIRE(v3.size() == 2);
  CHECK(v3[0] == 0.0);
  CHECK(v3[1] == 0.03125);

  CHECK_THROWS_AS(ExtremalFunction(id, 1, 2), std::invalid_argument);
  const std::vector<double> bad{1.2};
  CHECK_THROWS_AS(ExtremalFunction(id, 1, 1).evaluate(bad), std::domain_error);
}

TEST_CASE("extremal map admits its modulus on random pairs") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> near(-0.02, 0.02);
  for (const auto& beta : {ModulusSpec::power(1, 1), ModulusSpec::power(1, 0.5), ModulusSpec::power(3, 1)}) {
    for (int q : {1, 2}) {
      const ExtremalFunction f(beta, q, q);
      for (int i = 0; i < 5000; ++i) {
        std::vector<double> x(static_cast<std::size_t>(q));
        std::vector<double> y(static_cast<std::size_t>(q));
        double dist2 = 0.0;
        for (int a = 0; a < q; ++a) {
          x[a] = u(rng);
          // Half the pairs are close, where the fine levels matter.
          y[a] = (i % 2) ? std::clamp(x[a] + near(rng), 0.0, 1.0) : u(rng);
          dist2 += (x[a] - y[a]) * (x[a] - y[a]);
        }
        const auto fx = f.evaluate(x);
        const auto fy = f.evaluate(y);
        double diff2 = 0.0;
        for (int a = 0; a < q; ++a) diff2 += (fx[a] - fy[a]) * (fx[a] - fy[a]);
        CHECK(std::sqrt(diff2) <= eval_modulus(beta, std::sqrt(dist2)) + 1e-12);
      }
    }
  }
}
