#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "qtlab/funcrep.hpp"

using namespace qtlab;

namespace {

SampledFunction random_line(std::mt19937_64& rng, int cells, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> k{0.0};
  std::vector<double> v{u(rng)};
  for (int i = 1; i <= cells; ++i) {
    k.push_back(static_cast<double>(i) / cells);
    v.push_back(u(rng));
  }
  return SampledFunction::line(k, v);
}

// Sign-change scan at a resolution well below the knot gap: counts maximal
// runs of sampled points where h is zero or changes sign.
std::size_t brute_force_components(const SampledFunction& h, int resolution) {
  std::size_t count = 0;
  bool in_zero = false;
  double prev = h.evaluate_scalar(0.0);
  if (prev == 0.0) {
    count = 1;
    in_zero = true;
  }
  for (int i = 1; i <= resolution; ++i) {
    const double v = h.evaluate_scalar(static_cast<double>(i) / resolution);
    if (v == 0.0) {
      if (!in_zero) ++count;
      in_zero = true;
    } else {
      if (!in_zero && ((prev < 0.0) != (v < 0.0))) ++count;
      in_zero = false;
    }
    prev = v;
  }
  return count;
}

}  // namespace

TEST_CASE("evaluate examples") {
  const auto h = SampledFunction::line({0, 1}, {0, 1});
  CHECK(h.evaluate_scalar(0.5) == 0.5);
  const auto c = SampledFunction::line({0, 0.25, 1}, {2.5, 2.5, 2.5});
  CHECK(c.evaluate_scalar(0.1) == 2.5);
  CHECK(c.evaluate_scalar(0.9) == 2.5);
  const auto k = SampledFunction::line({0, 0.3, 1}, {-0.3, 0.0, 0.7});
  CHECK(k.evaluate_scalar(0.3) == 0.0);
  CHECK_THROWS_AS(h.evaluate_scalar(1.5), std::domain_error);
  CHECK_THROWS_AS(h.evaluate_scalar(-0.1), std::domain_error);
}

TEST_CASE("bilinear evaluation in two dimensions") {
  // f(x, y) = (x + 2y, x y) is bilinear, so the interpolant reproduces it.
  const Evaluator f{2, 2, [](std::span<const double> x, std::span<double> out) {
                      out[0] = x[0] + 2 * x[1];
                      out[1] = x[0] * x[1];
                    }};
  const auto h = SampledFunction::sample_uniform(f, 1);
  const std::vector<double> p{0.3, 0.7};
  const auto v = h.evaluate(p);
  CHECK(v[0] == doctest::Approx(1.7));
  CHECK(v[1] == doctest::Approx(0.21));
  CHECK(h.tuple_count() == 4);
}

TEST_CASE("construction rejects malformed grids") {
  CHECK_THROWS_AS(SampledFunction::line({0.1, 1}, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledFunction::line({0, 0.5, 0.5, 1}, {0, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledFunction::line({0, 1}, {0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledFunction(2, 1, {{0, 1}}, {0, 0}), std::invalid_argument);
}

TEST_CASE("sup_distance examples") {
  const auto id = SampledFunction::line({0, 1}, {0, 1});
  const auto shifted = SampledFunction::line({0, 0.5, 1}, {0.1, 0.6, 1.1});
  const auto flip = SampledFunction::line({0, 1}, {1, 0});
  CHECK(sup_distance(id, id) == 0.0);
  CHECK(sup_distance(id, shifted) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(sup_distance(id, flip) == 1.0);
  CHECK_THROWS_AS(sup_distance(id, SampledFunction(1, 2, {{0, 1}}, {0, 0, 0, 0})), std::invalid_argument);
}

TEST_CASE("sup_distance catches differences between unshared knots") {
  // h2 has a spike at 0.3 that h1 does not sample.
  const auto h1 = SampledFunction::line({0, 1}, {0, 0});
  const auto h2 = SampledFunction::line({0, 0.3, 1}, {0, 2, 0});
  CHECK(sup_distance(h1, h2) == 2.0);
}

TEST_CASE("sup_distance triangle inequality") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_line(rng, 17);
    const auto b = random_line(rng, 17);
    const auto c = random_line(rng, 17);
    CHECK(sup_distance(a, c) <= sup_distance(a, b) + sup_distance(b, c) + 1e-15);
  }
}

TEST_CASE("count_zero_components examples") {
  const auto one = count_zero_components(SampledFunction::line({0, 1}, {-0.5, 0.5}));
  CHECK(one.component_count == 1);
  CHECK(one.components[0].first == 0.5);
  CHECK_FALSE(one.has_flat_zero_interval);

  CHECK(count_zero_components(SampledFunction::line({0, 1}, {1, 1})).component_count == 0);

  const auto flat = count_zero_components(SampledFunction::line({0, 1.0 / 3, 2.0 / 3, 1}, {-1, 0, 0, 1}));
  CHECK(flat.component_count == 1);
  CHECK(flat.has_flat_zero_interval);
  CHECK(flat.components[0].first == 1.0 / 3);
  CHECK(flat.components[0].second == 2.0 / 3);
  CHECK(std::isinf(flat.hausdorff0()));
  CHECK(one.hausdorff0() == 1.0);

  // Touching zero at a knot without a sign change still counts.
  CHECK(count_zero_components(SampledFunction::line({0, 0.5, 1}, {1, 0, 1})).component_count == 1);
  CHECK(count_zero_components(SampledFunction::line({0, 0.5, 1}, {0, 1, 0})).component_count == 2);

  CHECK_THROWS_AS(count_zero_components(SampledFunction(1, 2, {{0, 1}}, {0, 0, 0, 0})), std::invalid_argument);
}

TEST_CASE("count_zero_components matches a fine sign-change scan") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto h = random_line(rng, 16);
    // Knot gap 1/16; scanning at 1/4096 cannot merge distinct roots of a
    // generic random interpolant.
    CHECK(count_zero_components(h).component_count == brute_force_components(h, 4096));
  }
}

TEST_CASE("refinement leaves evaluation, distance, and zero count unchanged") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = random_line(rng, 8);
    const auto other = random_line(rng, 5);
    std::vector<double> extra;
    for (int i = 0; i < 13; ++i) extra.push_back(u(rng));
    std::sort(extra.begin(), extra.end());
    const auto fine = h.refined({merge_knots(h.knots(0), extra)});
    for (int i = 0; i <= 100; ++i) {
      CHECK(fine.evaluate_scalar(i / 100.0) == doctest::Approx(h.evaluate_scalar(i / 100.0)).epsilon(1e-12));
    }
    CHECK(sup_distance(fine, other) == doctest::Approx(sup_distance(h, other)).epsilon(1e-12));
    CHECK(count_zero_components(fine).component_count == count_zero_components(h).component_count);
  }
}

TEST_CASE("nudge_knot_zeros") {
  const auto h = SampledFunction::line({0, 0.5, 1}, {-1, 0, 1});
  const auto n1 = nudge_knot_zeros(h, 1e-9);
  CHECK(n1.values()[1] == 1e-9);

  const auto big = SampledFunction::line({0, 0.5, 1}, {-1, 2, 1});
  const auto n2 = nudge_knot_zeros(big, 1e-9);
  CHECK(std::equal(n2.values().begin(), n2.values().end(), big.values().begin()));

  const auto n3 = nudge_knot_zeros(h, 0.1);
  CHECK(n3.values()[1] == 0.1);
  CHECK(n3.values()[0] == -1);
  CHECK(count_zero_components(n3).component_count == 1);
  CHECK(sup_distance(n3, h) <= 0.2);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = random_line(rng, 30, 0.01);
    CHECK(sup_distance(nudge_knot_zeros(r, 0.005), r) <= 2 * 0.005);
  }
}

TEST_CASE("function file round trip") {
  const Evaluator f{2, 2, [](std::span<const double> x, std::span<double> out) {
                      out[0] = std::sin(3 * x[0]) + x[1];
                      out[1] = x[0] * x[0] - 1.0 / 3.0;
                    }};
  const auto h = SampledFunction::sample_uniform(f, 7);
  std::stringstream ss;
  write_function(ss, h);
  const auto back = read_function(ss);
  CHECK(back.d() == 2);
  CHECK(back.m() == 2);
  CHECK(back.all_knots() == h.all_knots());
  CHECK(std::equal(back.values().begin(), back.values().end(), h.values().begin()));
}

TEST_CASE("function file parsing errors") {
  std::stringstream bad_header("x y\n");
  CHECK_THROWS(read_function(bad_header));
  std::stringstream short_line("1 1\n0 1\n1\n");
  CHECK_THROWS(read_function(short_line));
  std::stringstream out_of_order("1 1\n1 0\n0 1\n");
  CHECK_THROWS(read_function(out_of_order));
  std::stringstream ok("# comment\n1 1\n0 -1\n0.5 0\n1 1\n");
  CHECK(read_function(ok).evaluate_scalar(0.25) == -0.5);
}
