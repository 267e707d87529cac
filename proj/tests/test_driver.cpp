#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qtlab/certifier.hpp"
#include "qtlab/driver.hpp"

using namespace qtlab;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sweep_config(in);
}

std::string without_wall_ms(std::vector<SweepRecord> records) {
  for (auto& r : records) r.wall_ms = 0;
  std::ostringstream os;
  write_sweep_csv(os, records);
  return os.str();
}

}  // namespace

TEST_CASE("sweep over j = 6..16 for the Lipschitz line") {
  const auto records = sweep(SweepConfig{});
  REQUIRE(records.size() == 11);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const int j = 6 + static_cast<int>(i);
    CHECK(r.eps == std::ldexp(1.0, -j));
    CHECK(r.n0 == (j <= 10 ? 1 : 2));
    CHECK(r.certified_lb == (j <= 10 ? 2 : 18));
    CHECK(r.paper_lb == (j <= 10 ? 2 : 16));
    CHECK(r.theory_lb <= to_double(r.certified_lb));
    CHECK(r.theory_ub == doctest::Approx(std::ldexp(1.0, j)));
    CHECK_FALSE(r.adversary_ub.has_value());
  }
}

TEST_CASE("sweep depth rises past the second band") {
  SweepConfig c;
  c.j_min = 5;
  c.j_max = 18;
  const auto records = sweep(c);
  CHECK(records.front().n0 == 0);
  CHECK(records.front().certified_lb == 0);
  CHECK(records.back().n0 == 3);
  CHECK(records.back().certified_lb == 2 + 16 + 512);
}

TEST_CASE("empty eps range writes the header only") {
  SweepConfig c;
  c.j_min = 10;
  c.j_max = 9;
  const auto records = sweep(c);
  CHECK(records.empty());
  std::ostringstream os;
  write_sweep_csv(os, records);
  CHECK(os.str() == std::string(kSweepCsvHeader) + "\n");
}

TEST_CASE("theory_lb column matches the closed form for alpha = 1/2") {
  SweepConfig c;
  c.alpha = 0.5;
  c.j_max = 12;
  for (const auto& r : sweep(c)) {
    const double closed = holder_lower_bound(1.0, 0.5, r.eps, 1, 0, 2.0);
    CHECK(std::abs(r.theory_lb - closed) <= 1e-10 * closed);
  }
}

TEST_CASE("adversary column sandwiches the certified count") {
  SweepConfig c;
  c.adversary = true;
  c.j_max = 12;
  for (const auto& r : sweep(c)) {
    REQUIRE(r.adversary_ub.has_value());
    CHECK(r.certified_lb <= *r.adversary_ub);
  }
  c.alpha = 0.5;
  for (const auto& r : sweep(c)) CHECK_FALSE(r.adversary_ub.has_value());
}

TEST_CASE("chart sweeps inflate eps and gamma") {
  SweepConfig c;
  c.m = 2;
  c.p = 1;
  c.d = 1;
  c.chart = "affine:3,0,0,1,0,0";
  const auto records = sweep(c);
  SweepConfig flat = c;
  flat.chart = "identity";
  const auto base = sweep(flat);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].n0 <= base[i].n0);
    CHECK(records[i].theory_lb <= base[i].theory_lb);
  }
}

TEST_CASE("CSV round trip and determinism") {
  SweepConfig c;
  c.adversary = true;
  c.j_max = 10;
  const auto a = sweep(c);
  std::ostringstream os;
  write_sweep_csv(os, a);
  std::istringstream in(os.str());
  CHECK(read_sweep_csv(in) == a);
  CHECK(without_wall_ms(sweep(c)) == without_wall_ms(a));

  std::istringstream bad("eps,n0\n");
  CHECK_THROWS(read_sweep_csv(bad));
}

TEST_CASE("config parsing") {
  const auto c = parse("# comment\nalpha = 0.5\nlambda=2\nd=3\nm=2\np=1\nj_min=7\nj_max=9\nadversary=false\nC=0.5\nC_W=2\n");
  CHECK(c.alpha == 0.5);
  CHECK(c.lambda == 2.0);
  CHECK(c.d == 3);
  CHECK(c.m == 2);
  CHECK(c.p == 1);
  CHECK(c.j_min == 7);
  CHECK(c.C == 0.5);
  CHECK(c.c_w == 2.0);

  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("beta=1\n").find("beta") != std::string::npos);
  CHECK(message("alpha=1.5\n").find("alpha") != std::string::npos);
  CHECK(message("alpha=abc\n").find("alpha") != std::string::npos);
  CHECK(message("lambda=-1\n").find("lambda") != std::string::npos);
  CHECK(message("m=1\np=1\n").find("'m'") != std::string::npos);
  CHECK(message("adversary=maybe\n").find("adversary") != std::string::npos);
  CHECK(message("chart=polar-demo\n").find("polar") != std::string::npos);
  CHECK(message("alpha\n").find("=") != std::string::npos);
}

TEST_CASE("fit_slope examples") {
  SweepConfig c;
  c.j_max = 20;
  const auto records = sweep(c);
  CHECK(fit_slope(records, "theory_ub") == doctest::Approx(-1.0).epsilon(1e-9));
  // Independent least-squares fit of the closed form over j = 6..20.
  CHECK(fit_slope(records, "theory_lb") == doctest::Approx(-0.4034511217282089).epsilon(1e-9));
  const double lb = fit_slope(records, "theory_lb");
  CHECK(lb > -1.0);

  std::vector<SweepRecord> flat;
  for (int j = 1; j <= 5; ++j) {
    SweepRecord r;
    r.eps = std::ldexp(1.0, -j);
    r.theory_lb = 7.0;
    flat.push_back(r);
  }
  CHECK(fit_slope(flat, "theory_lb") == doctest::Approx(0.0));
  flat.resize(2);
  CHECK_THROWS_AS(fit_slope(flat, "theory_lb"), std::invalid_argument);
  CHECK_THROWS_AS(fit_slope(records, "nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(fit_slope(records, "adversary_ub"), std::invalid_argument);
}
