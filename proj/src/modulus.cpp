#include "qtlab/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qtlab/funcrep.hpp"

namespace qtlab {

namespace {

constexpr double kAxiomTol = 1e-12;
constexpr double kInverseRelTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_table(const TableModulus& t, double s) {
  const auto& bp = t.breakpoints;
  double x0 = 0.0;
  double y0 = 0.0;
  for (const auto& [x1, y1] : bp) {
    if (s <= x1) {
      if (x1 == x0) return y1;
      return y0 + (y1 - y0) * (s - x0) / (x1 - x0);
    }
    x0 = x1;
    y0 = y1;
  }
  return y0;
}

}  // namespace

ModulusSpec ModulusSpec::power(double lambda, double alpha) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("power modulus: lambda must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("power modulus: alpha must lie in (0, 1]");
  }
  return ModulusSpec(PowerModulus{lambda, alpha});
}

ModulusSpec ModulusSpec::table(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.empty()) throw std::invalid_argument("table modulus: no breakpoints");
  double prev = -1.0;
  for (const auto& [x, y] : breakpoints) {
    if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y < 0.0) {
      throw std::invalid_argument("table modulus: breakpoints must be finite and nonnegative");
    }
    if (!(x > prev)) throw std::invalid_argument("table modulus: deltas must be strictly increasing");
    prev = x;
  }
  return ModulusSpec(TableModulus{std::move(breakpoints)});
}

ModulusSpec ModulusSpec::table_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open modulus table: " + path);
  std::vector<std::pair<double, double>> bp;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double x = 0.0;
    double y = 0.0;
    if (!(ls >> x >> y)) throw std::runtime_error("malformed modulus table line: " + line);
    bp.emplace_back(x, y);
  }
  return table(std::move(bp));
}

double ModulusSpec::supremum() const {
  if (is_power()) return kInf;
  return as_table().breakpoints.back().second;
}

double eval_modulus(const ModulusSpec& beta, double s) {
  if (!(s >= 0.0)) throw std::domain_error("modulus evaluated at negative argument");
  if (beta.is_power()) {
    const auto& p = beta.as_power();
    if (s == 0.0) return 0.0;
    return p.lambda * std::pow(s, p.alpha);
  }
  return eval_table(beta.as_table(), s);
}

AxiomReport check_modulus_axioms(const ModulusSpec& beta, std::span<const double> grid) {
  AxiomReport r;
  r.vanishes_at_zero = std::abs(eval_modulus(beta, 0.0)) <= kAxiomTol;
  r.monotone = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (eval_modulus(beta, grid[i]) < eval_modulus(beta, grid[i - 1]) - kAxiomTol) {
      r.monotone = false;
      break;
    }
  }
  r.subadditive = true;
  for (std::size_t i = 0; i < grid.size() && r.subadditive; ++i) {
    for (std::size_t j = i; j < grid.size(); ++j) {
      const double lhs = eval_modulus(beta, grid[i] + grid[j]);
      const double rhs = eval_modulus(beta, grid[i]) + eval_modulus(beta, grid[j]);
      if (lhs > rhs + kAxiomTol) {
        r.subadditive = false;
        break;
      }
    }
  }
  return r;
}

double inverse_modulus(const ModulusSpec& beta, double s) {
  if (!(s >= 0.0)) throw std::domain_error("inverse modulus evaluated at negative argument");
  if (beta.is_power()) {
    const auto& p = beta.as_power();
    if (s == 0.0) return 0.0;
    return std::pow(s / p.lambda, 1.0 / p.alpha);
  }
  if (s >= beta.supremum()) return kInf;
  // Invariant: beta(lo) <= s < beta(hi).
  double lo = 0.0;
  double hi = beta.as_table().breakpoints.back().first;
  if (eval_modulus(beta, lo) > s) return 0.0;
  while (hi - lo > kInverseRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (eval_modulus(beta, mid) <= s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double minimal_modulus(const SampledFunction& h, double delta) {
  const double diam = std::sqrt(static_cast<double>(h.d()));
  if (!(delta >= 0.0) || delta > diam) {
    throw std::domain_error("minimal_modulus: delta outside [0, diam]");
  }
  const std::size_t n = h.tuple_count();
  std::vector<std::vector<double>> pts(n);
  for (std::size_t t = 0; t < n; ++t) pts[t] = h.tuple_point(t);
  const double delta2 = delta * delta;
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto vi = h.tuple_value(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      double dist2 = 0.0;
      for (int a = 0; a < h.d(); ++a) {
        const double dx = pts[i][a] - pts[j][a];
        dist2 += dx * dx;
      }
      if (dist2 > delta2) continue;
      const auto vj = h.tuple_value(j);
      double diff2 = 0.0;
      for (int c = 0; c < h.m(); ++c) {
        const double dv = vi[c] - vj[c];
        diff2 += dv * dv;
      }
      best = std::max(best, std::sqrt(diff2));
    }
  }
  return best;
}

}  // namespace qtlab
