#include "qtlab/certifier.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qtlab/parallel.hpp"

namespace qtlab {

namespace {

BigCount pow2_count(int e) { return BigCount(1) << e; }

}  // namespace

std::string to_string(const BigCount& v) { return v.str(); }

double to_double(const BigCount& v) { return v.convert_to<double>(); }

Dyadic Cube::lower(std::size_t axis) const {
  const auto lv = level_params(n);
  return lv.start + lv.half_width * (4 * iota.at(axis) + 1);
}

Dyadic Cube::upper(std::size_t axis) const {
  const auto lv = level_params(n);
  return lv.start + lv.half_width * (4 * iota.at(axis) + 3);
}

Dyadic Cube::center(std::size_t axis) const {
  const auto lv = level_params(n);
  return lv.start + lv.half_width * (4 * iota.at(axis) + 2);
}

Dyadic Cube::side() const { return level_params(n).half_width * 2; }

CubeEnumerator::CubeEnumerator(int n, int q) : n_(n), q_(q) {
  if (q < 1) throw std::invalid_argument("enumerate_cubes: q must be positive");
  level_params(n);
  if (q * n * n > kCubeEnumerationLog2Cap) {
    throw std::length_error("enumerate_cubes: 2^(q n^2) = 2^" + std::to_string(q * n * n) +
                            " cubes exceeds the enumeration cap 2^" +
                            std::to_string(kCubeEnumerationLog2Cap));
  }
  per_axis_ = std::uint64_t{1} << (n * n);
  size_ = std::uint64_t{1} << (q * n * n);
}

Cube CubeEnumerator::operator[](std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("cube index out of range");
  Cube c;
  c.n = n_;
  c.iota.resize(static_cast<std::size_t>(q_));
  for (int a = q_ - 1; a >= 0; --a) {
    c.iota[static_cast<std::size_t>(a)] = static_cast<std::int64_t>(index % per_axis_);
    index /= per_axis_;
  }
  return c;
}

double level_threshold(const ModulusSpec& beta, int q, int n) {
  const double l = std::ldexp(1.0, -(n * n + n + 2));
  return eval_modulus(beta, 0.5 * l) / (2.0 * std::sqrt(static_cast<double>(q)));
}

int resolve_depth(const ModulusSpec& beta, int q, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("resolve_depth: eps must be positive");
  if (q < 1) throw std::invalid_argument("resolve_depth: q must be positive");
  if (eps > level_threshold(beta, q, 1)) return 0;
  for (int n = 1; n < kMaxLevel; ++n) {
    if (level_threshold(beta, q, n + 1) <= eps) return n;
  }
  return kMaxLevel;
}

bool miranda_verify(const Evaluator& h, const Cube& cube, std::span<const double> z,
                    const ModulusSpec& beta) {
  const int q = static_cast<int>(cube.q());
  const int d = h.d;
  if (q > h.m || q > d) throw std::invalid_argument("miranda_verify: cube dimension exceeds h");
  if (z.size() != static_cast<std::size_t>(d - q)) {
    throw std::invalid_argument("miranda_verify: slice has wrong dimension");
  }
  const int offset = h.m - q;
  const double l = level_params(cube.n).half_width.to_double();
  const double step = 0.25 * l;
  const double slack = eval_modulus(beta, step);
  constexpr int kPerAxis = 9;  // side 2 l at step l / 4

  std::vector<double> lo(static_cast<std::size_t>(q));
  std::vector<double> hi(static_cast<std::size_t>(q));
  for (std::size_t a = 0; a < lo.size(); ++a) {
    lo[a] = cube.lower(a).to_double();
    hi[a] = cube.upper(a).to_double();
  }
  std::vector<double> x(static_cast<std::size_t>(d));
  std::copy(z.begin(), z.end(), x.begin() + q);
  std::vector<double> value(static_cast<std::size_t>(h.m));

  std::size_t face_points = 1;
  for (int k = 1; k < q; ++k) face_points *= kPerAxis;

  for (int axis = 0; axis < q; ++axis) {
    // min/max of the axis component over the lower and upper faces.
    double min_lo = std::numeric_limits<double>::infinity();
    double max_lo = -min_lo;
    double min_hi = min_lo;
    double max_hi = -min_lo;
    for (int side = 0; side < 2; ++side) {
      for (std::size_t t = 0; t < face_points; ++t) {
        std::size_t rem = t;
        for (int a = q - 1; a >= 0; --a) {
          if (a == axis) continue;
          const auto k = static_cast<int>(rem % kPerAxis);
          rem /= kPerAxis;
          x[static_cast<std::size_t>(a)] = (k == kPerAxis - 1) ? hi[static_cast<std::size_t>(a)]
                                                               : lo[static_cast<std::size_t>(a)] + k * step;
        }
        x[static_cast<std::size_t>(axis)] = side == 0 ? lo[static_cast<std::size_t>(axis)]
                                                      : hi[static_cast<std::size_t>(axis)];
        h.fn(x, value);
        const double v = value[static_cast<std::size_t>(offset + axis)];
        if (side == 0) {
          min_lo = std::min(min_lo, v);
          max_lo = std::max(max_lo, v);
        } else {
          min_hi = std::min(min_hi, v);
          max_hi = std::max(max_hi, v);
        }
      }
    }
    const bool positive_first = min_lo > slack && max_hi < -slack;
    const bool negative_first = max_lo < -slack && min_hi > slack;
    if (!positive_first && !negative_first) return false;
  }
  return true;
}

double theory_lower_bound(const ModulusSpec& beta, double eps, int m, int p, double gamma) {
  if (p >= m) throw std::invalid_argument("theory_lower_bound: need p < m");
  const double psi = inverse_modulus(beta, gamma * eps);
  if (!std::isfinite(psi) || !(psi > 0.0)) return 0.0;
  const double q = m - p;
  const double log_psi = std::log2(psi);
  return std::pow(16.0 / psi, q) * std::exp2(-4.0 * q * std::sqrt(std::abs(log_psi)));
}

double holder_lower_bound(double lambda, double alpha, double eps, int m, int p, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(lambda > 0.0)) {
    throw std::invalid_argument("holder_lower_bound: need 0 < alpha <= 1 and lambda > 0");
  }
  if (p >= m) throw std::invalid_argument("holder_lower_bound: need p < m");
  // log2 Psi = log2(gamma eps / lambda) / alpha.
  const double log_psi = std::log2(gamma * eps / lambda) / alpha;
  const double q = m - p;
  return std::exp2(q * (4.0 - log_psi) - 4.0 * q * std::sqrt(std::abs(log_psi)));
}

std::vector<std::vector<double>> z_slices(int count_dims, int z_grid) {
  if (count_dims <= 0) return {{}};
  std::vector<double> axis;
  if (z_grid <= 1) {
    axis = {0.5};
  } else {
    for (int i = 0; i < z_grid; ++i) axis.push_back(static_cast<double>(i) / (z_grid - 1));
  }
  std::vector<std::vector<double>> out;
  std::size_t total = 1;
  for (int k = 0; k < count_dims; ++k) total *= axis.size();
  for (std::size_t t = 0; t < total; ++t) {
    std::vector<double> z(static_cast<std::size_t>(count_dims));
    std::size_t rem = t;
    for (int k = count_dims - 1; k >= 0; --k) {
      z[static_cast<std::size_t>(k)] = axis[rem % axis.size()];
      rem /= axis.size();
    }
    out.push_back(std::move(z));
  }
  return out;
}

Certificate certify(const ExtremalFunction& f, double eps, const CertifyOptions& options) {
  if (!(eps > 0.0)) throw std::invalid_argument("certify: eps must be positive");
  const int q = f.q();
  Certificate c;
  c.eps = eps;
  c.effective_eps = eps;
  c.gamma = 2.0 * std::sqrt(static_cast<double>(q));
  if (options.chart) {
    const Chart& chart = *options.chart;
    if (chart.m() != f.m()) throw std::invalid_argument("certify: chart dimension differs from m");
    c.effective_eps = eps * chart.lambda2() / chart.lambda1();
    c.gamma = gamma_w(chart, f.m(), f.p());
  }
  c.n0 = resolve_depth(f.beta(), q, c.effective_eps);
  c.paper_bound = c.n0 >= 1 ? pow2_count(q * c.n0 * c.n0) : BigCount(0);
  c.theory_bound = theory_lower_bound(f.beta(), eps, f.m(), f.p(), c.gamma);
  c.vacuous = c.n0 == 0 || c.theory_bound == 0.0;

  if (!options.h) {
    c.mode = Certificate::Mode::Theoretical;
    for (int n = 1; n <= c.n0; ++n) {
      const BigCount total = pow2_count(q * n * n);
      c.per_level.push_back({n, total, total});
      c.certified_count += total;
    }
  } else {
    c.mode = Certificate::Mode::Empirical;
    Evaluator h = *options.h;
    if (h.d != f.d() || h.m != f.m()) throw std::invalid_argument("certify: perturbation shape differs from f");
    if (options.chart) h = pullback_perturbation(*options.chart, h).function;
    const auto slices = z_slices(f.d() - q, options.z_grid);
    c.z_slices = slices.size();
    for (int n = 1; n <= c.n0; ++n) {
      const CubeEnumerator cubes(n, q);
      const std::uint64_t verified = parallel_count(cubes.size(), [&](std::uint64_t i) {
        const Cube cube = cubes[i];
        for (const auto& z : slices) {
          if (!miranda_verify(h, cube, z, f.beta())) return false;
        }
        return true;
      });
      c.per_level.push_back({n, BigCount(verified), BigCount(cubes.size())});
      c.certified_count += verified;
      if (verified != cubes.size()) c.all_verified = false;
    }
  }
  c.envelope_ok = c.n0 == 0 || c.theory_bound <= to_double(c.certified_count);
  return c;
}

std::string Certificate::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "mode=" << (mode == Mode::Theoretical ? "theoretical" : "empirical") << '\n';
  os << "eps=" << eps << '\n';
  os << "effective_eps=" << effective_eps << '\n';
  os << "n0=" << n0 << '\n';
  for (const auto& lv : per_level) {
    os << "level." << lv.n << "=" << lv.verified << '/' << lv.total
       << (mode == Mode::Theoretical ? " guaranteed" : "") << '\n';
  }
  if (mode == Mode::Empirical) os << "z_slices=" << z_slices << '\n';
  os << "certified_count=" << certified_count << '\n';
  os << "paper_bound=" << paper_bound << '\n';
  os << "gamma=" << gamma << '\n';
  os << "theory_bound=" << theory_bound << '\n';
  os << "vacuous=" << (vacuous ? "true" : "false") << '\n';
  os << "all_verified=" << (all_verified ? "true" : "false") << '\n';
  os << "envelope_ok=" << (envelope_ok ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace qtlab
