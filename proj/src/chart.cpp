#include "qtlab/chart.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qtlab {

namespace {

constexpr double kPolarRhoMin = 0.8;
constexpr double kPolarRhoMax = 1.25;
constexpr double kPolarThetaMax = std::numbers::pi / 2;

std::string describe(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ')';
  return os.str();
}

}  // namespace

Chart Chart::identity(int m, double r0) {
  if (m < 1) throw std::invalid_argument("chart: m must be positive");
  if (!(r0 > 0.0)) throw std::invalid_argument("chart: r0 must be positive");
  Chart c;
  c.kind_ = Kind::Identity;
  c.m_ = m;
  c.r0_ = r0;
  return c;
}

Chart Chart::affine(int m, std::vector<double> a, std::vector<double> b, double r0) {
  if (m < 1) throw std::invalid_argument("chart: m must be positive");
  if (a.size() != static_cast<std::size_t>(m * m) || b.size() != static_cast<std::size_t>(m)) {
    throw std::invalid_argument("affine chart: expected m*m matrix entries and m offsets");
  }
  if (!(r0 > 0.0)) throw std::invalid_argument("chart: r0 must be positive");
  Eigen::MatrixXd mat(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) mat(i, j) = a[static_cast<std::size_t>(i * m + j)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
  const auto& sv = svd.singularValues();
  if (!(sv(m - 1) > 0.0) || sv(0) / sv(m - 1) > 1e12) {
    throw std::invalid_argument("affine chart: matrix is singular");
  }
  const Eigen::MatrixXd inv = mat.inverse();
  Chart c;
  c.kind_ = Kind::Affine;
  c.m_ = m;
  c.a_ = std::move(a);
  c.b_ = std::move(b);
  c.a_inv_.resize(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) c.a_inv_[static_cast<std::size_t>(i * m + j)] = inv(i, j);
  }
  c.lambda2_ = sv(0);
  c.lambda1_ = sv(m - 1);
  c.r0_ = r0;
  return c;
}

Chart Chart::polar_demo(double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("chart: r0 must be positive");
  Chart c;
  c.kind_ = Kind::PolarDemo;
  c.m_ = 2;
  // Singular values of D phi are 1 (radial) and 1/rho (angular).
  c.lambda2_ = 1.0 / kPolarRhoMin;
  c.lambda1_ = 1.0 / kPolarRhoMax;
  c.r0_ = r0;
  return c;
}

Chart Chart::parse(const std::string& text, int m, double r0) {
  if (text == "identity") return identity(m, r0);
  if (text == "polar-demo") {
    if (m != 2) throw std::invalid_argument("polar-demo chart requires m = 2");
    return polar_demo(r0);
  }
  const std::string prefix = "affine:";
  if (text.rfind(prefix, 0) == 0) {
    std::vector<double> nums;
    std::stringstream ss(text.substr(prefix.size()));
    std::string tok;
    while (std::getline(ss, tok, ',')) nums.push_back(std::stod(tok));
    const auto mm = static_cast<std::size_t>(m * m);
    if (nums.size() != mm + static_cast<std::size_t>(m)) {
      throw std::invalid_argument("affine chart: expected " + std::to_string(mm + m) + " numbers");
    }
    std::vector<double> b(nums.begin() + static_cast<std::ptrdiff_t>(mm), nums.end());
    nums.resize(mm);
    return affine(m, std::move(nums), std::move(b), r0);
  }
  throw std::invalid_argument("unknown chart: " + text);
}

bool Chart::in_domain(std::span<const double> y) const {
  if (y.size() != static_cast<std::size_t>(m_)) return false;
  if (kind_ != Kind::PolarDemo) return true;
  const double rho = std::hypot(y[0], y[1]);
  if (rho < kPolarRhoMin || rho > kPolarRhoMax) return false;
  return std::abs(std::atan2(y[1], y[0])) < kPolarThetaMax;
}

bool Chart::in_range(std::span<const double> v) const {
  if (v.size() != static_cast<std::size_t>(m_)) return false;
  if (kind_ != Kind::PolarDemo) return true;
  return std::abs(v[0]) < kPolarThetaMax && v[1] + 1.0 >= kPolarRhoMin && v[1] + 1.0 <= kPolarRhoMax;
}

std::vector<double> Chart::forward(std::span<const double> y) const {
  if (!in_domain(y)) throw std::domain_error("chart: point " + describe(y) + " outside U");
  std::vector<double> out(y.begin(), y.end());
  switch (kind_) {
    case Kind::Identity:
      break;
    case Kind::Affine:
      for (int i = 0; i < m_; ++i) {
        double s = b_[static_cast<std::size_t>(i)];
        for (int j = 0; j < m_; ++j) s += a_[static_cast<std::size_t>(i * m_ + j)] * y[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
      }
      break;
    case Kind::PolarDemo:
      out[0] = std::atan2(y[1], y[0]);
      out[1] = std::hypot(y[0], y[1]) - 1.0;
      break;
  }
  return out;
}

std::vector<double> Chart::inverse(std::span<const double> v) const {
  if (!in_range(v)) throw std::domain_error("chart: point " + describe(v) + " outside V");
  std::vector<double> out(v.begin(), v.end());
  switch (kind_) {
    case Kind::Identity:
      break;
    case Kind::Affine:
      for (int i = 0; i < m_; ++i) {
        double s = 0.0;
        for (int j = 0; j < m_; ++j) {
          s += a_inv_[static_cast<std::size_t>(i * m_ + j)] * (v[static_cast<std::size_t>(j)] - b_[static_cast<std::size_t>(j)]);
        }
        out[static_cast<std::size_t>(i)] = s;
      }
      break;
    case Kind::PolarDemo: {
      const double rho = v[1] + 1.0;
      out[0] = rho * std::cos(v[0]);
      out[1] = rho * std::sin(v[0]);
      break;
    }
  }
  return out;
}

double gamma_w(const Chart& c, int m, int p) {
  if (p >= m) throw std::invalid_argument("gamma_w: need p < m");
  return 2.0 * std::sqrt(static_cast<double>(m - p)) * c.lambda2() / c.lambda1();
}

Evaluator transport_function(const Chart& c, const Evaluator& g) {
  if (g.m != c.m()) throw std::invalid_argument("transport_function: chart and function dimensions differ");
  return Evaluator{g.d, g.m, [c, g](std::span<const double> x, std::span<double> out) {
                     std::vector<double> v(static_cast<std::size_t>(g.m));
                     g.fn(x, v);
                     for (double& vi : v) vi *= c.lambda1();
                     if (!c.in_range(v)) {
                       throw std::domain_error("transport_function: lambda1*g(x) leaves V at x = " + describe(x));
                     }
                     const auto y = c.inverse(v);
                     std::copy(y.begin(), y.end(), out.begin());
                   }};
}

Pullback pullback_perturbation(const Chart& c, const Evaluator& h) {
  if (h.m != c.m()) throw std::invalid_argument("pullback_perturbation: chart and function dimensions differ");
  Evaluator fn{h.d, h.m, [c, h](std::span<const double> x, std::span<double> out) {
                 std::vector<double> y(static_cast<std::size_t>(h.m));
                 h.fn(x, y);
                 if (!c.in_domain(y)) {
                   throw std::domain_error("pullback_perturbation: h(x) leaves U at x = " + describe(x));
                 }
                 const auto v = c.forward(y);
                 for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / c.lambda1();
               }};
  return Pullback{std::move(fn), c.lambda2() / c.lambda1()};
}

bool membership_rectangle(std::span<const double> v, double r0, int p) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (static_cast<int>(i) < p) {
      if (!(std::abs(v[i]) <= r0)) return false;
    } else if (v[i] != 0.0) {
      return false;
    }
  }
  return true;
}

}  // namespace qtlab
