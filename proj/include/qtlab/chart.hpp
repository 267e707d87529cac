#pragma once

#include <span>
#include <string>
#include <vector>

#include "qtlab/funcrep.hpp"

namespace qtlab {

/// A single-chart flattening phi: U -> V of W onto R^p x {0}. Only built-in
/// charts exist; each carries analytic Lipschitz constants
///   lambda2 = sup_U |D phi|,   lambda1 = inf_U sigma_min(D phi),
/// with |.| the operator norm.
class Chart {
 public:
  enum class Kind { Identity, Affine, PolarDemo };

  static Chart identity(int m, double r0 = 1.0);
  /// phi(y) = A y + b, A row-major m x m and invertible.
  static Chart affine(int m, std::vector<double> a, std::vector<double> b, double r0 = 1.0);
  /// m = 2 annular sector: phi(x, y) = (theta, rho - 1) on
  /// U = {rho in [0.8, 1.25], |theta| < pi/2}; W is the unit-circle arc.
  static Chart polar_demo(double r0 = 1.0);
  /// "identity", "affine:a11,...,amm,b1,...,bm", or "polar-demo".
  static Chart parse(const std::string& text, int m, double r0);

  Kind kind() const { return kind_; }
  int m() const { return m_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }
  double r0() const { return r0_; }

  bool in_domain(std::span<const double> y) const;
  bool in_range(std::span<const double> v) const;
  /// phi(y); throws std::domain_error when y is outside U.
  std::vector<double> forward(std::span<const double> y) const;
  /// phi^{-1}(v); throws std::domain_error when v is outside V.
  std::vector<double> inverse(std::span<const double> v) const;

 private:
  Chart() = default;
  Kind kind_ = Kind::Identity;
  int m_ = 1;
  std::vector<double> a_;
  std::vector<double> a_inv_;
  std::vector<double> b_;
  double lambda1_ = 1.0;
  double lambda2_ = 1.0;
  double r0_ = 1.0;
};

/// gamma_W = 2 sqrt(m - p) lambda2 / lambda1. Throws when p >= m.
double gamma_w(const Chart& c, int m, int p);

/// x -> phi^{-1}(lambda1 g(x)). Range escapes from V raise std::domain_error
/// naming x at evaluation time.
Evaluator transport_function(const Chart& c, const Evaluator& g);

struct Pullback {
  Evaluator function;     // x -> phi(h(x)) / lambda1
  double distance_factor; // lambda2 / lambda1
};

/// If |h - f| <= eps then |phi(h)/lambda1 - g| <= distance_factor * eps.
Pullback pullback_perturbation(const Chart& c, const Evaluator& h);

/// |v_i| <= r0 for the first p coordinates and v_i == 0 for the rest.
bool membership_rectangle(std::span<const double> v, double r0, int p);

}  // namespace qtlab
