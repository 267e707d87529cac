#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qtlab {

class SampledFunction;

/// beta(s) = lambda * s^alpha, 0 < alpha <= 1.
struct PowerModulus {
  double lambda = 1.0;
  double alpha = 1.0;
};

/// Piecewise-linear modulus through (delta, value) breakpoints. Below the
/// first breakpoint the curve interpolates from (0, 0); beyond the last one
/// it is held constant, so sup(beta) is the last value.
struct TableModulus {
  std::vector<std::pair<double, double>> breakpoints;
};

/// A modulus of continuity. Concavity/subadditivity is not enforced here;
/// use check_modulus_axioms.
class ModulusSpec {
 public:
  static ModulusSpec power(double lambda, double alpha);
  static ModulusSpec table(std::vector<std::pair<double, double>> breakpoints);
  /// Reads a two-column "delta value" text file.
  static ModulusSpec table_from_file(const std::string& path);

  bool is_power() const { return std::holds_alternative<PowerModulus>(kind_); }
  const PowerModulus& as_power() const { return std::get<PowerModulus>(kind_); }
  const TableModulus& as_table() const { return std::get<TableModulus>(kind_); }

  /// Saturation level: +inf for power moduli, the last table value otherwise.
  double supremum() const;

 private:
  using Kind = std::variant<PowerModulus, TableModulus>;
  explicit ModulusSpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

struct AxiomReport {
  bool monotone = false;
  bool subadditive = false;
  bool vanishes_at_zero = false;
  bool all() const { return monotone && subadditive && vanishes_at_zero; }
};

/// beta(s). Throws std::domain_error for s < 0.
double eval_modulus(const ModulusSpec& beta, double s);

/// Checks the three axioms on every grid point / grid pair, tolerance 1e-12.
AxiomReport check_modulus_axioms(const ModulusSpec& beta, std::span<const double> grid);

/// Psi_beta(s) = sup{delta >= 0 : beta(delta) <= s}; +inf once s >= sup(beta).
double inverse_modulus(const ModulusSpec& beta, double s);

/// Minimal modulus omega_h(delta) over grid-point pairs of h. Exact for
/// piecewise-linear h in one dimension; in higher dimensions it is a lower
/// estimate of the supremum over the continuous interpolant.
double minimal_modulus(const SampledFunction& h, double delta);

}  // namespace qtlab
