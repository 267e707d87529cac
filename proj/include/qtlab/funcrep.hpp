#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qtlab {

/// A function [0,1]^d -> R^m given as a pure callable writing into `out`.
/// Evaluators must be safe to call concurrently.
struct Evaluator {
  int d = 1;
  int m = 1;
  std::function<void(std::span<const double> x, std::span<double> out)> fn;

  std::vector<double> operator()(std::span<const double> x) const {
    std::vector<double> out(static_cast<std::size_t>(m));
    fn(x, out);
    return out;
  }
  double scalar(double x) const {
    double out = 0.0;
    fn(std::span<const double>(&x, 1), std::span<double>(&out, 1));
    return out;
  }
};

/// Piecewise-multilinear function on a tensor grid over [0,1]^d with values
/// in R^m. Values are stored per knot tuple in lexicographic order (first
/// axis slowest), m consecutive doubles per tuple.
class SampledFunction {
 public:
  SampledFunction(int d, int m, std::vector<std::vector<double>> knots,
                  std::vector<double> values);

  /// Scalar one-dimensional function from knots and values.
  static SampledFunction line(std::vector<double> knots, std::vector<double> values);
  /// Samples `f` on the given per-axis knot lists.
  static SampledFunction sample(const Evaluator& f, std::vector<std::vector<double>> knots);
  /// Samples `f` on the uniform grid with `cells` intervals per axis.
  static SampledFunction sample_uniform(const Evaluator& f, std::size_t cells);

  int d() const { return d_; }
  int m() const { return m_; }
  const std::vector<double>& knots(int axis) const { return knots_[static_cast<std::size_t>(axis)]; }
  const std::vector<std::vector<double>>& all_knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  std::size_t tuple_count() const { return values_.size() / static_cast<std::size_t>(m_); }

  /// Knot coordinates and value block of the tuple with flat index `t`.
  std::vector<double> tuple_point(std::size_t t) const;
  std::span<const double> tuple_value(std::size_t t) const;

  /// Multilinear interpolation; throws std::domain_error outside [0,1]^d.
  void evaluate(std::span<const double> x, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> x) const;
  double evaluate_scalar(double x) const;

  /// Same interpolant on a refined grid (each new list must contain the old).
  SampledFunction refined(const std::vector<std::vector<double>>& knots) const;

  Evaluator as_evaluator() const;

 private:
  int d_;
  int m_;
  std::vector<std::vector<double>> knots_;
  std::vector<double> values_;
};

struct ZeroSetSummary {
  std::size_t component_count = 0;
  bool has_flat_zero_interval = false;
  std::vector<std::pair<double, double>> components;

  /// Counting measure of the zero set: +inf when a flat zero interval exists.
  double hausdorff0() const;
};

/// C0 distance. Exact in d = 1 (max over merged knots); in d >= 2 the max
/// over merged knots and cell centers, a lower estimate.
double sup_distance(const SampledFunction& h1, const SampledFunction& h2);

/// Connected components of {h = 0} for scalar one-dimensional h.
/// Throws std::invalid_argument for other shapes.
ZeroSetSummary count_zero_components(const SampledFunction& h);

/// Replaces every knot value with |v| < eta by +eta (d = m = 1).
SampledFunction nudge_knot_zeros(const SampledFunction& h, double eta);

/// Sorted union of knot lists.
std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b);

/// Plain-text format: "d m" header, then "x1 .. xd v1 .. vm" per knot tuple.
SampledFunction read_function(std::istream& in);
SampledFunction read_function_file(const std::string& path);
void write_function(std::ostream& out, const SampledFunction& h);
void write_function_file(const std::string& path, const SampledFunction& h);

}  // namespace qtlab
