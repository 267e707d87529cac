#pragma once

#include <cstddef>
#include <vector>

#include "qtlab/funcrep.hpp"

namespace qtlab {

/// Knot-zero nudge used by refine_interpolant.
inline constexpr double kRefineNudge = 1e-12;

/// Points where |f| exceeds eps/2, pairwise at least 2 eps / C apart.
struct PeakSet {
  std::vector<double> points;
  std::vector<double> values;  // |f| at each point
  double separation = 0.0;     // 2 eps / C
  double target = 0.0;         // C^2 / (18 eps)

  std::size_t size() const { return points.size(); }
  bool meets_target() const { return static_cast<double>(points.size()) >= target; }
};

/// K0 = ceil(C / (3 eps)): the number of equal intervals of the flattening
/// partition, each of length in [2 eps / C, 3 eps / C] when eps <= C / 6.
std::size_t flatten_interval_count(double eps, double C);

struct FlattenDetail {
  SampledFunction h;
  std::vector<double> partition;  // K0 + 1 endpoints
  std::vector<bool> lifted;       // per interval: true when max |f| <= eps / 2
  std::size_t sub_intervals = 0;  // ceil(3 / C) per interpolated interval
};

/// Interval flattening: lifts f to the plateau eps/2 with unit-slope ramps
/// where max |f| <= eps/2 on an interval, and interpolates f linearly on
/// ceil(3/C) sub-intervals elsewhere. Requires 0 < C <= 1 and 0 < eps <= C/6
/// (std::invalid_argument otherwise). Max |f| is taken on a grid of step eps/64.
FlattenDetail flatten_perturbation_detailed(const Evaluator& f, double eps, double C);
SampledFunction flatten_perturbation(const Evaluator& f, double eps, double C);

/// Argmax of |f| on each partition interval with max |f| > eps/2, then a
/// left-to-right greedy filter keeping points 2 eps / C apart.
PeakSet find_separated_peaks(const Evaluator& f, double eps, double C);

/// Piecewise-linear interpolant of f on ceil(4/eps) equal cells with knot
/// zeros nudged to +kRefineNudge. For 1-Lipschitz f it lies within
/// eps/4 + 2 kRefineNudge of f and has no zero in a cell holding a peak.
SampledFunction refine_interpolant(const Evaluator& f, double eps, const PeakSet& peaks);

/// Number of peaks whose refine cell contains no zero of g.
std::size_t zero_free_peak_cells(const SampledFunction& g, const PeakSet& peaks);

struct ImprovementStep {
  int round = 0;
  double scale = 0.0;       // eps_{k-1}: the construction scale
  double tolerance = 0.0;   // eps_k = eps_0 / 4^k: achieved sup distance budget
  std::size_t peaks = 0;
  std::size_t zero_count = 0;
  double envelope = 0.0;    // (1 - 7 C^2 / 36)^k 4^k / eps_0
};

/// Repeated peak extraction and refinement at scales eps_0 / 4^(k-1).
std::vector<ImprovementStep> iterate_improvement(const Evaluator& f, double eps0, double C, int rounds);

/// C_W (norm / eps)^((m - p) / alpha).
double theory_upper_curve(double norm, double eps, double alpha, int m, int p, double c_w);

}  // namespace qtlab
