#include "qtlab/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtlab {

namespace {

void check_scale(double eps, double C) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(C > 0.0 && C <= 1.0)) throw std::invalid_argument("C must lie in (0, 1]");
}

struct IntervalMax {
  double argmax = 0.0;
  double value = 0.0;  // max |f|
};

// max |f| over [a, b] on a grid of spacing at most `step`, endpoints included.
IntervalMax sampled_max(const Evaluator& f, double a, double b, double step) {
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / step)));
  IntervalMax best{a, -1.0};
  for (std::size_t k = 0; k <= cells; ++k) {
    const double x = (k == cells) ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(cells);
    const double v = std::abs(f.scalar(x));
    if (v > best.value) best = {x, v};
  }
  return best;
}

std::vector<double> uniform_partition(std::size_t cells) {
  std::vector<double> p(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) p[i] = static_cast<double>(i) / static_cast<double>(cells);
  p.back() = 1.0;
  return p;
}

void push_knot(std::vector<double>& xs, std::vector<double>& vs, double x, double v) {
  if (!xs.empty() && x <= xs.back()) return;
  xs.push_back(x);
  vs.push_back(v);
}

}  // namespace

std::size_t flatten_interval_count(double eps, double C) {
  check_scale(eps, C);
  return static_cast<std::size_t>(std::ceil(C / (3.0 * eps)));
}

FlattenDetail flatten_perturbation_detailed(const Evaluator& f, double eps, double C) {
  check_scale(eps, C);
  if (f.d != 1 || f.m != 1) throw std::invalid_argument("flatten_perturbation: f must be scalar on [0,1]");
  if (eps > C / 6.0) throw std::invalid_argument("flatten_perturbation: eps exceeds C/6, no partition with interval lengths in [2 eps/C, 3 eps/C] exists");
  const std::size_t k0 = flatten_interval_count(eps, C);
  const auto k1 = static_cast<std::size_t>(std::ceil(3.0 / C));
  const double half = 0.5 * eps;

  FlattenDetail out{SampledFunction::line({0.0, 1.0}, {0.0, 0.0}), uniform_partition(k0), {}, k1};
  std::vector<double> xs;
  std::vector<double> vs;
  for (std::size_t i = 0; i < k0; ++i) {
    const double a = out.partition[i];
    const double b = out.partition[i + 1];
    const double fa = f.scalar(a);
    const double fb = f.scalar(b);
    const bool lift = sampled_max(f, a, b, eps / 64.0).value <= half;
    out.lifted.push_back(lift);
    if (lift) {
      // Unit-slope ramps from f(a) and f(b) up to the plateau eps/2.
      const double x1 = a - fa + half;
      const double x2 = b + fb - half;
      push_knot(xs, vs, a, fa);
      if (x1 < x2) {
        push_knot(xs, vs, x1, half);
        push_knot(xs, vs, x2, half);
      } else {
        // Unreachable for |f| <= eps/2 and b - a >= 2 eps; kept continuous.
        const double mid = 0.5 * (x1 + x2);
        push_knot(xs, vs, mid, fa + (mid - a));
      }
    } else {
      for (std::size_t j = 0; j < k1; ++j) {
        const double x = a + (b - a) * static_cast<double>(j) / static_cast<double>(k1);
        push_knot(xs, vs, x, j == 0 ? fa : f.scalar(x));
      }
    }
    if (i + 1 == k0) push_knot(xs, vs, b, fb);
  }
  out.h = SampledFunction::line(std::move(xs), std::move(vs));
  return out;
}

SampledFunction flatten_perturbation(const Evaluator& f, double eps, double C) {
  return flatten_perturbation_detailed(f, eps, C).h;
}

PeakSet find_separated_peaks(const Evaluator& f, double eps, double C) {
  check_scale(eps, C);
  if (f.d != 1 || f.m != 1) throw std::invalid_argument("find_separated_peaks: f must be scalar on [0,1]");
  PeakSet peaks;
  peaks.separation = 2.0 * eps / C;
  peaks.target = C * C / (18.0 * eps);
  const auto partition = uniform_partition(flatten_interval_count(eps, C));
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    const auto best = sampled_max(f, partition[i], partition[i + 1], eps / 64.0);
    if (!(best.value > 0.5 * eps)) continue;
    if (!peaks.points.empty() && best.argmax - peaks.points.back() < peaks.separation) continue;
    peaks.points.push_back(best.argmax);
    peaks.values.push_back(best.value);
  }
  return peaks;
}

SampledFunction refine_interpolant(const Evaluator& f, double eps, const PeakSet& /*peaks*/) {
  if (!(eps > 0.0)) throw std::invalid_argument("refine_interpolant: eps must be positive");
  if (f.d != 1 || f.m != 1) throw std::invalid_argument("refine_interpolant: f must be scalar on [0,1]");
  const auto cells = static_cast<std::size_t>(std::ceil(4.0 / eps));
  const auto g = SampledFunction::sample(f, {uniform_partition(cells)});
  return nudge_knot_zeros(g, kRefineNudge);
}

std::size_t zero_free_peak_cells(const SampledFunction& g, const PeakSet& peaks) {
  const auto zeros = count_zero_components(g);
  const auto& knots = g.knots(0);
  std::size_t free = 0;
  for (double y : peaks.points) {
    auto it = std::upper_bound(knots.begin(), knots.end(), y);
    if (it == knots.end()) --it;
    const double hi = *it;
    const double lo = *(it - 1);
    const bool hit = std::any_of(zeros.components.begin(), zeros.components.end(),
                                 [&](const auto& c) { return c.second >= lo && c.first <= hi; });
    if (!hit) ++free;
  }
  return free;
}

std::vector<ImprovementStep> iterate_improvement(const Evaluator& f, double eps0, double C, int rounds) {
  check_scale(eps0, C);
  if (rounds < 1) throw std::invalid_argument("iterate_improvement: rounds must be >= 1");
  std::vector<ImprovementStep> steps;
  const double shrink = 1.0 - 7.0 * C * C / 36.0;
  double scale = eps0;
  for (int k = 1; k <= rounds; ++k) {
    const auto peaks = find_separated_peaks(f, scale, C);
    const auto g = refine_interpolant(f, scale, peaks);
    ImprovementStep s;
    s.round = k;
    s.scale = scale;
    s.tolerance = scale / 4.0;
    s.peaks = peaks.size();
    s.zero_count = count_zero_components(g).component_count;
    s.envelope = std::pow(shrink, k) * std::pow(4.0, k) / eps0;
    steps.push_back(s);
    scale /= 4.0;
  }
  return steps;
}

double theory_upper_curve(double norm, double eps, double alpha, int m, int p, double c_w) {
  if (!(eps > 0.0)) throw std::invalid_argument("theory_upper_curve: eps must be positive");
  return c_w * std::pow(norm / eps, static_cast<double>(m - p) / alpha);
}

}  // namespace qtlab
