#include "qtlab/funcrep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qtlab {

namespace {

void validate_knots(const std::vector<double>& k) {
  if (k.size() < 2) throw std::invalid_argument("knot list needs at least two knots");
  if (k.front() != 0.0 || k.back() != 1.0) {
    throw std::invalid_argument("knot list must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (!(k[i] > k[i - 1])) throw std::invalid_argument("knots must be strictly increasing");
  }
}

// Index of the cell [k[i], k[i+1]] containing x, and the local coordinate.
std::pair<std::size_t, double> locate(const std::vector<double>& k, double x) {
  auto it = std::upper_bound(k.begin(), k.end(), x);
  std::size_t i = (it == k.begin()) ? 0 : static_cast<std::size_t>(it - k.begin()) - 1;
  if (i + 1 >= k.size()) i = k.size() - 2;
  const double t = (x - k[i]) / (k[i + 1] - k[i]);
  return {i, t};
}

std::vector<double> uniform_knots(std::size_t cells) {
  std::vector<double> k(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) k[i] = static_cast<double>(i) / static_cast<double>(cells);
  k.back() = 1.0;
  return k;
}

}  // namespace

SampledFunction::SampledFunction(int d, int m, std::vector<std::vector<double>> knots,
                                 std::vector<double> values)
    : d_(d), m_(m), knots_(std::move(knots)), values_(std::move(values)) {
  if (d_ < 1 || m_ < 1) throw std::invalid_argument("SampledFunction: d and m must be positive");
  if (knots_.size() != static_cast<std::size_t>(d_)) {
    throw std::invalid_argument("SampledFunction: need one knot list per axis");
  }
  std::size_t tuples = 1;
  for (const auto& k : knots_) {
    validate_knots(k);
    tuples *= k.size();
  }
  if (values_.size() != tuples * static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("SampledFunction: value count does not match grid size");
  }
}

SampledFunction SampledFunction::line(std::vector<double> knots, std::vector<double> values) {
  return SampledFunction(1, 1, {std::move(knots)}, std::move(values));
}

SampledFunction SampledFunction::sample(const Evaluator& f, std::vector<std::vector<double>> knots) {
  if (knots.size() != static_cast<std::size_t>(f.d)) {
    throw std::invalid_argument("sample: knot lists do not match evaluator dimension");
  }
  std::size_t tuples = 1;
  for (const auto& k : knots) tuples *= k.size();
  std::vector<double> values(tuples * static_cast<std::size_t>(f.m));
  std::vector<double> x(static_cast<std::size_t>(f.d));
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rem = t;
    for (int a = f.d - 1; a >= 0; --a) {
      const auto& k = knots[static_cast<std::size_t>(a)];
      x[static_cast<std::size_t>(a)] = k[rem % k.size()];
      rem /= k.size();
    }
    f.fn(x, std::span<double>(values.data() + t * static_cast<std::size_t>(f.m),
                              static_cast<std::size_t>(f.m)));
  }
  return SampledFunction(f.d, f.m, std::move(knots), std::move(values));
}

SampledFunction SampledFunction::sample_uniform(const Evaluator& f, std::size_t cells) {
  if (cells == 0) throw std::invalid_argument("sample_uniform: need at least one cell");
  return sample(f, std::vector<std::vector<double>>(static_cast<std::size_t>(f.d), uniform_knots(cells)));
}

std::vector<double> SampledFunction::tuple_point(std::size_t t) const {
  std::vector<double> x(static_cast<std::size_t>(d_));
  for (int a = d_ - 1; a >= 0; --a) {
    const auto& k = knots_[static_cast<std::size_t>(a)];
    x[static_cast<std::size_t>(a)] = k[t % k.size()];
    t /= k.size();
  }
  return x;
}

std::span<const double> SampledFunction::tuple_value(std::size_t t) const {
  return std::span<const double>(values_).subspan(t * static_cast<std::size_t>(m_),
                                                  static_cast<std::size_t>(m_));
}

void SampledFunction::evaluate(std::span<const double> x, std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(d_) || out.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("evaluate: argument dimension mismatch");
  }
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::domain_error("evaluate: point outside [0,1]^d");
  }
  std::vector<std::size_t> cell(static_cast<std::size_t>(d_));
  std::vector<double> w(static_cast<std::size_t>(d_));
  for (int a = 0; a < d_; ++a) {
    auto [i, t] = locate(knots_[static_cast<std::size_t>(a)], x[static_cast<std::size_t>(a)]);
    cell[static_cast<std::size_t>(a)] = i;
    w[static_cast<std::size_t>(a)] = t;
  }
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t corners = std::size_t{1} << d_;
  for (std::size_t c = 0; c < corners; ++c) {
    double weight = 1.0;
    std::size_t flat = 0;
    for (int a = 0; a < d_; ++a) {
      const bool upper = (c >> a) & 1U;
      const double wa = w[static_cast<std::size_t>(a)];
      weight *= upper ? wa : 1.0 - wa;
      flat = flat * knots_[static_cast<std::size_t>(a)].size() + cell[static_cast<std::size_t>(a)] +
             (upper ? 1 : 0);
    }
    if (weight == 0.0) continue;
    const auto v = tuple_value(flat);
    for (int j = 0; j < m_; ++j) out[static_cast<std::size_t>(j)] += weight * v[static_cast<std::size_t>(j)];
  }
}

std::vector<double> SampledFunction::evaluate(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(m_));
  evaluate(x, out);
  return out;
}

double SampledFunction::evaluate_scalar(double x) const {
  double out = 0.0;
  evaluate(std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

SampledFunction SampledFunction::refined(const std::vector<std::vector<double>>& knots) const {
  for (std::size_t a = 0; a < knots_.size(); ++a) {
    for (double k : knots_[a]) {
      if (!std::binary_search(knots[a].begin(), knots[a].end(), k)) {
        throw std::invalid_argument("refined: new grid must contain the old knots");
      }
    }
  }
  return sample(as_evaluator(), knots);
}

Evaluator SampledFunction::as_evaluator() const {
  // Shares nothing mutable; the copy keeps the evaluator self-contained.
  auto self = std::make_shared<const SampledFunction>(*this);
  return Evaluator{d_, m_, [self](std::span<const double> x, std::span<double> out) {
                     self->evaluate(x, out);
                   }};
}

double ZeroSetSummary::hausdorff0() const {
  if (has_flat_zero_interval) return std::numeric_limits<double>::infinity();
  return static_cast<double>(component_count);
}

std::vector<double> merge_knots(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double sup_distance(const SampledFunction& h1, const SampledFunction& h2) {
  if (h1.d() != h2.d() || h1.m() != h2.m()) {
    throw std::invalid_argument("sup_distance: dimension mismatch");
  }
  std::vector<std::vector<double>> merged(static_cast<std::size_t>(h1.d()));
  for (int a = 0; a < h1.d(); ++a) merged[static_cast<std::size_t>(a)] = merge_knots(h1.knots(a), h2.knots(a));
  if (h1.d() >= 2) {
    // Add cell midpoints; the multilinear difference can peak inside cells.
    for (auto& k : merged) {
      std::vector<double> mids;
      for (std::size_t i = 0; i + 1 < k.size(); ++i) mids.push_back(0.5 * (k[i] + k[i + 1]));
      k = merge_knots(k, mids);
    }
  }
  const auto a = SampledFunction::sample(h1.as_evaluator(), merged);
  const auto b = SampledFunction::sample(h2.as_evaluator(), merged);
  double best = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  const auto m = static_cast<std::size_t>(h1.m());
  for (std::size_t t = 0; t < a.tuple_count(); ++t) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double dv = va[t * m + j] - vb[t * m + j];
      s += dv * dv;
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

ZeroSetSummary count_zero_components(const SampledFunction& h) {
  if (h.d() != 1 || h.m() != 1) {
    throw std::invalid_argument("count_zero_components: only d = 1, m = 1 is supported");
  }
  const auto& x = h.knots(0);
  const auto v = h.values();
  // Zero pieces in increasing order: knot zeros, sign-change roots, and
  // whole segments where both endpoints vanish.
  std::vector<std::pair<double, double>> pieces;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (v[i] == 0.0) pieces.emplace_back(x[i], x[i]);
    if (i + 1 == x.size()) break;
    const double a = v[i];
    const double b = v[i + 1];
    if (a == 0.0 && b == 0.0) {
      pieces.emplace_back(x[i], x[i + 1]);
    } else if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
      const double root = x[i] + (x[i + 1] - x[i]) * (a / (a - b));
      pieces.emplace_back(root, root);
    }
  }
  ZeroSetSummary z;
  for (const auto& p : pieces) {
    if (!z.components.empty() && p.first <= z.components.back().second) {
      z.components.back().second = std::max(z.components.back().second, p.second);
    } else {
      z.components.push_back(p);
    }
  }
  z.component_count = z.components.size();
  for (const auto& c : z.components) {
    if (c.second > c.first) z.has_flat_zero_interval = true;
  }
  return z;
}

SampledFunction nudge_knot_zeros(const SampledFunction& h, double eta) {
  if (h.d() != 1 || h.m() != 1) {
    throw std::invalid_argument("nudge_knot_zeros: only d = 1, m = 1 is supported");
  }
  std::vector<double> v(h.values().begin(), h.values().end());
  for (double& vi : v) {
    if (std::abs(vi) < eta) vi = eta;
  }
  return SampledFunction::line(h.knots(0), std::move(v));
}

SampledFunction read_function(std::istream& in) {
  int d = 0;
  int m = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream hs(line);
    if (!(hs >> d >> m) || d < 1 || m < 1) throw std::runtime_error("function file: bad header line");
    break;
  }
  if (d < 1) throw std::runtime_error("function file: missing header");
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> p(static_cast<std::size_t>(d));
    for (auto& xi : p) {
      if (!(ls >> xi)) throw std::runtime_error("function file: short line: " + line);
    }
    for (int j = 0; j < m; ++j) {
      double vj = 0.0;
      if (!(ls >> vj)) throw std::runtime_error("function file: short line: " + line);
      values.push_back(vj);
    }
    points.push_back(std::move(p));
  }
  std::vector<std::vector<double>> knots(static_cast<std::size_t>(d));
  for (std::size_t a = 0; a < knots.size(); ++a) {
    for (const auto& p : points) knots[a].push_back(p[a]);
    std::sort(knots[a].begin(), knots[a].end());
    knots[a].erase(std::unique(knots[a].begin(), knots[a].end()), knots[a].end());
  }
  SampledFunction h(d, m, knots, values);
  for (std::size_t t = 0; t < points.size(); ++t) {
    if (h.tuple_point(t) != points[t]) {
      throw std::runtime_error("function file: knot tuples are not a lexicographic tensor grid");
    }
  }
  return h;
}

SampledFunction read_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open function file: " + path);
  return read_function(in);
}

void write_function(std::ostream& out, const SampledFunction& h) {
  out << h.d() << ' ' << h.m() << '\n';
  out << std::setprecision(17);
  for (std::size_t t = 0; t < h.tuple_count(); ++t) {
    const auto p = h.tuple_point(t);
    for (std::size_t a = 0; a < p.size(); ++a) out << (a ? " " : "") << p[a];
    for (double v : h.tuple_value(t)) out << ' ' << v;
    out << '\n';
  }
}

void write_function_file(const std::string& path, const SampledFunction& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write function file: " + path);
  write_function(out, h);
}

}  // namespace qtlab
