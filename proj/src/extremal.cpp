#include "qtlab/extremal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtlab {

LevelSchedule level_params(int n) {
  if (n < 1 || n > kMaxLevel) {
    throw std::out_of_range("level " + std::to_string(n) + " outside [1, " + std::to_string(kMaxLevel) + "]");
  }
  LevelSchedule s;
  s.n = n;
  s.start = Dyadic::integer(1) - Dyadic::pow2(1 - n);
  s.half_width = Dyadic::pow2(-(n * n + n + 2));
  s.bump_count_log2 = n * n;
  s.bump_count = std::ldexp(1.0, n * n);
  s.train_width = Dyadic::pow2(-n);
  return s;
}

double bump(const ModulusSpec& beta, int n, double t) {
  const double l = std::ldexp(1.0, -(n * n + n + 2));
  if (!(t >= 0.0) || t > 4.0 * l) return 0.0;
  if (t > 2.0 * l) return -bump(beta, n, 4.0 * l - t);
  if (t < l) return 0.5 * eval_modulus(beta, t);
  return 0.5 * eval_modulus(beta, 2.0 * l - t);
}

ProfileSample profile_sample(const ModulusSpec& beta, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("profile evaluated outside [0, 1]");
  ProfileSample out;
  if (s == 1.0) return out;
  // Level n holds s iff 2^-n < 1 - s <= 2^(1-n). For s >= 1/2 the
  // subtraction is exact; below 1/2 only the level-1 test matters.
  const double tail = 1.0 - s;
  int e = 0;
  const double frac = std::frexp(tail, &e);
  const int n = (frac == 0.5) ? 2 - e : 1 - e;
  if (n > kMaxLevel) {
    out.beyond_resolution = true;
    return out;
  }
  const double start = 1.0 - std::ldexp(1.0, 1 - n);
  const double period = std::ldexp(1.0, -(n * n + n));
  // s - start is exact (Sterbenz for n >= 2, start = 0 for n = 1) and
  // fmod by a power of two is exact.
  const double local = std::fmod(s - start, period);
  out.level = n;
  out.value = bump(beta, n, local);
  return out;
}

double eval_r(const ModulusSpec& beta, double s) { return profile_sample(beta, s).value; }

ExtremalFunction::ExtremalFunction(ModulusSpec beta, int d, int q, int p)
    : beta_(std::move(beta)), d_(d), q_(q), p_(p) {
  if (d_ < 1 || q_ < 1 || p_ < 0) throw std::invalid_argument("extremal: need d >= 1, q >= 1, p >= 0");
  if (q_ > d_) throw std::invalid_argument("extremal: codimension q = m - p must not exceed d");
}

void ExtremalFunction::evaluate(std::span<const double> x, std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(d_) || out.size() != static_cast<std::size_t>(m())) {
    throw std::invalid_argument("extremal: argument dimension mismatch");
  }
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::domain_error("extremal: point outside [0,1]^d");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(q_));
  for (int i = 0; i < p_; ++i) out[static_cast<std::size_t>(i)] = 0.0;
  for (int i = 0; i < q_; ++i) {
    out[static_cast<std::size_t>(p_ + i)] = scale * eval_r(beta_, x[static_cast<std::size_t>(i)]);
  }
}

std::vector<double> ExtremalFunction::evaluate(std::span<const double> x) const {
  std::vector<double> out(static_cast<std::size_t>(m()));
  evaluate(x, out);
  return out;
}

Evaluator ExtremalFunction::as_evaluator() const {
  return Evaluator{d_, m(), [f = *this](std::span<const double> x, std::span<double> out) {
                     f.evaluate(x, out);
                   }};
}

}  // namespace qtlab
