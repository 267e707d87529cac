#pragma once

#include <span>
#include <vector>

#include "qtlab/dyadic.hpp"
#include "qtlab/funcrep.hpp"
#include "qtlab/modulus.hpp"

namespace qtlab {

/// Deepest level the profile resolves; past it r is reported as 0.
inline constexpr int kMaxLevel = 30;

/// Level n of the multi-scale profile. The level-n bump train occupies
/// [start, start + train_width) = [1 - 2^(1-n), 1 - 2^(-n)).
struct LevelSchedule {
  int n = 0;
  Dyadic start;        // s_n = 1 - 2^(1-n)
  Dyadic half_width;   // l_n = 2^(-n^2-n-2)
  int bump_count_log2 = 0;
  double bump_count = 0.0;  // 2^(n^2), exact in double
  Dyadic train_width;  // bump_count * 4 * l_n = 2^(-n)
};

/// Throws std::out_of_range unless 1 <= n <= kMaxLevel.
LevelSchedule level_params(int n);

/// One bump c_n(t): supported on [0, 4 l_n], odd about 2 l_n, equal to
/// beta(t)/2 on [0, l_n) and beta(2 l_n - t)/2 on [l_n, 2 l_n].
double bump(const ModulusSpec& beta, int n, double t);

struct ProfileSample {
  double value = 0.0;
  int level = 0;                  // 0 at s = 1 or past kMaxLevel
  bool beyond_resolution = false;
};

/// r(s) = sum_n u_n(s), evaluated exactly: the level trains have disjoint
/// supports, so exactly one bump is active at s. Throws std::domain_error
/// outside [0, 1].
ProfileSample profile_sample(const ModulusSpec& beta, double s);
double eval_r(const ModulusSpec& beta, double s);

/// The extremal map x -> (0,...,0, r(x_1), ..., r(x_q)) / sqrt(q) with p
/// leading zero components; only the first q coordinates of x are used.
class ExtremalFunction {
 public:
  ExtremalFunction(ModulusSpec beta, int d, int q, int p = 0);

  const ModulusSpec& beta() const { return beta_; }
  int d() const { return d_; }
  int q() const { return q_; }
  int p() const { return p_; }
  int m() const { return p_ + q_; }

  void evaluate(std::span<const double> x, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> x) const;
  Evaluator as_evaluator() const;

 private:
  ModulusSpec beta_;
  int d_;
  int q_;
  int p_;
};

inline std::vector<double> eval_extremal(const ExtremalFunction& f, std::span<const double> x) {
  return f.evaluate(x);
}

}  // namespace qtlab
