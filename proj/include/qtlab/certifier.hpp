#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtlab/chart.hpp"
#include "qtlab/dyadic.hpp"
#include "qtlab/extremal.hpp"
#include "qtlab/funcrep.hpp"
#include "qtlab/modulus.hpp"

namespace qtlab {

/// Cube counts reach 2^(q n^2); kept exact.
using BigCount = boost::multiprecision::cpp_int;

/// Largest admissible cube enumeration: q * n^2 <= 24.
inline constexpr int kCubeEnumerationLog2Cap = 24;

/// Cell of side 2 l_n centred on the bump extrema of level n:
/// axis i spans [s_n + (4 iota_i + 1) l_n, s_n + (4 iota_i + 3) l_n].
struct Cube {
  int n = 0;
  std::vector<std::int64_t> iota;

  std::size_t q() const { return iota.size(); }
  Dyadic lower(std::size_t axis) const;
  Dyadic upper(std::size_t axis) const;
  Dyadic center(std::size_t axis) const;
  Dyadic side() const;
};

/// Random-access view of the 2^(q n^2) level-n cubes, lexicographic in iota
/// (first axis slowest).
class CubeEnumerator {
 public:
  /// Throws std::length_error when q * n^2 exceeds kCubeEnumerationLog2Cap.
  CubeEnumerator(int n, int q);
  std::uint64_t size() const { return size_; }
  Cube operator[](std::uint64_t index) const;
  int level() const { return n_; }

 private:
  int n_;
  int q_;
  std::uint64_t per_axis_;
  std::uint64_t size_;
};

inline CubeEnumerator enumerate_cubes(int n, int q) { return CubeEnumerator(n, q); }

/// beta(l_n / 2) / (2 sqrt(q)): the largest eps for which level n verifies.
double level_threshold(const ModulusSpec& beta, int q, int n);

/// Depth n0 of the eps-band  threshold(n0 + 1) <= eps <= threshold(n0).
/// Band endpoints resolve to the smaller n0; returns 0 when eps exceeds
/// threshold(1) and saturates at kMaxLevel.
int resolve_depth(const ModulusSpec& beta, int q, double eps);

/// Poincare-Miranda face test on one cube at the slice z (the trailing
/// d - q coordinates). The active block is the last q components of h.
/// Each face y_i = a, y_i = b is sampled on a lattice of step l_n / 4 and a
/// sign is accepted only when |value| > beta(l_n / 4). True implies the
/// active block of h vanishes somewhere in the cube, provided h has the
/// modulus slack assumed by that margin.
bool miranda_verify(const Evaluator& h, const Cube& cube, std::span<const double> z,
                    const ModulusSpec& beta);

/// (16 / Psi)^(m-p) * 2^(-4 (m-p) sqrt|log2 Psi|) with Psi = Psi_beta(gamma eps).
/// Returns 0 when Psi is infinite or zero (vacuous bound).
double theory_lower_bound(const ModulusSpec& beta, double eps, int m, int p, double gamma);

/// Closed-form specialisation for beta(s) = lambda s^alpha.
double holder_lower_bound(double lambda, double alpha, double eps, int m, int p, double gamma);

struct LevelCount {
  int n = 0;
  BigCount verified = 0;
  BigCount total = 0;
  bool operator==(const LevelCount&) const = default;
};

struct Certificate {
  enum class Mode { Theoretical, Empirical };

  double eps = 0.0;
  double effective_eps = 0.0;  // eps after chart inflation by lambda2 / lambda1
  int n0 = 0;
  Mode mode = Mode::Theoretical;
  std::vector<LevelCount> per_level;
  BigCount certified_count = 0;
  BigCount paper_bound = 0;
  double gamma = 0.0;
  double theory_bound = 0.0;
  bool vacuous = false;
  bool all_verified = true;
  bool envelope_ok = true;  // theory_bound <= certified_count, checked
  std::size_t z_slices = 0;

  /// key=value lines.
  std::string to_text() const;
  bool operator==(const Certificate&) const = default;
};

struct CertifyOptions {
  /// Perturbation to verify; absent selects the theoretical certificate.
  std::optional<Evaluator> h;
  std::optional<Chart> chart;
  /// 0: midpoint slice only; K >= 1: K^(d-q) lattice of slices.
  int z_grid = 0;
};

Certificate certify(const ExtremalFunction& f, double eps, const CertifyOptions& options = {});

/// The z-slices used by empirical certification.
std::vector<std::vector<double>> z_slices(int count_dims, int z_grid);

std::string to_string(const BigCount& v);
double to_double(const BigCount& v);

}  // namespace qtlab
