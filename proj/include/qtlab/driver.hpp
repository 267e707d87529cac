#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtlab/certifier.hpp"

namespace qtlab {

/// Sweep parameters, read from a key=value file. Unknown keys are errors.
struct SweepConfig {
  double alpha = 1.0;
  double lambda = 1.0;
  int d = 1;
  int m = 1;
  int p = 0;
  int j_min = 6;   // eps = 2^-j for j in [j_min, j_max]
  int j_max = 16;
  std::string chart = "identity";
  double r0 = 1.0;
  bool adversary = false;
  double C = 0.25;    // peak constant for the flattening adversary
  double c_w = 1.0;   // constant of the reference upper curve

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

SweepConfig parse_sweep_config(std::istream& in);
SweepConfig read_sweep_config(const std::string& path);

struct SweepRecord {
  double eps = 0.0;
  int n0 = 0;
  BigCount certified_lb = 0;
  BigCount paper_lb = 0;
  double theory_lb = 0.0;
  std::optional<std::uint64_t> adversary_ub;
  double theory_ub = 0.0;
  std::int64_t wall_ms = 0;

  bool operator==(const SweepRecord&) const = default;
};

inline constexpr const char* kSweepCsvHeader =
    "eps,n0,certified_lb,paper_lb,theory_lb,adversary_ub,theory_ub,wall_ms";

/// Best zero count over the flattening and refinement adversaries at
/// tolerance eps, for the scalar 1-Lipschitz case only.
std::optional<std::uint64_t> adversary_upper_bound(const ExtremalFunction& f, double eps, double C);

/// One record per eps = 2^-j, ordered by increasing j.
std::vector<SweepRecord> sweep(const SweepConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_sweep_csv_file(const std::string& path, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

/// Least-squares slope of log2(column) against log2(eps) over rows with a
/// positive value. Throws std::invalid_argument with fewer than 3 such rows
/// or an unknown column.
double fit_slope(const std::vector<SweepRecord>& records, const std::string& column);

}  // namespace qtlab
