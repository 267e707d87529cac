#include "qtlab/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qtlab/adversary.hpp"

namespace qtlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config field '" + key + "': expected a boolean, got '" + v + "'");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void SweepConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("config field 'alpha' must lie in (0, 1]");
  if (!(lambda > 0.0)) throw std::invalid_argument("config field 'lambda' must be positive");
  if (p < 0) throw std::invalid_argument("config field 'p' must be nonnegative");
  if (m - p < 1) throw std::invalid_argument("config field 'm' must exceed p");
  if (d < m - p) throw std::invalid_argument("config field 'd' must be at least m - p");
  if (j_min < 0 || j_max > 60) throw std::invalid_argument("config field 'j_min'/'j_max' must lie in [0, 60]");
  if (!(r0 > 0.0)) throw std::invalid_argument("config field 'r0' must be positive");
  if (!(C > 0.0 && C <= 1.0)) throw std::invalid_argument("config field 'C' must lie in (0, 1]");
  if (!(c_w > 0.0)) throw std::invalid_argument("config field 'C_W' must be positive");
  Chart::parse(chart, m, r0);
}

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig c;
  const std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"alpha", [&](const std::string& v) { c.alpha = std::stod(v); }},
      {"lambda", [&](const std::string& v) { c.lambda = std::stod(v); }},
      {"d", [&](const std::string& v) { c.d = std::stoi(v); }},
      {"m", [&](const std::string& v) { c.m = std::stoi(v); }},
      {"p", [&](const std::string& v) { c.p = std::stoi(v); }},
      {"j_min", [&](const std::string& v) { c.j_min = std::stoi(v); }},
      {"j_max", [&](const std::string& v) { c.j_max = std::stoi(v); }},
      {"chart", [&](const std::string& v) { c.chart = v; }},
      {"r0", [&](const std::string& v) { c.r0 = std::stod(v); }},
      {"adversary", [&](const std::string& v) { c.adversary = parse_bool("adversary", v); }},
      {"C", [&](const std::string& v) { c.C = std::stod(v); }},
      {"C_W", [&](const std::string& v) { c.c_w = std::stod(v); }},
  };
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("unknown config field '" + key + "'");
    try {
      it->second(value);
    } catch (const std::logic_error& e) {
      if (std::string(e.what()).rfind("config field", 0) == 0) throw;
      throw std::invalid_argument("config field '" + key + "': cannot parse '" + value + "'");
    }
  }
  c.validate();
  return c;
}

SweepConfig read_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return parse_sweep_config(in);
}

std::optional<std::uint64_t> adversary_upper_bound(const ExtremalFunction& f, double eps, double C) {
  const auto& beta = f.beta();
  if (f.d() != 1 || f.m() != 1 || !beta.is_power()) return std::nullopt;
  const auto& pw = beta.as_power();
  if (pw.alpha != 1.0 || pw.lambda > 1.0) return std::nullopt;
  const Evaluator fe = f.as_evaluator();
  // Refinement at scale 4 eps has mesh eps and stays within eps of f.
  const auto g = refine_interpolant(fe, 4.0 * eps, PeakSet{});
  std::uint64_t best = count_zero_components(g).component_count;
  if (eps <= C / 6.0) {
    const auto zs = count_zero_components(flatten_perturbation(fe, eps, C));
    if (!zs.has_flat_zero_interval) best = std::min<std::uint64_t>(best, zs.component_count);
  }
  return best;
}

std::vector<SweepRecord> sweep(const SweepConfig& config) {
  config.validate();
  const int q = config.m - config.p;
  const ExtremalFunction f(ModulusSpec::power(config.lambda, config.alpha), config.d, q, config.p);
  const Chart chart = Chart::parse(config.chart, config.m, config.r0);
  std::vector<std::future<SweepRecord>> jobs;
  for (int j = config.j_min; j <= config.j_max; ++j) {
    jobs.push_back(std::async(std::launch::async, [&, j] {
      const auto start = std::chrono::steady_clock::now();
      const double eps = std::ldexp(1.0, -j);
      CertifyOptions opts;
      opts.chart = chart;
      const Certificate c = certify(f, eps, opts);
      SweepRecord r;
      r.eps = eps;
      r.n0 = c.n0;
      r.certified_lb = c.certified_count;
      r.paper_lb = c.paper_bound;
      r.theory_lb = c.theory_bound;
      if (config.adversary) r.adversary_ub = adversary_upper_bound(f, eps, config.C);
      r.theory_ub = theory_upper_curve(config.lambda, eps, config.alpha, config.m, config.p, config.c_w);
      r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                      .count();
      return r;
    }));
  }
  std::vector<SweepRecord> out;
  out.reserve(jobs.size());
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.eps) << ',' << r.n0 << ',' << r.certified_lb << ',' << r.paper_lb << ','
        << format_double(r.theory_lb) << ',';
    if (r.adversary_ub) out << *r.adversary_ub;
    out << ',' << format_double(r.theory_ub) << ',' << r.wall_ms << '\n';
  }
}

void write_sweep_csv_file(const std::string& path, const std::vector<SweepRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV: " + path);
  write_sweep_csv(out, records);
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSweepCsvHeader) {
    throw std::runtime_error("sweep CSV: missing or unexpected header");
  }
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(trim(line));
    if (cells.size() != 8) throw std::runtime_error("sweep CSV: expected 8 fields: " + line);
    SweepRecord r;
    r.eps = std::stod(cells[0]);
    r.n0 = std::stoi(cells[1]);
    r.certified_lb = BigCount(cells[2]);
    r.paper_lb = BigCount(cells[3]);
    r.theory_lb = std::stod(cells[4]);
    if (!cells[5].empty()) r.adversary_ub = std::stoull(cells[5]);
    r.theory_ub = std::stod(cells[6]);
    r.wall_ms = std::stoll(cells[7]);
    out.push_back(std::move(r));
  }
  return out;
}

double fit_slope(const std::vector<SweepRecord>& records, const std::string& column) {
  const std::map<std::string, std::function<std::optional<double>(const SweepRecord&)>> columns = {
      {"n0", [](const SweepRecord& r) { return std::optional<double>(r.n0); }},
      {"certified_lb", [](const SweepRecord& r) { return std::optional<double>(to_double(r.certified_lb)); }},
      {"paper_lb", [](const SweepRecord& r) { return std::optional<double>(to_double(r.paper_lb)); }},
      {"theory_lb", [](const SweepRecord& r) { return std::optional<double>(r.theory_lb); }},
      {"theory_ub", [](const SweepRecord& r) { return std::optional<double>(r.theory_ub); }},
      {"adversary_ub",
       [](const SweepRecord& r) {
         return r.adversary_ub ? std::optional<double>(static_cast<double>(*r.adversary_ub)) : std::nullopt;
       }},
  };
  const auto it = columns.find(column);
  if (it == columns.end()) throw std::invalid_argument("fit_slope: unknown column '" + column + "'");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : records) {
    const auto v = it->second(r);
    if (!v || !(*v > 0.0) || !(r.eps > 0.0)) continue;
    xs.push_back(std::log2(r.eps));
    ys.push_back(std::log2(*v));
  }
  if (xs.size() < 3) throw std::invalid_argument("fit_slope: need at least 3 positive rows in '" + column + "'");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: eps values are all equal");
  return sxy / sxx;
}

}  // namespace qtlab
