#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qtlab/adversary.hpp"
#include "qtlab/certifier.hpp"
#include "qtlab/chart.hpp"
#include "qtlab/driver.hpp"
#include "qtlab/extremal.hpp"
#include "qtlab/funcrep.hpp"
#include "qtlab/modulus.hpp"

using namespace qtlab;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

struct ModulusArgs {
  std::string kind = "power";
  double lambda = 1.0;
  double alpha = 1.0;
  std::string file;
};

ModulusSpec make_modulus(const ModulusArgs& a) {
  if (a.kind == "power") return ModulusSpec::power(a.lambda, a.alpha);
  if (a.kind == "table") {
    if (a.file.empty()) throw std::invalid_argument("--kind table requires --file");
    return ModulusSpec::table_from_file(a.file);
  }
  throw std::invalid_argument("--kind must be power or table");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal zero-set laboratory"};
  app.require_subcommand(1);

  // modulus
  auto* mod = app.add_subcommand("modulus", "Evaluate, invert or check a modulus of continuity");
  ModulusArgs mod_args;
  std::optional<double> mod_eval;
  std::optional<double> mod_invert;
  std::optional<double> mod_check;
  mod->add_option("--kind", mod_args.kind, "power or table")->check(CLI::IsMember({"power", "table"}));
  mod->add_option("--lambda", mod_args.lambda);
  mod->add_option("--alpha", mod_args.alpha);
  mod->add_option("--file", mod_args.file, "two-column breakpoint table");
  auto* mod_ops = mod->add_option_group("operation");
  mod_ops->add_option("--eval", mod_eval);
  mod_ops->add_option("--invert", mod_invert);
  mod_ops->add_option("--check", mod_check, "grid step on [0, 1]");
  mod_ops->require_option(1);

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluate a sampled function file");
  std::string ev_func;
  std::string ev_at;
  ev->add_option("--func", ev_func)->required();
  ev->add_option("--at", ev_at, "X1,...,Xd")->required();

  // build
  auto* build = app.add_subcommand("build", "Describe or sample the extremal function");
  double b_alpha = 1.0;
  double b_lambda = 1.0;
  int b_d = 1;
  int b_m = 1;
  int b_p = 0;
  std::optional<double> b_sample;
  std::string b_out;
  build->add_option("--alpha", b_alpha);
  build->add_option("--lambda", b_lambda);
  build->add_option("--d", b_d);
  build->add_option("--m", b_m);
  build->add_option("--p", b_p);
  build->add_option("--sample", b_sample, "grid step");
  build->add_option("--out", b_out);

  // certify
  auto* cert = app.add_subcommand("certify", "Certify a lower bound on the zero-set size");
  cert->set_help_flag("--help", "Print this help message and exit");
  double c_alpha = 1.0;
  double c_lambda = 1.0;
  int c_d = 1;
  int c_m = 1;
  int c_p = 0;
  double c_eps = 0.0;
  std::string c_h;
  std::string c_chart = "identity";
  double c_r0 = 1.0;
  int c_zgrid = 0;
  std::string c_csv;
  cert->add_option("--alpha", c_alpha);
  cert->add_option("--lambda", c_lambda);
  cert->add_option("--d", c_d);
  cert->add_option("--m", c_m);
  cert->add_option("--p", c_p);
  cert->add_option("--eps", c_eps)->required();
  cert->add_option("--h", c_h, "perturbation file; selects empirical mode");
  cert->add_option("--chart", c_chart);
  cert->add_option("--r0", c_r0);
  cert->add_option("--z-grid", c_zgrid);
  cert->add_option("--csv", c_csv, "append a CSV row");

  // perturb
  auto* pert = app.add_subcommand("perturb", "Build an adversarial perturbation");
  std::string pr_mode;
  double pr_eps = 0.0;
  double pr_C = 0.25;
  std::string pr_func;
  double pr_alpha = 1.0;
  double pr_lambda = 1.0;
  std::string pr_out;
  int pr_rounds = 2;
  pert->add_option("--mode", pr_mode)->required()->check(CLI::IsMember({"flatten", "refine", "iterate"}));
  pert->add_option("--eps", pr_eps)->required();
  pert->add_option("--C", pr_C);
  pert->add_option("--func", pr_func);
  pert->add_option("--alpha", pr_alpha);
  pert->add_option("--lambda", pr_lambda);
  pert->add_option("--out", pr_out)->required();
  pert->add_option("--rounds", pr_rounds);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Sweep eps = 2^-j and write CSV");
  std::string sw_config;
  std::string sw_out;
  sw->add_option("--config", sw_config)->required();
  sw->add_option("--out", sw_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mod) {
      const auto beta = make_modulus(mod_args);
      if (mod_eval) {
        std::cout << fmt(eval_modulus(beta, *mod_eval)) << '\n';
      } else if (mod_invert) {
        std::cout << fmt(inverse_modulus(beta, *mod_invert)) << '\n';
      } else {
        if (!(*mod_check > 0.0)) throw std::invalid_argument("--check step must be positive");
        std::vector<double> grid;
        for (double s = 0.0; s <= 1.0 + 1e-12; s += *mod_check) grid.push_back(s);
        const auto r = check_modulus_axioms(beta, grid);
        std::cout << "monotone=" << (r.monotone ? "true" : "false") << '\n'
                  << "subadditive=" << (r.subadditive ? "true" : "false") << '\n'
                  << "vanishes_at_zero=" << (r.vanishes_at_zero ? "true" : "false") << '\n';
        return r.all() ? 0 : 1;
      }
    } else if (*ev) {
      const auto h = read_function_file(ev_func);
      const auto x = parse_point(ev_at);
      if (x.size() != static_cast<std::size_t>(h.d())) throw std::invalid_argument("--at needs d coordinates");
      const auto v = h.evaluate(x);
      for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? " " : "") << fmt(v[i]);
      std::cout << '\n';
    } else if (*build) {
      const ExtremalFunction f(ModulusSpec::power(b_lambda, b_alpha), b_d, b_m - b_p, b_p);
      if (b_sample) {
        if (b_out.empty()) throw std::invalid_argument("--sample requires --out");
        if (!(*b_sample > 0.0 && *b_sample <= 1.0)) throw std::invalid_argument("--sample must lie in (0, 1]");
        const auto cells = static_cast<std::size_t>(std::ceil(1.0 / *b_sample));
        write_function_file(b_out, SampledFunction::sample_uniform(f.as_evaluator(), cells));
        std::cout << "wrote " << b_out << '\n';
      } else {
        std::cout << "d=" << f.d() << "\nm=" << f.m() << "\np=" << f.p() << "\nq=" << f.q()
                  << "\nalpha=" << fmt(b_alpha) << "\nlambda=" << fmt(b_lambda) << '\n';
      }
    } else if (*cert) {
      const ExtremalFunction f(ModulusSpec::power(c_lambda, c_alpha), c_d, c_m - c_p, c_p);
      CertifyOptions opts;
      opts.chart = Chart::parse(c_chart, c_m, c_r0);
      opts.z_grid = c_zgrid;
      std::optional<SampledFunction> h;
      if (!c_h.empty()) {
        h = read_function_file(c_h);
        opts.h = h->as_evaluator();
      }
      const auto c = certify(f, c_eps, opts);
      std::cout << c.to_text();
      if (!c_csv.empty()) {
        std::ifstream probe(c_csv);
        const bool fresh = !probe || probe.peek() == std::ifstream::traits_type::eof();
        probe.close();
        std::ofstream out(c_csv, std::ios::app);
        if (!out) throw std::runtime_error("cannot append to " + c_csv);
        if (fresh) out << "eps,n0,certified_count,paper_bound,theory_bound,mode\n";
        out << fmt(c.eps) << ',' << c.n0 << ',' << c.certified_count << ',' << c.paper_bound << ','
            << fmt(c.theory_bound) << ',' << (c.mode == Certificate::Mode::Theoretical ? "theoretical" : "empirical")
            << '\n';
      }
    } else if (*pert) {
      std::optional<ExtremalFunction> ft;
      std::optional<SampledFunction> fs;
      Evaluator f;
      if (!pr_func.empty()) {
        fs = read_function_file(pr_func);
        f = fs->as_evaluator();
      } else {
        ft.emplace(ModulusSpec::power(pr_lambda, pr_alpha), 1, 1, 0);
        f = ft->as_evaluator();
      }
      auto out = open_out(pr_out);
      if (pr_mode == "iterate") {
        out << "round scale tolerance peaks zero_count envelope\n";
        for (const auto& s : iterate_improvement(f, pr_eps, pr_C, pr_rounds)) {
          out << s.round << ' ' << fmt(s.scale) << ' ' << fmt(s.tolerance) << ' ' << s.peaks << ' '
              << s.zero_count << ' ' << fmt(s.envelope) << '\n';
        }
      } else {
        const auto h = pr_mode == "flatten" ? flatten_perturbation(f, pr_eps, pr_C)
                                            : refine_interpolant(f, pr_eps, find_separated_peaks(f, pr_eps, pr_C));
        write_function(out, h);
        std::vector<double> grid;
        const auto cells = static_cast<std::size_t>(std::ceil(64.0 / pr_eps));
        for (std::size_t i = 0; i <= cells; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(cells));
        const auto ref = SampledFunction::sample(f, {merge_knots(h.knots(0), grid)});
        std::cout << "zero_count=" << count_zero_components(h).component_count << '\n'
                  << "distance=" << fmt(sup_distance(h, ref)) << '\n';
      }
    } else if (*sw) {
      const auto records = sweep(read_sweep_config(sw_config));
      write_sweep_csv_file(sw_out, records);
      std::cout << "rows=" << records.size() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
