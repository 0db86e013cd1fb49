// Batch front end: analyze, solve, case-studies, propagate.
//
// Exit codes: 0 ok, 1 config or I/O error, 2 gap bound refuted,
// 3 undecided, 4 compatibility violated.

#include "tubespec/builtin.hpp"
#include "tubespec/case_studies.hpp"
#include "tubespec/cluster.hpp"
#include "tubespec/invariant_system.hpp"
#include "tubespec/io.hpp"
#include "tubespec/propagation.hpp"
#include "tubespec/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace tubespec;

namespace {

enum Exit { kOk = 0, kConfig = 1, kRefuted = 2, kUndecided = 3, kIncompatible = 4 };

struct Loaded {
  json config;
  fs::path base;
};

Loaded load_config(const fs::path& path) {
  Loaded l{read_json_file(path), path.parent_path()};
  if (!l.config.is_object()) throw ConfigError("config must be a JSON object");
  return l;
}

json resolve(const Loaded& l, const json& section, const std::string& key) {
  if (section.contains(key)) return section.at(key);
  if (section.contains(key + "_file")) return read_json_file(l.base / section.at(key + "_file").get<std::string>());
  throw ConfigError("missing '" + key + "'");
}

OperatorSpec load_operator(const Loaded& l) {
  const json& c = l.config;
  if (c.contains("operator") && c.at("operator").is_string()) return builtin_operator(c.at("operator").get<std::string>());
  return operator_spec_from_json(resolve(l, c, "operator"));
}

const json& analysis(const Loaded& l) {
  static const json empty = json::object();
  return l.config.contains("analysis") ? l.config.at("analysis") : empty;
}

std::string equivalences_note(const AghVerdict& v) {
  switch (v.mode) {
    case AghMode::ExactCertificate:
      return "gap bound certified: P is almost globally hypoelliptic and has closed range; Pu = f is solvable in "
             "smooth functions and in distributions for every f orthogonal to the kernel.";
    case AghMode::EmpiricalFit:
      return "gap bound supported by the scan but not certified: the equivalent properties (almost global "
             "hypoellipticity, closed range, smooth solvability) are expected but unproven.";
    case AghMode::Refuted:
      return "gap bound fails: P is not almost globally hypoelliptic and its range is not closed.";
    case AghMode::Undecided:
      break;
  }
  return "no decision: the gap bound and its equivalent properties remain open for this operator.";
}

int cmd_analyze(const fs::path& config_path, const fs::path& out) {
  const Loaded l = load_config(config_path);
  const OperatorSpec spec = load_operator(l);
  const json& a = analysis(l);

  const SystemBasis system = build_system(spec);
  const GammaLattice gamma = gamma_of(system);

  AghOptions opts;
  double R = 50.0;
  if (a.contains("agh_scan")) {
    const json& s = a.at("agh_scan");
    R = s.value("R", R);
    opts.rho_max = s.value("rho_max", opts.rho_max);
    if (s.contains("witnesses")) {
      for (const auto& w : s.at("witnesses")) opts.extra_witnesses.push_back(w.get<Freq>());
    }
  }
  opts.witness_digits = l.config.value("precision", opts.witness_digits);
  const AghVerdict verdict = agh_scan(system, gamma, R, opts);

  json report;
  report["gamma"] = to_json(gamma);
  report["system"] = to_json(system);
  report["agh"] = to_json(verdict);
  report["equivalences_note"] = equivalences_note(verdict);

  if (a.contains("apriori")) {
    const json& p = a.at("apriori");
    const AprioriProbe probe =
        apriori_probe(spec, gamma, p.value("K", 16L), p.value("lambda_max", 100L), &verdict);
    report["apriori"] = to_json(probe);
  }
  if (a.contains("cluster")) {
    const json& c = a.at("cluster");
    json parts = json::array();
    for (const auto& shell : shells_up_to(spec.m, c.value("lambda_max", 10L))) {
      parts.push_back(to_json(cluster_partition(gamma, shell.lambda)));
    }
    report["cluster"] = {{"partitions", parts},
                         {"invariance_defect", invariance_defect(spec, gamma, c.value("K", 6L), c.value("R", 4.0))}};
  }

  write_json_file(out / "verdicts.json", report);
  write_text_file(out / "gap_minima.csv", gap_minima_csv(verdict));
  std::cout << "agh: " << to_string(verdict.mode) << (verdict.numeric ? " (numeric, not certified)" : "") << "\n";
  if (verdict.mode == AghMode::Refuted) return kRefuted;
  if (verdict.mode == AghMode::Undecided) return kUndecided;
  return kOk;
}

int cmd_solve(const fs::path& config_path, const fs::path& out, bool force_flag) {
  const Loaded l = load_config(config_path);
  const OperatorSpec spec = load_operator(l);
  const json& a = analysis(l);
  if (!a.contains("solve")) throw ConfigError("missing analysis.solve");
  const json& s = a.at("solve");
  const ProductFunction f = product_function_from_json(resolve(l, s, "f"));
  const long K = s.value("K", 32L);
  const double R = s.value("R", std::ceil(std::sqrt(static_cast<double>(f.xi_degree_sq()))));
  SolveOptions opts;
  opts.force = force_flag || s.value("force", false);

  const GammaLattice gamma = gamma_of(build_system(spec));
  try {
    const SolveResult r = solve_global(spec, gamma, f, K, R, opts);
    write_json_file(out / "u.json", to_json(r.u));
    write_text_file(out / "residuals.csv", residuals_csv(r));
    write_text_file(out / "decay.csv", decay_csv(r.decay));
    write_json_file(out / "solve.json", to_json(r));
    std::cout << "solve: residual " << format_double(r.total_residual) << ", u "
              << to_string(r.classification.classification) << "\n";
    return kOk;
  } catch (const CompatibilityViolated& e) {
    write_json_file(out / "violations.json", to_json(e.violations()));
    std::cerr << "compatibility violated at:";
    for (const auto& v : e.violations()) std::cerr << " xi=" << freq_to_string(v.xi);
    std::cerr << "\n";
    return kIncompatible;
  }
}

int cmd_case_studies(const fs::path& config_path, const fs::path& out, std::string which) {
  json c = json::object();
  if (!config_path.empty()) c = load_config(config_path).config;
  if (which.empty()) which = c.value("case", std::string("su2"));
  if (which == "su2") {
    const HalfInt l_max = HalfInt::from_string(c.contains("l_max") ? (c.at("l_max").is_string()
                                                                           ? c.at("l_max").get<std::string>()
                                                                           : c.at("l_max").dump())
                                                                     : std::string("20"));
    const Su2AghReport agh = su2_agh_check(l_max, c.value("seed", 0UL));
    const auto growth = su2_kernel_growth(l_max);
    json spectrum = json::array();
    long total = 0;
    for (const auto& level : su2_spectrum(l_max)) {
      total += level.dimension();
      spectrum.push_back({{"l", level.l.str()},
                          {"lambda", level.lambda.get_str()},
                          {"dim", level.dimension()},
                          {"c_lambda", level.c_lambda}});
    }
    json report = to_json(agh);
    report["l_max"] = l_max.str();
    report["kernel_growth"] = to_json(growth);
    report["kernel_cumulative"] = growth.empty() ? 0 : growth.back().cumulative;
    report["spectrum"] = spectrum;
    report["peter_weyl"] = {{"sum_dim", total}, {"closed_form", peter_weyl_count(l_max)}};
    write_json_file(out / "su2.json", report);
    std::cout << "su2: min |gamma| = " << report["min_gamma"].dump() << "\n";
    return kOk;
  }
  if (which == "s1") {
    const S1Report r = s1_counterexample(c.value("K", 64L));
    write_json_file(out / "s1.json", to_json(r));
    std::cout << "s1: smooth solvability requires " << r.cinfty_constraint << "\n";
    return kOk;
  }
  throw ConfigError("unknown case study '" + which + "' (expected su2 or s1)");
}

int cmd_propagate(const fs::path& config_path, const fs::path& out) {
  const Loaded l = load_config(config_path);
  const OperatorSpec spec = load_operator(l);
  const json& a = analysis(l);
  if (!a.contains("propagation")) throw ConfigError("missing analysis.propagation");
  const json& p = a.at("propagation");
  const ProductFunction u = product_function_from_json(resolve(l, p, "u"));
  const LocalWindow U = local_window_from_json(p.at("U"));
  const long lambda_max = p.value("lambda_max", u.xi_degree_sq());
  const PropagationReport r = propagation_verdict(spec, u, U, lambda_max);
  write_json_file(out / "propagation.json", to_json(r));
  write_text_file(out / "decay_global.csv", decay_csv(r.global_profile));
  write_text_file(out / "decay_local.csv", decay_csv(r.local_profile));
  write_text_file(out / "decay_Pu.csv", decay_csv(r.pu_profile));
  std::cout << "propagation: " << to_string(r.outcome) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of tube-type sums of squares on T^n x T^m"};
  app.require_subcommand(1);
  fs::path config, out = ".";
  bool force = false;
  std::string which;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config, "JSON problem configuration");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
  };
  auto* analyze = app.add_subcommand("analyze", "invariant system, Gamma and the gap bound");
  add_common(analyze, true);
  auto* solve = app.add_subcommand("solve", "spectral Galerkin solve of Pu = f");
  add_common(solve, true);
  solve->add_flag("--force", force, "project f onto the compatible subspace");
  auto* cases = app.add_subcommand("case-studies", "SU(2) neutral operator or the circle counterexample");
  add_common(cases, false);
  cases->add_option("--which", which, "su2 or s1");
  auto* prop = app.add_subcommand("propagate", "local-to-global decay comparison");
  add_common(prop, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    fs::create_directories(out);
    if (*analyze) return cmd_analyze(config, out);
    if (*solve) return cmd_solve(config, out, force);
    if (*cases) return cmd_case_studies(config, out, which);
    if (*prop) return cmd_propagate(config, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
