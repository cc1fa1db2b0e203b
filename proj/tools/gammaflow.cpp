// gammaflow: constants, profiles and experiment runs from the command line.
//
// Exit codes: 0 success, 1 some pass/fail flag failed, 2 usage or input error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gammaflow/error.hpp"
#include "gammaflow/harness.hpp"
#include "gammaflow/io.hpp"
#include "gammaflow/parallel.hpp"
#include "gammaflow/profile.hpp"

using namespace gammaflow;
using nlohmann::json;

namespace {

constexpr int kExitFlagFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string config;
  std::vector<double> eps_list;
  std::optional<int> k;
  std::string csv;
  std::string json_out;
  std::optional<std::size_t> fit_rows;
  std::optional<double> nodes_per_unit;
  std::optional<std::size_t> nodes;
  std::optional<double> lambda;
  std::string signal_out;
};

void add_run_options(CLI::App* sub, RunOptions& o) {
  sub->add_option("--config", o.config, "experiment config (JSON)")->required();
  sub->add_option("--eps-list", o.eps_list, "override eps list (comma separated)")->delimiter(',');
  sub->add_option("--k", o.k, "override derivative order");
  sub->add_option("--csv", o.csv, "CSV output path (default: config, else stdout)");
  sub->add_option("--json", o.json_out, "JSON summary path (default: config)");
}

ExperimentConfig load_config(const RunOptions& o) {
  std::string text;
  try {
    text = read_text_file(o.config);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(o.config + ": " + e.what());
  }
  if (!o.eps_list.empty()) j["eps_list"] = o.eps_list;
  if (o.k) j["k"] = *o.k;
  if (o.fit_rows) j["fit_rows"] = *o.fit_rows;
  if (o.nodes_per_unit) j["densities"]["budget"]["nodes_per_unit"] = *o.nodes_per_unit;
  if (o.nodes) j["staircase"]["nodes"] = *o.nodes;
  if (o.lambda) j["staircase"]["lambda"] = *o.lambda;
  ExperimentConfig cfg;
  try {
    cfg = config_from_json(j);
  } catch (const DomainError& e) {
    throw UsageError(o.config + ": " + e.what());
  }
  if (!o.csv.empty()) cfg.csv_path = o.csv;
  if (!o.json_out.empty()) cfg.json_path = o.json_out;
  return cfg;
}

int run(const RunOptions& o, const std::vector<ExperimentKind>& allowed) {
  const ExperimentConfig cfg = load_config(o);
  if (std::find(allowed.begin(), allowed.end(), cfg.kind) == allowed.end()) {
    throw UsageError("config kind '" + to_string(cfg.kind) + "' does not belong to this subcommand");
  }
  const ExperimentReport rep = run_experiment(cfg);
  const std::string csv = rep.csv();
  const std::string summary = rep.summary(cfg).dump(2) + "\n";
  if (cfg.csv_path.empty()) {
    std::cout << csv;
  } else {
    write_text_file(cfg.csv_path, csv);
  }
  if (!cfg.json_path.empty()) write_text_file(cfg.json_path, summary);
  if (!o.signal_out.empty() && rep.signal) {
    std::ostringstream ss;
    write_signal_csv(ss, *rep.signal);
    write_text_file(o.signal_out, ss.str());
  }
  for (const Flag& f : rep.flags) {
    std::cerr << (f.pass ? "PASS " : "FAIL ") << f.name;
    if (!f.detail.empty()) std::cerr << "  " << f.detail;
    std::cerr << "\n";
  }
  return rep.all_pass() ? 0 : kExitFlagFailed;
}

int run_mk(int k, std::optional<double> alpha, std::optional<double> kappa, bool as_json) {
  if (k < 1 || k > kMaxOrder) throw UsageError("--k must lie in 1.." + std::to_string(kMaxOrder));
  const OptimalProfile& p = m_const(k);
  const bool scaled = alpha || kappa;
  const ScalingParams sp{alpha.value_or(1.0), kappa.value_or(1.0)};
  if (scaled && (!(sp.alpha > 0.0) || !(sp.kappa > 0.0))) throw UsageError("--alpha and --kappa must be positive");
  if (as_json) {
    json j{{"schema", 1}, {"k", k}, {"c_k", p.c_k.get_str()}, {"T_star", p.T_star}, {"m_k", p.m_k}};
    if (scaled) {
      const WeightedOptimum w = weighted_optimum(k, 1.0 / (sp.alpha * sp.kappa * sp.kappa));
      j["scaled"] = {{"alpha", sp.alpha}, {"kappa", sp.kappa}, {"T", w.T}, {"m", m_scaled(k, sp)}};
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "k = " << k << "\n"
            << "c_k = " << p.c_k.get_str() << "\n"
            << "T_star = " << format_number(p.T_star) << "\n"
            << "m_k = " << format_number(p.m_k) << "\n";
  if (scaled) {
    std::cout << "m_scaled(alpha=" << format_number(sp.alpha) << ", kappa=" << format_number(sp.kappa)
              << ") = " << format_number(m_scaled(k, sp)) << "\n";
  }
  return 0;
}

int run_profile(int k, std::size_t samples, const std::string& out) {
  if (k < 1 || k > kMaxOrder) throw UsageError("--k must lie in 1.." + std::to_string(kMaxOrder));
  if (samples < 2) throw UsageError("--samples must be at least 2");
  const RationalPolynomial& v = m_const(k).unit_poly;
  std::vector<RationalPolynomial> d{v};
  for (int l = 1; l <= k; ++l) d.push_back(v.derivative(l));
  std::ostringstream ss;
  CsvWriter w(ss);
  std::vector<std::string> header{"s", "v"};
  for (int l = 1; l <= k; ++l) header.push_back("d" + std::to_string(l));
  w.row(header);
  for (std::size_t i = 0; i < samples; ++i) {
    // Exact rational sample point keeps the endpoint and symmetry rows exact.
    const mpq_class s(static_cast<long>(i), static_cast<long>(samples - 1));
    std::vector<std::string> row{format_number(s.get_d())};
    for (const auto& p : d) row.push_back(format_number(mpq_class(p(s)).get_d()));
    w.row(row);
  }
  write_text_file(out, ss.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  parallel::configure_from_env();
  parallel::tune_allocator();

  CLI::App app{"gammaflow: transition constants, profiles and eps-sweep experiments"};
  app.require_subcommand(1);

  int mk_k = 0;
  std::optional<double> mk_alpha, mk_kappa;
  bool mk_json = false;
  auto* mk = app.add_subcommand("mk", "print c_k, T_star and m_k");
  mk->add_option("--k", mk_k, "derivative order 1..12")->required();
  mk->add_option("--alpha", mk_alpha, "scaling alpha");
  mk->add_option("--kappa", mk_kappa, "scaling kappa");
  mk->add_flag("--json", mk_json, "JSON output");

  int pr_k = 0;
  std::size_t pr_samples = 0;
  std::string pr_out;
  auto* pr = app.add_subcommand("profile", "sample the optimal profile and its derivatives");
  pr->add_option("--k", pr_k, "derivative order 1..12")->required();
  pr->add_option("--samples", pr_samples, "number of uniform samples of [0, 1]")->required();
  pr->add_option("--out", pr_out, "CSV output path")->required();

  RunOptions sw_opt, de_opt, st_opt;
  auto* sw = app.add_subcommand("sweep", "recovery, surface or scaling sweep");
  add_run_options(sw, sw_opt);
  sw->add_option("--fit-rows", sw_opt.fit_rows, "rows used by the limit fit");
  auto* de = app.add_subcommand("densities", "density table");
  add_run_options(de, de_opt);
  de->add_option("--nodes-per-unit", de_opt.nodes_per_unit, "solver nodes per unit length");
  auto* st = app.add_subcommand("staircase", "staircase demo");
  add_run_options(st, st_opt);
  st->add_option("--nodes", st_opt.nodes, "grid nodes");
  st->add_option("--lambda", st_opt.lambda, "fidelity weight");
  st->add_option("--signal", st_opt.signal_out, "write the first minimizer as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*mk) return run_mk(mk_k, mk_alpha, mk_kappa, mk_json);
    if (*pr) return run_profile(pr_k, pr_samples, pr_out);
    if (*sw) {
      return run(sw_opt, {ExperimentKind::recovery_sweep, ExperimentKind::surface_sweep,
                          ExperimentKind::scaling_check});
    }
    if (*de) return run(de_opt, {ExperimentKind::density_table});
    if (*st) return run(st_opt, {ExperimentKind::staircase});
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
