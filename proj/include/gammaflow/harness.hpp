#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gammaflow/densities.hpp"
#include "gammaflow/grid.hpp"
#include "gammaflow/recovery.hpp"
#include "gammaflow/sbv.hpp"

namespace gammaflow {

enum class ExperimentKind { recovery_sweep, surface_sweep, density_table, scaling_check, staircase };

std::string to_string(ExperimentKind kind);
/// Throws DomainError on an unknown name.
ExperimentKind kind_from_string(const std::string& name);

struct DensityGrid {
  std::vector<double> z{0.5, 1.0, 2.0};
  std::vector<double> N{1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<double> theta{0.25, 0.5};
  double eps = 1e-6;
  SolverBudget budget{};
};

struct StaircaseParams {
  std::size_t nodes = 1001;
  double lambda = 1e3;
  std::string data = "ramp";  ///< "ramp" (g = x) or "zero"
  double noise = 0.0;         ///< uniform noise amplitude added to g
  std::uint64_t seed = 7;
  /// Starts: g itself and J-step staircases for J = 1..max_steps, each step
  /// smoothed by the optimal profile over step_width.
  int max_steps = 12;
  double step_width = 0.002;
  bool refine_check = true;  ///< repeat on 2n - 1 nodes and compare census
  MinimizeOptions options{1e-8, 3000, 1e-4, 60};
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::recovery_sweep;
  int k = 2;
  std::vector<double> eps_list;
  std::optional<SbvSignal> signal;  ///< defaults depend on the kind
  RecoveryOptions recovery{};
  std::size_t fit_rows = 5;
  double tolerance = 0.02;  ///< relative, fitted limit vs target
  std::vector<ScalingParams> scaling{{1.0, 2.0}, {2.0, 1.0}};
  double bulk_tolerance = 0.01;  ///< scaling check, bulk rows vs alpha kappa^2
  DensityGrid densities{};
  StaircaseParams staircase{};
  std::string csv_path;
  std::string json_path;
};

/// Missing fields take the defaults above. Throws DomainError on invalid
/// values (eps list not strictly decreasing or inadmissible, bad k, ...).
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

struct SweepRow {
  double eps = 0.0;
  double p_eps = 0.0;
  double c_eps = 0.0;
  double value = 0.0;
  double bulk = 0.0;
  double penalty = 0.0;
  double target = 0.0;
  double residual = 0.0;  ///< value - target
  double l1 = 0.0;        ///< L1 distance of the recovery signal to u
  bool ok = true;
  std::string error;
};

/// value = limit + sum_i coef_i basis_i(eps), least squares over the rows.
struct LimitFit {
  double limit = 0.0;
  std::vector<double> coef;
  double rms = 0.0;
  std::size_t rows = 0;
  bool degenerate = false;  ///< no jumps in u, or too few usable rows
};

enum class FitModel {
  loglog,       ///< a log|log eps| / |log eps|
  loglog_full,  ///< (a log|log eps| + b) / |log eps|
  inverse_log,  ///< b / |log eps|
};

/// Fits the last `last` usable rows. Degenerate when fewer than
/// (parameters + 1) rows are available.
LimitFit fit_limit(const std::vector<SweepRow>& rows, FitModel model, std::size_t last);

struct Flag {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double target = 0.0;
  LimitFit fit;
  LimitFit aux_fit;
  bool degenerate = false;
  std::vector<Flag> flags;
};

/// Recovery under F_eps for each eps. The limit is fitted with the
/// (a log|log eps| + b)/|log eps| model; the one-parameter a log|log eps| /
/// |log eps| fit is kept as aux_fit.
SweepResult run_recovery_sweep(const ExperimentConfig& cfg);

/// Piecewise-constant u under the surface-scaled functional; b/|log eps| model.
SweepResult run_surface_sweep(const ExperimentConfig& cfg);

struct ScalingCase {
  ScalingParams params;
  double target = 0.0;  ///< m_k kappa^{-1/k} alpha^{-1/(2k)}
  SweepResult jump;     ///< jump 1/kappa, value F^kappa_eps / alpha
  SweepResult bulk;     ///< u = x, target alpha kappa^2
  double gap = 0.0;     ///< (fitted - target) / target
};

struct ScalingResult {
  std::vector<ScalingCase> cases;
  std::vector<Flag> flags;
};

ScalingResult run_scaling_check(const ExperimentConfig& cfg);

struct DensityRow {
  std::string quantity;  ///< phi_N, phi_eps_N, psi, m_of_N, clamped
  double z = 0.0;
  double N = 0.0;
  double theta = 0.0;
  double value = 0.0;
  double reference = 0.0;  ///< closed form or branch data where meaningful
  double T = 0.0;
  bool converged = true;
};

struct DensityResult {
  std::vector<DensityRow> rows;
  std::vector<Flag> flags;
};

DensityResult run_density_table(const ExperimentConfig& cfg);

/// Runs of cells with |d1| above the threshold c_eps/eps (jumps) and at or
/// below it (plateaus).
struct Census {
  int plateaus = 0;
  int jumps = 0;
};

Census jump_census(const Signal& u, double threshold);

struct StaircaseRun {
  Signal minimizer;
  Signal data;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  int best_start = 0;  ///< 0 for g, J for the J-step start
  Census census;
};

/// Minimizes the surface-scaled energy plus lambda h sum (u - g)^2 from
/// each start and keeps the lowest value (ties to the earlier start).
StaircaseRun minimize_staircase(const ExperimentConfig& cfg, double eps, std::size_t nodes);

struct StaircaseRow {
  double eps = 0.0;
  StaircaseRun run;
  std::optional<StaircaseRun> refined;
};

struct StaircaseResult {
  std::vector<StaircaseRow> rows;
  std::vector<Flag> flags;
};

StaircaseResult run_staircase(const ExperimentConfig& cfg);

/// Uniform output of any experiment: CSV table plus a JSON summary
/// {schema, kind, config, fits, flags}.
struct ExperimentReport {
  ExperimentKind kind;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json fits;
  std::vector<Flag> flags;
  std::optional<Signal> signal;  ///< staircase minimizer of the first row

  bool all_pass() const;
  std::string csv() const;
  nlohmann::json summary(const ExperimentConfig& cfg) const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace gammaflow
