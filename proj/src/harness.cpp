#include "gammaflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "gammaflow/energy.hpp"
#include "gammaflow/error.hpp"
#include "gammaflow/io.hpp"
#include "gammaflow/objectives.hpp"
#include "gammaflow/profile.hpp"
#include "gammaflow/schedule.hpp"

namespace gammaflow {

using nlohmann::json;

namespace {

const char* const kKindNames[] = {"recovery_sweep", "surface_sweep", "density_table", "scaling_check", "staircase"};

std::vector<double> default_eps_list(ExperimentKind kind) {
  if (kind == ExperimentKind::staircase) return {1e-4};
  if (kind == ExperimentKind::density_table) return {};
  std::vector<double> out;
  for (int n = 4; n <= 12; ++n) out.push_back(std::pow(10.0, -n));
  return out;
}

SbvSignal default_signal(ExperimentKind kind) {
  if (kind == ExperimentKind::surface_sweep) return staircase_signal({{0.3, 1.0, 0.1}, {0.7, 4.0, 0.1}});
  return step_signal(0.5, 1.0, 0.1);
}

SbvSignal signal_of(const ExperimentConfig& cfg) { return cfg.signal ? *cfg.signal : default_signal(cfg.kind); }

std::string fmt(double x) { return format_number(x); }
std::string fmt(bool b) { return b ? "1" : "0"; }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(std::size_t x) { return std::to_string(x); }

std::string label(const ScalingParams& p) { return "alpha=" + fmt(p.alpha) + ",kappa=" + fmt(p.kappa); }

double relative_gap(double value, double target) { return (value - target) / std::abs(target); }

/// Evaluates one row per eps; rows run concurrently, failures stay local.
template <class RowFn>
std::vector<SweepRow> sweep(const std::vector<double>& eps_list, double target, const RowFn& fn) {
  std::vector<SweepRow> rows(eps_list.size());
  const auto n = static_cast<std::ptrdiff_t>(eps_list.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    SweepRow& row = rows[static_cast<std::size_t>(i)];
    row.eps = eps_list[static_cast<std::size_t>(i)];
    row.target = target;
    try {
      fn(row);
      row.residual = row.value - row.target;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  }
  return rows;
}

void fill_schedule(SweepRow& row) {
  const EpsSchedule s = make_schedule(row.eps);
  row.p_eps = s.p_eps;
  row.c_eps = s.c_eps;
}

bool rows_ok(const std::vector<SweepRow>& rows, std::string& detail) {
  for (const SweepRow& r : rows) {
    if (!r.ok) {
      detail = "eps=" + fmt(r.eps) + ": " + r.error;
      return false;
    }
  }
  return true;
}

void finish_sweep(SweepResult& res, const ExperimentConfig& cfg, FitModel model, bool want_monotone,
                  const std::string& suffix = "") {
  std::string detail;
  res.flags.push_back({"rows_ok" + suffix, rows_ok(res.rows, detail), detail});
  if (res.degenerate) {
    res.fit.degenerate = true;
    res.aux_fit.degenerate = true;
    double worst = 0.0;
    for (const SweepRow& r : res.rows) {
      if (r.ok) worst = std::max(worst, std::abs(relative_gap(r.value, r.target)));
    }
    res.flags.push_back({"rows_within_1e-3" + suffix, worst <= 1e-3, "max relative gap " + fmt(worst)});
    return;
  }
  res.fit = fit_limit(res.rows, model, cfg.fit_rows);
  if (model == FitModel::loglog_full) res.aux_fit = fit_limit(res.rows, FitModel::loglog, cfg.fit_rows);
  const double gap = res.fit.degenerate ? INFINITY : relative_gap(res.fit.limit, res.target);
  res.flags.push_back({"fitted_limit" + suffix, std::abs(gap) <= cfg.tolerance,
                       "limit " + fmt(res.fit.limit) + " target " + fmt(res.target) + " gap " + fmt(gap)});
  if (want_monotone) {
    bool mono = true;
    std::string where;
    const SweepRow* prev = nullptr;
    for (const SweepRow& r : res.rows) {
      if (!r.ok) continue;
      if (prev && !(r.residual < prev->residual)) {
        mono = false;
        where = "residual rises at eps=" + fmt(r.eps) + " (" + fmt(prev->residual) + " -> " + fmt(r.residual) + ")";
        break;
      }
      prev = &r;
    }
    res.flags.push_back({"residuals_decreasing" + suffix, mono, where});
  }
}

json fit_json(const LimitFit& f) {
  return json{{"limit", f.limit}, {"coef", f.coef}, {"rms", f.rms}, {"rows", f.rows}, {"degenerate", f.degenerate}};
}

json sweep_json(const SweepResult& r) {
  json j{{"target", r.target}, {"fit", fit_json(r.fit)}, {"degenerate", r.degenerate}};
  if (!r.degenerate) {
    j["relative_gap"] = r.fit.degenerate ? json(nullptr) : json(relative_gap(r.fit.limit, r.target));
    if (!r.aux_fit.coef.empty()) j["aux_fit"] = fit_json(r.aux_fit);
  }
  return j;
}

json budget_json(const SolverBudget& b) {
  return json{{"nodes_per_unit", b.nodes_per_unit}, {"min_intervals", b.min_intervals}, {"T_min", b.T_min},
              {"T_max", b.T_max},  {"grid_points", b.grid_points},     {"refinements", b.refinements},
              {"tol", b.options.tol}, {"max_iter", b.options.max_iter}};
}

SolverBudget budget_from_json(const json& j) {
  SolverBudget b;
  b.nodes_per_unit = j.value("nodes_per_unit", b.nodes_per_unit);
  b.min_intervals = j.value("min_intervals", b.min_intervals);
  b.T_min = j.value("T_min", b.T_min);
  b.T_max = j.value("T_max", b.T_max);
  b.grid_points = j.value("grid_points", b.grid_points);
  b.refinements = j.value("refinements", b.refinements);
  b.options.tol = j.value("tol", b.options.tol);
  b.options.max_iter = j.value("max_iter", b.options.max_iter);
  return b;
}

}  // namespace

std::string to_string(ExperimentKind kind) { return kKindNames[static_cast<int>(kind)]; }

ExperimentKind kind_from_string(const std::string& name) {
  for (int i = 0; i < 5; ++i) {
    if (name == kKindNames[i]) return static_cast<ExperimentKind>(i);
  }
  throw DomainError("unknown experiment kind '" + name + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.k < 1 || cfg.k > kMaxOrder) throw DomainError("k must lie in 1.." + std::to_string(kMaxOrder));
  for (std::size_t i = 0; i < cfg.eps_list.size(); ++i) {
    make_schedule(cfg.eps_list[i]);
    if (i > 0 && !(cfg.eps_list[i] < cfg.eps_list[i - 1])) throw DomainError("eps list must be strictly decreasing");
  }
  const bool sweep_kind = cfg.kind != ExperimentKind::density_table;
  if (sweep_kind && cfg.eps_list.empty()) throw DomainError("eps list is empty");
  if (cfg.fit_rows < 2) throw DomainError("fit_rows must be at least 2");
  if (!(cfg.tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (cfg.kind == ExperimentKind::surface_sweep && !signal_of(cfg).piecewise_constant()) {
    throw DomainError("surface sweep needs a piecewise-constant signal");
  }
  if (cfg.kind == ExperimentKind::scaling_check) {
    for (const ScalingParams& p : cfg.scaling) {
      if (!(p.alpha > 0.0) || !(p.kappa > 0.0)) throw DomainError("alpha and kappa must be positive");
    }
  }
  if (cfg.kind == ExperimentKind::density_table) {
    if (cfg.k < 2) throw DomainError("density table needs k >= 2");
    make_schedule(cfg.densities.eps);
    for (double n : cfg.densities.N) {
      if (!(n >= 1.0)) throw DomainError("N must be >= 1");
    }
    for (double t : cfg.densities.theta) {
      if (!(t > 0.0 && t < 1.0)) throw DomainError("theta must lie in (0, 1)");
    }
  }
  if (cfg.kind == ExperimentKind::staircase) {
    const StaircaseParams& s = cfg.staircase;
    if (s.nodes < static_cast<std::size_t>(cfg.k) + 2) throw DomainError("staircase grid too small");
    if (!(s.lambda > 0.0)) throw DomainError("lambda must be positive");
    if (s.data != "ramp" && s.data != "zero") throw DomainError("staircase data must be 'ramp' or 'zero'");
    if (s.max_steps < 0 || !(s.step_width > 0.0)) throw DomainError("bad staircase start parameters");
  }
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig cfg;
    cfg.kind = kind_from_string(j.at("kind").get<std::string>());
    cfg.k = j.value("k", cfg.k);
    cfg.eps_list = j.contains("eps_list") ? j.at("eps_list").get<std::vector<double>>() : default_eps_list(cfg.kind);
    if (j.contains("signal")) cfg.signal = sbv_from_json(j.at("signal"));
    if (j.contains("recovery")) {
      const json& r = j.at("recovery");
      cfg.recovery.window_nodes = r.value("window_nodes", cfg.recovery.window_nodes);
      cfg.recovery.bulk_nodes_per_unit = r.value("bulk_nodes_per_unit", cfg.recovery.bulk_nodes_per_unit);
      cfg.recovery.min_bulk_nodes = r.value("min_bulk_nodes", cfg.recovery.min_bulk_nodes);
    }
    cfg.fit_rows = j.value("fit_rows", cfg.fit_rows);
    cfg.tolerance = j.value("tolerance", cfg.tolerance);
    if (j.contains("scaling")) {
      cfg.scaling.clear();
      for (const json& p : j.at("scaling")) cfg.scaling.push_back({p.at("alpha").get<double>(), p.at("kappa").get<double>()});
    }
    cfg.bulk_tolerance = j.value("bulk_tolerance", cfg.bulk_tolerance);
    if (j.contains("densities")) {
      const json& d = j.at("densities");
      DensityGrid& g = cfg.densities;
      g.z = d.value("z", g.z);
      g.N = d.value("N", g.N);
      g.theta = d.value("theta", g.theta);
      g.eps = d.value("eps", g.eps);
      if (d.contains("budget")) g.budget = budget_from_json(d.at("budget"));
    }
    if (j.contains("staircase")) {
      const json& s = j.at("staircase");
      StaircaseParams& p = cfg.staircase;
      p.nodes = s.value("nodes", p.nodes);
      p.lambda = s.value("lambda", p.lambda);
      p.data = s.value("data", p.data);
      p.noise = s.value("noise", p.noise);
      p.seed = s.value("seed", p.seed);
      p.max_steps = s.value("max_steps", p.max_steps);
      p.step_width = s.value("step_width", p.step_width);
      p.refine_check = s.value("refine_check", p.refine_check);
      p.options.tol = s.value("tol", p.options.tol);
      p.options.max_iter = s.value("max_iter", p.options.max_iter);
    }
    if (j.contains("output")) {
      cfg.csv_path = j.at("output").value("csv", std::string());
      cfg.json_path = j.at("output").value("json", std::string());
    }
    validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed config: ") + e.what());
  }
}

json to_json(const ExperimentConfig& cfg) {
  json j{{"kind", to_string(cfg.kind)}, {"k", cfg.k}, {"eps_list", cfg.eps_list}};
  switch (cfg.kind) {
    case ExperimentKind::recovery_sweep:
    case ExperimentKind::surface_sweep:
      j["signal"] = to_json(signal_of(cfg));
      [[fallthrough]];
    case ExperimentKind::scaling_check:
      j["recovery"] = {{"window_nodes", cfg.recovery.window_nodes},
                       {"bulk_nodes_per_unit", cfg.recovery.bulk_nodes_per_unit},
                       {"min_bulk_nodes", cfg.recovery.min_bulk_nodes}};
      j["fit_rows"] = cfg.fit_rows;
      j["tolerance"] = cfg.tolerance;
      if (cfg.kind == ExperimentKind::scaling_check) {
        json s = json::array();
        for (const ScalingParams& p : cfg.scaling) s.push_back({{"alpha", p.alpha}, {"kappa", p.kappa}});
        j["scaling"] = s;
        j["bulk_tolerance"] = cfg.bulk_tolerance;
      }
      break;
    case ExperimentKind::density_table: {
      const DensityGrid& g = cfg.densities;
      j["densities"] = {{"z", g.z}, {"N", g.N}, {"theta", g.theta}, {"eps", g.eps}, {"budget", budget_json(g.budget)}};
      break;
    }
    case ExperimentKind::staircase: {
      const StaircaseParams& p = cfg.staircase;
      j["staircase"] = {{"nodes", p.nodes},           {"lambda", p.lambda},
                        {"data", p.data},             {"noise", p.noise},
                        {"seed", p.seed},             {"max_steps", p.max_steps},
                        {"step_width", p.step_width}, {"refine_check", p.refine_check},
                        {"tol", p.options.tol},       {"max_iter", p.options.max_iter}};
      break;
    }
  }
  return j;
}

LimitFit fit_limit(const std::vector<SweepRow>& rows, FitModel model, std::size_t last) {
  std::vector<const SweepRow*> use;
  for (const SweepRow& r : rows) {
    if (r.ok) use.push_back(&r);
  }
  if (use.size() > last) use.erase(use.begin(), use.end() - static_cast<std::ptrdiff_t>(last));
  const int params = model == FitModel::loglog_full ? 3 : 2;
  LimitFit fit;
  fit.rows = use.size();
  if (use.size() < static_cast<std::size_t>(params) + 1) {
    fit.degenerate = true;
    return fit;
  }
  Eigen::MatrixXd A(use.size(), params);
  Eigen::VectorXd b(use.size());
  for (std::size_t i = 0; i < use.size(); ++i) {
    const double L = std::abs(std::log(use[i]->eps));
    const auto row = static_cast<Eigen::Index>(i);
    A(row, 0) = 1.0;
    switch (model) {
      case FitModel::loglog:
        A(row, 1) = std::log(L) / L;
        break;
      case FitModel::loglog_full:
        A(row, 1) = std::log(L) / L;
        A(row, 2) = 1.0 / L;
        break;
      case FitModel::inverse_log:
        A(row, 1) = 1.0 / L;
        break;
    }
    b(row) = use[i]->value;
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  fit.limit = x(0);
  for (int c = 1; c < params; ++c) fit.coef.push_back(x(c));
  fit.rms = std::sqrt((A * x - b).squaredNorm() / static_cast<double>(use.size()));
  return fit;
}

SweepResult run_recovery_sweep(const ExperimentConfig& cfg) {
  const SbvSignal u = signal_of(cfg);
  const OptimalProfile& prof = m_const(cfg.k);
  SweepResult res;
  res.target = limit_energy(u, cfg.k);
  res.degenerate = u.jumps().empty();
  res.rows = sweep(cfg.eps_list, res.target, [&](SweepRow& row) {
    fill_schedule(row);
    const EpsSchedule s = make_schedule(row.eps);
    const CompositeSignal r = build_recovery(u, s, prof, cfg.recovery);
    const EnergyParts parts = evaluate(perona_malik_density(s, cfg.k), r);
    row.value = parts.total();
    row.bulk = parts.bulk;
    row.penalty = parts.penalty;
    row.l1 = l1_distance(r, u);
  });
  finish_sweep(res, cfg, FitModel::loglog_full, true);
  return res;
}

SweepResult run_surface_sweep(const ExperimentConfig& cfg) {
  const SbvSignal u = signal_of(cfg);
  const OptimalProfile& prof = m_const(cfg.k);
  SweepResult res;
  res.target = surface_limit_energy(u, cfg.k);
  res.degenerate = u.jumps().empty();
  res.rows = sweep(cfg.eps_list, res.target, [&](SweepRow& row) {
    fill_schedule(row);
    const CompositeSignal r = build_recovery_surface(u, row.eps, prof, cfg.recovery);
    const EnergyParts parts = evaluate(surface_scaled_density(row.eps, cfg.k), r);
    row.value = parts.total();
    row.bulk = parts.bulk;
    row.penalty = parts.penalty;
    row.l1 = l1_distance(r, u);
  });
  finish_sweep(res, cfg, FitModel::inverse_log, false);
  return res;
}

ScalingResult run_scaling_check(const ExperimentConfig& cfg) {
  const int k = cfg.k;
  const OptimalProfile& prof = m_const(k);
  ScalingResult out;
  for (const ScalingParams& p : cfg.scaling) {
    ScalingCase c;
    c.params = p;
    c.target = m_scaled(k, p);

    // In v = kappa u the jump 1/kappa is a unit jump whose transition has
    // penalty weight 1/(alpha kappa^2).
    const SbvSignal jump = step_signal(0.5, 1.0 / p.kappa, 0.1);
    RecoveryOptions opt = cfg.recovery;
    opt.profile_length = weighted_optimum(k, 1.0 / (p.alpha * p.kappa * p.kappa)).T;
    opt.jump_scale = p.kappa;
    c.jump.target = c.target;
    c.jump.rows = sweep(cfg.eps_list, c.target, [&](SweepRow& row) {
      fill_schedule(row);
      const EpsSchedule s = make_schedule(row.eps);
      const CompositeSignal r = build_recovery(jump, s, prof, opt);
      const EnergyParts parts = evaluate(weighted_perona_malik_density(s, k, p), r);
      row.value = parts.total() / p.alpha;
      row.bulk = parts.bulk / p.alpha;
      row.penalty = parts.penalty / p.alpha;
      row.l1 = l1_distance(r, jump);
    });
    finish_sweep(c.jump, cfg, FitModel::loglog_full, false, "[" + label(p) + "]");
    c.gap = c.jump.fit.degenerate ? INFINITY : relative_gap(c.jump.fit.limit, c.target);

    const SbvSignal ramp = affine_signal(0.0, 1.0);
    c.bulk.target = p.alpha * p.kappa * p.kappa;
    c.bulk.degenerate = true;
    c.bulk.rows = sweep(cfg.eps_list, c.bulk.target, [&](SweepRow& row) {
      fill_schedule(row);
      const EpsSchedule s = make_schedule(row.eps);
      const CompositeSignal r = build_recovery(ramp, s, prof, cfg.recovery);
      const EnergyParts parts = evaluate(weighted_perona_malik_density(s, k, p), r);
      row.value = parts.total();
      row.bulk = parts.bulk;
      row.penalty = parts.penalty;
      row.l1 = l1_distance(r, ramp);
    });
    double worst = 0.0;
    for (const SweepRow& r : c.bulk.rows) {
      if (r.ok) worst = std::max(worst, std::abs(relative_gap(r.value, r.target)));
    }
    std::string detail;
    const bool ok = rows_ok(c.bulk.rows, detail);
    c.bulk.flags.push_back({"bulk_coefficient[" + label(p) + "]", ok && worst <= cfg.bulk_tolerance,
                            ok ? "max relative gap " + fmt(worst) : detail});

    for (const auto* f : {&c.jump.flags, &c.bulk.flags}) out.flags.insert(out.flags.end(), f->begin(), f->end());
    out.cases.push_back(std::move(c));
  }
  return out;
}

DensityResult run_density_table(const ExperimentConfig& cfg) {
  const DensityGrid& g = cfg.densities;
  const int k = cfg.k;
  const double mk = m_const(k).m_k;
  const EpsSchedule s = make_schedule(g.eps);
  DensityResult out;
  auto closed = [&](double z) { return mk * std::pow(std::abs(z), 1.0 / k); };

  std::vector<double> Ns = g.N;
  std::sort(Ns.begin(), Ns.end());
  std::vector<double> zs = g.z;
  std::sort(zs.begin(), zs.end());

  const std::size_t nz = zs.size();
  const std::size_t nN = Ns.size();
  std::vector<DensityValue> phi(nz * nN);
  std::vector<DensityValue> phi_eps(nz * nN);
  bool all_converged = true;

  for (std::size_t iz = 0; iz < nz; ++iz) {
    const double z = zs[iz];
    const DensityValue c = phi_N(z, {kUnbounded, 0.5, k}, g.budget);
    out.rows.push_back({"clamped", z, kUnbounded, 0.0, c.value, closed(z), c.T, c.converged});
    all_converged = all_converged && c.converged;
    const double gap = std::abs(relative_gap(c.value, closed(z)));
    out.flags.push_back({"clamped_closed_form[z=" + fmt(z) + "]", gap <= 1e-3, "relative gap " + fmt(gap)});
  }
  for (std::size_t iN = 0; iN < nN; ++iN) {
    const DensityValue m = m_of_N({Ns[iN], 0.5, k}, g.budget);
    out.rows.push_back({"m_of_N", 1.0, Ns[iN], 0.0, m.value, mk, m.T, m.converged});
    all_converged = all_converged && m.converged;
  }
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (std::size_t iN = 0; iN < nN; ++iN) {
      const double z = zs[iz];
      const DensityParams d{Ns[iN], 0.5, k};
      DensityValue& a = phi[iz * nN + iN];
      DensityValue& b = phi_eps[iz * nN + iN];
      a = phi_N(z, d, g.budget);
      b = phi_eps_N(z, s, d, g.budget);
      out.rows.push_back({"phi_N", z, Ns[iN], 0.0, a.value, closed(z), a.T, a.converged});
      out.rows.push_back({"phi_eps_N", z, Ns[iN], 0.0, b.value, closed(z), b.T, b.converged});
      all_converged = all_converged && a.converged && b.converged;
    }
  }

  bool mono = true, envelope = true, scaling = true, psi_ok = true;
  std::string mono_d, env_d, sc_d, psi_d;
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (std::size_t iN = 0; iN < nN; ++iN) {
      const double v = phi[iz * nN + iN].value;
      if (iN > 0 && v < phi[iz * nN + iN - 1].value - 2e-3 && mono) {
        mono = false;
        mono_d = "z=" + fmt(zs[iz]) + " N=" + fmt(Ns[iN]);
      }
      if (v > closed(zs[iz]) + 1e-3 && envelope) {
        envelope = false;
        env_d = "z=" + fmt(zs[iz]) + " N=" + fmt(Ns[iN]) + " value " + fmt(v);
      }
      for (std::size_t jz = iz + 1; jz < nz; ++jz) {
        if (!(zs[iz] > 0.0 && zs[jz] > zs[iz])) continue;
        const double lhs = phi[jz * nN + iN].value;
        const double rhs = zs[jz] / zs[iz] * v + 1e-3;
        if (lhs > rhs && scaling) {
          scaling = false;
          sc_d = "z=" + fmt(zs[iz]) + " z'=" + fmt(zs[jz]) + " N=" + fmt(Ns[iN]);
        }
      }
      for (double theta : g.theta) {
        if (theta * Ns[iN] < 1.0) continue;
        const PsiValue p = psi_theta_N(zs[iz], {Ns[iN], theta, k}, g.budget);
        const double ref = phi_eps[iz * nN + iN].value;
        out.rows.push_back({"psi", zs[iz], Ns[iN], theta, p.value, ref, 0.0, p.converged});
        all_converged = all_converged && p.converged;
        if (p.value > ref + 2e-3 && psi_ok) {
          psi_ok = false;
          psi_d = "z=" + fmt(zs[iz]) + " N=" + fmt(Ns[iN]) + " theta=" + fmt(theta) + ": " + fmt(p.value) + " > " +
                  fmt(ref);
        }
      }
    }
  }
  out.flags.push_back({"phi_N_monotone_in_N", mono, mono_d});
  out.flags.push_back({"phi_N_below_envelope", envelope, env_d});
  out.flags.push_back({"phi_N_scaling_inequality", scaling, sc_d});
  out.flags.push_back({"psi_below_phi_eps_N", psi_ok, psi_d});
  out.flags.push_back({"solver_converged", all_converged, ""});
  return out;
}

Census jump_census(const Signal& u, double threshold) {
  Census c;
  const double h = u.grid.h();
  int state = -1;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const int above = std::abs(u.values[i + 1] - u.values[i]) / h > threshold ? 1 : 0;
    if (above != state) {
      (above ? c.jumps : c.plateaus) += 1;
      state = above;
    }
  }
  return c;
}

StaircaseRun minimize_staircase(const ExperimentConfig& cfg, double eps, std::size_t nodes) {
  const StaircaseParams& sp = cfg.staircase;
  const Grid1D grid = Grid1D::unit(nodes);
  std::vector<double> data(nodes, 0.0);
  if (sp.data == "ramp") {
    for (std::size_t i = 0; i < nodes; ++i) data[i] = grid.x(i);
  }
  if (sp.noise > 0.0) {
    std::mt19937_64 rng(sp.seed);
    std::uniform_real_distribution<double> dist(-sp.noise, sp.noise);
    for (double& v : data) v += dist(rng);
  }
  NodeEnergy energy(surface_scaled_density(eps, cfg.k), grid);
  energy.set_fidelity(sp.lambda, data);

  const auto [lo_it, hi_it] = std::minmax_element(data.begin(), data.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  const int starts = range > 0.0 ? sp.max_steps + 1 : 1;
  const RationalPolynomial& prof = m_const(cfg.k).unit_poly;

  std::vector<MinimizeResult> results(static_cast<std::size_t>(starts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int J = 0; J < starts; ++J) {
    std::vector<double> init = data;
    if (J > 0) {
      for (std::size_t i = 0; i < nodes; ++i) {
        double v = 0.5 / J;
        for (int j = 1; j < J; ++j) {
          const double s = (grid.x(i) - static_cast<double>(j) / J) / sp.step_width + 0.5;
          v += (s <= 0.0 ? 0.0 : s >= 1.0 ? 1.0 : prof.eval(s)) / J;
        }
        init[i] = lo + range * v;
      }
    }
    results[static_cast<std::size_t>(J)] = minimize(energy, {}, std::move(init), sp.options);
  }

  int best = 0;
  for (int J = 1; J < starts; ++J) {
    if (results[static_cast<std::size_t>(J)].value < results[static_cast<std::size_t>(best)].value) best = J;
  }
  MinimizeResult& r = results[static_cast<std::size_t>(best)];
  StaircaseRun run;
  run.value = r.value;
  run.converged = r.converged;
  run.iterations = r.iterations;
  run.best_start = best;
  run.minimizer = Signal(grid, std::move(r.x));
  run.data = Signal(grid, std::move(data));
  run.census = jump_census(run.minimizer, make_schedule(eps).threshold());
  return run;
}

StaircaseResult run_staircase(const ExperimentConfig& cfg) {
  StaircaseResult out;
  bool converged = true;
  bool stable = true;
  std::string stable_d;
  for (double eps : cfg.eps_list) {
    StaircaseRow row;
    row.eps = eps;
    row.run = minimize_staircase(cfg, eps, cfg.staircase.nodes);
    converged = converged && row.run.converged;
    if (cfg.staircase.refine_check) {
      row.refined = minimize_staircase(cfg, eps, 2 * cfg.staircase.nodes - 1);
      converged = converged && row.refined->converged;
      if (row.refined->census.plateaus != row.run.census.plateaus && stable) {
        stable = false;
        stable_d = "eps=" + fmt(eps) + ": " + fmt(row.run.census.plateaus) + " vs " +
                   fmt(row.refined->census.plateaus) + " plateaus";
      }
    }
    out.rows.push_back(std::move(row));
  }
  out.flags.push_back({"converged", converged, ""});
  if (cfg.staircase.refine_check) out.flags.push_back({"census_refinement_stable", stable, stable_d});
  return out;
}

bool ExperimentReport::all_pass() const {
  return std::all_of(flags.begin(), flags.end(), [](const Flag& f) { return f.pass; });
}

std::string ExperimentReport::csv() const {
  std::ostringstream ss;
  CsvWriter w(ss);
  w.row(header);
  for (const auto& r : rows) w.row(r);
  return ss.str();
}

json ExperimentReport::summary(const ExperimentConfig& cfg) const {
  json f = json::array();
  for (const Flag& x : flags) f.push_back({{"name", x.name}, {"pass", x.pass}, {"detail", x.detail}});
  return json{{"schema", 1}, {"kind", to_string(kind)}, {"config", to_json(cfg)},
              {"fits", fits},  {"flags", f},               {"pass", all_pass()}};
}

namespace {

const std::vector<std::string> kSweepHeader = {"eps",     "p_eps",  "c_eps",    "value", "bulk", "penalty",
                                               "target",  "residual", "l1",     "ok",    "error"};

std::vector<std::string> sweep_cells(const SweepRow& r) {
  return {fmt(r.eps),    fmt(r.p_eps),    fmt(r.c_eps), fmt(r.value), fmt(r.bulk), fmt(r.penalty),
          fmt(r.target), fmt(r.residual), fmt(r.l1),    fmt(r.ok),    r.error};
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentReport rep{cfg.kind, {}, {}, json::object(), {}, std::nullopt};
  switch (cfg.kind) {
    case ExperimentKind::recovery_sweep:
    case ExperimentKind::surface_sweep: {
      const SweepResult res =
          cfg.kind == ExperimentKind::recovery_sweep ? run_recovery_sweep(cfg) : run_surface_sweep(cfg);
      rep.header = kSweepHeader;
      for (const SweepRow& r : res.rows) rep.rows.push_back(sweep_cells(r));
      rep.fits = sweep_json(res);
      rep.flags = res.flags;
      break;
    }
    case ExperimentKind::scaling_check: {
      const ScalingResult res = run_scaling_check(cfg);
      rep.header = {"alpha", "kappa", "case"};
      rep.header.insert(rep.header.end(), kSweepHeader.begin(), kSweepHeader.end());
      rep.fits = json::array();
      for (const ScalingCase& c : res.cases) {
        for (const auto& [name, sw] : {std::pair{"jump", &c.jump}, std::pair{"bulk", &c.bulk}}) {
          for (const SweepRow& r : sw->rows) {
            std::vector<std::string> cells{fmt(c.params.alpha), fmt(c.params.kappa), name};
            const auto rest = sweep_cells(r);
            cells.insert(cells.end(), rest.begin(), rest.end());
            rep.rows.push_back(std::move(cells));
          }
        }
        json j = sweep_json(c.jump);
        j["alpha"] = c.params.alpha;
        j["kappa"] = c.params.kappa;
        j["bulk_target"] = c.bulk.target;
        rep.fits.push_back(j);
      }
      rep.flags = res.flags;
      break;
    }
    case ExperimentKind::density_table: {
      const DensityResult res = run_density_table(cfg);
      rep.header = {"quantity", "z", "N", "theta", "value", "reference", "T", "converged"};
      for (const DensityRow& r : res.rows) {
        rep.rows.push_back({r.quantity, fmt(r.z), std::isinf(r.N) ? "inf" : fmt(r.N), fmt(r.theta), fmt(r.value),
                            fmt(r.reference), fmt(r.T), fmt(r.converged)});
      }
      rep.fits = json{{"m_k", m_const(cfg.k).m_k}, {"rows", res.rows.size()}};
      rep.flags = res.flags;
      break;
    }
    case ExperimentKind::staircase: {
      const StaircaseResult res = run_staircase(cfg);
      rep.header = {"eps",           "nodes",       "lambda",          "best_start",          "value",
                    "converged",     "iterations",  "plateaus",        "jumps",               "refined_nodes",
                    "refined_start", "refined_value", "refined_plateaus", "refined_jumps"};
      rep.fits = json::array();
      for (const StaircaseRow& r : res.rows) {
        std::vector<std::string> cells{fmt(r.eps),          fmt(r.run.minimizer.size()), fmt(cfg.staircase.lambda),
                                       fmt(r.run.best_start), fmt(r.run.value),          fmt(r.run.converged),
                                       fmt(r.run.iterations), fmt(r.run.census.plateaus), fmt(r.run.census.jumps)};
        json j{{"eps", r.eps}, {"plateaus", r.run.census.plateaus}, {"jumps", r.run.census.jumps},
               {"value", r.run.value}};
        if (r.refined) {
          const StaircaseRun& f = *r.refined;
          for (auto&& c : {fmt(f.minimizer.size()), fmt(f.best_start), fmt(f.value), fmt(f.census.plateaus),
                           fmt(f.census.jumps)}) {
            cells.push_back(c);
          }
          j["refined"] = {{"plateaus", f.census.plateaus}, {"jumps", f.census.jumps}, {"value", f.value}};
        } else {
          cells.insert(cells.end(), 5, "");
        }
        rep.rows.push_back(std::move(cells));
        rep.fits.push_back(j);
      }
      if (!res.rows.empty()) rep.signal = res.rows.front().run.minimizer;
      rep.flags = res.flags;
      break;
    }
  }
  return rep;
}

}  // namespace gammaflow
