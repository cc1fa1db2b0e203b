#include <cmath>

#include "doctest.h"

#include "gammaflow/error.hpp"
#include "gammaflow/harness.hpp"
#include "gammaflow/profile.hpp"

using namespace gammaflow;
using nlohmann::json;

TEST_SUITE("harness") {

TEST_CASE("config parsing and validation") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"kind": "nope"})")), DomainError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"kind": "recovery_sweep", "eps_list": [1e-6, 1e-4]})")),
                  DomainError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"kind": "recovery_sweep", "eps_list": [1e-4, 1e-4]})")),
                  DomainError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"kind": "recovery_sweep", "eps_list": [0.5]})")), DomainError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"kind": "recovery_sweep", "k": 0})")), DomainError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"kind": "recovery_sweep", "k": "two"})")), DomainError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"kind": "staircase", "staircase": {"lambda": -1}})")),
                  DomainError);
  const ExperimentConfig c = config_from_json(json::parse(R"({"kind": "surface_sweep", "k": 3})"));
  CHECK(c.eps_list.size() == 9);
  CHECK(c.k == 3);
  // Round trip through the normalized form.
  const ExperimentConfig d = config_from_json(to_json(c));
  CHECK(to_json(d) == to_json(c));
}

TEST_CASE("limit fits recover synthetic limits exactly") {
  std::vector<SweepRow> rows;
  for (int n = 4; n <= 12; ++n) {
    SweepRow r;
    r.eps = std::pow(10.0, -n);
    const double L = std::abs(std::log(r.eps));
    r.value = 3.0 + (0.7 * std::log(L) - 1.3) / L;
    rows.push_back(r);
  }
  const LimitFit full = fit_limit(rows, FitModel::loglog_full, 5);
  CHECK(full.limit == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(full.coef[0] == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(full.coef[1] == doctest::Approx(-1.3).epsilon(1e-8));
  CHECK(full.rows == 5);
  rows[8].ok = false;  // failed rows are skipped
  CHECK(fit_limit(rows, FitModel::loglog_full, 5).limit == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit_limit(rows, FitModel::loglog_full, 3).degenerate);
  for (SweepRow& r : rows) r.value = 2.0 + 0.5 / std::abs(std::log(r.eps));
  CHECK(fit_limit(rows, FitModel::inverse_log, 5).limit == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("unit jump, k = 1") {
  ExperimentConfig c = config_from_json(json::parse(R"({"kind": "recovery_sweep", "k": 1})"));
  const SweepResult r = run_recovery_sweep(c);
  CHECK(r.rows.size() == 9);
  for (const SweepRow& row : r.rows) CHECK(row.residual == row.value - row.target);
  CHECK(std::abs(r.fit.limit - 2.0) <= 0.02 * 2.0);
  for (const Flag& f : r.flags) CHECK_MESSAGE(f.pass, f.name);
}

TEST_CASE("affine signal: bulk rows and a degenerate fit") {
  ExperimentConfig c = config_from_json(json::parse(R"({"kind": "recovery_sweep", "k": 2})"));
  c.signal = affine_signal(0.0, 1.0);
  const SweepResult r = run_recovery_sweep(c);
  CHECK(r.degenerate);
  CHECK(r.fit.degenerate);
  for (const SweepRow& row : r.rows) CHECK(std::abs(row.value - 1.0) <= 1e-3);
  const ExperimentReport rep = run_experiment(c);
  CHECK(rep.all_pass());
  CHECK(rep.summary(c)["fits"]["degenerate"] == true);
}

TEST_CASE("failed rows are recorded, not fatal") {
  ExperimentConfig c = config_from_json(json::parse(R"({"kind": "recovery_sweep", "k": 2})"));
  c.signal = step_signal(0.5, 1.0, 1e-5);  // window wider than the plateau at eps = 1e-4
  const SweepResult r = run_recovery_sweep(c);
  CHECK_FALSE(r.rows.front().ok);
  CHECK(r.rows.back().ok);
  CHECK_FALSE(r.flags.front().pass);
}

TEST_CASE("surface sweep") {
  const ExperimentConfig c = config_from_json(json::parse(R"({"kind": "surface_sweep", "k": 2})"));
  const SweepResult r = run_surface_sweep(c);
  CHECK(r.target == doctest::Approx(3.0 * m_const(2).m_k));
  CHECK(std::abs(r.fit.limit - r.target) <= 0.03 * r.target);
}

TEST_CASE("jump census") {
  const Grid1D g = Grid1D::unit(11);
  Signal u(g, {0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2});
  const Census c = jump_census(u, 5.0);
  CHECK(c.plateaus == 3);
  CHECK(c.jumps == 2);
  const Census flat = jump_census(Signal(g, std::vector<double>(11, 1.0)), 5.0);
  CHECK(flat.plateaus == 1);
  CHECK(flat.jumps == 0);
}

TEST_CASE("staircase: zero data and the large-fidelity limit") {
  ExperimentConfig c = config_from_json(json::parse(R"({"kind": "staircase", "k": 2,
      "staircase": {"nodes": 401, "data": "zero", "refine_check": false}})"));
  const StaircaseRun z = minimize_staircase(c, 1e-4, 401);
  CHECK(z.value == 0.0);
  for (double v : z.minimizer.values) CHECK(v == 0.0);

  c.staircase.data = "ramp";
  c.staircase.lambda = 1e9;
  c.staircase.max_steps = 0;
  const StaircaseRun f = minimize_staircase(c, 1e-4, 401);
  double sup = 0.0;
  for (std::size_t i = 0; i < 401; ++i) sup = std::max(sup, std::abs(f.minimizer.values[i] - f.data.values[i]));
  CHECK(sup <= 1e-3);
}

TEST_CASE("staircase regression snapshot") {
  const ExperimentConfig c = config_from_json(json::parse(R"({"kind": "staircase", "k": 2})"));
  const StaircaseResult r = run_staircase(c);
  REQUIRE(r.rows.size() == 1);
  const StaircaseRow& row = r.rows.front();
  CHECK(row.run.converged);
  CHECK(row.run.census.plateaus >= 2);
  REQUIRE(row.refined);
  CHECK(row.refined->census.plateaus == row.run.census.plateaus);
  // Recorded values (1001 / 2001 nodes, eps = 1e-4, lambda = 1e3).
  CHECK(row.run.census.plateaus == 3);
  CHECK(row.run.value == doctest::Approx(21.66013586279361).epsilon(1e-9));
  CHECK(row.refined->value == doctest::Approx(16.12748874838661).epsilon(1e-9));
}

TEST_CASE("report layout") {
  ExperimentConfig c = config_from_json(json::parse(R"({"kind": "recovery_sweep", "k": 1,
      "eps_list": [1e-4, 1e-5, 1e-6, 1e-7]})"));
  const ExperimentReport rep = run_experiment(c);
  CHECK(rep.rows.size() == 4);
  const std::string csv = rep.csv();
  CHECK(csv.rfind("eps,p_eps,c_eps,value,bulk,penalty,target,residual,l1,ok,error\r\n", 0) == 0);
  const json s = rep.summary(c);
  CHECK(s["schema"] == 1);
  CHECK(s["kind"] == "recovery_sweep");
  CHECK(s["config"]["eps_list"].size() == 4);
  CHECK(s.contains("fits"));
  CHECK(s.contains("flags"));
}

}
