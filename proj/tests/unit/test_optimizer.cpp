// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "constants.hpp"
#include "errors.hpp"
#include "optimizer.hpp"
#include "steering.hpp"

using namespace lcris;

namespace {

const double kF = 60e9;
const double kD = 0.45 * wavelength(kF);

ElementModel calibrated_model() {
  ElementModel m;
  m.line = calibrate_line(500.0, kF, m.material, m.stack);
  m.radiator.f0 = kF;
  return m;
}

struct Setup {
  ApertureLayout layout;
  ToleranceField field;
  ElementModel model = calibrated_model();
  OptimizationProblem problem;
  std::vector<double> design;  // per element, from the uniform-thickness assumption

  Setup(ApertureLayout l, ToleranceField f, double theta_r, bool columns)
      : layout(std::move(l)), field(std::move(f)) {
    problem.layout = &layout;
    problem.field = &field;
    problem.model = &model;
    problem.wave = PlaneWave{0, 0, kF, 1};
    problem.target = {theta_r, 0};
    const auto prof = synthesize_profile(layout, problem.target, problem.wave, 360.0,
                                         {.wrap = true, .column_constrained = columns});
    design = phases_to_voltages(prof, model, std::vector<double>(layout.size(), field.t_nom));
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("objective on the uniform field reaches the coherent bound") {
  auto l = build_layout(12, 10, kD, kD, GridKind::triangular);
  Setup s(l, uniform_field(l, 4.6e-6), 30.0, false);
  const std::vector<double> f{kF};
  const auto states = element_states(s.model, s.design, s.field, f);
  double bound = 0.0;
  for (const auto& st : states) bound += std::abs(st.gamma[0]);
  bound *= element_pattern(30.0, 0.0, 0.5);
  CHECK(std::abs(objective_power(s.problem, s.design) - 20 * std::log10(bound)) < 0.1);

  // Equal voltages toward broadside sum in phase.
  s.problem.target = {0, 0};
  const std::vector<double> flat(l.size(), 7.0);
  const auto fs = element_states(s.model, flat, s.field, f);
  cplx sum{};
  for (const auto& st : fs) sum += st.gamma[0];
  CHECK(objective_power(s.problem, flat) == doctest::Approx(20 * std::log10(std::abs(sum))).epsilon(1e-12));
  CHECK_THROWS_AS(objective_power(s.problem, std::vector<double>(l.size(), 21.0)), DomainError);
  CHECK_THROWS_AS(objective_power(s.problem, std::vector<double>(3, 1.0)), DomainError);
}

TEST_CASE("column symmetry of the objective") {
  auto l = build_layout(6, 5, kD, kD, GridKind::rectangular);
  auto field = random_field(l, 4.6e-6, 0.4e-6, 3e-3, 8);
  Setup a(l, field, 25.0, true);
  // Swap thickness values between two elements of column 2.
  const auto grp = column_groups(l)[2];
  std::swap(field.t_lc_per_element[grp[0]], field.t_lc_per_element[grp[4]]);
  Setup b(l, field, 25.0, true);
  const auto v = expand_columns(l, collapse_to_columns(l, a.design));
  CHECK(objective_power(a.problem, v) == doctest::Approx(objective_power(b.problem, v)).epsilon(1e-12));
}

TEST_CASE("column helpers") {
  const auto l = build_layout(3, 4, kD, kD, GridKind::triangular);
  const std::vector<double> cols{1, 2, 3, 4};
  const auto e = expand_columns(l, cols);
  for (std::size_t n = 0; n < l.size(); ++n) CHECK(e[n] == cols[l.column_of(n)]);
  CHECK(collapse_to_columns(l, e) == cols);
  CHECK_THROWS_AS(expand_columns(l, std::vector<double>{1, 2}), DomainError);
}

TEST_CASE("ascent is monotone and deterministic") {
  auto l = build_layout(12, 10, kD, kD, GridKind::triangular);
  Setup s(l, random_field(l, 4.6e-6, 0.5e-6, 3e-3, 3), 30.0, true);
  const auto init = collapse_to_columns(l, s.design);
  OptimizerSettings opt;
  opt.seed = 17;
  const auto r = optimize_columns(s.problem, init, opt);
  CHECK(r.final_power_db >= r.initial_power_db);
  CHECK(r.improvement_db == r.final_power_db - r.initial_power_db);
  CHECK(r.evaluations >= r.iterations);
  CHECK(r.voltages.size() == 10);
  CHECK(r.seed == 17);
  CHECK(r.converged);
  for (std::size_t i = 1; i < r.log.size(); ++i) CHECK(r.log[i].power_db >= r.log[i - 1].power_db);
  CHECK(objective_power(s.problem, expand_columns(l, r.voltages)) == doctest::Approx(r.final_power_db).epsilon(1e-9));

  const auto again = optimize_columns(s.problem, init, opt);
  CHECK(again.voltages == r.voltages);
  CHECK(again.final_power_db == r.final_power_db);
  CHECK(again.evaluations == r.evaluations);

  std::ostringstream txt, csv;
  r.write_text(txt);
  r.write_log_csv(csv);
  CHECK(txt.str().find("improvement_db: ") != std::string::npos);
  CHECK(csv.str().rfind("sweep,column,voltage,power_db\n", 0) == 0);
}

TEST_CASE("budget handling") {
  auto l = build_layout(4, 5, kD, kD, GridKind::triangular);
  Setup s(l, random_field(l, 4.6e-6, 0.5e-6, 3e-3, 2), 20.0, true);
  const auto init = collapse_to_columns(l, s.design);
  OptimizerSettings opt;
  const std::size_t sweep = evaluations_per_coordinate(opt) * 5;
  opt.budget = sweep - 1;
  try {
    optimize_columns(s.problem, init, opt);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find(std::to_string(sweep)) != std::string::npos);
  }
  // Exactly one sweep of budget leaves no room to confirm convergence.
  opt.budget = sweep;
  opt.sweep_tol_db = -1.0;
  const auto r = optimize_columns(s.problem, init, opt);
  CHECK_FALSE(r.converged);
  CHECK(r.evaluations <= opt.budget);
}

TEST_CASE("uniform thickness leaves little to gain") {
  auto l = build_layout(12, 10, kD, kD, GridKind::triangular);
  Setup s(l, uniform_field(l, 4.6e-6), 30.0, true);
  const auto tri = optimize_columns(s.problem, collapse_to_columns(l, s.design));
  CHECK(tri.improvement_db <= 0.5);
  CHECK(tri.improvement_db >= 0.0);
  // Columns on a rectangular grid share x, so per-element freedom has nothing to add.
  auto r = build_layout(12, 10, kD, kD, GridKind::rectangular);
  Setup q(r, uniform_field(r, 4.6e-6), 30.0, true);
  const auto col = optimize_columns(q.problem, collapse_to_columns(r, q.design));
  CHECK(col.improvement_db <= 0.5);
  const auto el = optimize_elements(q.problem, expand_columns(r, col.voltages));
  CHECK(std::abs(el.final_power_db - col.final_power_db) < 0.2);
}

TEST_CASE("element-wise search dominates column-wise search") {
  auto l = build_layout(8, 6, kD, kD, GridKind::triangular);
  Setup s(l, random_field(l, 4.6e-6, 0.5e-6, 3e-3, 5), 30.0, true);
  const auto col = optimize_columns(s.problem, collapse_to_columns(l, s.design));
  const auto el = optimize_elements(s.problem, s.design);
  CHECK(el.final_power_db >= col.final_power_db - 1e-9);
}

TEST_CASE("single element recovers the best voltage") {
  auto l = build_layout(1, 1, kD, kD, GridKind::rectangular);
  Setup s(l, uniform_field(l, 4.6e-6), 10.0, false);
  const auto r = optimize_elements(s.problem, std::vector<double>{5.0});
  double best_v = 0.0, best = -1e300;
  for (double v = 0.0; v <= 20.0 + 1e-12; v += 0.001) {
    const double p = objective_power(s.problem, std::vector<double>{v});
    if (p > best) {
      best = p;
      best_v = v;
    }
  }
  CHECK(std::abs(r.voltages[0] - best_v) <= 0.05);
}

TEST_CASE("improvement grows with disorder") {
  auto l = build_layout(12, 10, kD, kD, GridKind::triangular);
  std::vector<double> medians;
  for (double sigma : {0.0, 0.2e-6, 0.5e-6}) {
    std::vector<double> gains;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Setup s(l, random_field(l, 4.6e-6, sigma, 3e-3, seed), 30.0, true);
      const auto r = optimize_columns(s.problem, collapse_to_columns(l, s.design));
      CHECK(r.improvement_db >= 0.0);
      gains.push_back(r.improvement_db);
    }
    medians.push_back(median(gains));
  }
  CHECK(medians[0] <= medians[1]);
  CHECK(medians[1] <= medians[2]);
}
