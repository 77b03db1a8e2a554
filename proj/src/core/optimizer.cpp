// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "optimizer.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "constants.hpp"
#include "errors.hpp"

namespace lcris {

void OptimizationProblem::validate() const {
  if (!layout || !field || !model) throw DomainError("optimization problem is missing layout, field or model");
  if (field->size() != layout->size())
    throw DomainError(fmt::format("thickness field has {} values for {} elements", field->size(), layout->size()));
  wave.validate();
}

namespace {

// Incremental coherent sum: per-element steering phasors are fixed, so a
// coordinate update only re-evaluates the elements it drives.
class CoherentSum {
public:
  explicit CoherentSum(const OptimizationProblem& p) : p_(p) {
    const auto inc = direction_cosines(p.wave.theta_inc, p.wave.phi_inc);
    const auto dir = direction_cosines(p.target.theta_r, p.target.phi_r);
    const double k = wavenumber(p.wave.frequency);
    ep_ = element_pattern(p.target.theta_r, p.target.phi_r, p.pattern_exponent);
    steer_.resize(p.layout->size());
    for (std::size_t n = 0; n < steer_.size(); ++n) {
      const auto& pos = p.layout->position(n);
      steer_[n] = std::polar(1.0, k * (pos.x * (dir.u - inc.u) + pos.y * (dir.v - inc.v)));
    }
  }

  cplx contribution(std::size_t n, double v) const {
    return element_reflection(*p_.model, v, p_.field->t_lc_per_element[n], p_.wave.frequency,
                              p_.field->misalignment) * steer_[n];
  }

  cplx total(std::span<const double> element_voltages) const {
    cplx s{};
    for (std::size_t n = 0; n < steer_.size(); ++n) s += contribution(n, element_voltages[n]);
    return s;
  }

  double power_db(cplx sum) const { return db20(std::abs(sum) * ep_); }

private:
  const OptimizationProblem& p_;
  std::vector<cplx> steer_;
  double ep_ = 1.0;
};

void check_bounds(std::span<const double> v, const OptimizerSettings& s) {
  for (double x : v)
    if (!(x >= s.v_lo && x <= s.v_hi))
      throw DomainError(fmt::format("voltage {} outside [{}, {}] V", x, s.v_lo, s.v_hi));
}

constexpr double kInvPhi = 0.6180339887498949;

OptimizationReport coordinate_ascent(const OptimizationProblem& problem,
                                     const std::vector<std::vector<std::size_t>>& groups,
                                     std::span<const double> initial, const OptimizerSettings& settings) {
  problem.validate();
  if (initial.size() != groups.size())
    throw DomainError(fmt::format("{} initial voltages for {} variables", initial.size(), groups.size()));
  if (!(settings.v_hi > settings.v_lo) || !(settings.v_tol > 0.0) || settings.coarse_points < 2)
    throw DomainError("optimizer settings need v_hi > v_lo, v_tol > 0 and >= 2 coarse points");
  check_bounds(initial, settings);

  const std::size_t per_coord = evaluations_per_coordinate(settings);
  const std::size_t per_sweep = per_coord * groups.size();
  if (settings.budget < per_sweep)
    throw DomainError(fmt::format("evaluation budget {} is below one sweep; need at least {}",
                                  settings.budget, per_sweep));

  CoherentSum sum(problem);
  std::vector<double> element_v(problem.layout->size());
  std::vector<double> vars(initial.begin(), initial.end());
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (auto n : groups[g]) element_v[n] = vars[g];

  OptimizationReport report;
  report.seed = settings.seed;
  cplx total = sum.total(element_v);
  report.evaluations = 1;
  double current = sum.power_db(total);
  report.initial_power_db = current;

  while (report.evaluations + per_sweep <= settings.budget) {
    const double sweep_start = current;
    ++report.sweeps;
    total = sum.total(element_v);  // refresh accumulated rounding once per sweep
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& members = groups[g];
      cplx own{};
      for (auto n : members) own += sum.contribution(n, vars[g]);
      const cplx rest = total - own;
      auto eval = [&](double v) {
        ++report.evaluations;
        cplx s = rest;
        for (auto n : members) s += sum.contribution(n, v);
        return sum.power_db(s);
      };

      // Coarse bracket, then golden-section inside the best bracket.
      const std::size_t m = settings.coarse_points;
      const double step = (settings.v_hi - settings.v_lo) / static_cast<double>(m - 1);
      std::size_t best_k = 0;
      double best_coarse = -1e300;
      for (std::size_t k = 0; k < m; ++k) {
        const double val = eval(settings.v_lo + step * static_cast<double>(k));
        if (val > best_coarse) {
          best_coarse = val;
          best_k = k;
        }
      }
      double a = settings.v_lo + step * static_cast<double>(best_k == 0 ? 0 : best_k - 1);
      double b = settings.v_lo + step * static_cast<double>(std::min(best_k + 1, m - 1));
      double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
      double f1 = eval(x1), f2 = eval(x2);
      while (b - a > settings.v_tol) {
        if (f1 >= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - kInvPhi * (b - a);
          f1 = eval(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + kInvPhi * (b - a);
          f2 = eval(x2);
        }
      }
      double cand_v = f1 >= f2 ? x1 : x2;
      double cand_p = std::max(f1, f2);
      if (best_coarse > cand_p) {
        cand_p = best_coarse;
        cand_v = settings.v_lo + step * static_cast<double>(best_k);
      }
      ++report.iterations;
      if (cand_p > current) {
        vars[g] = cand_v;
        for (auto n : members) element_v[n] = cand_v;
        total = rest;
        for (auto n : members) total += sum.contribution(n, cand_v);
        current = sum.power_db(total);
      }
      report.log.push_back({report.sweeps, g, vars[g], current});
    }
    if (current - sweep_start < settings.sweep_tol_db) {
      report.converged = true;
      break;
    }
  }

  report.final_power_db = current;
  report.improvement_db = report.final_power_db - report.initial_power_db;
  report.voltages = std::move(vars);
  return report;
}

}  // namespace

double objective_power(const OptimizationProblem& problem, std::span<const double> voltages) {
  problem.validate();
  if (voltages.size() != problem.layout->size())
    throw DomainError(fmt::format("{} voltages for {} elements", voltages.size(), problem.layout->size()));
  for (double v : voltages)
    if (!(v >= 0.0 && v <= 20.0)) throw DomainError(fmt::format("voltage {} outside [0, 20] V", v));
  CoherentSum sum(problem);
  return sum.power_db(sum.total(voltages));
}

std::size_t evaluations_per_coordinate(const OptimizerSettings& s) {
  const double bracket = 2.0 * (s.v_hi - s.v_lo) / static_cast<double>(s.coarse_points - 1);
  std::size_t golden = 2;
  for (double w = bracket; w > s.v_tol; w *= kInvPhi) ++golden;
  return s.coarse_points + golden;
}

OptimizationReport optimize_columns(const OptimizationProblem& problem,
                                    std::span<const double> initial_column_voltages,
                                    const OptimizerSettings& settings) {
  problem.validate();
  return coordinate_ascent(problem, column_groups(*problem.layout), initial_column_voltages, settings);
}

OptimizationReport optimize_elements(const OptimizationProblem& problem,
                                     std::span<const double> initial_element_voltages,
                                     const OptimizerSettings& settings) {
  problem.validate();
  std::vector<std::vector<std::size_t>> groups(problem.layout->size());
  for (std::size_t n = 0; n < groups.size(); ++n) groups[n] = {n};
  return coordinate_ascent(problem, groups, initial_element_voltages, settings);
}

std::vector<double> expand_columns(const ApertureLayout& layout, std::span<const double> column_voltages) {
  if (column_voltages.size() != layout.cols())
    throw DomainError(fmt::format("{} column voltages for {} columns", column_voltages.size(), layout.cols()));
  std::vector<double> v(layout.size());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = column_voltages[layout.column_of(n)];
  return v;
}

std::vector<double> collapse_to_columns(const ApertureLayout& layout, std::span<const double> element_voltages) {
  if (element_voltages.size() != layout.size()) throw DomainError("voltage vector does not match layout");
  std::vector<double> sum(layout.cols(), 0.0), count(layout.cols(), 0.0);
  for (std::size_t n = 0; n < element_voltages.size(); ++n) {
    sum[layout.column_of(n)] += element_voltages[n];
    count[layout.column_of(n)] += 1.0;
  }
  for (std::size_t c = 0; c < sum.size(); ++c) sum[c] /= count[c];
  return sum;
}

void OptimizationReport::write_text(std::ostream& out) const {
  out << fmt::format("initial_power_db: {:.6f}\n", initial_power_db)
      << fmt::format("final_power_db: {:.6f}\n", final_power_db)
      << fmt::format("improvement_db: {:.6f}\n", improvement_db)
      << fmt::format("iterations: {}\n", iterations) << fmt::format("evaluations: {}\n", evaluations)
      << fmt::format("sweeps: {}\n", sweeps) << fmt::format("converged: {}\n", converged)
      << fmt::format("seed: {}\n", seed) << "voltages:";
  for (std::size_t i = 0; i < voltages.size(); ++i) out << (i ? "," : " ") << fmt::format("{:.4f}", voltages[i]);
  out << "\n";
}

void OptimizationReport::write_log_csv(std::ostream& out) const {
  out << "sweep,column,voltage,power_db\n";
  for (const auto& e : log) out << fmt::format("{},{},{:.6f},{:.6f}\n", e.sweep, e.variable, e.voltage, e.power_db);
}

}  // namespace lcris
