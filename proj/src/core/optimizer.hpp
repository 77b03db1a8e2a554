// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "aperture.hpp"
#include "scattering.hpp"
#include "steering.hpp"
#include "tolerance.hpp"

namespace lcris {

/// Received-power objective: coherent sum toward `target` at one frequency
/// with element states built from the true thickness field.
struct OptimizationProblem {
  const ApertureLayout* layout = nullptr;
  const ToleranceField* field = nullptr;
  const ElementModel* model = nullptr;
  PlaneWave wave;  // incidence angles; `frequency` is the objective frequency
  SteeringTarget target;
  double pattern_exponent = 0.5;

  void validate() const;
};

/// 20 log10 |E(target)| for per-element voltages.
double objective_power(const OptimizationProblem& problem, std::span<const double> voltages);

struct OptimizerSettings {
  double v_lo = 0.0;
  double v_hi = 20.0;
  double v_tol = 0.05;         // golden-section stopping width, V
  double sweep_tol_db = 0.05;  // stop once a full sweep gains less than this
  std::size_t coarse_points = 9;
  std::size_t budget = 50000;  // objective evaluations
  std::uint64_t seed = 0;      // recorded in the report; the search is deterministic
};

struct IterateLogEntry {
  std::size_t sweep = 0;
  std::size_t variable = 0;
  double voltage = 0.0;
  double power_db = 0.0;
};

struct OptimizationReport {
  double initial_power_db = 0.0;
  double final_power_db = 0.0;
  double improvement_db = 0.0;
  std::size_t iterations = 0;   // coordinate searches performed
  std::size_t evaluations = 0;  // objective evaluations
  std::size_t sweeps = 0;
  std::vector<double> voltages;  // one per optimization variable
  bool converged = false;
  std::uint64_t seed = 0;
  std::vector<IterateLogEntry> log;

  void write_text(std::ostream& out) const;
  void write_log_csv(std::ostream& out) const;
};

/// Worst-case objective evaluations spent on one coordinate.
std::size_t evaluations_per_coordinate(const OptimizerSettings& settings);

/// Cyclic coordinate ascent over column voltages (one variable per column).
OptimizationReport optimize_columns(const OptimizationProblem& problem,
                                    std::span<const double> initial_column_voltages,
                                    const OptimizerSettings& settings = {});

/// Same search with one variable per element.
OptimizationReport optimize_elements(const OptimizationProblem& problem,
                                     std::span<const double> initial_element_voltages,
                                     const OptimizerSettings& settings = {});

/// Expands per-column voltages to per-element voltages.
std::vector<double> expand_columns(const ApertureLayout& layout, std::span<const double> column_voltages);

/// Per-column voltages taken as the mean over each column's elements.
std::vector<double> collapse_to_columns(const ApertureLayout& layout, std::span<const double> element_voltages);

}  // namespace lcris
