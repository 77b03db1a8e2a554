// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "optimizer.hpp"
#include "scenario.hpp"

namespace lcris {

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::size_t trials = 10;
  std::optional<bool> elementwise;
  bool optimize_trials = false;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> traces;
};

struct RunResult {
  std::string summary;  // key: value lines, also written as summary.txt
  std::filesystem::path out_dir;
  std::vector<std::string> files;
};

/// Designed profile and the bias voltages realizing it on the assumed-uniform stack.
struct SteerDesign {
  ApertureLayout layout;
  ElementModel model;
  ToleranceField field;
  PhaseProfile profile;
  std::vector<double> voltages;  // empty for true-time-delay profiles
};

SteerDesign design_steering(const Scenario& scenario, std::optional<std::uint64_t> seed = {});

/// Element states over `freq_axis`. Wrapped profiles go through the LC line
/// model with the true thickness field; unwrapped ones use ideal delay-line phases.
std::vector<ElementState> realize_states(const SteerDesign& design, std::span<const double> freq_axis);

struct SteerOutcome {
  SteerDesign design;
  FarFieldGrid rcs;  // (f, theta) cut at phi = target phi
  EfficiencySpectrum spectrum;
  std::vector<double> fixed_db;
  Bandwidth bw_tracked;
  Bandwidth bw_fixed;
};

SteerOutcome compute_steer(const Scenario& scenario, const RunOptions& options);

struct TrialResult {
  std::uint64_t seed = 0;
  double eta_peak = 0.0;
  double theta_peak = 0.0;
  double offset_deg = 0.0;
  double peak_db = 0.0;
  std::size_t clamp_events = 0;
  std::optional<double> improvement_db;
};

/// One tolerance trial at f_design: global maximum of the theta cut through the target phi.
TrialResult run_trial(const Scenario& scenario, std::uint64_t seed, bool optimize, bool elementwise);

RunResult run_steer(const Scenario& scenario, const RunOptions& options);
RunResult run_sweep(const Scenario& scenario, const RunOptions& options);
RunResult run_tolerance_mc(const Scenario& scenario, const RunOptions& options);
RunResult run_optimize(const Scenario& scenario, const RunOptions& options);
RunResult run_reduce(const Scenario& scenario, const RunOptions& options);
RunResult run_report(const Scenario& scenario, const RunOptions& options);

}  // namespace lcris
