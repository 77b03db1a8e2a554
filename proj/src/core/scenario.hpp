// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aperture.hpp"
#include "materials.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"
#include "phase_shifter.hpp"
#include "scattering.hpp"
#include "steering.hpp"
#include "tolerance.hpp"

namespace lcris {

struct LineConfig {
  std::optional<DelayLineSpec> explicit_spec;
  double target_dphi_deg = 500.0;
  LineShape shape;
};

struct LayoutConfig {
  std::size_t rows = 0;
  std::size_t cols = 0;
  double dx = 0.0;  // m
  double dy = 0.0;
  GridKind grid = GridKind::triangular;
};

enum class ToleranceKind { uniform, tilted, random };

struct ToleranceConfig {
  ToleranceKind kind = ToleranceKind::uniform;
  double t_nom = 4.6e-6;
  double gx = 0.0;
  double gy = 0.0;
  double sigma = 0.0;
  double corr_len = 3e-3;
  std::uint64_t seed = 1;
  double misalign_um = 0.0;
};

struct Excitation {
  double theta_inc = 0.0;
  double phi_inc = 0.0;
  double f_design = 60e9;
  double f_start = 48e9;
  double f_stop = 72e9;
  std::size_t f_points = 201;

  std::vector<double> freq_axis() const;
};

struct AngleSweep {
  double theta_min = -90.0, theta_max = 90.0;
  std::size_t theta_points = 721;
  double phi_min = -90.0, phi_max = 90.0;
  std::size_t phi_points = 181;
  double track_window_deg = 10.0;
  double pattern_exponent = 0.5;

  std::vector<double> theta_axis() const;
  std::vector<double> phi_axis() const;
};

struct SteeringConfig {
  bool wrap = true;
  double wrap_modulus_deg = 360.0;
  bool column_constrained = false;
};

struct ReduceGeometry {
  BistaticAngles angles;
  std::optional<double> area_ris;  // defaults to the layout's aperture area
  std::optional<double> area_mp;   // defaults to area_ris
};

struct Scenario {
  LcMaterial material;
  StackMaterials stack;
  ResponseTimeBase response;
  LineConfig line;
  RadiatorWindow radiator;  // radiator.f0 follows excitation.f_design unless given
  MisalignmentModel misalignment_model;
  std::optional<LayoutConfig> layout;
  ToleranceConfig tolerance;
  Excitation excitation;
  SteeringTarget target;
  SteeringConfig steering;
  AngleSweep sweep;
  OptimizerSettings optimizer;
  bool optimize_elementwise = false;
  double p_element_w = 21.5e-9;
  std::optional<long long> power_elements;  // element count for the power line; layout size otherwise
  ReduceGeometry geometry;
  std::filesystem::path output_dir = "out";

  /// Resolved physical model (calibrates the line when no explicit spec is given).
  ElementModel element_model() const;
  ApertureLayout build_aperture() const;  // ConfigError("layout", ...) when absent
  ToleranceField build_field(const ApertureLayout& layout, std::optional<std::uint64_t> seed = {}) const;
  PlaneWave design_wave() const;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

std::string_view to_string(ToleranceKind kind);

}  // namespace lcris
