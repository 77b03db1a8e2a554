// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <complex>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "aperture.hpp"
#include "scattering.hpp"

namespace lcris {

struct SteeringTarget {
  double theta_r = 0.0;  // deg, azimuth
  double phi_r = 0.0;    // deg, elevation
};

struct PhaseProfile {
  std::vector<double> phase_per_element;  // deg
  bool wrapped = false;
  double wrap_modulus = 360.0;
  SteeringTarget target;
  double theta_inc = 0.0;
  double phi_inc = 0.0;
  double f_design = 0.0;
  std::vector<std::string> warnings;
};

struct SynthesisOptions {
  bool wrap = true;
  bool column_constrained = false;
};

/// Progressive phase toward `target` for the incidence in `wave`
/// (wave.frequency is the design frequency). Wrapped profiles are reduced
/// modulo `dphi_max` into [0, dphi_max).
PhaseProfile synthesize_profile(const ApertureLayout& layout, const SteeringTarget& target,
                                const PlaneWave& wave, double dphi_max,
                                const SynthesisOptions& options = {});

/// Bias voltages realizing `profile` relative to each element's 0 V phase at
/// the assumed thickness. Throws RangeError listing unreachable elements.
std::vector<double> phases_to_voltages(const PhaseProfile& profile, const ElementModel& model,
                                       std::span<const double> t_lc_assumed, double v_max = 20.0);

struct SquintPrediction {
  double theta_deg = 0.0;
  bool clamped = false;
};

/// Peak angle of a single-plane profile at `frequency`. Wrapped profiles
/// squint as sin(theta) - sin(theta_inc) ~ f_design / f; unwrapped
/// (true-time-delay) profiles do not squint.
SquintPrediction squint_predict(const PhaseProfile& profile, double frequency);

/// Unit-magnitude reflection coefficients of an ideal delay-line realization
/// of the profile at `frequency` (phase scales with f / f_design).
std::vector<std::complex<double>> ideal_gamma(const PhaseProfile& profile, double frequency);

void write_profile_csv(std::ostream& out, const PhaseProfile& profile,
                       std::span<const double> voltages);

}  // namespace lcris
