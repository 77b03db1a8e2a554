// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <string>

namespace lcris {

/// Anisotropic LC mixture with a threshold/saturation tuning curve.
///
/// The mixing fraction is s(v) = 0 below `v_threshold` and
/// 1 - exp(-(v - v_threshold) / v_scale) above it; permittivity and loss
/// tangent are both interpolated between the perpendicular and parallel
/// endpoints with s. Voltages are RMS of the square-wave drive.
struct LcMaterial {
  double eps_perp = 2.46;
  double tan_perp = 0.0116;
  double eps_par = 3.53;
  double tan_par = 0.0064;
  double v_threshold = 2.0;
  double v_scale = 3.9;  // s(20 V) = 0.9901

  /// GT7-29001 endpoints with the default tuning curve.
  static LcMaterial gt7_29001() { return {}; }

  void validate() const;
};

struct StackMaterials {
  double eps_glass = 5.1;  // AF32
  double tan_glass = 0.009;
  double t_glass = 300e-6;
  double t_gold = 2e-6;
  std::string conductor = "gold";

  void validate() const;
};

struct ResponseTimeBase {
  double tau_on_ref = 15e-3;
  double tau_off_ref = 72e-3;
  double t_lc_ref = 4.6e-6;

  void validate() const;
};

struct Permittivity {
  double eps_r = 1.0;
  double tan_delta = 0.0;
};

struct ResponseTimes {
  double tau_on = 0.0;
  double tau_off = 0.0;
};

/// Relative distance below eps_par still reachable by `invert_permittivity`.
inline constexpr double kInversionMargin = 1e-6;

double tuning_fraction(const LcMaterial& material, double v_bias);
Permittivity lc_permittivity(const LcMaterial& material, double v_bias);

/// Bias voltage producing `eps_target`. Targets at eps_perp return
/// v_threshold. Reachable range is [eps_perp, eps_par * (1 - kInversionMargin)].
double invert_permittivity(const LcMaterial& material, double eps_target);

ResponseTimes response_times(const ResponseTimeBase& base, double t_lc);
double array_power(double p_element, long long n_elements);

}  // namespace lcris
