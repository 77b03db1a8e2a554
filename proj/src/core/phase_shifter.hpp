// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include "materials.hpp"

namespace lcris {

/// Delay-line phase shifter surrogate.
///
/// The LC share of the line's field is the filling factor
/// q(t) = fill_max * t / (t + t_half); the remainder sits in glass.
struct DelayLineSpec {
  double l_phys = 0.0;          // m
  double t_lc_nominal = 4.6e-6; // m
  double fill_max = 0.9;
  double t_half = 4e-6;         // m
  double alpha_extra = 0.0;     // dB/m, conductor loss

  void validate() const;
};

struct ShifterResponse {
  double phase = 0.0;          // deg
  double insertion_loss = 0.0; // dB
  double frequency = 0.0;      // Hz
};

/// 20*pi/ln(10): converts a dielectric attenuation constant in Np to dB per
/// wavelength-normalized unit, giving alpha = 27.29 sqrt(eps) tan(delta) f/c.
inline constexpr double kDielectricLossDb = 27.287527;

double filling_factor(const DelayLineSpec& spec, double t_lc);

Permittivity effective_permittivity(const DelayLineSpec& spec, double eps_lc, double tan_lc,
                                    const StackMaterials& stack, double t_lc);

double round_trip_phase(const DelayLineSpec& spec, double eps_eff, double frequency);
double insertion_loss(const DelayLineSpec& spec, double eps_eff, double tan_eff, double frequency);
ShifterResponse shifter_response(const DelayLineSpec& spec, const LcMaterial& material,
                                 const StackMaterials& stack, double v_bias, double t_lc,
                                 double frequency);

double figure_of_merit(double delta_phi_max, double il_max);
double compactness(double delta_phi_max, double l_phys, double frequency);

/// Phase relative to the unbiased line at its nominal thickness.
double phase_vs_thickness(const DelayLineSpec& spec, const LcMaterial& material,
                          const StackMaterials& stack, double v_bias, double t_lc,
                          double frequency);

/// Differential phase between the eps_perp and eps_par endpoints at the
/// nominal thickness.
double max_differential_phase(const DelayLineSpec& spec, const LcMaterial& material,
                              const StackMaterials& stack, double frequency);

/// Largest insertion loss over the two tuning endpoints at the nominal thickness.
double max_insertion_loss(const DelayLineSpec& spec, const LcMaterial& material,
                          const StackMaterials& stack, double frequency);

struct LineShape {
  double fill_max = 0.9;
  double t_half = 4e-6;
  double t_lc_nominal = 4.6e-6;
  double target_fom = 80.0;  // deg/dB; <= 0 leaves alpha_extra at zero
};

/// Solves l_phys for the requested differential phase and, when a FoM
/// target is given, alpha_extra so that max phase / max loss hits it.
DelayLineSpec calibrate_line(double target_dphi, double frequency, const LcMaterial& material,
                             const StackMaterials& stack, const LineShape& shape = {});

}  // namespace lcris
