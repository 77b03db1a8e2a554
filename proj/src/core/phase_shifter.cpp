// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "phase_shifter.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "constants.hpp"
#include "errors.hpp"

namespace lcris {

void DelayLineSpec::validate() const {
  if (!(l_phys > 0.0)) throw DomainError("delay line length must be positive");
  if (!(t_lc_nominal > 0.0)) throw DomainError("nominal LC thickness must be positive");
  if (!(fill_max > 0.0 && fill_max <= 1.0)) throw DomainError("fill_max must lie in (0, 1]");
  if (!(t_half > 0.0)) throw DomainError("t_half must be positive");
  if (!(alpha_extra >= 0.0)) throw DomainError("alpha_extra must be >= 0");
}

double filling_factor(const DelayLineSpec& spec, double t_lc) {
  if (!(t_lc > 0.0)) throw DomainError(fmt::format("LC thickness must be positive (got {})", t_lc));
  return spec.fill_max * t_lc / (t_lc + spec.t_half);
}

Permittivity effective_permittivity(const DelayLineSpec& spec, double eps_lc, double tan_lc,
                                    const StackMaterials& stack, double t_lc) {
  if (!(eps_lc >= 1.0)) throw DomainError("LC permittivity must be >= 1");
  const double q = filling_factor(spec, t_lc);
  return {q * eps_lc + (1.0 - q) * stack.eps_glass, q * tan_lc + (1.0 - q) * stack.tan_glass};
}

double round_trip_phase(const DelayLineSpec& spec, double eps_eff, double frequency) {
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  return 2.0 * (360.0 / wavelength(frequency)) * spec.l_phys * std::sqrt(eps_eff);
}

double insertion_loss(const DelayLineSpec& spec, double eps_eff, double tan_eff, double frequency) {
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  const double alpha_diel = kDielectricLossDb * std::sqrt(eps_eff) * tan_eff * frequency / kSpeedOfLight;
  return 2.0 * spec.l_phys * (alpha_diel + spec.alpha_extra);
}

ShifterResponse shifter_response(const DelayLineSpec& spec, const LcMaterial& material,
                                 const StackMaterials& stack, double v_bias, double t_lc,
                                 double frequency) {
  const Permittivity lc = lc_permittivity(material, v_bias);
  const Permittivity eff = effective_permittivity(spec, lc.eps_r, lc.tan_delta, stack, t_lc);
  return {round_trip_phase(spec, eff.eps_r, frequency),
          insertion_loss(spec, eff.eps_r, eff.tan_delta, frequency), frequency};
}

double figure_of_merit(double delta_phi_max, double il_max) {
  if (!(il_max > 0.0)) throw DomainError("insertion loss must be positive");
  return delta_phi_max / il_max;
}

double compactness(double delta_phi_max, double l_phys, double frequency) {
  if (!(l_phys > 0.0)) throw DomainError("physical length must be positive");
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  return delta_phi_max * wavelength(frequency) / l_phys;
}

double phase_vs_thickness(const DelayLineSpec& spec, const LcMaterial& material,
                          const StackMaterials& stack, double v_bias, double t_lc,
                          double frequency) {
  const double phase = shifter_response(spec, material, stack, v_bias, t_lc, frequency).phase;
  const double ref = shifter_response(spec, material, stack, 0.0, spec.t_lc_nominal, frequency).phase;
  return phase - ref;
}

namespace {

Permittivity endpoint(const DelayLineSpec& spec, const StackMaterials& stack, double eps,
                      double tan) {
  return effective_permittivity(spec, eps, tan, stack, spec.t_lc_nominal);
}

}  // namespace

double max_differential_phase(const DelayLineSpec& spec, const LcMaterial& material,
                              const StackMaterials& stack, double frequency) {
  const auto perp = endpoint(spec, stack, material.eps_perp, material.tan_perp);
  const auto par = endpoint(spec, stack, material.eps_par, material.tan_par);
  return round_trip_phase(spec, par.eps_r, frequency) - round_trip_phase(spec, perp.eps_r, frequency);
}

double max_insertion_loss(const DelayLineSpec& spec, const LcMaterial& material,
                          const StackMaterials& stack, double frequency) {
  const auto perp = endpoint(spec, stack, material.eps_perp, material.tan_perp);
  const auto par = endpoint(spec, stack, material.eps_par, material.tan_par);
  return std::max(insertion_loss(spec, perp.eps_r, perp.tan_delta, frequency),
                  insertion_loss(spec, par.eps_r, par.tan_delta, frequency));
}

DelayLineSpec calibrate_line(double target_dphi, double frequency, const LcMaterial& material,
                             const StackMaterials& stack, const LineShape& shape) {
  if (!(target_dphi > 0.0))
    throw CalibrationError(fmt::format("target differential phase must be positive (got {} deg)", target_dphi));
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  material.validate();
  stack.validate();

  DelayLineSpec spec;
  spec.t_lc_nominal = shape.t_lc_nominal;
  spec.fill_max = shape.fill_max;
  spec.t_half = shape.t_half;
  spec.alpha_extra = 0.0;

  const auto perp = endpoint(spec, stack, material.eps_perp, material.tan_perp);
  const auto par = endpoint(spec, stack, material.eps_par, material.tan_par);
  const double dsqrt = std::sqrt(par.eps_r) - std::sqrt(perp.eps_r);
  if (!(dsqrt > 0.0))
    throw CalibrationError(fmt::format(
        "line with fill_max={} t_half={} m has no tunable phase (eps_eff {}..{})", shape.fill_max,
        shape.t_half, perp.eps_r, par.eps_r));
  spec.l_phys = target_dphi / (2.0 * (360.0 / wavelength(frequency)) * dsqrt);

  if (shape.target_fom > 0.0) {
    const double il_budget = target_dphi / shape.target_fom;
    const double il_diel = max_insertion_loss(spec, material, stack, frequency);
    if (il_diel > il_budget)
      throw CalibrationError(fmt::format(
          "FoM target {} deg/dB unreachable: dielectric loss alone is {:.4f} dB for {} deg "
          "(FoM {:.2f} deg/dB)",
          shape.target_fom, il_diel, target_dphi, target_dphi / il_diel));
    spec.alpha_extra = (il_budget - il_diel) / (2.0 * spec.l_phys);
  }
  spec.validate();
  return spec;
}

}  // namespace lcris
