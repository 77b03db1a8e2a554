// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "materials.hpp"

#include <cmath>

#include <fmt/format.h>

#include "errors.hpp"

namespace lcris {

void LcMaterial::validate() const {
  if (!(eps_perp > 1.0) || !(eps_par > eps_perp))
    throw DomainError(fmt::format("LC permittivities must satisfy eps_par > eps_perp > 1 (got {}, {})",
                                  eps_par, eps_perp));
  if (!(tan_perp > 0.0 && tan_perp < 1.0) || !(tan_par > 0.0 && tan_par < 1.0))
    throw DomainError("LC loss tangents must lie in (0, 1)");
  if (!(v_threshold >= 0.0) || !(v_scale > 0.0))
    throw DomainError("tuning curve requires v_threshold >= 0 and v_scale > 0");
}

void StackMaterials::validate() const {
  if (!(eps_glass > 1.0)) throw DomainError("glass permittivity must exceed 1");
  if (!(tan_glass >= 0.0 && tan_glass < 1.0)) throw DomainError("glass loss tangent must lie in [0, 1)");
  if (!(t_glass > 0.0) || !(t_gold > 0.0)) throw DomainError("stack thicknesses must be positive");
}

void ResponseTimeBase::validate() const {
  if (!(tau_on_ref > 0.0 && tau_off_ref > 0.0 && t_lc_ref > 0.0))
    throw DomainError("response-time base values must be positive");
}

double tuning_fraction(const LcMaterial& material, double v_bias) {
  if (!(v_bias >= 0.0)) throw DomainError(fmt::format("bias voltage must be >= 0 (got {})", v_bias));
  if (v_bias <= material.v_threshold) return 0.0;
  return -std::expm1(-(v_bias - material.v_threshold) / material.v_scale);
}

Permittivity lc_permittivity(const LcMaterial& material, double v_bias) {
  const double s = tuning_fraction(material, v_bias);
  return {material.eps_perp + (material.eps_par - material.eps_perp) * s,
          material.tan_perp + (material.tan_par - material.tan_perp) * s};
}

double invert_permittivity(const LcMaterial& material, double eps_target) {
  const double hi = material.eps_par * (1.0 - kInversionMargin);
  if (!(eps_target >= material.eps_perp && eps_target <= hi))
    throw RangeError(fmt::format("permittivity {} outside reachable range [{}, {}]", eps_target,
                                 material.eps_perp, hi));
  const double s = (eps_target - material.eps_perp) / (material.eps_par - material.eps_perp);
  if (s <= 0.0) return material.v_threshold;
  return material.v_threshold - material.v_scale * std::log1p(-s);
}

ResponseTimes response_times(const ResponseTimeBase& base, double t_lc) {
  if (!(t_lc > 0.0)) throw DomainError(fmt::format("LC thickness must be positive (got {})", t_lc));
  const double r = t_lc / base.t_lc_ref;
  return {base.tau_on_ref * r * r, base.tau_off_ref * r * r};
}

double array_power(double p_element, long long n_elements) {
  if (!(p_element >= 0.0)) throw DomainError("element power must be >= 0");
  if (n_elements < 1) throw DomainError("element count must be >= 1");
  return p_element * static_cast<double>(n_elements);
}

}  // namespace lcris
