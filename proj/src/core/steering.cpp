// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "steering.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "constants.hpp"
#include "errors.hpp"

namespace lcris {

PhaseProfile synthesize_profile(const ApertureLayout& layout, const SteeringTarget& target,
                                const PlaneWave& wave, double dphi_max,
                                const SynthesisOptions& options) {
  if (!(std::abs(target.theta_r) < 90.0) || !(std::abs(target.phi_r) < 90.0))
    throw DomainError("steering target must lie strictly inside (-90, 90) deg");
  if (!(dphi_max > 0.0)) throw DomainError("dphi_max must be positive");
  wave.validate();

  PhaseProfile profile;
  profile.wrapped = options.wrap;
  profile.wrap_modulus = dphi_max;
  profile.target = target;
  profile.theta_inc = wave.theta_inc;
  profile.phi_inc = wave.phi_inc;
  profile.f_design = wave.frequency;
  if (dphi_max < 360.0)
    profile.warnings.push_back(fmt::format(
        "phase range {:.1f} deg < 360 deg: wrapped profile cannot cover a full cycle", dphi_max));

  const auto r = direction_cosines(target.theta_r, target.phi_r);
  const auto inc = direction_cosines(wave.theta_inc, wave.phi_inc);
  const double deg_per_m = 360.0 / wavelength(wave.frequency);

  std::vector<double> column_x;
  if (options.column_constrained) {
    const auto groups = column_groups(layout);
    column_x.resize(groups.size());
    for (std::size_t c = 0; c < groups.size(); ++c) {
      double sx = 0.0;
      for (auto i : groups[c]) sx += layout.position(i).x;
      column_x[c] = sx / static_cast<double>(groups[c].size());
    }
  }

  profile.phase_per_element.resize(layout.size());
  for (std::size_t n = 0; n < layout.size(); ++n) {
    double phase;
    if (options.column_constrained) {
      phase = -deg_per_m * column_x[layout.column_of(n)] * (r.u - inc.u);
    } else {
      const auto& p = layout.position(n);
      phase = -deg_per_m * (p.x * (r.u - inc.u) + p.y * (r.v - inc.v));
    }
    if (options.wrap) {
      phase = std::fmod(phase, dphi_max);
      if (phase < 0.0) phase += dphi_max;
      if (phase >= dphi_max) phase = 0.0;
    }
    profile.phase_per_element[n] = phase + 0.0;  // no negative zero in exports
  }
  return profile;
}

std::vector<double> phases_to_voltages(const PhaseProfile& profile, const ElementModel& model,
                                       std::span<const double> t_lc_assumed, double v_max) {
  const auto& phases = profile.phase_per_element;
  if (t_lc_assumed.size() != phases.size())
    throw DomainError(fmt::format("{} thickness values for {} profile phases", t_lc_assumed.size(),
                                  phases.size()));
  const auto& line = model.line;
  const auto& mat = model.material;
  const double v_top = std::min(v_max, 1e6);
  const double eps_lc_top = lc_permittivity(mat, v_top).eps_r;
  const double eps_lc_limit = mat.eps_par * (1.0 - kInversionMargin);
  const double deg_per_sqrt_eps = 2.0 * (360.0 / wavelength(profile.f_design)) * line.l_phys;

  std::vector<double> volts(phases.size());
  std::vector<std::size_t> bad;
  for (std::size_t n = 0; n < phases.size(); ++n) {
    const double t = t_lc_assumed[n];
    const double q = filling_factor(line, t);
    const auto ref = effective_permittivity(line, mat.eps_perp, mat.tan_perp, model.stack, t);
    const double root = std::sqrt(ref.eps_r) + phases[n] / deg_per_sqrt_eps;
    const double eps_eff = root * root;
    double eps_lc = (eps_eff - (1.0 - q) * model.stack.eps_glass) / q;
    // Zero phase may land a rounding step below eps_perp.
    if (eps_lc < mat.eps_perp && eps_lc > mat.eps_perp * (1.0 - 1e-12)) eps_lc = mat.eps_perp;
    if (!(phases[n] >= 0.0) || eps_lc > eps_lc_top * (1.0 + 1e-12) || eps_lc > eps_lc_limit) {
      bad.push_back(n);
      continue;
    }
    volts[n] = std::min(invert_permittivity(mat, std::min(eps_lc, eps_lc_top)), v_top);
  }
  if (!bad.empty()) {
    std::string list;
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i) list += (i ? "," : "") + std::to_string(bad[i]);
    if (bad.size() > 20) list += ",...";
    throw RangeError(fmt::format("{} element phase(s) unreachable within [0, {} V]: elements {}",
                                 bad.size(), v_max, list));
  }
  return volts;
}

SquintPrediction squint_predict(const PhaseProfile& profile, double frequency) {
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  if (!profile.wrapped) return {profile.target.theta_r, false};
  const double s_inc = std::sin(deg2rad(profile.theta_inc));
  double arg = s_inc + (std::sin(deg2rad(profile.target.theta_r)) - s_inc) * profile.f_design / frequency;
  bool clamped = false;
  if (arg > 1.0 || arg < -1.0) {
    arg = std::clamp(arg, -1.0, 1.0);
    clamped = true;
  }
  return {rad2deg(std::asin(arg)), clamped};
}

std::vector<std::complex<double>> ideal_gamma(const PhaseProfile& profile, double frequency) {
  const double scale = frequency / profile.f_design;
  std::vector<std::complex<double>> g(profile.phase_per_element.size());
  for (std::size_t n = 0; n < g.size(); ++n)
    g[n] = std::polar(1.0, deg2rad(profile.phase_per_element[n] * scale));
  return g;
}

void write_profile_csv(std::ostream& out, const PhaseProfile& profile,
                       std::span<const double> voltages) {
  out << "element,phase_deg,voltage_v\n";
  for (std::size_t n = 0; n < profile.phase_per_element.size(); ++n)
    out << fmt::format("{},{:.6f},{:.6f}\n", n, profile.phase_per_element[n],
                       n < voltages.size() ? voltages[n] : 0.0);
}

}  // namespace lcris
