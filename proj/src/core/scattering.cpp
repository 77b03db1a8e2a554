// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "scattering.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "constants.hpp"
#include "errors.hpp"

namespace lcris {

double RadiatorWindow::loss_db(double frequency) const {
  if (!enabled) return 0.0;
  const double half_width = 0.5 * fractional_bw * f0;
  const double x = (frequency - f0) / half_width;
  return center_loss_db + 10.0 * std::log10(std::exp(1.0)) * std::log(2.0) * x * x;
}

void ElementModel::validate() const {
  material.validate();
  stack.validate();
  line.validate();
  if (radiator.enabled && (!(radiator.f0 > 0.0) || !(radiator.fractional_bw > 0.0) ||
                           !(radiator.center_loss_db >= 0.0)))
    throw DomainError("radiator window needs f0 > 0, fractional_bw > 0, center_loss_db >= 0");
  if (!(misalignment.width_coeff > 0.0) || !(misalignment.exponent > 0.0))
    throw DomainError("misalignment model coefficients must be positive");
}

cplx element_reflection(const ElementModel& model, double v_bias, double t_lc, double frequency,
                        const Misalignment& offset) {
  const ShifterResponse r =
      shifter_response(model.line, model.material, model.stack, v_bias, t_lc, frequency);
  double magnitude = from_db20(-(r.insertion_loss + model.radiator.loss_db(frequency)));
  magnitude *= misalignment_response(offset, frequency, model.radiator.f0, model.misalignment);
  return std::polar(magnitude, deg2rad(r.phase));
}

std::vector<ElementState> element_states(const ElementModel& model, std::span<const double> voltages,
                                         const ToleranceField& field,
                                         std::span<const double> freq_axis) {
  if (voltages.size() != field.size())
    throw DomainError(fmt::format("{} voltages for {} elements", voltages.size(), field.size()));
  std::vector<ElementState> states(voltages.size());
  for (std::size_t n = 0; n < voltages.size(); ++n) {
    auto& s = states[n];
    s.v_bias = voltages[n];
    s.t_lc = field.t_lc_per_element[n];
    s.gamma.reserve(freq_axis.size());
    for (double f : freq_axis)
      s.gamma.push_back(element_reflection(model, s.v_bias, s.t_lc, f, field.misalignment));
  }
  return states;
}

void PlaneWave::validate() const {
  if (!(std::abs(theta_inc) < 90.0) || !(std::abs(phi_inc) < 90.0))
    throw DomainError("incidence angles must lie strictly inside (-90, 90) deg");
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
}

std::string_view to_string(GridNormalization n) {
  switch (n) {
    case GridNormalization::raw: return "raw";
    case GridNormalization::rcs_m2: return "rcs_m2";
    case GridNormalization::rel_metal_plate_db: return "rel_metal_plate_db";
  }
  return "raw";
}

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw DomainError(fmt::format("{} axis is empty", name));
  for (std::size_t i = 1; i < axis.size(); ++i)
    if (!(axis[i] > axis[i - 1])) throw DomainError(fmt::format("{} axis must be strictly increasing", name));
}

}  // namespace

void FarFieldGrid::validate() const {
  check_axis(theta_axis, "theta");
  check_axis(phi_axis, "phi");
  check_axis(freq_axis, "frequency");
  if (values.size() != theta_axis.size() * phi_axis.size() * freq_axis.size())
    throw DomainError("grid value count does not match axis lengths");
}

DirectionCosines direction_cosines(double theta_deg, double phi_deg) {
  const double t = deg2rad(theta_deg), p = deg2rad(phi_deg);
  return {std::sin(t), std::sin(p) * std::cos(t)};
}

double element_pattern(double theta_deg, double phi_deg, double exponent) {
  const double ct = std::cos(deg2rad(theta_deg)), cp = std::cos(deg2rad(phi_deg));
  if (ct <= 0.0 || cp <= 0.0) return 0.0;
  return std::pow(ct, exponent) * std::pow(cp, exponent);
}

FarFieldGrid far_field(const ApertureLayout& layout, std::span<const double> freq_axis,
                       std::span<const ElementState> states, const PlaneWave& wave,
                       std::span<const double> theta_axis, std::span<const double> phi_axis,
                       const FarFieldOptions& options) {
  if (states.size() != layout.size())
    throw DomainError(fmt::format("{} element states for a {}-element layout", states.size(), layout.size()));
  for (const auto& s : states)
    if (s.gamma.size() != freq_axis.size())
      throw DomainError("element state frequency samples do not match the frequency axis");

  FarFieldGrid grid;
  grid.theta_axis.assign(theta_axis.begin(), theta_axis.end());
  grid.phi_axis.assign(phi_axis.begin(), phi_axis.end());
  grid.freq_axis.assign(freq_axis.begin(), freq_axis.end());
  grid.values.assign(freq_axis.size() * theta_axis.size() * phi_axis.size(), cplx{});
  grid.validate();

  const auto inc = direction_cosines(wave.theta_inc, wave.phi_inc);
  const std::size_t n_el = layout.size();
  const std::size_t nt = theta_axis.size(), np = phi_axis.size();

  // Per-phi direction data does not depend on frequency.
  std::vector<double> v_of(nt * np), ep_of(nt * np), u_of(nt);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    u_of[ti] = direction_cosines(theta_axis[ti], 0.0).u - inc.u;
    for (std::size_t pi = 0; pi < np; ++pi) {
      v_of[ti * np + pi] = direction_cosines(theta_axis[ti], phi_axis[pi]).v - inc.v;
      ep_of[ti * np + pi] = element_pattern(theta_axis[ti], phi_axis[pi], options.pattern_exponent);
    }
  }

  const std::size_t rows = freq_axis.size() * nt;
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> gr(n_el), gi(n_el), kx(n_el), ky(n_el);
    std::size_t cached_f = static_cast<std::size_t>(-1);
    for (std::size_t row = begin; row < end; ++row) {
      const std::size_t fi = row / nt, ti = row % nt;
      if (fi != cached_f) {
        const double k = wavenumber(freq_axis[fi]);
        for (std::size_t n = 0; n < n_el; ++n) {
          gr[n] = states[n].gamma[fi].real();
          gi[n] = states[n].gamma[fi].imag();
          kx[n] = k * layout.positions()[n].x;
          ky[n] = k * layout.positions()[n].y;
        }
        cached_f = fi;
      }
      const double u = u_of[ti];
      for (std::size_t pi = 0; pi < np; ++pi) {
        const double v = v_of[ti * np + pi];
        double sr = 0.0, si = 0.0;
        for (std::size_t n = 0; n < n_el; ++n) {
          const double arg = kx[n] * u + ky[n] * v;
          const double c = std::cos(arg), s = std::sin(arg);
          sr += gr[n] * c - gi[n] * s;
          si += gr[n] * s + gi[n] * c;
        }
        const double ep = ep_of[ti * np + pi];
        grid.values[row * np + pi] = cplx{sr * ep, si * ep};
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(rows)));
  if (threads == 1) {
    work(0, rows);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (rows + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(rows, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
  }
  return grid;
}

cplx field_at(const ApertureLayout& layout, std::span<const cplx> gamma, double frequency,
              const PlaneWave& wave, double theta_deg, double phi_deg, double pattern_exponent) {
  if (gamma.size() != layout.size()) throw DomainError("gamma vector does not match layout");
  const auto inc = direction_cosines(wave.theta_inc, wave.phi_inc);
  const auto dir = direction_cosines(theta_deg, phi_deg);
  const double k = wavenumber(frequency);
  const double du = dir.u - inc.u, dv = dir.v - inc.v;
  cplx sum{};
  for (std::size_t n = 0; n < gamma.size(); ++n) {
    const auto& p = layout.positions()[n];
    sum += gamma[n] * std::polar(1.0, k * (p.x * du + p.y * dv));
  }
  return sum * element_pattern(theta_deg, phi_deg, pattern_exponent);
}

double metal_plate_rcs(double area, double theta_tx, double theta_rx, double phi_tx,
                       double phi_rx, double frequency) {
  if (!(area > 0.0)) throw DomainError("plate area must be positive");
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  for (double a : {theta_tx, theta_rx, phi_tx, phi_rx})
    if (!(std::abs(a) < 90.0)) throw DomainError(fmt::format("angle {} deg outside (-90, 90)", a));
  const double lam = wavelength(frequency);
  return 4.0 * kPi * area * area * std::cos(deg2rad(theta_tx)) * std::cos(deg2rad(theta_rx)) *
         std::cos(deg2rad(phi_tx)) * std::cos(deg2rad(phi_rx)) / (lam * lam);
}

FarFieldGrid ris_rcs(const FarFieldGrid& grid, const ApertureLayout& layout, const PlaneWave&) {
  if (grid.normalization != GridNormalization::raw)
    throw StateError(fmt::format("ris_rcs expects a raw grid, got '{}'", to_string(grid.normalization)));
  grid.validate();
  FarFieldGrid out = grid;
  out.normalization = GridNormalization::rcs_m2;
  const double area = aperture_area(layout);
  // In-phase |gamma| = 1 reference: |E_ideal(0, 0)| = N at broadside (EP = 1).
  const double ref = static_cast<double>(layout.size());
  const std::size_t per_f = grid.theta_axis.size() * grid.phi_axis.size();
  for (std::size_t fi = 0; fi < grid.freq_axis.size(); ++fi) {
    const double scale = std::sqrt(metal_plate_rcs(area, 0, 0, 0, 0, grid.freq_axis[fi])) / ref;
    for (std::size_t i = 0; i < per_f; ++i) out.values[fi * per_f + i] *= scale;
  }
  return out;
}

}  // namespace lcris
