// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "aperture.hpp"
#include "materials.hpp"
#include "phase_shifter.hpp"
#include "tolerance.hpp"

namespace lcris {

using cplx = std::complex<double>;

/// Finite-band loss of the aperture-coupled radiator: a Gaussian power window
/// centered at f0 whose -3 dB full width is `fractional_bw * f0`, on top of a
/// constant loss at the center.
struct RadiatorWindow {
  double f0 = 60e9;
  double fractional_bw = 0.25;
  double center_loss_db = 0.426;
  bool enabled = true;

  double loss_db(double frequency) const;
};

/// Everything needed to turn (bias, thickness, frequency) into a reflection coefficient.
struct ElementModel {
  LcMaterial material;
  StackMaterials stack;
  DelayLineSpec line;
  RadiatorWindow radiator;
  MisalignmentModel misalignment;

  void validate() const;
};

/// Reflection coefficient of one element; |gamma| <= 1 and
/// arg(gamma) = round-trip line phase.
cplx element_reflection(const ElementModel& model, double v_bias, double t_lc, double frequency,
                        const Misalignment& offset = {});

struct ElementState {
  double v_bias = 0.0;
  double t_lc = 0.0;
  std::vector<cplx> gamma;  // one per frequency sample
};

std::vector<ElementState> element_states(const ElementModel& model, std::span<const double> voltages,
                                         const ToleranceField& field,
                                         std::span<const double> freq_axis);

struct PlaneWave {
  double theta_inc = 0.0;  // deg, azimuth (steering plane)
  double phi_inc = 0.0;    // deg, elevation
  double frequency = 60e9;
  double amplitude = 1.0;

  void validate() const;
};

enum class GridNormalization { raw, rcs_m2, rel_metal_plate_db };
std::string_view to_string(GridNormalization n);

/// Complex samples over (frequency x theta x phi), row-major in that order.
/// For rcs_m2 grids |value|^2 is the RCS in m^2 and the phase is the field phase.
struct FarFieldGrid {
  std::vector<double> theta_axis;
  std::vector<double> phi_axis;
  std::vector<double> freq_axis;
  std::vector<cplx> values;
  GridNormalization normalization = GridNormalization::raw;

  std::size_t index(std::size_t fi, std::size_t ti, std::size_t pi) const {
    return (fi * theta_axis.size() + ti) * phi_axis.size() + pi;
  }
  const cplx& at(std::size_t fi, std::size_t ti, std::size_t pi) const { return values[index(fi, ti, pi)]; }
  void validate() const;
};

/// u = sin(theta), v = sin(phi) cos(theta).
struct DirectionCosines {
  double u = 0.0;
  double v = 0.0;
};
DirectionCosines direction_cosines(double theta_deg, double phi_deg);

double element_pattern(double theta_deg, double phi_deg, double exponent);

struct FarFieldOptions {
  double pattern_exponent = 0.5;
  unsigned threads = 1;
};

/// E(theta, phi) = sum_n gamma_n EP(theta, phi) exp(j k [x_n (u - u_inc) + y_n (v - v_inc)]).
FarFieldGrid far_field(const ApertureLayout& layout, std::span<const double> freq_axis,
                       std::span<const ElementState> states, const PlaneWave& wave,
                       std::span<const double> theta_axis, std::span<const double> phi_axis,
                       const FarFieldOptions& options = {});

/// Single-direction array sum used by objective evaluations.
cplx field_at(const ApertureLayout& layout, std::span<const cplx> gamma, double frequency,
              const PlaneWave& wave, double theta_deg, double phi_deg, double pattern_exponent);

/// 4 pi A^2 cos(theta_tx) cos(theta_rx) cos(phi_tx) cos(phi_rx) / lambda0^2.
double metal_plate_rcs(double area, double theta_tx, double theta_rx, double phi_tx,
                       double phi_rx, double frequency);

/// Converts a raw grid to RCS, anchoring the in-phase |gamma| = 1 aperture's
/// broadside response to the metal-plate RCS of the same area.
FarFieldGrid ris_rcs(const FarFieldGrid& grid, const ApertureLayout& layout, const PlaneWave& wave);

}  // namespace lcris
