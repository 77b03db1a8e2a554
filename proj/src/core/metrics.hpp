// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aperture.hpp"
#include "scattering.hpp"

namespace lcris {

struct AngleDirection {
  double theta = 0.0;  // deg
  double phi = 0.0;
};

struct PeakTrack {
  std::vector<double> theta;     // deg, per frequency
  std::vector<double> phi;       // deg
  std::vector<double> magnitude; // |grid value| at the peak
  std::vector<bool> escaped;     // peak sat on the window edge with a larger sample outside
  std::vector<bool> flat;        // no distinguishable maximum inside the window
  bool tracking_flag = false;    // any escaped sample
};

/// Follows the maximum across frequency, searching within +/- `window` deg
/// (in both theta and phi) of the previous frequency's peak.
PeakTrack track_peak(const FarFieldGrid& grid, const AngleDirection& near, double window);

/// Magnitude in dB (20 log10) along a fixed direction, nearest grid sample.
std::vector<double> fixed_angle_db(const FarFieldGrid& grid, const AngleDirection& dir);

struct EfficiencySpectrum {
  std::vector<double> freq_axis;
  std::vector<double> eta;
  std::vector<double> theta_track;
  std::vector<double> phi_track;
  std::vector<double> mag_db;
  std::vector<bool> flagged;

  void write_csv(std::ostream& out) const;
  double peak_eta() const;
};

struct EfficiencyGeometry {
  double theta_tx = 0.0;
  double phi_tx = 0.0;
  AngleDirection target;  // seed for peak tracking and fallback for flat patterns
  double window = 10.0;   // deg
};

/// Aperture efficiency of a simulated RCS grid at the squint-corrected peak;
/// Rx angles are the tracked peak, area is dx dy M N.
EfficiencySpectrum efficiency_from_simulation(const FarFieldGrid& rcs_grid, const ApertureLayout& layout,
                                              const EfficiencyGeometry& geometry);

struct BistaticAngles {
  double theta_tx = 0.0, theta_rx = 0.0, phi_tx = 0.0, phi_rx = 0.0;  // deg
};

struct MeasuredTraces {
  std::vector<double> freq_axis;
  std::vector<double> s21_ris_db;
  std::vector<double> s21_mp_db;
  BistaticAngles geometry;
  double area_ris = 0.0;
  double area_mp = 0.0;

  void validate() const;
};

/// RIS RCS by substitution in dBsm, then aperture efficiency. mag_db holds
/// the RIS RCS in dBsm.
EfficiencySpectrum reduce_measurement(const MeasuredTraces& traces);

struct Bandwidth {
  double f_lo = 0.0, f_hi = 0.0, f_center = 0.0, f_peak = 0.0;
  double fractional = 0.0;
  bool lo_clipped = false;  // band edge outside the sweep
  bool hi_clipped = false;
  bool no_unique_max = false;
};

/// Contiguous -3 dB interval around the global maximum of a dB curve, edges
/// linearly interpolated; fractional bandwidth is relative to the edge midpoint.
Bandwidth bandwidth_3db(std::span<const double> freq, std::span<const double> level_db);

struct PhaseBandwidth {
  double f_lo = 0.0, f_hi = 0.0, f_center = 0.0;
  double fractional = 0.0;
  bool unbounded = false;  // at least one side never left the 25 % band
};

PhaseBandwidth phase_bandwidth_25pct(std::span<const double> freq, std::span<const double> dphi,
                                     double f_center);

struct LossBudget {
  double eta = 0.0;
  std::vector<std::pair<std::string, double>> mechanisms;
  double residual = 0.0;
};

/// eta + sum(mechanisms) + residual = 1.
LossBudget loss_budget(double eta, std::vector<std::pair<std::string, double>> mechanisms);

}  // namespace lcris
