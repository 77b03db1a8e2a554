// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "constants.hpp"
#include "errors.hpp"

namespace lcris {

namespace {

double max_step(const std::vector<double>& axis) {
  double s = 0.0;
  for (std::size_t i = 1; i < axis.size(); ++i) s = std::max(s, axis[i] - axis[i - 1]);
  return s;
}

std::size_t nearest(const std::vector<double>& axis, double value) {
  auto it = std::lower_bound(axis.begin(), axis.end(), value);
  if (it == axis.end()) return axis.size() - 1;
  const auto i = static_cast<std::size_t>(it - axis.begin());
  if (i > 0 && value - axis[i - 1] <= axis[i] - value) return i - 1;
  return i;
}

}  // namespace

PeakTrack track_peak(const FarFieldGrid& grid, const AngleDirection& near, double window) {
  grid.validate();
  const double step = std::max(max_step(grid.theta_axis), max_step(grid.phi_axis));
  if (!(window > step))
    throw DomainError(fmt::format("tracking window {} deg must exceed the grid step {} deg", window, step));

  const auto& ta = grid.theta_axis;
  const auto& pa = grid.phi_axis;
  PeakTrack track;
  AngleDirection seed = near;
  for (std::size_t fi = 0; fi < grid.freq_axis.size(); ++fi) {
    double best = -1.0, lowest = std::numeric_limits<double>::infinity();
    std::size_t bt = 0, bp = 0;
    for (std::size_t ti = 0; ti < ta.size(); ++ti) {
      if (std::abs(ta[ti] - seed.theta) > window) continue;
      for (std::size_t pi = 0; pi < pa.size(); ++pi) {
        if (std::abs(pa[pi] - seed.phi) > window) continue;
        const double m = std::abs(grid.at(fi, ti, pi));
        lowest = std::min(lowest, m);
        if (m > best) {
          best = m;
          bt = ti;
          bp = pi;
        }
      }
    }
    if (best < 0.0) throw DomainError("tracking window contains no grid samples");

    // A larger sample just outside the window means the beam moved faster than the window.
    bool escaped = false;
    auto check = [&](std::size_t ti, std::size_t pi) {
      if (std::abs(grid.at(fi, ti, pi)) > best) escaped = true;
    };
    if (bt > 0 && std::abs(ta[bt - 1] - seed.theta) > window) check(bt - 1, bp);
    if (bt + 1 < ta.size() && std::abs(ta[bt + 1] - seed.theta) > window) check(bt + 1, bp);
    if (bp > 0 && std::abs(pa[bp - 1] - seed.phi) > window) check(bt, bp - 1);
    if (bp + 1 < pa.size() && std::abs(pa[bp + 1] - seed.phi) > window) check(bt, bp + 1);

    const bool flat = best - lowest <= 1e-9 * std::max(best, 1e-300);
    track.theta.push_back(ta[bt]);
    track.phi.push_back(pa[bp]);
    track.magnitude.push_back(best);
    track.escaped.push_back(escaped);
    track.flat.push_back(flat);
    track.tracking_flag = track.tracking_flag || escaped;
    seed = {ta[bt], pa[bp]};
  }
  return track;
}

std::vector<double> fixed_angle_db(const FarFieldGrid& grid, const AngleDirection& dir) {
  const std::size_t ti = nearest(grid.theta_axis, dir.theta), pi = nearest(grid.phi_axis, dir.phi);
  std::vector<double> out(grid.freq_axis.size());
  for (std::size_t fi = 0; fi < out.size(); ++fi) out[fi] = db20(std::abs(grid.at(fi, ti, pi)));
  return out;
}

void EfficiencySpectrum::write_csv(std::ostream& out) const {
  out << "freq_hz,eta,theta_pk_deg,mag_db\n";
  for (std::size_t i = 0; i < freq_axis.size(); ++i)
    out << fmt::format("{:.6f},{:.9e},{:.4f},{:.6f}\n", freq_axis[i], eta[i], theta_track[i], mag_db[i]);
}

double EfficiencySpectrum::peak_eta() const {
  double best = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i)
    if (!flagged[i] && std::isfinite(eta[i])) best = std::max(best, eta[i]);
  return best;
}

namespace {

double eta_from_rcs(double sigma, double area, const BistaticAngles& a, double frequency) {
  // The efficiency denominator is the metal-plate RCS of the same aperture.
  return sigma / metal_plate_rcs(area, a.theta_tx, a.theta_rx, a.phi_tx, a.phi_rx, frequency);
}

}  // namespace

EfficiencySpectrum efficiency_from_simulation(const FarFieldGrid& rcs_grid, const ApertureLayout& layout,
                                              const EfficiencyGeometry& geometry) {
  if (rcs_grid.normalization != GridNormalization::rcs_m2)
    throw StateError(fmt::format("efficiency needs an rcs_m2 grid, got '{}'", to_string(rcs_grid.normalization)));
  const double area = aperture_area(layout);
  const PeakTrack track = track_peak(rcs_grid, geometry.target, geometry.window);
  const std::size_t t_fallback = nearest(rcs_grid.theta_axis, geometry.target.theta);
  const std::size_t p_fallback = nearest(rcs_grid.phi_axis, geometry.target.phi);

  EfficiencySpectrum spec;
  for (std::size_t fi = 0; fi < rcs_grid.freq_axis.size(); ++fi) {
    const double f = rcs_grid.freq_axis[fi];
    bool flagged = track.flat[fi];
    double th = track.theta[fi], ph = track.phi[fi];
    double sigma = track.magnitude[fi] * track.magnitude[fi];
    if (flagged) {
      th = rcs_grid.theta_axis[t_fallback];
      ph = rcs_grid.phi_axis[p_fallback];
      sigma = std::norm(rcs_grid.at(fi, t_fallback, p_fallback));
    }
    double eta = std::numeric_limits<double>::quiet_NaN();
    if (std::abs(th) < 90.0 && std::abs(ph) < 90.0)
      eta = eta_from_rcs(sigma, area, {geometry.theta_tx, th, geometry.phi_tx, ph}, f);
    else
      flagged = true;
    spec.freq_axis.push_back(f);
    spec.eta.push_back(eta);
    spec.theta_track.push_back(th);
    spec.phi_track.push_back(ph);
    spec.mag_db.push_back(db10(sigma));
    spec.flagged.push_back(flagged || track.escaped[fi]);
  }
  return spec;
}

void MeasuredTraces::validate() const {
  if (freq_axis.size() != s21_ris_db.size() || freq_axis.size() != s21_mp_db.size())
    throw DataError("trace columns have different lengths");
  if (freq_axis.empty()) throw DataError("no trace samples");
  if (!(area_ris > 0.0) || !(area_mp > 0.0)) throw DomainError("aperture areas must be positive");
}

EfficiencySpectrum reduce_measurement(const MeasuredTraces& traces) {
  traces.validate();
  const auto& g = traces.geometry;
  EfficiencySpectrum spec;
  for (std::size_t i = 0; i < traces.freq_axis.size(); ++i) {
    const double f = traces.freq_axis[i];
    const double s_ris = traces.s21_ris_db[i], s_mp = traces.s21_mp_db[i];
    double eta = std::numeric_limits<double>::quiet_NaN();
    double sigma_dbsm = std::numeric_limits<double>::quiet_NaN();
    const bool ok = std::isfinite(f) && f > 0.0 && std::isfinite(s_ris) && std::isfinite(s_mp);
    if (ok) {
      const double sigma_mp = metal_plate_rcs(traces.area_mp, g.theta_tx, g.theta_rx, g.phi_tx, g.phi_rx, f);
      sigma_dbsm = db10(sigma_mp) + (s_ris - s_mp);
      eta = eta_from_rcs(from_db10(sigma_dbsm), traces.area_ris, g, f);
    }
    spec.freq_axis.push_back(f);
    spec.eta.push_back(eta);
    spec.theta_track.push_back(g.theta_rx);
    spec.phi_track.push_back(g.phi_rx);
    spec.mag_db.push_back(sigma_dbsm);
    spec.flagged.push_back(!ok);
  }
  return spec;
}

Bandwidth bandwidth_3db(std::span<const double> freq, std::span<const double> level_db) {
  if (freq.size() != level_db.size() || freq.empty())
    throw DomainError("bandwidth needs matching, non-empty frequency and level arrays");
  const auto imax = static_cast<std::size_t>(std::max_element(level_db.begin(), level_db.end()) - level_db.begin());
  const double peak = level_db[imax];
  const double floor_db = peak - 3.0;

  Bandwidth bw;
  bw.f_peak = freq[imax];
  // Ties at the maximum must form one contiguous run that is not the whole sweep.
  std::size_t first = freq.size(), last = 0, count = 0;
  for (std::size_t i = 0; i < freq.size(); ++i)
    if (level_db[i] >= peak - 1e-9) {
      first = std::min(first, i);
      last = std::max(last, i);
      ++count;
    }
  bw.no_unique_max = (last - first + 1 != count) || count == freq.size();

  std::size_t lo = imax;
  while (lo > 0 && level_db[lo - 1] >= floor_db) --lo;
  if (lo == 0) {
    bw.f_lo = freq.front();
    bw.lo_clipped = true;
  } else {
    const double t = (floor_db - level_db[lo - 1]) / (level_db[lo] - level_db[lo - 1]);
    bw.f_lo = freq[lo - 1] + t * (freq[lo] - freq[lo - 1]);
  }
  std::size_t hi = imax;
  while (hi + 1 < freq.size() && level_db[hi + 1] >= floor_db) ++hi;
  if (hi + 1 == freq.size()) {
    bw.f_hi = freq.back();
    bw.hi_clipped = true;
  } else {
    const double t = (level_db[hi] - floor_db) / (level_db[hi] - level_db[hi + 1]);
    bw.f_hi = freq[hi] + t * (freq[hi + 1] - freq[hi]);
  }
  bw.f_center = 0.5 * (bw.f_lo + bw.f_hi);
  bw.fractional = (bw.f_hi - bw.f_lo) / bw.f_center;
  return bw;
}

PhaseBandwidth phase_bandwidth_25pct(std::span<const double> freq, std::span<const double> dphi,
                                     double f_center) {
  if (freq.size() != dphi.size() || freq.size() < 2)
    throw DomainError("phase bandwidth needs matching arrays with at least two samples");
  if (!(f_center >= freq.front() && f_center <= freq.back()))
    throw DomainError("center frequency outside the sweep");

  // First sample strictly above f_center, clamped so [right - 1, right] brackets it.
  std::size_t right = static_cast<std::size_t>(std::upper_bound(freq.begin(), freq.end(), f_center) - freq.begin());
  right = std::clamp<std::size_t>(right, 1, freq.size() - 1);
  const std::size_t left = right - 1;
  const double tc = (f_center - freq[left]) / (freq[right] - freq[left]);
  const double ref = dphi[left] + tc * (dphi[right] - dphi[left]);
  const double tol = 0.25 * std::abs(ref);
  auto inside = [&](std::size_t i) { return std::abs(dphi[i] - ref) <= tol; };
  // Threshold crossing on the segment from an inside point (fa, pa) to an outside point (fb, pb).
  auto crossing = [&](double fa, double pa, double fb, double pb) {
    const double target = pb > ref ? ref + tol : ref - tol;
    const double t = std::clamp((target - pa) / (pb - pa), 0.0, 1.0);
    return fa + t * (fb - fa);
  };

  PhaseBandwidth pb;
  pb.f_center = f_center;
  double fa = f_center, pa = ref;
  pb.f_hi = freq.back();
  bool closed = false;
  for (std::size_t i = right; i < freq.size(); ++i) {
    if (freq[i] <= f_center) continue;
    if (!inside(i)) {
      pb.f_hi = crossing(fa, pa, freq[i], dphi[i]);
      closed = true;
      break;
    }
    fa = freq[i];
    pa = dphi[i];
  }
  pb.unbounded = !closed;

  fa = f_center;
  pa = ref;
  pb.f_lo = freq.front();
  closed = false;
  for (std::size_t j = left + 1; j-- > 0;) {
    if (freq[j] >= f_center) continue;
    if (!inside(j)) {
      pb.f_lo = crossing(fa, pa, freq[j], dphi[j]);
      closed = true;
      break;
    }
    fa = freq[j];
    pa = dphi[j];
  }
  pb.unbounded = pb.unbounded || !closed;
  pb.fractional = (pb.f_hi - pb.f_lo) / f_center;
  return pb;
}

LossBudget loss_budget(double eta, std::vector<std::pair<std::string, double>> mechanisms) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError(fmt::format("efficiency {} outside [0, 1]", eta));
  double sum = 0.0;
  for (const auto& [name, frac] : mechanisms) {
    if (!(frac >= 0.0)) throw DomainError(fmt::format("loss fraction '{}' must be >= 0", name));
    sum += frac;
  }
  if (sum > 1.0 - eta + 1e-12)
    throw DomainError(fmt::format("loss fractions sum to {} which exceeds 1 - eta = {}", sum, 1.0 - eta));
  return {eta, std::move(mechanisms), 1.0 - eta - sum};
}

}  // namespace lcris
