// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "constants.hpp"
#include "io.hpp"
#include "materials.hpp"
#include "metrics.hpp"
#include "phase_shifter.hpp"
#include "pipelines.hpp"
#include "scattering.hpp"
#include "scenario.hpp"
#include "steering.hpp"

using namespace lcris;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  bool pass = o.pass;
  std::string timing = fmt::format("{:.3f} s", secs);
  if (budget_s > 0.0) {
    timing += fmt::format(" (budget {} s)", budget_s);
    if (secs > budget_s) pass = false;
  }
  if (!pass) ++g_failures;
  std::printf("%s [%2d] %s: %s; %s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}

const char* kLayout750 = R"("layout": {"rows": 30, "cols": 25, "dx_lambda0": 0.45, "grid": "triangular"})";
const char* kLayout120 = R"("layout": {"rows": 12, "cols": 10, "dx_lambda0": 0.45, "grid": "triangular"})";

Scenario scenario(const std::string& body) { return parse_scenario("{" + body + "}"); }

// Brute-force physical optics for a PEC square plate of side a in the xy-plane.
// Incidence from direction d_i (unit, toward the source), TE polarization
// (E along y), observation toward r_hat. Returns the bistatic RCS in m^2.
double po_plate_rcs(double side, double theta_tx_deg, double theta_obs_deg, double frequency, int n) {
  using V = std::array<double, 3>;
  auto cross = [](const V& a, const V& b) {
    return V{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  const double eta0 = 376.730313668;
  const double k = 2.0 * kPi * frequency / kSpeedOfLight;
  const double ti = deg2rad(theta_tx_deg), to = deg2rad(theta_obs_deg);
  const V d_i{std::sin(ti), 0.0, std::cos(ti)};
  const V k_i{-d_i[0], -d_i[1], -d_i[2]};
  const V e_i{0.0, 1.0, 0.0};
  V h_i = cross(k_i, e_i);
  for (auto& c : h_i) c /= eta0;
  V j = cross(V{0.0, 0.0, 1.0}, h_i);
  for (auto& c : j) c *= 2.0;
  const V r{std::sin(to), 0.0, std::cos(to)};
  const double jr = j[0] * r[0] + j[1] * r[1] + j[2] * r[2];
  const V jt{j[0] - jr * r[0], j[1] - jr * r[1], j[2] - jr * r[2]};

  const double h = side / n;
  std::complex<double> integral{};
  for (int a = 0; a < n; ++a) {
    const double x = -0.5 * side + (a + 0.5) * h;
    for (int b = 0; b < n; ++b) {
      const double y = -0.5 * side + (b + 0.5) * h;
      const double phase = k * ((r[0] + d_i[0]) * x + (r[1] + d_i[1]) * y);
      integral += std::polar(h * h, phase);
    }
  }
  const double vec = std::sqrt(jt[0] * jt[0] + jt[1] * jt[1] + jt[2] * jt[2]);
  const double amp = k * eta0 / (4.0 * kPi) * vec * std::abs(integral);
  return 4.0 * kPi * amp * amp;
}

std::vector<double> axis(double lo, double hi, double step) {
  std::vector<double> v;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t i = 0; i <= n; ++i) v.push_back(lo + step * static_cast<double>(i));
  return v;
}

std::vector<ElementState> ideal_states(const PhaseProfile& p, std::span<const double> freq) {
  std::vector<ElementState> s(p.phase_per_element.size());
  for (double f : freq) {
    const auto g = ideal_gamma(p, f);
    for (std::size_t n = 0; n < s.size(); ++n) s[n].gamma.push_back(g[n]);
  }
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto other = b / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) return false;
    ++files;
  }
  return files > 0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main() {
  const double f0 = 60e9;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());

  criterion(1, "FoM arithmetic", 1e-3, [] {
    const double fom = figure_of_merit(360.0, 4.5);
    return Outcome{fom == 80.0, fmt::format("figure_of_merit(360 deg, 4.5 dB) = {:.17g} deg/dB (expect 80 exactly)", fom)};
  });

  criterion(2, "Metal-plate RCS", 1.0, [&] {
    const double area = 3.792e-3;
    const double sigma = metal_plate_rcs(area, 0, 0, 0, 0, f0);
    const double rel = std::abs(sigma / 7.24 - 1.0);
    const double lam = wavelength(f0);
    double worst = 0.0;
    struct Case {
      double side, th;
    };
    for (const Case c : {Case{5.0 * lam, 0.0}, Case{std::sqrt(area), 0.0}, Case{8.0 * lam, 20.0}, Case{12.0 * lam, 40.0}}) {
      // Specular observation for oblique cases; backscatter at normal incidence.
      const double po = po_plate_rcs(c.side, c.th, -c.th, f0, 200);
      const double eq = metal_plate_rcs(c.side * c.side, c.th, c.th, 0, 0, f0);
      worst = std::max(worst, std::abs(eq / po - 1.0));
    }
    return Outcome{rel <= 5e-3 && worst <= 1e-3,
                   fmt::format("sigma_MP(3.792e-3 m^2, 60 GHz) = {:.4f} m^2 (7.24 +/- 0.5%, off {:.3f}%); "
                               "max deviation vs PO quadrature {:.2e} (<= 1e-3)",
                               sigma, 100 * rel, worst)};
  });

  criterion(3, "Power/response closed forms", 1e-3, [] {
    const double p = array_power(21.5e-9, 1000000);
    const std::string s = si_format(p, "W");
    const auto a = response_times(ResponseTimeBase{}, 4.6e-6), b = response_times(ResponseTimeBase{}, 9.2e-6);
    const double r_on = b.tau_on / a.tau_on, r_off = b.tau_off / a.tau_off;
    const bool ok = std::abs(p - 0.0215) <= 0.0215 * 1e-15 && s == "21.5 mW" && r_on == 4.0 && r_off == 4.0;
    return Outcome{ok, fmt::format("array_power = {:.17g} W (\"{}\"); tau ratios {:.17g}, {:.17g}", p, s, r_on, r_off)};
  });

  criterion(4, "Steering accuracy", 10.0, [&] {
    const auto sc = scenario(std::string(kLayout750) + R"(,"target":{"theta_r_deg":0})");
    const auto layout = sc.build_aperture();
    const std::vector<double> freq{f0}, phi{0.0};
    const auto theta = axis(-90.0, 90.0, 0.02);
    double worst = 0.0;
    std::string list;
    for (double tr : {-60.0, -33.0, 0.0, 30.0, 40.0, 60.0}) {
      SynthesisOptions opt;
      opt.wrap = false;
      const auto prof = synthesize_profile(layout, {tr, 0.0}, sc.design_wave(), 360.0, opt);
      const auto g = far_field(layout, freq, ideal_states(prof, freq), sc.design_wave(), theta, phi);
      std::size_t b = 0;
      for (std::size_t i = 0; i < g.values.size(); ++i)
        if (std::abs(g.values[i]) > std::abs(g.values[b])) b = i;
      worst = std::max(worst, std::abs(theta[b] - tr));
      list += fmt::format("{}->{:.2f} ", tr, theta[b]);
    }
    return Outcome{worst <= 0.5, fmt::format("peaks {}; max error {:.3f} deg (<= 0.5)", list, worst)};
  });

  criterion(5, "Grating-lobe absence", 0.0, [&] {
    const auto sc = scenario(std::string(kLayout750) + R"(,"target":{"theta_r_deg":0})");
    const auto layout = sc.build_aperture();
    const std::vector<double> freq{f0};
    const auto theta = axis(-90.0, 90.0, 0.5), phi = axis(-90.0, 90.0, 1.0);
    FarFieldOptions ff;
    ff.threads = hw;
    bool ok = true;
    std::string list;
    for (double tr : {-60.0, -33.0, 0.0, 30.0, 40.0, 60.0}) {
      SynthesisOptions opt;
      opt.wrap = false;
      const auto prof = synthesize_profile(layout, {tr, 0.0}, sc.design_wave(), 360.0, opt);
      const auto g = far_field(layout, freq, ideal_states(prof, freq), sc.design_wave(), theta, phi, ff);
      const std::size_t nt = theta.size(), np = phi.size();
      auto mag = [&](std::size_t ti, std::size_t pi) { return std::abs(g.at(0, ti, pi)); };
      // Local maxima over the visible (theta, phi) grid, 8-neighbourhood.
      std::vector<std::pair<double, std::size_t>> peaks;
      for (std::size_t ti = 0; ti < nt; ++ti)
        for (std::size_t pi = 0; pi < np; ++pi) {
          const double m = mag(ti, pi);
          bool is_max = m > 0.0;
          for (int dt = -1; dt <= 1 && is_max; ++dt)
            for (int dp = -1; dp <= 1 && is_max; ++dp) {
              if (!dt && !dp) continue;
              const long a = static_cast<long>(ti) + dt, b = static_cast<long>(pi) + dp;
              if (a < 0 || b < 0 || a >= static_cast<long>(nt) || b >= static_cast<long>(np)) continue;
              if (mag(a, b) > m) is_max = false;
            }
          if (is_max) peaks.emplace_back(m, ti * np + pi);
        }
      std::sort(peaks.rbegin(), peaks.rend());
      const double th_main = theta[peaks[0].second / np], ph_main = phi[peaks[0].second % np];
      const bool main_on_target = std::abs(th_main - tr) <= 1.0 && std::abs(ph_main) <= 1.0;
      const double second = peaks.size() > 1 ? db20(peaks[1].first / peaks[0].first) : -300.0;
      ok = ok && main_on_target && second < 0.0;
      list += fmt::format("{}: main ({:.1f},{:.1f}) next lobe {:.1f} dB; ", tr, th_main, ph_main, second);
    }
    return Outcome{ok, list + "global maximum is the main beam for every angle"};
  });

  criterion(6, "Squint consistency", 5.0, [&] {
    auto sc = scenario(std::string(kLayout750) +
                       R"(,"target":{"theta_r_deg":40},
                          "excitation":{"f_design_hz":60e9,"f_start_hz":60e9,"f_stop_hz":63e9,"f_points":31},
                          "sweep":{"theta_min_deg":0,"theta_max_deg":80,"theta_points":1601,"track_window_deg":5})");
    RunOptions ro;
    ro.threads = hw;
    const auto o = compute_steer(sc, ro);
    const double tracked = o.spectrum.theta_track.back();
    const double expect = rad2deg(std::asin(std::sin(deg2rad(40.0)) / 1.05));
    return Outcome{std::abs(tracked - expect) <= 0.5,
                   fmt::format("tracked peak at 63 GHz = {:.2f} deg, closed form {:.2f} deg (+/- 0.5)", tracked, expect)};
  });

  criterion(7, "Bandwidth ordering", 0.0, [&] {
    RunOptions ro;
    ro.threads = hw;
    bool order_ok = true;
    std::string list;
    auto run = [&](const std::string& layout, double tr, double misalign) {
      const auto sc = scenario(layout + fmt::format(R"(,"target":{{"theta_r_deg":{}}},"tolerance":{{"misalign_um":{}}})", tr, misalign));
      const auto o = compute_steer(sc, ro);
      order_ok = order_ok && o.bw_tracked.fractional >= o.bw_fixed.fractional - 1e-12;
      list += fmt::format("{}el {}deg {}um: {:.1f}%/{:.1f}%; ", sc.build_aperture().size(), tr, misalign,
                          100 * o.bw_tracked.fractional, 100 * o.bw_fixed.fractional);
      return o.bw_tracked.fractional;
    };
    for (double tr : {-33.0, 0.0, 20.0, 30.0, 60.0}) run(kLayout750, tr, 0.0);
    const double ideal = run(kLayout750, 40.0, 0.0);
    const double mis750 = run(kLayout750, 40.0, 30.0);
    const double mis120 = run(kLayout120, 40.0, 30.0);
    run(kLayout120, 40.0, 0.0);
    const bool ok = order_ok && ideal >= 0.20 && mis750 >= 0.08 && mis750 <= 0.11 && mis120 >= 0.08 && mis120 <= 0.11;
    return Outcome{ok, fmt::format("tracked/fixed {}ideal 40 deg {:.2f}% (>= 20); 30 um misaligned {:.2f}% (750), "
                                   "{:.2f}% (120) (8-11)", list, 100 * ideal, 100 * mis750, 100 * mis120)};
  });

  criterion(8, "Efficiency anchors", 0.0, [&] {
    const auto sc = scenario(std::string(kLayout750) + R"(,"target":{"theta_r_deg":0})");
    const auto layout = sc.build_aperture();
    const auto freq = sc.excitation.freq_axis();
    std::vector<ElementState> unit(layout.size());
    for (auto& s : unit) s.gamma.assign(freq.size(), cplx{1.0, 0.0});
    const auto theta = axis(-5.0, 5.0, 0.25);
    const std::vector<double> phi{0.0};
    const auto rcs = ris_rcs(far_field(layout, freq, unit, sc.design_wave(), theta, phi), layout, sc.design_wave());
    const auto ideal = efficiency_from_simulation(rcs, layout, {0.0, 0.0, {0.0, 0.0}, 2.0});
    double dev = 0.0;
    for (double e : ideal.eta) dev = std::max(dev, std::abs(e - 1.0));

    RunOptions ro;
    ro.threads = hw;
    const double peak = compute_steer(sc, ro).spectrum.peak_eta();
    const auto budget = loss_budget(peak, {{"conductor", 0.286}, {"lc", 0.214}, {"glass", 0.182}});
    const bool ok = dev <= 1e-9 && std::abs(peak - 0.215) <= 0.01 && std::abs(budget.residual - 0.103) <= 0.012;
    return Outcome{ok, fmt::format("ideal in-phase |eta - 1| <= {:.1e}; broadside peak eta {:.2f}% (21.5 +/- 1); "
                                   "budget residual {:.4f} (0.103 +/- 0.012)",
                                   dev, 100 * peak, budget.residual)};
  });

  criterion(9, "Tilted-field degradation", 0.0, [&] {
    const std::string base = std::string(kLayout120) + R"(,"target":{"theta_r_deg":30})";
    const auto uni = run_trial(scenario(base), 1, false, false);
    const auto tilt = run_trial(
        scenario(base + R"(,"tolerance":{"kind":"tilted","t_nom_m":4.6e-6,"gx":1.2e-4,"gy":4.5e-5})"), 1, false, false);
    const double drop = uni.peak_db - tilt.peak_db;
    const bool ok = tilt.theta_peak >= 38.0 && tilt.theta_peak <= 45.0 && drop >= 2.0 && drop <= 4.0;
    return Outcome{ok, fmt::format("gx 1.2e-4, gy 4.5e-5 on 12x10: peak {:.2f} deg (38-45, uniform {:.2f}), "
                                   "magnitude drop {:.2f} dB (2-4)", tilt.theta_peak, uni.theta_peak, drop)};
  });

  criterion(10, "Optimizer behavior", 300.0, [&] {
    const std::string base = std::string(kLayout750) + R"(,"target":{"theta_r_deg":30})";
    const double uniform = *run_trial(scenario(base), 1, true, false).improvement_db;
    const auto rnd = scenario(base + R"(,"tolerance":{"kind":"random","sigma_m":0.5e-6,"corr_len_m":3e-3})");
    std::vector<double> col, elem;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      col.push_back(*run_trial(rnd, seed, true, false).improvement_db);
      elem.push_back(*run_trial(rnd, seed, true, true).improvement_db);
    }
    const double med = median(col);
    const double lo = *std::min_element(col.begin(), col.end());
    const bool ok = uniform <= 0.5 && med >= 3.0 && lo >= 0.0;
    return Outcome{ok, fmt::format("column-wise: uniform {:.2f} dB (<= 0.5); random median {:.2f} dB (>= 3), "
                                   "min {:.2f} dB (>= 0); element-wise median {:.2f} dB (informational)",
                                   uniform, med, lo, median(elem))};
  });

  criterion(11, "Measurement reduction identities", 0.0, [] {
    MeasuredTraces t;
    for (int i = 0; i < 101; ++i) {
      t.freq_axis.push_back(50e9 + 0.2e9 * i);
      t.s21_mp_db.push_back(-40.0 + 3.0 * std::sin(0.1 * i));
    }
    t.geometry = {20.0, 20.0, 0.0, 0.0};
    t.area_ris = t.area_mp = 3.792e-3;
    auto worst = [](const EfficiencySpectrum& s, double expect) {
      double w = 0.0;
      for (double e : s.eta) w = std::max(w, std::abs(e / expect - 1.0));
      return w;
    };
    t.s21_ris_db = t.s21_mp_db;
    const double e1 = worst(reduce_measurement(t), 1.0);
    for (auto& v : t.s21_ris_db) v -= 10.0;
    const auto base = reduce_measurement(t);
    const double e2 = worst(base, 0.1);
    for (auto& v : t.s21_ris_db) v += 7.3;
    for (auto& v : t.s21_mp_db) v += 7.3;
    const auto shifted = reduce_measurement(t);
    double e3 = 0.0;
    for (std::size_t i = 0; i < base.eta.size(); ++i) e3 = std::max(e3, std::abs(shifted.eta[i] / base.eta[i] - 1.0));
    const bool ok = e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12;
    return Outcome{ok, fmt::format("identical traces |eta-1| {:.1e}; -10 dB |eta/0.1-1| {:.1e}; common offset {:.1e} "
                                   "(all <= 1e-12)", e1, e2, e3)};
  });

  criterion(12, "Determinism & performance", 60.0, [&] {
    const fs::path root = fs::temp_directory_path() / fmt::format("lcris_accept_{}", ::getpid());
    const auto sc = scenario(std::string(kLayout120) +
                             R"(,"target":{"theta_r_deg":30},"excitation":{"f_points":41},
                                "tolerance":{"kind":"random","sigma_m":0.5e-6,"corr_len_m":3e-3,"seed":7})");
    std::size_t files = 0, mc_files = 0;
    RunOptions a, b;
    a.out_dir = root / "a";
    b.out_dir = root / "b";
    b.threads = hw;  // thread count must not change results
    run_steer(sc, a);
    run_steer(sc, b);
    const bool steer_same = same_tree(root / "a", root / "b", files);
    a.out_dir = root / "mc_a";
    b.out_dir = root / "mc_b";
    a.trials = b.trials = 5;
    a.optimize_trials = b.optimize_trials = true;
    run_tolerance_mc(sc, a);
    run_tolerance_mc(sc, b);
    const bool mc_same = same_tree(root / "mc_a", root / "mc_b", mc_files);
    fs::remove_all(root);

    const auto big = scenario(std::string(kLayout750) + R"(,"target":{"theta_r_deg":40})");
    RunOptions ro;
    ro.threads = hw;
    const auto t0 = Clock::now();
    const auto o = compute_steer(big, ro);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool sized = o.rcs.freq_axis.size() == 201 && o.rcs.theta_axis.size() == 721 && o.design.layout.size() == 750;
    return Outcome{steer_same && mc_same && sized && secs < 60.0,
                   fmt::format("steer outputs identical ({} files), tolerance-mc identical ({} files); "
                               "750 x 201 x 721 steer in {:.2f} s on {} thread(s) (< 60)",
                               files, mc_files, secs, hw)};
  });

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
