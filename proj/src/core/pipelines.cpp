// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "constants.hpp"
#include "errors.hpp"
#include "io.hpp"

namespace lcris {

namespace {

class Summary {
public:
  template <typename T>
  void add(std::string_view key, const T& value) {
    text_ += fmt::format("{}: {}\n", key, value);
  }
  void num(std::string_view key, double value) { text_ += fmt::format("{}: {:.6g}\n", key, value); }
  const std::string& str() const { return text_; }

private:
  std::string text_;
};

std::filesystem::path out_dir(const Scenario& s, const RunOptions& o) {
  return o.out_dir.value_or(s.output_dir);
}

RunResult finish(OutputSet& out, const Summary& summary) {
  out.open("summary.txt") << summary.str();
  out.commit();
  return {summary.str(), out.dir(), out.names()};
}

void require_finite(std::span<const cplx> values, std::string_view what) {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericError(fmt::format("non-finite value in {}", what));
}

// Phases that need more range than the line offers are a configuration problem.
std::vector<double> design_voltages(const PhaseProfile& profile, const ElementModel& model, double t_nom) {
  const std::vector<double> t_assumed(profile.phase_per_element.size(), t_nom);
  try {
    return phases_to_voltages(profile, model, t_assumed);
  } catch (const RangeError& e) {
    throw ConfigError("steering.wrap_modulus_deg", e.what());
  }
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.empty()) return std::nan("");
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

std::string bw_flags(const Bandwidth& b) {
  std::string f;
  if (b.lo_clipped) f += "lo_clipped ";
  if (b.hi_clipped) f += "hi_clipped ";
  if (b.no_unique_max) f += "no_unique_max ";
  if (f.empty()) return "none";
  f.pop_back();
  return f;
}

// Column optimization starts from the profile the column-biased hardware can
// show; averaging wrapped per-element voltages over a column would not.
Scenario column_biased(Scenario s) {
  s.steering.column_constrained = true;
  return s;
}

}  // namespace

SteerDesign design_steering(const Scenario& scenario, std::optional<std::uint64_t> seed) {
  SteerDesign d;
  d.layout = scenario.build_aperture();
  d.model = scenario.element_model();
  d.field = scenario.build_field(d.layout, seed);
  SynthesisOptions opt;
  opt.wrap = scenario.steering.wrap;
  opt.column_constrained = scenario.steering.column_constrained;
  const PlaneWave wave = scenario.design_wave();
  const double modulus = scenario.steering.wrap_modulus_deg;
  try {
    d.profile = synthesize_profile(d.layout, scenario.target, wave, modulus, opt);
  } catch (const DomainError& e) {
    throw ConfigError("target", e.what());
  }
  if (opt.wrap) d.voltages = design_voltages(d.profile, d.model, scenario.tolerance.t_nom);
  return d;
}

std::vector<ElementState> realize_states(const SteerDesign& design, std::span<const double> freq_axis) {
  if (design.profile.wrapped) return element_states(design.model, design.voltages, design.field, freq_axis);
  std::vector<ElementState> states(design.layout.size());
  for (std::size_t n = 0; n < states.size(); ++n) {
    states[n].t_lc = design.field.t_lc_per_element[n];
    states[n].gamma.reserve(freq_axis.size());
  }
  for (double f : freq_axis) {
    const auto g = ideal_gamma(design.profile, f);
    for (std::size_t n = 0; n < states.size(); ++n) states[n].gamma.push_back(g[n]);
  }
  return states;
}

SteerOutcome compute_steer(const Scenario& scenario, const RunOptions& options) {
  SteerOutcome o{design_steering(scenario, options.seed), {}, {}, {}, {}, {}};
  const auto freq = scenario.excitation.freq_axis();
  const auto states = realize_states(o.design, freq);
  const PlaneWave wave = scenario.design_wave();
  const auto theta = scenario.sweep.theta_axis();
  const std::vector<double> phi{scenario.target.phi_r};
  FarFieldOptions ff;
  ff.pattern_exponent = scenario.sweep.pattern_exponent;
  ff.threads = std::max(1u, options.threads);
  const auto raw = far_field(o.design.layout, freq, states, wave, theta, phi, ff);
  require_finite(raw.values, "far-field grid");
  o.rcs = ris_rcs(raw, o.design.layout, wave);

  EfficiencyGeometry geo;
  geo.theta_tx = wave.theta_inc;
  geo.phi_tx = wave.phi_inc;
  geo.target = {scenario.target.theta_r, scenario.target.phi_r};
  geo.window = scenario.sweep.track_window_deg;
  try {
    o.spectrum = efficiency_from_simulation(o.rcs, o.design.layout, geo);
  } catch (const DomainError& e) {
    throw ConfigError("sweep.track_window_deg", e.what());
  }
  o.fixed_db = fixed_angle_db(o.rcs, geo.target);
  o.bw_tracked = bandwidth_3db(freq, o.spectrum.mag_db);
  o.bw_fixed = bandwidth_3db(freq, o.fixed_db);
  return o;
}

RunResult run_steer(const Scenario& scenario, const RunOptions& options) {
  const auto o = compute_steer(scenario, options);
  const auto& d = o.design;
  const auto& sp = o.spectrum;
  OutputSet out(out_dir(scenario, options));
  write_grid_csv(out.open("heatmap.csv"), o.rcs);
  write_grid_binary(out.open("heatmap.bin"), o.rcs);
  sp.write_csv(out.open("track.csv"));
  write_profile_csv(out.open("profile.csv"), d.profile, d.voltages);
  d.layout.write_csv(out.open("layout.csv"));

  auto& fx = out.open("fixed.csv");
  fx << "freq_hz,mag_db\n";
  for (std::size_t i = 0; i < sp.freq_axis.size(); ++i) fx << fmt::format("{:.6f},{:.6f}\n", sp.freq_axis[i], o.fixed_db[i]);

  std::size_t ipk = 0;
  for (std::size_t i = 0; i < sp.eta.size(); ++i)
    if (!sp.flagged[i] && std::isfinite(sp.eta[i]) && (sp.flagged[ipk] || !(sp.eta[i] <= sp.eta[ipk]))) ipk = i;

  Summary s;
  s.add("command", "steer");
  s.add("elements", d.layout.size());
  s.num("target_theta_deg", scenario.target.theta_r);
  s.num("target_phi_deg", scenario.target.phi_r);
  s.num("f_design_hz", scenario.excitation.f_design);
  s.add("profile", d.profile.wrapped ? "wrapped" : "true-time-delay");
  s.num("line_length_m", d.model.line.l_phys);
  s.num("peak_eta", sp.peak_eta());
  s.num("peak_eta_freq_hz", sp.freq_axis[ipk]);
  s.num("peak_theta_deg", sp.theta_track[ipk]);
  s.num("bw_tracked_fractional", o.bw_tracked.fractional);
  s.num("bw_tracked_f_lo_hz", o.bw_tracked.f_lo);
  s.num("bw_tracked_f_hi_hz", o.bw_tracked.f_hi);
  s.num("bw_tracked_f_center_hz", o.bw_tracked.f_center);
  s.add("bw_tracked_flags", bw_flags(o.bw_tracked));
  s.num("bw_fixed_fractional", o.bw_fixed.fractional);
  s.num("bw_fixed_f_center_hz", o.bw_fixed.f_center);
  s.add("bw_fixed_flags", bw_flags(o.bw_fixed));
  for (std::size_t i : {std::size_t{0}, sp.freq_axis.size() - 1}) {
    const auto pred = squint_predict(d.profile, sp.freq_axis[i]);
    s.num(fmt::format("squint_tracked_deg_at_{:.0f}hz", sp.freq_axis[i]), sp.theta_track[i]);
    s.num(fmt::format("squint_predicted_deg_at_{:.0f}hz", sp.freq_axis[i]), pred.theta_deg);
  }
  s.add("tracking_flag", o.spectrum.flagged.empty() ? false
                         : std::any_of(sp.flagged.begin(), sp.flagged.end(), [](bool b) { return b; }));
  s.add("clamp_events", d.field.clamp_events);
  for (const auto& w : d.profile.warnings) s.add("warning", w);
  return finish(out, s);
}

RunResult run_sweep(const Scenario& scenario, const RunOptions& options) {
  const auto d = design_steering(scenario, options.seed);
  const std::vector<double> freq{scenario.excitation.f_design};
  const auto states = realize_states(d, freq);
  const PlaneWave wave = scenario.design_wave();
  FarFieldOptions ff;
  ff.pattern_exponent = scenario.sweep.pattern_exponent;
  ff.threads = std::max(1u, options.threads);
  const auto raw = far_field(d.layout, freq, states, wave, scenario.sweep.theta_axis(),
                             scenario.sweep.phi_axis(), ff);
  require_finite(raw.values, "far-field grid");
  const auto rcs = ris_rcs(raw, d.layout, wave);

  std::size_t best = 0;
  for (std::size_t i = 1; i < rcs.values.size(); ++i)
    if (std::norm(rcs.values[i]) > std::norm(rcs.values[best])) best = i;
  const std::size_t np = rcs.phi_axis.size();
  const double th_pk = rcs.theta_axis[best / np], ph_pk = rcs.phi_axis[best % np];

  OutputSet out(out_dir(scenario, options));
  write_grid_csv(out.open("pattern.csv"), rcs);
  write_grid_binary(out.open("pattern.bin"), rcs);
  write_profile_csv(out.open("profile.csv"), d.profile, d.voltages);

  Summary s;
  s.add("command", "sweep");
  s.add("elements", d.layout.size());
  s.num("f_design_hz", scenario.excitation.f_design);
  s.num("target_theta_deg", scenario.target.theta_r);
  s.num("target_phi_deg", scenario.target.phi_r);
  s.num("peak_theta_deg", th_pk);
  s.num("peak_phi_deg", ph_pk);
  s.num("peak_rcs_dbsm", db10(std::norm(rcs.values[best])));
  for (const auto& w : d.profile.warnings) s.add("warning", w);
  return finish(out, s);
}

TrialResult run_trial(const Scenario& scenario, std::uint64_t seed, bool optimize, bool elementwise) {
  const auto d = design_steering(optimize && !elementwise ? column_biased(scenario) : scenario, seed);
  const double f0 = scenario.excitation.f_design;
  const std::vector<double> freq{f0};
  const PlaneWave wave = scenario.design_wave();
  const auto states = realize_states(d, freq);
  FarFieldOptions ff;
  ff.pattern_exponent = scenario.sweep.pattern_exponent;
  const std::vector<double> phi{scenario.target.phi_r};
  const auto rcs = ris_rcs(far_field(d.layout, freq, states, wave, scenario.sweep.theta_axis(), phi, ff),
                           d.layout, wave);
  require_finite(rcs.values, "far-field grid");

  std::size_t best = 0;
  for (std::size_t i = 0; i < rcs.theta_axis.size(); ++i)
    if (std::abs(rcs.theta_axis[i]) < 90.0 && std::norm(rcs.values[i]) > std::norm(rcs.values[best])) best = i;

  TrialResult r;
  r.seed = seed;
  r.theta_peak = rcs.theta_axis[best];
  r.offset_deg = r.theta_peak - scenario.target.theta_r;
  r.peak_db = db10(std::norm(rcs.values[best]));
  r.eta_peak = std::norm(rcs.values[best]) /
               metal_plate_rcs(aperture_area(d.layout), wave.theta_inc, r.theta_peak, wave.phi_inc,
                               scenario.target.phi_r, f0);
  r.clamp_events = d.field.clamp_events;
  if (optimize) {
    if (!d.profile.wrapped) throw ConfigError("steering.wrap", "optimization needs a wrapped (realizable) profile");
    OptimizationProblem p{&d.layout, &d.field, &d.model, wave, scenario.target, scenario.sweep.pattern_exponent};
    OptimizerSettings st = scenario.optimizer;
    st.seed = seed;
    const auto rep = elementwise ? optimize_elements(p, d.voltages, st)
                                 : optimize_columns(p, collapse_to_columns(d.layout, d.voltages), st);
    r.improvement_db = rep.improvement_db;
  }
  return r;
}

RunResult run_tolerance_mc(const Scenario& scenario, const RunOptions& options) {
  if (options.trials < 1) throw ConfigError("trials", "must be >= 1");
  const std::uint64_t base = options.seed.value_or(scenario.tolerance.seed);
  const bool elementwise = options.elementwise.value_or(scenario.optimize_elementwise);
  std::vector<TrialResult> trials;
  for (std::size_t k = 0; k < options.trials; ++k)
    trials.push_back(run_trial(scenario, base + k, options.optimize_trials, elementwise));

  OutputSet out(out_dir(scenario, options));
  auto& tc = out.open("trials.csv");
  tc << "trial,seed,eta_peak,theta_peak_deg,offset_deg,peak_dbsm,clamp_events,improvement_db\n";
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const auto& t = trials[k];
    tc << fmt::format("{},{},{:.9e},{:.4f},{:.4f},{:.6f},{},{}\n", k, t.seed, t.eta_peak, t.theta_peak,
                      t.offset_deg, t.peak_db, t.clamp_events,
                      t.improvement_db ? fmt::format("{:.6f}", *t.improvement_db) : std::string("nan"));
  }
  auto column = [&](auto get) {
    std::vector<double> v;
    for (const auto& t : trials) v.push_back(get(t));
    return v;
  };
  struct Metric {
    const char* name;
    std::vector<double> values;
  };
  std::vector<Metric> metrics{{"eta_peak", column([](const TrialResult& t) { return t.eta_peak; })},
                              {"offset_deg", column([](const TrialResult& t) { return t.offset_deg; })},
                              {"peak_dbsm", column([](const TrialResult& t) { return t.peak_db; })}};
  if (options.optimize_trials)
    metrics.push_back({"improvement_db", column([](const TrialResult& t) { return *t.improvement_db; })});

  auto& ag = out.open("aggregate.csv");
  ag << "metric,median,q1,q3,iqr\n";
  Summary s;
  s.add("command", "tolerance-mc");
  s.add("trials", trials.size());
  s.add("seed", base);
  s.add("tolerance_kind", to_string(scenario.tolerance.kind));
  for (const auto& m : metrics) {
    const double med = quantile(m.values, 0.5), q1 = quantile(m.values, 0.25), q3 = quantile(m.values, 0.75);
    ag << fmt::format("{},{:.9g},{:.9g},{:.9g},{:.9g}\n", m.name, med, q1, q3, q3 - q1);
    s.num(fmt::format("median_{}", m.name), med);
    s.num(fmt::format("iqr_{}", m.name), q3 - q1);
  }
  return finish(out, s);
}

RunResult run_optimize(const Scenario& scenario, const RunOptions& options) {
  const bool elementwise = options.elementwise.value_or(scenario.optimize_elementwise);
  const auto d = design_steering(elementwise ? scenario : column_biased(scenario), options.seed);
  if (!d.profile.wrapped) throw ConfigError("steering.wrap", "optimization needs a wrapped (realizable) profile");
  PlaneWave wave = scenario.design_wave();
  OptimizationProblem p{&d.layout, &d.field, &d.model, wave, scenario.target, scenario.sweep.pattern_exponent};
  OptimizerSettings st = scenario.optimizer;
  st.seed = options.seed.value_or(scenario.tolerance.seed);
  OptimizationReport rep;
  try {
    rep = elementwise ? optimize_elements(p, d.voltages, st)
                      : optimize_columns(p, collapse_to_columns(d.layout, d.voltages), st);
  } catch (const DomainError& e) {
    throw ConfigError("optimizer", e.what());
  }

  OutputSet out(out_dir(scenario, options));
  rep.write_text(out.open("report.txt"));
  rep.write_log_csv(out.open("log.csv"));
  const auto final_v = elementwise ? rep.voltages : expand_columns(d.layout, rep.voltages);
  write_profile_csv(out.open("profile.csv"), d.profile, final_v);

  Summary s;
  s.add("command", "optimize");
  s.add("mode", elementwise ? "elements" : "columns");
  s.add("variables", rep.voltages.size());
  s.num("initial_power_db", rep.initial_power_db);
  s.num("final_power_db", rep.final_power_db);
  s.num("improvement_db", rep.improvement_db);
  s.add("sweeps", rep.sweeps);
  s.add("evaluations", rep.evaluations);
  s.add("converged", rep.converged);
  return finish(out, s);
}

RunResult run_reduce(const Scenario& scenario, const RunOptions& options) {
  if (!options.traces) throw ConfigError("traces", "a trace file is required for reduce");
  std::ifstream in(*options.traces);
  if (!in) throw DataError(fmt::format("{}: cannot open trace file", options.traces->string()));
  const auto cols = read_trace_csv(in);

  MeasuredTraces t;
  t.freq_axis = cols.freq_hz;
  t.s21_ris_db = cols.s21_ris_db;
  t.s21_mp_db = cols.s21_mp_db;
  t.geometry = scenario.geometry.angles;
  if (scenario.geometry.area_ris) t.area_ris = *scenario.geometry.area_ris;
  else if (scenario.layout) t.area_ris = aperture_area(scenario.build_aperture());
  else throw ConfigError("geometry.area_ris_m2", "is required when no layout block is given");
  t.area_mp = scenario.geometry.area_mp.value_or(t.area_ris);
  try {
    t.validate();
  } catch (const DomainError& e) {
    throw DataError(e.what());
  }
  const auto spec = reduce_measurement(t);

  OutputSet out(out_dir(scenario, options));
  spec.write_csv(out.open("spectrum.csv"));
  auto& mp = out.open("sigma_mp.csv");
  mp << "freq_hz,sigma_mp_m2\n";
  const auto& g = t.geometry;
  for (double f : t.freq_axis)
    mp << fmt::format("{:.6f},{:.9e}\n", f, metal_plate_rcs(t.area_mp, g.theta_tx, g.theta_rx, g.phi_tx, g.phi_rx, f));

  const Bandwidth bw = bandwidth_3db(spec.freq_axis, spec.mag_db);
  Summary s;
  s.add("command", "reduce");
  s.add("samples", t.freq_axis.size());
  s.num("area_ris_m2", t.area_ris);
  s.num("area_mp_m2", t.area_mp);
  const double fc = t.freq_axis[t.freq_axis.size() / 2];
  s.num("sigma_mp_m2_at_center", metal_plate_rcs(t.area_mp, g.theta_tx, g.theta_rx, g.phi_tx, g.phi_rx, fc));
  s.num("center_freq_hz", fc);
  s.num("peak_eta", spec.peak_eta());
  s.num("bw_fractional", bw.fractional);
  s.add("flagged_samples", std::count(spec.flagged.begin(), spec.flagged.end(), true));
  return finish(out, s);
}

RunResult run_report(const Scenario& scenario, const RunOptions& options) {
  const auto model = scenario.element_model();
  const double f0 = scenario.excitation.f_design;
  const auto& line = model.line;
  const double dphi = max_differential_phase(line, model.material, model.stack, f0);
  const double il = max_insertion_loss(line, model.material, model.stack, f0);

  Summary s;
  s.add("command", "report");
  std::optional<ApertureLayout> layout;
  if (scenario.layout) layout = scenario.build_aperture();
  const long long n_power = scenario.power_elements.value_or(layout ? static_cast<long long>(layout->size()) : 1);
  s.add("array_power", si_format(array_power(scenario.p_element_w, n_power), "W"));
  s.add("array_power_elements", n_power);
  s.add("element_power", si_format(scenario.p_element_w, "W"));
  const auto rt = response_times(scenario.response, line.t_lc_nominal);
  s.add("t_lc", si_format(line.t_lc_nominal, "m"));
  s.add("tau_on", si_format(rt.tau_on, "s"));
  s.add("tau_off", si_format(rt.tau_off, "s"));
  s.num("line_length_m", line.l_phys);
  s.num("line_length_lambda0", line.l_phys / wavelength(f0));
  s.num("alpha_extra_db_per_m", line.alpha_extra);
  s.num("max_differential_phase_deg", dphi);
  s.num("max_insertion_loss_db", il);
  s.add("figure_of_merit", fmt::format("{:.4g} deg/dB", figure_of_merit(dphi, il)));
  s.add("compactness", fmt::format("{:.4g} deg/lambda0", compactness(dphi, line.l_phys, f0)));

  // Phase bandwidth: range where the differential phase stays within 25 % of its f_design value.
  std::vector<double> pf, pd;
  for (int i = 0; i <= 400; ++i) {
    const double f = f0 * (0.5 + i / 400.0);
    pf.push_back(f);
    pd.push_back(max_differential_phase(line, model.material, model.stack, f));
  }
  const auto pbw = phase_bandwidth_25pct(pf, pd, f0);
  s.num("phase_bw_25pct_fractional", pbw.fractional);

  const double eta0 = std::norm(element_reflection(model, 0.0, line.t_lc_nominal, f0));
  s.num("eta_broadside_f0", eta0);
  const auto budget = loss_budget(eta0, {{"conductor", 0.286}, {"lc", 0.214}, {"glass", 0.182}});
  s.num("loss_budget_residual", budget.residual);

  if (layout) {
    const double area = aperture_area(*layout);
    s.add("layout", fmt::format("{} x {} {}", layout->rows(), layout->cols(), to_string(layout->grid())));
    s.add("elements", layout->size());
    s.num("dx_m", layout->dx());
    s.num("dy_m", layout->dy());
    s.num("aperture_area_m2", area);
    s.num("sigma_mp_broadside_m2", metal_plate_rcs(area, 0, 0, 0, 0, f0));
  }
  const auto& t = scenario.tolerance;
  s.add("tolerance_kind", to_string(t.kind));
  s.num("tolerance_t_nom_m", t.t_nom);
  s.num("tolerance_gx", t.gx);
  s.num("tolerance_gy", t.gy);
  s.num("tolerance_sigma_m", t.sigma);
  s.num("tolerance_corr_len_m", t.corr_len);
  s.add("tolerance_seed", t.seed);
  s.num("tolerance_misalign_um", t.misalign_um);

  OutputSet out(out_dir(scenario, options));
  return finish(out, s);
}

}  // namespace lcris
