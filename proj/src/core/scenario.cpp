// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "constants.hpp"
#include "errors.hpp"

namespace lcris {

using nlohmann::json;

namespace {

// Reads keys from one JSON object, remembering which were consumed so that
// typos surface as config errors instead of silently falling back to defaults.
class Block {
public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }
  ~Block() = default;

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return number(key);
  }
  double number(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) throw ConfigError(at(key), "is required");
    const auto& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key), "must be finite");
    return d;
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    seen_.insert(key);
    const auto& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    seen_.insert(key);
    if (!j_.at(key).is_boolean()) throw ConfigError(at(key), "expected true or false");
    return j_.at(key).get<bool>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    seen_.insert(key);
    if (!j_.at(key).is_string()) throw ConfigError(at(key), "expected a string");
    return j_.at(key).get<std::string>();
  }
  std::optional<Block> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    seen_.insert(key);
    return Block(j_.at(key), at(key));
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

// Re-raises domain errors from module validation with the config path attached.
template <typename F>
void validated(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

std::string_view to_string(ToleranceKind kind) {
  switch (kind) {
    case ToleranceKind::uniform: return "uniform";
    case ToleranceKind::tilted: return "tilted";
    case ToleranceKind::random: return "random";
  }
  return "uniform";
}

std::vector<double> Excitation::freq_axis() const {
  if (f_points == 1) return {f_design};
  std::vector<double> f(f_points);
  for (std::size_t i = 0; i < f_points; ++i)
    f[i] = f_start + (f_stop - f_start) * static_cast<double>(i) / static_cast<double>(f_points - 1);
  return f;
}

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 1) return {0.5 * (a + b)};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

std::vector<double> AngleSweep::theta_axis() const { return linspace(theta_min, theta_max, theta_points); }
std::vector<double> AngleSweep::phi_axis() const { return linspace(phi_min, phi_max, phi_points); }

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", fmt::format("invalid JSON: {}", e.what()));
  }
  Block top(root, "");
  Scenario s;

  if (auto b = top.child("materials")) {
    auto& m = s.material;
    m.eps_perp = b->number("eps_perp", m.eps_perp);
    m.tan_perp = b->number("tan_perp", m.tan_perp);
    m.eps_par = b->number("eps_par", m.eps_par);
    m.tan_par = b->number("tan_par", m.tan_par);
    m.v_threshold = b->number("v_threshold_v", m.v_threshold);
    m.v_scale = b->number("v_scale_v", m.v_scale);
    b->finish();
    validated("materials", [&] { m.validate(); });
  }
  if (auto b = top.child("stack")) {
    auto& st = s.stack;
    st.eps_glass = b->number("eps_glass", st.eps_glass);
    st.tan_glass = b->number("tan_glass", st.tan_glass);
    st.t_glass = b->number("t_glass_m", st.t_glass);
    st.t_gold = b->number("t_gold_m", st.t_gold);
    st.conductor = b->text("conductor", st.conductor);
    b->finish();
    validated("stack", [&] { st.validate(); });
  }
  if (auto b = top.child("response")) {
    auto& r = s.response;
    r.tau_on_ref = b->number("tau_on_s", r.tau_on_ref);
    r.tau_off_ref = b->number("tau_off_s", r.tau_off_ref);
    r.t_lc_ref = b->number("t_lc_ref_m", r.t_lc_ref);
    b->finish();
    validated("response", [&] { r.validate(); });
  }
  if (auto b = top.child("line")) {
    auto& l = s.line;
    if (b->has("l_phys_m")) {
      DelayLineSpec spec;
      spec.l_phys = b->number("l_phys_m");
      spec.t_lc_nominal = b->number("t_lc_nominal_m", spec.t_lc_nominal);
      spec.fill_max = b->number("fill_max", spec.fill_max);
      spec.t_half = b->number("t_half_m", spec.t_half);
      spec.alpha_extra = b->number("alpha_extra_db_per_m", spec.alpha_extra);
      validated("line", [&] { spec.validate(); });
      l.explicit_spec = spec;
    } else {
      l.target_dphi_deg = b->number("target_dphi_deg", l.target_dphi_deg);
      l.shape.fill_max = b->number("fill_max", l.shape.fill_max);
      l.shape.t_half = b->number("t_half_m", l.shape.t_half);
      l.shape.t_lc_nominal = b->number("t_lc_nominal_m", l.shape.t_lc_nominal);
      l.shape.target_fom = b->number("target_fom_deg_per_db", l.shape.target_fom);
      require(l.target_dphi_deg > 0.0, b->at("target_dphi_deg"), "must be positive");
    }
    b->finish();
  }
  bool radiator_f0_given = false;
  if (auto b = top.child("radiator")) {
    auto& r = s.radiator;
    radiator_f0_given = b->has("f0_hz");
    r.f0 = b->number("f0_hz", r.f0);
    r.fractional_bw = b->number("fractional_bw", r.fractional_bw);
    r.center_loss_db = b->number("center_loss_db", r.center_loss_db);
    r.enabled = b->flag("enabled", r.enabled);
    b->finish();
    require(r.f0 > 0.0 && r.fractional_bw > 0.0 && r.center_loss_db >= 0.0, "radiator",
            "needs f0_hz > 0, fractional_bw > 0, center_loss_db >= 0");
  }
  if (auto b = top.child("misalignment_model")) {
    s.misalignment_model.width_coeff = b->number("width_coeff", s.misalignment_model.width_coeff);
    s.misalignment_model.exponent = b->number("exponent", s.misalignment_model.exponent);
    b->finish();
    require(s.misalignment_model.width_coeff > 0.0 && s.misalignment_model.exponent > 0.0,
            "misalignment_model", "coefficients must be positive");
  }
  if (auto b = top.child("excitation")) {
    auto& e = s.excitation;
    e.theta_inc = b->number("theta_inc_deg", e.theta_inc);
    e.phi_inc = b->number("phi_inc_deg", e.phi_inc);
    e.f_design = b->number("f_design_hz", e.f_design);
    e.f_start = b->number("f_start_hz", 0.8 * e.f_design);
    e.f_stop = b->number("f_stop_hz", 1.2 * e.f_design);
    e.f_points = b->count("f_points", e.f_points);
    b->finish();
    require(std::abs(e.theta_inc) < 90.0, b->at("theta_inc_deg"), "must lie inside (-90, 90)");
    require(std::abs(e.phi_inc) < 90.0, b->at("phi_inc_deg"), "must lie inside (-90, 90)");
    require(e.f_design > 0.0, b->at("f_design_hz"), "must be positive");
    require(e.f_points >= 1, b->at("f_points"), "must be >= 1");
    require(e.f_points == 1 || (e.f_start > 0.0 && e.f_stop > e.f_start), b->at("f_stop_hz"),
            "frequency sweep must be strictly increasing and positive");
  }
  if (!radiator_f0_given) s.radiator.f0 = s.excitation.f_design;

  if (auto b = top.child("layout")) {
    LayoutConfig l;
    const double lam = wavelength(s.excitation.f_design);
    l.rows = b->count("rows", 0);
    l.cols = b->count("cols", 0);
    require(l.rows >= 1, b->at("rows"), "must be >= 1");
    require(l.cols >= 1, b->at("cols"), "must be >= 1");
    if (b->has("dx_m")) l.dx = b->number("dx_m");
    else l.dx = b->number("dx_lambda0", 0.45) * lam;
    if (b->has("dy_m")) l.dy = b->number("dy_m");
    else if (b->has("dy_lambda0")) l.dy = b->number("dy_lambda0") * lam;
    else l.dy = l.dx;
    require(l.dx > 0.0, b->at("dx"), "must be positive");
    require(l.dy > 0.0, b->at("dy"), "must be positive");
    validated(b->at("grid"), [&] { l.grid = parse_grid_kind(b->text("grid", "triangular")); });
    b->finish();
    s.layout = l;
  }
  if (auto b = top.child("tolerance")) {
    auto& t = s.tolerance;
    const std::string kind = b->text("kind", "uniform");
    if (kind == "uniform") t.kind = ToleranceKind::uniform;
    else if (kind == "tilted") t.kind = ToleranceKind::tilted;
    else if (kind == "random") t.kind = ToleranceKind::random;
    else throw ConfigError(b->at("kind"), fmt::format("unknown kind '{}' (uniform, tilted, random)", kind));
    t.t_nom = b->number("t_nom_m", t.t_nom);
    t.gx = b->number("gx", t.gx);
    t.gy = b->number("gy", t.gy);
    t.sigma = b->number("sigma_m", t.sigma);
    t.corr_len = b->number("corr_len_m", t.corr_len);
    t.seed = b->count("seed", t.seed);
    t.misalign_um = b->number("misalign_um", t.misalign_um);
    b->finish();
    require(t.t_nom > 0.0, b->at("t_nom_m"), "must be positive");
    require(t.sigma >= 0.0, b->at("sigma_m"), "must be >= 0");
    require(t.corr_len > 0.0, b->at("corr_len_m"), "must be positive");
    require(t.misalign_um >= 0.0, b->at("misalign_um"), "must be >= 0");
  }
  if (auto b = top.child("target")) {
    s.target.theta_r = b->number("theta_r_deg", s.target.theta_r);
    s.target.phi_r = b->number("phi_r_deg", s.target.phi_r);
    b->finish();
    require(std::abs(s.target.theta_r) < 90.0, b->at("theta_r_deg"), "must lie inside (-90, 90)");
    require(std::abs(s.target.phi_r) < 90.0, b->at("phi_r_deg"), "must lie inside (-90, 90)");
  }
  if (auto b = top.child("steering")) {
    s.steering.wrap = b->flag("wrap", s.steering.wrap);
    s.steering.wrap_modulus_deg = b->number("wrap_modulus_deg", s.steering.wrap_modulus_deg);
    s.steering.column_constrained = b->flag("column_constrained", s.steering.column_constrained);
    b->finish();
    require(s.steering.wrap_modulus_deg > 0.0, b->at("wrap_modulus_deg"), "must be positive");
  }
  if (auto b = top.child("sweep")) {
    auto& w = s.sweep;
    w.theta_min = b->number("theta_min_deg", w.theta_min);
    w.theta_max = b->number("theta_max_deg", w.theta_max);
    w.theta_points = b->count("theta_points", w.theta_points);
    w.phi_min = b->number("phi_min_deg", w.phi_min);
    w.phi_max = b->number("phi_max_deg", w.phi_max);
    w.phi_points = b->count("phi_points", w.phi_points);
    w.track_window_deg = b->number("track_window_deg", w.track_window_deg);
    w.pattern_exponent = b->number("pattern_exponent", w.pattern_exponent);
    b->finish();
    require(w.theta_points >= 2 && w.theta_max > w.theta_min, "sweep.theta", "needs >= 2 increasing points");
    require(w.phi_points >= 1 && w.phi_max >= w.phi_min, "sweep.phi", "needs >= 1 point with phi_max >= phi_min");
    require(w.theta_min >= -90.0 && w.theta_max <= 90.0 && w.phi_min >= -90.0 && w.phi_max <= 90.0, "sweep",
            "angles must lie within [-90, 90] deg");
    require(w.track_window_deg > 0.0, b->at("track_window_deg"), "must be positive");
    require(w.pattern_exponent >= 0.0, b->at("pattern_exponent"), "must be >= 0");
  }
  if (auto b = top.child("optimizer")) {
    auto& o = s.optimizer;
    o.budget = b->count("budget", o.budget);
    o.v_tol = b->number("v_tol_v", o.v_tol);
    o.sweep_tol_db = b->number("sweep_tol_db", o.sweep_tol_db);
    o.coarse_points = b->count("coarse_points", o.coarse_points);
    o.v_lo = b->number("v_min_v", o.v_lo);
    o.v_hi = b->number("v_max_v", o.v_hi);
    s.optimize_elementwise = b->flag("elementwise", s.optimize_elementwise);
    b->finish();
    require(o.v_tol > 0.0, b->at("v_tol_v"), "must be positive");
    require(o.coarse_points >= 2, b->at("coarse_points"), "must be >= 2");
    require(o.v_lo >= 0.0 && o.v_hi > o.v_lo && o.v_hi <= 20.0, "optimizer", "voltage bounds must satisfy 0 <= v_min < v_max <= 20");
  }
  if (auto b = top.child("power")) {
    s.p_element_w = b->number("p_element_w", s.p_element_w);
    if (b->has("n_elements")) s.power_elements = static_cast<long long>(b->count("n_elements", 1));
    b->finish();
    require(s.p_element_w >= 0.0, b->at("p_element_w"), "must be >= 0");
    require(!s.power_elements || *s.power_elements >= 1, b->at("n_elements"), "must be >= 1");
  }
  if (auto b = top.child("geometry")) {
    auto& g = s.geometry;
    g.angles.theta_tx = b->number("theta_tx_deg", 0.0);
    g.angles.theta_rx = b->number("theta_rx_deg", 0.0);
    g.angles.phi_tx = b->number("phi_tx_deg", 0.0);
    g.angles.phi_rx = b->number("phi_rx_deg", 0.0);
    if (b->has("area_ris_m2")) g.area_ris = b->number("area_ris_m2");
    if (b->has("area_mp_m2")) g.area_mp = b->number("area_mp_m2");
    b->finish();
    for (double a : {g.angles.theta_tx, g.angles.theta_rx, g.angles.phi_tx, g.angles.phi_rx})
      require(std::abs(a) < 90.0, "geometry", "angles must lie inside (-90, 90)");
    require(!g.area_ris || *g.area_ris > 0.0, b->at("area_ris_m2"), "must be positive");
    require(!g.area_mp || *g.area_mp > 0.0, b->at("area_mp_m2"), "must be positive");
  }
  s.output_dir = top.text("output_dir", s.output_dir.string());
  top.finish();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open scenario file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

ElementModel Scenario::element_model() const {
  ElementModel m;
  m.material = material;
  m.stack = stack;
  m.radiator = radiator;
  m.misalignment = misalignment_model;
  if (line.explicit_spec) {
    m.line = *line.explicit_spec;
  } else {
    try {
      m.line = calibrate_line(line.target_dphi_deg, excitation.f_design, material, stack, line.shape);
    } catch (const CalibrationError& e) {
      throw ConfigError("line", e.what());
    }
  }
  validated("element model", [&] { m.validate(); });
  return m;
}

ApertureLayout Scenario::build_aperture() const {
  if (!layout) throw ConfigError("layout", "block is required for this command");
  return build_layout(layout->rows, layout->cols, layout->dx, layout->dy, layout->grid);
}

ToleranceField Scenario::build_field(const ApertureLayout& aperture, std::optional<std::uint64_t> seed) const {
  const auto& t = tolerance;
  ToleranceField field;
  try {
    switch (t.kind) {
      case ToleranceKind::uniform: field = uniform_field(aperture, t.t_nom); break;
      case ToleranceKind::tilted: field = tilted_field(aperture, t.t_nom, t.gx, t.gy); break;
      case ToleranceKind::random:
        field = random_field(aperture, t.t_nom, t.sigma, t.corr_len, seed.value_or(t.seed));
        break;
    }
  } catch (const DomainError& e) {
    throw ConfigError("tolerance", e.what());
  }
  field.seed = seed.value_or(t.seed);
  field.misalignment = {t.misalign_um * 1e-6, 0.0};
  return field;
}

PlaneWave Scenario::design_wave() const {
  return {excitation.theta_inc, excitation.phi_inc, excitation.f_design, 1.0};
}

}  // namespace lcris
