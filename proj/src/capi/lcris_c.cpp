// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

#include "lcris/lcris.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "aperture.hpp"
#include "errors.hpp"
#include "materials.hpp"
#include "phase_shifter.hpp"
#include "pipelines.hpp"
#include "scattering.hpp"
#include "scenario.hpp"

struct lcris_scenario {
  lcris::Scenario value;
};

struct lcris_layout {
  lcris::ApertureLayout value;
};

namespace {

thread_local std::string g_last_error;

lcris_status fail(lcris_status code, const char* what) {
  g_last_error = what;
  return code;
}

lcris_status status_of(lcris::ErrorKind kind) {
  switch (kind) {
    case lcris::ErrorKind::config:
    case lcris::ErrorKind::domain:
    case lcris::ErrorKind::range:
    case lcris::ErrorKind::calibration: return LCRIS_ERR_CONFIG;
    case lcris::ErrorKind::data:
    case lcris::ErrorKind::io: return LCRIS_ERR_DATA;
    case lcris::ErrorKind::numeric:
    case lcris::ErrorKind::state: return LCRIS_ERR_NUMERIC;
  }
  return LCRIS_ERR_NUMERIC;
}

template <typename F>
lcris_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return LCRIS_OK;
  } catch (const lcris::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LCRIS_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(LCRIS_ERR_NUMERIC, e.what());
  }
}

lcris::RunOptions convert(const lcris_run_options* o) {
  lcris::RunOptions r;
  if (!o) return r;
  r.threads = o->threads ? o->threads : 1;
  if (o->seed_set) r.seed = o->seed;
  r.trials = o->trials ? o->trials : 10;
  if (o->elementwise >= 0) r.elementwise = o->elementwise != 0;
  r.optimize_trials = o->optimize_trials != 0;
  if (o->out_dir) r.out_dir = o->out_dir;
  if (o->traces_path) r.traces = o->traces_path;
  return r;
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <typename Run>
lcris_status run_command(const lcris_scenario* s, const lcris_run_options* o, char** summary, Run run) {
  if (summary) *summary = nullptr;
  if (!s) return fail(LCRIS_ERR_CONFIG, "scenario handle is NULL");
  return guarded([&] {
    const auto result = run(s->value, convert(o));
    if (summary) *summary = dup_string(result.summary);
  });
}

lcris_status null_out() { return fail(LCRIS_ERR_CONFIG, "output pointer is NULL"); }

}  // namespace

extern "C" {

const char* lcris_last_error(void) { return g_last_error.c_str(); }

const char* lcris_version(void) { return "0.3.0"; }

void lcris_run_options_init(lcris_run_options* o) {
  if (!o) return;
  *o = lcris_run_options{};
  o->threads = 1;
  o->trials = 10;
  o->elementwise = -1;
}

lcris_status lcris_scenario_load(const char* path, lcris_scenario** out) {
  if (!out) return null_out();
  *out = nullptr;
  if (!path) return fail(LCRIS_ERR_CONFIG, "scenario path is NULL");
  return guarded([&] { *out = new lcris_scenario{lcris::load_scenario(path)}; });
}

lcris_status lcris_scenario_parse(const char* json_text, lcris_scenario** out) {
  if (!out) return null_out();
  *out = nullptr;
  if (!json_text) return fail(LCRIS_ERR_CONFIG, "scenario text is NULL");
  return guarded([&] { *out = new lcris_scenario{lcris::parse_scenario(json_text)}; });
}

void lcris_scenario_free(lcris_scenario* scenario) { delete scenario; }

lcris_status lcris_run_steer(const lcris_scenario* s, const lcris_run_options* o, char** summary) {
  return run_command(s, o, summary, lcris::run_steer);
}
lcris_status lcris_run_sweep(const lcris_scenario* s, const lcris_run_options* o, char** summary) {
  return run_command(s, o, summary, lcris::run_sweep);
}
lcris_status lcris_run_tolerance_mc(const lcris_scenario* s, const lcris_run_options* o, char** summary) {
  return run_command(s, o, summary, lcris::run_tolerance_mc);
}
lcris_status lcris_run_optimize(const lcris_scenario* s, const lcris_run_options* o, char** summary) {
  return run_command(s, o, summary, lcris::run_optimize);
}
lcris_status lcris_run_reduce(const lcris_scenario* s, const lcris_run_options* o, char** summary) {
  return run_command(s, o, summary, lcris::run_reduce);
}
lcris_status lcris_run_report(const lcris_scenario* s, const lcris_run_options* o, char** summary) {
  return run_command(s, o, summary, lcris::run_report);
}

void lcris_string_free(char* text) { delete[] text; }

lcris_status lcris_lc_permittivity(double v_bias, double* eps_r, double* tan_delta) {
  if (!eps_r || !tan_delta) return null_out();
  return guarded([&] {
    const auto p = lcris::lc_permittivity(lcris::LcMaterial::gt7_29001(), v_bias);
    *eps_r = p.eps_r;
    *tan_delta = p.tan_delta;
  });
}

lcris_status lcris_metal_plate_rcs(double area_m2, double theta_tx_deg, double theta_rx_deg, double phi_tx_deg,
                                   double phi_rx_deg, double freq_hz, double* rcs_m2) {
  if (!rcs_m2) return null_out();
  return guarded([&] {
    *rcs_m2 = lcris::metal_plate_rcs(area_m2, theta_tx_deg, theta_rx_deg, phi_tx_deg, phi_rx_deg, freq_hz);
  });
}

lcris_status lcris_figure_of_merit(double dphi_max_deg, double il_max_db, double* fom) {
  if (!fom) return null_out();
  return guarded([&] { *fom = lcris::figure_of_merit(dphi_max_deg, il_max_db); });
}

lcris_status lcris_compactness(double dphi_max_deg, double l_phys_m, double freq_hz, double* value) {
  if (!value) return null_out();
  return guarded([&] { *value = lcris::compactness(dphi_max_deg, l_phys_m, freq_hz); });
}

lcris_status lcris_response_times(double t_lc_m, double* tau_on_s, double* tau_off_s) {
  if (!tau_on_s || !tau_off_s) return null_out();
  return guarded([&] {
    const auto r = lcris::response_times(lcris::ResponseTimeBase{}, t_lc_m);
    *tau_on_s = r.tau_on;
    *tau_off_s = r.tau_off;
  });
}

lcris_status lcris_array_power(double p_element_w, long long n_elements, double* p_total_w) {
  if (!p_total_w) return null_out();
  return guarded([&] { *p_total_w = lcris::array_power(p_element_w, n_elements); });
}

lcris_status lcris_layout_build(size_t rows, size_t cols, double dx_m, double dy_m, int grid, lcris_layout** out) {
  if (!out) return null_out();
  *out = nullptr;
  if (grid != 0 && grid != 1) return fail(LCRIS_ERR_CONFIG, "grid must be 0 (rectangular) or 1 (triangular)");
  return guarded([&] {
    const auto kind = grid ? lcris::GridKind::triangular : lcris::GridKind::rectangular;
    *out = new lcris_layout{lcris::build_layout(rows, cols, dx_m, dy_m, kind)};
  });
}

size_t lcris_layout_size(const lcris_layout* layout) { return layout ? layout->value.size() : 0; }

lcris_status lcris_layout_position(const lcris_layout* layout, size_t index, double* x_m, double* y_m) {
  if (!layout || !x_m || !y_m) return null_out();
  if (index >= layout->value.size()) return fail(LCRIS_ERR_CONFIG, "element index out of range");
  const auto& p = layout->value.position(index);
  *x_m = p.x;
  *y_m = p.y;
  return LCRIS_OK;
}

double lcris_layout_area(const lcris_layout* layout) { return layout ? lcris::aperture_area(layout->value) : 0.0; }

void lcris_layout_free(lcris_layout* layout) { delete layout; }

}  // extern "C"
