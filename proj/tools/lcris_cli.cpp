// SPDX-License-Identifier: Apache-2.0
// lcris: LC reflective surface simulator. Copyright (C) 2026 lcris developers

// Command-line frontend over the lcris C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "lcris/lcris.h"

namespace {

struct Args {
  std::string scenario;
  std::string out;
  std::string traces;
  unsigned long long seed = 0;
  std::size_t trials = 10;
  unsigned threads = 1;
  bool elementwise = false;
  bool columns = false;
  bool optimize = false;
};

using RunFn = lcris_status (*)(const lcris_scenario*, const lcris_run_options*, char**);

int run(RunFn fn, const Args& a, const CLI::App& sub) {
  lcris_scenario* s = nullptr;
  lcris_status st = lcris_scenario_load(a.scenario.c_str(), &s);
  if (st != LCRIS_OK) {
    std::fprintf(stderr, "error: %s\n", lcris_last_error());
    return st;
  }
  lcris_run_options o;
  lcris_run_options_init(&o);
  o.threads = a.threads;
  if (sub.count("--seed")) {
    o.seed = a.seed;
    o.seed_set = 1;
  }
  o.trials = a.trials;
  if (a.elementwise) o.elementwise = 1;
  if (a.columns) o.elementwise = 0;
  o.optimize_trials = a.optimize ? 1 : 0;
  if (!a.out.empty()) o.out_dir = a.out.c_str();
  if (!a.traces.empty()) o.traces_path = a.traces.c_str();

  char* summary = nullptr;
  st = fn(s, &o, &summary);
  lcris_scenario_free(s);
  if (st != LCRIS_OK) {
    std::fprintf(stderr, "error: %s\n", lcris_last_error());
    return st;
  }
  std::fputs(summary, stdout);
  lcris_string_free(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LC reflective surface simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lcris_version()));
  Args a;

  struct Cmd {
    const char* name;
    const char* help;
    RunFn fn;
  };
  const Cmd cmds[] = {
      {"steer", "frequency x angle heat map, peak track and bandwidth", lcris_run_steer},
      {"sweep", "2-D pattern at the design frequency", lcris_run_sweep},
      {"tolerance-mc", "Monte Carlo over thickness-field realizations", lcris_run_tolerance_mc},
      {"optimize", "per-column (or per-element) bias optimization", lcris_run_optimize},
      {"reduce", "measured S21 traces to aperture efficiency", lcris_run_reduce},
      {"report", "closed-form figures of the configured design", lcris_run_report},
  };
  std::vector<std::pair<CLI::App*, RunFn>> subs;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--scenario", a.scenario, "scenario JSON file")->required();
    sub->add_option("--out", a.out, "output directory (overrides output_dir)");
    sub->add_option("--seed", a.seed, "random seed (overrides tolerance.seed)");
    sub->add_option("--trials", a.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--threads", a.threads, "far-field worker threads")->check(CLI::Range(1u, 256u));
    if (std::string(c.name) == "reduce") sub->add_option("--traces", a.traces, "trace CSV")->required();
    if (std::string(c.name) == "optimize" || std::string(c.name) == "tolerance-mc") {
      auto* e = sub->add_flag("--elementwise", a.elementwise, "one variable per element");
      sub->add_flag("--columns", a.columns, "one variable per column")->excludes(e);
    }
    if (std::string(c.name) == "tolerance-mc") sub->add_flag("--optimize", a.optimize, "optimize every trial");
    subs.emplace_back(sub, c.fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : LCRIS_ERR_CONFIG;
  }
  for (const auto& [sub, fn] : subs)
    if (sub->parsed()) return run(fn, a, *sub);
  return LCRIS_ERR_CONFIG;
}
