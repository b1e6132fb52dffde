// Copyright 2026 The Wildcard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Links only the C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wildcard/wildcard.h"

namespace {

struct Options {
  std::string config;
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<std::string> objective;
};

using StageFn = wc_status (*)(const wc_config*, const char*);

int report_failure(wc_status status) {
  std::fprintf(stderr, "wildcard: %s\n", wc_last_error());
  return static_cast<int>(status);
}

int run_stage(const std::string& name, StageFn fn, const Options& opt) {
  wc_config* cfg = nullptr;
  wc_status st;
  if (!opt.config.empty()) {
    st = wc_config_load(opt.config.c_str(), &cfg);
  } else if (!opt.scenario.empty()) {
    st = wc_config_preset(opt.scenario.c_str(), &cfg);
  } else {
    const std::string recorded = (std::filesystem::path(opt.out) / "config.json").string();
    if (!std::filesystem::exists(recorded)) {
      std::fprintf(stderr, "wildcard: %s needs --config or --scenario (no %s)\n", name.c_str(), recorded.c_str());
      return WC_ERR_USAGE;
    }
    st = wc_config_load(recorded.c_str(), &cfg);
  }
  if (st != WC_OK) return report_failure(st);
  if (opt.seed && (st = wc_config_set_seed(cfg, *opt.seed)) != WC_OK) return wc_config_free(cfg), report_failure(st);
  if (opt.alpha && (st = wc_config_set_alpha(cfg, *opt.alpha)) != WC_OK) return wc_config_free(cfg), report_failure(st);
  if (opt.objective && (st = wc_config_set_objective(cfg, opt.objective->c_str())) != WC_OK) {
    wc_config_free(cfg);
    return report_failure(st);
  }
  st = fn(cfg, opt.out.c_str());
  wc_config_free(cfg);
  if (st != WC_OK) return report_failure(st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wildcard error models: simulate, fit, reconcile and report"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wc_version());

  Options opt;
  const std::map<std::string, std::pair<StageFn, std::string>> stages{
      {"simulate", {wc_simulate, "Simulate the scenario's dataset and truth model"}},
      {"fit-rb", {wc_fit_rb, "Fit the RB decay and write the curve model"}},
      {"fit-gst", {wc_fit_gst, "Fit a GST-lite process-matrix model"}},
      {"wildcard", {wc_wildcard, "Solve for the minimal wildcard vector and consistency reports"}},
      {"diamond", {wc_diamond, "Compute diamond distances for the run's gates"}},
      {"report", {wc_report, "Write per-panel figure data"}},
      {"run", {wc_run_all, "Run every stage in order"}},
  };
  for (const auto& [name, entry] : stages) {
    CLI::App* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", opt.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--scenario", opt.scenario, "Use a scenario preset instead of --config");
    sub->add_option("--out", opt.out, "Run directory")->required();
    sub->add_option("--seed", opt.seed, "Master seed (u64)");
    sub->add_option("--alpha", opt.alpha, "Significance level");
    sub->add_option("--objective", opt.objective, "l1 or weighted:<csv>");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : WC_ERR_USAGE;
  }
  for (const auto& [name, entry] : stages) {
    if (app.got_subcommand(name)) return run_stage(name, entry.first, opt);
  }
  return WC_ERR_USAGE;
}
