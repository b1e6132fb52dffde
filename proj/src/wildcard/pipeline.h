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

#ifndef WILDCARD_PIPELINE_H_
#define WILDCARD_PIPELINE_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wildcard/circuit.h"
#include "wildcard/dataset.h"
#include "wildcard/gst_design.h"
#include "wildcard/model_fit.h"
#include "wildcard/noise_models.h"
#include "wildcard/wildcard_opt.h"

namespace wildcard {

struct RbSettings {
  std::vector<int> depths{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
  int circuits_per_depth = 30;
  double dephasing = 0.02;
};

struct GstSettings {
  std::vector<std::string> gates{"Gx", "Gy"};
  std::vector<std::string> germs{"Gx", "Gy", "Gx;Gy", "Gx;Gx;Gy"};
  std::vector<std::string> prep_fiducials{"{}", "Gx", "Gy", "Gx;Gx", "Gx;Gx;Gx", "Gy;Gy;Gy"};
  std::vector<std::string> meas_fiducials{"{}", "Gx", "Gy", "Gx;Gx", "Gx;Gx;Gx", "Gy;Gy;Gy"};
  int max_depth = 64;
};

struct FrontierSettings {
  int angles = 24;
  int grid = 40;
};

// Every default the scenarios rely on lives here and in preset_config().
struct RunConfig {
  std::string scenario = "rb-dephasing";  // rb-dephasing | total-error | gst-leakage | custom
  std::uint64_t seed = 1;
  int replicates = 1;
  std::int64_t shots = 1000;
  double alpha = 0.05;
  std::string objective = "l1";
  // Second selection rule reported next to `objective` (2-parameter families).
  std::string alt_objective = "weighted:1,1000";
  std::string wildcard_model = "fit";  // "fit" (model.json) or "target"
  std::string family = "per-gate";     // "per-gate" or "tied"; RB always uses rb_depth
  RbSettings rb;
  GstSettings gst;
  ErrorRanges random_errors;  // total-error truth draws
  ModelSpec truth;            // gst-leakage and custom truth
  FrontierSettings frontier;
};

RunConfig preset_config(const std::string& scenario);
// Starts from the scenario preset and applies every key present. Unknown
// keys and invalid values throw Error(kUsage).
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& cfg);
void validate_config(const RunConfig& cfg);
// 16 hex digits of FNV-1a over the canonical config document.
std::string config_hash(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

struct Replicate {
  int index = 0;
  std::uint64_t seed = 0;
  std::string dir;
};
// One replicate writes directly into out_dir; several use out_dir/rep_NNN
// with seeds derived from the master seed.
std::vector<Replicate> replicates(const RunConfig& cfg, const std::string& out_dir);

// Stages. Each reads what earlier stages wrote under out_dir and throws
// Error(kData) naming the missing file when run out of order.
void stage_simulate(const RunConfig& cfg, const std::string& out_dir);
void stage_fit_rb(const RunConfig& cfg, const std::string& out_dir);
void stage_fit_gst(const RunConfig& cfg, const std::string& out_dir);
void stage_wildcard(const RunConfig& cfg, const std::string& out_dir);
void stage_diamond(const RunConfig& cfg, const std::string& out_dir);
void stage_report(const RunConfig& cfg, const std::string& out_dir);
// simulate, fit (if the scenario's wildcard model is fitted), wildcard,
// diamond, report.
void run_pipeline(const RunConfig& cfg, const std::string& out_dir);

// Building blocks shared with the tests.
bool is_rb_scenario(const RunConfig& cfg);
// K circuits per depth; repeated draws of the same circuit are merged with
// their shots summed.
std::vector<std::pair<Circuit, std::int64_t>> rb_experiment(const RbSettings& rb, std::int64_t shots,
                                                           std::uint64_t seed);
GstDesign scenario_design(const RunConfig& cfg);
GateSet scenario_targets(const RunConfig& cfg);
ModelSpec scenario_truth_spec(const RunConfig& cfg, std::uint64_t replicate_seed);
ErrorModel scenario_truth(const RunConfig& cfg, std::uint64_t replicate_seed);
// Shot-weighted mean frequency of outcome "0" per depth, depths ascending.
std::pair<std::vector<int>, std::vector<double>> rb_survival(const DataSet& data);
ErrorModel rb_curve_model(const RbFit& fit);
WildcardFamily scenario_family(const RunConfig& cfg, const ErrorModel& model);

}  // namespace wildcard

#endif  // WILDCARD_PIPELINE_H_
