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

#include "wildcard/wildcard.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "wildcard/dataset.h"
#include "wildcard/diamond.h"
#include "wildcard/error.h"
#include "wildcard/noise_models.h"
#include "wildcard/pipeline.h"
#include "wildcard/stats.h"
#include "wildcard/wildcard_opt.h"

struct wc_config {
  wildcard::RunConfig cfg;
};
struct wc_model {
  wildcard::ErrorModel model;
};
struct wc_dataset {
  wildcard::DataSet data;
};
struct wc_wildcard_result {
  std::vector<std::string> labels;
  std::vector<double> w;
  bool certified = false;
  nlohmann::json doc;
};

namespace {

thread_local std::string g_last_error;

wc_status fail(wc_status code, const std::string& what) {
  g_last_error = what;
  return code;
}

template <typename F>
wc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return WC_OK;
  } catch (const wildcard::Error& e) {
    return fail(static_cast<wc_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::invalid_argument& e) {
    return fail(WC_ERR_USAGE, e.what());
  } catch (const std::exception& e) {
    return fail(WC_ERR_DATA, e.what());
  }
}

void need(const void* p, const char* name) {
  if (!p) wildcard::throw_usage(std::string(name) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::span<const double> view(const double* p, size_t n) { return {p, n}; }

}  // namespace

extern "C" {

const char* wc_last_error(void) { return g_last_error.c_str(); }
const char* wc_version(void) { return "0.1.0"; }
void wc_string_free(char* s) { std::free(s); }

wc_status wc_config_preset(const char* scenario, wc_config** out) {
  return guarded([&] {
    need(scenario, "scenario");
    need(out, "out");
    *out = new wc_config{wildcard::preset_config(scenario)};
  });
}

wc_status wc_config_from_json(const char* json_text, wc_config** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      wildcard::throw_usage(std::string("config is not valid JSON: ") + e.what());
    }
    *out = new wc_config{wildcard::config_from_json(doc)};
  });
}

wc_status wc_config_load(const char* path, wc_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new wc_config{wildcard::load_config(path)};
  });
}

wc_status wc_config_set_seed(wc_config* cfg, uint64_t seed) {
  return guarded([&] {
    need(cfg, "cfg");
    cfg->cfg.seed = seed;
  });
}

wc_status wc_config_set_alpha(wc_config* cfg, double alpha) {
  return guarded([&] {
    need(cfg, "cfg");
    wildcard::RunConfig next = cfg->cfg;
    next.alpha = alpha;
    wildcard::validate_config(next);
    cfg->cfg = next;
  });
}

wc_status wc_config_set_objective(wc_config* cfg, const char* objective) {
  return guarded([&] {
    need(cfg, "cfg");
    need(objective, "objective");
    wildcard::RunConfig next = cfg->cfg;
    next.objective = objective;
    wildcard::validate_config(next);
    cfg->cfg = next;
  });
}

wc_status wc_config_to_json(const wc_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = dup_string(wildcard::config_to_json(cfg->cfg).dump(2));
  });
}

wc_status wc_config_hash(const wc_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = dup_string(wildcard::config_hash(cfg->cfg));
  });
}

void wc_config_free(wc_config* cfg) { delete cfg; }

#define WC_STAGE(name, fn)                                \
  wc_status name(const wc_config* cfg, const char* dir) { \
    return guarded([&] {                                  \
      need(cfg, "cfg");                                   \
      need(dir, "out_dir");                               \
      wildcard::fn(cfg->cfg, dir);                        \
    });                                                   \
  }

WC_STAGE(wc_simulate, stage_simulate)
WC_STAGE(wc_fit_rb, stage_fit_rb)
WC_STAGE(wc_fit_gst, stage_fit_gst)
WC_STAGE(wc_wildcard, stage_wildcard)
WC_STAGE(wc_diamond, stage_diamond)
WC_STAGE(wc_report, stage_report)
WC_STAGE(wc_run_all, run_pipeline)
#undef WC_STAGE

wc_status wc_model_load(const char* path, wc_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    std::ifstream in(path);
    if (!in) wildcard::throw_data(std::string("cannot open model file ") + path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      wildcard::throw_data(std::string("malformed model file: ") + e.what());
    }
    *out = new wc_model{wildcard::model_from_json(doc)};
  });
}

wc_status wc_model_predict(const wc_model* model, const char* circuit, double* probs, size_t capacity,
                           size_t* count) {
  return guarded([&] {
    need(model, "model");
    need(circuit, "circuit");
    const wildcard::ProbDist p = model->model.predict(wildcard::Circuit::parse(circuit));
    if (count) *count = p.size();
    if (capacity == 0) return;
    need(probs, "probs");
    if (capacity < p.size()) {
      wildcard::throw_usage("probs capacity " + std::to_string(capacity) + " is below outcome count " +
                            std::to_string(p.size()));
    }
    for (size_t k = 0; k < p.size(); ++k) probs[k] = p[k];
  });
}

void wc_model_free(wc_model* model) { delete model; }

wc_status wc_dataset_load(const char* path, wc_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new wc_dataset{wildcard::load_dataset(path)};
  });
}

size_t wc_dataset_size(const wc_dataset* data) { return data ? data->data.size() : 0; }
void wc_dataset_free(wc_dataset* data) { delete data; }

wc_status wc_wildcard_solve(const wc_model* model, const wc_dataset* data, const char* family,
                            const char* objective, double alpha, wc_wildcard_result** out) {
  return guarded([&] {
    need(model, "model");
    need(data, "data");
    need(family, "family");
    need(objective, "objective");
    need(out, "out");
    const auto labels = model->model.gateset().labels();
    const std::string fam(family);
    if (fam != "per-gate" && fam != "tied" && fam != "rb-depth") {
      wildcard::throw_usage("family must be 'per-gate', 'tied' or 'rb-depth'");
    }
    const wildcard::WildcardFamily wf = fam == "tied"       ? wildcard::WildcardFamily::tied(labels)
                                        : fam == "rb-depth" ? wildcard::WildcardFamily::rb_depth(labels)
                                                            : wildcard::WildcardFamily::per_gate(labels);
    const wildcard::Objective obj = wildcard::parse_objective(objective, wf.size());
    const wildcard::WildcardProblem pb = wildcard::make_wildcard_problem(model->model, data->data, wf, alpha);
    const wildcard::WildcardSolution sol = wildcard::solve_min_wildcard(pb, obj);
    const wildcard::MinimalityCertificate cert = wildcard::certify_minimal(pb, sol.w);
    auto* res = new wc_wildcard_result;
    res->labels = wf.parameter_labels();
    res->w.assign(sol.w.data(), sol.w.data() + sol.w.size());
    res->certified = cert.minimal;
    res->doc = wildcard::wildcard_result_to_json(pb, sol, obj, cert);
    *out = res;
  });
}

size_t wc_wildcard_result_size(const wc_wildcard_result* res) { return res ? res->w.size() : 0; }

wc_status wc_wildcard_result_get(const wc_wildcard_result* res, size_t index, const char** label, double* value) {
  return guarded([&] {
    need(res, "res");
    if (index >= res->w.size()) wildcard::throw_usage("wildcard parameter index out of range");
    if (label) *label = res->labels[index].c_str();
    if (value) *value = res->w[index];
  });
}

int wc_wildcard_result_certified(const wc_wildcard_result* res) { return res && res->certified ? 1 : 0; }

wc_status wc_wildcard_result_to_json(const wc_wildcard_result* res, char** out) {
  return guarded([&] {
    need(res, "res");
    need(out, "out");
    *out = dup_string(res->doc.dump(2));
  });
}

void wc_wildcard_result_free(wc_wildcard_result* res) { delete res; }

wc_status wc_tvd(const double* p, const double* q, size_t n, double* out) {
  return guarded([&] {
    need(p, "p");
    need(q, "q");
    need(out, "out");
    *out = wildcard::tvd(view(p, n), view(q, n));
  });
}

wc_status wc_llr(const double* f, const double* q, size_t n, double shots, double* out) {
  return guarded([&] {
    need(f, "f");
    need(q, "q");
    need(out, "out");
    *out = wildcard::llr(view(f, n), view(q, n), shots).value;
  });
}

wc_status wc_chi2_quantile(int dof, double confidence, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = wildcard::chi2_quantile(dof, confidence);
  });
}

wc_status wc_min_llr_in_ball(const double* f, const double* p, size_t n, double radius, double shots,
                             double* out) {
  return guarded([&] {
    need(f, "f");
    need(p, "p");
    need(out, "out");
    *out = wildcard::min_llr_in_ball(view(f, n), view(p, n), radius, shots);
  });
}

wc_status wc_min_tvd_budget(const double* f, const double* p, size_t n, double shots, double threshold,
                            double* out) {
  return guarded([&] {
    need(f, "f");
    need(p, "p");
    need(out, "out");
    *out = wildcard::min_tvd_budget(view(f, n), view(p, n), shots, threshold);
  });
}

wc_status wc_diamond_pauli(const double* a, const double* b, double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    *out = wildcard::pauli_diamond({a[0], a[1], a[2], a[3]}, {b[0], b[1], b[2], b[3]});
  });
}

wc_status wc_diamond_numeric(const double* ptm1, const double* ptm2, int dim, int restarts, double* out) {
  return guarded([&] {
    need(ptm1, "ptm1");
    need(ptm2, "ptm2");
    need(out, "out");
    if (dim != 2 && dim != 3) wildcard::throw_usage("dim must be 2 or 3");
    const int n = dim * dim;
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const wildcard::SuperOp a(dim, Eigen::MatrixXd(Eigen::Map<const RowMajor>(ptm1, n, n)));
    const wildcard::SuperOp b(dim, Eigen::MatrixXd(Eigen::Map<const RowMajor>(ptm2, n, n)));
    *out = wildcard::diamond_numeric(a, b, restarts).value;
  });
}

}  // extern "C"
