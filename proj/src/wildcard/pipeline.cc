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

#include "wildcard/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "wildcard/clifford.h"
#include "wildcard/diamond.h"
#include "wildcard/error.h"
#include "wildcard/random.h"
#include "wildcard/stats.h"

namespace wildcard {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

const std::set<std::string> kScenarios{"rb-dephasing", "total-error", "gst-leakage", "custom"};

ModelSpec leakage_truth() {
  ModelSpec spec;
  for (const char* g : {"Gi", "Gx", "Gy", "Gz"}) spec.gates[g] = {1e-3, 1e-2, 0.0, 0.0};
  spec.gates["Gi"].leakage = 1e-4;
  spec.gates["Gz"].leakage = 3e-4;
  return spec;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw_usage(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw_usage("unknown config key '" + key + "' in " + where);
  }
}

template <typename T>
void read_key(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw_usage(std::string("config key '") + key + "' has the wrong type");
  }
}

std::vector<Circuit> parse_circuits(const std::vector<std::string>& texts) {
  std::vector<Circuit> out;
  for (const auto& t : texts) {
    try {
      out.push_back(Circuit::parse(t));
    } catch (const Error& e) {
      throw_usage("bad circuit in config: " + std::string(e.what()));
    }
  }
  return out;
}

}  // namespace

RunConfig preset_config(const std::string& scenario) {
  if (!kScenarios.count(scenario)) {
    throw_usage("unknown scenario '" + scenario + "' (rb-dephasing, total-error, gst-leakage, custom)");
  }
  RunConfig cfg;
  cfg.scenario = scenario;
  if (scenario == "rb-dephasing") {
    cfg.family = "tied";
    cfg.wildcard_model = "fit";
  } else if (scenario == "total-error") {
    cfg.wildcard_model = "target";
  } else if (scenario == "gst-leakage") {
    cfg.wildcard_model = "fit";
    cfg.shots = 50000;
    cfg.gst.gates = {"Gi", "Gx", "Gy", "Gz"};
    cfg.gst.germs = {"Gi", "Gx", "Gy", "Gz"};
    cfg.truth = leakage_truth();
  } else {
    cfg.wildcard_model = "target";
  }
  return cfg;
}

RunConfig config_from_json(const json& doc) {
  check_keys(doc, {"scenario", "seed", "replicates", "shots", "alpha", "objective", "alt_objective",
                   "wildcard_model", "family", "rb", "gst", "random_errors", "truth", "frontier", "provenance"},
             "config");
  if (!doc.contains("scenario")) throw_usage("config needs a 'scenario'");
  std::string scenario;
  read_key(doc, "scenario", scenario);
  RunConfig cfg = preset_config(scenario);
  read_key(doc, "seed", cfg.seed);
  read_key(doc, "replicates", cfg.replicates);
  read_key(doc, "shots", cfg.shots);
  read_key(doc, "alpha", cfg.alpha);
  read_key(doc, "objective", cfg.objective);
  read_key(doc, "alt_objective", cfg.alt_objective);
  read_key(doc, "wildcard_model", cfg.wildcard_model);
  read_key(doc, "family", cfg.family);
  if (doc.contains("rb")) {
    const json& rb = doc.at("rb");
    check_keys(rb, {"depths", "circuits_per_depth", "dephasing"}, "rb");
    read_key(rb, "depths", cfg.rb.depths);
    read_key(rb, "circuits_per_depth", cfg.rb.circuits_per_depth);
    read_key(rb, "dephasing", cfg.rb.dephasing);
  }
  if (doc.contains("gst")) {
    const json& g = doc.at("gst");
    check_keys(g, {"gates", "germs", "prep_fiducials", "meas_fiducials", "max_depth"}, "gst");
    read_key(g, "gates", cfg.gst.gates);
    read_key(g, "germs", cfg.gst.germs);
    read_key(g, "prep_fiducials", cfg.gst.prep_fiducials);
    read_key(g, "meas_fiducials", cfg.gst.meas_fiducials);
    read_key(g, "max_depth", cfg.gst.max_depth);
  }
  if (doc.contains("random_errors")) {
    const json& r = doc.at("random_errors");
    check_keys(r, {"depolarizing", "rotation"}, "random_errors");
    std::vector<double> dep{cfg.random_errors.depolarizing_lo, cfg.random_errors.depolarizing_hi};
    std::vector<double> rot{cfg.random_errors.rotation_lo, cfg.random_errors.rotation_hi};
    read_key(r, "depolarizing", dep);
    read_key(r, "rotation", rot);
    if (dep.size() != 2 || rot.size() != 2) throw_usage("random_errors ranges are [lo, hi] pairs");
    cfg.random_errors = {dep[0], dep[1], rot[0], rot[1]};
  }
  if (doc.contains("truth")) {
    try {
      cfg.truth = modelspec_from_json(doc.at("truth"));
    } catch (const Error& e) {
      throw_usage(e.what());
    }
  }
  if (doc.contains("frontier")) {
    const json& f = doc.at("frontier");
    check_keys(f, {"angles", "grid"}, "frontier");
    read_key(f, "angles", cfg.frontier.angles);
    read_key(f, "grid", cfg.frontier.grid);
  }
  validate_config(cfg);
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json doc{{"scenario", cfg.scenario},
           {"seed", cfg.seed},
           {"replicates", cfg.replicates},
           {"shots", cfg.shots},
           {"alpha", cfg.alpha},
           {"objective", cfg.objective},
           {"alt_objective", cfg.alt_objective},
           {"wildcard_model", cfg.wildcard_model},
           {"family", cfg.family},
           {"frontier", {{"angles", cfg.frontier.angles}, {"grid", cfg.frontier.grid}}}};
  if (is_rb_scenario(cfg)) {
    doc["rb"] = {{"depths", cfg.rb.depths},
                 {"circuits_per_depth", cfg.rb.circuits_per_depth},
                 {"dephasing", cfg.rb.dephasing}};
  } else {
    doc["gst"] = {{"gates", cfg.gst.gates},
                  {"germs", cfg.gst.germs},
                  {"prep_fiducials", cfg.gst.prep_fiducials},
                  {"meas_fiducials", cfg.gst.meas_fiducials},
                  {"max_depth", cfg.gst.max_depth}};
    if (cfg.scenario == "total-error") {
      doc["random_errors"] = {{"depolarizing", {cfg.random_errors.depolarizing_lo, cfg.random_errors.depolarizing_hi}},
                              {"rotation", {cfg.random_errors.rotation_lo, cfg.random_errors.rotation_hi}}};
    } else {
      doc["truth"] = modelspec_to_json(cfg.truth);
    }
  }
  return doc;
}

void validate_config(const RunConfig& cfg) {
  if (!kScenarios.count(cfg.scenario)) throw_usage("unknown scenario '" + cfg.scenario + "'");
  if (cfg.replicates < 1) throw_usage("replicates must be >= 1");
  if (cfg.shots < 1) throw_usage("shots must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw_usage("alpha must lie in (0, 1)");
  if (cfg.wildcard_model != "fit" && cfg.wildcard_model != "target") {
    throw_usage("wildcard_model must be 'fit' or 'target'");
  }
  if (cfg.family != "per-gate" && cfg.family != "tied") throw_usage("family must be 'per-gate' or 'tied'");
  if (cfg.frontier.angles < 1 || cfg.frontier.grid < 2) throw_usage("frontier needs angles >= 1 and grid >= 2");
  if (is_rb_scenario(cfg)) {
    if (cfg.rb.depths.size() < 3) throw_usage("RB needs at least 3 depths");
    if (std::set<int>(cfg.rb.depths.begin(), cfg.rb.depths.end()).size() != cfg.rb.depths.size()) {
      throw_usage("RB depths must be distinct");
    }
    for (int d : cfg.rb.depths) {
      if (d < 1) throw_usage("RB depths must be >= 1");
    }
    if (cfg.rb.circuits_per_depth < 1) throw_usage("circuits_per_depth must be >= 1");
    if (!(cfg.rb.dephasing >= 0.0 && cfg.rb.dephasing <= 1.0)) throw_usage("dephasing must lie in [0, 1]");
    if (cfg.family != "tied") throw_usage("the RB scenario uses the tied (SPAM, gate) family");
  } else {
    if (cfg.gst.gates.empty()) throw_usage("gst.gates must not be empty");
    for (const auto& g : cfg.gst.gates) {
      if (g != "Gi" && g != "Gx" && g != "Gy" && g != "Gz") throw_usage("unsupported gate '" + g + "'");
    }
    if (cfg.gst.max_depth < 1) throw_usage("gst.max_depth must be >= 1");
    const std::set<std::string> gates(cfg.gst.gates.begin(), cfg.gst.gates.end());
    for (const auto* list : {&cfg.gst.germs, &cfg.gst.prep_fiducials, &cfg.gst.meas_fiducials}) {
      for (const Circuit& c : parse_circuits(*list)) {
        for (const auto& label : c.labels()) {
          if (!gates.count(label)) throw_usage("circuit uses gate '" + label + "' outside gst.gates");
        }
      }
    }
    if (cfg.scenario != "total-error") {
      cfg.truth.validate();
      for (const auto& [label, spec] : cfg.truth.gates) {
        if (!gates.count(label)) throw_usage("truth names gate '" + label + "' outside gst.gates");
      }
    }
  }
  const int n_params = is_rb_scenario(cfg) || cfg.family == "tied" ? 2 : 1 + static_cast<int>(cfg.gst.gates.size());
  parse_objective(cfg.objective, n_params);
  if (n_params == 2 && !cfg.alt_objective.empty()) parse_objective(cfg.alt_objective, 2);
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_to_json(cfg).dump())));
  return buf;
}

namespace {

json read_json_file(const fs::path& path, const std::string& hint) {
  std::ifstream in(path);
  if (!in) throw_data("missing " + path.string() + (hint.empty() ? "" : " (" + hint + ")"));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw_data("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot write " + path.string());
  out << text;
  if (!out) throw_data("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_usage("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw_usage("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(doc);
}

std::vector<Replicate> replicates(const RunConfig& cfg, const std::string& out_dir) {
  std::vector<Replicate> reps;
  if (cfg.replicates == 1) {
    reps.push_back({0, cfg.seed, out_dir});
    return reps;
  }
  for (int i = 0; i < cfg.replicates; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "rep_%03d", i);
    reps.push_back({i, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)), (fs::path(out_dir) / name).string()});
  }
  return reps;
}

// ---------------------------------------------------------------------------
// Scenario building blocks

bool is_rb_scenario(const RunConfig& cfg) { return cfg.scenario == "rb-dephasing"; }

std::vector<std::pair<Circuit, std::int64_t>> rb_experiment(const RbSettings& rb, std::int64_t shots,
                                                           std::uint64_t seed) {
  std::vector<std::pair<Circuit, std::int64_t>> out;
  std::map<std::string, std::size_t> seen;
  for (int d : rb.depths) {
    for (int k = 0; k < rb.circuits_per_depth; ++k) {
      const std::string key = "rb/" + std::to_string(d) + "/" + std::to_string(k);
      Circuit c = sample_rb_circuit(d, derive_seed(seed, key));
      auto [it, inserted] = seen.emplace(c.str(), out.size());
      if (inserted) {
        out.emplace_back(std::move(c), shots);
      } else {
        out[it->second].second += shots;
      }
    }
  }
  return out;
}

GstDesign scenario_design(const RunConfig& cfg) {
  return gst_design(parse_circuits(cfg.gst.prep_fiducials), parse_circuits(cfg.gst.meas_fiducials),
                    parse_circuits(cfg.gst.germs), cfg.gst.max_depth);
}

GateSet scenario_targets(const RunConfig& cfg) {
  if (is_rb_scenario(cfg)) return CliffordGroup::instance().gateset();
  return ideal_qubit_gateset(cfg.gst.gates);
}

ModelSpec scenario_truth_spec(const RunConfig& cfg, std::uint64_t replicate_seed) {
  if (cfg.scenario == "total-error") {
    return random_error_modelspec(derive_seed(replicate_seed, "truth"), cfg.gst.gates, cfg.random_errors);
  }
  ModelSpec spec = cfg.truth;
  for (const auto& g : cfg.gst.gates) spec.gates.try_emplace(g);
  return spec;
}

ErrorModel scenario_truth(const RunConfig& cfg, std::uint64_t replicate_seed) {
  if (is_rb_scenario(cfg)) return build_rb_dephasing_model(cfg.rb.dephasing);
  return build_model_from_spec(scenario_truth_spec(cfg, replicate_seed));
}

std::pair<std::vector<int>, std::vector<double>> rb_survival(const DataSet& data) {
  std::map<int, std::pair<double, double>> acc;  // depth -> (successes, shots)
  for (const OutcomeCounts& rec : data.records()) {
    const auto counts = rec.aligned({"0", "1"});
    auto& a = acc[rb_depth(rec.circuit)];
    a.first += static_cast<double>(counts[0]);
    a.second += static_cast<double>(rec.total());
  }
  std::pair<std::vector<int>, std::vector<double>> out;
  for (const auto& [d, a] : acc) {
    out.first.push_back(d);
    out.second.push_back(a.first / a.second);
  }
  return out;
}

ErrorModel rb_curve_model(const RbFit& fit) {
  return ErrorModel::with_rb_curve(CliffordGroup::instance().gateset(), {fit.a, fit.b, fit.eta},
                                   {{"construction", "RB curve fit"}, {"r", fit.r}});
}

WildcardFamily scenario_family(const RunConfig& cfg, const ErrorModel& model) {
  const auto labels = model.gateset().labels();
  if (is_rb_scenario(cfg)) return WildcardFamily::rb_depth(labels);
  if (cfg.family == "tied") return WildcardFamily::tied(labels, "gate");
  return WildcardFamily::per_gate(labels);
}

// ---------------------------------------------------------------------------
// Stages

namespace {

json provenance(const RunConfig& cfg, const Replicate& rep) {
  return {{"config_hash", config_hash(cfg)}, {"seed", rep.seed}, {"master_seed", cfg.seed}, {"replicate", rep.index}};
}

std::string tsv_header(const RunConfig& cfg, const Replicate& rep) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash(cfg) << "\n# seed=" << rep.seed << "\n";
  return os.str();
}

std::string tsv_header(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# config_hash=" << config_hash(cfg) << "\n# seed=" << cfg.seed << "\n";
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

fs::path at(const Replicate& rep, const char* file) { return fs::path(rep.dir) / file; }

DataSet load_run_dataset(const Replicate& rep) {
  const fs::path p = at(rep, "dataset.jsonl");
  if (!fs::exists(p)) throw_data("missing " + p.string() + " (run simulate first)");
  return load_dataset(p.string());
}

ErrorModel load_model(const fs::path& path, const std::string& hint) {
  return model_from_json(read_json_file(path, hint));
}

ErrorModel wildcard_model(const RunConfig& cfg, const Replicate& rep) {
  if (cfg.wildcard_model == "target") return load_model(at(rep, "target_model.json"), "run simulate first");
  return load_model(at(rep, "model.json"), is_rb_scenario(cfg) ? "run fit-rb first" : "run fit-gst first");
}

json model_doc(const ErrorModel& model, const RunConfig& cfg, const Replicate& rep) {
  json doc = model_to_json(model);
  doc["provenance"] = provenance(cfg, rep);
  return doc;
}

void write_report_file(const fs::path& path, const ConsistencyReport& report, const RunConfig& cfg,
                       const Replicate& rep) {
  std::ostringstream os;
  write_consistency_report(os, report, provenance(cfg, rep));
  write_text(path, os.str());
}

}  // namespace

void stage_simulate(const RunConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw_data("cannot create " + out_dir + ": " + ec.message());
  json cfg_doc = config_to_json(cfg);
  cfg_doc["provenance"] = {{"config_hash", config_hash(cfg)}, {"seed", cfg.seed}};
  write_json(fs::path(out_dir) / "config.json", cfg_doc);

  for (const Replicate& rep : replicates(cfg, out_dir)) {
    fs::create_directories(rep.dir, ec);
    if (ec) throw_data("cannot create " + rep.dir + ": " + ec.message());
    const ErrorModel truth = scenario_truth(cfg, rep.seed);
    json truth_doc = model_doc(truth, cfg, rep);
    if (!is_rb_scenario(cfg)) truth_doc["spec"] = modelspec_to_json(scenario_truth_spec(cfg, rep.seed));
    write_json(at(rep, "truth_model.json"), truth_doc);
    write_json(at(rep, "target_model.json"), model_doc(target_model(scenario_targets(cfg)), cfg, rep));

    std::vector<std::pair<Circuit, std::int64_t>> experiment;
    if (is_rb_scenario(cfg)) {
      experiment = rb_experiment(cfg.rb, cfg.shots, derive_seed(rep.seed, "rb-design"));
    } else {
      const GstDesign design = scenario_design(cfg);
      std::string lines;
      for (const DesignEntry& e : design.entries) {
        lines += design_entry_to_json(e).dump() + "\n";
        experiment.emplace_back(e.circuit, cfg.shots);
      }
      write_text(at(rep, "design.jsonl"), lines);
    }
    DataSet data = simulate_dataset(truth, experiment, derive_seed(rep.seed, "data"));
    std::ostringstream os;
    write_dataset(os, data);
    write_text(at(rep, "dataset.jsonl"), os.str());
    json meta{{"provenance", provenance(cfg, rep)},
              {"truth_kind", to_string(truth.kind())},
              {"circuits", data.size()},
              {"shots_per_draw", cfg.shots}};
    write_json(at(rep, "dataset.meta.json"), meta);
  }
}

void stage_fit_rb(const RunConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  if (!is_rb_scenario(cfg)) throw_usage("fit-rb applies to the rb-dephasing scenario");
  for (const Replicate& rep : replicates(cfg, out_dir)) {
    const DataSet data = load_run_dataset(rep);
    const auto [depths, survival] = rb_survival(data);
    const RbFit fit = fit_rb_decay(depths, survival);
    json doc = rb_fit_to_json(fit);
    doc["depths"] = depths;
    doc["survival"] = survival;
    doc["provenance"] = provenance(cfg, rep);
    write_json(at(rep, "rb_fit.json"), doc);
    write_json(at(rep, "model.json"), model_doc(rb_curve_model(fit), cfg, rep));
  }
}

void stage_fit_gst(const RunConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  if (is_rb_scenario(cfg)) throw_usage("fit-gst applies to GST-design scenarios");
  const GateSet targets = scenario_targets(cfg);
  for (const Replicate& rep : replicates(cfg, out_dir)) {
    const DataSet data = load_run_dataset(rep);
    const GstFitResult fit = mle_fit_gst(data, targets);
    const GateSet fixed = gauge_fix(fit.gateset, targets);
    json diag = gst_fit_to_json(fit);
    const ErrorModel model(ModelKind::kProcessMatrix, fixed,
                           {{"construction", "GST-lite MLE, SO(3) gauge fixed"}, {"diagnostics", diag}});
    write_json(at(rep, "model.json"), model_doc(model, cfg, rep));
    diag["provenance"] = provenance(cfg, rep);
    diag["trace"] = fit.trace;
    write_json(at(rep, "gst_fit.json"), diag);
  }
}

void stage_wildcard(const RunConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  for (const Replicate& rep : replicates(cfg, out_dir)) {
    const DataSet data = load_run_dataset(rep);
    const ErrorModel model = wildcard_model(cfg, rep);
    const WildcardFamily family = scenario_family(cfg, model);
    const WildcardProblem problem = make_wildcard_problem(model, data, family, cfg.alpha);

    auto solve = [&](const std::string& objective_text, const char* file) {
      const Objective objective = parse_objective(objective_text, family.size());
      const WildcardSolution sol = solve_min_wildcard(problem, objective);
      const MinimalityCertificate cert = certify_minimal(problem, sol.w);
      json doc = wildcard_result_to_json(problem, sol, objective, cert);
      doc["model"] = cfg.wildcard_model;
      doc["provenance"] = provenance(cfg, rep);
      write_json(at(rep, file), doc);
      return sol;
    };
    const WildcardSolution sol = solve(cfg.objective, "wildcard.json");
    if (family.size() == 2 && !cfg.alt_objective.empty()) solve(cfg.alt_objective, "wildcard_alt.json");

    write_report_file(at(rep, "consistency_pre.tsv"),
                      wildcard_consistency(problem, Eigen::VectorXd::Zero(family.size())), cfg, rep);
    write_report_file(at(rep, "consistency_post.tsv"), wildcard_consistency(problem, sol.w), cfg, rep);
  }
}

void stage_diamond(const RunConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  for (const Replicate& rep : replicates(cfg, out_dir)) {
    std::ostringstream os;
    os << tsv_header(cfg, rep);
    os << "gate\tcompared\teps_diamond\tentangled_input_value\tavg_gate_fidelity\tconverged\n";
    auto row = [&](const std::string& gate, const std::string& compared, const SuperOp& a, const SuperOp& b) {
      const DiamondResult d = diamond_numeric(a, b);
      os << gate << '\t' << compared << '\t' << num(d.value) << '\t' << num(d.entangled_value) << '\t'
         << num(avg_gate_fidelity(a, b)) << '\t' << (d.converged ? "true" : "false") << '\n';
    };
    if (is_rb_scenario(cfg)) {
      const json fit = read_json_file(at(rep, "rb_fit.json"), "run fit-rb first");
      const double eta = fit.at("eta").get<double>();
      const SuperOp truth = channel_dephasing(cfg.rb.dephasing);
      const SuperOp model = channel_depolarizing(1.0 - eta);
      const double analytic = pauli_diamond(pauli_probs_from_ptm(truth), pauli_probs_from_ptm(model));
      os << "# pauli_diamond=" << num(analytic) << '\n';
      row("gate", "truth_error_vs_depolarizing_model", truth, model);
    } else {
      const GateSet targets = scenario_targets(cfg);
      const json truth_doc = read_json_file(at(rep, "truth_model.json"), "run simulate first");
      const ModelSpec spec = modelspec_from_json(truth_doc.at("spec"));
      if (!spec.has_leakage()) {
        for (const auto& label : targets.labels()) {
          row(label, "truth_vs_target", noisy_gate(label, spec.gates.at(label)), targets.gate(label));
        }
      }
      const fs::path fitted = at(rep, "model.json");
      if (fs::exists(fitted)) {
        const ErrorModel model = load_model(fitted, "");
        for (const auto& label : targets.labels()) {
          row(label, "fit_vs_target", model.gateset().gate(label).with_exact_trace_row(), targets.gate(label));
        }
      }
    }
    write_text(at(rep, "diamond.tsv"), os.str());
  }
}

namespace {

struct WildcardFile {
  std::vector<std::string> labels;
  std::vector<double> w;
  double get(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) return w[i];
    }
    return 0.0;
  }
};

WildcardFile read_wildcard(const fs::path& path) {
  const json doc = read_json_file(path, "run wildcard first");
  return {doc.at("parameters").get<std::vector<std::string>>(), doc.at("w").get<std::vector<double>>()};
}

// gate -> (compared -> eps) from diamond.tsv
std::map<std::string, std::map<std::string, double>> read_diamond(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_data("incomplete run: missing " + path.string() + " (run diamond first)");
  std::map<std::string, std::map<std::string, double>> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string gate, compared, eps;
    std::getline(ls, gate, '\t');
    std::getline(ls, compared, '\t');
    std::getline(ls, eps, '\t');
    out[gate][compared] = std::stod(eps);
  }
  return out;
}

std::vector<DesignEntry> read_design(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_data("incomplete run: missing " + path.string());
  std::vector<DesignEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(design_entry_from_json(json::parse(line)));
  }
  return out;
}

void require(const Replicate& rep, std::initializer_list<const char*> files) {
  for (const char* f : files) {
    if (!fs::exists(at(rep, f))) throw_data("incomplete run: missing " + at(rep, f).string());
  }
}

}  // namespace

void stage_report(const RunConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  if (!fs::exists(fs::path(out_dir) / "config.json")) {
    throw_data("incomplete run: " + out_dir + " has no config.json (run simulate first)");
  }
  const auto reps = replicates(cfg, out_dir);
  for (const Replicate& rep : reps) {
    require(rep, {"dataset.jsonl", "wildcard.json", "consistency_pre.tsv", "consistency_post.tsv", "diamond.tsv"});
  }
  const fs::path root(out_dir);
  const Replicate& first = reps.front();

  if (is_rb_scenario(cfg)) {
    require(first, {"wildcard_alt.json", "rb_fit.json"});
    const DataSet data = load_run_dataset(first);
    const ErrorModel model = wildcard_model(cfg, first);
    const WildcardFamily family = scenario_family(cfg, model);
    const WildcardProblem problem = make_wildcard_problem(model, data, family, cfg.alpha);
    const WildcardFile l1 = read_wildcard(at(first, "wildcard.json"));
    const WildcardFile alt = read_wildcard(at(first, "wildcard_alt.json"));

    std::ostringstream a;
    a << tsv_header(cfg, first)
      << "circuit\tdepth\tshots\tf0\tp0\tsigma\tprimary_lo\tprimary_hi\talt_lo\talt_hi\n";
    for (std::size_t i = 0; i < problem.circuits.size(); ++i) {
      const double f0 = problem.frequencies[i][0], p0 = problem.predictions[i][0];
      const Eigen::VectorXd n = problem.counts.row(static_cast<Eigen::Index>(i)).transpose();
      const double w1 = std::min(1.0, n[0] * l1.w[0] + n[1] * l1.w[1]);
      const double w2 = std::min(1.0, n[0] * alt.w[0] + n[1] * alt.w[1]);
      a << problem.circuits[i].str() << '\t' << rb_depth(problem.circuits[i]) << '\t' << num(problem.shots[i]) << '\t' << num(f0) << '\t'
        << num(p0) << '\t' << num(std::sqrt(f0 * (1 - f0) / problem.shots[i])) << '\t'
        << num(std::max(0.0, p0 - w1)) << '\t' << num(std::min(1.0, p0 + w1)) << '\t'
        << num(std::max(0.0, p0 - w2)) << '\t' << num(std::min(1.0, p0 + w2)) << '\n';
    }
    write_text(root / "fig2a.tsv", a.str());

    const Frontier2d fr = frontier_2d(problem, cfg.frontier.angles, cfg.frontier.grid);
    std::ostringstream g, f, p;
    g << tsv_header(cfg, first) << "w_spam\tw_gate\tfeasible\n";
    for (std::size_t i = 0; i < fr.spam_axis.size(); ++i) {
      for (std::size_t j = 0; j < fr.gate_axis.size(); ++j) {
        g << num(fr.spam_axis[i]) << '\t' << num(fr.gate_axis[j]) << '\t' << (fr.feasible[i][j] ? 1 : 0) << '\n';
      }
    }
    write_text(root / "fig2b_grid.tsv", g.str());
    f << tsv_header(cfg, first) << "w_spam\tw_gate\n";
    for (const auto& pt : fr.points) f << num(pt[0]) << '\t' << num(pt[1]) << '\n';
    write_text(root / "fig2b_frontier.tsv", f.str());
    p << tsv_header(cfg, first) << "selection\tobjective\tw_spam\tw_gate\n";
    p << "primary\t" << cfg.objective << '\t' << num(l1.w[0]) << '\t' << num(l1.w[1]) << '\n';
    p << "alt\t" << cfg.alt_objective << '\t' << num(alt.w[0]) << '\t' << num(alt.w[1]) << '\n';
    write_text(root / "fig2b_points.tsv", p.str());

    std::ostringstream c;
    c << tsv_header(cfg) << "replicate\tseed\tshots\tcircuits_per_depth\tw_spam\tw_gate\teps_diamond\tratio\n";
    for (const Replicate& rep : reps) {
      const WildcardFile w = read_wildcard(at(rep, "wildcard.json"));
      const double eps = read_diamond(at(rep, "diamond.tsv")).at("gate").at("truth_error_vs_depolarizing_model");
      c << rep.index << '\t' << rep.seed << '\t' << cfg.shots << '\t' << cfg.rb.circuits_per_depth << '\t'
        << num(w.w[0]) << '\t' << num(w.w[1]) << '\t' << num(eps) << '\t' << num(eps > 0 ? w.w[1] / eps : 0.0)
        << '\n';
    }
    write_text(root / "fig2c.tsv", c.str());
    return;
  }

  if (cfg.scenario == "total-error") {
    // Panel (a): one replicate with w_x = w_y tied.
    const DataSet data = load_run_dataset(first);
    const ErrorModel model = wildcard_model(cfg, first);
    const WildcardFamily tied = WildcardFamily::tied(model.gateset().labels(), "gate");
    const WildcardProblem problem = make_wildcard_problem(model, data, tied, cfg.alpha);
    const WildcardSolution sol = solve_min_wildcard(problem, parse_objective("l1", 2));
    std::ostringstream a;
    a << tsv_header(cfg, first) << "# w_spam=" << num(sol.w[0]) << "\n# w_gate=" << num(sol.w[1]) << "\n"
      << "circuit\tdepth\tshots\tf1\tp1\tregion_lo\tregion_hi\n";
    for (std::size_t i = 0; i < problem.circuits.size(); ++i) {
      const double f1 = problem.frequencies[i][1], p1 = problem.predictions[i][1];
      const double w = std::min(1.0, problem.counts.row(static_cast<Eigen::Index>(i)).dot(sol.w));
      a << problem.circuits[i].str() << '\t' << problem.circuits[i].depth() << '\t' << num(problem.shots[i])
        << '\t' << num(f1) << '\t' << num(p1) << '\t' << num(std::max(0.0, p1 - w)) << '\t'
        << num(std::min(1.0, p1 + w)) << '\n';
    }
    write_text(root / "fig3a.tsv", a.str());

    std::ostringstream b;
    b << tsv_header(cfg) << "replicate\tseed\tgate\tw_gate\teps_diamond\tw_spam\n";
    for (const Replicate& rep : reps) {
      const WildcardFile w = read_wildcard(at(rep, "wildcard.json"));
      const auto eps = read_diamond(at(rep, "diamond.tsv"));
      for (const auto& label : cfg.gst.gates) {
        b << rep.index << '\t' << rep.seed << '\t' << label << '\t' << num(w.get(label)) << '\t'
          << num(eps.at(label).at("truth_vs_target")) << '\t' << num(w.get("SPAM")) << '\n';
      }
    }
    write_text(root / "fig3b.tsv", b.str());
    return;
  }

  // gst-leakage and custom: per-germ/depth LLR grids, w_C vs TVD, per-gate w.
  const DataSet data = load_run_dataset(first);
  const ErrorModel model = wildcard_model(cfg, first);
  const WildcardFamily family = scenario_family(cfg, model);
  const WildcardProblem problem = make_wildcard_problem(model, data, family, cfg.alpha);
  const WildcardFile wf = read_wildcard(at(first, "wildcard.json"));
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(wf.w.data(), static_cast<Eigen::Index>(wf.w.size()));
  const ConsistencyReport pre = wildcard_consistency(problem, Eigen::VectorXd::Zero(w.size()));
  const ConsistencyReport post = wildcard_consistency(problem, w);
  const std::vector<DesignEntry> design = read_design(at(first, "design.jsonl"));
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < problem.circuits.size(); ++i) row_of[problem.circuits[i].str()] = i;

  struct Cell {
    double pre = 0, post = 0;
    int circuits = 0, pre_fail = 0, post_fail = 0;
  };
  std::map<std::pair<std::string, int>, Cell> cells;
  std::vector<std::pair<std::string, int>> order;
  std::ostringstream c;
  c << tsv_header(cfg, first) << "circuit\tgerm\tL\tw_C\ttvd\n";
  for (const DesignEntry& e : design) {
    auto it = row_of.find(e.circuit.str());
    if (it == row_of.end()) continue;
    const std::size_t i = it->second;
    const auto key = std::make_pair(e.germ.str(), e.ladder_depth);
    if (!cells.count(key)) order.push_back(key);
    Cell& cell = cells[key];
    cell.pre += pre.rows[i].lambda_star;
    cell.post += post.rows[i].lambda_star;
    cell.circuits += 1;
    cell.pre_fail += pre.rows[i].pass ? 0 : 1;
    cell.post_fail += post.rows[i].pass ? 0 : 1;
    c << e.circuit.str() << '\t' << e.germ.str() << '\t' << e.ladder_depth << '\t' << num(post.rows[i].radius)
      << '\t' << num(tvd(problem.frequencies[i], problem.predictions[i])) << '\n';
  }
  write_text(root / "fig4c.tsv", c.str());
  for (int panel = 0; panel < 2; ++panel) {
    std::ostringstream os;
    os << tsv_header(cfg, first) << "# wildcard=" << (panel == 0 ? "none" : "solved") << "\n"
       << "germ\tL\tcircuits\tllr_sum\tsignificant\n";
    for (const auto& key : order) {
      const Cell& cell = cells.at(key);
      os << key.first << '\t' << key.second << '\t' << cell.circuits << '\t' << num(panel == 0 ? cell.pre : cell.post)
         << '\t' << (panel == 0 ? cell.pre_fail : cell.post_fail) << '\n';
    }
    write_text(root / (panel == 0 ? "fig4a.tsv" : "fig4b.tsv"), os.str());
  }
  std::ostringstream d;
  const auto eps = read_diamond(at(first, "diamond.tsv"));
  d << tsv_header(cfg, first) << "parameter\tw\teps_diamond_fit\n";
  for (std::size_t k = 0; k < wf.labels.size(); ++k) {
    double e = 0.0;
    bool have = false;
    if (auto it = eps.find(wf.labels[k]); it != eps.end() && it->second.count("fit_vs_target")) {
      e = it->second.at("fit_vs_target");
      have = true;
    }
    d << wf.labels[k] << '\t' << num(wf.w[k]) << '\t' << (have ? num(e) : "NA") << '\n';
  }
  write_text(root / "fig4d.tsv", d.str());
}

void run_pipeline(const RunConfig& cfg, const std::string& out_dir) {
  stage_simulate(cfg, out_dir);
  if (cfg.wildcard_model == "fit") {
    if (is_rb_scenario(cfg)) {
      stage_fit_rb(cfg, out_dir);
    } else {
      stage_fit_gst(cfg, out_dir);
    }
  }
  stage_wildcard(cfg, out_dir);
  stage_diamond(cfg, out_dir);
  stage_report(cfg, out_dir);
}

}  // namespace wildcard
