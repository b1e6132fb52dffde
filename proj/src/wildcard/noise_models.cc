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

#include "wildcard/noise_models.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <unordered_map>

#include "wildcard/clifford.h"
#include "wildcard/error.h"
#include "wildcard/random.h"

namespace wildcard {

struct ErrorModel::Cache {
  std::shared_mutex mutex;
  std::unordered_map<std::string, ProbDist> entries;
};

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTarget: return "target";
    case ModelKind::kDepolarizing: return "depolarizing";
    case ModelKind::kProcessMatrix: return "process-matrix";
    case ModelKind::kLeakage: return "leakage";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& text) {
  if (text == "target") return ModelKind::kTarget;
  if (text == "depolarizing") return ModelKind::kDepolarizing;
  if (text == "process-matrix") return ModelKind::kProcessMatrix;
  if (text == "leakage") return ModelKind::kLeakage;
  throw_data("unknown model kind '" + text + "'");
}

ErrorModel::ErrorModel(ModelKind kind, GateSet gateset, nlohmann::json metadata)
    : kind_(kind), gateset_(std::move(gateset)), metadata_(std::move(metadata)),
      cache_(std::make_shared<Cache>()) {
  gateset_.validate();
}

ErrorModel ErrorModel::with_rb_curve(GateSet target, RbCurve curve, nlohmann::json metadata) {
  if (!(curve.eta >= 0.0 && curve.eta <= 1.0)) throw_usage("RB decay must lie in [0, 1]");
  ErrorModel m(ModelKind::kDepolarizing, std::move(target), std::move(metadata));
  m.rb_curve_ = curve;
  return m;
}

bool ErrorModel::covers(const Circuit& circuit) const {
  return std::all_of(circuit.labels().begin(), circuit.labels().end(),
                     [&](const std::string& l) { return gateset_.has_gate(l); });
}

ProbDist ErrorModel::compute(const Circuit& circuit) const {
  ProbDist p = circuit_probs(gateset_, circuit);
  if (!rb_curve_) return p;
  const double m = static_cast<double>(p.size());
  const double depth = circuit.depth() == 0 ? 0.0 : static_cast<double>(rb_depth(circuit));
  const double s = std::clamp(rb_curve_->a + rb_curve_->b * std::pow(rb_curve_->eta, depth), 0.0, 1.0);
  const double lambda = (s - 1.0 / m) / (1.0 - 1.0 / m);
  for (double& v : p) v = lambda * v + (1.0 - lambda) / m;
  return p;
}

ProbDist ErrorModel::predict(const Circuit& circuit) const {
  const std::string key = circuit.str();
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return it->second;
  }
  ProbDist p = compute(circuit);
  std::unique_lock lock(cache_->mutex);
  cache_->entries.emplace(key, p);
  return p;
}

nlohmann::json model_to_json(const ErrorModel& model) {
  nlohmann::json doc = gateset_to_json(model.gateset());
  doc["kind"] = to_string(model.kind());
  if (model.rb_curve()) {
    doc["rb"] = {{"A", model.rb_curve()->a}, {"B", model.rb_curve()->b}, {"eta", model.rb_curve()->eta}};
  }
  doc["metadata"] = model.metadata();
  return doc;
}

ErrorModel model_from_json(const nlohmann::json& doc) {
  GateSet gs = gateset_from_json(doc);
  try {
    const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());
    nlohmann::json meta = doc.value("metadata", nlohmann::json::object());
    if (doc.contains("rb")) {
      const auto& rb = doc.at("rb");
      return ErrorModel::with_rb_curve(
          std::move(gs), {rb.at("A").get<double>(), rb.at("B").get<double>(), rb.at("eta").get<double>()},
          std::move(meta));
    }
    return ErrorModel(kind, std::move(gs), std::move(meta));
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("malformed model document: ") + e.what());
  }
}

ErrorModel target_model(GateSet ideal) {
  return ErrorModel(ModelKind::kTarget, std::move(ideal), {{"construction", "ideal gates"}});
}

ErrorModel build_depolarizing_model(const GateSet& ideal, double r) {
  if (!(r >= 0.0 && r <= 0.5)) throw_usage("RB error rate must lie in [0, 1/2]");
  if (ideal.dim != 2) throw_usage("depolarizing model is single-qubit");
  const double eta = 1.0 - 2.0 * r;
  const SuperOp depol = channel_depolarizing(1.0 - eta);
  GateSet gs = ideal;
  for (auto& [label, op] : gs.gates) op = compose(op, depol);
  return ErrorModel(ModelKind::kDepolarizing, std::move(gs),
                    {{"construction", "ideal gates followed by depolarization"}, {"r", r}, {"eta", eta}});
}

// ---------------------------------------------------------------------------
// ModelSpec

void ModelSpec::validate() const {
  for (const auto& [label, g] : gates) {
    if (!(g.depolarizing >= 0.0 && g.depolarizing <= 4.0 / 3.0)) throw_usage(label + ": depolarizing out of range");
    if (!(g.dephasing >= 0.0 && g.dephasing <= 1.0)) throw_usage(label + ": dephasing out of range");
    if (!(g.leakage >= 0.0 && g.leakage <= 1.0)) throw_usage(label + ": leakage out of range");
    if (!std::isfinite(g.rotation_error)) throw_usage(label + ": rotation error not finite");
  }
  if (!(prep_depolarizing >= 0.0 && prep_depolarizing <= 1.0)) throw_usage("prep depolarizing out of range");
  if (!(meas_flip >= 0.0 && meas_flip <= 1.0)) throw_usage("measurement flip out of range");
}

bool ModelSpec::has_leakage() const {
  return std::any_of(gates.begin(), gates.end(), [](const auto& kv) { return kv.second.leakage > 0.0; });
}

nlohmann::json modelspec_to_json(const ModelSpec& spec) {
  nlohmann::json gates = nlohmann::json::object();
  for (const auto& [label, g] : spec.gates) {
    gates[label] = {{"depolarizing", g.depolarizing},
                    {"rotation_error", g.rotation_error},
                    {"dephasing", g.dephasing},
                    {"leakage", g.leakage}};
  }
  return {{"gates", gates}, {"prep_depolarizing", spec.prep_depolarizing}, {"meas_flip", spec.meas_flip}};
}

ModelSpec modelspec_from_json(const nlohmann::json& doc) {
  try {
    ModelSpec spec;
    for (const auto& [label, g] : doc.at("gates").items()) {
      spec.gates[label] = {g.value("depolarizing", 0.0), g.value("rotation_error", 0.0),
                           g.value("dephasing", 0.0), g.value("leakage", 0.0)};
    }
    spec.prep_depolarizing = doc.value("prep_depolarizing", 0.0);
    spec.meas_flip = doc.value("meas_flip", 0.0);
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw_usage(std::string("malformed model spec: ") + e.what());
  }
}

ModelSpec random_error_modelspec(std::uint64_t seed, const std::vector<std::string>& labels,
                                 const ErrorRanges& ranges) {
  if (ranges.depolarizing_lo > ranges.depolarizing_hi || ranges.rotation_lo > ranges.rotation_hi) {
    throw_usage("error range bounds are inverted");
  }
  Rng rng(seed);
  ModelSpec spec;
  for (const auto& label : labels) {
    GateErrorSpec g;
    g.depolarizing = uniform_real(rng, ranges.depolarizing_lo, ranges.depolarizing_hi);
    g.rotation_error = uniform_real(rng, ranges.rotation_lo, ranges.rotation_hi);
    spec.gates[label] = g;
  }
  spec.validate();
  return spec;
}

SuperOp noisy_gate(const std::string& label, const GateErrorSpec& spec) {
  constexpr double kHalfPi = std::numbers::pi / 2;
  SuperOp base = SuperOp::identity(2);
  if (label == "Gi") {
    base = channel_rotation(Axis::kZ, spec.rotation_error);
  } else if (label == "Gx") {
    base = channel_rotation(Axis::kX, kHalfPi + spec.rotation_error);
  } else if (label == "Gy") {
    base = channel_rotation(Axis::kY, kHalfPi + spec.rotation_error);
  } else if (label == "Gz") {
    base = channel_rotation(Axis::kZ, kHalfPi + spec.rotation_error);
  } else {
    throw_usage("no nominal definition for gate '" + label + "'");
  }
  SuperOp g = compose(compose(base, channel_dephasing(spec.dephasing)), channel_depolarizing(spec.depolarizing));
  if (spec.leakage > 0.0) return embed_leakage(g, spec.leakage);
  return g;
}

ErrorModel build_model_from_spec(const ModelSpec& spec) {
  spec.validate();
  const bool leaky = spec.has_leakage();
  const int dim = leaky ? 3 : 2;
  std::map<std::string, SuperOp> gates;
  for (const auto& [label, g] : spec.gates) {
    SuperOp op = noisy_gate(label, g);
    if (leaky && op.dim() == 2) op = embed_leakage(op, 0.0);
    gates.emplace(label, std::move(op));
  }
  GateSet gs = make_gateset(dim, std::move(gates));

  using Eigen::MatrixXcd;
  MatrixXcd rho = MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0 - spec.prep_depolarizing / 2;
  rho(1, 1) = spec.prep_depolarizing / 2;
  gs.prep = StateVecRep::from_density(rho);
  gs.prep = StateVecRep(dim, [&] {
    Eigen::VectorXd c = gs.prep.coeffs();
    c[0] = 1.0;
    return c;
  }());
  MatrixXcd e0 = MatrixXcd::Zero(dim, dim);
  MatrixXcd e1 = MatrixXcd::Zero(dim, dim);
  e0(0, 0) = 1.0 - spec.meas_flip;
  e0(1, 1) = spec.meas_flip;
  e1(0, 0) = spec.meas_flip;
  e1(1, 1) = 1.0 - spec.meas_flip;
  if (dim == 3) e0(2, 2) = 1.0;
  gs.povm = {EffectRep::from_operator(e0), EffectRep::from_operator(e1)};

  return ErrorModel(leaky ? ModelKind::kLeakage : ModelKind::kProcessMatrix, std::move(gs),
                    {{"construction", "model spec"}, {"spec", modelspec_to_json(spec)}});
}

ErrorModel build_rb_dephasing_model(double p) {
  const CliffordGroup& group = CliffordGroup::instance();
  GateSet gs = group.gateset();
  const SuperOp deph = channel_dephasing(p);
  for (auto& [label, op] : gs.gates) op = compose(op, deph);
  return ErrorModel(ModelKind::kProcessMatrix, std::move(gs),
                    {{"construction", "Cliffords followed by Z dephasing"}, {"dephasing", p}});
}

}  // namespace wildcard
