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

#ifndef WILDCARD_NOISE_MODELS_H_
#define WILDCARD_NOISE_MODELS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wildcard/circuit.h"
#include "wildcard/quantum_core.h"

namespace wildcard {

enum class ModelKind { kTarget, kDepolarizing, kProcessMatrix, kLeakage };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);

// Survival curve A + B eta^m fitted by RB. A model carrying one predicts, for a
// circuit of RB depth m (Cliffords before the final inversion, see rb_depth),
// s = A + B eta^m of the ideal distribution's weight and
// spreads the rest uniformly: p = lambda p_ideal + (1 - lambda)/m with
// lambda = (s - 1/m) / (1 - 1/m).
struct RbCurve {
  double a = 0.5;
  double b = 0.5;
  double eta = 1.0;
};

// M: circuit -> outcome distribution. Immutable after construction; predict()
// memoizes per canonical circuit text behind a reader/writer lock, so a model
// may be shared across threads.
class ErrorModel {
 public:
  ErrorModel(ModelKind kind, GateSet gateset, nlohmann::json metadata = nlohmann::json::object());
  static ErrorModel with_rb_curve(GateSet target, RbCurve curve,
                                  nlohmann::json metadata = nlohmann::json::object());

  ModelKind kind() const { return kind_; }
  const GateSet& gateset() const { return gateset_; }
  const std::optional<RbCurve>& rb_curve() const { return rb_curve_; }
  const nlohmann::json& metadata() const { return metadata_; }
  const std::vector<std::string>& outcome_labels() const { return gateset_.outcome_labels; }

  bool covers(const Circuit& circuit) const;
  // Throws Error(kData) on an unknown gate label.
  ProbDist predict(const Circuit& circuit) const;

 private:
  struct Cache;
  ProbDist compute(const Circuit& circuit) const;

  ModelKind kind_;
  GateSet gateset_;
  std::optional<RbCurve> rb_curve_;
  nlohmann::json metadata_;
  std::shared_ptr<Cache> cache_;
};

nlohmann::json model_to_json(const ErrorModel& model);
ErrorModel model_from_json(const nlohmann::json& doc);

ErrorModel target_model(GateSet ideal);

// Every gate followed by uniform depolarization with PTM diag(1, eta, eta, eta),
// eta = 1 - 2r. 0 <= r <= 1/2.
ErrorModel build_depolarizing_model(const GateSet& ideal, double r);

struct GateErrorSpec {
  double depolarizing = 0.0;    // q in rho -> (1-q) rho + q I/2
  double rotation_error = 0.0;  // radians added to the nominal angle (Z axis for Gi)
  double dephasing = 0.0;       // Z-flip probability
  double leakage = 0.0;         // per-gate leak probability to |2>
};

struct ModelSpec {
  std::map<std::string, GateErrorSpec> gates;
  double prep_depolarizing = 0.0;
  double meas_flip = 0.0;

  // Throws Error(kUsage) on rates outside their physical ranges.
  void validate() const;
  bool has_leakage() const;
};

nlohmann::json modelspec_to_json(const ModelSpec& spec);
ModelSpec modelspec_from_json(const nlohmann::json& doc);

struct ErrorRanges {
  double depolarizing_lo = 0.0;
  double depolarizing_hi = 0.02;
  double rotation_lo = -0.05;
  double rotation_hi = 0.05;
};

// Independent uniform draws per gate, in label order; reproducible under seed.
ModelSpec random_error_modelspec(std::uint64_t seed, const std::vector<std::string>& labels,
                                 const ErrorRanges& ranges = {});

// Noisy gate: nominal rotation (plus rotation_error), then dephasing, then
// depolarization; leaky specs embed every gate into a qutrit.
SuperOp noisy_gate(const std::string& label, const GateErrorSpec& spec);
ErrorModel build_model_from_spec(const ModelSpec& spec);

// RB truth: each Clifford followed by Z dephasing with flip probability p.
ErrorModel build_rb_dephasing_model(double p);

}  // namespace wildcard

#endif  // WILDCARD_NOISE_MODELS_H_
