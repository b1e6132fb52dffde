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

#ifndef WILDCARD_WILDCARD_OPT_H_
#define WILDCARD_WILDCARD_OPT_H_

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "wildcard/circuit.h"
#include "wildcard/dataset.h"
#include "wildcard/noise_models.h"
#include "wildcard/stats.h"

namespace wildcard {

// Linear wildcard budgets w_C = n(C).w. Parameter 0 is always SPAM, counted
// once per circuit; every gate label maps to exactly one parameter, so tied
// groups (e.g. one w_gate for all Cliffords) are many-to-one maps.
class WildcardFamily {
 public:
  WildcardFamily(std::vector<std::string> parameter_labels, std::map<std::string, int> gate_to_parameter);

  // (w_SPAM, w_g1, w_g2, ...) with one rate per gate label.
  static WildcardFamily per_gate(const std::vector<std::string>& gate_labels);
  // (w_SPAM, w_<name>) shared by all gate labels.
  static WildcardFamily tied(const std::vector<std::string>& gate_labels, const std::string& name = "gate");
  // (w_SPAM, w_gate) with the gate count taken as the RB depth: the final
  // inversion Clifford is not counted.
  static WildcardFamily rb_depth(const std::vector<std::string>& gate_labels);

  const std::vector<std::string>& parameter_labels() const { return labels_; }
  int size() const { return static_cast<int>(labels_.size()); }
  static constexpr int kSpam = 0;

  // n(C): SPAM entry 1 plus gate occurrence counts. Throws Error(kData) on an
  // unknown label.
  Eigen::VectorXd counts(const Circuit& circuit) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> gate_to_param_;
  bool skip_last_gate_ = false;
};

// A linear selection objective c.w with c >= 0.
struct Objective {
  std::string name = "l1";
  Eigen::VectorXd weights;
};
// "l1" or "weighted:<c0>,<c1>,..." (one weight per family parameter).
Objective parse_objective(const std::string& text, int num_parameters);

// Everything the optimizer needs, precomputed once per (model, data, family).
struct WildcardProblem {
  WildcardFamily family;
  double alpha = 0.05;
  std::vector<Circuit> circuits;
  std::vector<ProbDist> frequencies;
  std::vector<ProbDist> predictions;
  std::vector<double> shots;
  Eigen::MatrixXd counts;          // one row n(C) per circuit
  std::vector<double> thresholds;  // per-circuit Bonferroni thresholds
  std::vector<double> budgets;     // t_C
  double aggregate_threshold = 0.0;
};

// Throws Error(kData) if the model lacks a prediction for a data circuit.
WildcardProblem make_wildcard_problem(const ErrorModel& model, const DataSet& data, const WildcardFamily& family,
                                      double alpha = 0.05);

struct FeasibilityReport {
  bool feasible = false;
  bool per_circuit_ok = false;
  bool aggregate_ok = false;
  double aggregate = 0.0;
  std::vector<double> radii;
  std::vector<double> lambda_star;
};

FeasibilityReport evaluate_wildcard(const WildcardProblem& problem, const Eigen::VectorXd& w);
bool feasible(const WildcardProblem& problem, const Eigen::VectorXd& w);

// Sum_C lambda*_C(n(C).w) and its gradient in w.
double aggregate_lambda(const WildcardProblem& problem, const Eigen::VectorXd& w, Eigen::VectorXd* gradient);

// Full consistency report for the prediction regions induced by w.
ConsistencyReport wildcard_consistency(const WildcardProblem& problem, const Eigen::VectorXd& w);

struct SolveOptions {
  // Secondary objective: among optima, drive w_SPAM to zero.
  bool prefer_zero_spam = true;
  double aggregate_rel_tol = 1e-9;
  int max_cuts = 500;
};

struct WildcardSolution {
  Eigen::VectorXd w;
  double objective = 0.0;
  int cuts = 0;
  bool aggregate_active = false;
  std::vector<std::size_t> active_circuits;
  FeasibilityReport feasibility;
  std::vector<std::string> trace;
};

// Phase 1: the LP {min c.w : n(C).w >= t_C, 0 <= w <= 1}. Phase 2 (only if the
// aggregated test still fails): Kelley cutting planes on the convex aggregate
// constraint, then a final radial step onto the feasible side. Throws
// Error(kSolver) with the iterate trace if the cut loop does not converge.
WildcardSolution solve_min_wildcard(const WildcardProblem& problem, const Objective& objective,
                                    const SolveOptions& options = {});

struct MinimalityCertificate {
  bool minimal = false;
  bool feasible = false;
  // For each parameter: true if shrinking it by delta breaks feasibility (or it is already 0).
  std::vector<bool> component_tight;
};

// w is certified minimal at resolution delta if it is feasible and scaling any
// positive component by (1 - delta), others fixed, is infeasible.
MinimalityCertificate certify_minimal(const WildcardProblem& problem, const Eigen::VectorXd& w,
                                      double delta = 1e-3);

struct Frontier2d {
  std::vector<Eigen::Vector2d> points;  // minimal models sorted by w_SPAM
  std::vector<double> weight_angles;
  std::vector<double> spam_axis;
  std::vector<double> gate_axis;
  std::vector<std::vector<bool>> feasible;  // feasible[i][j] at (spam_axis[i], gate_axis[j])
};

// Sweeps c = (cos a, sin a) over a in (0, pi/2) and evaluates feasibility on
// a grid spanning the frontier. Requires a 2-parameter family.
Frontier2d frontier_2d(const WildcardProblem& problem, int num_angles = 24, int grid_size = 40);

// Result document: labels, w, objective, active constraints, certification and
// the per-circuit (t_C, w_C, lambda*) table.
nlohmann::json wildcard_result_to_json(const WildcardProblem& problem, const WildcardSolution& solution,
                                       const Objective& objective, const MinimalityCertificate& cert);

}  // namespace wildcard

#endif  // WILDCARD_WILDCARD_OPT_H_
