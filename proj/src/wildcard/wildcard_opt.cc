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

#include "wildcard/wildcard_opt.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wildcard/error.h"
#include "wildcard/lp.h"

namespace wildcard {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Family

WildcardFamily::WildcardFamily(std::vector<std::string> parameter_labels,
                               std::map<std::string, int> gate_to_parameter)
    : labels_(std::move(parameter_labels)), gate_to_param_(std::move(gate_to_parameter)) {
  if (labels_.empty()) throw_usage("wildcard family needs a SPAM parameter");
  for (const auto& [gate, idx] : gate_to_param_) {
    if (idx <= kSpam || idx >= size()) throw_usage("gate '" + gate + "' maps to an invalid parameter");
  }
}

WildcardFamily WildcardFamily::per_gate(const std::vector<std::string>& gate_labels) {
  std::vector<std::string> labels{"SPAM"};
  std::map<std::string, int> map;
  for (const auto& g : gate_labels) {
    map[g] = static_cast<int>(labels.size());
    labels.push_back(g);
  }
  return WildcardFamily(std::move(labels), std::move(map));
}

WildcardFamily WildcardFamily::tied(const std::vector<std::string>& gate_labels, const std::string& name) {
  std::map<std::string, int> map;
  for (const auto& g : gate_labels) map[g] = 1;
  return WildcardFamily({"SPAM", name}, std::move(map));
}

WildcardFamily WildcardFamily::rb_depth(const std::vector<std::string>& gate_labels) {
  WildcardFamily family = tied(gate_labels, "gate");
  family.skip_last_gate_ = true;
  return family;
}

VectorXd WildcardFamily::counts(const Circuit& circuit) const {
  VectorXd n = VectorXd::Zero(size());
  n[kSpam] = 1.0;
  const auto& labels = circuit.labels();
  if (skip_last_gate_ && labels.empty()) throw_data("RB-depth wildcard family needs a nonempty circuit");
  for (std::size_t k = 0; k < labels.size(); ++k) {
    auto it = gate_to_param_.find(labels[k]);
    if (it == gate_to_param_.end()) throw_data("wildcard family has no parameter for gate '" + labels[k] + "'");
    if (skip_last_gate_ && k + 1 == labels.size()) continue;
    n[it->second] += 1.0;
  }
  return n;
}

Objective parse_objective(const std::string& text, int num_parameters) {
  Objective obj;
  if (text == "l1") {
    obj.name = "l1";
    obj.weights = VectorXd::Ones(num_parameters);
    return obj;
  }
  const std::string prefix = "weighted:";
  if (text.rfind(prefix, 0) != 0) throw_usage("objective must be 'l1' or 'weighted:<csv>'");
  if (text.back() == ',') throw_usage("bad objective weight ''");
  std::vector<double> values;
  std::stringstream ss(text.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw_usage("bad objective weight '" + item + "'");
    }
  }
  if (static_cast<int>(values.size()) != num_parameters) {
    throw_usage("objective has " + std::to_string(values.size()) + " weights but the family has " +
                std::to_string(num_parameters) + " parameters");
  }
  obj.name = text;
  obj.weights = Eigen::Map<VectorXd>(values.data(), num_parameters);
  if ((obj.weights.array() < 0.0).any() || !(obj.weights.array() > 0.0).any()) {
    throw_usage("objective weights must be nonnegative and not all zero");
  }
  return obj;
}

// ---------------------------------------------------------------------------
// Problem and feasibility

WildcardProblem make_wildcard_problem(const ErrorModel& model, const DataSet& data, const WildcardFamily& family,
                                      double alpha) {
  if (data.size() == 0) throw_data("empty dataset");
  if (!(alpha > 0.0 && alpha < 1.0)) throw_usage("alpha must lie in (0, 1)");
  WildcardProblem pb{family, alpha, {}, {}, {}, {}, MatrixXd(data.size(), family.size()), {}, {}, 0.0};
  int total_dof = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const OutcomeCounts& rec = data.records()[i];
    if (!model.covers(rec.circuit)) throw_data("model has no prediction for circuit " + rec.circuit.str());
    pb.circuits.push_back(rec.circuit);
    pb.frequencies.push_back(frequencies(rec, model.outcome_labels()));
    pb.predictions.push_back(model.predict(rec.circuit));
    pb.shots.push_back(static_cast<double>(rec.total()));
    pb.counts.row(static_cast<Eigen::Index>(i)) = family.counts(rec.circuit).transpose();
    total_dof += static_cast<int>(model.outcome_labels().size()) - 1;
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double thr = per_circuit_threshold(static_cast<int>(pb.frequencies[i].size()), data.size(), alpha);
    pb.thresholds.push_back(thr);
    pb.budgets.push_back(min_tvd_budget(pb.frequencies[i], pb.predictions[i], pb.shots[i], thr));
  }
  pb.aggregate_threshold = aggregate_threshold(total_dof, alpha);
  return pb;
}

namespace {

double radius_of(const WildcardProblem& pb, std::size_t i, const VectorXd& w) {
  return std::clamp(pb.counts.row(static_cast<Eigen::Index>(i)).dot(w), 0.0, 1.0);
}

}  // namespace

FeasibilityReport evaluate_wildcard(const WildcardProblem& pb, const VectorXd& w) {
  FeasibilityReport r;
  r.per_circuit_ok = true;
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    const double radius = radius_of(pb, i, w);
    const double ls = min_llr_in_ball(pb.frequencies[i], pb.predictions[i], radius, pb.shots[i]);
    r.radii.push_back(radius);
    r.lambda_star.push_back(ls);
    r.aggregate += ls;
    if (!(ls <= pb.thresholds[i])) r.per_circuit_ok = false;
  }
  r.aggregate_ok = r.aggregate <= pb.aggregate_threshold;
  r.feasible = r.per_circuit_ok && r.aggregate_ok;
  return r;
}

bool feasible(const WildcardProblem& pb, const VectorXd& w) {
  if ((w.array() < 0.0).any()) return false;
  return evaluate_wildcard(pb, w).feasible;
}

double aggregate_lambda(const WildcardProblem& pb, const VectorXd& w, VectorXd* gradient) {
  double total = 0.0;
  if (gradient) *gradient = VectorXd::Zero(w.size());
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    const double raw = pb.counts.row(static_cast<Eigen::Index>(i)).dot(w);
    const double radius = std::clamp(raw, 0.0, 1.0);
    BallSolution s = solve_llr_ball(pb.frequencies[i], pb.predictions[i], radius, pb.shots[i]);
    total += s.lambda;
    if (gradient && raw < 1.0 && std::isfinite(s.dlambda_dt)) {
      *gradient += s.dlambda_dt * pb.counts.row(static_cast<Eigen::Index>(i)).transpose();
    }
  }
  return total;
}

ConsistencyReport wildcard_consistency(const WildcardProblem& pb, const VectorXd& w) {
  std::vector<ConsistencyInput> inputs;
  inputs.reserve(pb.circuits.size());
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    inputs.push_back({pb.circuits[i], pb.frequencies[i], pb.predictions[i], pb.shots[i], radius_of(pb, i, w)});
  }
  return consistency_test(inputs, pb.alpha);
}

// ---------------------------------------------------------------------------
// Solver

namespace {

std::string trace_line(int iter, const VectorXd& w, double objective, double aggregate, double target) {
  std::ostringstream os;
  os.precision(10);
  os << "iter " << iter << " objective " << objective << " aggregate " << aggregate << "/" << target << " w [";
  for (Eigen::Index j = 0; j < w.size(); ++j) os << (j ? ", " : "") << w[j];
  os << "]";
  return os.str();
}

// Bisected budgets sit on the threshold to the last bit, where the ball
// solver's rounding can land either side; cover them with a small margin.
constexpr double kBudgetMargin = 1e-10;

double covered_budget(const WildcardProblem& pb, std::size_t i) { return pb.budgets[i] * (1.0 + kBudgetMargin); }

// Smallest s >= 1 with every n(C).(s w) >= t_C (1 + margin).
VectorXd repair_budgets(const WildcardProblem& pb, VectorXd w) {
  double scale = 1.0;
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    if (pb.budgets[i] <= 0.0) continue;
    const double have = pb.counts.row(static_cast<Eigen::Index>(i)).dot(w);
    if (have < covered_budget(pb, i) && have > 0.0) scale = std::max(scale, covered_budget(pb, i) / have);
  }
  if (scale > 1.0) w *= scale * (1.0 + 4 * std::numeric_limits<double>::epsilon());
  return w;
}

// Nearly parallel cuts can leave a component at ~1e-12 of the others. Zero
// such components and rescale the rest radially if that keeps the cost change
// negligible.
VectorXd drop_residual_components(const WildcardProblem& pb, const VectorXd& w) {
  const double big = w.maxCoeff();
  VectorXd v = w;
  bool changed = false;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (v[j] > 0.0 && v[j] < 1e-9 * big) {
      v[j] = 0.0;
      changed = true;
    }
  }
  if (!changed) return w;
  if (feasible(pb, v)) return v;
  constexpr double kMaxStretch = 1e-6;
  if (!feasible(pb, v * (1.0 + kMaxStretch))) return w;
  double lo = 1.0, hi = 1.0 + kMaxStretch;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(pb, v * mid) ? hi : lo) = mid;
  }
  return v * hi;
}

}  // namespace

WildcardSolution solve_min_wildcard(const WildcardProblem& pb, const Objective& objective,
                                    const SolveOptions& options) {
  const int n = pb.family.size();
  if (objective.weights.size() != n) throw_usage("objective/family size mismatch");
  if ((objective.weights.array() < 0.0).any()) throw_usage("objective weights must be nonnegative");

  std::vector<VectorXd> objectives{objective.weights};
  if (options.prefer_zero_spam) objectives.push_back(VectorXd::Unit(n, WildcardFamily::kSpam));
  objectives.push_back(VectorXd::Ones(n));

  std::vector<std::size_t> constrained;
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    if (pb.budgets[i] > 0.0) constrained.push_back(i);
  }
  MatrixXd rows(static_cast<Eigen::Index>(constrained.size()) + n, n);
  VectorXd rhs(rows.rows());
  for (std::size_t k = 0; k < constrained.size(); ++k) {
    rows.row(static_cast<Eigen::Index>(k)) = pb.counts.row(static_cast<Eigen::Index>(constrained[k]));
    rhs[static_cast<Eigen::Index>(k)] = covered_budget(pb, constrained[k]);
  }
  for (int j = 0; j < n; ++j) {
    rows.row(static_cast<Eigen::Index>(constrained.size()) + j) = -VectorXd::Unit(n, j).transpose();
    rhs[static_cast<Eigen::Index>(constrained.size()) + j] = -1.0;
  }

  WildcardSolution sol;
  const double target = pb.aggregate_threshold;
  bool done = false;
  for (int iter = 0; iter <= options.max_cuts; ++iter) {
    LpResult lp = solve_covering_lp_lex(rows, rhs, objectives);
    VectorXd w = lp.w;
    const double floor = 1e-12 * w.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (w[j] < std::max(floor, 1e-15)) w[j] = 0.0;
    }
    w = repair_budgets(pb, w);
    VectorXd grad;
    const double agg = aggregate_lambda(pb, w, &grad);
    sol.trace.push_back(trace_line(iter, w, objective.weights.dot(w), agg, target));
    // A cut that no longer moves the LP optimum means the cuts are exhausted
    // at this precision; finish radially as for a near-feasible iterate.
    const bool stalled = iter > 0 && (w - sol.w).cwiseAbs().maxCoeff() <= 1e-14 * w.cwiseAbs().maxCoeff();
    sol.w = w;
    sol.cuts = iter;
    if (agg <= target) {
      done = true;
      break;
    }
    sol.aggregate_active = true;
    if (agg <= target * (1.0 + options.aggregate_rel_tol) || stalled) {
      // Radial step onto the feasible side; A(s w) is nonincreasing in s.
      double lo = 1.0, hi = 1.0 + 1e-6;
      while (aggregate_lambda(pb, w * hi, nullptr) > target) {
        lo = hi;
        hi = 1.0 + 2.0 * (hi - 1.0);
        if (hi > 2.0) break;
      }
      for (int k = 0; k < 100; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (aggregate_lambda(pb, w * mid, nullptr) <= target ? hi : lo) = mid;
      }
      sol.w = w * hi;
      done = true;
      break;
    }
    // Kelley cut: A(w) + grad.(x - w) <= target.
    rows.conservativeResize(rows.rows() + 1, Eigen::NoChange);
    rows.row(rows.rows() - 1) = -grad.transpose();
    rhs.conservativeResize(rhs.size() + 1);
    rhs[rhs.size() - 1] = agg - target - grad.dot(w);
  }
  if (!done) {
    std::string msg = "wildcard cutting-plane loop did not converge after " + std::to_string(options.max_cuts) +
                      " cuts; last iterates:";
    const std::size_t from = sol.trace.size() > 5 ? sol.trace.size() - 5 : 0;
    for (std::size_t k = from; k < sol.trace.size(); ++k) msg += "\n  " + sol.trace[k];
    throw_solver(msg);
  }
  sol.w = drop_residual_components(pb, sol.w);

  sol.feasibility = evaluate_wildcard(pb, sol.w);
  if (!sol.feasibility.feasible) {
    throw_solver("wildcard solution failed its own feasibility check: " + sol.trace.back());
  }
  sol.objective = objective.weights.dot(sol.w);
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    if (pb.budgets[i] <= 0.0) continue;
    const double have = pb.counts.row(static_cast<Eigen::Index>(i)).dot(sol.w);
    if (have <= pb.budgets[i] * (1.0 + 1e-9) + 1e-15) sol.active_circuits.push_back(i);
  }
  return sol;
}

MinimalityCertificate certify_minimal(const WildcardProblem& pb, const VectorXd& w, double delta) {
  MinimalityCertificate cert;
  cert.feasible = feasible(pb, w);
  cert.component_tight.assign(static_cast<std::size_t>(w.size()), true);
  if (!cert.feasible) return cert;
  cert.minimal = true;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (w[j] <= 0.0) continue;
    VectorXd shrunk = w;
    shrunk[j] *= (1.0 - delta);
    if (feasible(pb, shrunk)) {
      cert.component_tight[static_cast<std::size_t>(j)] = false;
      cert.minimal = false;
    }
  }
  return cert;
}

Frontier2d frontier_2d(const WildcardProblem& pb, int num_angles, int grid_size) {
  if (pb.family.size() != 2) throw_usage("frontier_2d needs a 2-parameter wildcard family");
  if (num_angles < 1 || grid_size < 2) throw_usage("frontier_2d needs at least one angle and a 2x2 grid");
  Frontier2d fr;
  SolveOptions opts;
  opts.prefer_zero_spam = false;
  for (int k = 1; k <= num_angles; ++k) {
    const double a = 0.5 * std::numbers::pi * k / (num_angles + 1);
    fr.weight_angles.push_back(a);
    Objective obj{"angle", Eigen::Vector2d(std::cos(a), std::sin(a))};
    const VectorXd w = solve_min_wildcard(pb, obj, opts).w;
    fr.points.emplace_back(w[0], w[1]);
  }
  std::sort(fr.points.begin(), fr.points.end(), [](const auto& a, const auto& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  std::vector<Eigen::Vector2d> unique;
  for (const auto& p : fr.points) {
    if (!unique.empty() && (p - unique.back()).cwiseAbs().maxCoeff() <= 1e-9 * p.norm()) continue;
    unique.push_back(p);
  }
  fr.points = std::move(unique);

  double max_spam = 0.0, max_gate = 0.0;
  for (const auto& p : fr.points) {
    max_spam = std::max(max_spam, p[0]);
    max_gate = std::max(max_gate, p[1]);
  }
  if (max_spam <= 0.0) max_spam = std::max(max_gate, 1e-3);
  if (max_gate <= 0.0) max_gate = std::max(max_spam, 1e-3);
  for (int i = 0; i < grid_size; ++i) {
    fr.spam_axis.push_back(1.25 * max_spam * i / (grid_size - 1));
    fr.gate_axis.push_back(1.25 * max_gate * i / (grid_size - 1));
  }
  fr.feasible.assign(grid_size, std::vector<bool>(grid_size, false));
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      fr.feasible[i][j] = feasible(pb, Eigen::Vector2d(fr.spam_axis[i], fr.gate_axis[j]));
    }
  }
  return fr;
}

nlohmann::json wildcard_result_to_json(const WildcardProblem& pb, const WildcardSolution& sol,
                                       const Objective& objective, const MinimalityCertificate& cert) {
  nlohmann::json doc;
  doc["parameters"] = pb.family.parameter_labels();
  doc["w"] = std::vector<double>(sol.w.data(), sol.w.data() + sol.w.size());
  doc["objective"] = {{"name", objective.name},
                      {"weights", std::vector<double>(objective.weights.data(),
                                                      objective.weights.data() + objective.weights.size())},
                      {"value", sol.objective}};
  nlohmann::json active = nlohmann::json::array();
  for (std::size_t i : sol.active_circuits) active.push_back(pb.circuits[i].str());
  if (sol.aggregate_active) active.push_back("aggregate");
  doc["active_constraints"] = std::move(active);
  doc["certified_minimal"] = cert.minimal;
  doc["cuts"] = sol.cuts;
  doc["alpha"] = pb.alpha;
  doc["aggregate"] = {{"lambda_star", sol.feasibility.aggregate}, {"threshold", pb.aggregate_threshold}};
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    rows.push_back({{"circuit", pb.circuits[i].str()},
                    {"t_C", pb.budgets[i]},
                    {"w_C", sol.feasibility.radii[i]},
                    {"lambda_star", sol.feasibility.lambda_star[i]},
                    {"threshold", pb.thresholds[i]}});
  }
  doc["circuits"] = std::move(rows);
  return doc;
}

}  // namespace wildcard
