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

#ifndef WILDCARD_STATS_H_
#define WILDCARD_STATS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "wildcard/circuit.h"
#include "wildcard/quantum_core.h"

namespace wildcard {

// Half the l1 distance. Throws Error(kData) on length mismatch.
double tvd(std::span<const double> p, std::span<const double> q);

// lambda = 2 N sum_k f_k ln(f_k / q_k), natural log, 0 ln 0 = 0.
// `infinite` is set (and value is +inf) when some f_k > 0 has q_k == 0.
struct LlrStat {
  double value = 0.0;
  int dof = 0;
  bool infinite = false;
};
LlrStat llr(std::span<const double> f, std::span<const double> q, double shots);

// Inverse regularized incomplete gamma: the chi-squared quantile at
// `confidence`, and the same expressed through the upper tail probability
// (preferred when the tail is tiny, e.g. Bonferroni thresholds).
double chi2_quantile(int dof, double confidence);
double chi2_upper_quantile(int dof, double tail_probability);

// min over q with tvd(q, p) <= t of llr(f, q, N).
struct BallSolution {
  double lambda = 0.0;
  std::vector<double> q;
  // d lambda / d t from the envelope multiplier of the TVD constraint.
  double dlambda_dt = 0.0;
  // Primal minus Lagrangian dual value, in lambda units.
  double gap = 0.0;
};

// Two outcomes: q_0 = f_0 clamped to [p_0 - t, p_0 + t].
BallSolution min_llr_in_ball_binary(std::span<const double> f, std::span<const double> p, double t,
                                    double shots);
// Any number of outcomes. The optimum has the form
//   q_k = clamp(p_k, [a f_k, b f_k])
// with a <= 1 <= b fixed by the mass moved up and down each equalling t; both
// scalars come from exact piecewise-linear root finding, and the dual value
// at the implied multipliers certifies the result.
BallSolution min_llr_in_ball_generic(std::span<const double> f, std::span<const double> p, double t,
                                     double shots);
// Dispatches to the binary closed form when there are two outcomes.
BallSolution solve_llr_ball(std::span<const double> f, std::span<const double> p, double t, double shots);
double min_llr_in_ball(std::span<const double> f, std::span<const double> p, double t, double shots);

// Smallest t whose ball passes the LLR test at `threshold`, by bisection to
// floating-point resolution. 0 when llr(f, p) <= threshold; tvd(f, p) when
// threshold == 0.
double min_tvd_budget(std::span<const double> f, std::span<const double> p, double shots, double threshold);

// Bonferroni-corrected per-circuit threshold at familywise confidence 1 - alpha/2.
double per_circuit_threshold(int num_outcomes, std::size_t num_circuits, double alpha);
// Aggregated threshold at confidence 1 - alpha/2.
double aggregate_threshold(int total_dof, double alpha);

struct ConsistencyInput {
  Circuit circuit;
  ProbDist f;
  ProbDist p;
  double shots = 0.0;
  double radius = 0.0;  // TVD radius of the prediction region (0 = point prediction)
};

struct ConsistencyRow {
  Circuit circuit;
  double shots = 0.0;
  double llr_point = 0.0;    // lambda(f, p)
  double budget = 0.0;       // t_C
  double radius = 0.0;
  double lambda_star = 0.0;  // lambda* at `radius`
  double threshold = 0.0;
  bool pass = true;
};

struct ConsistencyReport {
  double alpha = 0.05;
  std::vector<ConsistencyRow> rows;
  double aggregate_lambda = 0.0;
  int aggregate_dof = 0;
  double aggregate_threshold = 0.0;
  bool per_circuit_pass = true;
  bool aggregate_pass = true;
  bool pass() const { return per_circuit_pass && aggregate_pass; }
};

// Regions {R_C} and data are inconsistent if (1) any circuit's LLR test
// rejects its region at Bonferroni familywise confidence 1 - alpha/2, or (2)
// the summed lambda* rejects at confidence 1 - alpha/2.
ConsistencyReport consistency_test(std::span<const ConsistencyInput> inputs, double alpha = 0.05);

// Tab-separated: circuit, N, llr, t_C, radius, lambda_star, threshold, verdict.
// `header` lines are written first as "# key=value" comments.
void write_consistency_report(std::ostream& out, const ConsistencyReport& report,
                              const nlohmann::json& header = nlohmann::json::object());

}  // namespace wildcard

#endif  // WILDCARD_STATS_H_
