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

#ifndef WILDCARD_MODEL_FIT_H_
#define WILDCARD_MODEL_FIT_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "wildcard/dataset.h"
#include "wildcard/quantum_core.h"

namespace wildcard {

struct RbFit {
  double a = 0.0;
  double b = 0.0;
  double eta = 1.0;
  double r = 0.0;  // (1 - eta) / 2
  std::vector<double> residuals;
  bool converged = false;
};

// Weighted least squares of survival ~ A + B eta^d with eta in [0, 1].
// For fixed eta the problem is linear in (A, B); eta is located by a scan plus
// golden-section search on the reduced objective and then polished jointly
// with Gauss-Newton. Throws Error(kUsage) with fewer than 3 distinct depths.
RbFit fit_rb_decay(const std::vector<int>& depths, const std::vector<double>& survival,
                   const std::vector<double>& weights = {});

nlohmann::json rb_fit_to_json(const RbFit& fit);

struct GstOptions {
  int max_iterations = 200;
  double rel_tol = 1e-12;
  int gauge_parameters = 12;  // TP gauge of one qubit
};

struct GstFitResult {
  GateSet gateset;
  double loglikelihood = 0.0;
  double initial_loglikelihood = 0.0;
  // 2 sum_C N sum_k f ln(f/p) at the fit; dof = sum_C (m_C - 1) - free params.
  double lambda_total = 0.0;
  double dof = 0.0;
  double violation_sigma = 0.0;  // (lambda_total - dof) / sqrt(2 dof)
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
  std::vector<double> trace;  // loglikelihood per accepted iterate
  // Most negative Choi eigenvalue per gate (TP-only fits may leave CP).
  std::map<std::string, double> min_choi_eigenvalue;
};

// Maximum likelihood over TP qubit gate sets: per gate the 12 entries below
// the fixed first PTM row, the 3 Bloch components of the prep and the 4
// coefficients of the "0" effect ("1" is its complement). Levenberg-Marquardt
// damped Fisher scoring from `init`; only steps that raise the likelihood are
// accepted. Throws Error(kData) if a data circuit uses an unknown gate.
GstFitResult mle_fit_gst(const DataSet& data, const GateSet& init, const GstOptions& options = {});

// Conjugates every gate by S = diag(1, R), R in SO(3), and maps prep -> S rho,
// effects -> S e, with R minimizing the summed squared Frobenius distance of
// gates, prep and effects to `targets`. Circuit probabilities are unchanged.
GateSet gauge_fix(const GateSet& fit, const GateSet& targets);

nlohmann::json gst_fit_to_json(const GstFitResult& fit);

}  // namespace wildcard

#endif  // WILDCARD_MODEL_FIT_H_
