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

#ifndef WILDCARD_LP_H_
#define WILDCARD_LP_H_

#include <vector>

#include <Eigen/Dense>

namespace wildcard {

struct LpResult {
  Eigen::VectorXd w;
  double objective = 0.0;
  int pivots = 0;
};

// min cost.w  s.t.  G w >= h,  w >= 0, with cost >= 0.
//
// Solved through its dual  max h.y  s.t.  G^T y <= cost,  y >= 0  by a dense
// tableau simplex with Bland's rule. The tableau has one row per primal
// variable, so thousands of primal constraints over a handful of variables
// stay cheap. Rows of G are rescaled to unit max-norm first. Throws
// Error(kSolver) if the primal is infeasible or the pivot limit is hit.
LpResult solve_covering_lp(const Eigen::MatrixXd& g, const Eigen::VectorXd& h, const Eigen::VectorXd& cost);

// Lexicographic: optimize objectives[0]; then, holding each earlier objective
// within `rel_tol` of its optimum, optimize the next.
LpResult solve_covering_lp_lex(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                               const std::vector<Eigen::VectorXd>& objectives, double rel_tol = 1e-10);

}  // namespace wildcard

#endif  // WILDCARD_LP_H_
