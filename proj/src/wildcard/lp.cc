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

#include "wildcard/lp.h"

#include <cmath>
#include <limits>

#include "wildcard/error.h"

namespace wildcard {

using Eigen::MatrixXd;
using Eigen::VectorXd;

LpResult solve_covering_lp(const MatrixXd& g_in, const VectorXd& h_in, const VectorXd& cost) {
  const Eigen::Index n = cost.size();
  if (g_in.cols() != n || g_in.rows() != h_in.size()) throw_usage("LP dimension mismatch");
  if ((cost.array() < 0.0).any()) throw_usage("LP cost must be nonnegative");

  // Normalize rows; drop rows that cannot bind (all-zero with h <= 0).
  std::vector<Eigen::Index> keep;
  MatrixXd g(g_in.rows(), n);
  VectorXd h(h_in.size());
  Eigen::Index m = 0;
  for (Eigen::Index r = 0; r < g_in.rows(); ++r) {
    const double scale = g_in.row(r).cwiseAbs().maxCoeff();
    if (scale == 0.0) {
      if (h_in[r] > 0.0) throw_solver("LP infeasible: empty constraint with positive bound");
      continue;
    }
    g.row(m) = g_in.row(r) / scale;
    h[m] = h_in[r] / scale;
    ++m;
  }

  LpResult result;
  result.w = VectorXd::Zero(n);
  if (m == 0) return result;

  // Dual tableau: rows = primal variables, columns = [y (m) | slack (n) | rhs].
  const Eigen::Index cols = m + n;
  MatrixXd t = MatrixXd::Zero(n, cols + 1);
  t.leftCols(m) = g.topRows(m).transpose();
  t.block(0, m, n, n).setIdentity();
  t.col(cols) = cost;
  VectorXd z = VectorXd::Zero(cols + 1);
  z.head(m) = -h.head(m);
  std::vector<Eigen::Index> basis(n);
  for (Eigen::Index i = 0; i < n; ++i) basis[i] = m + i;

  const double hscale = std::max(1e-300, h.head(m).cwiseAbs().maxCoeff());
  const double cost_eps = 1e-13 * hscale;
  const double piv_eps = 1e-12;
  const int max_pivots = 200000;

  while (true) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (z[j] < -cost_eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (t(i, enter) <= piv_eps) continue;
      const double ratio = t(i, cols) / t(i, enter);
      if (ratio < best - 1e-15 || (ratio <= best + 1e-15 && leave >= 0 && basis[i] < basis[leave])) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave < 0) throw_solver("LP infeasible: covering constraints cannot be met");
    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    z -= z[enter] * t.row(leave).transpose();
    basis[leave] = enter;
    if (++result.pivots > max_pivots) throw_solver("LP pivot limit reached");
  }

  for (Eigen::Index i = 0; i < n; ++i) result.w[i] = std::max(0.0, z[m + i]);
  result.objective = cost.dot(result.w);
  return result;
}

LpResult solve_covering_lp_lex(const MatrixXd& g, const VectorXd& h, const std::vector<VectorXd>& objectives,
                               double rel_tol) {
  if (objectives.empty()) throw_usage("no LP objective");
  MatrixXd rows = g;
  VectorXd rhs = h;
  LpResult res;
  int pivots = 0;
  for (std::size_t k = 0; k < objectives.size(); ++k) {
    res = solve_covering_lp(rows, rhs, objectives[k]);
    pivots += res.pivots;
    if (k + 1 == objectives.size()) break;
    // -c.w >= -(opt + tol)
    const double bound = res.objective + rel_tol * std::abs(res.objective) + 1e-300;
    rows.conservativeResize(rows.rows() + 1, Eigen::NoChange);
    rows.row(rows.rows() - 1) = -objectives[k].transpose();
    rhs.conservativeResize(rhs.size() + 1);
    rhs[rhs.size() - 1] = -bound;
  }
  res.pivots = pivots;
  res.objective = objectives.front().dot(res.w);
  return res;
}

}  // namespace wildcard
