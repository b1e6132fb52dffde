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

// Independent reference computations used only by the tests. None of these
// share code with the library.
#ifndef WILDCARD_TESTS_ORACLES_H_
#define WILDCARD_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Regularized lower incomplete gamma P(a, x) by its power series.
inline double lower_gamma_series(double a, double x) {
  double term = 1.0 / a, sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by the Legendre continued
// fraction (modified Lentz).
inline double upper_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Upper tail of chi-squared with k dof at x.
inline double chi2_upper_tail(int k, double x) {
  const double a = 0.5 * k, y = 0.5 * x;
  if (y <= 0) return 1.0;
  return y < a + 1.0 ? 1.0 - lower_gamma_series(a, y) : upper_gamma_cf(a, y);
}

// x with upper tail equal to `tail`, by bisection on the monotone tail.
inline double chi2_upper_quantile(int k, double tail) {
  double lo = 0.0, hi = 1.0;
  while (chi2_upper_tail(k, hi) > tail) hi *= 2.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (chi2_upper_tail(k, mid) > tail ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double llr(const std::vector<double>& f, const std::vector<double>& q, double n) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] > 0) {
      if (q[k] <= 0) return std::numeric_limits<double>::infinity();
      s += f[k] * std::log(f[k] / q[k]);
    }
  }
  return std::max(0.0, 2.0 * n * s);
}

// Minimizes a unimodal function on [lo, hi] by golden-section search.
inline double golden_min(const std::function<double(double)>& fn, double lo, double hi, double* arg = nullptr) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi, x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int i = 0; i < 200; ++i) {
    if (f1 <= f2) {
      b = x2, x2 = x1, f2 = f1, x1 = b - r * (b - a), f1 = fn(x1);
    } else {
      a = x1, x1 = x2, f1 = f2, x2 = a + r * (b - a), f2 = fn(x2);
    }
  }
  double best = std::min({fn(lo), fn(hi), f1, f2});
  if (arg) *arg = best == fn(lo) ? lo : best == fn(hi) ? hi : (f1 <= f2 ? x1 : x2);
  return best;
}

// Binary min-LLR over the TVD ball by direct 1-D minimization over q0.
inline double binary_min_llr(double f0, double p0, double t, double n) {
  const double lo = std::max(0.0, p0 - t), hi = std::min(1.0, p0 + t);
  auto fn = [&](double q0) { return llr({f0, 1.0 - f0}, {q0, 1.0 - q0}, n); };
  if (f0 >= lo && f0 <= hi) return 0.0;
  return golden_min(fn, lo, hi);
}

// Three-outcome min-LLR over the TVD ball by a dense barycentric grid plus
// local refinement. Accurate to roughly 1e-6 relative for smooth cases.
inline double ternary_min_llr(const std::vector<double>& f, const std::vector<double>& p, double t, double n) {
  auto in_ball = [&](double a, double b) {
    const double c = 1.0 - a - b;
    if (a < 0 || b < 0 || c < 0) return false;
    return 0.5 * (std::abs(a - p[0]) + std::abs(b - p[1]) + std::abs(c - p[2])) <= t + 1e-15;
  };
  double best = std::numeric_limits<double>::infinity(), ba = p[0], bb = p[1];
  const int grid = 400;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; i + j <= grid; ++j) {
      const double a = static_cast<double>(i) / grid, b = static_cast<double>(j) / grid;
      if (!in_ball(a, b)) continue;
      const double v = llr(f, {a, b, 1.0 - a - b}, n);
      if (v < best) best = v, ba = a, bb = b;
    }
  }
  double step = 1.0 / grid;
  for (int it = 0; it < 200 && step > 1e-13; ++it) {
    bool moved = false;
    for (int da = -1; da <= 1; ++da) {
      for (int db = -1; db <= 1; ++db) {
        const double a = ba + da * step, b = bb + db * step;
        if (!in_ball(a, b)) continue;
        const double v = llr(f, {a, b, 1.0 - a - b}, n);
        if (v < best) best = v, ba = a, bb = b, moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

// Average gate fidelity of a qubit channel against a unitary by quadrature
// over the Bloch sphere. `fid(theta, phi)` returns <psi|U^dag E(psi) U|psi>.
inline double sphere_average(const std::function<double(double, double)>& fid, int n = 200) {
  double sum = 0.0, weight = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = (i + 0.5) * std::numbers::pi / n;
    for (int j = 0; j < 2 * n; ++j) {
      const double ph = (j + 0.5) * std::numbers::pi / n;
      const double w = std::sin(th);
      sum += w * fid(th, ph);
      weight += w;
    }
  }
  return sum / weight;
}

// Population of |2> after k leaky steps of rate l from a block state.
inline double leaked_population(double l, int k) {
  double pop = 0.0;
  for (int i = 0; i < k; ++i) pop += l * (1.0 - pop);
  return pop;
}

// Number of distinct fid_in + germ^k + fid_out strings, computed on plain
// label vectors.
inline std::size_t gst_circuit_count(const std::vector<std::vector<std::string>>& fids,
                                     const std::vector<std::vector<std::string>>& germs, int max_depth) {
  std::set<std::vector<std::string>> seen;
  for (const auto& germ : germs) {
    for (int l = 1; l <= max_depth; l *= 2) {
      const int k = l / static_cast<int>(germ.size());
      if (k < 1) continue;
      for (const auto& a : fids) {
        for (const auto& b : fids) {
          std::vector<std::string> c = a;
          for (int r = 0; r < k; ++r) c.insert(c.end(), germ.begin(), germ.end());
          c.insert(c.end(), b.begin(), b.end());
          seen.insert(c);
        }
      }
    }
  }
  return seen.size();
}

// Binary-outcome wildcard problem with the tied (SPAM, gate) family.
struct BinaryProblem {
  std::vector<double> f0, p0, shots, depth;
  double alpha = 0.05;
};

// Feasibility of (w_spam, w_gate) using only the oracle kernels above.
inline bool binary_feasible(const BinaryProblem& pb, double ws, double wg) {
  const double per = chi2_upper_quantile(1, 0.5 * pb.alpha / pb.f0.size());
  const double agg = chi2_upper_quantile(static_cast<int>(pb.f0.size()), 0.5 * pb.alpha);
  double total = 0.0;
  for (std::size_t i = 0; i < pb.f0.size(); ++i) {
    const double t = std::min(1.0, ws + pb.depth[i] * wg);
    const double lam = binary_min_llr(pb.f0[i], pb.p0[i], t, pb.shots[i]);
    if (lam > per) return false;
    total += lam;
  }
  return total <= agg;
}

// Brute-force minimizer of c.w: w_spam runs over the grid {0, h, 2h, ...};
// in each column the smallest feasible w_gate is found by bisection, relying
// on monotonicity of feasibility in w_gate.
inline std::pair<double, double> binary_grid_minimum(const BinaryProblem& pb, double cs, double cg, double h,
                                                     int max_index) {
  double best = std::numeric_limits<double>::infinity();
  std::pair<double, double> arg{0, 0};
  for (int i = 0; i <= max_index; ++i) {
    const double ws = i * h;
    if (cs * ws > best) break;
    double lo = 0.0, hi = 1.0;
    if (!binary_feasible(pb, ws, hi)) continue;
    if (binary_feasible(pb, ws, 0.0)) {
      hi = 0.0;
    } else {
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (lo + hi);
        (binary_feasible(pb, ws, mid) ? hi : lo) = mid;
      }
    }
    const double val = cs * ws + cg * hi;
    if (val < best) best = val, arg = {ws, hi};
  }
  return arg;
}

}  // namespace oracle

#endif  // WILDCARD_TESTS_ORACLES_H_
