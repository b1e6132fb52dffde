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

#include "wildcard/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/chi_squared.hpp>

#include "wildcard/error.h"

namespace wildcard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw_data("distributions have mismatched outcome sets");
}

// sum_k f_k ln(f_k / q_k) with 0 ln 0 = 0.
double kl_divergence(std::span<const double> f, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] <= 0.0) continue;
    if (q[k] <= 0.0) return kInf;
    acc += f[k] * std::log(f[k] / q[k]);
  }
  return std::max(acc, 0.0);
}

// Smallest a with sum_k max(0, a f_k - p_k) = t.
double solve_up_scale(std::span<const double> f, std::span<const double> p, double t) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] > 0.0) idx.push_back(k);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] / f[a] < p[b] / f[b]; });
  double fsum = 0.0, psum = 0.0;
  for (std::size_t k : idx) {
    const double r = p[k] / f[k];
    if (r * fsum - psum >= t) return fsum > 0.0 ? (t + psum) / fsum : r;
    fsum += f[k];
    psum += p[k];
  }
  return (t + psum) / fsum;
}

// Largest b with zero_mass + sum_{f_k>0} max(0, p_k - b f_k) = t, assuming
// zero_mass < t (otherwise b is infinite).
double solve_down_scale(std::span<const double> f, std::span<const double> p, double t, double zero_mass) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] > 0.0) idx.push_back(k);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] / f[a] > p[b] / f[b]; });
  double fsum = 0.0, psum = 0.0;
  for (std::size_t k : idx) {
    const double r = p[k] / f[k];
    if (zero_mass + psum - r * fsum >= t) return fsum > 0.0 ? (zero_mass + psum - t) / fsum : r;
    fsum += f[k];
    psum += p[k];
  }
  return (zero_mass + psum - t) / fsum;
}

}  // namespace

double tvd(std::span<const double> p, std::span<const double> q) {
  check_same_size(p, q);
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) acc += std::abs(p[k] - q[k]);
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

LlrStat llr(std::span<const double> f, std::span<const double> q, double shots) {
  check_same_size(f, q);
  LlrStat s;
  s.dof = static_cast<int>(f.size()) - 1;
  const double kl = kl_divergence(f, q);
  s.infinite = std::isinf(kl);
  s.value = s.infinite ? kInf : 2.0 * shots * kl;
  return s;
}

double chi2_upper_quantile(int dof, double tail_probability) {
  if (dof < 1) throw_usage("chi-squared dof must be >= 1");
  if (!(tail_probability > 0.0 && tail_probability < 1.0)) throw_usage("tail probability must lie in (0, 1)");
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::quantile(boost::math::complement(dist, tail_probability));
}

double chi2_quantile(int dof, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw_usage("confidence must lie in (0, 1)");
  if (dof < 1) throw_usage("chi-squared dof must be >= 1");
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::quantile(dist, confidence);
}

BallSolution min_llr_in_ball_binary(std::span<const double> f, std::span<const double> p, double t,
                                    double shots) {
  check_same_size(f, p);
  if (f.size() != 2) throw_usage("binary solver needs exactly two outcomes");
  BallSolution s;
  t = std::clamp(t, 0.0, 1.0);
  if (t >= std::abs(f[0] - p[0])) {
    s.q.assign(f.begin(), f.end());
    return s;
  }
  const double q0 = std::clamp(f[0], std::max(0.0, p[0] - t), std::min(1.0, p[0] + t));
  s.q = {q0, 1.0 - q0};
  s.lambda = llr(f, s.q, shots).value;
  const double q1 = s.q[1];
  auto ratio = [](double fk, double qk) { return fk > 0.0 ? fk / qk : 0.0; };
  if (f[0] > p[0] + t && q0 < 1.0) {
    s.dlambda_dt = 2.0 * shots * (-ratio(f[0], q0) + ratio(f[1], q1));
  } else if (f[0] < p[0] - t && q0 > 0.0) {
    s.dlambda_dt = 2.0 * shots * (ratio(f[0], q0) - ratio(f[1], q1));
  }
  return s;
}

BallSolution min_llr_in_ball_generic(std::span<const double> f, std::span<const double> p, double t,
                                     double shots) {
  check_same_size(f, p);
  BallSolution s;
  t = std::clamp(t, 0.0, 1.0);
  const double dist = tvd(f, p);
  if (t >= dist) {
    s.q.assign(f.begin(), f.end());
    return s;
  }
  double zero_mass = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f[k] <= 0.0) zero_mass += p[k];
  }
  const double up = solve_up_scale(f, p, t);
  const bool down_unbounded = zero_mass >= t;
  const double down = down_unbounded ? kInf : solve_down_scale(f, p, t, zero_mass);

  s.q.resize(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (t == 0.0) {
      s.q[k] = p[k];
    } else if (f[k] > 0.0) {
      s.q[k] = std::clamp(p[k], up * f[k], down * f[k]);
    } else {
      s.q[k] = down_unbounded ? p[k] * (1.0 - t / zero_mass) : 0.0;
    }
  }
  const double phi = kl_divergence(f, s.q);
  s.lambda = 2.0 * shots * phi;

  // Multipliers of sum(q) = 1 and sum|q - p| <= 2t.
  const double inv_down = down_unbounded ? 0.0 : 1.0 / down;
  const double mu = 0.5 * (1.0 / up + inv_down);
  const double nu = 0.5 * (1.0 / up - inv_down);
  s.dlambda_dt = -4.0 * shots * nu;

  if (std::isfinite(phi) && std::isfinite(mu)) {
    double dual = -mu - 2.0 * nu * t;
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (f[k] > 0.0) {
        const double qk = std::clamp(p[k], up * f[k], down * f[k]);
        dual += f[k] * std::log(f[k] / qk) + mu * qk + nu * std::abs(qk - p[k]);
      } else {
        dual += std::min(mu, nu) * p[k];
      }
    }
    s.gap = 2.0 * shots * (phi - dual);
  }
  return s;
}

BallSolution solve_llr_ball(std::span<const double> f, std::span<const double> p, double t, double shots) {
  if (f.size() == 2) return min_llr_in_ball_binary(f, p, t, shots);
  return min_llr_in_ball_generic(f, p, t, shots);
}

double min_llr_in_ball(std::span<const double> f, std::span<const double> p, double t, double shots) {
  return solve_llr_ball(f, p, t, shots).lambda;
}

double min_tvd_budget(std::span<const double> f, std::span<const double> p, double shots, double threshold) {
  if (!(threshold >= 0.0)) throw_usage("threshold must be >= 0");
  if (llr(f, p, shots).value <= threshold) return 0.0;
  double hi = tvd(f, p);
  if (threshold == 0.0) return hi;
  double lo = 0.0;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (min_llr_in_ball(f, p, mid, shots) <= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double per_circuit_threshold(int num_outcomes, std::size_t num_circuits, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw_usage("alpha must lie in (0, 1)");
  if (num_circuits == 0) throw_usage("no circuits");
  return chi2_upper_quantile(num_outcomes - 1, 0.5 * alpha / static_cast<double>(num_circuits));
}

double aggregate_threshold(int total_dof, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw_usage("alpha must lie in (0, 1)");
  return chi2_upper_quantile(total_dof, 0.5 * alpha);
}

ConsistencyReport consistency_test(std::span<const ConsistencyInput> inputs, double alpha) {
  if (inputs.empty()) throw_data("consistency test needs at least one circuit");
  ConsistencyReport report;
  report.alpha = alpha;
  report.rows.reserve(inputs.size());
  for (const auto& in : inputs) {
    check_same_size(in.f, in.p);
    ConsistencyRow row;
    row.circuit = in.circuit;
    row.shots = in.shots;
    row.radius = std::clamp(in.radius, 0.0, 1.0);
    row.threshold = per_circuit_threshold(static_cast<int>(in.f.size()), inputs.size(), alpha);
    row.llr_point = llr(in.f, in.p, in.shots).value;
    row.budget = min_tvd_budget(in.f, in.p, in.shots, row.threshold);
    row.lambda_star = min_llr_in_ball(in.f, in.p, row.radius, in.shots);
    row.pass = row.lambda_star <= row.threshold;
    report.per_circuit_pass = report.per_circuit_pass && row.pass;
    report.aggregate_lambda += row.lambda_star;
    report.aggregate_dof += static_cast<int>(in.f.size()) - 1;
    report.rows.push_back(std::move(row));
  }
  report.aggregate_threshold = aggregate_threshold(report.aggregate_dof, alpha);
  report.aggregate_pass = report.aggregate_lambda <= report.aggregate_threshold;
  return report;
}

void write_consistency_report(std::ostream& out, const ConsistencyReport& report, const nlohmann::json& header) {
  for (const auto& [key, value] : header.items()) out << "# " << key << "=" << value.dump() << '\n';
  out << "# alpha=" << report.alpha << '\n';
  out << "# aggregate_lambda=" << report.aggregate_lambda << '\n';
  out << "# aggregate_dof=" << report.aggregate_dof << '\n';
  out << "# aggregate_threshold=" << report.aggregate_threshold << '\n';
  out << "# per_circuit_pass=" << (report.per_circuit_pass ? "true" : "false") << '\n';
  out << "# aggregate_pass=" << (report.aggregate_pass ? "true" : "false") << '\n';
  out << "# pass=" << (report.pass() ? "true" : "false") << '\n';
  out << "circuit\tN\tllr\tt_C\tradius\tlambda_star\tthreshold\tverdict\n";
  const auto old = out.precision(12);
  for (const auto& r : report.rows) {
    out << r.circuit.str() << '\t' << r.shots << '\t' << r.llr_point << '\t' << r.budget << '\t' << r.radius
        << '\t' << r.lambda_star << '\t' << r.threshold << '\t' << (r.pass ? "pass" : "fail") << '\n';
  }
  out.precision(old);
}

}  // namespace wildcard
