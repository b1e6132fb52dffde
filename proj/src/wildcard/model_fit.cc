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

#include "wildcard/model_fit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Geometry>

#include "wildcard/clifford.h"
#include "wildcard/diamond.h"
#include "wildcard/error.h"

namespace wildcard {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// RB decay

namespace {

struct RbData {
  VectorXd d;
  VectorXd y;
  VectorXd w;
};

double rb_value(double a, double b, double eta, double d) { return a + b * std::pow(eta, d); }

// Best (A, B) for fixed eta and the weighted residual sum of squares.
double reduced_rss(const RbData& data, double eta, double* a, double* b) {
  const Eigen::Index n = data.d.size();
  MatrixXd x(n, 2);
  VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sw = std::sqrt(data.w[i]);
    x(i, 0) = sw;
    x(i, 1) = sw * std::pow(eta, data.d[i]);
    rhs[i] = sw * data.y[i];
  }
  const VectorXd ab = x.completeOrthogonalDecomposition().solve(rhs);
  if (a) *a = ab[0];
  if (b) *b = ab[1];
  return (x * ab - rhs).squaredNorm();
}

double full_rss(const RbData& data, double a, double b, double eta) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < data.d.size(); ++i) {
    const double r = data.y[i] - rb_value(a, b, eta, data.d[i]);
    s += data.w[i] * r * r;
  }
  return s;
}

}  // namespace

RbFit fit_rb_decay(const std::vector<int>& depths, const std::vector<double>& survival,
                   const std::vector<double>& weights) {
  if (depths.size() != survival.size()) throw_usage("RB depths and survival lengths differ");
  if (!weights.empty() && weights.size() != depths.size()) throw_usage("RB weights length differs from depths");
  if (std::set<int>(depths.begin(), depths.end()).size() < 3) throw_usage("RB fit needs at least 3 distinct depths");
  RbData data{VectorXd(depths.size()), VectorXd(depths.size()), VectorXd::Ones(depths.size())};
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 0) throw_usage("RB depths must be nonnegative");
    if (!std::isfinite(survival[i])) throw_data("non-finite RB survival value");
    data.d[i] = depths[i];
    data.y[i] = survival[i];
    if (!weights.empty()) {
      if (!(weights[i] >= 0.0)) throw_usage("RB weights must be nonnegative");
      data.w[i] = weights[i];
    }
  }

  // Coarse scan, then golden section around the best grid point.
  const int grid = 2000;
  int best = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double rss = reduced_rss(data, static_cast<double>(k) / grid, nullptr, nullptr);
    if (rss < best_rss) {
      best_rss = rss;
      best = k;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(grid);
  double hi = std::min(grid, best + 1) / static_cast<double>(grid);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = reduced_rss(data, x1, nullptr, nullptr), f2 = reduced_rss(data, x2, nullptr, nullptr);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = reduced_rss(data, x1, nullptr, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = reduced_rss(data, x2, nullptr, nullptr);
    }
  }
  RbFit fit;
  fit.eta = 0.5 * (lo + hi);
  reduced_rss(data, fit.eta, &fit.a, &fit.b);

  // Joint Gauss-Newton polish with Levenberg damping, eta kept in [0, 1].
  double rss = full_rss(data, fit.a, fit.b, fit.eta);
  double mu = 1e-6;
  for (int it = 0; it < 100; ++it) {
    MatrixXd j(data.d.size(), 3);
    VectorXd r(data.d.size());
    for (Eigen::Index i = 0; i < data.d.size(); ++i) {
      const double sw = std::sqrt(data.w[i]);
      const double p = std::pow(fit.eta, data.d[i]);
      const double dp = data.d[i] == 0.0 ? 0.0 : data.d[i] * std::pow(fit.eta, data.d[i] - 1.0);
      j.row(i) << sw, sw * p, sw * fit.b * dp;
      r[i] = sw * (data.y[i] - fit.a - fit.b * p);
    }
    const MatrixXd jtj = j.transpose() * j;
    const VectorXd jtr = j.transpose() * r;
    bool accepted = false;
    double step_norm = 0.0;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      MatrixXd lhs = jtj;
      lhs.diagonal() += mu * (jtj.diagonal().array() + 1e-300).matrix();
      const VectorXd delta = lhs.ldlt().solve(jtr);
      const double eta_new = std::clamp(fit.eta + delta[2], 0.0, 1.0);
      const double rss_new = full_rss(data, fit.a + delta[0], fit.b + delta[1], eta_new);
      if (std::isfinite(rss_new) && rss_new <= rss) {
        step_norm = std::abs(delta[0]) + std::abs(delta[1]) + std::abs(eta_new - fit.eta);
        fit.a += delta[0];
        fit.b += delta[1];
        fit.eta = eta_new;
        rss = rss_new;
        mu = std::max(mu / 10.0, 1e-12);
        accepted = true;
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted || step_norm < 1e-15) {
      fit.converged = true;
      break;
    }
  }
  fit.r = (1.0 - fit.eta) / 2.0;
  for (Eigen::Index i = 0; i < data.d.size(); ++i) {
    fit.residuals.push_back(data.y[i] - rb_value(fit.a, fit.b, fit.eta, data.d[i]));
  }
  fit.converged = fit.converged && std::isfinite(rss);
  return fit;
}

nlohmann::json rb_fit_to_json(const RbFit& fit) {
  return {{"A", fit.a}, {"B", fit.b},           {"eta", fit.eta},
          {"r", fit.r}, {"residuals", fit.residuals}, {"converged", fit.converged}};
}

// ---------------------------------------------------------------------------
// GST-lite maximum likelihood

namespace {

constexpr int kGateParams = 12;

struct GstParameterization {
  std::vector<std::string> labels;
  std::vector<std::string> outcomes;
  int size() const { return kGateParams * static_cast<int>(labels.size()) + 7; }
  int prep_offset() const { return kGateParams * static_cast<int>(labels.size()); }
  int effect_offset() const { return prep_offset() + 3; }

  VectorXd pack(const GateSet& gs) const {
    VectorXd theta(size());
    for (std::size_t g = 0; g < labels.size(); ++g) {
      const MatrixXd& m = gs.gate(labels[g]).matrix();
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) theta[kGateParams * g + 4 * i + j] = m(i + 1, j);
      }
    }
    theta.segment(prep_offset(), 3) = gs.prep.coeffs().tail(3);
    theta.segment(effect_offset(), 4) = gs.povm[0].coeffs();
    return theta;
  }

  std::vector<MatrixXd> gate_matrices(const VectorXd& theta) const {
    std::vector<MatrixXd> out;
    for (std::size_t g = 0; g < labels.size(); ++g) {
      MatrixXd m = MatrixXd::Zero(4, 4);
      m(0, 0) = 1.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) m(i + 1, j) = theta[kGateParams * g + 4 * i + j];
      }
      out.push_back(std::move(m));
    }
    return out;
  }

  VectorXd prep(const VectorXd& theta) const {
    VectorXd rho(4);
    rho << 1.0, theta.segment(prep_offset(), 3);
    return rho;
  }

  GateSet unpack(const VectorXd& theta) const {
    GateSet gs;
    gs.dim = 2;
    const auto ms = gate_matrices(theta);
    for (std::size_t g = 0; g < labels.size(); ++g) gs.gates.emplace(labels[g], SuperOp(2, ms[g]));
    gs.prep = StateVecRep(2, prep(theta));
    gs.outcome_labels = outcomes;
    const VectorXd e0 = theta.segment(effect_offset(), 4);
    gs.povm = {EffectRep(2, e0), EffectRep(2, EffectRep::identity(2).coeffs() - e0)};
    return gs;
  }
};

struct GstCircuit {
  std::vector<int> gates;
  double n0 = 0.0;
  double n1 = 0.0;
};

struct GstEval {
  double loglik = 0.0;
  bool valid = true;
  VectorXd gradient;
  MatrixXd fisher;
};

// p0 and its gradient for one circuit; p1 = 1 - p0.
double circuit_p0(const GstParameterization& par, const std::vector<MatrixXd>& gates, const VectorXd& rho,
                  const VectorXd& e0, const GstCircuit& c, VectorXd* grad) {
  std::vector<VectorXd> states{rho};
  states.reserve(c.gates.size() + 1);
  for (int g : c.gates) states.push_back(gates[g] * states.back());
  const double p0 = e0.dot(states.back());
  if (!grad) return p0;
  grad->setZero(par.size());
  VectorXd u = e0;
  for (std::size_t t = c.gates.size(); t-- > 0;) {
    const int g = c.gates[t];
    for (int i = 0; i < 3; ++i) {
      grad->segment(kGateParams * g + 4 * i, 4) += u[i + 1] * states[t];
    }
    u = gates[g].transpose() * u;
  }
  grad->segment(par.prep_offset(), 3) = u.tail(3);
  grad->segment(par.effect_offset(), 4) = states.back();
  return p0;
}

GstEval evaluate_gst(const GstParameterization& par, const std::vector<GstCircuit>& circuits,
                     const VectorXd& theta, bool derivatives) {
  GstEval ev;
  const auto gates = par.gate_matrices(theta);
  const VectorXd rho = par.prep(theta);
  const VectorXd e0 = theta.segment(par.effect_offset(), 4);
  if (derivatives) {
    ev.gradient = VectorXd::Zero(par.size());
    ev.fisher = MatrixXd::Zero(par.size(), par.size());
  }
  VectorXd grad;
  for (const GstCircuit& c : circuits) {
    const double raw = circuit_p0(par, gates, rho, e0, c, derivatives ? &grad : nullptr);
    // Probabilities outside [0, 1] (beyond rounding) are not a model; neither
    // is p = 0 for an observed outcome.
    if (!(raw >= -1e-9 && raw <= 1.0 + 1e-9)) {
      ev.valid = false;
      ev.loglik = -std::numeric_limits<double>::infinity();
      return ev;
    }
    const double p0 = std::clamp(raw, 0.0, 1.0);
    const double p1 = 1.0 - p0;
    if ((c.n0 > 0 && !(p0 > 0.0)) || (c.n1 > 0 && !(p1 > 0.0))) {
      ev.valid = false;
      ev.loglik = -std::numeric_limits<double>::infinity();
      return ev;
    }
    if (c.n0 > 0) ev.loglik += c.n0 * std::log(p0);
    if (c.n1 > 0) ev.loglik += c.n1 * std::log(p1);
    if (derivatives) {
      const double n = c.n0 + c.n1;
      const double q0 = std::max(p0, 1e-8), q1 = std::max(p1, 1e-8);
      ev.gradient += (c.n0 / q0 - c.n1 / q1) * grad;
      ev.fisher.selfadjointView<Eigen::Lower>().rankUpdate(grad, n * (1.0 / q0 + 1.0 / q1));
    }
  }
  if (derivatives) ev.fisher = ev.fisher.selfadjointView<Eigen::Lower>();
  return ev;
}

double choi_min_eigenvalue(const SuperOp& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi_matrix(op), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

GstFitResult mle_fit_gst(const DataSet& data, const GateSet& init, const GstOptions& options) {
  init.validate();
  if (init.dim != 2 || init.povm.size() != 2) throw_usage("GST-lite fits single-qubit two-outcome gate sets");
  GstParameterization par{init.labels(), init.outcome_labels};
  std::map<std::string, int> index;
  for (std::size_t g = 0; g < par.labels.size(); ++g) index[par.labels[g]] = static_cast<int>(g);

  std::vector<GstCircuit> circuits;
  double lambda_const = 0.0;  // sum N f ln f
  for (const OutcomeCounts& rec : data.records()) {
    GstCircuit c;
    for (const auto& label : rec.circuit.labels()) {
      auto it = index.find(label);
      if (it == index.end()) throw_data("GST data uses gate '" + label + "' absent from the model");
      c.gates.push_back(it->second);
    }
    const auto counts = rec.aligned(par.outcomes);
    c.n0 = static_cast<double>(counts[0]);
    c.n1 = static_cast<double>(counts[1]);
    const double n = c.n0 + c.n1;
    if (n <= 0) throw_data("GST record with zero shots: " + rec.circuit.str());
    for (double k : {c.n0, c.n1}) {
      if (k > 0) lambda_const += k * std::log(k / n);
    }
    circuits.push_back(std::move(c));
  }
  if (circuits.empty()) throw_data("empty GST dataset");

  GstFitResult res;
  VectorXd theta = par.pack(init);
  GstEval ev = evaluate_gst(par, circuits, theta, true);
  if (!ev.valid) throw_data("initial GST model assigns zero probability to observed outcomes");
  res.initial_loglikelihood = ev.loglik;
  res.trace.push_back(ev.loglik);

  double mu = 1e-4;
  for (int it = 0; it < options.max_iterations; ++it) {
    res.iterations = it;
    const double diag_floor = 1e-12 * std::max(1.0, ev.fisher.diagonal().maxCoeff());
    // Predicted gain of the (almost) undamped scoring step.
    MatrixXd base = ev.fisher;
    base.diagonal().array() += diag_floor;
    const VectorXd newton = base.ldlt().solve(ev.gradient);
    const double predicted = 0.5 * ev.gradient.dot(newton);
    const double tol = std::max(1e-7, options.rel_tol * std::abs(ev.loglik));
    // The saturated model bounds the likelihood from above.
    if (!(predicted > tol) || lambda_const - ev.loglik <= tol) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    while (!accepted && mu < 1e12) {
      MatrixXd lhs = ev.fisher;
      lhs.diagonal().array() += mu * (ev.fisher.diagonal().array() + diag_floor) + diag_floor;
      const VectorXd step = lhs.ldlt().solve(ev.gradient);
      const VectorXd trial = theta + step;
      GstEval next = evaluate_gst(par, circuits, trial, false);
      if (next.valid && next.loglik > ev.loglik) {
        theta = trial;
        ev = evaluate_gst(par, circuits, theta, true);
        res.trace.push_back(ev.loglik);
        mu = std::max(mu / 5.0, 1e-10);
        accepted = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) {
      // No ascent step exists at working precision.
      res.converged = predicted < 1e-4;
      break;
    }
  }
  res.gradient_norm = ev.gradient.norm();
  res.loglikelihood = ev.loglik;
  res.gateset = par.unpack(theta);
  res.lambda_total = std::max(0.0, 2.0 * (lambda_const - ev.loglik));
  res.dof = static_cast<double>(circuits.size()) - (par.size() - options.gauge_parameters);
  res.violation_sigma = res.dof > 0 ? (res.lambda_total - res.dof) / std::sqrt(2.0 * res.dof)
                                    : std::numeric_limits<double>::quiet_NaN();
  for (const auto& [label, op] : res.gateset.gates) res.min_choi_eigenvalue[label] = choi_min_eigenvalue(op);
  return res;
}

// ---------------------------------------------------------------------------
// Gauge

namespace {

struct GaugeTerms {
  std::vector<MatrixXd> gates, gate_targets;
  std::vector<VectorXd> vecs, vec_targets;  // prep and effects
};

MatrixXd lift(const Eigen::Matrix3d& r) {
  MatrixXd s = MatrixXd::Identity(4, 4);
  s.block(1, 1, 3, 3) = r;
  return s;
}

double gauge_cost(const GaugeTerms& t, const MatrixXd& s, VectorXd* residual, MatrixXd* jac) {
  std::vector<MatrixXd> gen(3, MatrixXd::Zero(4, 4));
  for (int a = 0; a < 3; ++a) {
    Eigen::Vector3d e = Eigen::Vector3d::Unit(a);
    Eigen::Matrix3d k;
    k << 0, -e[2], e[1], e[2], 0, -e[0], -e[1], e[0], 0;
    gen[a].block(1, 1, 3, 3) = k;
  }
  const Eigen::Index n = 16 * static_cast<Eigen::Index>(t.gates.size()) + 4 * static_cast<Eigen::Index>(t.vecs.size());
  VectorXd r(n);
  MatrixXd j(n, 3);
  Eigen::Index row = 0;
  for (std::size_t g = 0; g < t.gates.size(); ++g) {
    const MatrixXd x = s * t.gates[g] * s.transpose();
    r.segment(row, 16) = (x - t.gate_targets[g]).reshaped();
    for (int a = 0; a < 3; ++a) j.block(row, a, 16, 1) = (gen[a] * x - x * gen[a]).reshaped();
    row += 16;
  }
  for (std::size_t v = 0; v < t.vecs.size(); ++v) {
    const VectorXd x = s * t.vecs[v];
    r.segment(row, 4) = x - t.vec_targets[v];
    for (int a = 0; a < 3; ++a) j.block(row, a, 4, 1) = gen[a] * x;
    row += 4;
  }
  if (residual) *residual = r;
  if (jac) *jac = j;
  return r.squaredNorm();
}

}  // namespace

GateSet gauge_fix(const GateSet& fit, const GateSet& targets) {
  fit.validate();
  targets.validate();
  if (fit.dim != 2 || targets.dim != 2) throw_usage("gauge_fix supports single-qubit gate sets");
  if (fit.labels() != targets.labels() || fit.povm.size() != targets.povm.size()) {
    throw_usage("gauge_fix needs matching gate labels and POVMs");
  }
  GaugeTerms terms;
  for (const auto& label : fit.labels()) {
    terms.gates.push_back(fit.gate(label).matrix());
    terms.gate_targets.push_back(targets.gate(label).matrix());
  }
  terms.vecs.push_back(fit.prep.coeffs());
  terms.vec_targets.push_back(targets.prep.coeffs());
  for (std::size_t k = 0; k < fit.povm.size(); ++k) {
    terms.vecs.push_back(fit.povm[k].coeffs());
    terms.vec_targets.push_back(targets.povm[k].coeffs());
  }

  const CliffordGroup& group = CliffordGroup::instance();
  Eigen::Matrix3d best_r = Eigen::Matrix3d::Identity();
  double best_cost = gauge_cost(terms, lift(best_r), nullptr, nullptr);
  for (int start = 0; start < group.size(); ++start) {
    Eigen::Matrix3d r = group.ptm(start).matrix().block(1, 1, 3, 3);
    double cost = gauge_cost(terms, lift(r), nullptr, nullptr);
    double mu = 1e-6;
    for (int it = 0; it < 200; ++it) {
      VectorXd res;
      MatrixXd jac;
      gauge_cost(terms, lift(r), &res, &jac);
      const Eigen::Matrix3d jtj = jac.transpose() * jac;
      const Eigen::Vector3d jtr = jac.transpose() * res;
      bool accepted = false;
      double step = 0.0;
      for (int tries = 0; tries < 40 && !accepted; ++tries) {
        Eigen::Matrix3d lhs = jtj;
        lhs.diagonal().array() += mu * (jtj.diagonal().array() + 1e-12);
        const Eigen::Vector3d delta = -lhs.ldlt().solve(jtr);
        const double angle = delta.norm();
        Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
        if (angle > 0) rot = Eigen::AngleAxisd(angle, delta / angle).toRotationMatrix();
        const Eigen::Matrix3d trial = rot * r;
        const double c = gauge_cost(terms, lift(trial), nullptr, nullptr);
        if (c <= cost) {
          step = angle;
          r = trial;
          cost = c;
          mu = std::max(mu / 10.0, 1e-15);
          accepted = true;
        } else {
          mu *= 10.0;
        }
      }
      if (!accepted || step < 1e-15) break;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_r = r;
    }
  }
  // Re-orthonormalize before applying.
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(best_r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  best_r = svd.matrixU() * svd.matrixV().transpose();
  const MatrixXd s = lift(best_r);

  GateSet out = fit;
  for (auto& [label, op] : out.gates) op = SuperOp(2, s * op.matrix() * s.transpose());
  out.prep = StateVecRep(2, s * fit.prep.coeffs());
  for (std::size_t k = 0; k < out.povm.size(); ++k) out.povm[k] = EffectRep(2, s * fit.povm[k].coeffs());
  return out;
}

nlohmann::json gst_fit_to_json(const GstFitResult& fit) {
  nlohmann::json choi = nlohmann::json::object();
  for (const auto& [label, v] : fit.min_choi_eigenvalue) choi[label] = v;
  return {{"loglikelihood", fit.loglikelihood},
          {"initial_loglikelihood", fit.initial_loglikelihood},
          {"lambda_total", fit.lambda_total},
          {"dof", fit.dof},
          {"violation_sigma", fit.violation_sigma},
          {"iterations", fit.iterations},
          {"converged", fit.converged},
          {"gradient_norm", fit.gradient_norm},
          {"min_choi_eigenvalue", std::move(choi)}};
}

}  // namespace wildcard
