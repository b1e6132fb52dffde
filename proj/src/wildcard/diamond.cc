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

#include "wildcard/diamond.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wildcard/error.h"
#include "wildcard/random.h"

namespace wildcard {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double pauli_diamond(const PauliProbs& a, const PauliProbs& b) {
  for (const PauliProbs* p : {&a, &b}) {
    double sum = 0.0;
    for (double v : *p) {
      if (!(v >= -1e-12)) throw_usage("Pauli probabilities must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw_usage("Pauli probabilities must sum to 1");
  }
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d += std::abs(a[k] - b[k]);
  return 0.5 * d;
}

PauliProbs pauli_probs_from_ptm(const SuperOp& op) {
  if (op.dim() != 2) throw_usage("Pauli channels are single-qubit");
  const Eigen::MatrixXd& m = op.matrix();
  const Eigen::MatrixXd off = m - Eigen::MatrixXd(m.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() > 1e-12 || std::abs(m(0, 0) - 1.0) > 1e-12) {
    throw_usage("PTM is not a Pauli channel");
  }
  const double x = m(1, 1), y = m(2, 2), z = m(3, 3);
  return {(1 + x + y + z) / 4, (1 + x - y - z) / 4, (1 - x + y - z) / 4, (1 - x - y + z) / 4};
}

MatrixXcd choi_matrix(const SuperOp& op) {
  const int d = op.dim();
  MatrixXcd choi = MatrixXcd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      MatrixXcd unit = MatrixXcd::Zero(d, d);
      unit(a, b) = 1.0;
      const MatrixXcd out = op.apply(unit) / static_cast<double>(d);
      for (int x = 0; x < d; ++x) {
        for (int y = 0; y < d; ++y) choi(x * d + a, y * d + b) = out(x, y);
      }
    }
  }
  return choi;
}

double trace_norm(const MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

namespace {

// (Phi (x) id)(Y) with Phi given by `map`, index a * d + i.
template <typename Map>
MatrixXcd on_system(int d, const MatrixXcd& y, const Map& map) {
  MatrixXcd out(d * d, d * d);
  MatrixXcd block(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) block(a, b) = y(a * d + i, b * d + j);
      }
      const MatrixXcd img = map(block);
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) out(a * d + i, b * d + j) = img(a, b);
      }
    }
  }
  return out;
}

struct SeesawOutcome {
  double value = 0.0;
  VectorXcd psi;
  bool converged = false;
};

SeesawOutcome seesaw(const SuperOp& e1, const SuperOp& e2, VectorXcd psi) {
  const int d = e1.dim();
  auto delta = [&](const MatrixXcd& x) -> MatrixXcd { return e1.apply(x) - e2.apply(x); };
  auto delta_adj = [&](const MatrixXcd& x) -> MatrixXcd { return e1.apply_adjoint(x) - e2.apply_adjoint(x); };
  SeesawOutcome out;
  psi.normalize();
  double value = -1.0;
  for (int it = 0; it < 2000; ++it) {
    MatrixXcd x = on_system(d, psi * psi.adjoint(), delta);
    x = 0.5 * (x + x.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(x);
    const double next = 0.5 * es.eigenvalues().cwiseAbs().sum();
    out.value = std::max(out.value, next);
    if (next <= value + 1e-15) {
      out.converged = true;
      break;
    }
    value = next;
    out.psi = psi;
    Eigen::VectorXd sign = es.eigenvalues().unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    const MatrixXcd s = es.eigenvectors() * sign.asDiagonal() * es.eigenvectors().adjoint();
    MatrixXcd h = on_system(d, s, delta_adj);
    h = 0.5 * (h + h.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> top(h);
    psi = top.eigenvectors().col(d * d - 1);
  }
  out.value = std::clamp(out.value, 0.0, 1.0);
  return out;
}

VectorXcd random_state(Rng& rng, int n) {
  VectorXcd v(n);
  for (int k = 0; k < n; ++k) {
    // Box-Muller on our own uniform draws keeps streams library independent.
    const double u1 = 1.0 - uniform_unit(rng), u2 = uniform_unit(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    v[k] = {r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2)};
  }
  return v.normalized();
}

}  // namespace

DiamondResult diamond_numeric(const SuperOp& e1, const SuperOp& e2, int restarts, std::uint64_t seed) {
  if (e1.dim() != e2.dim()) throw_usage("diamond distance needs channels of equal dimension");
  if (!e1.is_trace_preserving(1e-9) || !e2.is_trace_preserving(1e-9)) {
    throw_usage("diamond distance needs trace-preserving channels");
  }
  if (restarts < 0) throw_usage("restarts must be nonnegative");
  const int d = e1.dim();
  DiamondResult res;
  VectorXcd bell = VectorXcd::Zero(d * d);
  for (int a = 0; a < d; ++a) bell[a * d + a] = 1.0;
  SeesawOutcome best = seesaw(e1, e2, bell);
  res.entangled_value = best.value;
  for (int k = 0; k < restarts; ++k) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    SeesawOutcome o = seesaw(e1, e2, random_state(rng, d * d));
    if (o.value > best.value) best = o;
  }
  res.value = best.value;
  res.input = best.psi;
  res.converged = best.converged;
  res.restarts = restarts;
  return res;
}

double avg_gate_fidelity(const SuperOp& e, const SuperOp& ideal) {
  if (e.dim() != ideal.dim()) throw_usage("fidelity needs channels of equal dimension");
  const double d = e.dim();
  const double f_pro = (ideal.matrix().transpose() * e.matrix()).trace() / (d * d);
  return (d * f_pro + 1.0) / (d + 1.0);
}

}  // namespace wildcard
