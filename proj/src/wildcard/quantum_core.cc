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

#include "wildcard/quantum_core.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "wildcard/error.h"

namespace wildcard {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using cd = std::complex<double>;

namespace {

int checked_dim(int dim) {
  if (dim != 2 && dim != 3) throw_usage("only qubit (2) and qutrit (3) dimensions are supported");
  return dim;
}

}  // namespace

// ---------------------------------------------------------------------------
// OperatorBasis

OperatorBasis::OperatorBasis(int dim) : dim_(dim) {
  const cd i(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  if (dim == 2) {
    MatrixXcd id = MatrixXcd::Identity(2, 2);
    MatrixXcd x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, -i, i, 0;
    z << 1, 0, 0, -1;
    elements_ = {id * s, x * s, y * s, z * s};
    return;
  }
  // Gell-Mann ordering lambda_1..lambda_8; lambda_{1,2,3} act as X, Y, Z on
  // the {|0>,|1>} block.
  elements_.push_back(MatrixXcd::Identity(3, 3) / std::sqrt(3.0));
  auto sym = [&](int a, int b) {
    MatrixXcd m = MatrixXcd::Zero(3, 3);
    m(a, b) = 1;
    m(b, a) = 1;
    return m;
  };
  auto asym = [&](int a, int b) {
    MatrixXcd m = MatrixXcd::Zero(3, 3);
    m(a, b) = -i;
    m(b, a) = i;
    return m;
  };
  MatrixXcd l3 = MatrixXcd::Zero(3, 3);
  l3(0, 0) = 1;
  l3(1, 1) = -1;
  MatrixXcd l8 = MatrixXcd::Zero(3, 3);
  l8(0, 0) = 1;
  l8(1, 1) = 1;
  l8(2, 2) = -2;
  l8 /= std::sqrt(3.0);
  for (const MatrixXcd& m : {sym(0, 1), asym(0, 1), l3, sym(0, 2), asym(0, 2), sym(1, 2),
                             asym(1, 2), l8}) {
    elements_.push_back(m * s);
  }
}

const OperatorBasis& OperatorBasis::for_dim(int dim) {
  static const OperatorBasis qubit(2);
  static const OperatorBasis qutrit(3);
  return checked_dim(dim) == 2 ? qubit : qutrit;
}

VectorXcd OperatorBasis::coefficients(const MatrixXcd& op) const {
  VectorXcd out(size());
  for (int k = 0; k < size(); ++k) {
    out[k] = elements_[k].transpose().cwiseProduct(op).sum();
  }
  return out;
}

MatrixXcd OperatorBasis::reconstruct(const VectorXcd& coeffs) const {
  MatrixXcd out = MatrixXcd::Zero(dim_, dim_);
  for (int k = 0; k < size(); ++k) out += coeffs[k] * elements_[k];
  return out;
}

// ---------------------------------------------------------------------------
// StateVecRep / EffectRep

StateVecRep::StateVecRep(int dim, VectorXd coeffs) : dim_(checked_dim(dim)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != dim_ * dim_) throw_data("state coefficient vector has wrong length");
}

StateVecRep StateVecRep::from_density(const MatrixXcd& rho) {
  const int dim = checked_dim(static_cast<int>(rho.rows()));
  VectorXd c = OperatorBasis::for_dim(dim).coefficients(rho).real() * std::sqrt(double(dim));
  return StateVecRep(dim, std::move(c));
}

StateVecRep StateVecRep::basis_state(int dim, int level) {
  checked_dim(dim);
  if (level < 0 || level >= dim) throw_usage("basis level out of range");
  MatrixXcd rho = MatrixXcd::Zero(dim, dim);
  rho(level, level) = 1;
  StateVecRep s = from_density(rho);
  s.coeffs_[0] = 1.0;
  return s;
}

MatrixXcd StateVecRep::density() const {
  return OperatorBasis::for_dim(dim_).reconstruct(coeffs_.cast<cd>() / std::sqrt(double(dim_)));
}

bool StateVecRep::is_physical(double tol) const {
  if (std::abs(coeffs_[0] - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(density());
  return es.eigenvalues().minCoeff() >= -tol;
}

EffectRep::EffectRep(int dim, VectorXd coeffs) : dim_(checked_dim(dim)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != dim_ * dim_) throw_data("effect coefficient vector has wrong length");
}

EffectRep EffectRep::from_operator(const MatrixXcd& effect) {
  const int dim = checked_dim(static_cast<int>(effect.rows()));
  VectorXd c = OperatorBasis::for_dim(dim).coefficients(effect).real() / std::sqrt(double(dim));
  return EffectRep(dim, std::move(c));
}

EffectRep EffectRep::identity(int dim) {
  VectorXd c = VectorXd::Zero(checked_dim(dim) * dim);
  c[0] = 1.0;
  return EffectRep(dim, std::move(c));
}

MatrixXcd EffectRep::op() const {
  return OperatorBasis::for_dim(dim_).reconstruct(coeffs_.cast<cd>() * std::sqrt(double(dim_)));
}

// ---------------------------------------------------------------------------
// SuperOp

SuperOp::SuperOp(int dim, MatrixXd matrix) : dim_(checked_dim(dim)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != dim_ * dim_ || matrix_.cols() != dim_ * dim_) {
    throw_data("superoperator matrix has wrong shape");
  }
}

SuperOp SuperOp::identity(int dim) {
  checked_dim(dim);
  return SuperOp(dim, MatrixXd::Identity(dim * dim, dim * dim));
}

SuperOp SuperOp::from_linear_map(int dim, const std::function<MatrixXcd(const MatrixXcd&)>& map) {
  const OperatorBasis& basis = OperatorBasis::for_dim(dim);
  MatrixXd m(basis.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    VectorXcd col = basis.coefficients(map(basis.element(j)));
    m.col(j) = col.real();
  }
  return SuperOp(dim, std::move(m));
}

SuperOp SuperOp::from_unitary(const MatrixXcd& u) {
  const int dim = checked_dim(static_cast<int>(u.rows()));
  return from_linear_map(dim, [&](const MatrixXcd& x) -> MatrixXcd { return u * x * u.adjoint(); });
}

SuperOp SuperOp::from_kraus(std::span<const MatrixXcd> kraus) {
  if (kraus.empty()) throw_usage("empty Kraus list");
  const int dim = checked_dim(static_cast<int>(kraus.front().rows()));
  return from_linear_map(dim, [&](const MatrixXcd& x) -> MatrixXcd {
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for (const auto& k : kraus) out += k * x * k.adjoint();
    return out;
  });
}

MatrixXcd SuperOp::apply(const MatrixXcd& op) const {
  const OperatorBasis& basis = OperatorBasis::for_dim(dim_);
  VectorXcd c = basis.coefficients(op);
  return basis.reconstruct(matrix_.cast<cd>() * c);
}

MatrixXcd SuperOp::apply_adjoint(const MatrixXcd& op) const {
  const OperatorBasis& basis = OperatorBasis::for_dim(dim_);
  VectorXcd c = basis.coefficients(op);
  return basis.reconstruct(matrix_.transpose().cast<cd>() * c);
}

bool SuperOp::is_trace_preserving(double tol) const {
  if (std::abs(matrix_(0, 0) - 1.0) > tol) return false;
  for (Eigen::Index j = 1; j < matrix_.cols(); ++j) {
    if (std::abs(matrix_(0, j)) > tol) return false;
  }
  return true;
}

SuperOp SuperOp::with_exact_trace_row() const {
  MatrixXd m = matrix_;
  m.row(0).setZero();
  m(0, 0) = 1.0;
  return SuperOp(dim_, std::move(m));
}

SuperOp compose(const SuperOp& first, const SuperOp& second) {
  if (first.dim() != second.dim()) throw_usage("compose: dimension mismatch");
  return SuperOp(first.dim(), second.matrix() * first.matrix());
}

// ---------------------------------------------------------------------------
// Channels

SuperOp channel_depolarizing(double q) {
  if (!(q >= 0.0 && q <= 4.0 / 3.0)) throw_usage("depolarizing strength must lie in [0, 4/3]");
  MatrixXd m = MatrixXd::Identity(4, 4) * (1.0 - q);
  m(0, 0) = 1.0;
  return SuperOp(2, std::move(m));
}

SuperOp channel_dephasing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw_usage("dephasing probability must lie in [0, 1]");
  MatrixXd m = MatrixXd::Identity(4, 4);
  m(1, 1) = 1.0 - 2.0 * p;
  m(2, 2) = 1.0 - 2.0 * p;
  return SuperOp(2, std::move(m));
}

SuperOp channel_rotation(Axis axis, double angle) {
  const OperatorBasis& basis = OperatorBasis::for_dim(2);
  const int k = axis == Axis::kX ? 1 : axis == Axis::kY ? 2 : 3;
  MatrixXcd pauli = basis.element(k) * std::sqrt(2.0);
  MatrixXcd u = std::cos(angle / 2) * MatrixXcd::Identity(2, 2) -
                cd(0.0, std::sin(angle / 2)) * pauli;
  return SuperOp::from_unitary(u).with_exact_trace_row();
}

SuperOp embed_leakage(const SuperOp& qubit_gate, double leak_rate) {
  if (qubit_gate.dim() != 2) throw_usage("embed_leakage expects a qubit superoperator");
  if (!(leak_rate >= 0.0 && leak_rate <= 1.0)) throw_usage("leak rate must lie in [0, 1]");
  auto map = [&](const MatrixXcd& rho) -> MatrixXcd {
    MatrixXcd block = qubit_gate.apply(rho.topLeftCorner(2, 2));
    MatrixXcd out = MatrixXcd::Zero(3, 3);
    out.topLeftCorner(2, 2) = (1.0 - leak_rate) * block;
    out(2, 2) = leak_rate * block.trace() + rho(2, 2);
    return out;
  };
  return SuperOp::from_linear_map(3, map).with_exact_trace_row();
}

// ---------------------------------------------------------------------------
// GateSet

const SuperOp& GateSet::gate(const std::string& label) const {
  auto it = gates.find(label);
  if (it == gates.end()) throw_data("unknown gate label '" + label + "'");
  return it->second;
}

std::vector<std::string> GateSet::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, op] : gates) out.push_back(label);
  return out;
}

void GateSet::validate() const {
  if (prep.dim() != dim) throw_data("prep dimension mismatch");
  if (povm.empty() || povm.size() != outcome_labels.size()) throw_data("POVM/outcome label mismatch");
  for (const auto& e : povm) {
    if (e.dim() != dim) throw_data("effect dimension mismatch");
  }
  for (const auto& [label, op] : gates) {
    if (!is_valid_label(label)) throw_data("invalid gate label '" + label + "'");
    if (op.dim() != dim) throw_data("gate '" + label + "' dimension mismatch");
  }
}

GateSet make_gateset(int dim, std::map<std::string, SuperOp> gates) {
  GateSet gs;
  gs.dim = checked_dim(dim);
  gs.gates = std::move(gates);
  gs.prep = StateVecRep::basis_state(dim, 0);
  gs.outcome_labels = {"0", "1"};
  MatrixXcd e0 = MatrixXcd::Zero(dim, dim);
  MatrixXcd e1 = MatrixXcd::Zero(dim, dim);
  e0(0, 0) = 1;
  e1(1, 1) = 1;
  if (dim == 3) e0(2, 2) = 1;
  gs.povm = {EffectRep::from_operator(e0), EffectRep::from_operator(e1)};
  gs.validate();
  return gs;
}

SuperOp ideal_gate(const std::string& label) {
  constexpr double kHalfPi = std::numbers::pi / 2;
  if (label == "Gi") return SuperOp::identity(2);
  if (label == "Gx") return channel_rotation(Axis::kX, kHalfPi);
  if (label == "Gy") return channel_rotation(Axis::kY, kHalfPi);
  if (label == "Gz") return channel_rotation(Axis::kZ, kHalfPi);
  throw_usage("no ideal definition for gate '" + label + "'");
}

GateSet ideal_qubit_gateset(const std::vector<std::string>& labels) {
  std::map<std::string, SuperOp> gates;
  for (const auto& l : labels) gates.emplace(l, ideal_gate(l));
  return make_gateset(2, std::move(gates));
}

CircuitEvaluation evaluate_circuit(const GateSet& gs, const Circuit& circuit, bool check_states) {
  CircuitEvaluation out;
  VectorXd state = gs.prep.coeffs();
  for (const auto& label : circuit.labels()) {
    state = gs.gate(label).matrix() * state;
    if (check_states && !StateVecRep(gs.dim, state).is_physical(1e-9)) {
      out.physicality_warning = true;
    }
  }
  ProbDist p(gs.povm.size());
  double total = 0.0;
  out.most_negative = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double raw = gs.povm[k].coeffs().dot(state);
    out.most_negative = std::min(out.most_negative, raw);
    if (raw < -1e-12) out.physicality_warning = true;
    p[k] = std::max(raw, 0.0);
    total += p[k];
  }
  if (!(total > 0.0)) throw_data("circuit " + circuit.str() + " has no positive outcome probability");
  for (double& v : p) v /= total;
  out.probs = std::move(p);
  return out;
}

ProbDist circuit_probs(const GateSet& gs, const Circuit& circuit) {
  return evaluate_circuit(gs, circuit).probs;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

nlohmann::json vec_to_json(const VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

VectorXd vec_from_json(const nlohmann::json& j) {
  auto values = j.get<std::vector<double>>();
  return Eigen::Map<VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

nlohmann::json gateset_to_json(const GateSet& gs) {
  nlohmann::json doc;
  doc["basis"] = OperatorBasis::for_dim(gs.dim).name();
  doc["dim"] = gs.dim;
  doc["prep"] = vec_to_json(gs.prep.coeffs());
  nlohmann::json povm = nlohmann::json::array();
  for (std::size_t k = 0; k < gs.povm.size(); ++k) {
    povm.push_back({{"outcome", gs.outcome_labels[k]}, {"coeffs", vec_to_json(gs.povm[k].coeffs())}});
  }
  doc["povm"] = std::move(povm);
  nlohmann::json gates = nlohmann::json::object();
  for (const auto& [label, op] : gs.gates) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < op.matrix().rows(); ++r) rows.push_back(vec_to_json(op.matrix().row(r)));
    gates[label] = std::move(rows);
  }
  doc["gates"] = std::move(gates);
  return doc;
}

GateSet gateset_from_json(const nlohmann::json& doc) {
  try {
    GateSet gs;
    gs.dim = doc.at("dim").get<int>();
    const std::string basis = doc.at("basis").get<std::string>();
    if (basis != OperatorBasis::for_dim(gs.dim).name()) throw_data("basis '" + basis + "' does not match dim");
    gs.prep = StateVecRep(gs.dim, vec_from_json(doc.at("prep")));
    for (const auto& e : doc.at("povm")) {
      gs.outcome_labels.push_back(e.at("outcome").get<std::string>());
      gs.povm.emplace_back(gs.dim, vec_from_json(e.at("coeffs")));
    }
    for (const auto& [label, rows] : doc.at("gates").items()) {
      const int n = gs.dim * gs.dim;
      if (static_cast<int>(rows.size()) != n) throw_data("gate '" + label + "' has wrong row count");
      MatrixXd m(n, n);
      for (int r = 0; r < n; ++r) {
        VectorXd row = vec_from_json(rows[r]);
        if (row.size() != n) throw_data("gate '" + label + "' has wrong column count");
        m.row(r) = row;
      }
      gs.gates.emplace(label, SuperOp(gs.dim, std::move(m)));
    }
    gs.validate();
    return gs;
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("malformed gate set document: ") + e.what());
  }
}

}  // namespace wildcard
