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

#ifndef WILDCARD_QUANTUM_CORE_H_
#define WILDCARD_QUANTUM_CORE_H_

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "wildcard/circuit.h"

namespace wildcard {

// Outcome probabilities, ordered like the owning GateSet's outcome labels.
using ProbDist = std::vector<double>;

// Orthonormal Hermitian operator basis {B_i} with B_0 = I/sqrt(d):
// normalized Paulis for d = 2, normalized Gell-Mann matrices for d = 3.
class OperatorBasis {
 public:
  static const OperatorBasis& for_dim(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const Eigen::MatrixXcd& element(int i) const { return elements_[i]; }
  const char* name() const { return dim_ == 2 ? "pauli" : "gellmann"; }

  // tr(B_i X) for each i.
  Eigen::VectorXcd coefficients(const Eigen::MatrixXcd& op) const;
  // sum_i c_i B_i
  Eigen::MatrixXcd reconstruct(const Eigen::VectorXcd& coeffs) const;

 private:
  explicit OperatorBasis(int dim);
  int dim_;
  std::vector<Eigen::MatrixXcd> elements_;
};

// Density operator stored as c_i = sqrt(d) tr(B_i rho), so c_0 = tr(rho) = 1.
class StateVecRep {
 public:
  StateVecRep(int dim, Eigen::VectorXd coeffs);
  static StateVecRep from_density(const Eigen::MatrixXcd& rho);
  static StateVecRep basis_state(int dim, int level);

  int dim() const { return dim_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::MatrixXcd density() const;
  // Unit trace and eigenvalues >= -tol.
  bool is_physical(double tol = 1e-9) const;

 private:
  int dim_;
  Eigen::VectorXd coeffs_;
};

// POVM element stored as e_i = tr(B_i E) / sqrt(d), so that
// <e, c> = tr(E rho) and the identity effect is (1, 0, ..., 0).
class EffectRep {
 public:
  EffectRep(int dim, Eigen::VectorXd coeffs);
  static EffectRep from_operator(const Eigen::MatrixXcd& effect);
  static EffectRep identity(int dim);

  int dim() const { return dim_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::MatrixXcd op() const;

 private:
  int dim_;
  Eigen::VectorXd coeffs_;
};

// Superoperator in the OperatorBasis of its dimension:
// matrix(i, j) = tr(B_i Phi(B_j)). Acts on StateVecRep coefficients by
// left multiplication. Trace preservation <=> first row is (1, 0, ..., 0).
class SuperOp {
 public:
  SuperOp(int dim, Eigen::MatrixXd matrix);

  static SuperOp identity(int dim);
  static SuperOp from_linear_map(
      int dim, const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& map);
  static SuperOp from_unitary(const Eigen::MatrixXcd& u);
  static SuperOp from_kraus(std::span<const Eigen::MatrixXcd> kraus);

  int dim() const { return dim_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // Phi(X) and Phi^dagger(Y), extended complex-linearly.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& op) const;
  Eigen::MatrixXcd apply_adjoint(const Eigen::MatrixXcd& op) const;

  bool is_trace_preserving(double tol = 0.0) const;
  // Overwrites the first row with (1, 0, ..., 0).
  SuperOp with_exact_trace_row() const;

 private:
  int dim_;
  Eigen::MatrixXd matrix_;
};

// Time order: the result applies `first`, then `second`
// (matrix second * first). Throws on dimension mismatch.
SuperOp compose(const SuperOp& first, const SuperOp& second);

// rho -> (1 - q) rho + q I/2, PTM diag(1, 1-q, 1-q, 1-q); 0 <= q <= 4/3.
SuperOp channel_depolarizing(double q);
// rho -> (1 - p) rho + p Z rho Z, PTM diag(1, 1-2p, 1-2p, 1).
SuperOp channel_dephasing(double p);

enum class Axis { kX, kY, kZ };
// Unitary exp(-i angle P / 2) for P the Pauli matrix of `axis`.
SuperOp channel_rotation(Axis axis, double angle);

// Qutrit map: the qubit gate acts on the {|0>,|1>} block, block coherences
// with |2> are discarded, then a fraction `leak_rate` of the block population
// moves irreversibly to |2>.
SuperOp embed_leakage(const SuperOp& qubit_gate, double leak_rate);

struct GateSet {
  int dim = 2;
  std::map<std::string, SuperOp> gates;
  StateVecRep prep = StateVecRep::basis_state(2, 0);
  std::vector<std::string> outcome_labels;
  std::vector<EffectRep> povm;

  const SuperOp& gate(const std::string& label) const;
  bool has_gate(const std::string& label) const { return gates.count(label) != 0; }
  std::vector<std::string> labels() const;
  // Throws Error(kData) on inconsistent dimensions or empty POVM.
  void validate() const;
};

// |0> preparation and Z-basis readout with outcomes "0" and "1". For d = 3
// the leaked level |2> is read out as "0".
GateSet make_gateset(int dim, std::map<std::string, SuperOp> gates);

// Ideal pi/2 rotations Gx, Gy, Gz and the idle Gi, restricted to `labels`.
SuperOp ideal_gate(const std::string& label);
GateSet ideal_qubit_gateset(const std::vector<std::string>& labels);

struct CircuitEvaluation {
  ProbDist probs;
  // Smallest raw probability before clipping.
  double most_negative = 0.0;
  // Raw probability below -1e-12, or a non-PSD intermediate state if checked.
  bool physicality_warning = false;
};

CircuitEvaluation evaluate_circuit(const GateSet& gs, const Circuit& circuit,
                                   bool check_states = false);
ProbDist circuit_probs(const GateSet& gs, const Circuit& circuit);

nlohmann::json gateset_to_json(const GateSet& gs);
GateSet gateset_from_json(const nlohmann::json& doc);

}  // namespace wildcard

#endif  // WILDCARD_QUANTUM_CORE_H_
