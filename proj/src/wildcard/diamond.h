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

#ifndef WILDCARD_DIAMOND_H_
#define WILDCARD_DIAMOND_H_

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "wildcard/quantum_core.h"

namespace wildcard {

// Probabilities (p_I, p_X, p_Y, p_Z) of a Pauli channel.
using PauliProbs = std::array<double, 4>;

// Half the diamond-norm distance between two Pauli channels, which equals the
// TVD of their Pauli probability vectors. Throws Error(kUsage) off the simplex.
double pauli_diamond(const PauliProbs& a, const PauliProbs& b);

// Pauli probabilities of a qubit PTM diag(1, lx, ly, lz). Throws
// Error(kUsage) if the PTM is not diagonal.
PauliProbs pauli_probs_from_ptm(const SuperOp& op);

// (rows (a, i), cols (b, j)) with system index a major: Choi matrix
// sum_ab Phi(|a><b|) (x) |a><b| / d laid out as blocks, trace 1 for TP maps.
Eigen::MatrixXcd choi_matrix(const SuperOp& op);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const Eigen::MatrixXcd& hermitian);

struct DiamondResult {
  double value = 0.0;  // best lower bound on (1/2)||E1 - E2||_diamond
  int restarts = 0;
  // Best input on system (x) reference, index a * d + i.
  Eigen::VectorXcd input;
  // Value reached from the maximally entangled input alone.
  double entangled_value = 0.0;
  bool converged = false;
};

// Alternating maximization of (1/2)||(D (x) id)(|psi><psi|)||_1 over pure
// inputs, D = E1 - E2: psi <- top eigenvector of (D^dag (x) id)(S) and
// S <- sign((D (x) id)(psi psi^dag)). Each pass never decreases the value.
// Starts from the maximally entangled state and `restarts` random states.
DiamondResult diamond_numeric(const SuperOp& e1, const SuperOp& e2, int restarts = 32,
                              std::uint64_t seed = 0x5eed);

// F_avg = (d F_pro + 1) / (d + 1), F_pro = tr(U^T E) / d^2 in PTM form.
double avg_gate_fidelity(const SuperOp& e, const SuperOp& ideal);

}  // namespace wildcard

#endif  // WILDCARD_DIAMOND_H_
