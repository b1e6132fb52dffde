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

#ifndef WILDCARD_CLIFFORD_H_
#define WILDCARD_CLIFFORD_H_

#include <cstdint>
#include <string>
#include <vector>

#include "wildcard/circuit.h"
#include "wildcard/quantum_core.h"

namespace wildcard {

// The 24-element single-qubit Clifford group (modulo phase), generated by the
// pi/2 rotations about X and Y. Element 0 is the identity; element i carries
// the label "C<i>".
class CliffordGroup {
 public:
  static const CliffordGroup& instance();

  int size() const { return static_cast<int>(ptms_.size()); }
  const SuperOp& ptm(int index) const { return ptms_.at(index); }
  // Element equal to applying `first` then `second`.
  int compose(int first, int second) const { return table_[first][second]; }
  int inverse(int index) const { return inverse_[index]; }

  static std::string label(int index);
  // Throws Error(kData) for labels outside "C0".."C23".
  int index_of(const std::string& label) const;

  // Ideal gate set over all 24 labels.
  GateSet gateset() const;

 private:
  CliffordGroup();
  std::vector<SuperOp> ptms_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
};

// RB depth m: m uniformly random Cliffords followed by the single Clifford
// that inverts them, so the ideal net operation is the identity and
// depth() == m + 1. m = 0 gives "C0".
Circuit sample_rb_circuit(int depth, std::uint64_t seed);

// RB depth of an RB circuit: its Clifford count excluding the final inversion.
// Throws Error(kData) on an empty circuit.
int rb_depth(const Circuit& circuit);

}  // namespace wildcard

#endif  // WILDCARD_CLIFFORD_H_
