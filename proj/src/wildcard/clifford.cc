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

#include "wildcard/clifford.h"

#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "wildcard/error.h"
#include "wildcard/random.h"

namespace wildcard {

namespace {

using Key = std::array<int, 9>;

// Clifford PTMs are signed permutations on the Bloch block.
Key key_of(const SuperOp& op) {
  Key k{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) k[3 * r + c] = static_cast<int>(std::lround(op.matrix()(r + 1, c + 1)));
  }
  return k;
}

SuperOp rounded(const SuperOp& op) {
  Eigen::MatrixXd m = op.matrix().array().round();
  return SuperOp(2, std::move(m));
}

}  // namespace

CliffordGroup::CliffordGroup() {
  const SuperOp gx = rounded(channel_rotation(Axis::kX, std::numbers::pi / 2));
  const SuperOp gy = rounded(channel_rotation(Axis::kY, std::numbers::pi / 2));
  std::map<Key, int> index;
  std::deque<int> frontier;
  ptms_.push_back(SuperOp::identity(2));
  index[key_of(ptms_[0])] = 0;
  frontier.push_back(0);
  while (!frontier.empty()) {
    const int cur = frontier.front();
    frontier.pop_front();
    for (const SuperOp* g : {&gx, &gy}) {
      SuperOp next = wildcard::compose(ptms_[cur], *g);
      auto [it, inserted] = index.emplace(key_of(next), static_cast<int>(ptms_.size()));
      if (inserted) {
        ptms_.push_back(std::move(next));
        frontier.push_back(it->second);
      }
    }
  }
  if (ptms_.size() != 24) throw std::logic_error("Clifford closure did not produce 24 elements");

  table_.assign(24, std::vector<int>(24, -1));
  inverse_.assign(24, -1);
  for (int a = 0; a < 24; ++a) {
    for (int b = 0; b < 24; ++b) {
      table_[a][b] = index.at(key_of(wildcard::compose(ptms_[a], ptms_[b])));
      if (table_[a][b] == 0) inverse_[a] = b;
    }
  }
}

const CliffordGroup& CliffordGroup::instance() {
  static const CliffordGroup group;
  return group;
}

std::string CliffordGroup::label(int index) { return "C" + std::to_string(index); }

int CliffordGroup::index_of(const std::string& label) const {
  if (label.size() < 2 || label[0] != 'C') throw_data("not a Clifford label: '" + label + "'");
  int value = 0;
  for (std::size_t i = 1; i < label.size(); ++i) {
    if (label[i] < '0' || label[i] > '9') throw_data("not a Clifford label: '" + label + "'");
    value = value * 10 + (label[i] - '0');
    if (value >= size()) throw_data("not a Clifford label: '" + label + "'");
  }
  if (label.size() > 2 && label[1] == '0') throw_data("not a Clifford label: '" + label + "'");
  return value;
}

GateSet CliffordGroup::gateset() const {
  std::map<std::string, SuperOp> gates;
  for (int i = 0; i < size(); ++i) gates.emplace(label(i), ptms_[i]);
  return make_gateset(2, std::move(gates));
}

Circuit sample_rb_circuit(int depth, std::uint64_t seed) {
  if (depth < 0) throw_usage("RB depth must be >= 0");
  const CliffordGroup& group = CliffordGroup::instance();
  Rng rng(seed);
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(depth) + 1);
  int net = 0;
  for (int i = 0; i < depth; ++i) {
    const int g = static_cast<int>(uniform_index(rng, group.size()));
    labels.push_back(CliffordGroup::label(g));
    net = group.compose(net, g);
  }
  labels.push_back(CliffordGroup::label(group.inverse(net)));
  return Circuit(std::move(labels));
}

int rb_depth(const Circuit& circuit) {
  if (circuit.depth() == 0) throw_data("an RB circuit ends with its inversion; got the empty circuit");
  return static_cast<int>(circuit.depth()) - 1;
}

}  // namespace wildcard
