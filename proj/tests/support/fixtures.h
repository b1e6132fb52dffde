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

// Problem builders shared by the unit and acceptance tests.

#ifndef WILDCARD_TESTS_FIXTURES_H_
#define WILDCARD_TESTS_FIXTURES_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "oracles/oracles.h"
#include "wildcard/clifford.h"
#include "wildcard/dataset.h"
#include "wildcard/noise_models.h"
#include "wildcard/random.h"
#include "wildcard/wildcard_opt.h"

namespace fixture {

// Binomial draw with the test's own stream.
inline std::int64_t binomial(wildcard::Rng& rng, std::int64_t n, double p) {
  std::int64_t k = 0;
  for (std::int64_t s = 0; s < n; ++s) k += wildcard::uniform_unit(rng) < p;
  return k;
}

// RB-style binary problem: circuits of the given RB depths, survival predicted
// by the curve 1/2 + 1/2 eta_model^m; data drawn from `true_p0(m)`.
struct RbProblem {
  wildcard::ErrorModel model;
  wildcard::DataSet data;
};

inline RbProblem make_rb_problem(const std::vector<int>& depths, int per_depth, std::int64_t shots, double eta_model,
                                 const std::function<double(int)>& true_p0, std::uint64_t seed) {
  using namespace wildcard;
  RbProblem out{ErrorModel::with_rb_curve(CliffordGroup::instance().gateset(), {0.5, 0.5, eta_model}), {}};
  Rng rng(seed);
  // Repeated draws of one circuit (common at small depth) are merged.
  std::vector<OutcomeCounts> records;
  std::map<Circuit, std::size_t> index;
  std::uint64_t k = 0;
  for (int d : depths) {
    for (int i = 0; i < per_depth; ++i) {
      const Circuit c = sample_rb_circuit(d, derive_seed(seed, k++));
      const std::int64_t zeros = binomial(rng, shots, true_p0(d));
      auto [it, fresh] = index.emplace(c, records.size());
      if (fresh) {
        records.push_back(OutcomeCounts{c, {"0", "1"}, {zeros, shots - zeros}});
      } else {
        records[it->second].counts[0] += zeros;
        records[it->second].counts[1] += shots - zeros;
      }
    }
  }
  for (auto& r : records) out.data.add(std::move(r));
  return out;
}

// (w_SPAM, w_gate) with the gate count taken as the RB depth.
inline wildcard::WildcardProblem rb_problem(const wildcard::ErrorModel& model, const wildcard::DataSet& data,
                                            double alpha = 0.05) {
  return wildcard::make_wildcard_problem(model, data, wildcard::WildcardFamily::rb_depth(model.gateset().labels()),
                                         alpha);
}

// The same problem seen only through plain numbers, for the oracle.
inline oracle::BinaryProblem to_oracle(const wildcard::WildcardProblem& pb) {
  oracle::BinaryProblem out;
  out.alpha = pb.alpha;
  for (std::size_t i = 0; i < pb.circuits.size(); ++i) {
    out.f0.push_back(pb.frequencies[i][0]);
    out.p0.push_back(pb.predictions[i][0]);
    out.shots.push_back(pb.shots[i]);
    out.depth.push_back(static_cast<double>(wildcard::rb_depth(pb.circuits[i])));
  }
  return out;
}

}  // namespace fixture

#endif  // WILDCARD_TESTS_FIXTURES_H_
