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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "wildcard/dataset.h"
#include "wildcard/error.h"
#include "wildcard/noise_models.h"

namespace wildcard {
namespace {

ErrorModel fixed_model(double p0) {
  // A Y rotation sets P(0) = cos^2(theta/2).
  const double theta = 2 * std::acos(std::sqrt(p0));
  return ErrorModel(ModelKind::kProcessMatrix, make_gateset(2, {{"R", channel_rotation(Axis::kY, theta)}}));
}

TEST(SimulateCounts, DeterministicOutcome) {
  const ErrorModel m = fixed_model(1.0);
  const OutcomeCounts oc = simulate_counts(m, Circuit::parse("R"), 12345, 1);
  EXPECT_EQ(oc.counts, (std::vector<std::int64_t>{12345, 0}));
}

TEST(SimulateCounts, FairCoinAtLargeN) {
  const ErrorModel m = fixed_model(0.5);
  const OutcomeCounts oc = simulate_counts(m, Circuit::parse("R"), 1000000, 2);
  EXPECT_NEAR(frequencies(oc)[0], 0.5, 0.002);
}

TEST(SimulateCounts, SameSeedSameCounts) {
  const ErrorModel m = fixed_model(0.3);
  EXPECT_EQ(simulate_counts(m, Circuit::parse("R"), 1000, 9).counts,
            simulate_counts(m, Circuit::parse("R"), 1000, 9).counts);
}

TEST(SimulateCounts, MeanOverSeeds) {
  const ErrorModel m = fixed_model(0.3);
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 500; ++s) sum += simulate_counts(m, Circuit::parse("R"), 100, s).counts[0];
  const double mean = sum / 500;
  EXPECT_NEAR(mean, 30.0, 4.0 * std::sqrt(100 * 0.3 * 0.7 / 500));
}

TEST(Frequencies, Arithmetic) {
  const OutcomeCounts a{Circuit(), {"0", "1"}, {512, 488}};
  EXPECT_EQ(frequencies(a), (ProbDist{0.512, 0.488}));
  const OutcomeCounts b{Circuit(), {"0", "1"}, {0, 77}};
  EXPECT_EQ(frequencies(b), (ProbDist{0.0, 1.0}));
  const ProbDist f = frequencies(OutcomeCounts{Circuit(), {"0", "1"}, {1, 2}});
  EXPECT_NEAR(f[0] + f[1], 1.0, 1e-15);
  EXPECT_THROW(frequencies(OutcomeCounts{Circuit(), {"0", "1"}, {0, 0}}), Error);
  const OutcomeCounts c{Circuit(), {"1", "0"}, {3, 1}};
  EXPECT_EQ(frequencies(c, {"0", "1"}), (ProbDist{0.25, 0.75}));
}

TEST(DatasetFile, RecordGrammarIsExact) {
  const OutcomeCounts oc{Circuit::parse("Gx;Gy"), {"0", "1"}, {512, 488}};
  EXPECT_EQ(dataset_record_line(oc), R"({"circuit": "Gx;Gy", "counts": {"0": 512, "1": 488}})");
  const OutcomeCounts empty{Circuit(), {"0", "1"}, {3, 0}};
  EXPECT_EQ(dataset_record_line(empty), R"({"circuit": "{}", "counts": {"0": 3, "1": 0}})");
  const OutcomeCounts back = parse_dataset_record(dataset_record_line(oc));
  EXPECT_EQ(back.circuit, oc.circuit);
  EXPECT_EQ(back.counts, oc.counts);
}

TEST(DatasetFile, LoaderRejectsDuplicatesAndGarbage) {
  std::istringstream dup(
      "{\"circuit\": \"Gx\", \"counts\": {\"0\": 1, \"1\": 2}}\n"
      "{\"circuit\": \"Gx\", \"counts\": {\"0\": 3, \"1\": 4}}\n");
  EXPECT_THROW(read_dataset(dup), Error);
  std::istringstream neg("{\"circuit\": \"Gx\", \"counts\": {\"0\": -1, \"1\": 2}}\n");
  EXPECT_THROW(read_dataset(neg), Error);
  std::istringstream junk("not json\n");
  EXPECT_THROW(read_dataset(junk), Error);
  EXPECT_THROW(load_dataset("/nonexistent/path.jsonl"), Error);
}

TEST(DatasetFile, WriteReadRoundTrip) {
  const ErrorModel m = build_rb_dephasing_model(0.05);
  std::vector<std::pair<Circuit, std::int64_t>> spec{
      {Circuit::parse("C3;C5"), 100}, {Circuit::parse("C0"), 50}, {Circuit::parse("C7;C7;C1"), 1000}};
  const DataSet ds = simulate_dataset(m, spec, 11);
  std::ostringstream out;
  write_dataset(out, ds);
  std::istringstream in(out.str());
  const DataSet back = read_dataset(in);
  ASSERT_EQ(back.size(), ds.size());
  std::ostringstream again;
  write_dataset(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(SimulateDataset, IndependentOfCircuitOrder) {
  const ErrorModel m = build_rb_dephasing_model(0.05);
  std::vector<std::pair<Circuit, std::int64_t>> a{{Circuit::parse("C3;C5"), 100}, {Circuit::parse("C1"), 100}};
  std::vector<std::pair<Circuit, std::int64_t>> b{a[1], a[0]};
  const DataSet da = simulate_dataset(m, a, 5), db = simulate_dataset(m, b, 5);
  EXPECT_EQ(da.find(Circuit::parse("C1"))->counts, db.find(Circuit::parse("C1"))->counts);
  EXPECT_EQ(da.find(Circuit::parse("C3;C5"))->counts, db.find(Circuit::parse("C3;C5"))->counts);
}

}  // namespace
}  // namespace wildcard
