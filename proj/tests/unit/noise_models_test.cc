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
#include <thread>

#include <gtest/gtest.h>

#include "wildcard/clifford.h"
#include "wildcard/error.h"
#include "wildcard/noise_models.h"

namespace wildcard {
namespace {

TEST(ErrorModel, TargetFullRotation) {
  const ErrorModel m = target_model(ideal_qubit_gateset({"Gx", "Gy"}));
  const ProbDist p = m.predict(Circuit::parse("Gx;Gx;Gx;Gx"));
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  EXPECT_THROW(m.predict(Circuit::parse("Gz")), Error);
  EXPECT_FALSE(m.covers(Circuit::parse("Gx;Gz")));
}

TEST(ErrorModel, DepolarizingModelFollowsRbCurve) {
  const GateSet cliffords = CliffordGroup::instance().gateset();
  const ErrorModel depolarized = build_depolarizing_model(cliffords, 0.01);
  // Every gate, the inversion included, is depolarized.
  for (int m : {1, 2, 7, 31, 100}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Circuit c = sample_rb_circuit(m, 1000 * m + s);
      EXPECT_NEAR(depolarized.predict(c)[0], 0.5 + 0.5 * std::pow(0.98, m + 1), 1e-12);
    }
  }
  EXPECT_THROW(build_depolarizing_model(cliffords, 0.6), Error);
  EXPECT_THROW(build_depolarizing_model(cliffords, -0.1), Error);
  const ErrorModel exact = build_depolarizing_model(cliffords, 0.0);
  EXPECT_NEAR(exact.predict(sample_rb_circuit(12, 3))[0], 1.0, 1e-12);
}

TEST(ErrorModel, RbCurveModelSpreadsRemainderUniformly) {
  const ErrorModel m = ErrorModel::with_rb_curve(CliffordGroup::instance().gateset(), {0.45, 0.5, 0.97});
  const Circuit c = sample_rb_circuit(9, 1);
  EXPECT_NEAR(m.predict(c)[0], 0.45 + 0.5 * std::pow(0.97, 9), 1e-12);
  // The exponent is the RB depth: the final inversion is not counted.
  EXPECT_NEAR(m.predict(Circuit::parse("C0"))[0], 0.95, 1e-12);
  EXPECT_NEAR(m.predict(Circuit::parse("C3;C3"))[0], 0.45 + 0.5 * 0.97, 1e-12);
}

TEST(ErrorModel, LeakageModelReadsLeakedAsZero) {
  ModelSpec spec;
  spec.gates["Gi"].leakage = 1e-4;
  const ErrorModel m = build_model_from_spec(spec);
  EXPECT_EQ(m.kind(), ModelKind::kLeakage);
  EXPECT_NEAR(m.predict(Circuit(std::vector<std::string>(1000, "Gi")))[0], 1.0, 1e-12);
}

TEST(ErrorModel, JsonRoundTripPreservesPredictions) {
  ModelSpec spec;
  spec.gates["Gx"] = {0.01, 0.02, 0.003, 0.0};
  spec.gates["Gz"] = {0.0, -0.01, 0.0, 2e-4};
  spec.prep_depolarizing = 0.01;
  spec.meas_flip = 0.005;
  const ErrorModel m = build_model_from_spec(spec);
  const ErrorModel back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.kind(), m.kind());
  for (const char* text : {"Gx;Gz;Gz", "{}", "Gz;Gx;Gx;Gz"}) {
    EXPECT_DOUBLE_EQ(back.predict(Circuit::parse(text))[0], m.predict(Circuit::parse(text))[0]);
  }
  const ErrorModel rb = ErrorModel::with_rb_curve(CliffordGroup::instance().gateset(), {0.4, 0.55, 0.99});
  const ErrorModel rb_back = model_from_json(model_to_json(rb));
  ASSERT_TRUE(rb_back.rb_curve().has_value());
  EXPECT_DOUBLE_EQ(rb_back.rb_curve()->eta, 0.99);
}

TEST(ErrorModel, PredictIsSafeUnderConcurrentUse) {
  const ErrorModel m = build_rb_dephasing_model(0.02);
  std::vector<Circuit> circuits;
  for (int k = 0; k < 64; ++k) circuits.push_back(sample_rb_circuit(20 + k, k));
  std::vector<double> serial;
  for (const auto& c : circuits) serial.push_back(m.predict(c)[0]);
  const ErrorModel fresh = build_rb_dephasing_model(0.02);
  std::vector<std::thread> pool;
  std::vector<std::vector<double>> got(4);
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (const auto& c : circuits) got[t].push_back(fresh.predict(c)[0]);
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& g : got) EXPECT_EQ(g, serial);
}

TEST(ModelSpec, RandomDrawsAreReproducible) {
  const std::vector<std::string> labels{"Gx", "Gy"};
  const ModelSpec a = random_error_modelspec(7, labels);
  const ModelSpec b = random_error_modelspec(7, labels);
  EXPECT_EQ(modelspec_to_json(a), modelspec_to_json(b));
  EXPECT_NE(modelspec_to_json(a), modelspec_to_json(random_error_modelspec(8, labels)));
}

TEST(ModelSpec, RandomDrawMeansNearMidpoints) {
  double dep = 0.0, rot = 0.0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const ModelSpec spec = random_error_modelspec(s, {"Gx"}, {0.0, 0.02, 0.01, 0.05});
    dep += spec.gates.at("Gx").depolarizing;
    rot += spec.gates.at("Gx").rotation_error;
  }
  EXPECT_NEAR(dep / 1000, 0.01, 0.05 * 0.01);
  EXPECT_NEAR(rot / 1000, 0.03, 0.05 * 0.03);
}

TEST(ModelSpec, ZeroWidthRangesAreExact) {
  const ModelSpec spec = random_error_modelspec(3, {"Gx", "Gy"}, {0.004, 0.004, -0.01, -0.01});
  for (const auto& [label, g] : spec.gates) {
    EXPECT_EQ(g.depolarizing, 0.004);
    EXPECT_EQ(g.rotation_error, -0.01);
  }
}

TEST(ModelSpec, ValidationAndJson) {
  ModelSpec bad;
  bad.gates["Gx"].depolarizing = 2.0;
  EXPECT_THROW(bad.validate(), Error);
  ModelSpec spec;
  spec.gates["Gi"] = {1e-3, 1e-2, 0.0, 1e-4};
  EXPECT_TRUE(spec.has_leakage());
  EXPECT_EQ(modelspec_to_json(modelspec_from_json(modelspec_to_json(spec))), modelspec_to_json(spec));
}

TEST(NoisyGate, IdleRotationErrorIsAboutZ) {
  const SuperOp g = noisy_gate("Gi", {0.0, 0.1, 0.0, 0.0});
  EXPECT_LT((g.matrix() - channel_rotation(Axis::kZ, 0.1).matrix()).cwiseAbs().maxCoeff(), 1e-12);
  const SuperOp x = noisy_gate("Gx", {0.02, 0.05, 0.0, 0.0});
  const Eigen::MatrixXd expected =
      compose(channel_rotation(Axis::kX, M_PI / 2 + 0.05), channel_depolarizing(0.02)).matrix();
  EXPECT_LT((x.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RbDephasingModel, IdealCircuitsDecay) {
  const ErrorModel m = build_rb_dephasing_model(0.02);
  const double p = m.predict(sample_rb_circuit(50, 4))[0];
  EXPECT_LT(p, 1.0);
  EXPECT_GT(p, 0.5);
}

}  // namespace
}  // namespace wildcard
