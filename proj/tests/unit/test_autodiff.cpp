// Copyright 2026 The radar-anomaly Authors
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

#include "radar_anomaly/autodiff/adam.hpp"
#include "radar_anomaly/autodiff/checkpoint.hpp"
#include "radar_anomaly/autodiff/ops.hpp"
#include "radar_anomaly/errors.hpp"
#include "support/op_cases.hpp"

namespace radar::ad {
namespace {

using testing::TensorD;

TEST(Gradients, EveryOpMatchesFiniteDifferences) {
  for (const auto& c : testing::op_gradient_cases()) {
    EXPECT_LE(c.error(), 1e-6) << c.name;
  }
}

TEST(Matmul, SmallProduct) {
  const TensorD a = TensorD::constant({2, 3}, {1, 2, 3, 4, 5, 6});
  const TensorD b = TensorD::constant({3, 2}, {7, 8, 9, 10, 11, 12});
  const TensorD c = matmul(a, b);
  EXPECT_EQ(c.shape(), (Shape{2, 2}));
  EXPECT_EQ(std::vector<double>(c.data().begin(), c.data().end()),
            (std::vector<double>{58, 64, 139, 154}));
}

TEST(Matmul, ShapeMismatchThrows) {
  const TensorD a = TensorD::zeros({2, 3});
  EXPECT_THROW(matmul(a, a), ShapeError);
}

TEST(Gather, RepeatsRowsAndAccumulatesGradients) {
  TensorD x = TensorD::parameter({3, 2}, {1, 2, 3, 4, 5, 6});
  const std::vector<std::size_t> idx{2, 2, 0};
  const TensorD g = gather(x, idx, {3});
  EXPECT_EQ(g.shape(), (Shape{3, 2}));
  EXPECT_EQ(g.data()[0], 5.0);
  testing::project(g).backward();
  EXPECT_EQ(x.grad()[2], 0.0);  // row 1 is never gathered
  EXPECT_EQ(x.grad()[3], 0.0);
}

TEST(MaxReduce, DropsTheAxis) {
  const TensorD x = TensorD::constant({2, 3}, {1, 5, 2, 7, 0, 3});
  const TensorD m = max_reduce(x, 1);
  EXPECT_EQ(m.shape(), (Shape{2}));
  EXPECT_EQ(m.data()[0], 5.0);
  EXPECT_EQ(m.data()[1], 7.0);
}

TEST(CrossEntropy, AnomalousWeightScalesSinglePointLoss) {
  const TensorD z = TensorD::constant({1, 2}, {0.3, -0.4});
  const std::vector<int> label{1};
  const std::vector<double> plain{1.0, 1.0};
  const std::vector<double> weighted{1.0, 9.0};
  const double u = weighted_softmax_cross_entropy(z, label, plain).item();
  const double w = weighted_softmax_cross_entropy(z, label, weighted).item();
  EXPECT_NEAR(u, std::log(1.0 + std::exp(0.7)), 1e-15);
  EXPECT_DOUBLE_EQ(w, 9.0 * u);
}

TEST(CrossEntropy, RejectsBadLabels) {
  const TensorD z = TensorD::constant({1, 2}, {0.0, 0.0});
  const std::vector<int> label{2};
  const std::vector<double> weights{1.0, 9.0};
  EXPECT_THROW(weighted_softmax_cross_entropy(z, label, weights), Error);
}

TEST(NoGrad, GuardSuppressesGraph) {
  TensorD x = TensorD::parameter({1, 1}, {2.0});
  {
    NoGradGuard guard;
    EXPECT_FALSE(grad_enabled());
    EXPECT_FALSE(relu(x).requires_grad());
  }
  EXPECT_TRUE(grad_enabled());
  EXPECT_TRUE(relu(x).requires_grad());
}

TEST(StepDecay, HalvesEveryTenEpochs) {
  EXPECT_EQ(step_decay_lr(0), 2e-4);
  EXPECT_EQ(step_decay_lr(9), 2e-4);
  EXPECT_EQ(step_decay_lr(10), 1e-4);
  EXPECT_EQ(step_decay_lr(100), 2e-4 / 1024.0);
}

TEST(Adam, FirstStepMovesBySignedLearningRate) {
  TensorD p = TensorD::parameter({3}, {1.0, -2.0, 0.5});
  std::vector<TensorD> params{p};
  const std::vector<std::vector<double>> grads{{0.5, -3.0, 0.0}};
  AdamState<double> state;
  adam_step<double>(params, grads, state, 0.1);
  EXPECT_NEAR(p.data()[0], 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(p.data()[1], -2.0 + 0.1 * 3.0 / (3.0 + 1e-8), 1e-15);
  EXPECT_EQ(p.data()[2], 0.5);
  EXPECT_EQ(state.step, 1);
}

TEST(Adam, SecondStepUsesBiasCorrectedMoments) {
  TensorD p = TensorD::parameter({1}, {0.0});
  std::vector<TensorD> params{p};
  AdamState<double> state;
  const std::vector<std::vector<double>> g1{{1.0}};
  const std::vector<std::vector<double>> g2{{-2.0}};
  adam_step<double>(params, g1, state, 0.01);
  adam_step<double>(params, g2, state, 0.01);
  const double m = (0.9 * 0.1 * 1.0 + 0.1 * -2.0) / (1 - 0.81);
  const double v = (0.999 * 0.001 * 1.0 + 0.001 * 4.0) / (1 - 0.999 * 0.999);
  const double first = -0.01 / (1.0 + 1e-8);
  EXPECT_NEAR(p.data()[0], first - 0.01 * m / (std::sqrt(v) + 1e-8), 1e-14);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  NamedTensors<double> params{{"a.weight", TensorD::parameter({2, 2}, {0.1, -1e-300, 3.5, 7})},
                              {"a.bias", TensorD::parameter({2}, {1.0 / 3.0, -0.0})}};
  std::stringstream buf;
  save_parameters(params, buf);
  NamedTensors<double> loaded{{"a.weight", TensorD::zeros({2, 2})}, {"a.bias", TensorD::zeros({2})}};
  load_parameters(buf, loaded);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto want = params[i].second.data();
    const auto got = loaded[i].second.data();
    ASSERT_TRUE(std::equal(want.begin(), want.end(), got.begin()));
  }
}

TEST(Checkpoint, NameOrShapeMismatchIsRejected) {
  NamedTensors<double> params{{"w", TensorD::parameter({2}, {1, 2})}};
  std::stringstream buf;
  save_parameters(params, buf);
  const std::string text = buf.str();
  NamedTensors<double> renamed{{"v", TensorD::zeros({2})}};
  std::stringstream in1(text);
  EXPECT_THROW(load_parameters(in1, renamed), Error);
  NamedTensors<double> resized{{"w", TensorD::zeros({3})}};
  std::stringstream in2(text);
  EXPECT_THROW(load_parameters(in2, resized), Error);
}

}  // namespace
}  // namespace radar::ad
