// Copyright 2026 The ddaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "ddaug/gradcheck.hpp"
#include "ddaug/ops.hpp"
#include "test_util.hpp"

namespace ddaug {
namespace {

using testing::random_tensor;

TEST(Elementwise, AddAndGrad) {
  Tensor64 a({2}, {1, 2}), b({2}, {3, 4});
  a.set_requires_grad(true);
  const auto y = a + b;
  EXPECT_EQ(y.to_vector(), (std::vector<double>{4, 6}));
  backward(sum(y));
  EXPECT_EQ(std::vector<double>(a.grad().begin(), a.grad().end()), (std::vector<double>{1, 1}));
}

TEST(Elementwise, SquareGrad) {
  Tensor64 x({1}, {3});
  x.set_requires_grad(true);
  const auto y = x * x;
  EXPECT_EQ(y.item(), 9.0);
  backward(sum(y));
  EXPECT_EQ(x.grad()[0], 6.0);
}

TEST(Elementwise, DivisionByZeroPropagates) {
  Tensor64 a({1}, {1}), b({1}, {0});
  b.set_requires_grad(true);
  const auto y = a / b;
  EXPECT_TRUE(std::isinf(y.item()));
  backward(sum(y));
  EXPECT_FALSE(std::isfinite(b.grad()[0]));
}

TEST(Elementwise, BroadcastSumsGradients) {
  auto a = random_tensor<double>({2, 3, 4}, 1);
  Tensor64 b({3, 1}, {1, 2, 3});
  b.set_requires_grad(true);
  const auto y = a * b;
  EXPECT_EQ(y.shape(), (Shape{2, 3, 4}));
  backward(sum(y));
  for (std::size_t r = 0; r < 3; ++r) {
    double want = 0.0;
    for (std::size_t n = 0; n < 2; ++n)
      for (std::size_t k = 0; k < 4; ++k) want += a.at(n, r, k);
    EXPECT_NEAR(b.grad()[r], want, 1e-12);
  }
}

TEST(Elementwise, IncompatibleShapesThrow) {
  EXPECT_THROW(Tensor64({2, 3}) + Tensor64({4}), ShapeError);
}

TEST(Clamp, ValuesAndBoundaryInclusiveGrad) {
  Tensor64 x({4}, {-0.5, 0.5, 1.5, 0.0});
  x.set_requires_grad(true);
  const auto y = clamp(x, 0.0, 1.0);
  EXPECT_EQ(y.to_vector(), (std::vector<double>{0, 0.5, 1, 0}));
  backward(sum(y));
  EXPECT_EQ(std::vector<double>(x.grad().begin(), x.grad().end()), (std::vector<double>{0, 1, 0, 1}));
  EXPECT_THROW(clamp(x, 1.0, 0.0), ArgumentError);
}

TEST(Clamp, MatchesFiniteDifferences) {
  const auto f = [](const Tensor64& x) { return sum(clamp(x, 0.0, 1.0)); };
  EXPECT_LT(grad_check(f, Tensor64({1}, {0.5})), 1e-6);
  EXPECT_LT(grad_check(f, random_tensor<double>({10}, 3, 0.05, 0.95)), 1e-6);
}

TEST(Reduce, MeanAndShapes) {
  Tensor64 x({2, 2}, {1, 3, 5, 7});
  EXPECT_EQ(mean(x).item(), 4.0);
  EXPECT_EQ(mean(Tensor64({2, 3}), {0}).shape(), (Shape{3}));
  EXPECT_EQ(sum(Tensor64({2, 3}), {1}, true).shape(), (Shape{2, 1}));
  EXPECT_THROW(sum(x, {2}), ShapeError);
}

TEST(Reduce, MeanBackwardDistributes) {
  auto x = random_tensor<double>({3, 4}, 2);
  x.set_requires_grad(true);
  backward(mean(x));
  for (double g : x.grad()) EXPECT_DOUBLE_EQ(g, 1.0 / 12.0);
}

TEST(Matmul, IdentityShapeAndGrad) {
  const auto m = random_tensor<double>({3, 3}, 4);
  Tensor64 eye({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(matmul(eye, m).to_vector(), m.to_vector());
  EXPECT_EQ(matmul(Tensor64({2, 3}), Tensor64({3, 4})).shape(), (Shape{2, 4}));
  EXPECT_THROW(matmul(Tensor64({2, 3}), Tensor64({2, 3})), ShapeError);
  const auto b = random_tensor<double>({3, 3}, 5);
  EXPECT_LT(grad_check([&](const Tensor64& a) { return sum(matmul(a, b) * b); }, m), 1e-5);
  const auto batched = random_tensor<double>({4, 3, 3}, 6);
  EXPECT_LT(grad_check([&](const Tensor64& a) { return sum(matmul(a, m) * a); }, batched), 1e-5);
}

TEST(Conv2dFixed, UnitKernelIsIdentity) {
  const auto x = random_tensor<double>({2, 3, 5, 6}, 7);
  StaticKernel<double> k{1, 1, 1, {1.0}};
  EXPECT_EQ(conv2d_fixed(x, k).to_vector(), x.to_vector());
}

TEST(Conv2dFixed, BoxKernelOnConstant) {
  const auto x = Tensor64::full({1, 1, 5, 5}, 0.9);
  StaticKernel<double> k{3, 3, 1, std::vector<double>(9, 1.0 / 9.0)};
  const auto y = conv2d_fixed(x, k);
  EXPECT_NEAR(y.at(0, 0, 2, 2), 0.9, 1e-12);
  EXPECT_NEAR(y.at(0, 0, 0, 0), 0.9 * 4.0 / 9.0, 1e-12);
  EXPECT_NEAR(y.at(0, 0, 0, 2), 0.9 * 6.0 / 9.0, 1e-12);
}

TEST(Conv2dFixed, BackwardAndEvenKernel) {
  StaticKernel<double> k{3, 3, 1, {0.1, 0.2, -0.3, 0.4, 0.5, 0.6, -0.7, 0.8, 0.9}};
  const auto w = random_tensor<double>({2, 2, 4, 5}, 8);
  EXPECT_LT(grad_check([&](const Tensor64& x) { return sum(conv2d_fixed(x, k) * w); },
                       random_tensor<double>({2, 2, 4, 5}, 9)),
            1e-4);
  StaticKernel<double> even{2, 2, 1, {1, 1, 1, 1}};
  EXPECT_THROW(conv2d_fixed(w, even), ArgumentError);
}

TEST(Backward, SumAndSquare) {
  Tensor64 x({2}, {1, 2});
  x.set_requires_grad(true);
  backward(sum(x));
  EXPECT_EQ(std::vector<double>(x.grad().begin(), x.grad().end()), (std::vector<double>{1, 1}));
  x.zero_grad();
  backward(sum(x * x));
  EXPECT_EQ(std::vector<double>(x.grad().begin(), x.grad().end()), (std::vector<double>{2, 4}));
}

TEST(Backward, DeepChainMatchesFiniteDifferences) {
  const auto f = [](const Tensor64& x) {
    Tensor64 y = x;
    for (int i = 0; i < 4; ++i) {
      y = sin(y) * 1.3 + exp(y * 0.2);
      y = y / (abs(y) + 2.0);
      y = log(y * y + 1.0) - y * 0.5;
      y = pow(y + 3.0, 1.5) * 0.1;
      y = maximum(y, y * 0.5 - 10.0);
    }
    return mean(y);
  };
  for (std::uint64_t s = 0; s < 5; ++s)
    EXPECT_LT(grad_check(f, random_tensor<double>({6}, 10 + s, -1, 1)), 1e-3);
}

TEST(Backward, NonScalarAndConstantRootsThrow) {
  auto x = random_tensor<double>({3}, 1);
  x.set_requires_grad(true);
  EXPECT_THROW(backward(x * 2.0), GraphError);
  EXPECT_THROW(backward(sum(Tensor64({3}))), GraphError);
}

TEST(Backward, UnreachableLeafUntouchedAndAccumulation) {
  auto a = random_tensor<double>({3}, 1), b = random_tensor<double>({3}, 2);
  a.set_requires_grad(true);
  b.set_requires_grad(true);
  backward(sum(a * 3.0));
  EXPECT_FALSE(b.has_grad());
  const std::vector<double> once(a.grad().begin(), a.grad().end());
  backward(sum(a * 3.0));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(a.grad()[i], 2 * once[i]);

  a.zero_grad();
  backward(sum(a + a));
  for (double g : a.grad()) EXPECT_DOUBLE_EQ(g, 2.0);
}

TEST(Backward, NoGradGuardSkipsRecording) {
  auto a = random_tensor<double>({3}, 1);
  a.set_requires_grad(true);
  NoGradGuard guard;
  EXPECT_FALSE((a * 2.0).requires_grad());
}

TEST(GradCheck, SumIsExact) {
  EXPECT_LT(grad_check([](const Tensor64& x) { return sum(x); }, random_tensor<double>({7}, 3)), 1e-9);
}

TEST(Purity, EqualInputsGiveEqualOutputs) {
  const auto a = random_tensor<double>({4, 5}, 1), b = random_tensor<double>({5}, 2);
  EXPECT_EQ((exp(a) * b - a / (b + 1.0)).to_vector(), (exp(a) * b - a / (b + 1.0)).to_vector());
}

TEST(ShapeOps, TakePutFlipConcat) {
  const auto x = random_tensor<double>({3, 2}, 1);
  const auto t = take(x, {2, 0});
  EXPECT_EQ(t.at(0, 1), x.at(2, 1));
  const auto p = put_rows(x, {1}, Tensor64::zeros({1, 2}));
  EXPECT_EQ(p.at(1, 0), 0.0);
  EXPECT_EQ(p.at(2, 1), x.at(2, 1));
  EXPECT_EQ(flip(x, 1).at(0, 0), x.at(0, 1));
  EXPECT_EQ(concat<double>({x, x}, 0).shape(), (Shape{6, 2}));
  EXPECT_EQ(transpose(x).shape(), (Shape{2, 3}));
  EXPECT_EQ(broadcast_to(Tensor64({1, 2}, {1, 2}), {3, 2}).at(2, 1), 2.0);
  EXPECT_LT(grad_check([](const Tensor64& v) {
              return sum(reshape(concat<double>({take(v, {1, 0, 2}), flip(v, 0)}, 1), {12}) *
                         Tensor64({12}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
            },
                       random_tensor<double>({3, 2}, 4)),
            1e-9);
}

TEST(Tensor, ShapeInvariant) {
  EXPECT_THROW(Tensor64({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  Tensor64 leaf({2});
  EXPECT_FALSE(leaf.has_grad());
  auto r = leaf * 2.0;
  EXPECT_FALSE(r.requires_grad());
}

}  // namespace
}  // namespace ddaug
