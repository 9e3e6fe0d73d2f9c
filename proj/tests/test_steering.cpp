// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The isacee Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "isacee/steering.hpp"

using namespace isacee;

namespace {

void expect_vec(const CVec& got, const CVec& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (int i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got(i).real(), want(i).real(), tol) << "entry " << i;
    EXPECT_NEAR(got(i).imag(), want(i).imag(), tol) << "entry " << i;
  }
}

}  // namespace

TEST(Steering, Broadside) { expect_vec(steering(kPi / 2, 4), CVec::Ones(4), 1e-15); }

TEST(Steering, Endfire) {
  CVec want(2);
  want << 1.0, -1.0;
  expect_vec(steering(0.0, 2), want, 1e-15);
}

TEST(Steering, SixtyDegrees) {
  CVec want(3);
  want << cplx(1, 0), cplx(0, -1), cplx(-1, 0);
  expect_vec(steering(kPi / 3, 3), want, 1e-15);
}

TEST(SteeringDerivative, Broadside) {
  CVec want(3);
  want << cplx(0, 0), cplx(0, kPi), cplx(0, 2 * kPi);
  expect_vec(steering_derivative(kPi / 2, 3), want, 1e-14);
}

TEST(SteeringDerivative, SingleElementIsZero) {
  for (double th : {0.1, 1.0, 2.5}) expect_vec(steering_derivative(th, 1), CVec::Zero(1), 0.0);
}

TEST(SteeringDerivative, MatchesCentralDifference) {
  const double h = 1e-6;
  const double th = kPi / 4;
  const CVec fd = (steering(th + h, 2) - steering(th - h, 2)) / (2 * h);
  const cplx want = cplx(0, kPi * std::sqrt(2.0) / 2) * std::exp(cplx(0, -kPi * std::sqrt(2.0) / 2));
  EXPECT_NEAR(std::abs(steering_derivative(th, 2)(1) - want), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(fd(1) - want), 0.0, 1e-8);
}

TEST(SteeringDerivative, RandomAnglesAgainstFiniteDifference) {
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const double th = 0.1 + 0.15 * i;
    const CVec fd = (steering(th + h, 8) - steering(th - h, 8)) / (2 * h);
    EXPECT_LT((fd - steering_derivative(th, 8)).norm(), 1e-7);
  }
}

TEST(Steering, UnitModulus) {
  const CVec a = steering(0.7, 16);
  for (int i = 0; i < a.size(); ++i) EXPECT_NEAR(std::abs(a(i)), 1.0, 1e-15);
}

TEST(Steering, PairShapes) {
  const SteeringPair p = steering_pair(1.1, 4, 6);
  EXPECT_EQ(p.a_t.size(), 4);
  EXPECT_EQ(p.a_r.size(), 6);
}
