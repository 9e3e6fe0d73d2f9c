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
#include <random>

#include <Eigen/Eigenvalues>

#include "isacee/metrics.hpp"
#include "isacee/oracle.hpp"
#include "isacee/scenario.hpp"

using namespace isacee;

namespace {

SystemConfig unit_cfg(int M, int K) {
  RawConfig raw = preset("desk");
  raw["M"] = std::to_string(M);
  raw["K"] = std::to_string(K);
  raw["L"] = "1";
  raw["sigma_s2"] = "1 W";
  raw["sigma_c2"] = "1 W";
  raw["P0"] = "1 W";
  return make_config(raw);
}

CMat random_psd(std::mt19937_64& rng, int M) {
  std::normal_distribution<double> N;
  CMat B(M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) B(i, j) = {N(rng), N(rng)};
  }
  return B * B.adjoint() / M + 0.05 * CMat::Identity(M, M);
}

CMat random_cmat(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> N;
  CMat X(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) X(i, j) = {N(rng), N(rng)};
  }
  return X;
}

}  // namespace

TEST(Sinr, SingleUser) {
  CMat W(2, 1);
  W << 1.0, 0.0;
  CVec h(2);
  h << 1.0, 0.0;
  EXPECT_DOUBLE_EQ(sinr_k(W, h, 0, 1.0), 1.0);
}

TEST(Sinr, OrthogonalInterferer) {
  CMat W(2, 2);
  W << 2.0, 0.0, 0.0, 1.0;
  CVec h(2);
  h << 1.0, 0.0;
  EXPECT_DOUBLE_EQ(sinr_k(W, h, 0, 2.0), 2.0);
}

TEST(Sinr, MatchesScalarLoop) {
  std::mt19937_64 rng(5);
  const CMat W = random_cmat(rng, 4, 2);
  const CMat H = random_cmat(rng, 4, 2);
  const CMat R = random_psd(rng, 4);
  const std::vector<CVec> h{H.col(0), H.col(1)};
  for (int k = 0; k < 2; ++k) {
    const double a = sinr_k(W, h[static_cast<std::size_t>(k)], k, 0.3);
    EXPECT_NEAR(a, oracle::sinr_loop(W, nullptr, h, k, 0.3), 1e-12 * a);
    const double b = sinr_k(W, h[static_cast<std::size_t>(k)], k, 0.3, &R);
    EXPECT_NEAR(b, oracle::sinr_loop(W, &R, h, k, 0.3), 1e-12 * b);
  }
}

TEST(EnergyEfficiency, ZeroBeamformer) {
  const SystemConfig cfg = unit_cfg(2, 1);
  ChannelSet ch;
  ch.h = {CVec::Ones(2)};
  EXPECT_EQ(ee_comm(CMat::Zero(2, 1), ch, cfg), 0.0);
}

TEST(EnergyEfficiency, OneBitOverTwoWatts) {
  RawConfig raw = preset("desk");
  raw["M"] = "1";
  raw["K"] = "1";
  raw["P0"] = "1 W";
  raw["sigma_c2"] = "1 W";
  const SystemConfig cfg = make_config(raw);
  ChannelSet ch;
  // SINR = 1 at transmit power P_d = eps (1 W drawn from the supply).
  ch.h = {CVec::Constant(1, 1.0 / std::sqrt(cfg.eps_pa))};
  const CMat W = CMat::Constant(1, 1, std::sqrt(cfg.eps_pa));
  EXPECT_NEAR(ee_comm(W, ch, cfg), 0.5, 1e-15);
}

TEST(EnergyEfficiency, MatchesLoopRecomputation) {
  std::mt19937_64 rng(9);
  const SystemConfig cfg = make_config(preset("desk"));
  const ChannelSet ch = draw_channels(cfg);
  const CMat W = random_cmat(rng, cfg.M, cfg.K) * 0.2;
  const CMat R = random_psd(rng, cfg.M) * 0.01;
  const double a = ee_comm(W, ch, cfg, &R);
  EXPECT_NEAR(a, oracle::ee_comm_loop(W, &R, ch, cfg), 1e-12 * a);
}

TEST(CrbPoint, SingleAntennaIsInfinite) {
  const SystemConfig cfg = unit_cfg(1, 1);
  EXPECT_TRUE(std::isinf(crb_point_cov(CMat::Identity(1, 1), 1.0, {1.0, 0.0}, cfg)));
}

TEST(CrbPoint, TwoAntennaIdentityFrozenOracleValue) {
  // 1/J of the finite-difference Fisher oracle (Richardson gap 7e-11).
  const double frozen = 0.025330295899753576;
  const SystemConfig cfg = unit_cfg(2, 1);
  EXPECT_NEAR(crb_point_cov(CMat::Identity(2, 2), kPi / 2, {1.0, 0.0}, cfg), frozen, 1e-9 * frozen);
}

TEST(CrbPoint, InverseScalingInCovariance) {
  std::mt19937_64 rng(3);
  const SystemConfig cfg = unit_cfg(4, 1);
  const CMat R = random_psd(rng, 4);
  const double base = crb_point_cov(R, 1.2, {0.7, 0.2}, cfg);
  for (double c : {0.1, 3.0, 250.0}) EXPECT_NEAR(crb_point_cov(c * R, 1.2, {0.7, 0.2}, cfg), base / c, 1e-10 * base / c);
}

TEST(CrbPoint, RankOneCovarianceEqualsBeamformerForm) {
  std::mt19937_64 rng(4);
  const SystemConfig cfg = make_config(preset("desk"));
  const CMat W = random_cmat(rng, cfg.M, 2);
  const CMat R = random_psd(rng, cfg.M);
  EXPECT_NEAR(crb_point(W, 1.0, {1.0, 0.0}, cfg, &R), crb_point_cov(W * W.adjoint() + R, 1.0, {1.0, 0.0}, cfg),
              1e-12);
}

TEST(CrbExtended, Identity) {
  for (int M : {1, 3, 6}) EXPECT_NEAR(crb_extended(CMat::Identity(M, M), unit_cfg(M, 1)), M * M, 1e-12);
}

TEST(CrbExtended, Diagonal) {
  CMat R = CMat::Zero(2, 2);
  R(0, 0) = 1.0;
  R(1, 1) = 2.0;
  EXPECT_NEAR(crb_extended(R, unit_cfg(2, 1)), 3.0, 1e-12);
}

TEST(CrbExtended, MatchesEigenvalueOracle) {
  std::mt19937_64 rng(8);
  const SystemConfig cfg = make_config(preset("desk"));
  for (int i = 0; i < 10; ++i) {
    const CMat R = random_psd(rng, cfg.M);
    const double a = crb_extended(R, cfg);
    EXPECT_NEAR(a, oracle::crb_extended_eig(R, cfg), 1e-10 * a);
  }
}

TEST(CrbExtended, SingularThrows) {
  CMat R = CMat::Zero(2, 2);
  R(0, 0) = 1.0;
  EXPECT_THROW(crb_extended(R, unit_cfg(2, 1)), std::domain_error);
}

TEST(EeSense, UnitCase) {
  const SystemConfig cfg = unit_cfg(2, 1);
  EXPECT_NEAR(ee_sense(1.0, CMat::Zero(2, 1), nullptr, cfg), 1.0, 1e-15);
}

TEST(EeSense, HalvesWithDoubleFrame) {
  RawConfig raw = preset("desk");
  const SystemConfig a = make_config(raw);
  raw["L"] = std::to_string(2 * a.L);
  const SystemConfig b = make_config(raw);
  const CMat W = CMat::Constant(a.M, a.K, 0.1);
  EXPECT_NEAR(ee_sense(0.3, W, nullptr, b), 0.5 * ee_sense(0.3, W, nullptr, a), 1e-15);
}

TEST(EeSense, PointTargetRecomputation) {
  std::mt19937_64 rng(10);
  const SystemConfig cfg = make_config(preset("desk"));
  const ChannelSet ch = draw_channels(cfg);
  const CMat W = random_cmat(rng, cfg.M, cfg.K) * 0.1;
  const MetricReport m = evaluate(W, nullptr, ch, cfg, TargetModel::point);
  const double P = W.squaredNorm();
  const double want = 1.0 / (m.crb * cfg.L * (P / cfg.eps_pa + cfg.P0));
  EXPECT_NEAR(m.ee_s, want, 1e-12 * want);
  EXPECT_NEAR(m.P_total, P, 1e-14);
  EXPECT_NEAR(m.ee_c, ee_comm(W, ch, cfg), 1e-14);
}

TEST(Power, ConsumedPower) {
  const SystemConfig cfg = make_config(preset("desk"));
  EXPECT_NEAR(consumed_power(0.7, cfg), 0.7 / cfg.eps_pa + cfg.P0, 1e-15);
}
