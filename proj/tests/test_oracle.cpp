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

#include "isacee/metrics.hpp"
#include "isacee/oracle.hpp"
#include "isacee/scenario.hpp"
#include "isacee/steering.hpp"

using namespace isacee;

namespace {

SystemConfig cfg_with(const RawConfig& extra) { return make_config(merge(preset("desk"), extra)); }

}  // namespace

TEST(FisherFd, SingleAntennaHasNoAngleInformation) {
  const SystemConfig cfg = cfg_with({{"M", "1"}, {"K", "1"}});
  EXPECT_EQ(oracle::fisher_fd(CMat::Identity(1, 1), 1.0, {1.0, 0.0}, cfg).J, 0.0);
}

TEST(FisherFd, MatchesClosedFormWithExactDerivatives) {
  const SystemConfig cfg = cfg_with({{"M", "2"}, {"K", "1"}, {"L", "1"}, {"sigma_s2", "1 W"}});
  const oracle::FisherReport f = oracle::fisher_fd(CMat::Identity(2, 2), kPi / 2, {1.0, 0.0}, cfg);
  EXPECT_TRUE(f.stable);
  // 2 L |alpha|^2 / sigma_s2 times the Fisher functional built from steering_derivative.
  const double closed = 2.0 * fisher_functional(CMat::Identity(2, 2), kPi / 2);
  EXPECT_NEAR(f.J, closed, 1e-6 * closed);
}

TEST(FisherFd, QuadraticInAlpha) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  const SystemConfig cfg = cfg_with({{"M", "3"}, {"K", "1"}});
  CMat B(3, 3);
  for (int i = 0; i < 9; ++i) B(i / 3, i % 3) = {N(rng), N(rng)};
  const CMat R = B * B.adjoint();
  const double j1 = oracle::fisher_fd(R, 1.0, {1.0, 0.0}, cfg).J;
  const double j2 = oracle::fisher_fd(R, 1.0, {std::sqrt(2.0), 0.0}, cfg).J;
  const double j4 = oracle::fisher_fd(R, 1.0, {0.0, 2.0}, cfg).J;
  EXPECT_NEAR(j2, 2.0 * j1, 1e-6 * j1);
  EXPECT_NEAR(j4, 4.0 * j1, 1e-6 * j1);
}

TEST(FisherFd, StableUnderStepHalving) {
  const SystemConfig cfg = cfg_with({{"M", "4"}, {"K", "1"}});
  const CMat R = CMat::Identity(4, 4) + 0.3 * CMat::Ones(4, 4);
  oracle::OracleConfig a, b;
  b.fd_step = a.fd_step / 2.0;
  const double ja = oracle::fisher_fd(R, 0.9, {1.0, 0.0}, cfg, a).J;
  const double jb = oracle::fisher_fd(R, 0.9, {1.0, 0.0}, cfg, b).J;
  EXPECT_NEAR(ja, jb, 1e-3 * ja);
}

TEST(FisherFd, RejectsStepOutsideRange) {
  oracle::OracleConfig oc;
  oc.fd_step = 1e-2;
  EXPECT_THROW(oc.validate(), std::invalid_argument);
  oc.fd_step = 1e-9;
  EXPECT_THROW(oc.validate(), std::invalid_argument);
}

TEST(GridSearch, WithinOneStepOfContinuousOptimum) {
  const SystemConfig cfg = cfg_with({{"M", "4"}, {"K", "1"}, {"gamma", "0.01 lin"}, {"seed", "3"}});
  const ChannelSet ch = draw_channels(cfg);
  const double g = ch.h[0].squaredNorm();
  auto ee = [&](double p) { return std::log2(1.0 + p * g / cfg.sigma_c2) / (p / cfg.eps_pa + cfg.P0); };
  // Golden-section search on the unimodal EE(p).
  double lo = 0.0, hi = cfg.Pmax;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
    (ee(a) < ee(b) ? lo : hi) = (ee(a) < ee(b) ? a : b);
  }
  const oracle::GridResult best = oracle::grid_search_ee(cfg, ch, 10000);
  EXPECT_LE(std::abs(best.power - 0.5 * (lo + hi)), cfg.Pmax / 10000.0);
  EXPECT_LE(best.ee, ee(0.5 * (lo + hi)) + 1e-15);
}

TEST(GridSearch, TinyBudgetEndsAtBoundary) {
  const SystemConfig cfg = cfg_with({{"M", "4"}, {"K", "1"}, {"Pmax", "-20 dBm"}, {"gamma", "1e-6 lin"}});
  const ChannelSet ch = draw_channels(cfg);
  EXPECT_DOUBLE_EQ(oracle::grid_search_ee(cfg, ch, 1000).power, cfg.Pmax);
}

TEST(GridSearch, NeedsSingleUser) {
  const SystemConfig cfg = cfg_with({});
  EXPECT_THROW(oracle::grid_search_ee(cfg, draw_channels(cfg)), std::invalid_argument);
}

TEST(Audit, ZeroBeamformerSinrViolationEqualsTarget) {
  const SystemConfig cfg = cfg_with({});
  const ChannelSet ch = draw_channels(cfg);
  BeamformerSolution sol;
  sol.W = CMat::Zero(cfg.M, cfg.K);
  oracle::AuditSpec spec;
  spec.crb = false;
  const oracle::AuditReport r = oracle::audit_solution(sol, cfg, ch, spec);
  EXPECT_FALSE(r.pass);
  EXPECT_DOUBLE_EQ(r.entries.at("sinr0").violation, cfg.gamma[0]);
  EXPECT_DOUBLE_EQ(r.entries.at("sinr0").relative, 1.0);
}

TEST(Audit, HandBuiltPowerViolation) {
  const SystemConfig cfg = cfg_with({{"rho", "inf rad"}, {"gamma", "1e-9 lin"}});
  const ChannelSet ch = draw_channels(cfg);
  BeamformerSolution sol;
  sol.W = CMat::Zero(cfg.M, cfg.K);
  sol.W(0, 0) = std::sqrt(1.25 * cfg.Pmax);
  sol.W(1, 1) = 1e-3;
  const oracle::AuditReport r = oracle::audit_solution(sol, cfg, ch);
  const double want = 1.25 * cfg.Pmax + 1e-6 - cfg.Pmax;
  EXPECT_NEAR(r.entries.at("power").violation, want, 1e-10);
  EXPECT_NEAR(r.max_relative, want / cfg.Pmax, 1e-10);
}

TEST(Audit, FeasiblePointPasses) {
  const SystemConfig cfg = cfg_with({{"rho", "inf rad"}, {"gamma", "1e-3 lin"}});
  const ChannelSet ch = draw_channels(cfg);
  BeamformerSolution sol;
  sol.W = CMat::Zero(cfg.M, cfg.K);
  for (int k = 0; k < cfg.K; ++k) sol.W.col(k) = 0.3 * ch.h[static_cast<std::size_t>(k)].normalized();
  const oracle::AuditReport r = oracle::audit_solution(sol, cfg, ch);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_relative, 0.0);
}

TEST(LoopOracles, AgreeWithVectorisedMetrics) {
  const SystemConfig cfg = cfg_with({{"tau", "5"}});
  const ChannelSet ch = draw_channels(cfg);
  CMat W(cfg.M, cfg.K);
  for (int k = 0; k < cfg.K; ++k) W.col(k) = 0.2 * ch.h[static_cast<std::size_t>(1 - k)];
  const CMat R = 0.01 * CMat::Identity(cfg.M, cfg.M);
  const double a = ee_comm(W, ch, cfg, &R);
  EXPECT_NEAR(oracle::ee_comm_loop(W, &R, ch, cfg), a, 1e-12 * a);
  const CMat Rx = W * W.adjoint() + R;
  EXPECT_NEAR(oracle::crb_extended_eig(Rx, cfg), crb_extended(Rx, cfg), 1e-10 * crb_extended(Rx, cfg));
}
