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

#include "isacee/constraints.hpp"
#include "isacee/metrics.hpp"
#include "isacee/oracle.hpp"
#include "isacee/recovery.hpp"
#include "isacee/scenario.hpp"
#include "isacee/sdp.hpp"

using namespace isacee;

namespace {

CVec random_cvec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N;
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = {N(rng), N(rng)};
  return v;
}

CMat random_psd(std::mt19937_64& rng, int M, int rank) {
  CMat B(M, rank);
  for (int c = 0; c < rank; ++c) B.col(c) = random_cvec(rng, M);
  return B * B.adjoint() / M;
}

SystemConfig cfg_with(int M, int K, const RawConfig& extra = {}) {
  RawConfig raw = merge(preset("desk"), extra);
  raw["M"] = std::to_string(M);
  raw["K"] = std::to_string(K);
  return make_config(raw);
}

}  // namespace

TEST(NumericRank, Examples) {
  EXPECT_EQ(numeric_rank(CMat::Identity(3, 3)), 3);
  std::mt19937_64 rng(1);
  const CVec w = random_cvec(rng, 4);
  EXPECT_EQ(numeric_rank(w * w.adjoint()), 1);
  const CVec u = w / w.norm();
  EXPECT_EQ(numeric_rank(u * u.adjoint() + 1e-9 * CMat::Identity(4, 4), 1e-6), 1);
}

TEST(ProjectPsd, ClipsNegativeEigenvalues) {
  CMat A = CMat::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = -1e-8;
  const CMat P = project_psd(A);
  EXPECT_NEAR(P(1, 1).real(), 0.0, 1e-20);
  EXPECT_NEAR(P(0, 0).real(), 1.0, 1e-15);
}

TEST(Recover, AlreadyRankOne) {
  std::mt19937_64 rng(2);
  const SystemConfig cfg = cfg_with(4, 1);
  ChannelSet ch;
  ch.h = {random_cvec(rng, 4)};
  const CVec w = random_cvec(rng, 4);
  const Recovery r = recover_rank1({w * w.adjoint()}, std::nullopt, ch, cfg, TargetModel::point);
  EXPECT_EQ(r.report.path, RecoveryPath::already_rank1);
  EXPECT_LE((r.W.col(0) * r.W.col(0).adjoint() - w * w.adjoint()).norm(), 1e-10 * w.squaredNorm());
  EXPECT_LE(r.report.numerator_delta, 1e-10 * w.squaredNorm() * ch.h[0].squaredNorm());
}

TEST(Recover, ClosedFormOnIdentity) {
  const SystemConfig cfg = cfg_with(3, 1);
  ChannelSet ch;
  ch.h = {CVec::Unit(3, 0)};
  const Recovery r = recover_rank1({CMat::Identity(3, 3)}, std::nullopt, ch, cfg, TargetModel::point);
  EXPECT_EQ(r.report.path, RecoveryPath::closed_form);
  const CMat What = r.W.col(0) * r.W.col(0).adjoint();
  CMat want = CMat::Zero(3, 3);
  want(0, 0) = 1.0;
  EXPECT_LT((What - want).norm(), 1e-14);
  EXPECT_NEAR(std::norm(ch.h[0].dot(r.W.col(0))), 1.0, 1e-14);
}

TEST(Recover, ClosedFormLeavesPsdRemainder) {
  std::mt19937_64 rng(3);
  const SystemConfig cfg = cfg_with(5, 1);
  for (int t = 0; t < 50; ++t) {
    ChannelSet ch;
    ch.h = {random_cvec(rng, 5)};
    const CMat W = random_psd(rng, 5, 1 + t % 5);
    const Recovery r = recover_rank1({W}, std::nullopt, ch, cfg, TargetModel::point);
    const CMat rest = W - r.W.col(0) * r.W.col(0).adjoint();
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<CMat>(rest).eigenvalues().minCoeff(), -1e-9 * W.norm());
    const double num = (ch.h[0].adjoint() * W * ch.h[0])(0).real();
    EXPECT_NEAR(std::norm(ch.h[0].dot(r.W.col(0))), num, 1e-8 * num);
    // Phase alignment makes h^H w real and positive.
    const cplx g = ch.h[0].dot(r.W.col(0));
    EXPECT_NEAR(g.imag(), 0.0, 1e-10 * std::abs(g));
    EXPECT_GT(g.real(), 0.0);
  }
}

TEST(Recover, DegenerateBeamformerThrows) {
  const SystemConfig cfg = cfg_with(2, 1);
  ChannelSet ch;
  ch.h = {CVec::Unit(2, 0)};
  CMat W = CMat::Zero(2, 2);
  W(1, 1) = 1.0;
  EXPECT_THROW(recover_rank1({W}, std::nullopt, ch, cfg, TargetModel::point), std::domain_error);
}

TEST(Recover, ExtendedKeepsInterferenceAndCovariance) {
  std::mt19937_64 rng(4);
  const SystemConfig cfg = cfg_with(4, 2, {{"tau", "5"}});
  ChannelSet ch;
  ch.h = {random_cvec(rng, 4), random_cvec(rng, 4)};
  const std::vector<CMat> W{random_psd(rng, 4, 3), random_psd(rng, 4, 2)};
  const CMat R = random_psd(rng, 4, 4);
  const Recovery r = recover_rank1(W, R, ch, cfg, TargetModel::extended);
  ASSERT_TRUE(r.Rprobe.has_value());
  CMat before = R + W[0] + W[1];
  CMat after = *r.Rprobe;
  for (int k = 0; k < 2; ++k) after += r.W.col(k) * r.W.col(k).adjoint();
  EXPECT_LT((after - before).norm(), 1e-8 * before.norm());
  for (int k = 0; k < 2; ++k) {
    const CVec& h = ch.h[static_cast<std::size_t>(k)];
    auto q = [&h](const CMat& X) { return (h.adjoint() * X * h)(0).real(); };
    const double intf_before = q(W[static_cast<std::size_t>(1 - k)]) + q(R);
    const CMat other = r.W.col(1 - k) * r.W.col(1 - k).adjoint();
    const double intf_after = q(other) + q(*r.Rprobe);
    EXPECT_NEAR(intf_after, intf_before, 1e-8 * (1.0 + intf_before));
    EXPECT_NEAR(std::norm(h.dot(r.W.col(k))), q(W[static_cast<std::size_t>(k)]), 1e-8 * q(W[static_cast<std::size_t>(k)]));
  }
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<CMat>(*r.Rprobe).eigenvalues().minCoeff(), -1e-9);
  for (double ratio : r.report.post_ratio) EXPECT_LE(ratio, 1e-6);
}

TEST(Recover, ExtendedSdrOutputPassesAudit) {
  const SystemConfig cfg = cfg_with(4, 2, {{"tau", "5"}, {"seed", "7"}});
  const ChannelSet ch = draw_channels(cfg);
  sdp::ConeProblem p;
  std::vector<sdp::HermVar> W{p.add_herm_psd(4), p.add_herm_psd(4)};
  const sdp::HermVar R = p.add_herm_psd(4);
  sdp::LinExpr power = sdp::trace(R) + sdp::trace(W[0]) + sdp::trace(W[1]);
  p.add_ineq(sdp::LinExpr(cfg.Pmax) - power);
  for (int k = 0; k < 2; ++k) {
    p.add_ineq(sinr_sdr(W, &R, ch.h[static_cast<std::size_t>(k)], k, cfg.gamma[static_cast<std::size_t>(k)],
                        cfg.sigma_c2));
  }
  add_extended_crb(p, add_trace_inverse_epigraph(p, W, R), cfg);
  p.maximize(-power);
  const sdp::SolveReport rep = sdp::solve(p);
  ASSERT_TRUE(rep.optimal()) << rep.message;
  const std::vector<CMat> Wv{project_psd(W[0].value(rep.y)), project_psd(W[1].value(rep.y))};
  const CMat Rv = project_psd(R.value(rep.y));
  const Recovery rec = recover_rank1(Wv, Rv, ch, cfg, TargetModel::extended);
  BeamformerSolution sol;
  sol.W = rec.W;
  sol.Rprobe = rec.Rprobe;
  oracle::AuditSpec spec;
  spec.target = TargetModel::extended;
  const oracle::AuditReport audit = oracle::audit_solution(sol, cfg, ch, spec);
  EXPECT_TRUE(audit.pass) << audit.max_relative;
  // EE_C is a function of numerators and interference only, both preserved.
  CMat Wsum = Wv[0] + Wv[1];
  const double relaxed_ee = [&] {
    double rate = 0.0;
    for (int k = 0; k < 2; ++k) {
      const CVec& h = ch.h[static_cast<std::size_t>(k)];
      auto q = [&h](const CMat& X) { return (h.adjoint() * X * h)(0).real(); };
      const double s = q(Wv[static_cast<std::size_t>(k)]);
      rate += std::log2(1.0 + s / (q(Wsum) - s + q(Rv) + cfg.sigma_c2));
    }
    return rate / consumed_power((Wsum + Rv).trace().real(), cfg);
  }();
  const double ee = ee_comm(rec.W, ch, cfg, &*rec.Rprobe);
  EXPECT_NEAR(ee, relaxed_ee, 1e-6 * relaxed_ee);
}

TEST(Recover, PointTargetMultiUserUsesDominantEigenvector) {
  std::mt19937_64 rng(5);
  const SystemConfig cfg = cfg_with(4, 2);
  ChannelSet ch;
  ch.h = {random_cvec(rng, 4), random_cvec(rng, 4)};
  const CVec a = random_cvec(rng, 4), b = random_cvec(rng, 4);
  const std::vector<CMat> W{a * a.adjoint() + 1e-3 * CMat::Identity(4, 4), b * b.adjoint()};
  const Recovery r = recover_rank1(W, std::nullopt, ch, cfg, TargetModel::point);
  EXPECT_EQ(r.report.path, RecoveryPath::dominant_eigenvector);
  EXPECT_EQ(r.report.ranks[0], 4);
  EXPECT_EQ(r.report.ranks[1], 1);
}
