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

#include "isacee/recovery.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace isacee {

const char* to_string(RecoveryPath p) {
  switch (p) {
    case RecoveryPath::already_rank1: return "already-rank-1";
    case RecoveryPath::closed_form: return "closed-form";
    case RecoveryPath::nullspace: return "nullspace";
    case RecoveryPath::dominant_eigenvector: return "dominant-eigenvector";
  }
  return "unknown";
}

namespace {

RVec spectrum(const CMat& W) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (W + W.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

double ratio21(const CMat& W) {
  const RVec ev = spectrum(W);
  if (ev.size() < 2 || !(ev(0) > 0.0)) return 0.0;
  return std::max(0.0, ev(1)) / ev(0);
}

}  // namespace

CMat project_psd(const CMat& X) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (X + X.adjoint()));
  const RVec lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

int numeric_rank(const CMat& W, double ratio_tol) {
  const RVec ev = spectrum(W);
  if (ev.size() == 0 || !(ev(0) > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) >= ratio_tol * ev(0)) ++r;
  }
  return r;
}

void align_phases(CMat& W, const std::vector<CVec>& h) {
  for (int k = 0; k < W.cols(); ++k) {
    const cplx g = h[static_cast<std::size_t>(k)].dot(W.col(k));
    if (std::abs(g) > 0.0) W.col(k) *= std::conj(g) / std::abs(g);
  }
}

Recovery recover_rank1(const std::vector<CMat>& W_set, const std::optional<CMat>& Rprobe, const ChannelSet& ch,
                       const SystemConfig& cfg, TargetModel target) {
  const int K = static_cast<int>(W_set.size());
  if (K == 0 || K != static_cast<int>(ch.h.size())) throw std::invalid_argument("recover_rank1: K mismatch");
  const int M = static_cast<int>(W_set.front().rows());
  Recovery out;
  out.W = CMat::Zero(M, K);
  bool all_rank1 = true;
  for (const auto& Wk : W_set) {
    out.report.spectra.push_back(spectrum(Wk));
    out.report.ranks.push_back(numeric_rank(Wk));
    if (out.report.ranks.back() > 1) all_rank1 = false;
  }

  const bool closed_form = target == TargetModel::extended || K == 1;
  if (closed_form) {
    for (int k = 0; k < K; ++k) {
      const CVec& h = ch.h[static_cast<std::size_t>(k)];
      const CMat& Wk = W_set[static_cast<std::size_t>(k)];
      const double hWh = (h.adjoint() * Wk * h)(0).real();
      const double scale = h.squaredNorm() * std::abs(Wk.trace());
      if (!(hWh > 1e-12 * scale) || !(hWh > 0.0)) {
        throw std::domain_error("degenerate beamformer: h_k^H W_k h_k vanishes for user " + std::to_string(k));
      }
      out.W.col(k) = Wk * h / std::sqrt(hWh);
    }
    if (target == TargetModel::extended) {
      CMat R = Rprobe ? *Rprobe : CMat::Zero(M, M);
      for (int k = 0; k < K; ++k) R += W_set[static_cast<std::size_t>(k)] - out.W.col(k) * out.W.col(k).adjoint();
      out.Rprobe = 0.5 * (R + R.adjoint());
    }
    out.report.path = all_rank1 ? RecoveryPath::already_rank1
                                : (K == 1 ? RecoveryPath::closed_form : RecoveryPath::nullspace);
  } else {
    for (int k = 0; k < K; ++k) {
      const CMat Wk = 0.5 * (W_set[static_cast<std::size_t>(k)] + W_set[static_cast<std::size_t>(k)].adjoint());
      Eigen::SelfAdjointEigenSolver<CMat> es(Wk);
      const Eigen::Index top = M - 1;
      out.W.col(k) = es.eigenvectors().col(top) * std::sqrt(std::max(0.0, es.eigenvalues()(top)));
    }
    out.report.path = all_rank1 ? RecoveryPath::already_rank1 : RecoveryPath::dominant_eigenvector;
  }
  align_phases(out.W, ch.h);

  // Diagnostics.
  CMat before = CMat::Zero(M, M);
  for (const auto& Wk : W_set) before += Wk;
  if (Rprobe) before += *Rprobe;
  CMat after = out.W * out.W.adjoint();
  if (out.Rprobe) after += *out.Rprobe;
  out.report.covariance_delta = (before - after).norm();
  for (int k = 0; k < K; ++k) {
    const CVec& h = ch.h[static_cast<std::size_t>(k)];
    const double num0 = (h.adjoint() * W_set[static_cast<std::size_t>(k)] * h)(0).real();
    const double num1 = std::norm(h.dot(out.W.col(k)));
    out.report.numerator_delta = std::max(out.report.numerator_delta, std::abs(num0 - num1));
    out.report.post_ratio.push_back(ratio21(out.W.col(k) * out.W.col(k).adjoint()));
  }
  // EE_C of the relaxed point evaluated with SDR SINR terms.
  {
    const CMat Rp = Rprobe ? *Rprobe : CMat::Zero(M, M);
    double rate = 0.0, power = Rp.trace().real();
    for (int k = 0; k < K; ++k) {
      const CVec& h = ch.h[static_cast<std::size_t>(k)];
      double interf = cfg.sigma_c2 + (h.adjoint() * Rp * h)(0).real();
      for (int j = 0; j < K; ++j) {
        if (j != k) interf += (h.adjoint() * W_set[static_cast<std::size_t>(j)] * h)(0).real();
      }
      rate += std::log2(1.0 + (h.adjoint() * W_set[static_cast<std::size_t>(k)] * h)(0).real() / interf);
      power += W_set[static_cast<std::size_t>(k)].trace().real();
    }
    const double ee0 = rate / consumed_power(power, cfg);
    const CMat* rp = out.Rprobe ? &*out.Rprobe : nullptr;
    const double ee1 = ee_comm(out.W, ch, cfg, rp);
    out.report.objective_delta = std::abs(ee1 - ee0) / std::max(std::abs(ee0), 1e-300);
  }
  return out;
}

}  // namespace isacee
