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

#include "isacee/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "isacee/steering.hpp"

namespace isacee {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::converged: return "converged";
    case Outcome::max_iterations: return "max-iterations";
    case Outcome::infeasible: return "infeasible";
    case Outcome::failed: return "failed";
  }
  return "unknown";
}

CMat BeamformerSolution::covariance() const {
  CMat R = W * W.adjoint();
  if (Rprobe) R += *Rprobe;
  return R;
}

double BeamformerSolution::transmit_power() const {
  double p = W.squaredNorm();
  if (Rprobe) p += Rprobe->trace().real();
  return p;
}

double sinr_k(const CMat& W, const CVec& h_k, int k, double sigma_c2, const CMat* Rprobe) {
  const Eigen::RowVectorXcd g = h_k.adjoint() * W;
  double interference = sigma_c2;
  for (int j = 0; j < W.cols(); ++j) {
    if (j != k) interference += std::norm(g(j));
  }
  if (Rprobe) interference += (h_k.adjoint() * (*Rprobe) * h_k)(0).real();
  return std::norm(g(k)) / interference;
}

double sum_rate(const CMat& W, const ChannelSet& ch, double sigma_c2, const CMat* Rprobe) {
  double r = 0.0;
  for (int k = 0; k < static_cast<int>(ch.h.size()); ++k) {
    r += std::log2(1.0 + sinr_k(W, ch.h[static_cast<std::size_t>(k)], k, sigma_c2, Rprobe));
  }
  return r;
}

double consumed_power(double transmit_power, const SystemConfig& cfg) {
  return transmit_power / cfg.eps_pa + cfg.P0;
}

double ee_comm(const CMat& W, const ChannelSet& ch, const SystemConfig& cfg, const CMat* Rprobe) {
  double p = W.squaredNorm();
  if (Rprobe) p += Rprobe->trace().real();
  return sum_rate(W, ch, cfg.sigma_c2, Rprobe) / consumed_power(p, cfg);
}

double fisher_functional(const CMat& Rx, double theta) {
  const int M = static_cast<int>(Rx.rows());
  const CVec a = steering(theta, M);
  const CVec da = steering_derivative(theta, M);
  const double s = (a.adjoint() * Rx * a)(0).real();
  const double dd = (da.adjoint() * Rx * da)(0).real();
  const cplx x = (a.adjoint() * Rx * da)(0);
  const double q = da.squaredNorm() - std::norm(a.dot(da)) / M;
  if (!(s > 0.0)) return 0.0;
  return M * dd + q * s - M * std::norm(x) / s;
}

double crb_point_cov(const CMat& Rx, double theta, cplx alpha, const SystemConfig& cfg) {
  const int M = static_cast<int>(Rx.rows());
  const double F = fisher_functional(Rx, theta);
  const double scale = M * steering_derivative(theta, M).squaredNorm() * std::abs(Rx.trace());
  if (!(F > 1e-12 * scale)) return std::numeric_limits<double>::infinity();
  return cfg.sigma_s2 / (2.0 * cfg.L * std::norm(alpha) * F);
}

double crb_point(const CMat& W, double theta, cplx alpha, const SystemConfig& cfg, const CMat* Rprobe) {
  CMat R = W * W.adjoint();
  if (Rprobe) R += *Rprobe;
  return crb_point_cov(R, theta, alpha, cfg);
}

double crb_extended(const CMat& Rx, const SystemConfig& cfg) {
  const int M = static_cast<int>(Rx.rows());
  const CMat H = 0.5 * (Rx + Rx.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(H, Eigen::EigenvaluesOnly);
  const RVec ev = es.eigenvalues();
  const double tr = H.trace().real();
  if (!(tr > 0.0) || !(ev.minCoeff() > 1e-10 * tr / M)) {
    throw std::domain_error("rank-deficient sample covariance: R_x must be positive definite");
  }
  return cfg.sigma_s2 * M * ev.cwiseInverse().sum() / cfg.L;
}

double ee_sense(double crb_value, const CMat& W, const CMat* Rprobe, const SystemConfig& cfg) {
  double p = W.squaredNorm();
  if (Rprobe) p += Rprobe->trace().real();
  return (1.0 / crb_value) / (cfg.L * consumed_power(p, cfg));
}

MetricReport evaluate(const CMat& W, const CMat* Rprobe, const ChannelSet& ch, const SystemConfig& cfg,
                      TargetModel target) {
  MetricReport r;
  for (int k = 0; k < static_cast<int>(ch.h.size()); ++k) {
    r.sinr.push_back(sinr_k(W, ch.h[static_cast<std::size_t>(k)], k, cfg.sigma_c2, Rprobe));
    r.sum_rate += std::log2(1.0 + r.sinr.back());
  }
  r.P_total = W.squaredNorm() + (Rprobe ? Rprobe->trace().real() : 0.0);
  r.ee_c = r.sum_rate / consumed_power(r.P_total, cfg);
  CMat Rx = W * W.adjoint();
  if (Rprobe) Rx += *Rprobe;
  if (target == TargetModel::point) {
    r.crb = crb_point_cov(Rx, ch.theta, ch.alpha, cfg);
  } else {
    try {
      r.crb = crb_extended(Rx, cfg);
    } catch (const std::domain_error&) {
      r.crb = std::numeric_limits<double>::infinity();
    }
  }
  r.ee_s = ee_sense(r.crb, W, Rprobe, cfg);
  return r;
}

}  // namespace isacee
