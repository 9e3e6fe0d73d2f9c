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

#include "isacee/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace isacee::oracle {

namespace {

constexpr double kPiLocal = 3.14159265358979323846;

CMat array_matrix(double theta, int M) {
  CVec a(M);
  for (int m = 0; m < M; ++m) a(m) = std::polar(1.0, -kPiLocal * m * std::cos(theta));
  return a * a.adjoint();
}

CMat central_diff(double theta, int M, double h) {
  return (array_matrix(theta + h, M) - array_matrix(theta - h, M)) / (2.0 * h);
}

double re_tr(const CMat& A, const CMat& R, const CMat& B) {
  // Re tr(A R B^H)
  cplx s = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < R.rows(); ++j) {
      for (int l = 0; l < R.cols(); ++l) s += A(i, j) * R(j, l) * std::conj(B(i, l));
    }
  }
  return s.real();
}

double total_power(const CMat& W, const CMat* Rprobe) {
  double p = 0.0;
  for (int i = 0; i < W.rows(); ++i) {
    for (int k = 0; k < W.cols(); ++k) p += std::norm(W(i, k));
  }
  if (Rprobe) {
    for (int i = 0; i < Rprobe->rows(); ++i) p += (*Rprobe)(i, i).real();
  }
  return p;
}

void put(AuditReport& r, const std::string& name, double value, double bound, bool upper) {
  AuditEntry e;
  e.value = value;
  e.bound = bound;
  e.violation = std::max(0.0, upper ? value - bound : bound - value);
  if (std::isnan(value)) e.violation = std::numeric_limits<double>::infinity();
  e.relative = e.violation / std::max(std::abs(bound), 1e-300);
  r.entries[name] = e;
  r.max_relative = std::max(r.max_relative, e.relative);
}

}  // namespace

void OracleConfig::validate() const {
  if (!(fd_step >= 1e-8 && fd_step <= 1e-3)) throw std::invalid_argument("fd_step must lie in [1e-8, 1e-3]");
}

FisherReport fisher_fd(const CMat& Rx, double theta, cplx alpha, const SystemConfig& cfg, const OracleConfig& oc) {
  oc.validate();
  const int M = static_cast<int>(Rx.rows());
  const CMat A = array_matrix(theta, M);
  const CMat D1 = central_diff(theta, M, oc.fd_step);
  const CMat D2 = central_diff(theta, M, oc.fd_step / 2.0);
  const CMat Ad = (4.0 * D2 - D1) / 3.0;

  FisherReport out;
  const double nd = std::max(Ad.norm(), 1e-300);
  out.richardson_gap = (Ad - D2).norm() / nd;
  out.stable = Ad.norm() == 0.0 || out.richardson_gap <= oc.richardson_tol;

  // d mu / d eta for eta = (theta, Re alpha, Im alpha), mu = alpha A X.
  const std::vector<CMat> d{alpha * Ad, A, cplx(0.0, 1.0) * A};
  const double c = 2.0 * cfg.L / cfg.sigma_s2;
  out.fim = RMat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.fim(i, j) = c * re_tr(d[static_cast<std::size_t>(i)], Rx, d[static_cast<std::size_t>(j)]);
  }
  const RMat Jaa = out.fim.bottomRightCorner(2, 2);
  const Eigen::Vector2d Jta = out.fim.block(0, 1, 1, 2).transpose();
  const double det = Jaa.determinant();
  if (!(std::abs(det) > 0.0)) {
    out.J = 0.0;
    return out;
  }
  out.J = std::max(0.0, out.fim(0, 0) - Jta.dot(Jaa.inverse() * Jta));
  return out;
}

GridResult grid_search_ee(const SystemConfig& cfg, const ChannelSet& ch, int resolution) {
  if (ch.h.size() != 1) throw std::invalid_argument("grid_search_ee needs a single user");
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  double g = 0.0;
  for (int m = 0; m < ch.h[0].size(); ++m) g += std::norm(ch.h[0](m));
  GridResult best;
  best.ee = -1.0;
  for (int i = 1; i <= resolution; ++i) {
    const double p = cfg.Pmax * i / resolution;
    if (p * g / cfg.sigma_c2 < cfg.gamma[0]) continue;
    const double ee = std::log(1.0 + p * g / cfg.sigma_c2) / std::log(2.0) / (p / cfg.eps_pa + cfg.P0);
    if (ee > best.ee) best = {p, ee};
  }
  return best;
}

double sinr_loop(const CMat& W, const CMat* Rprobe, const std::vector<CVec>& h, int k, double sigma2) {
  const CVec& hk = h[static_cast<std::size_t>(k)];
  double signal = 0.0, interference = sigma2;
  for (int j = 0; j < W.cols(); ++j) {
    cplx s = 0.0;
    for (int m = 0; m < W.rows(); ++m) s += std::conj(hk(m)) * W(m, j);
    if (j == k) {
      signal = std::norm(s);
    } else {
      interference += std::norm(s);
    }
  }
  if (Rprobe) {
    cplx q = 0.0;
    for (int m = 0; m < hk.size(); ++m) {
      for (int n = 0; n < hk.size(); ++n) q += std::conj(hk(m)) * (*Rprobe)(m, n) * hk(n);
    }
    interference += q.real();
  }
  return signal / interference;
}

double ee_comm_loop(const CMat& W, const CMat* Rprobe, const ChannelSet& ch, const SystemConfig& cfg) {
  double rate = 0.0;
  for (int k = 0; k < static_cast<int>(ch.h.size()); ++k) {
    rate += std::log(1.0 + sinr_loop(W, Rprobe, ch.h, k, cfg.sigma_c2)) / std::log(2.0);
  }
  return rate / (total_power(W, Rprobe) / cfg.eps_pa + cfg.P0);
}

double crb_extended_eig(const CMat& Rx, const SystemConfig& cfg) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (Rx + Rx.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (!(l > 0.0)) return std::numeric_limits<double>::infinity();
    s += 1.0 / l;
  }
  return cfg.sigma_s2 * static_cast<double>(Rx.rows()) * s / cfg.L;
}

AuditReport audit_solution(const BeamformerSolution& sol, const SystemConfig& cfg, const ChannelSet& ch,
                           const AuditSpec& spec, const OracleConfig& oc) {
  AuditReport r;
  const CMat* rp = sol.Rprobe ? &*sol.Rprobe : nullptr;
  if (spec.sinr) {
    for (int k = 0; k < static_cast<int>(ch.h.size()); ++k) {
      put(r, "sinr" + std::to_string(k), sinr_loop(sol.W, rp, ch.h, k, cfg.sigma_c2),
          cfg.gamma[static_cast<std::size_t>(k)], false);
    }
  }
  const double P = total_power(sol.W, rp);
  put(r, "power", P, cfg.Pmax, true);

  CMat Rx = sol.W * sol.W.adjoint();
  if (rp) {
    Rx += *rp;
    const double herm = (*rp - rp->adjoint()).norm();
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (*rp + rp->adjoint()), Eigen::EigenvaluesOnly);
    put(r, "probe_hermitian", herm, 1e-10 * std::max(1.0, rp->norm()), true);
    put(r, "probe_psd", es.eigenvalues().minCoeff(), -1e-9, false);
  }
  if (spec.crb) {
    if (spec.target == TargetModel::point && cfg.crb_active()) {
      const FisherReport f = fisher_fd(Rx, ch.theta, ch.alpha, cfg, oc);
      const double crb = f.J > 0.0 ? 1.0 / f.J : std::numeric_limits<double>::infinity();
      put(r, "crb", crb, cfg.crb_bound(), true);
    } else if (spec.target == TargetModel::extended && cfg.tau_active()) {
      put(r, "crb", crb_extended_eig(Rx, cfg), cfg.tau, true);
    }
  }
  if (spec.ees_floor > 0.0) {
    double crb = 0.0;
    if (spec.target == TargetModel::point) {
      const FisherReport f = fisher_fd(Rx, ch.theta, ch.alpha, cfg, oc);
      crb = f.J > 0.0 ? 1.0 / f.J : std::numeric_limits<double>::infinity();
    } else {
      crb = crb_extended_eig(Rx, cfg);
    }
    put(r, "ee_s", 1.0 / (crb * cfg.L * (P / cfg.eps_pa + cfg.P0)), spec.ees_floor, false);
  }
  r.pass = r.max_relative <= spec.tolerance;
  return r;
}

}  // namespace isacee::oracle
