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

#include "isacee/constraints.hpp"

#include <cmath>
#include <stdexcept>

#include "isacee/metrics.hpp"
#include "isacee/steering.hpp"

namespace isacee {

using sdp::CLinExpr;
using sdp::HermBlock;
using sdp::HermVar;
using sdp::LinExpr;

double LinearizationPoint::scalar(const std::string& key) const {
  const auto it = scalars_prev.find(key);
  if (it == scalars_prev.end()) throw std::invalid_argument("linearization point lacks '" + key + "'");
  return it->second;
}

double crb_scale(const SystemConfig& cfg, cplx alpha) {
  return cfg.sigma_s2 / (2.0 * cfg.L * std::norm(alpha));
}

double fixed_fisher_floor(const SystemConfig& cfg, cplx alpha) {
  return crb_scale(cfg, alpha) / cfg.crb_bound();
}

HermBlock crb_schur_block(const std::vector<HermVar>& covs, double theta, const LinExpr& floor) {
  if (covs.empty()) throw std::invalid_argument("crb_schur_block: no covariance terms");
  const int M = covs.front().n;
  const CVec a = steering(theta, M);
  const CVec da = steering_derivative(theta, M);
  const double q = da.squaredNorm() - std::norm(a.dot(da)) / M;
  const double sq = std::sqrt(static_cast<double>(M));
  LinExpr f11 = -floor;
  LinExpr f22;
  CLinExpr f12;
  for (const auto& W : covs) {
    const LinExpr aa = sdp::quad_form(a, W, a).re;
    f11 += M * sdp::quad_form(da, W, da).re;
    f11 += q * aa;
    f22 += aa;
    f12 += cplx(sq, 0.0) * sdp::quad_form(da, W, a);
  }
  HermBlock B(2);
  B.set(0, 0, f11);
  B.set(0, 1, f12);
  B.set(1, 1, f22);
  return B;
}

CMat crb_schur_matrix(const CMat& R, double theta, double floor) {
  const int M = static_cast<int>(R.rows());
  const CVec a = steering(theta, M);
  const CVec da = steering_derivative(theta, M);
  const double q = da.squaredNorm() - std::norm(a.dot(da)) / M;
  CMat B(2, 2);
  B(0, 0) = M * (da.adjoint() * R * da)(0).real() + q * (a.adjoint() * R * a)(0).real() - floor;
  B(0, 1) = std::sqrt(static_cast<double>(M)) * (da.adjoint() * R * a)(0);
  B(1, 0) = std::conj(B(0, 1));
  B(1, 1) = (a.adjoint() * R * a)(0).real();
  return B;
}

void add_crb_constraint(sdp::ConeProblem& prob, const std::vector<HermVar>& covs, double theta, cplx alpha,
                        const SystemConfig& cfg) {
  if (!cfg.crb_active()) return;
  prob.add_lmi(crb_schur_block(covs, theta, LinExpr(fixed_fisher_floor(cfg, alpha))));
}

LinExpr sinr_sdr(const std::vector<HermVar>& W, const HermVar* R, const CVec& h_k, int k, double gamma,
                 double sigma2) {
  LinExpr e = sdp::quad_form(h_k, W[static_cast<std::size_t>(k)], h_k).re;
  for (int j = 0; j < static_cast<int>(W.size()); ++j) {
    if (j != k) e -= gamma * sdp::quad_form(h_k, W[static_cast<std::size_t>(j)], h_k).re;
  }
  if (R) e -= gamma * sdp::quad_form(h_k, *R, h_k).re;
  e -= LinExpr(gamma * sigma2);
  return e;
}

double sinr_sdr_value(const std::vector<CMat>& W, const CMat* R, const CVec& h_k, int k, double gamma,
                      double sigma2) {
  auto tq = [&](const CMat& X) { return (h_k.adjoint() * X * h_k)(0).real(); };
  double v = tq(W[static_cast<std::size_t>(k)]);
  for (int j = 0; j < static_cast<int>(W.size()); ++j) {
    if (j != k) v -= gamma * tq(W[static_cast<std::size_t>(j)]);
  }
  if (R) v -= gamma * tq(*R);
  return v - gamma * sigma2;
}

void add_sinr_soc(sdp::ConeProblem& prob, const std::vector<sdp::CVecVar>& w, const CVec& h_k, int k, double gamma,
                  double sigma2) {
  const int K = static_cast<int>(w.size());
  const LinExpr x = sdp::inner(h_k, w[static_cast<std::size_t>(k)]).re * (1.0 / std::sqrt(gamma));
  HermBlock B(K + 1);
  int row = 0;
  for (int j = 0; j < K; ++j) {
    if (j == k) continue;
    B.set(row, row, x);
    B.set(row, K, sdp::inner(h_k, w[static_cast<std::size_t>(j)]));
    ++row;
  }
  B.set(row, row, x);
  B.set(row, K, CLinExpr(cplx(std::sqrt(sigma2), 0.0)));
  B.set(K, K, x);
  prob.add_lmi(B);
}

void add_rank1_lemma(sdp::ConeProblem& prob, const HermVar& W, const sdp::CVecVar& w) {
  const int n = W.n;
  HermBlock B(n + 1);
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) B.set(r, c, W(r, c));
    B.set(r, n, w(r));
  }
  B.set(n, n, CLinExpr(cplx(1.0, 0.0)));
  prob.add_lmi(B);
}

LinExpr rank1_cut(const HermVar& W, const sdp::CVecVar& w, const CVec& wbar) {
  LinExpr e = sdp::trace(W);
  e += LinExpr(wbar.squaredNorm());
  e -= 2.0 * sdp::inner(wbar, w).re;
  return e;
}

double rank1_cut_value(const CMat& W, const CVec& w, const CVec& wbar) {
  return W.trace().real() + wbar.squaredNorm() - 2.0 * wbar.dot(w).real();
}

int add_penalized_cut(sdp::ConeProblem& prob, const HermVar& W, const sdp::CVecVar& w, const CVec& wbar) {
  const int s = prob.add_var();
  prob.add_ineq(LinExpr::variable(s));
  prob.add_ineq(LinExpr::variable(s) - rank1_cut(W, w, wbar));
  return s;
}

double sq_norm_minorant(const CVec& w, const CVec& wbar) {
  return 2.0 * wbar.dot(w).real() - wbar.squaredNorm();
}

double quad_over_lin_minorant(double z, double phi, double zn, double phin) {
  const double r = zn / phin;
  return 2.0 * r * z - r * r * phi;
}

double log_majorant(double p, double pn) { return std::log(pn) + (p - pn) / pn; }

LogMinorant LogMinorant::at(double u0) {
  if (!(u0 > 0.0)) throw std::invalid_argument("log minorant needs u0 > 0");
  LogMinorant m;
  m.u0 = u0;
  m.umin = 0.5 * u0;
  const double d = u0 - m.umin;
  m.c = std::max(0.5 / (u0 * u0), (std::log(u0 / m.umin) - d / u0) / (d * d));
  return m;
}

double LogMinorant::value(double u) const {
  const double d = u - u0;
  return std::log(u0) + d / u0 - c * d * d;
}

LinExpr add_log_minorant(sdp::ConeProblem& prob, const LinExpr& u, double u0) {
  const LogMinorant m = LogMinorant::at(u0);
  const int s = prob.add_var();
  const LinExpr d = u - LinExpr(u0);
  sdp::SymBlock B(2);
  B(0, 0) = LinExpr(1.0);
  B(0, 1) = d;
  B(1, 1) = LinExpr::variable(s);
  prob.add_lmi(B);
  prob.add_ineq(u - LinExpr(m.umin));
  LinExpr v(std::log(u0));
  v += d * (1.0 / u0);
  v -= LinExpr::variable(s, m.c);
  return v;
}

LinExpr qt_argument(const CVec& h_k, int k, double t, const std::vector<sdp::CVecVar>& w,
                    const std::vector<HermVar>& W, double sigma2) {
  LinExpr u(1.0 - t * t * sigma2);
  u += 2.0 * t * sdp::inner(h_k, w[static_cast<std::size_t>(k)]).re;
  for (int j = 0; j < static_cast<int>(W.size()); ++j) {
    if (j != k) u -= t * t * sdp::quad_form(h_k, W[static_cast<std::size_t>(j)], h_k).re;
  }
  return u;
}

double qt_argument_value(const CVec& h_k, int k, double t, const CMat& Wm, double sigma2) {
  const Eigen::RowVectorXcd g = h_k.adjoint() * Wm;
  double B = sigma2;
  for (int j = 0; j < Wm.cols(); ++j) {
    if (j != k) B += std::norm(g(j));
  }
  return 1.0 + 2.0 * t * g(k).real() - t * t * B;
}

double qt_optimal_t(const CVec& h_k, int k, const CMat& Wm, double sigma2) {
  const Eigen::RowVectorXcd g = h_k.adjoint() * Wm;
  double B = sigma2;
  for (int j = 0; j < Wm.cols(); ++j) {
    if (j != k) B += std::norm(g(j));
  }
  return g(k).real() / B;
}

LinExpr quad_transform_objective(sdp::ConeProblem& prob, const std::vector<CVec>& h, const std::vector<double>& t,
                                 double lambda, const std::vector<sdp::CVecVar>& w, const std::vector<HermVar>& W,
                                 const std::vector<double>& u0, const SystemConfig& cfg) {
  LinExpr obj;
  for (int k = 0; k < static_cast<int>(h.size()); ++k) {
    const std::size_t ks = static_cast<std::size_t>(k);
    const LinExpr u = qt_argument(h[ks], k, t[ks], w, W, cfg.sigma_c2);
    if (t[ks] == 0.0) continue;  // log2(1) = 0
    obj += add_log_minorant(prob, u, u0[ks]) * (1.0 / std::log(2.0));
  }
  LinExpr power;
  for (const auto& Wk : W) power += sdp::trace(Wk);
  obj -= lambda * (power * (1.0 / cfg.eps_pa) + LinExpr(cfg.P0));
  return obj;
}

SensingEpigraph add_epigraph_sensing_point(sdp::ConeProblem& prob, const std::vector<HermVar>& W,
                                           const std::vector<sdp::CVecVar>& w, const LinearizationPoint& lp,
                                           const std::vector<CVec>& h, double theta, double fisher_ref,
                                           double power_ref, const SystemConfig& cfg) {
  const double zn = lp.scalar("zeta");
  const double phin = lp.scalar("phi");
  if (!(phin > 0.0)) throw std::invalid_argument("epigraph_sensing_point: phi must be positive");
  SensingEpigraph g;
  g.fisher_ref = fisher_ref;
  g.power_ref = power_ref;
  g.omega = prob.add_var();
  g.t = prob.add_var();
  g.phi = prob.add_var();
  g.zeta = prob.add_var();

  // Consumed power <= power_ref * phi.
  LinExpr power;
  for (const auto& Wk : W) power += sdp::trace(Wk);
  prob.add_ineq(LinExpr::variable(g.phi, power_ref) - power * (1.0 / cfg.eps_pa) - LinExpr(cfg.P0));

  // zeta^2 <= t.
  sdp::SymBlock Z(2);
  Z(0, 0) = LinExpr::variable(g.t);
  Z(0, 1) = LinExpr::variable(g.zeta);
  Z(1, 1) = LinExpr(1.0);
  prob.add_lmi(Z);
  prob.add_ineq(LinExpr::variable(g.zeta));

  // omega <= 2 (zn/phin) zeta - (zn/phin)^2 phi.
  const double r = zn / phin;
  prob.add_ineq(LinExpr::variable(g.zeta, 2.0 * r) - LinExpr::variable(g.phi, r * r) - LinExpr::variable(g.omega));

  // F(R) >= fisher_ref * t.
  prob.add_lmi(crb_schur_block(W, theta, LinExpr::variable(g.t, fisher_ref)));

  const int K = static_cast<int>(h.size());
  for (int k = 0; k < K; ++k) {
    const std::size_t ks = static_cast<std::size_t>(k);
    const int psi = prob.add_var();
    g.psi.push_back(psi);
    // psi_k - sigma2 >= sum_{j != k} |h_k^H w_j|^2.
    if (K == 1) {
      prob.add_ineq(LinExpr::variable(psi) - LinExpr(cfg.sigma_c2));
    } else {
      HermBlock B(K);
      B.set(0, 0, LinExpr::variable(psi) - LinExpr(cfg.sigma_c2));
      int row = 1;
      for (int j = 0; j < K; ++j) {
        if (j == k) continue;
        B.set(0, row, sdp::inner(h[ks], w[static_cast<std::size_t>(j)]).conj());
        B.set(row, row, CLinExpr(cplx(1.0, 0.0)));
        ++row;
      }
      prob.add_lmi(B);
    }
    // gamma_k <= 2 (tn/psin) tau_k - (tn/psin)^2 psi_k.
    const double tn = lp.scalar("tau" + std::to_string(k));
    const double pn = lp.scalar("psi" + std::to_string(k));
    if (!(pn > 0.0)) throw std::invalid_argument("epigraph_sensing_point: psi must be positive");
    const double rk = tn / pn;
    const LinExpr tau = sdp::inner(h[ks], w[ks]).re;
    prob.add_ineq(tau * (2.0 * rk) - LinExpr::variable(psi, rk * rk) - LinExpr(cfg.gamma[ks]));
  }
  return g;
}

HermVar add_trace_inverse_epigraph(sdp::ConeProblem& prob, const std::vector<HermVar>& W, const HermVar& R) {
  const int M = R.n;
  const HermVar Y = prob.add_herm(M);
  HermBlock B(2 * M);
  for (int r = 0; r < M; ++r) {
    for (int c = r; c < M; ++c) {
      CLinExpr rx = R(r, c);
      for (const auto& Wk : W) rx += Wk(r, c);
      B.set(r, c, rx);
      B.set(M + r, M + c, Y(r, c));
    }
    B.set(r, M + r, CLinExpr(cplx(1.0, 0.0)));
  }
  prob.add_lmi(B);
  return Y;
}

void add_extended_crb(sdp::ConeProblem& prob, const HermVar& Y, const SystemConfig& cfg) {
  if (!cfg.tau_active()) return;
  prob.add_ineq(LinExpr(cfg.tau * cfg.L / (cfg.sigma_s2 * Y.n)) - sdp::trace(Y));
}

ExtendedFragments extended_target_fragments(sdp::ConeProblem& prob, const std::vector<HermVar>& W, const HermVar& R,
                                            const std::vector<CVec>& h, const std::vector<double>& b, double lambda,
                                            const LinearizationPoint& lp, const SystemConfig& cfg,
                                            ExtendedMode mode) {
  ExtendedFragments f;
  const int M = R.n;
  const int K = static_cast<int>(W.size());

  LinExpr power = sdp::trace(R);
  for (const auto& Wk : W) power += sdp::trace(Wk);
  prob.add_ineq(LinExpr(cfg.Pmax) - power);

  for (int k = 0; k < K; ++k) {
    const std::size_t ks = static_cast<std::size_t>(k);
    prob.add_ineq(sinr_sdr(W, &R, h[ks], k, cfg.gamma[ks], cfg.sigma_c2));
  }

  const bool need_Y = mode == ExtendedMode::sense || cfg.tau_active();
  if (need_Y) {
    f.Y = add_trace_inverse_epigraph(prob, W, R);
    f.has_Y = true;
    add_extended_crb(prob, f.Y, cfg);
  }

  if (mode == ExtendedMode::comm) {
    const double ln2 = std::log(2.0);
    for (int k = 0; k < K; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      LinExpr T(cfg.sigma_c2);
      T += sdp::quad_form(h[ks], R, h[ks]).re;
      LinExpr I = T;
      for (int j = 0; j < K; ++j) {
        const LinExpr q = sdp::quad_form(h[ks], W[static_cast<std::size_t>(j)], h[ks]).re;
        T += q;
        if (j != k) I += q;
      }
      const double T0 = lp.scalar("T" + std::to_string(k));
      f.objective += add_log_minorant(prob, T, T0) * (1.0 / ln2);
      f.objective += LinExpr((std::log(b[ks]) + 1.0) / ln2);
      f.objective -= I * (b[ks] / ln2);
    }
    f.objective -= lambda * (power * (1.0 / cfg.eps_pa) + LinExpr(cfg.P0));
  } else {
    const double pn = lp.scalar("p_e");
    const double qn = lp.scalar("q_e");
    f.p_e = prob.add_var();
    f.q_e = prob.add_var();
    prob.add_ineq(LinExpr::variable(f.p_e) -
                  (power * (1.0 / cfg.eps_pa) + LinExpr(cfg.P0)) * (cfg.sigma_s2 * M));
    prob.add_ineq(LinExpr::variable(f.q_e) - sdp::trace(f.Y));
    f.objective = -(LinExpr::variable(f.p_e, 1.0 / pn) + LinExpr::variable(f.q_e, 1.0 / qn));
  }
  return f;
}

}  // namespace isacee
