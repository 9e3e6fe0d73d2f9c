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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "isacee/scenario.hpp"
#include "isacee/sdp.hpp"
#include "isacee/types.hpp"

namespace isacee {

/// Previous iterate around which SCA cuts are built.
struct LinearizationPoint {
  std::vector<CVec> w_prev;
  std::map<std::string, double> scalars_prev;  // zeta, phi, tau_k, psi_k, p_e, q_e

  double scalar(const std::string& key) const;
};

/// sigma_s2 / (2 L |alpha|^2): CRB = crb_scale / F.
double crb_scale(const SystemConfig& cfg, cplx alpha);

/// Fisher floor c * crb_scale for the fixed bound CRB <= rho^2 (c = 1/rho^2).
double fixed_fisher_floor(const SystemConfig& cfg, cplx alpha);

/// 2x2 Hermitian block [[F11 - floor, sqrt(M) da^H R a], [., a^H R a]] with R = sum(covs).
/// PSD iff F(R) >= floor, i.e. CRB(R) <= crb_scale / floor.
sdp::HermBlock crb_schur_block(const std::vector<sdp::HermVar>& covs, double theta, const sdp::LinExpr& floor);

/// Numeric counterpart of crb_schur_block.
CMat crb_schur_matrix(const CMat& R, double theta, double floor);

/// Adds the CRB <= rho^2 LMI when the bound is active.
void add_crb_constraint(sdp::ConeProblem& prob, const std::vector<sdp::HermVar>& covs, double theta, cplx alpha,
                        const SystemConfig& cfg);

/// SDR SINR constraint, returned as an expression that must be >= 0:
/// tr(Q_k W_k) - gamma (sum_{j!=k} tr(Q_k W_j) + tr(Q_k R) + sigma2).
sdp::LinExpr sinr_sdr(const std::vector<sdp::HermVar>& W, const sdp::HermVar* R, const CVec& h_k, int k,
                      double gamma, double sigma2);

double sinr_sdr_value(const std::vector<CMat>& W, const CMat* R, const CVec& h_k, int k, double gamma,
                      double sigma2);

/// Re(h_k^H w_k) >= sqrt(gamma) || (h_k^H w_j)_{j != k}, sigma ||, as an arrow LMI.
/// Exact SINR >= gamma at phase-aligned beamformers.
void add_sinr_soc(sdp::ConeProblem& prob, const std::vector<sdp::CVecVar>& w, const CVec& h_k, int k, double gamma,
                  double sigma2);

/// [[W, w], [w^H, 1]] PSD (implies W PSD).
void add_rank1_lemma(sdp::ConeProblem& prob, const sdp::HermVar& W, const sdp::CVecVar& w);

/// tr(W) + ||wbar||^2 - 2 Re(wbar^H w); must be <= 0 (or <= slack).
sdp::LinExpr rank1_cut(const sdp::HermVar& W, const sdp::CVecVar& w, const CVec& wbar);
double rank1_cut_value(const CMat& W, const CVec& w, const CVec& wbar);

/// Softened cut: cut <= s, s >= 0. Returns the slack variable id.
int add_penalized_cut(sdp::ConeProblem& prob, const sdp::HermVar& W, const sdp::CVecVar& w, const CVec& wbar);

// Scalar SCA surrogates. Each bounds its target function from the conservative side
// and is tight at the expansion point.

/// 2 Re(wbar^H w) - ||wbar||^2 <= ||w||^2.
double sq_norm_minorant(const CVec& w, const CVec& wbar);
/// 2 (zn/phin) z - (zn/phin)^2 phi <= z^2 / phi for phi > 0.
double quad_over_lin_minorant(double z, double phi, double zn, double phin);
/// ln(pn) + (p - pn)/pn >= ln(p).
double log_majorant(double p, double pn);

/// ln u >= ln u0 + (u - u0)/u0 - c (u - u0)^2 on u >= umin = u0/2.
struct LogMinorant {
  double u0 = 1.0;
  double umin = 0.5;
  double c = 0.0;

  static LogMinorant at(double u0);
  double value(double u) const;
};

/// Adds s >= (u - u0)^2 and u >= umin; returns the minorant of ln(u) (nats).
sdp::LinExpr add_log_minorant(sdp::ConeProblem& prob, const sdp::LinExpr& u, double u0);

/// Quadratic-transform argument u_k = 1 + 2 t Re(h_k^H w_k) - t^2 (sigma2 + sum_{j!=k} tr(Q_k W_j)).
sdp::LinExpr qt_argument(const CVec& h_k, int k, double t, const std::vector<sdp::CVecVar>& w,
                         const std::vector<sdp::HermVar>& W, double sigma2);
/// Same at a rank-one point (W_j = w_j w_j^H), columns of Wm are w_j.
double qt_argument_value(const CVec& h_k, int k, double t, const CMat& Wm, double sigma2);
/// t_k = Re(h_k^H w_k) / B_k; reproduces 1 + SINR_k in qt_argument_value.
double qt_optimal_t(const CVec& h_k, int k, const CMat& Wm, double sigma2);

/// Concave surrogate of sum_k log2(u_k) - lambda (sum tr W_k / eps + P0) with log minorants
/// built at u0 = 1 + SINR_k of the linearization point.
sdp::LinExpr quad_transform_objective(sdp::ConeProblem& prob, const std::vector<CVec>& h,
                                      const std::vector<double>& t, double lambda,
                                      const std::vector<sdp::CVecVar>& w, const std::vector<sdp::HermVar>& W,
                                      const std::vector<double>& u0, const SystemConfig& cfg);

/// Handles of the sensing-centric epigraph chain.
struct SensingEpigraph {
  int omega = -1;
  int t = -1;
  int phi = -1;
  int zeta = -1;
  std::vector<int> psi;
  double fisher_ref = 1.0;  // t is in units of this Fisher value
  double power_ref = 1.0;   // phi is in units of this consumed power
};

/// omega <= zeta^2/phi (SCA), zeta^2 <= t, F(R) >= fisher_ref * t, consumed power <= power_ref * phi,
/// gamma_k <= tau_k^2/psi_k (SCA) with tau_k = Re(h_k^H w_k), psi_k >= interference + noise.
/// The linearization point supplies zeta, phi, tau_k, psi_k (keys "zeta", "phi", "tau<k>", "psi<k>").
SensingEpigraph add_epigraph_sensing_point(sdp::ConeProblem& prob, const std::vector<sdp::HermVar>& W,
                                           const std::vector<sdp::CVecVar>& w, const LinearizationPoint& lp,
                                           const std::vector<CVec>& h, double theta, double fisher_ref,
                                           double power_ref, const SystemConfig& cfg);

/// [[sum_k W_k + R, I], [I, Y]] PSD, hence tr Y >= tr(R_x^{-1}). Returns Y.
sdp::HermVar add_trace_inverse_epigraph(sdp::ConeProblem& prob, const std::vector<sdp::HermVar>& W,
                                        const sdp::HermVar& R);

/// tr Y <= tau L / (sigma_s2 M), i.e. the extended-target CRB bound through Y.
void add_extended_crb(sdp::ConeProblem& prob, const sdp::HermVar& Y, const SystemConfig& cfg);

enum class ExtendedMode { comm, sense };

struct ExtendedFragments {
  sdp::LinExpr objective;  // to be maximized
  sdp::HermVar Y;          // tr-inverse epigraph variable (if present)
  bool has_Y = false;
  int p_e = -1;
  int q_e = -1;
};

/// Extended-target fragments on (W_k, R).
/// comm: objective sum_k [lnmin(T_k) + ln b_k - b_k I_k + 1]/ln2 - lambda (P/eps + P0), T_k built with
///       minorants at T0 (keys "T<k>" of lp), constraints power, CRB (via Y), SINR.
/// sense: p_e >= sigma_s2 M (P/eps + P0), q_e >= tr Y, objective -(p_e/p_n + q_e/q_n), plus the same
///        constraints (keys "p_e", "q_e").
ExtendedFragments extended_target_fragments(sdp::ConeProblem& prob, const std::vector<sdp::HermVar>& W,
                                            const sdp::HermVar& R, const std::vector<CVec>& h,
                                            const std::vector<double>& b, double lambda,
                                            const LinearizationPoint& lp, const SystemConfig& cfg,
                                            ExtendedMode mode);

}  // namespace isacee
