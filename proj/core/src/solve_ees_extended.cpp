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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "isacee/constraints.hpp"
#include "isacee/solvers.hpp"
#include "solver_detail.hpp"

namespace isacee {

namespace {

/// tr(R^{-1}); +inf when R is not positive definite.
double trace_inverse(const CMat& R) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (R + R.adjoint()), Eigen::EigenvaluesOnly);
  const RVec ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) return std::numeric_limits<double>::infinity();
  return ev.cwiseInverse().sum();
}

}  // namespace

BeamformerSolution solve_ees_extended(const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& opts) {
  cfg.validate();
  opts.validate();
  BeamformerSolution sol;
  const int K = static_cast<int>(ch.h.size());
  const int M = cfg.M;
  sol.W = CMat::Zero(M, K);

  // p = sigma_s2 M (P / eps + P0), q = tr(R_x^{-1}); EE_S = 1 / (p q).
  auto p_of = [&cfg, M](double power) { return cfg.sigma_s2 * M * consumed_power(power, cfg); };
  OuterLoopState st;
  double pn = p_of(cfg.Pmax);
  double qn = M * M / cfg.Pmax;  // isotropic (Pmax / M) I
  if (opts.init == InitStrategy::given && opts.initial_W) {
    detail::ExtendedPoint x0;
    for (int k = 0; k < opts.initial_W->cols(); ++k) x0.W.push_back(opts.initial_W->col(k) * opts.initial_W->col(k).adjoint());
    x0.R = opts.initial_R ? *opts.initial_R : CMat::Zero(M, M);
    const double q0 = trace_inverse(detail::relaxed_covariance(x0));
    if (std::isfinite(q0)) {
      pn = p_of(detail::relaxed_power(x0));
      qn = q0;
    }
  }
  double best = -std::numeric_limits<double>::infinity();
  std::optional<detail::ExtendedPoint> x;
  st.stop = StopReason::max_outer;
  for (st.i = 1; st.i <= opts.max_outer; ++st.i) {
    st.lp = LinearizationPoint{};
    st.lp.scalars_prev["p_e"] = pn;
    st.lp.scalars_prev["q_e"] = qn;
    sdp::ConeProblem prob;
    std::vector<sdp::HermVar> W;
    for (int k = 0; k < K; ++k) W.push_back(prob.add_herm_psd(M));
    const sdp::HermVar R = prob.add_herm_psd(M);
    const std::vector<double> b(static_cast<std::size_t>(K), 1.0);
    const ExtendedFragments f = extended_target_fragments(prob, W, R, ch.h, b, 0.0, st.lp, cfg, ExtendedMode::sense);
    prob.maximize(f.objective);
    const sdp::SolveReport rep = sdp::solve(prob, opts.sdp);

    IterationRecord rec;
    rec.sdp_iterations = rep.iterations;
    if (rep.status == sdp::Status::infeasible) {
      sol.trace.push_back(rec);
      sol.outcome = Outcome::infeasible;
      sol.message = "infeasible scenario: subproblem infeasible";
      return sol;
    }
    if (!rep.y.allFinite() || rep.y.size() == 0 || rep.status == sdp::Status::unbounded) {
      sol.trace.push_back(rec);
      st.stop = StopReason::solver_failure;
      sol.message = std::string("subproblem failed: ") + sdp::to_string(rep.status);
      break;
    }
    detail::ExtendedPoint cand;
    for (const auto& Wk : W) {
      const CMat X = Wk.value(rep.y);
      cand.W.push_back(0.5 * (X + X.adjoint()));
    }
    cand.R = R.value(rep.y);
    cand.R = 0.5 * (cand.R + cand.R.adjoint());
    const double p = p_of(detail::relaxed_power(cand));
    const double q = trace_inverse(detail::relaxed_covariance(cand));
    const double ees = 1.0 / (p * q);
    rec.objective = ees;
    rec.lambda = std::log(p) + std::log(q);
    rec.residual = rec.lambda - std::log(pn) - std::log(qn);
    if (x && !(ees >= best)) {
      rec.accepted = false;
      sol.trace.push_back(rec);
      st.stop = StopReason::objective_change;
      break;
    }
    rec.accepted = true;
    sol.trace.push_back(rec);
    const double rel = x ? (ees - best) / ees : std::numeric_limits<double>::infinity();
    x = cand;
    best = ees;
    st.history.push_back(ees);
    pn = p;
    qn = q;
    if (rel < opts.delta) {
      st.stop = StopReason::objective_change;
      break;
    }
  }
  sol.outer_iterations = std::min(st.i, opts.max_outer);
  if (!x) {
    sol.outcome = Outcome::failed;
    return sol;
  }
  sol.outcome = st.stop == StopReason::objective_change ? Outcome::converged : Outcome::max_iterations;
  detail::finish_extended(*x, ch, cfg, sol);
  sol.achieved["p_e"] = pn;
  sol.achieved["q_e"] = qn;
  return sol;
}

}  // namespace isacee
