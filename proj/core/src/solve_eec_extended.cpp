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
#include <stdexcept>
#include <string>
#include <vector>

#include "isacee/constraints.hpp"
#include "isacee/recovery.hpp"
#include "isacee/solvers.hpp"
#include "solver_detail.hpp"

namespace isacee {

namespace detail {

double relaxed_sum_rate(const ExtendedPoint& x, const ChannelSet& ch, const SystemConfig& cfg) {
  const int K = static_cast<int>(x.W.size());
  double rate = 0.0;
  for (int k = 0; k < K; ++k) {
    const CVec& h = ch.h[static_cast<std::size_t>(k)];
    auto q = [&h](const CMat& X) { return (h.adjoint() * X * h)(0).real(); };
    double interf = cfg.sigma_c2 + q(x.R);
    for (int j = 0; j < K; ++j) {
      if (j != k) interf += q(x.W[static_cast<std::size_t>(j)]);
    }
    rate += std::log2(1.0 + std::max(0.0, q(x.W[static_cast<std::size_t>(k)])) / interf);
  }
  return rate;
}

double relaxed_power(const ExtendedPoint& x) {
  double p = x.R.trace().real();
  for (const auto& Wk : x.W) p += Wk.trace().real();
  return p;
}

CMat relaxed_covariance(const ExtendedPoint& x) {
  CMat Rx = x.R;
  for (const auto& Wk : x.W) Rx += Wk;
  return Rx;
}

std::optional<ExtendedPoint> extended_start(const SystemConfig& cfg, const ChannelSet& ch,
                                            const AlgorithmOptions& opts, BeamformerSolution& sol) {
  ExtendedPoint x;
  if (opts.init == InitStrategy::given) {
    if (!opts.initial_W) throw std::invalid_argument("InitStrategy::given needs initial_W");
    for (int k = 0; k < opts.initial_W->cols(); ++k) {
      x.W.push_back(opts.initial_W->col(k) * opts.initial_W->col(k).adjoint());
    }
    x.R = opts.initial_R ? *opts.initial_R : CMat::Zero(cfg.M, cfg.M);
    return x;
  }
  const SdrResult r = sdr_power_min(cfg, ch, TargetModel::extended, opts.sdp);
  if (r.status == sdp::Status::infeasible) {
    sol.outcome = Outcome::infeasible;
    sol.message = "infeasible scenario: power-minimization relaxation is infeasible";
    return std::nullopt;
  }
  if (r.W.empty()) {
    sol.outcome = Outcome::failed;
    sol.message = std::string("initialization SDP failed: ") + sdp::to_string(r.status);
    return std::nullopt;
  }
  x.W = r.W;
  x.R = *r.R;
  return x;
}

void finish_extended(const ExtendedPoint& x, const ChannelSet& ch, const SystemConfig& cfg, BeamformerSolution& sol) {
  // SDP iterates are PSD only to solver tolerance.
  std::vector<CMat> W;
  for (const auto& Wk : x.W) W.push_back(project_psd(Wk));
  const Recovery rec = recover_rank1(W, project_psd(x.R), ch, cfg, TargetModel::extended);
  sol.W = rec.W;
  sol.Rprobe = rec.Rprobe;
  fill_achieved(sol, ch, cfg, TargetModel::extended);
  sol.achieved["recovery_path"] = static_cast<double>(rec.report.path);
  sol.achieved["recovery_numerator_delta"] = rec.report.numerator_delta;
  sol.achieved["recovery_covariance_delta"] = rec.report.covariance_delta;
  sol.achieved["recovery_objective_delta"] = rec.report.objective_delta;
  double ratio = 0.0;
  for (double r : rec.report.post_ratio) ratio = std::max(ratio, r);
  sol.achieved["recovery_post_ratio"] = ratio;
}

}  // namespace detail

BeamformerSolution solve_eec_extended(const SystemConfig& cfg, const ChannelSet& ch, const AlgorithmOptions& opts) {
  cfg.validate();
  opts.validate();
  BeamformerSolution sol;
  const int K = static_cast<int>(ch.h.size());
  const int M = cfg.M;
  sol.W = CMat::Zero(M, K);
  auto start = detail::extended_start(cfg, ch, opts, sol);
  if (!start) return sol;
  detail::ExtendedPoint x = *start;

  OuterLoopState st;
  st.lambda = detail::relaxed_sum_rate(x, ch, cfg) / consumed_power(detail::relaxed_power(x), cfg);
  st.history.push_back(st.lambda);
  st.stop = StopReason::max_outer;
  for (st.i = 1; st.i <= opts.max_outer; ++st.i) {
    // b_k = 1 / I_k and T0_k = T_k at the current point.
    st.b.assign(static_cast<std::size_t>(K), 0.0);
    st.lp = LinearizationPoint{};
    for (int k = 0; k < K; ++k) {
      const CVec& h = ch.h[static_cast<std::size_t>(k)];
      auto q = [&h](const CMat& X) { return (h.adjoint() * X * h)(0).real(); };
      double I = cfg.sigma_c2 + q(x.R);
      for (int j = 0; j < K; ++j) {
        if (j != k) I += q(x.W[static_cast<std::size_t>(j)]);
      }
      st.b[static_cast<std::size_t>(k)] = 1.0 / I;
      st.lp.scalars_prev["T" + std::to_string(k)] = I + std::max(0.0, q(x.W[static_cast<std::size_t>(k)]));
    }
    sdp::ConeProblem prob;
    std::vector<sdp::HermVar> W;
    for (int k = 0; k < K; ++k) W.push_back(prob.add_herm_psd(M));
    const sdp::HermVar R = prob.add_herm_psd(M);
    const ExtendedFragments f =
        extended_target_fragments(prob, W, R, ch.h, st.b, st.lambda, st.lp, cfg, ExtendedMode::comm);
    prob.maximize(f.objective);
    const sdp::SolveReport rep = sdp::solve(prob, opts.sdp);

    IterationRecord rec;
    rec.sdp_iterations = rep.iterations;
    rec.lambda = st.lambda;
    if (rep.status == sdp::Status::infeasible) {
      sol.trace.push_back(rec);
      st.stop = StopReason::infeasible;
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
    const double f1 = detail::relaxed_sum_rate(cand, ch, cfg);
    const double f2 = consumed_power(detail::relaxed_power(cand), cfg);
    rec.objective = f1 / f2;
    rec.numerator = f1;
    rec.residual = f1 - st.lambda * f2;
    rec.violation = std::max(0.0, (detail::relaxed_power(cand) - cfg.Pmax) / cfg.Pmax);
    if (rec.objective < st.lambda) {
      // Round-off at the fixed point: keep the current iterate.
      rec.accepted = false;
      sol.trace.push_back(rec);
      st.stop = StopReason::residual;
      break;
    }
    rec.accepted = true;
    sol.trace.push_back(rec);
    x = cand;
    st.lambda = rec.objective;
    st.history.push_back(st.lambda);
    if (rec.residual < opts.delta * (1.0 + std::abs(f1))) {
      st.stop = StopReason::residual;
      break;
    }
  }
  sol.outer_iterations = std::min(st.i, opts.max_outer);
  sol.outcome = (st.stop == StopReason::residual) ? Outcome::converged
                : (st.stop == StopReason::solver_failure && sol.trace.size() <= 1) ? Outcome::failed
                                                                                 : Outcome::max_iterations;
  detail::finish_extended(x, ch, cfg, sol);
  sol.achieved["lambda"] = st.lambda;
  return sol;
}

}  // namespace isacee
