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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "isacee/constraints.hpp"
#include "isacee/recovery.hpp"
#include "solver_detail.hpp"

namespace isacee {

void AlgorithmOptions::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
  if (!(penalty.p_init > 0.0) || !(penalty.growth > 1.0)) throw std::invalid_argument("invalid penalty schedule");
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::residual: return "residual";
    case StopReason::objective_change: return "objective-change";
    case StopReason::stalled: return "stalled";
    case StopReason::max_outer: return "max-outer";
    case StopReason::infeasible: return "infeasible";
    case StopReason::solver_failure: return "solver-failure";
  }
  return "unknown";
}

double PointViolation::max() const { return std::max({sinr, power, crb}); }

PointViolation point_violation(const CMat& W, const ChannelSet& ch, const SystemConfig& cfg) {
  PointViolation v;
  for (int k = 0; k < static_cast<int>(ch.h.size()); ++k) {
    const double g = cfg.gamma[static_cast<std::size_t>(k)];
    const double s = sinr_k(W, ch.h[static_cast<std::size_t>(k)], k, cfg.sigma_c2);
    v.sinr = std::max(v.sinr, (g - s) / g);
  }
  v.power = std::max(0.0, (W.squaredNorm() - cfg.Pmax) / cfg.Pmax);
  if (cfg.crb_active()) {
    const double b = cfg.crb_bound();
    const double c = crb_point(W, ch.theta, ch.alpha, cfg);
    v.crb = std::isfinite(c) ? std::max(0.0, (c - b) / b) : std::numeric_limits<double>::infinity();
  }
  v.sinr = std::max(0.0, v.sinr);
  return v;
}

namespace detail {

namespace {

bool finite_vec(const RVec& y) { return y.size() > 0 && y.allFinite(); }

}  // namespace

SdrResult sdr_power_min(const SystemConfig& cfg, const ChannelSet& ch, TargetModel target,
                        const sdp::SolveOptions& opts) {
  const int M = cfg.M;
  const int K = static_cast<int>(ch.h.size());
  sdp::ConeProblem prob;
  std::vector<sdp::HermVar> W;
  for (int k = 0; k < K; ++k) W.push_back(prob.add_herm_psd(M));
  sdp::LinExpr power;
  for (const auto& Wk : W) power += sdp::trace(Wk);

  if (target == TargetModel::point) {
    prob.add_ineq(sdp::LinExpr(cfg.Pmax) - power);
    for (int k = 0; k < K; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      prob.add_ineq(sinr_sdr(W, nullptr, ch.h[ks], k, cfg.gamma[ks], cfg.sigma_c2));
    }
    add_crb_constraint(prob, W, ch.theta, ch.alpha, cfg);
    prob.maximize(-power);
  } else {
    const sdp::HermVar R = prob.add_herm_psd(M);
    prob.add_ineq(sdp::LinExpr(cfg.Pmax) - power - sdp::trace(R));
    for (int k = 0; k < K; ++k) {
      const std::size_t ks = static_cast<std::size_t>(k);
      prob.add_ineq(sinr_sdr(W, &R, ch.h[ks], k, cfg.gamma[ks], cfg.sigma_c2));
    }
    if (cfg.tau_active()) add_extended_crb(prob, add_trace_inverse_epigraph(prob, W, R), cfg);
    prob.maximize(-(power + sdp::trace(R)));
    W.push_back(R);
  }

  SdrResult out;
  const sdp::SolveReport rep = sdp::solve(prob, opts);
  out.status = rep.status;
  out.iterations = rep.iterations;
  out.message = rep.message;
  if (!rep.optimal()) return out;
  for (const auto& Wk : W) {
    CMat X = Wk.value(rep.y);
    X = 0.5 * (X + X.adjoint());
    out.W.push_back(X);
  }
  if (target == TargetModel::extended) {
    out.R = out.W.back();
    out.W.pop_back();
  }
  out.power = -rep.objective;
  return out;
}

CMat project_rank1(const std::vector<CMat>& W, const ChannelSet& ch, double fallback_power) {
  const int K = static_cast<int>(W.size());
  const int M = static_cast<int>(W.front().rows());
  CMat out(M, K);
  for (int k = 0; k < K; ++k) {
    const CVec& h = ch.h[static_cast<std::size_t>(k)];
    const CMat& Wk = W[static_cast<std::size_t>(k)];
    const double hWh = (h.adjoint() * Wk * h)(0).real();
    if (hWh > 1e-14 * h.squaredNorm() * std::max(std::abs(Wk.trace()), 1e-300)) {
      out.col(k) = Wk * h / std::sqrt(hWh);
    } else {
      out.col(k) = h * std::sqrt(fallback_power) / h.norm();
    }
  }
  align_phases(out, ch.h);
  return out;
}

CMat rzf_directions(const SystemConfig& cfg, const ChannelSet& ch) {
  const int K = static_cast<int>(ch.h.size());
  CMat H(cfg.M, K);
  for (int k = 0; k < K; ++k) H.col(k) = ch.h[static_cast<std::size_t>(k)];
  const CMat G = H.adjoint() * H + CMat::Identity(K, K) * (K * cfg.sigma_c2 / cfg.Pmax);
  CMat W = H * G.inverse();
  for (int k = 0; k < K; ++k) W.col(k) *= std::sqrt(cfg.Pmax / K) / W.col(k).norm();
  align_phases(W, ch.h);
  return W;
}

bool repair_crb(CMat& W, const ChannelSet& ch, const SystemConfig& cfg) {
  if (!cfg.crb_active()) return false;
  const double c = crb_point(W, ch.theta, ch.alpha, cfg);
  const double b = cfg.crb_bound();
  if (!std::isfinite(c) || c <= b) return false;
  const double s2 = (c / b) * (1.0 + 1e-9);
  if (s2 * W.squaredNorm() > cfg.Pmax) return false;
  W *= std::sqrt(s2);
  return true;
}

PointStep point_step(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp, const CMat& wbar,
                     double penalty, const sdp::SolveOptions& opts) {
  const int M = cfg.M;
  const int K = static_cast<int>(ch.h.size());
  sdp::ConeProblem prob;
  PointVars v;
  for (int k = 0; k < K; ++k) {
    v.W.push_back(prob.add_herm(M));
    v.w.push_back(prob.add_cvec(M));
    add_rank1_lemma(prob, v.W.back(), v.w.back());
    v.slack.push_back(add_penalized_cut(prob, v.W.back(), v.w.back(), wbar.col(k)));
  }
  sdp::LinExpr power;
  for (const auto& Wk : v.W) power += sdp::trace(Wk);
  prob.add_ineq(sdp::LinExpr(cfg.Pmax) - power);
  for (int k = 0; k < K; ++k) {
    const std::size_t ks = static_cast<std::size_t>(k);
    if (pp.sinr_sdr) prob.add_ineq(sinr_sdr(v.W, nullptr, ch.h[ks], k, cfg.gamma[ks], cfg.sigma_c2));
    if (pp.sinr_soc) add_sinr_soc(prob, v.w, ch.h[ks], k, cfg.gamma[ks], cfg.sigma_c2);
  }
  if (pp.crb_fixed) add_crb_constraint(prob, v.W, ch.theta, ch.alpha, cfg);
  sdp::LinExpr obj = pp.build(prob, v, wbar);
  for (int s : v.slack) obj -= sdp::LinExpr::variable(s, penalty);
  prob.maximize(obj);

  const sdp::SolveReport rep = sdp::solve(prob, opts);
  PointStep out;
  out.status = rep.status;
  out.sdp_iterations = rep.iterations;
  out.message = rep.message;
  out.usable = (rep.status == sdp::Status::optimal || rep.status == sdp::Status::max_iterations ||
                rep.status == sdp::Status::numerical_failure) &&
               finite_vec(rep.y);
  if (!out.usable) return out;
  out.w.resize(M, K);
  for (int k = 0; k < K; ++k) {
    out.w.col(k) = v.w[static_cast<std::size_t>(k)].value(rep.y);
    out.slack += std::max(0.0, rep.y(v.slack[static_cast<std::size_t>(k)]));
  }
  align_phases(out.w, ch.h);
  return out;
}

std::optional<CMat> warm_up(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp, const CMat& w0,
                            const AlgorithmOptions& opts, BeamformerSolution& sol) {
  CMat wbar = w0;
  double penalty = opts.penalty.p_init;
  double last_slack = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opts.penalty.rounds; ++r, penalty *= opts.penalty.growth) {
    PointStep st = point_step(cfg, ch, pp, wbar, penalty, opts.sdp);
    IterationRecord rec;
    rec.penalty = penalty;
    rec.sdp_iterations = st.sdp_iterations;
    rec.accepted = false;
    if (st.status == sdp::Status::infeasible) {
      sol.outcome = Outcome::infeasible;
      sol.message = "infeasible scenario: relaxed subproblem infeasible during warm-up";
      sol.trace.push_back(rec);
      return std::nullopt;
    }
    if (!st.usable) {
      sol.trace.push_back(rec);
      continue;
    }
    if (pp.repair) pp.repair(st.w);
    rec.slack = st.slack;
    rec.violation = pp.violation(st.w);
    rec.objective = pp.merit(st.w);
    last_slack = st.slack;
    sol.trace.push_back(rec);
    wbar = st.w;
    if (rec.violation <= opts.feas_tol) return wbar;
  }
  sol.outcome = Outcome::infeasible;
  sol.message = "infeasible scenario: penalty warm-up left slack " + std::to_string(last_slack) +
                " and violation " + std::to_string(pp.violation(wbar));
  return std::nullopt;
}

std::optional<CMat> point_start(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp,
                                const AlgorithmOptions& opts, BeamformerSolution& sol) {
  CMat w0;
  const int K = static_cast<int>(ch.h.size());
  switch (opts.init) {
    case InitStrategy::given:
      if (!opts.initial_W) throw std::invalid_argument("InitStrategy::given needs initial_W");
      w0 = *opts.initial_W;
      break;
    case InitStrategy::rzf:
      w0 = rzf_directions(cfg, ch);
      break;
    case InitStrategy::sdr: {
      const SdrResult r = sdr_power_min(cfg, ch, TargetModel::point, opts.sdp);
      if (r.status == sdp::Status::infeasible) {
        sol.outcome = Outcome::infeasible;
        sol.message = "infeasible scenario: power-minimization relaxation is infeasible";
        return std::nullopt;
      }
      if (r.W.empty()) {
        sol.outcome = Outcome::failed;
        sol.message = "initialization SDP failed: " + std::string(sdp::to_string(r.status));
        return std::nullopt;
      }
      w0 = project_rank1(r.W, ch, 0.1 * cfg.Pmax / K);
      // A near-zero start gives the quadratic transform no gradient; lift it to a usable power.
      const double p = w0.squaredNorm();
      const double floor = 0.1 * cfg.Pmax;
      if (p < floor) w0 *= std::sqrt(floor / std::max(p, 1e-300));
      break;
    }
  }
  if (w0.rows() != cfg.M || w0.cols() != K) throw std::invalid_argument("initial beamformer has the wrong shape");
  align_phases(w0, ch.h);
  if (pp.repair) pp.repair(w0);
  if (pp.violation(w0) <= opts.feas_tol) return w0;
  return warm_up(cfg, ch, pp, w0, opts, sol);
}

void run_point_loop(const SystemConfig& cfg, const ChannelSet& ch, const PointProblem& pp, const CMat& w0,
                    const AlgorithmOptions& opts, BeamformerSolution& sol, OuterLoopState& st) {
  CMat wbar = w0;
  double lambda = pp.merit(wbar);
  st.lambda = lambda;
  st.history.push_back(lambda);
  double penalty = opts.penalty.p_init;
  int rejects = 0;
  int small_changes = 0;
  st.stop = StopReason::max_outer;
  for (st.i = 1; st.i <= opts.max_outer; ++st.i) {
    const PointStep step = point_step(cfg, ch, pp, wbar, penalty, opts.sdp);
    IterationRecord rec;
    rec.penalty = penalty;
    rec.sdp_iterations = step.sdp_iterations;
    rec.lambda = lambda;
    if (!step.usable) {
      rec.accepted = false;
      sol.trace.push_back(rec);
      st.stop = StopReason::solver_failure;
      sol.message = std::string("subproblem failed: ") + sdp::to_string(step.status) + " " + step.message;
      break;
    }
    CMat cand = step.w;
    if (pp.repair) pp.repair(cand);
    const double viol = pp.violation(cand);
    const double m = pp.merit(cand);
    rec.slack = step.slack;
    rec.violation = viol;
    rec.objective = m;
    double f1 = m;
    if (pp.dinkelbach) {
      const auto [num, den] = pp.fractions(cand);
      f1 = num;
      rec.numerator = num;
      rec.residual = num - lambda * den;
    } else {
      rec.residual = m - lambda;
    }
    const bool feasible = viol <= opts.feas_tol;
    if (feasible && m >= lambda) {
      rec.accepted = true;
      sol.trace.push_back(rec);
      const double rel = (m - lambda) / std::max(std::abs(m), 1e-300);
      wbar = cand;
      lambda = m;
      st.history.push_back(m);
      penalty = std::max(penalty / 2.0, opts.penalty.p_min);
      rejects = 0;
      if (pp.dinkelbach) {
        if (rec.residual < opts.delta * (1.0 + std::abs(f1))) {
          st.stop = StopReason::residual;
          break;
        }
        small_changes = rel < opts.delta / 10.0 ? small_changes + 1 : 0;
        if (small_changes >= 3) {
          st.stop = StopReason::objective_change;
          break;
        }
      } else if (rel < opts.delta) {
        st.stop = StopReason::objective_change;
        break;
      }
      continue;
    }
    rec.accepted = false;
    sol.trace.push_back(rec);
    if (feasible) {
      // A feasible candidate below the current value only arises from round-off at a fixed point.
      st.stop = pp.dinkelbach ? StopReason::residual : StopReason::objective_change;
      break;
    }
    penalty *= opts.penalty.growth;
    if (++rejects >= opts.penalty.max_rejects) {
      st.stop = StopReason::stalled;
      break;
    }
  }
  st.lambda = lambda;
  sol.W = wbar;
  sol.outer_iterations = std::min(st.i, opts.max_outer);
  switch (st.stop) {
    case StopReason::residual:
    case StopReason::objective_change:
      sol.outcome = Outcome::converged;
      break;
    case StopReason::stalled:
      sol.outcome = Outcome::converged;
      sol.message = "stopped: no feasible improving candidate after " + std::to_string(rejects) + " penalty increases";
      break;
    case StopReason::solver_failure:
      sol.outcome = sol.trace.size() > 1 ? Outcome::max_iterations : Outcome::failed;
      break;
    default:
      sol.outcome = Outcome::max_iterations;
      break;
  }
}

void fill_achieved(BeamformerSolution& sol, const ChannelSet& ch, const SystemConfig& cfg, TargetModel target) {
  const CMat* rp = sol.Rprobe ? &*sol.Rprobe : nullptr;
  const MetricReport m = evaluate(sol.W, rp, ch, cfg, target);
  sol.achieved["ee_c"] = m.ee_c;
  sol.achieved["ee_s"] = m.ee_s;
  sol.achieved["crb"] = m.crb;
  sol.achieved["sum_rate"] = m.sum_rate;
  sol.achieved["power"] = m.P_total;
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.sinr.size(); ++k) {
    sol.achieved["sinr" + std::to_string(k)] = m.sinr[k];
    margin = std::min(margin, m.sinr[k] / cfg.gamma[k]);
  }
  sol.achieved["min_sinr_ratio"] = margin;
  int sdp_iters = 0;
  for (const auto& r : sol.trace) sdp_iters += r.sdp_iterations;
  sol.achieved["sdp_iterations"] = sdp_iters;
}

}  // namespace detail
}  // namespace isacee
