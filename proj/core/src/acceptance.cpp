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

#include "isacee/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "isacee/constraints.hpp"
#include "isacee/experiment.hpp"
#include "isacee/oracle.hpp"
#include "isacee/recovery.hpp"
#include "isacee/scenario.hpp"
#include "isacee/sdp.hpp"
#include "isacee/solvers.hpp"

namespace isacee {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

SystemConfig desk(int seed, const RawConfig& extra = {}) {
  RawConfig raw = merge(preset("desk"), extra);
  raw["seed"] = std::to_string(seed);
  return make_config(raw);
}

CVec random_cvec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = {N(rng), N(rng)};
  return v;
}

CriterionResult crb_correctness() {
  CriterionResult r{1, "CRB matches the finite-difference Fisher oracle", false, "", 0.0};
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> U(0.2, kPi - 0.2);
  double worst = 0.0;
  bool stable = true;
  for (int i = 0; i < 50; ++i) {
    const int M = 2 + i % 3;
    SystemConfig cfg = desk(1, {{"M", std::to_string(M)}, {"K", "1"}});
    CMat B(M, M);
    for (int c = 0; c < M; ++c) B.col(c) = random_cvec(rng, M);
    const CMat Rx = B * B.adjoint() / M + 0.1 * CMat::Identity(M, M);
    const double theta = U(rng);
    const CVec a = random_cvec(rng, 1);
    const cplx alpha = a(0);
    const double crb = crb_point_cov(Rx, theta, alpha, cfg);
    const oracle::FisherReport fr = oracle::fisher_fd(Rx, theta, alpha, cfg);
    stable = stable && fr.stable;
    worst = std::max(worst, std::abs(crb * fr.J - 1.0));
  }
  r.pass = worst <= 1e-4 && stable;
  r.detail = fmt("max relative gap %.3g over 50 instances", worst) + (stable ? "" : ", Richardson unstable");
  return r;
}

struct LambdaCheck {
  double drop = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int failures = 0;
};

void check_lambda(const BeamformerSolution& s, double delta, LambdaCheck& c) {
  if (!s.ok() || s.trace.empty()) {
    ++c.failures;
    return;
  }
  for (std::size_t i = 1; i < s.trace.size(); ++i) {
    c.drop = std::max(c.drop, s.trace[i - 1].lambda - s.trace[i].lambda);
  }
  const IterationRecord& last = s.trace.back();
  c.drop = std::max(c.drop, last.lambda - s.achieved.at("lambda"));
  c.residual = std::max(c.residual, last.residual / (delta * (1.0 + std::abs(last.numerator))));
  c.iterations = std::max(c.iterations, s.outer_iterations);
}

CriterionResult dinkelbach_monotonicity() {
  CriterionResult r{2, "Dinkelbach ratios are non-decreasing and converge", false, "", 0.0};
  AlgorithmOptions o;
  LambdaCheck point, ext, pareto;
  for (int s = 1; s <= 20; ++s) {
    const SystemConfig cfg = desk(s);
    const ChannelSet ch = draw_channels(cfg);
    check_lambda(solve_eec_point(cfg, ch, o), o.delta, point);
    const SystemConfig cx = desk(s, {{"tau", "5"}});
    check_lambda(solve_eec_extended(cx, draw_channels(cx), o), o.delta, ext);
    const BeamformerSolution best = solve_ees_point(cfg, ch, o);
    if (!best.ok()) {
      ++pareto.failures;
      continue;
    }
    ParetoOptions po;
    po.algo = o;
    po.start = best.W;
    const auto pts = solve_pareto_point(cfg, ch, {0.5 * best.achieved.at("ee_s")}, po);
    check_lambda(pts.front().solution, o.delta, pareto);
  }
  bool ok = true;
  std::ostringstream d;
  for (const auto& [name, c] : {std::pair{"eec-point", point}, {"eec-extended", ext}, {"pareto", pareto}}) {
    const bool pass = c.drop <= 1e-9 && c.residual <= 1.0 && c.iterations <= o.max_outer && c.failures == 0;
    ok = ok && pass;
    d << name << ": drop " << c.drop << ", residual/tol " << c.residual << ", iters " << c.iterations
      << ", failures " << c.failures << "; ";
  }
  r.pass = ok;
  r.detail = d.str();
  return r;
}

// Largest (surrogate - target) / (1 + |target|) over samples, plus the gap at the expansion point.
struct CutStats {
  double under = 0.0;
  double tight = 0.0;
};

CriterionResult sca_validity() {
  CriterionResult r{3, "SCA surrogates bound their targets and are tight at the expansion point", false, "", 0.0};
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto pos = [&](double lo, double hi) { return lo * std::pow(hi / lo, U(rng)); };
  const int n = 10000;
  auto rel = [](double surrogate, double target) { return (surrogate - target) / (1.0 + std::abs(target)); };
  CutStats rank1, zeta, tau, logm, logmin;
  for (int i = 0; i < n; ++i) {
    const int M = 1 + i % 8;
    const CVec w = random_cvec(rng, M) * pos(1e-2, 1e1), wbar = random_cvec(rng, M) * pos(1e-2, 1e1);
    rank1.under = std::max(rank1.under, rel(sq_norm_minorant(w, wbar), w.squaredNorm()));
    rank1.tight = std::max(rank1.tight, std::abs(rel(sq_norm_minorant(wbar, wbar), wbar.squaredNorm())));
    const CMat W = w * w.adjoint();
    // On W = w w^H the cut value is ||w - wbar||^2, so the restriction never excludes a rank-one point.
    rank1.under = std::max(rank1.under, -rank1_cut_value(W, w, wbar) / (1.0 + W.norm()));

    const double z = pos(1e-2, 1e2), phi = pos(1e-2, 1e2), zn = pos(1e-2, 1e2), phin = pos(1e-2, 1e2);
    zeta.under = std::max(zeta.under, rel(quad_over_lin_minorant(z, phi, zn, phin), z * z / phi));
    zeta.tight = std::max(zeta.tight, std::abs(rel(quad_over_lin_minorant(zn, phin, zn, phin), zn * zn / phin)));

    const double t = pos(1e-3, 1e3), psi = pos(1e-4, 1e2), tn = pos(1e-3, 1e3), psin = pos(1e-4, 1e2);
    tau.under = std::max(tau.under, rel(quad_over_lin_minorant(t, psi, tn, psin), t * t / psi));
    tau.tight = std::max(tau.tight, std::abs(rel(quad_over_lin_minorant(tn, psin, tn, psin), tn * tn / psin)));

    const double p = pos(1e-3, 1e3), pn = pos(1e-3, 1e3);
    logm.under = std::max(logm.under, rel(std::log(p), log_majorant(p, pn)));
    logm.tight = std::max(logm.tight, std::abs(rel(log_majorant(pn, pn), std::log(pn))));

    const LogMinorant lm = LogMinorant::at(pos(1e-2, 1e2));
    const double u = lm.umin * pos(1.0, 1e3);
    logmin.under = std::max(logmin.under, rel(lm.value(u), std::log(u)));
    logmin.tight = std::max(logmin.tight, std::abs(rel(lm.value(lm.u0), std::log(lm.u0))));
  }
  const double tol = 1e-12;
  bool ok = true;
  std::ostringstream d;
  d.precision(3);
  for (const auto& [name, c] : {std::pair{"rank-one", rank1}, {"zeta/phi", zeta}, {"tau/psi", tau},
                                {"log majorant", logm}, {"log minorant", logmin}}) {
    ok = ok && c.under <= tol && c.tight <= tol;
    d << name << " " << c.under << "/" << c.tight << "; ";
  }
  r.pass = ok;
  r.detail = "max bound violation/tightness gap: " + d.str();
  return r;
}

CriterionResult rank1_recovery() {
  CriterionResult r{4, "Rank-one recovery preserves numerators and covariance", false, "", 0.0};
  double num = 0.0, cov = 0.0, ratio = 0.0, audit = 0.0;
  int failures = 0, higher_rank = 0;
  std::string worst_entry = "none";
  for (int s = 1; s <= 20; ++s) {
    const SystemConfig cfg = desk(s, {{"tau", "5"}});
    const ChannelSet ch = draw_channels(cfg);
    sdp::ConeProblem prob;
    std::vector<sdp::HermVar> W;
    for (int k = 0; k < cfg.K; ++k) W.push_back(prob.add_herm_psd(cfg.M));
    const sdp::HermVar R = prob.add_herm_psd(cfg.M);
    sdp::LinExpr power = sdp::trace(R);
    for (const auto& Wk : W) power += sdp::trace(Wk);
    prob.add_ineq(sdp::LinExpr(cfg.Pmax) - power);
    for (int k = 0; k < cfg.K; ++k) {
      prob.add_ineq(sinr_sdr(W, &R, ch.h[static_cast<std::size_t>(k)], k, cfg.gamma[static_cast<std::size_t>(k)],
                             cfg.sigma_c2));
    }
    add_extended_crb(prob, add_trace_inverse_epigraph(prob, W, R), cfg);
    prob.maximize(-power);
    const sdp::SolveReport rep = sdp::solve(prob);
    if (!rep.optimal()) {
      ++failures;
      continue;
    }
    std::vector<CMat> Wv;
    // The SDR output is the PSD projection of the solver iterate.
    const CMat Rv = project_psd(R.value(rep.y));
    CMat total = Rv;
    for (const auto& Wk : W) {
      Wv.push_back(project_psd(Wk.value(rep.y)));
      total += Wv.back();
      if (numeric_rank(Wv.back()) > 1) ++higher_rank;
    }
    Recovery rec;
    try {
      rec = recover_rank1(Wv, Rv, ch, cfg, TargetModel::extended);
    } catch (const std::exception&) {
      ++failures;
      continue;
    }
    CMat after = rec.Rprobe.value_or(CMat::Zero(cfg.M, cfg.M));
    for (int k = 0; k < cfg.K; ++k) {
      const CVec& h = ch.h[static_cast<std::size_t>(k)];
      const double before_num = (h.adjoint() * Wv[static_cast<std::size_t>(k)] * h)(0).real();
      const double after_num = std::norm(h.dot(rec.W.col(k)));
      num = std::max(num, std::abs(after_num - before_num) / std::max(1.0, before_num));
      after += rec.W.col(k) * rec.W.col(k).adjoint();
    }
    cov = std::max(cov, (after - total).norm() / std::max(1.0, total.norm()));
    for (double q : rec.report.post_ratio) ratio = std::max(ratio, q);
    BeamformerSolution sol;
    sol.W = rec.W;
    sol.Rprobe = rec.Rprobe;
    oracle::AuditSpec spec;
    spec.target = TargetModel::extended;
    const oracle::AuditReport ar = oracle::audit_solution(sol, cfg, ch, spec);
    if (ar.max_relative > audit) {
      audit = ar.max_relative;
      for (const auto& [key, e] : ar.entries) {
        if (e.relative == ar.max_relative) worst_entry = key;
      }
    }
    if (!ar.pass) ++failures;
  }
  r.pass = failures == 0 && num <= 1e-8 && cov <= 1e-8 && ratio <= 1e-6 && audit <= 1e-6;
  std::ostringstream d;
  d.precision(3);
  d << "numerator " << num << ", covariance " << cov << ", eigen-ratio " << ratio << ", audit " << audit << " (" << worst_entry << ")"
    << ", inputs with rank > 1: " << higher_rank << ", failures " << failures;
  r.detail = d.str();
  return r;
}

CriterionResult grid_crosscheck() {
  CriterionResult r{5, "Single-user EE_C matches the MRT power-grid oracle", false, "", 0.0};
  double worst = 0.0;
  int failures = 0;
  for (int s = 1; s <= 10; ++s) {
    const SystemConfig cfg = desk(s, {{"M", "4"}, {"K", "1"}, {"rho", "inf rad"}, {"gamma", "0 dB"}});
    const ChannelSet ch = draw_channels(cfg);
    const BeamformerSolution sol = solve_eec_point(cfg, ch);
    const oracle::GridResult g = oracle::grid_search_ee(cfg, ch, 10000);
    if (!sol.ok() || !(g.ee > 0.0)) {
      ++failures;
      continue;
    }
    worst = std::max(worst, std::abs(sol.achieved.at("ee_c") - g.ee) / g.ee);
  }
  r.pass = failures == 0 && worst <= 5e-3;
  r.detail = fmt("max relative EE gap %.3g over 10 instances, failures %g", worst, failures);
  return r;
}

double analytic_sdp_error() {
  double err = 0.0;
  auto sym2 = [](sdp::ConeProblem& p) {
    const int v = p.add_vars(3);
    sdp::SymBlock X(2);
    X(0, 0) = sdp::LinExpr::variable(v);
    X(0, 1) = sdp::LinExpr::variable(v + 1);
    X(1, 1) = sdp::LinExpr::variable(v + 2);
    p.add_lmi(X);
    return v;
  };
  {
    sdp::ConeProblem p;
    const int v = sym2(p);
    const sdp::LinExpr tr = sdp::LinExpr::variable(v) + sdp::LinExpr::variable(v + 2);
    p.add_ineq(1.0 - tr);
    p.maximize(tr);
    const auto rep = sdp::solve(p);
    err = std::max(err, rep.optimal() ? std::abs(rep.objective - 1.0) : 1.0);
  }
  {
    sdp::ConeProblem p;
    const int t = p.add_var();
    sdp::SymBlock B(2);
    B(0, 0) = sdp::LinExpr::variable(t);
    B(0, 1) = sdp::LinExpr(1.0);
    B(1, 1) = sdp::LinExpr::variable(t);
    p.add_lmi(B);
    p.maximize(-sdp::LinExpr::variable(t));
    const auto rep = sdp::solve(p);
    err = std::max(err, rep.optimal() ? std::abs(rep.y(t) - 1.0) : 1.0);
  }
  {
    // min tr(CX) over the spectraplex equals lambda_min(C) = (5 - sqrt 5) / 2.
    sdp::ConeProblem p;
    const int v = sym2(p);
    p.add_eq(sdp::LinExpr::variable(v) + sdp::LinExpr::variable(v + 2) - 1.0);
    p.maximize(-(sdp::LinExpr::variable(v, 2.0) + sdp::LinExpr::variable(v + 1, 2.0) +
                 sdp::LinExpr::variable(v + 2, 3.0)));
    const auto rep = sdp::solve(p);
    err = std::max(err, rep.optimal() ? std::abs(-rep.objective - (5.0 - std::sqrt(5.0)) / 2.0) : 1.0);
  }
  return err;
}

CriterionResult sdp_core(const sdp::SolveStats& st) {
  CriterionResult r{6, "SDP core KKT residuals and analytic optima", false, "", 0.0};
  const double err = analytic_sdp_error();
  const double kkt = std::max({st.max_primal, st.max_dual, st.max_gap});
  r.pass = kkt <= 1e-7 && err <= 1e-8;
  std::ostringstream d;
  d.precision(3);
  d << st.optimal << " optimal of " << st.solves << " solves, max KKT residual " << kkt
    << " (primal " << st.max_primal << ", dual " << st.max_dual << ", gap " << st.max_gap
    << "); analytic error " << err;
  r.detail = d.str();
  return r;
}

std::vector<double> column(const SweepResult& s, bool ees) {
  std::vector<double> v;
  for (const auto& row : s.rows) v.push_back(ees ? row.mean_ee_s : row.mean_ee_c);
  return v;
}

// Largest relative step against the required direction (+1 non-decreasing, -1 non-increasing).
double trend_violation(const std::vector<double>& v, int dir) {
  double worst = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double step = dir * (v[i] - v[i - 1]);
    worst = std::max(worst, -step / std::max(std::abs(v[i - 1]), 1e-300));
  }
  return worst;
}

std::string series(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(5);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

CriterionResult trends(const AcceptanceOptions& o) {
  CriterionResult r{7, "Sweep trends at desk scale", false, "", 0.0};
  SweepSpec base;
  base.base = preset("desk");
  base.trials = o.trend_trials;
  base.threads = o.threads;
  std::ostringstream d;
  bool ok = true;
  auto timed = [&](SweepSpec s, double& sec) {
    const auto t0 = std::chrono::steady_clock::now();
    SweepResult res = run_sweep(s);
    sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  };
  double sec = 0.0;

  SweepSpec a = base;
  a.algorithm = Algorithm::eec_point;
  a.param = SweepParam::rho;
  for (double deg : {0.1, 0.15, 0.2, 0.3, 0.5}) a.grid.push_back(deg * kPi / 180.0);
  const auto ra = column(timed(a, sec), false);
  const double va = trend_violation(ra, +1);
  ok = ok && va <= o.trend_tol && sec < 600.0;
  d << "(a) EE_C vs rho [" << series(ra) << "] violation " << va << " in " << sec << " s; ";

  SweepSpec b = base;
  b.algorithm = Algorithm::eec_point;
  b.param = SweepParam::gamma;
  for (double db : {0.0, 5.0, 10.0, 15.0, 20.0}) b.grid.push_back(db_to_linear(db));
  const auto rb = column(timed(b, sec), false);
  const double vb = trend_violation(rb, -1);
  const bool declines = rb.back() < rb.front() * (1.0 - o.trend_tol);
  ok = ok && vb <= o.trend_tol && declines && sec < 600.0;
  d << "(b) EE_C vs gamma [" << series(rb) << "] violation " << vb << (declines ? "" : " no decline") << " in "
    << sec << " s; ";

  SweepSpec c = b;
  c.algorithm = Algorithm::ees_point;
  const auto rc = column(timed(c, sec), true);
  const double vc = trend_violation(rc, -1);
  ok = ok && vc <= o.trend_tol && sec < 600.0;
  d << "(c) EE_S vs gamma [" << series(rc) << "] violation " << vc << " in " << sec << " s; ";

  SweepSpec p = base;
  p.algorithm = Algorithm::pareto;
  p.param = SweepParam::E;
  p.grid = {0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 1.0};
  const auto rp = column(timed(p, sec), false);
  const double vp = trend_violation(rp, -1);
  // Knee: the steepest segment descends at least knee_ratio times faster than the first half on average.
  const std::size_t half = p.grid.size() / 2;
  const double early = (rp.front() - rp[half]) / (p.grid[half] - p.grid.front());
  double steep = 0.0;
  for (std::size_t i = 1; i < rp.size(); ++i) {
    steep = std::max(steep, (rp[i - 1] - rp[i]) / (p.grid[i] - p.grid[i - 1]));
  }
  const double knee = steep / std::max(early, 1e-300);
  ok = ok && vp <= o.trend_tol && knee >= o.knee_ratio && sec < 600.0;
  d << "(d) Pareto EE_C [" << series(rp) << "] violation " << vp << ", knee ratio " << knee << " in " << sec
    << " s";
  r.pass = ok;
  r.detail = d.str();
  return r;
}

CriterionResult baseline_dominance() {
  CriterionResult r{8, "Baselines are dominated as expected", false, "", 0.0};
  double ee_gap = 0.0, p_gap = 0.0;
  int failures = 0;
  for (int s = 1; s <= 10; ++s) {
    const SystemConfig cfg = desk(s);
    const ChannelSet ch = draw_channels(cfg);
    const auto eec = solve_eec_point(cfg, ch);
    const auto pmin = baseline_power_min(cfg, ch);
    const auto smax = baseline_sumrate_max(cfg, ch);
    const auto ees = solve_ees_point(cfg, ch);
    if (!eec.ok() || !pmin.ok() || !smax.ok() || !ees.ok()) {
      ++failures;
      continue;
    }
    const double e = eec.achieved.at("ee_c");
    ee_gap = std::max(ee_gap, (smax.achieved.at("ee_c") - e) / e);
    const double p1 = pmin.achieved.at("power");
    for (const auto* other : {&eec, &smax, &ees}) {
      const double p = other->achieved.at("power");
      p_gap = std::max(p_gap, (p1 - p) / p);
    }
  }
  r.pass = failures == 0 && ee_gap <= 1e-6 && p_gap <= 1e-6;
  r.detail = fmt("max (EE_C sumrate - EE_C)/EE_C %.3g, max (P powermin - P other)/P %.3g, failures %g", ee_gap, p_gap,
                 failures);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  sdp::reset_solve_stats();
  std::vector<CriterionResult> out;
  auto run = [&](int id, const std::function<CriterionResult()>& f) {
    if (!opts.criteria.count(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = f();
    } catch (const std::exception& e) {
      r.id = id;
      r.title = "criterion " + std::to_string(id);
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opts.log) *opts.log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  };
  run(1, crb_correctness);
  run(2, dinkelbach_monotonicity);
  run(3, sca_validity);
  run(4, rank1_recovery);
  run(5, grid_crosscheck);
  run(7, [&] { return trends(opts); });
  run(8, baseline_dominance);
  // Criterion 6 audits every subproblem solved above, so it runs last.
  run(6, [] { return sdp_core(sdp::solve_stats()); });
  std::sort(out.begin(), out.end(), [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "%s %d ", r.pass ? "PASS" : "FAIL", r.id);
  char tail[64];
  std::snprintf(tail, sizeof tail, " (%.1f s)", r.seconds);
  return head + r.title + ": " + r.detail + tail;
}

}  // namespace isacee
