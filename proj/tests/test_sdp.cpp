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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "isacee/sdp.hpp"

using namespace isacee;
using namespace isacee::sdp;

namespace {

RVec eigenvalues(const RMat& A) { return Eigen::SelfAdjointEigenSolver<RMat>(A).eigenvalues(); }

// Vertex enumeration for max c'x s.t. A x <= b, x >= 0 (small, bounded instances).
double lp_vertex_oracle(const RMat& A, const RVec& b, const RVec& c) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(b.size());
  RMat G(m + n, n);
  RVec g(m + n);
  G << A, -RMat::Identity(n, n);
  g << b, RVec::Zero(n);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::vector<bool> pick(static_cast<std::size_t>(m + n), false);
  std::fill(pick.begin(), pick.begin() + n, true);
  do {
    RMat S(n, n);
    RVec s(n);
    int r = 0;
    for (int i = 0; i < m + n; ++i) {
      if (pick[static_cast<std::size_t>(i)]) {
        S.row(r) = G.row(i);
        s(r++) = g(i);
      }
    }
    Eigen::FullPivLU<RMat> lu(S);
    if (lu.rank() < n) continue;
    const RVec x = lu.solve(s);
    if (((G * x - g).array() <= 1e-9).all()) best = std::max(best, c.dot(x));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST(Embed, IdentityMapsToIdentity) {
  const RMat E = embed_hermitian(CMat::Identity(2, 2));
  EXPECT_TRUE(E.isApprox(RMat::Identity(4, 4)));
}

TEST(Embed, PauliYEigenvaluesDuplicate) {
  CMat H(2, 2);
  H << 0.0, cplx(0, 1), cplx(0, -1), 0.0;
  const RVec ev = eigenvalues(embed_hermitian(H));
  EXPECT_NEAR(ev(0), -1.0, 1e-14);
  EXPECT_NEAR(ev(1), -1.0, 1e-14);
  EXPECT_NEAR(ev(2), 1.0, 1e-14);
  EXPECT_NEAR(ev(3), 1.0, 1e-14);
}

TEST(Embed, RandomPsdStaysPsd) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N;
  for (int t = 0; t < 20; ++t) {
    CMat B(4, 4);
    for (int i = 0; i < 16; ++i) B(i / 4, i % 4) = {N(rng), N(rng)};
    const CMat H = B * B.adjoint();
    EXPECT_GE(eigenvalues(embed_hermitian(H)).minCoeff(), -1e-10);
  }
}

TEST(Embed, RejectsNonHermitian) {
  CMat H(2, 2);
  H << 1.0, 2.0, 3.0, 1.0;
  EXPECT_THROW(embed_hermitian(H), std::invalid_argument);
}

TEST(Solve, TraceOverUnitBox) {
  ConeProblem p;
  const HermVar X = p.add_herm_psd(2);
  p.add_ineq(1.0 - trace(X));
  p.maximize(trace(X));
  const SolveReport r = solve(p);
  ASSERT_TRUE(r.optimal()) << r.message;
  EXPECT_NEAR(r.objective, 1.0, 1e-8);
  EXPECT_LE(std::max({r.kkt.primal, r.kkt.dual}), 1e-7);
}

TEST(Solve, TwoByTwoLmi) {
  ConeProblem p;
  const int t = p.add_var();
  SymBlock B(2);
  B(0, 0) = LinExpr::variable(t);
  B(0, 1) = LinExpr(1.0);
  B(1, 1) = LinExpr::variable(t);
  p.add_lmi(B);
  p.maximize(-LinExpr::variable(t));
  const SolveReport r = solve(p);
  ASSERT_TRUE(r.optimal()) << r.message;
  EXPECT_NEAR(r.y(t), 1.0, 1e-8);
}

TEST(Solve, ComplexSpectraplexGivesLargestEigenvalue) {
  CMat C(3, 3);
  C << 2.0, cplx(0, 1), 0.5, cplx(0, -1), 1.0, cplx(0.3, 0.2), 0.5, cplx(0.3, -0.2), -1.0;
  ConeProblem p;
  const HermVar X = p.add_herm_psd(3);
  p.add_eq(trace(X) - 1.0);
  p.maximize(trace_prod(C, X));
  const SolveReport r = solve(p);
  ASSERT_TRUE(r.optimal()) << r.message;
  const double lmax = Eigen::SelfAdjointEigenSolver<CMat>(C).eigenvalues().maxCoeff();
  EXPECT_NEAR(r.objective, lmax, 1e-7);
  EXPECT_NEAR(r.dual_objective, lmax, 1e-7);
}

TEST(Solve, RandomLpMatchesVertexOracle) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> U(0.1, 1.0);
  for (int t = 0; t < 10; ++t) {
    const int n = 3, m = 4;
    RMat A(m, n);
    RVec b(m), c(n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = U(rng);
      b(i) = 1.0 + U(rng);
    }
    for (int j = 0; j < n; ++j) c(j) = U(rng);
    ConeProblem p;
    const int x0 = p.add_vars(n);
    // Diagonal LMI diag(x) >= 0 plus the linear rows.
    SymBlock D(n);
    for (int j = 0; j < n; ++j) D(j, j) = LinExpr::variable(x0 + j);
    p.add_lmi(D);
    LinExpr obj;
    for (int i = 0; i < m; ++i) {
      LinExpr row(b(i));
      for (int j = 0; j < n; ++j) row -= LinExpr::variable(x0 + j, A(i, j));
      p.add_ineq(row);
    }
    for (int j = 0; j < n; ++j) obj += LinExpr::variable(x0 + j, c(j));
    p.maximize(obj);
    const SolveReport r = solve(p);
    ASSERT_TRUE(r.optimal()) << r.message;
    EXPECT_NEAR(r.objective, lp_vertex_oracle(A, b, c), 1e-6);
  }
}

TEST(Solve, DetectsInfeasibility) {
  ConeProblem p;
  const HermVar X = p.add_herm_psd(2);
  p.add_ineq(-1.0 - trace(X));
  p.maximize(-trace(X));
  EXPECT_EQ(solve(p).status, Status::infeasible);
}

TEST(Solve, DetectsUnboundedness) {
  ConeProblem p;
  const HermVar X = p.add_herm_psd(2);
  p.maximize(trace(X));
  EXPECT_EQ(solve(p).status, Status::unbounded);
}

TEST(Solve, EqualityConstraintsAndMaxViolation) {
  ConeProblem p;
  const int a = p.add_var(), b = p.add_var();
  p.add_eq(LinExpr::variable(a) + LinExpr::variable(b) - 2.0);
  SymBlock B(2);
  B(0, 0) = LinExpr::variable(a);
  B(0, 1) = LinExpr(0.5);
  B(1, 1) = LinExpr::variable(b);
  p.add_lmi(B);
  p.maximize(-(LinExpr::variable(a, 2.0) + LinExpr::variable(b)));
  const SolveReport r = solve(p);
  ASSERT_TRUE(r.optimal()) << r.message;
  EXPECT_NEAR(r.y(a) + r.y(b), 2.0, 1e-7);
  EXPECT_LE(p.max_violation(r.y), 1e-7);
  // a b >= 1/4 with a + b = 2: the minimizer of 2a + b sits on the hyperbola's left end.
  const double a_star = 1.0 - std::sqrt(0.75);
  EXPECT_NEAR(r.y(a), a_star, 1e-6);
}

TEST(Solve, StatsTrackOptimalReports) {
  reset_solve_stats();
  ConeProblem p;
  const HermVar X = p.add_herm_psd(2);
  p.add_ineq(1.0 - trace(X));
  p.maximize(trace(X));
  solve(p);
  const SolveStats s = solve_stats();
  EXPECT_EQ(s.solves, 1);
  EXPECT_EQ(s.optimal, 1);
  EXPECT_LE(s.max_dual, 1e-7);
}

TEST(Dump, HeaderAndSections) {
  ConeProblem p;
  const int t = p.add_var();
  p.add_ineq(LinExpr::variable(t) - 1.0);
  SymBlock B(1);
  B(0, 0) = LinExpr::variable(t);
  p.add_lmi(B);
  p.maximize(-LinExpr::variable(t));
  std::ostringstream os;
  p.dump(os);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("isacee-sdp 1\nvars 1\nmaximize ", 0), 0u);
  EXPECT_NE(s.find("\nineq "), std::string::npos);
  EXPECT_NE(s.find("\nlmi 1 "), std::string::npos);
  EXPECT_EQ(s.substr(s.size() - 4), "end\n");
}

TEST(LinExpr, Algebra) {
  LinExpr e = LinExpr::variable(0, 2.0) + 3.0 - LinExpr::variable(1) + LinExpr::variable(0);
  e.compress();
  RVec y(2);
  y << 1.0, 4.0;
  EXPECT_DOUBLE_EQ(e.eval(y), 2.0);
  EXPECT_EQ(e.terms().size(), 2u);
  EXPECT_DOUBLE_EQ((2.0 * e).eval(y), 4.0);
}
