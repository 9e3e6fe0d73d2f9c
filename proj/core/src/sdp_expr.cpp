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
#include <stdexcept>

#include "isacee/sdp.hpp"

namespace isacee::sdp {

LinExpr LinExpr::variable(int var, double coef) {
  LinExpr e;
  e.terms_.push_back({var, coef});
  return e;
}

LinExpr& LinExpr::add_term(int var, double coef) {
  if (coef != 0.0) terms_.push_back({var, coef});
  return *this;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant_ += o.constant_;
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  constant_ -= o.constant_;
  terms_.reserve(terms_.size() + o.terms_.size());
  for (const auto& t : o.terms_) terms_.push_back({t.var, -t.coef});
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  constant_ *= s;
  for (auto& t : terms_) t.coef *= s;
  return *this;
}

void LinExpr::compress() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coef == 0.0; }), out.end());
  terms_ = std::move(out);
}

double LinExpr::eval(const RVec& y) const {
  double v = constant_;
  for (const auto& t : terms_) v += t.coef * y(t.var);
  return v;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(LinExpr a, double s) { return a *= s; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }

CLinExpr& CLinExpr::operator+=(const CLinExpr& o) {
  re += o.re;
  im += o.im;
  return *this;
}

CLinExpr& CLinExpr::operator-=(const CLinExpr& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

CLinExpr operator+(CLinExpr a, const CLinExpr& b) { return a += b; }
CLinExpr operator-(CLinExpr a, const CLinExpr& b) { return a -= b; }

CLinExpr operator*(cplx s, const CLinExpr& a) {
  CLinExpr r;
  r.re = a.re * s.real() - a.im * s.imag();
  r.im = a.im * s.real() + a.re * s.imag();
  return r;
}

SymBlock::SymBlock(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) {
  if (n < 1) throw std::invalid_argument("SymBlock: size must be positive");
}

LinExpr& SymBlock::operator()(int r, int c) {
  if (r > c) std::swap(r, c);
  return e_[static_cast<std::size_t>(r) * n_ + c];
}

const LinExpr& SymBlock::operator()(int r, int c) const {
  if (r > c) std::swap(r, c);
  return e_[static_cast<std::size_t>(r) * n_ + c];
}

RMat SymBlock::eval(const RVec& y) const {
  RMat F(n_, n_);
  for (int r = 0; r < n_; ++r) {
    for (int c = r; c < n_; ++c) F(r, c) = F(c, r) = (*this)(r, c).eval(y);
  }
  return F;
}

HermBlock::HermBlock(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) {
  if (n < 1) throw std::invalid_argument("HermBlock: size must be positive");
}

CLinExpr HermBlock::get(int r, int c) const {
  if (r > c) return e_[static_cast<std::size_t>(c) * n_ + r].conj();
  return e_[static_cast<std::size_t>(r) * n_ + c];
}

void HermBlock::set(int r, int c, const CLinExpr& v) {
  if (r > c) {
    e_[static_cast<std::size_t>(c) * n_ + r] = v.conj();
  } else {
    e_[static_cast<std::size_t>(r) * n_ + c] = v;
  }
}

void HermBlock::add(int r, int c, const CLinExpr& v) {
  if (r > c) {
    e_[static_cast<std::size_t>(c) * n_ + r] += v.conj();
  } else {
    e_[static_cast<std::size_t>(r) * n_ + c] += v;
  }
}

SymBlock HermBlock::embed() const {
  SymBlock S(2 * n_);
  for (int r = 0; r < n_; ++r) {
    const auto& d = e_[static_cast<std::size_t>(r) * n_ + r];
    S(r, r) = d.re;
    S(n_ + r, n_ + r) = d.re;
    for (int c = r + 1; c < n_; ++c) {
      const auto& h = e_[static_cast<std::size_t>(r) * n_ + c];
      S(r, c) = h.re;
      S(n_ + r, n_ + c) = h.re;
      S(r, n_ + c) = -h.im;
      S(c, n_ + r) = h.im;
    }
  }
  return S;
}

CMat HermBlock::eval(const RVec& y) const {
  CMat H(n_, n_);
  for (int r = 0; r < n_; ++r) {
    for (int c = r; c < n_; ++c) {
      const cplx v = e_[static_cast<std::size_t>(r) * n_ + c].eval(y);
      H(r, c) = v;
      H(c, r) = std::conj(v);
    }
    H(r, r) = H(r, r).real();
  }
  return H;
}

RMat embed_hermitian(const CMat& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("embed_hermitian: matrix must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("embed_hermitian: matrix is not Hermitian");
  }
  const Eigen::Index n = H.rows();
  RMat E(2 * n, 2 * n);
  E.topLeftCorner(n, n) = H.real();
  E.bottomRightCorner(n, n) = H.real();
  E.topRightCorner(n, n) = -H.imag();
  E.bottomLeftCorner(n, n) = H.imag();
  return 0.5 * (E + E.transpose());
}

CLinExpr HermVar::operator()(int r, int c) const {
  if (r == c) return {LinExpr::variable(re_idx[static_cast<std::size_t>(r) * n + r])};
  const bool lower = r > c;
  if (lower) std::swap(r, c);
  const std::size_t p = static_cast<std::size_t>(r) * n + c;
  return {LinExpr::variable(re_idx[p]), LinExpr::variable(im_idx[p], lower ? -1.0 : 1.0)};
}

HermBlock HermVar::block() const {
  HermBlock B(n);
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) B.set(r, c, (*this)(r, c));
  }
  return B;
}

CMat HermVar::value(const RVec& y) const {
  CMat X(n, n);
  for (int r = 0; r < n; ++r) {
    X(r, r) = y(re_idx[static_cast<std::size_t>(r) * n + r]);
    for (int c = r + 1; c < n; ++c) {
      const std::size_t p = static_cast<std::size_t>(r) * n + c;
      X(r, c) = cplx(y(re_idx[p]), y(im_idx[p]));
      X(c, r) = std::conj(X(r, c));
    }
  }
  return X;
}

CLinExpr CVecVar::operator()(int i) const {
  return {LinExpr::variable(re0 + i), LinExpr::variable(im0 + i)};
}

CVec CVecVar::value(const RVec& y) const {
  CVec x(n);
  for (int i = 0; i < n; ++i) x(i) = cplx(y(re0 + i), y(im0 + i));
  return x;
}

LinExpr trace_prod(const CMat& Q, const HermVar& X) {
  LinExpr e;
  const int n = X.n;
  for (int r = 0; r < n; ++r) {
    e.add_term(X.re_idx[static_cast<std::size_t>(r) * n + r], Q(r, r).real());
    for (int c = r + 1; c < n; ++c) {
      const std::size_t p = static_cast<std::size_t>(r) * n + c;
      e.add_term(X.re_idx[p], 2.0 * Q(r, c).real());
      e.add_term(X.im_idx[p], 2.0 * Q(r, c).imag());
    }
  }
  return e;
}

CLinExpr quad_form(const CVec& u, const HermVar& X, const CVec& v) {
  CLinExpr e;
  const int n = X.n;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const cplx k = std::conj(u(r)) * v(c);
      if (r == c) {
        const int d = X.re_idx[static_cast<std::size_t>(r) * n + r];
        e.re.add_term(d, k.real());
        e.im.add_term(d, k.imag());
        continue;
      }
      const int lo = std::min(r, c);
      const int hi = std::max(r, c);
      const std::size_t p = static_cast<std::size_t>(lo) * n + hi;
      const double sgn = r < c ? 1.0 : -1.0;  // Im X(r,c)
      e.re.add_term(X.re_idx[p], k.real());
      e.re.add_term(X.im_idx[p], -k.imag() * sgn);
      e.im.add_term(X.re_idx[p], k.imag());
      e.im.add_term(X.im_idx[p], k.real() * sgn);
    }
  }
  return e;
}

CLinExpr inner(const CVec& u, const CVecVar& x) {
  CLinExpr e;
  for (int i = 0; i < x.n; ++i) {
    const cplx k = std::conj(u(i));
    e.re.add_term(x.re0 + i, k.real());
    e.re.add_term(x.im0 + i, -k.imag());
    e.im.add_term(x.re0 + i, k.imag());
    e.im.add_term(x.im0 + i, k.real());
  }
  return e;
}

LinExpr trace(const HermVar& X) {
  LinExpr e;
  for (int r = 0; r < X.n; ++r) e.add_term(X.re_idx[static_cast<std::size_t>(r) * X.n + r], 1.0);
  return e;
}

}  // namespace isacee::sdp
