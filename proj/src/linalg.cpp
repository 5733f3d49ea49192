// Copyright 2026 The gateset-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gsf {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  int nr = int(rows.size());
  int nc = nr ? int(rows.begin()->size()) : 0;
  Mat m(nr, nc);
  int r = 0;
  for (const auto& row : rows) {
    if (int(row.size()) != nc) throw std::invalid_argument("ragged row list");
    int c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Mat::trace() const {
  double s = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

double Mat::frobenius_norm() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul shape mismatch");
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vec operator*(const Mat& a, const Vec& x) {
  if (a.cols() != int(x.size())) throw std::invalid_argument("matvec shape mismatch");
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double frob_dot(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMat CMat::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  int nr = int(rows.size());
  int nc = nr ? int(rows.begin()->size()) : 0;
  CMat m(nr, nc);
  int r = 0;
  for (const auto& row : rows) {
    if (int(row.size()) != nc) throw std::invalid_argument("ragged row list");
    int c = 0;
    for (cplx v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

CMat CMat::adjoint() const {
  CMat t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = std::conj((*this)(r, c));
  return t;
}

CMat CMat::transposed() const {
  CMat t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

cplx CMat::trace() const {
  cplx s = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

double CMat::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double CMat::max_abs() const {
  double m = 0.0;
  for (const cplx& v : a_) m = std::max(m, std::abs(v));
  return m;
}

CMat& CMat::operator+=(const CMat& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMat& CMat::operator*=(cplx s) {
  for (cplx& v : a_) v *= s;
  return *this;
}

CMat operator+(CMat a, const CMat& b) { return a += b; }
CMat operator-(CMat a, const CMat& b) { return a -= b; }
CMat operator*(cplx s, CMat a) { return a *= s; }

CMat operator*(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul shape mismatch");
  CMat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      cplx aij = a(i, j);
      for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c)
          k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
    }
  return k;
}

namespace {

double off_diagonal_norm(const Mat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EighResult jacobi_eigh(const Mat& input) {
  int n = input.rows();
  if (n != input.cols()) throw std::invalid_argument("eigh needs a square matrix");
  Mat a = input;
  // Symmetrize so tiny asymmetries from upstream arithmetic cannot bias sweeps.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  Mat v = Mat::identity(n);

  double scale = a.frobenius_norm();
  double tol = 1e-15 * (scale > 0 ? scale : 1.0);
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          double arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(p, r) = a(r, p);
          a(r, q) = s * arp + c * arq;
          a(q, r) = a(r, q);
        }
        for (int r = 0; r < n; ++r) {
          double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) < a(j, j); });
  EighResult res;
  res.values.resize(n);
  res.vectors = Mat(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[k] = a(order[k], order[k]);
    for (int r = 0; r < n; ++r) res.vectors(r, k) = v(r, order[k]);
  }
  return res;
}

std::optional<Mat> cholesky(const Mat& a) {
  int n = a.rows();
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Vec chol_solve(const Mat& l, const Vec& b) {
  int n = l.rows();
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

Mat chol_solve_matrix(const Mat& l, const Mat& b) {
  Mat x(b.rows(), b.cols());
  Vec col(b.rows());
  for (int c = 0; c < b.cols(); ++c) {
    for (int r = 0; r < b.rows(); ++r) col[r] = b(r, c);
    Vec sol = chol_solve(l, col);
    for (int r = 0; r < b.rows(); ++r) x(r, c) = sol[r];
  }
  return x;
}

QrResult qr_decompose(const Mat& input) {
  int m = input.rows(), n = input.cols();
  if (m < n) throw std::invalid_argument("qr needs rows >= cols");
  Mat a = input;
  // Householder vectors stored column by column; accumulate Q afterwards.
  std::vector<Vec> hh;
  hh.reserve(n);
  for (int k = 0; k < n; ++k) {
    double nrm = 0.0;
    for (int i = k; i < m; ++i) nrm += a(i, k) * a(i, k);
    nrm = std::sqrt(nrm);
    Vec v(m, 0.0);
    if (nrm > 0.0) {
      double alpha = a(k, k) >= 0 ? -nrm : nrm;
      for (int i = k; i < m; ++i) v[i] = a(i, k);
      v[k] -= alpha;
      double vn2 = 0.0;
      for (int i = k; i < m; ++i) vn2 += v[i] * v[i];
      if (vn2 > 0.0) {
        for (int j = k; j < n; ++j) {
          double s = 0.0;
          for (int i = k; i < m; ++i) s += v[i] * a(i, j);
          s *= 2.0 / vn2;
          for (int i = k; i < m; ++i) a(i, j) -= s * v[i];
        }
      }
    }
    hh.push_back(std::move(v));
  }
  QrResult res;
  res.r = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) res.r(i, j) = a(i, j);
  // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of the identity.
  Mat q(m, n);
  for (int c = 0; c < n; ++c) q(c, c) = 1.0;
  for (int k = n - 1; k >= 0; --k) {
    const Vec& v = hh[k];
    double vn2 = 0.0;
    for (int i = k; i < m; ++i) vn2 += v[i] * v[i];
    if (vn2 <= 0.0) continue;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = k; i < m; ++i) s += v[i] * q(i, j);
      s *= 2.0 / vn2;
      for (int i = k; i < m; ++i) q(i, j) -= s * v[i];
    }
  }
  res.q = std::move(q);
  return res;
}

Vec lstsq(const Mat& a, const Vec& b) {
  QrResult qr = qr_decompose(a);
  int n = a.cols();
  Vec qtb(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += qr.q(i, j) * b[i];
    qtb[j] = s;
  }
  Vec x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = qtb[i];
    for (int k = i + 1; k < n; ++k) s -= qr.r(i, k) * x[k];
    if (qr.r(i, i) == 0.0) throw std::runtime_error("rank-deficient lstsq");
    x[i] = s / qr.r(i, i);
  }
  return x;
}

Mat embed_hermitian(const CMat& h) {
  int n = h.rows();
  Mat e(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = h(i, j).real(), im = h(i, j).imag();
      e(i, j) = re;
      e(i + n, j + n) = re;
      e(i, j + n) = -im;
      e(i + n, j) = im;
    }
  return e;
}

CMat extract_hermitian(const Mat& e) {
  int n = e.rows() / 2;
  CMat h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = 0.5 * (e(i, j) + e(i + n, j + n));
      double im = 0.5 * (e(i + n, j) - e(i, j + n));
      h(i, j) = cplx(re, im);
    }
  // Hermitize to kill numerical dust from the eigensolve.
  CMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
  return out;
}

Vec hermitian_eigenvalues(const CMat& h) {
  EighResult e = jacobi_eigh(embed_hermitian(h));
  // The embedded spectrum holds every eigenvalue twice; take every other one.
  Vec out;
  out.reserve(h.rows());
  for (size_t i = 0; i + 1 < e.values.size(); i += 2)
    out.push_back(0.5 * (e.values[i] + e.values[i + 1]));
  return out;
}

CMat hermitian_clamp_psd(const CMat& h) {
  Mat e = embed_hermitian(h);
  EighResult eig = jacobi_eigh(e);
  int n2 = e.rows();
  Mat rebuilt(n2, n2);
  for (int k = 0; k < n2; ++k) {
    double lam = eig.values[k];
    if (lam <= 0.0) continue;
    for (int i = 0; i < n2; ++i) {
      double vik = eig.vectors(i, k);
      if (vik == 0.0) continue;
      double w = lam * vik;
      for (int j = 0; j < n2; ++j) rebuilt(i, j) += w * eig.vectors(j, k);
    }
  }
  return extract_hermitian(rebuilt);
}

int symmetric_rank(const Mat& a, double rel_tol) {
  EighResult e = jacobi_eigh(a);
  double top = 0.0;
  for (double v : e.values) top = std::max(top, std::abs(v));
  if (top == 0.0) return 0;
  int count = 0;
  for (double v : e.values)
    if (std::abs(v) > rel_tol * top) ++count;
  return count;
}

}  // namespace gsf
