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

#ifndef GSF_LINALG_HPP
#define GSF_LINALG_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace gsf {

using cplx = std::complex<double>;
using Vec = std::vector<double>;

// Dense real matrix, row-major. Small sizes only (the whole toolkit works with
// matrices of order <= a few hundred), so everything here favors determinism
// and clarity over blocking tricks.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0.0) {}

  static Mat identity(int n);
  static Mat from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return a_[size_t(r) * cols_ + c]; }
  double operator()(int r, int c) const { return a_[size_t(r) * cols_ + c]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  Mat transposed() const;
  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);
Mat operator*(const Mat& a, const Mat& b);
Vec operator*(const Mat& a, const Vec& x);

// <A, B> = Tr(A^T B), the Frobenius inner product.
double frob_dot(const Mat& a, const Mat& b);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
double max_abs(const Vec& v);

// Dense complex matrix, row-major.
class CMat {
 public:
  CMat() = default;
  CMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  static CMat identity(int n);
  static CMat from_rows(std::initializer_list<std::initializer_list<cplx>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int r, int c) { return a_[size_t(r) * cols_ + c]; }
  cplx operator()(int r, int c) const { return a_[size_t(r) * cols_ + c]; }

  CMat adjoint() const;
  CMat transposed() const;
  cplx trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(cplx s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);
CMat operator*(cplx s, CMat a);
CMat operator*(const CMat& a, const CMat& b);
CMat kron(const CMat& a, const CMat& b);

// Symmetric eigendecomposition by cyclic Jacobi rotations. Input must be
// symmetric (only the upper triangle is trusted). Eigenvalues come back in
// ascending order; eigenvectors are the matching columns of `vectors`.
struct EighResult {
  Vec values;
  Mat vectors;
};
EighResult jacobi_eigh(const Mat& a);

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
// or nullopt if a nonpositive pivot shows up.
std::optional<Mat> cholesky(const Mat& a);

// Solve L y = b and L^T x = y given the lower Cholesky factor.
Vec chol_solve(const Mat& l, const Vec& b);
Mat chol_solve_matrix(const Mat& l, const Mat& b);

// Thin Householder QR of an m x n matrix with m >= n: a = q * r with q
// m x n (orthonormal columns) and r n x n upper triangular.
struct QrResult {
  Mat q;
  Mat r;
};
QrResult qr_decompose(const Mat& a);

// Least squares min_x ||a x - b||_2 through the QR factorization.
Vec lstsq(const Mat& a, const Vec& b);

// Hermitian <-> real-symmetric embedding: H = A + iB maps to [[A, -B], [B, A]].
// The embedding doubles every eigenvalue's multiplicity and commutes with
// spectral functions, which is how the complex Hermitian work (Choi matrices,
// SDP blocks) rides on the real Jacobi kernel above.
Mat embed_hermitian(const CMat& h);
CMat extract_hermitian(const Mat& e);

// Eigenvalues of a Hermitian matrix (ascending, deduplicated from the
// embedding's doubled spectrum).
Vec hermitian_eigenvalues(const CMat& h);

// Clamp negative eigenvalues of a Hermitian matrix to zero; the Frobenius
// projection onto the PSD cone.
CMat hermitian_clamp_psd(const CMat& h);

// Count of eigenvalues of a symmetric PSD matrix above rel_tol * max |eig|.
int symmetric_rank(const Mat& a, double rel_tol);

}  // namespace gsf

#endif
