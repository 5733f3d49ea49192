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

#include <doctest.h>

#include <cmath>

#include "gsf/rng.hpp"

using namespace gsf;

namespace {

Mat random_symmetric(int n, Rng& rng) {
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = rng.normal();
      a(i, j) = v;
      a(j, i) = v;
    }
  return a;
}

}  // namespace

TEST_CASE("jacobi eigensolve reconstructs random symmetric matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + int(rng.uniform_int(15));
    Mat a = random_symmetric(n, rng);
    EighResult e = jacobi_eigh(a);

    // Eigenvalues ascending.
    for (int i = 1; i < n; ++i) CHECK(e.values[i] >= e.values[i - 1]);

    // V^T V = I.
    Mat g = e.vectors.transposed() * e.vectors;
    g -= Mat::identity(n);
    CHECK(g.max_abs() < 1e-12);

    // V D V^T = A.
    Mat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = e.values[i];
    Mat rebuilt = e.vectors * d * e.vectors.transposed();
    rebuilt -= a;
    CHECK(rebuilt.max_abs() < 1e-12 * std::max(1.0, a.max_abs()) * n);
  }
}

TEST_CASE("jacobi eigensolve handles known 2x2 and diagonal input") {
  EighResult e = jacobi_eigh(Mat::from_rows({{2, 1}, {1, 2}}));
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-14));

  EighResult d = jacobi_eigh(Mat::from_rows({{5, 0}, {0, -3}}));
  CHECK(d.values[0] == doctest::Approx(-3.0));
  CHECK(d.values[1] == doctest::Approx(5.0));
}

TEST_CASE("cholesky factors SPD matrices and refuses indefinite ones") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + int(rng.uniform_int(10));
    Mat b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = rng.normal();
    Mat a = b * b.transposed();
    for (int i = 0; i < n; ++i) a(i, i) += 0.5;

    auto l = cholesky(a);
    REQUIRE(l.has_value());
    Mat rebuilt = *l * l->transposed();
    rebuilt -= a;
    CHECK(rebuilt.max_abs() < 1e-11 * std::max(1.0, a.max_abs()));

    Vec rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = rng.normal();
    Vec x = chol_solve(*l, rhs);
    Vec back = a * x;
    for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(rhs[i]).epsilon(1e-9));
  }

  CHECK(!cholesky(Mat::from_rows({{1, 2}, {2, 1}})).has_value());
}

TEST_CASE("householder qr gives orthonormal q and solves least squares") {
  Rng rng(13);
  int m = 12, n = 5;
  Mat a(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  QrResult qr = qr_decompose(a);

  Mat g = qr.q.transposed() * qr.q;
  g -= Mat::identity(n);
  CHECK(g.max_abs() < 1e-13);

  Mat rebuilt = qr.q * qr.r;
  rebuilt -= a;
  CHECK(rebuilt.max_abs() < 1e-13);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) CHECK(qr.r(i, j) == 0.0);

  // Least squares against the normal-equation route.
  Vec b(m);
  for (int i = 0; i < m; ++i) b[i] = rng.normal();
  Vec x = lstsq(a, b);
  Mat ata = a.transposed() * a;
  Vec atb = a.transposed() * b;
  auto l = cholesky(ata);
  REQUIRE(l.has_value());
  Vec x2 = chol_solve(*l, atb);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x2[i]).epsilon(1e-10));
}

TEST_CASE("hermitian embedding round trips and clamps to psd") {
  CMat h = CMat::from_rows({{cplx(2, 0), cplx(0, -1)}, {cplx(0, 1), cplx(-1, 0)}});
  Mat e = embed_hermitian(h);
  CMat back = extract_hermitian(e);
  CHECK((back - h).max_abs() < 1e-15);

  // Eigenvalues of [[2, -i], [i, -1]]: (1 +- sqrt(13)) / 2.
  Vec eigs = hermitian_eigenvalues(h);
  CHECK(eigs[0] == doctest::Approx((1.0 - std::sqrt(13.0)) / 2).epsilon(1e-12));
  CHECK(eigs[1] == doctest::Approx((1.0 + std::sqrt(13.0)) / 2).epsilon(1e-12));

  CMat clamped = hermitian_clamp_psd(h);
  Vec ceigs = hermitian_eigenvalues(clamped);
  CHECK(ceigs[0] > -1e-13);
  CHECK(ceigs[1] == doctest::Approx((1.0 + std::sqrt(13.0)) / 2).epsilon(1e-12));

  // Idempotent on something already PSD.
  CMat again = hermitian_clamp_psd(clamped);
  CHECK((again - clamped).max_abs() < 1e-13);
}

TEST_CASE("symmetric rank counts significant eigenvalues") {
  Mat a = Mat::from_rows({{1, 0, 0}, {0, 1e-14, 0}, {0, 0, 2}});
  CHECK(symmetric_rank(a, 1e-10) == 2);
  CHECK(symmetric_rank(Mat(3, 3), 1e-10) == 0);
}

TEST_CASE("rng streams are deterministic and box-muller moments check out") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng rng(7);
  int n = 100000;
  double sum = 0, sumsq = 0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    sum += x;
    sumsq += x * x;
  }
  double mean = sum / n;
  double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));

  // Keyed draws ignore evaluation order.
  double w1 = keyed_normal(5, 'T', 1, 2, 3);
  double w2 = keyed_normal(5, 'T', 1, 2, 4);
  CHECK(w1 != w2);
  CHECK(w1 == keyed_normal(5, 'T', 1, 2, 3));
}

TEST_CASE("haar unitaries are unitary") {
  Rng rng(21);
  for (int n : {2, 4, 8}) {
    CMat u = haar_unitary(n, rng);
    CMat g = u.adjoint() * u;
    g -= CMat::identity(n);
    CHECK(g.max_abs() < 1e-13);
  }
}
