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

#include "gsf/superop.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "gsf/linalg.hpp"
#include "gsf/rng.hpp"

using namespace gsf;

namespace {

// Density-level application of a Kraus channel, written out longhand so the
// transfer-matrix code is checked against independent arithmetic.
CMat apply_kraus(const std::vector<CMat>& kraus, const CMat& rho) {
  CMat out(rho.rows(), rho.cols());
  for (const CMat& a : kraus) out += a * rho * a.adjoint();
  return out;
}

double trace_pair(const CMat& a, const CMat& b) {
  cplx t = (a * b).trace();
  return t.real();
}

std::vector<CMat> depolarizing_kraus(double p) {
  const auto& paulis = pauli_basis(2);
  std::vector<CMat> ks;
  cplx w0 = std::sqrt(1.0 - 0.75 * p);
  cplx w = std::sqrt(0.25 * p);
  ks.push_back(w0 * paulis[0]);
  ks.push_back(w * paulis[1]);
  ks.push_back(w * paulis[2]);
  ks.push_back(w * paulis[3]);
  return ks;
}

CMat random_density(int dim, Rng& rng) {
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  CMat rho = g * g.adjoint();
  cplx tr = rho.trace();
  rho *= cplx(1.0 / tr.real(), 0.0);
  return rho;
}

CMat random_hermitian(int dim, Rng& rng) {
  CMat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  CMat h(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
  return h;
}

const CMat kKet0Proj = CMat::from_rows({{1, 0}, {0, 0}});

}  // namespace

TEST_CASE("depolarizing kraus gives the expected transfer matrix") {
  double p = 0.3;
  auto ks = depolarizing_kraus(p);
  Ptm r = ptm_from_kraus(ks);

  // Independent oracle: entry-by-entry trace evaluation.
  const auto& paulis = pauli_basis(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CMat image = apply_kraus(ks, paulis[j]);
      double want = trace_pair(paulis[i], image) / 2.0;
      CHECK(r.m(i, j) == doctest::Approx(want).epsilon(1e-13));
    }

  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double want = i != j ? 0.0 : (i == 0 ? 1.0 : 1.0 - p);
      CHECK(r.m(i, j) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("x half-pi rotation maps y to z and z to minus y") {
  const cplx i1(0.0, 1.0);
  double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
  CMat u = CMat::from_rows({{c, -i1 * s}, {-i1 * s, c}});
  Ptm r = ptm_from_unitary(u);

  // Columns: identity fixed, X fixed, Y -> Z, Z -> -Y.
  Vec ey = {0, 0, 1, 0}, ez = {0, 0, 0, 1};
  Vec ry = r.m * ey;
  Vec rz = r.m * ez;
  CHECK(ry[3] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rz[2] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(ry[0]) + std::abs(ry[1]) + std::abs(ry[2]) < 1e-14);
  CHECK(std::abs(rz[0]) + std::abs(rz[1]) + std::abs(rz[3]) < 1e-14);
  CHECK(is_orthogonal(r, 1e-13));
}

TEST_CASE("choi of the identity channel is the rank-one entangled state") {
  Ptm id = Ptm::identity(2);
  CMat choi = choi_from_ptm(id);

  // Brute force from the definition: (1/d) sum_ij E_ij (x) L(E_ij).
  CMat want(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMat eij(2, 2);
      eij(i, j) = 1.0;
      want += kron(eij, eij);
    }
  want *= cplx(0.5, 0.0);
  CHECK((choi - want).max_abs() < 1e-14);

  Vec eigs = hermitian_eigenvalues(choi);
  CHECK(eigs[3] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(eigs[0]) < 1e-13);
  CHECK(std::abs(eigs[2]) < 1e-13);
}

TEST_CASE("choi eigenvalues of a 0.9 depolarizing channel") {
  Mat m = Mat::identity(4);
  m(1, 1) = m(2, 2) = m(3, 3) = 0.9;
  Ptm r(2, m);
  Vec eigs = hermitian_eigenvalues(choi_from_ptm(r));
  CHECK(eigs[0] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(eigs[1] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(eigs[2] == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(eigs[3] == doctest::Approx(0.925).epsilon(1e-12));
}

TEST_CASE("ptm choi round trip on random channels") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    RandomChannel ch = random_cptp(2, rng);
    CMat choi = choi_from_ptm(ch.ptm);
    CHECK(std::abs(choi.trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(choi.trace().imag()) < 1e-14);
    Ptm back = ptm_from_choi(choi, 2);
    CHECK((back.m - ch.ptm.m).max_abs() < 1e-12);

    // CPTP channels have PSD Choi matrices and transfer entries in [-1, 1].
    Vec eigs = hermitian_eigenvalues(choi);
    CHECK(eigs[0] > -1e-12);
    CHECK(ch.ptm.m.max_abs() <= 1.0 + 1e-12);
    CHECK(is_trace_preserving(ch.ptm, 1e-12));
  }
}

TEST_CASE("vectorization conventions for the ground-state projector") {
  Vec s = vectorize_state(kKet0Proj);
  CHECK(s[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s[1] == 0.0);
  CHECK(s[2] == 0.0);
  CHECK(s[3] == doctest::Approx(0.5).epsilon(1e-15));

  Vec e = vectorize_measurement(kKet0Proj);
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e[1] == 0.0);
  CHECK(e[2] == 0.0);
  CHECK(e[3] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK((devectorize_state(s, 2) - kKet0Proj).max_abs() < 1e-15);
  CHECK((devectorize_measurement(e, 2) - kKet0Proj).max_abs() < 1e-15);
}

TEST_CASE("expectation value of depolarized ground state") {
  double eps = 0.75;
  Mat m = Mat::identity(4);
  m(1, 1) = m(2, 2) = m(3, 3) = eps;
  Ptm r(2, m);
  double got = expectation_value(vectorize_measurement(kKet0Proj), r,
                                 vectorize_state(kKet0Proj));
  CHECK(got == doctest::Approx((1.0 + eps) / 2.0).epsilon(1e-14));
}

TEST_CASE("vectorized expectation equals density-level expectation") {
  Rng rng(32);
  for (int trial = 0; trial < 25; ++trial) {
    RandomChannel ch = random_cptp(2, rng);
    CMat rho = random_density(2, rng);
    CMat meas = random_hermitian(2, rng);

    double vectorized =
        expectation_value(vectorize_measurement(meas), ch.ptm, vectorize_state(rho));
    double direct = trace_pair(meas, apply_kraus(ch.kraus, rho));
    CHECK(vectorized == doctest::Approx(direct).epsilon(1e-11));

    CMat lifted = apply_ptm(ch.ptm, rho);
    CHECK((lifted - apply_kraus(ch.kraus, rho)).max_abs() < 1e-12);
  }
}

TEST_CASE("composition is matrix multiplication with the later map leftmost") {
  Rng rng(33);
  RandomChannel first = random_cptp(2, rng);
  RandomChannel second = random_cptp(2, rng);

  Ptm composed = compose(second.ptm, first.ptm);

  std::vector<CMat> chained;
  for (const CMat& b : second.kraus)
    for (const CMat& a : first.kraus) chained.push_back(b * a);
  Ptm want = ptm_from_kraus(chained);
  CHECK((composed.m - want.m).max_abs() < 1e-12);
}

TEST_CASE("trace preservation and unitality flags read the right lines") {
  Mat m = Mat::identity(4);
  m(3, 0) = 0.25;  // non-unital: first column picks up a Z component
  Ptm r(2, m);
  CHECK(is_trace_preserving(r, 1e-12));
  CHECK(!is_unital(r, 1e-12));

  Mat m2 = Mat::identity(4);
  m2(0, 2) = 1e-3;  // trace leak
  CHECK(!is_trace_preserving(Ptm(2, m2), 1e-12));
  CHECK(is_unital(Ptm(2, m2), 1e-12));
}

TEST_CASE("unitary channels have orthogonal ptms and rank-one choi") {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    CMat u = haar_unitary(2, rng);
    Ptm r = ptm_from_unitary(u);
    CHECK(is_orthogonal(r, 1e-12));
    Vec eigs = hermitian_eigenvalues(choi_from_ptm(r));
    CHECK(eigs[3] == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(eigs[i]) < 1e-12);
  }
}

TEST_CASE("random cptp kraus operators are complete") {
  Rng rng(35);
  RandomChannel ch = random_cptp(2, rng);
  CMat sum(2, 2);
  for (const CMat& a : ch.kraus) sum += a.adjoint() * a;
  sum -= CMat::identity(2);
  CHECK(sum.max_abs() < 1e-13);
}

TEST_CASE("output-first choi matches a hand reshuffle") {
  Rng rng(36);
  RandomChannel ch = random_cptp(2, rng);
  CMat j = choi_output_first(ch.ptm);
  CHECK(std::abs(j.trace().real() - 2.0) < 1e-12);

  // J = sum_ij L(E_ij) (x) E_ij, assembled directly from Kraus action.
  CMat want(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j2 = 0; j2 < 2; ++j2) {
      CMat eij(2, 2);
      eij(i, j2) = 1.0;
      want += kron(apply_kraus(ch.kraus, eij), eij);
    }
  CHECK((j - want).max_abs() < 1e-11);
}
